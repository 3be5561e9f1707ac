//! Exact optimal transport on finite spaces, relative entropy, and the
//! transport-entropy inequality checker.
//!
//! The transport LP is solved by the transportation simplex: a spanning-tree
//! basis over the bipartite supply/demand graph, most-negative-reduced-cost
//! pivoting (switching to Bland's rule near the iteration cap), and dual
//! potentials read off the tree. Optimality is certified, not assumed: every
//! plan carries its primal–dual gap, and the checkers assert it below 1e-8.

use crate::convex::ConvexProfile;
use crate::infconv::inf_convolve_values;
use crate::report::{InequalityReport, TeReport, Verdict};
use crate::space::{BorelMeasure, MetricMeasureSpace, ScalarField};
use crate::{Error, Result};

/// Default absolute tolerance on transport-entropy verdicts.
pub const TE_TOLERANCE: f64 = 1e-9;
/// Certified bound on the primal–dual gap of every returned plan.
pub const LP_GAP_TOL: f64 = 1e-8;

/// A transport cost c(x, y) = φ(d(x, y)) for a cost-role profile φ.
///
/// On 1-D line spaces the entries are computed on demand from the grid
/// coordinates; fine discretizations never materialize O(n²) cost storage.
#[derive(Debug, Clone)]
pub struct CostMatrix {
    kind: CostKind,
}

#[derive(Debug, Clone)]
enum CostKind {
    Dense(Vec<Vec<f64>>),
    Line { xs: Vec<f64>, phi: ConvexProfile },
}

impl CostMatrix {
    /// Compose a cost-role profile with the space distance.
    pub fn from_cost_profile(space: &MetricMeasureSpace, phi: &ConvexProfile) -> Result<Self> {
        if !phi.is_cost_role() {
            return Err(Error::NotCostProfile(phi.describe()));
        }
        if let Some(xs) = space.line_coords() {
            return Ok(CostMatrix {
                kind: CostKind::Line {
                    xs: xs.to_vec(),
                    phi: phi.clone(),
                },
            });
        }
        let n = space.len();
        let c = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { 0.0 } else { phi.value(space.dist(i, j)) })
                    .collect()
            })
            .collect();
        Ok(CostMatrix {
            kind: CostKind::Dense(c),
        })
    }

    /// The plain distance cost c = d.
    pub fn distance(space: &MetricMeasureSpace) -> Self {
        if let Some(xs) = space.line_coords() {
            return CostMatrix {
                kind: CostKind::Line {
                    xs: xs.to_vec(),
                    phi: ConvexProfile::Identity,
                },
            };
        }
        CostMatrix {
            kind: CostKind::Dense(space.dense_dist()),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match &self.kind {
            CostKind::Dense(c) => c[i][j],
            CostKind::Line { xs, phi } => {
                if i == j {
                    0.0
                } else {
                    phi.value((xs[i] - xs[j]).abs())
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        match &self.kind {
            CostKind::Dense(c) => c.len(),
            CostKind::Line { xs, .. } => xs.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cols(&self) -> usize {
        match &self.kind {
            CostKind::Dense(c) => c.first().map_or(0, |row| row.len()),
            CostKind::Line { xs, .. } => xs.len(),
        }
    }
}

/// An optimal coupling between ν (rows) and μ (columns), together with the
/// dual potentials certifying it.
#[derive(Debug, Clone)]
pub struct TransportPlan {
    /// Coupling matrix Π with row sums ν and column sums μ.
    pub plan: Vec<Vec<f64>>,
    /// Σ Π·c, the optimal transport cost.
    pub cost: f64,
    /// Dual potentials on the ν side (feasible: u_i + v_j ≤ c_ij).
    pub row_potentials: Vec<f64>,
    /// Dual potentials on the μ side.
    pub col_potentials: Vec<f64>,
    /// primal − dual objective; ≤ 1e-8 certifies optimality.
    pub gap: f64,
    /// Simplex pivots performed.
    pub pivots: usize,
}

impl TransportPlan {
    /// Largest violation of the marginal constraints.
    pub fn marginal_residual(&self, nu: &[f64], mu: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, row) in self.plan.iter().enumerate() {
            worst = worst.max((row.iter().sum::<f64>() - nu[i]).abs());
        }
        for j in 0..mu.len() {
            let col: f64 = self.plan.iter().map(|row| row[j]).sum();
            worst = worst.max((col - mu[j]).abs());
        }
        worst
    }

    /// Dual objective Σ u·ν + Σ v·μ.
    pub fn dual_objective(&self, nu: &[f64], mu: &[f64]) -> f64 {
        let u: f64 = self
            .row_potentials
            .iter()
            .zip(nu)
            .map(|(&ui, &ai)| ui * ai)
            .sum();
        let v: f64 = self
            .col_potentials
            .iter()
            .zip(mu)
            .map(|(&vj, &bj)| vj * bj)
            .sum();
        u + v
    }
}

/// Optimal transport cost W_c(ν, μ) between a measure ν and the space
/// measure μ, by exact LP.
pub fn wasserstein(
    space: &MetricMeasureSpace,
    nu: &BorelMeasure,
    cost: &CostMatrix,
) -> Result<TransportPlan> {
    nu.check_len(space)?;
    if cost.len() != space.len() {
        return Err(Error::LengthMismatch {
            expected: space.len(),
            found: cost.len(),
        });
    }
    transport_lp(nu.weights(), space.weights(), cost)
}

/// Relative entropy H(ν|μ) = Σ ν log(ν/μ), with 0·log 0 = 0 and +∞ when ν
/// charges a μ-null point.
pub fn relative_entropy(nu: &BorelMeasure, space: &MetricMeasureSpace) -> Result<f64> {
    nu.check_len(space)?;
    let mut h = 0.0;
    for (&ni, &mi) in nu.weights().iter().zip(space.weights()) {
        if ni == 0.0 {
            continue;
        }
        if mi == 0.0 {
            return Ok(f64::INFINITY);
        }
        h += ni * (ni / mi).ln();
    }
    // Gibbs: tiny negative values are pure rounding.
    Ok(h.max(0.0))
}

/// One transport-entropy battery: W_{c_φ}(ν, μ) ≤ Φ⁻¹(H(ν|μ)) per ν.
pub fn te_check(
    space: &MetricMeasureSpace,
    phi: &ConvexProfile,
    big_phi: &ConvexProfile,
    nu_family: &[(String, BorelMeasure)],
    tol: f64,
) -> Result<Vec<TeReport>> {
    let cost = CostMatrix::from_cost_profile(space, phi)?;
    nu_family
        .iter()
        .map(|(id, nu)| {
            let plan = wasserstein(space, nu, &cost)?;
            let h = relative_entropy(nu, space)?;
            let inv_h = big_phi.generalized_inverse(h);
            let margin = inv_h - plan.cost;
            let verdict = if inv_h.is_infinite() {
                Verdict::VacuousPass
            } else if plan.cost <= inv_h + tol {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            Ok(TeReport {
                nu_id: id.clone(),
                w: plan.cost,
                h,
                inv_h,
                margin,
                verdict,
                witness_nu: if verdict == Verdict::Fail {
                    Some(nu.weights().to_vec())
                } else {
                    None
                },
            })
        })
        .collect()
}

/// Jensen weakening: φ(W_d(ν, μ)) ≤ W_{c_φ}(ν, μ).
pub fn jensen_te_weakening_check(
    space: &MetricMeasureSpace,
    phi: &ConvexProfile,
    nu: &BorelMeasure,
) -> Result<InequalityReport> {
    let w_d = wasserstein(space, nu, &CostMatrix::distance(space))?.cost;
    let w_phi = wasserstein(space, nu, &CostMatrix::from_cost_profile(space, phi)?)?.cost;
    Ok(InequalityReport::check(
        "jensen_te_weakening",
        phi.value(w_d),
        w_phi,
        1e-9,
        format!("phi(W_d) = {} with W_d = {w_d}", phi.value(w_d)),
    ))
}

/// Report of the dual-side certification of one transport solve.
#[derive(Debug, Clone)]
pub struct DualityReport {
    pub w: f64,
    /// primal − dual at the LP optimum.
    pub lp_gap: f64,
    /// ∫Q_c f dν − ∫f dμ per trial field.
    pub trial_values: Vec<f64>,
    /// max over trials of (dual value − W); ≤ 1e-9 for a pass.
    pub worst_excess: f64,
    pub pass: bool,
}

/// Certify Kantorovich duality: every trial field's dual value
/// ∫Q_c f dν − ∫f dμ stays below W_c, and the LP's own potentials attain it
/// up to the gap tolerance.
pub fn kantorovich_duality_check(
    space: &MetricMeasureSpace,
    nu: &BorelMeasure,
    cost: &CostMatrix,
    trial_fields: &[ScalarField],
) -> Result<DualityReport> {
    let plan = wasserstein(space, nu, cost)?;
    let mu = space.weights();
    let nw = nu.weights();
    let mut trial_values = Vec::with_capacity(trial_fields.len());
    let mut worst_excess = f64::NEG_INFINITY;
    for f in trial_fields {
        f.check_len(space)?;
        // Given f it is optimal to pair it with its inf-convolution.
        let qf = inf_convolve_values(space, f.values(), cost);
        let value: f64 = qf
            .iter()
            .zip(nw)
            .map(|(&q, &w)| q * w)
            .sum::<f64>()
            - f.values()
                .iter()
                .zip(mu)
                .map(|(&v, &w)| v * w)
                .sum::<f64>();
        worst_excess = worst_excess.max(value - plan.cost);
        trial_values.push(value);
    }
    let lp_gap = plan.gap;
    let pass = lp_gap.abs() <= LP_GAP_TOL && (trial_fields.is_empty() || worst_excess <= 1e-9);
    Ok(DualityReport {
        w: plan.cost,
        lp_gap,
        trial_values,
        worst_excess,
        pass,
    })
}

// ---------------------------------------------------------------------------
// Transportation simplex
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
struct BasisCell {
    r: usize,
    c: usize,
    flow: f64,
}

/// Solve min Σ Π·c over couplings with row sums `supply` and column sums
/// `demand` (both probability vectors).
pub fn transport_lp(supply: &[f64], demand: &[f64], cost: &CostMatrix) -> Result<TransportPlan> {
    let full_m = supply.len();
    let full_n = demand.len();
    if cost.len() != full_m || cost.cols() != full_n {
        return Err(Error::LengthMismatch {
            expected: full_m,
            found: cost.len(),
        });
    }
    let sa: f64 = supply.iter().sum();
    let sb: f64 = demand.iter().sum();
    if (sa - sb).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!(
            "unbalanced marginals: supply {sa} vs demand {sb}"
        )));
    }

    // Zero-mass lines ship nothing; strip them and solve the active core.
    let rows: Vec<usize> = (0..full_m).filter(|&i| supply[i] > 0.0).collect();
    let cols: Vec<usize> = (0..full_n).filter(|&j| demand[j] > 0.0).collect();
    let m = rows.len();
    let n = cols.len();
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput("empty marginals".into()));
    }
    let a: Vec<f64> = rows.iter().map(|&i| supply[i]).collect();
    let b: Vec<f64> = cols.iter().map(|&j| demand[j]).collect();
    let c: Vec<Vec<f64>> = rows
        .iter()
        .map(|&i| cols.iter().map(|&j| cost.get(i, j)).collect())
        .collect();

    let cost_scale = c
        .iter()
        .flatten()
        .fold(1.0f64, |acc, &x| acc.max(x.abs()));
    let reduced_tol = 1e-12 * cost_scale;

    let mut basis = initial_basis(&a, &b, &c);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); m + n];
    for (idx, cell) in basis.iter().enumerate() {
        adj[cell.r].push(idx);
        adj[m + cell.c].push(idx);
    }

    let max_pivots = 1000 + 10 * m * n;
    let bland_after = 500 + 5 * m * n;
    let mut pivots = 0;
    let mut u = vec![0.0; m];
    let mut v = vec![0.0; n];

    loop {
        compute_potentials(&basis, &adj, m, n, &c, &mut u, &mut v);

        // Entering arc: most negative reduced cost, Bland's rule past the
        // anti-cycling threshold.
        let mut enter: Option<(usize, usize, f64)> = None;
        'scan: for i in 0..m {
            for j in 0..n {
                let red = c[i][j] - u[i] - v[j];
                if red < -reduced_tol {
                    match enter {
                        Some((_, _, best)) if red >= best => {}
                        _ => enter = Some((i, j, red)),
                    }
                    if pivots >= bland_after {
                        break 'scan; // first negative: Bland's rule
                    }
                }
            }
        }
        let Some((ei, ej, _)) = enter else {
            break;
        };

        pivots += 1;
        if pivots > max_pivots {
            return Err(Error::InvalidInput(
                "transport simplex exceeded its pivot cap".into(),
            ));
        }

        // The tree path from row node ei to column node m+ej closes a cycle
        // with the entering arc. Arcs along the path alternate -θ, +θ, ...
        let path = tree_path(&basis, &adj, m, n, ei, m + ej);
        let mut theta = f64::INFINITY;
        let mut leave = usize::MAX;
        for (pos, &arc) in path.iter().enumerate() {
            if pos % 2 == 0 {
                let fl = basis[arc].flow;
                if fl < theta {
                    theta = fl;
                    leave = arc;
                }
            }
        }
        debug_assert!(leave != usize::MAX);
        for (pos, &arc) in path.iter().enumerate() {
            if pos % 2 == 0 {
                basis[arc].flow -= theta;
            } else {
                basis[arc].flow += theta;
            }
        }

        // Swap the leaving arc for the entering one in place.
        let old = basis[leave];
        adj[old.r].retain(|&k| k != leave);
        adj[m + old.c].retain(|&k| k != leave);
        basis[leave] = BasisCell {
            r: ei,
            c: ej,
            flow: theta,
        };
        adj[ei].push(leave);
        adj[m + ej].push(leave);
    }

    // Assemble the full-size plan and potentials.
    let mut plan = vec![vec![0.0; full_n]; full_m];
    let mut primal = 0.0;
    for cell in &basis {
        let flow = cell.flow.max(0.0);
        plan[rows[cell.r]][cols[cell.c]] = flow;
        primal += flow * c[cell.r][cell.c];
    }
    let mut row_potentials = vec![0.0; full_m];
    let mut col_potentials = vec![0.0; full_n];
    for (k, &i) in rows.iter().enumerate() {
        row_potentials[i] = u[k];
    }
    for (k, &j) in cols.iter().enumerate() {
        col_potentials[j] = v[k];
    }
    // Stripped lines carry no mass; give them the tightest feasible
    // potential so u_i + v_j ≤ c_ij holds everywhere.
    for i in 0..full_m {
        if supply[i] == 0.0 {
            row_potentials[i] = (0..full_n)
                .filter(|&j| demand[j] > 0.0)
                .map(|j| cost.get(i, j) - col_potentials[j])
                .fold(f64::INFINITY, f64::min);
        }
    }
    for j in 0..full_n {
        if demand[j] == 0.0 {
            col_potentials[j] = (0..full_m)
                .map(|i| cost.get(i, j) - row_potentials[i])
                .fold(f64::INFINITY, f64::min);
        }
    }

    let dual: f64 = row_potentials
        .iter()
        .zip(supply)
        .map(|(&ui, &ai)| ui * ai)
        .sum::<f64>()
        + col_potentials
            .iter()
            .zip(demand)
            .map(|(&vj, &bj)| vj * bj)
            .sum::<f64>();

    Ok(TransportPlan {
        plan,
        cost: primal,
        row_potentials,
        col_potentials,
        gap: primal - dual,
        pivots,
    })
}

/// Matrix-minimum initial basic feasible solution. Each allocation closes
/// exactly one supply or demand line (the final one closes both), which
/// makes the chosen cells a spanning tree of the bipartite graph.
fn initial_basis(a: &[f64], b: &[f64], c: &[Vec<f64>]) -> Vec<BasisCell> {
    let m = a.len();
    let n = b.len();
    let mut rem_a = a.to_vec();
    let mut rem_b = b.to_vec();
    let mut row_open = vec![true; m];
    let mut col_open = vec![true; n];
    let mut open_rows = m;
    let mut open_cols = n;
    let mut basis = Vec::with_capacity(m + n - 1);

    while open_rows > 0 && open_cols > 0 {
        let mut best = f64::INFINITY;
        let mut pick = (usize::MAX, usize::MAX);
        for i in 0..m {
            if !row_open[i] {
                continue;
            }
            for j in 0..n {
                if col_open[j] && c[i][j] < best {
                    best = c[i][j];
                    pick = (i, j);
                }
            }
        }
        let (i, j) = pick;
        let take = rem_a[i].min(rem_b[j]);
        basis.push(BasisCell {
            r: i,
            c: j,
            flow: take,
        });
        rem_a[i] -= take;
        rem_b[j] -= take;

        if open_rows == 1 && open_cols == 1 {
            row_open[i] = false;
            col_open[j] = false;
            open_rows -= 1;
            open_cols -= 1;
        } else if open_cols == 1 || (open_rows > 1 && rem_a[i] <= rem_b[j]) {
            row_open[i] = false;
            open_rows -= 1;
        } else {
            col_open[j] = false;
            open_cols -= 1;
        }
    }
    debug_assert_eq!(basis.len(), m + n - 1);
    basis
}

/// Potentials from the spanning tree: fix u at the root, then propagate
/// u_i + v_j = c_ij along basic arcs.
fn compute_potentials(
    basis: &[BasisCell],
    adj: &[Vec<usize>],
    m: usize,
    n: usize,
    c: &[Vec<f64>],
    u: &mut [f64],
    v: &mut [f64],
) {
    let mut seen = vec![false; m + n];
    let mut stack = vec![0usize];
    seen[0] = true;
    u[0] = 0.0;
    while let Some(node) = stack.pop() {
        for &arc in &adj[node] {
            let cell = &basis[arc];
            let (rn, cn) = (cell.r, m + cell.c);
            let next = if node == rn { cn } else { rn };
            if seen[next] {
                continue;
            }
            seen[next] = true;
            if next >= m {
                v[next - m] = c[cell.r][cell.c] - u[cell.r];
            } else {
                u[next] = c[cell.r][cell.c] - v[cell.c];
            }
            stack.push(next);
        }
    }
    debug_assert!(seen.iter().all(|&s| s), "basis is not a spanning tree");
}

/// Arc indices along the unique tree path between nodes `from` and `to`
/// (rows are nodes 0..m, columns m..m+n).
fn tree_path(
    basis: &[BasisCell],
    adj: &[Vec<usize>],
    m: usize,
    n: usize,
    from: usize,
    to: usize,
) -> Vec<usize> {
    let nodes = m + n;
    let mut parent_node = vec![usize::MAX; nodes];
    let mut parent_arc = vec![usize::MAX; nodes];
    let mut seen = vec![false; nodes];
    let mut queue = std::collections::VecDeque::new();
    seen[from] = true;
    queue.push_back(from);
    'bfs: while let Some(node) = queue.pop_front() {
        for &arc in &adj[node] {
            let cell = &basis[arc];
            let next = if node == cell.r { m + cell.c } else { cell.r };
            if seen[next] {
                continue;
            }
            seen[next] = true;
            parent_node[next] = node;
            parent_arc[next] = arc;
            if next == to {
                break 'bfs;
            }
            queue.push_back(next);
        }
    }
    debug_assert!(seen[to], "tree path not found: basis disconnected");
    let mut path = Vec::new();
    let mut node = to;
    while node != from {
        path.push(parent_arc[node]);
        node = parent_node[node];
    }
    path.reverse();
    path
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{discretize_line, random_space, LineDensity};
    use proptest::prelude::*;

    fn two_point_space() -> MetricMeasureSpace {
        MetricMeasureSpace::new(
            vec!["a".into(), "b".into()],
            vec![vec![0.0, 1.0], vec![1.0, 0.0]],
            vec![0.5, 0.5],
            None,
        )
        .unwrap()
    }

    #[test]
    fn identity_coupling_has_zero_cost() {
        let s = random_space(8, 3).unwrap();
        let nu = BorelMeasure::new(s.weights().to_vec()).unwrap();
        let plan = wasserstein(&s, &nu, &CostMatrix::distance(&s)).unwrap();
        assert!(plan.cost.abs() < 1e-12);
        assert!(plan.gap.abs() < LP_GAP_TOL);
    }

    #[test]
    fn two_point_cost_by_hand() {
        // Move 0.3 of mass across distance 1.
        let s = two_point_space();
        let nu = BorelMeasure::new(vec![0.8, 0.2]).unwrap();
        let plan = wasserstein(&s, &nu, &CostMatrix::distance(&s)).unwrap();
        assert!((plan.cost - 0.3).abs() < 1e-12);
        assert!(plan.marginal_residual(nu.weights(), s.weights()) < 1e-10);
    }

    #[test]
    fn quadratic_cost_rescales_two_point_example() {
        let s = two_point_space();
        let nu = BorelMeasure::new(vec![0.8, 0.2]).unwrap();
        let cost =
            CostMatrix::from_cost_profile(&s, &ConvexProfile::quadratic(1.0)).unwrap();
        let plan = wasserstein(&s, &nu, &cost).unwrap();
        // Same coupling, each moved unit now costs φ(1) = 1/2.
        assert!((plan.cost - 0.15).abs() < 1e-12);
    }

    /// CDF formula for W_d on a line: ∫|F_ν − F_μ|, an oracle independent
    /// of the LP.
    fn line_w1_oracle(xs: &[f64], nu: &[f64], mu: &[f64]) -> f64 {
        let mut acc = 0.0;
        let mut fn_ = 0.0;
        let mut fm = 0.0;
        for k in 0..xs.len() - 1 {
            fn_ += nu[k];
            fm += mu[k];
            acc += (fn_ - fm).abs() * (xs[k + 1] - xs[k]);
        }
        acc
    }

    #[test]
    fn lp_matches_line_cdf_oracle() {
        use rand::{Rng, SeedableRng};
        let (space, xs) = discretize_line(LineDensity::Gaussian, 2.0, 0.25).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..10 {
            let mut w: Vec<f64> = (0..space.len()).map(|_| rng.gen::<f64>()).collect();
            let t: f64 = w.iter().sum();
            w.iter_mut().for_each(|x| *x /= t);
            let resid = 1.0 - w.iter().sum::<f64>();
            w[0] += resid;
            let nu = BorelMeasure::new(w.clone()).unwrap();
            let plan = wasserstein(&space, &nu, &CostMatrix::distance(&space)).unwrap();
            let oracle = line_w1_oracle(&xs, &w, space.weights());
            assert!(
                (plan.cost - oracle).abs() < 1e-10,
                "LP {} vs CDF {oracle}",
                plan.cost
            );
        }
    }

    #[test]
    fn relative_entropy_hand_values() {
        let s = two_point_space();
        assert!(
            relative_entropy(&BorelMeasure::new(vec![0.5, 0.5]).unwrap(), &s)
                .unwrap()
                .abs()
                < 1e-15
        );
        let h = relative_entropy(&BorelMeasure::point_mass(2, 0), &s).unwrap();
        assert!((h - 2f64.ln()).abs() < 1e-15);
        let h = relative_entropy(&BorelMeasure::new(vec![0.75, 0.25]).unwrap(), &s).unwrap();
        let expected = 0.75 * (1.5f64).ln() + 0.25 * (0.5f64).ln();
        assert!((h - expected).abs() < 1e-15);
    }

    #[test]
    fn te_check_point_mass_closed_form() {
        // δ_a against the fair two-point space with c = d and Φ = Id:
        // W = d·μ(b) = 1/2 and H = log(1/μ(a)) = log 2, so the bound holds.
        let s = two_point_space();
        let family = vec![("delta_a".to_string(), BorelMeasure::point_mass(2, 0))];
        let reports = te_check(
            &s,
            &ConvexProfile::Identity,
            &ConvexProfile::Identity,
            &family,
            TE_TOLERANCE,
        )
        .unwrap();
        let r = &reports[0];
        assert!((r.w - 0.5).abs() < 1e-12);
        assert!((r.h - 2f64.ln()).abs() < 1e-15);
        assert!((r.inv_h - 2f64.ln()).abs() < 1e-15);
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn te_check_nu_equals_mu_tight_profile() {
        let s = random_space(6, 9).unwrap();
        let family = vec![(
            "mu".to_string(),
            BorelMeasure::new(s.weights().to_vec()).unwrap(),
        )];
        let reports = te_check(
            &s,
            &ConvexProfile::Identity,
            &ConvexProfile::quadratic(0.5),
            &family,
            TE_TOLERANCE,
        )
        .unwrap();
        assert!((reports[0].w).abs() < 1e-12);
        assert!((reports[0].inv_h).abs() < 1e-9);
        assert_eq!(reports[0].verdict, Verdict::Pass);
    }

    #[test]
    fn non_tight_profile_loosens_the_bound_at_zero_entropy() {
        // Φ(0) = −M < 0 gives Φ⁻¹(0) = M/slope > 0.
        let s = two_point_space();
        let family = vec![(
            "mu".to_string(),
            BorelMeasure::new(s.weights().to_vec()).unwrap(),
        )];
        let reports = te_check(
            &s,
            &ConvexProfile::Identity,
            &ConvexProfile::linear_offset(1.0, 2.0),
            &family,
            TE_TOLERANCE,
        )
        .unwrap();
        assert!((reports[0].inv_h - 0.5).abs() < 1e-12);
        assert_eq!(reports[0].verdict, Verdict::Pass);
    }

    #[test]
    fn jensen_weakening_two_point() {
        let s = two_point_space();
        let nu = BorelMeasure::new(vec![0.8, 0.2]).unwrap();
        let r =
            jensen_te_weakening_check(&s, &ConvexProfile::quadratic(1.0), &nu).unwrap();
        // φ(0.3) = 0.045 against W_{c_φ} = 0.15.
        assert!((r.lhs - 0.045).abs() < 1e-12);
        assert!((r.rhs - 0.15).abs() < 1e-12);
        assert!(r.verdict.passed());
    }

    #[test]
    fn duality_check_constant_and_random_fields() {
        use rand::{Rng, SeedableRng};
        let s = random_space(15, 3).unwrap();
        let nu = {
            let mut w = s.weights().to_vec();
            w[0] += 0.3;
            let t: f64 = w.iter().sum();
            w.iter_mut().for_each(|x| *x /= t);
            let resid = 1.0 - w.iter().sum::<f64>();
            w[0] += resid;
            BorelMeasure::new(w).unwrap()
        };
        let cost = CostMatrix::distance(&s);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let mut fields = vec![ScalarField::unrestricted(vec![2.5; 15]).unwrap()];
        for _ in 0..20 {
            fields.push(
                ScalarField::unrestricted((0..15).map(|_| rng.gen_range(-3.0..3.0)).collect())
                    .unwrap(),
            );
        }
        let report = kantorovich_duality_check(&s, &nu, &cost, &fields).unwrap();
        assert!(report.pass, "gap {} excess {}", report.lp_gap, report.worst_excess);
        // A constant field has dual value 0 ≤ W.
        assert!(report.trial_values[0].abs() < 1e-12);
        assert!(report.w >= 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn lp_certificates_on_random_instances(seed in 0u64..300, n in 2usize..14) {
            use rand::{Rng, SeedableRng};
            let s = random_space(n, seed).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0xc0ffee);
            let mut w: Vec<f64> = (0..n).map(|_| rng.gen::<f64>().max(1e-9)).collect();
            if rng.gen::<bool>() {
                // Sparse ν with genuine zeros.
                for k in 0..n / 2 {
                    w[k] = 0.0;
                }
            }
            let t: f64 = w.iter().sum();
            w.iter_mut().for_each(|x| *x /= t);
            let resid = 1.0 - w.iter().sum::<f64>();
            let imax = (0..n).max_by(|&a, &b| w[a].partial_cmp(&w[b]).unwrap()).unwrap();
            w[imax] += resid;
            let nu = BorelMeasure::new(w.clone()).unwrap();

            let plan = wasserstein(&s, &nu, &CostMatrix::distance(&s)).unwrap();
            prop_assert!(plan.gap.abs() <= LP_GAP_TOL);
            prop_assert!(plan.marginal_residual(nu.weights(), s.weights()) <= 1e-10);
            prop_assert!(plan.cost >= -1e-12);
            // Dual feasibility of the certificate.
            for i in 0..n {
                for j in 0..n {
                    prop_assert!(
                        plan.row_potentials[i] + plan.col_potentials[j]
                            <= s.dist(i, j) + 1e-9
                    );
                }
            }
        }

        #[test]
        fn cost_monotonicity(seed in 0u64..100) {
            use rand::{Rng, SeedableRng};
            let s = random_space(8, seed).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0xfeed);
            let mut w: Vec<f64> = (0..8).map(|_| rng.gen::<f64>().max(1e-6)).collect();
            let t: f64 = w.iter().sum();
            w.iter_mut().for_each(|x| *x /= t);
            let resid = 1.0 - w.iter().sum::<f64>();
            w[0] += resid;
            let nu = BorelMeasure::new(w).unwrap();
            // Pointwise c ≤ c' forces W_c ≤ W_{c'}.
            let c1 = CostMatrix::from_cost_profile(&s, &ConvexProfile::linear_offset(0.0, 1.0)).unwrap();
            let c2 = CostMatrix::from_cost_profile(&s, &ConvexProfile::linear_offset(0.0, 2.5)).unwrap();
            let w1 = wasserstein(&s, &nu, &c1).unwrap().cost;
            let w2 = wasserstein(&s, &nu, &c2).unwrap().cost;
            prop_assert!(w1 <= w2 + 1e-10);
            prop_assert!((2.5 * w1 - w2).abs() <= 1e-9); // linear costs scale exactly
        }

        #[test]
        fn gibbs_inequality(seed in 0u64..200) {
            use rand::{Rng, SeedableRng};
            let s = random_space(10, seed).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0xaaaa);
            let mut w: Vec<f64> = (0..10).map(|_| rng.gen::<f64>().max(1e-9)).collect();
            let t: f64 = w.iter().sum();
            w.iter_mut().for_each(|x| *x /= t);
            let resid = 1.0 - w.iter().sum::<f64>();
            w[0] += resid;
            let nu = BorelMeasure::new(w.clone()).unwrap();
            let h = relative_entropy(&nu, &s).unwrap();
            prop_assert!(h >= 0.0);
            let max_diff = w.iter().zip(s.weights()).fold(0.0f64, |acc, (&a, &b)| acc.max((a - b).abs()));
            if max_diff > 1e-6 {
                prop_assert!(h > 0.0);
            }
        }

        #[test]
        fn zero_cost_iff_equal_measures(seed in 0u64..100) {
            let s = random_space(7, seed).unwrap();
            let nu = BorelMeasure::new(s.weights().to_vec()).unwrap();
            let plan = wasserstein(&s, &nu, &CostMatrix::distance(&s)).unwrap();
            prop_assert!(plan.cost.abs() < 1e-12);
            // Perturbed measure must have strictly positive cost.
            let mut w = s.weights().to_vec();
            let shift = (w[0] * 0.5).min(0.1);
            w[0] -= shift;
            w[1] += shift;
            let nu2 = BorelMeasure::new(w).unwrap();
            let plan2 = wasserstein(&s, &nu2, &CostMatrix::distance(&s)).unwrap();
            prop_assert!(plan2.cost > 1e-9);
        }
    }
}
