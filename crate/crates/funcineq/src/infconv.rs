//! The infimum-convolution operator Q_c and the inf-convolution inequality
//! machinery: the λ-grid checker, its reduction to tail bounds through
//! Markov–Chebyshev, the two-route composition check, and the instance-wise
//! equivalence smoke test against the transport-entropy formulation.
//!
//! All exponential integrals run in log-domain; λ·Q_c f can span hundreds of
//! log-units on exponential grids and must not overflow.

use crate::convex::{compose, conjugate_of_composition, ConvexProfile};
use crate::functionals::lipschitz_constant;
use crate::numeric::{log_space, log_sum_exp_by, maximize_concave_ray};
use crate::report::{IcLambdaRecord, IcReport, Verdict};
use crate::space::{BorelMeasure, MetricMeasureSpace, ScalarField};
use crate::transport::{relative_entropy, wasserstein, CostMatrix};
use crate::{Error, Result};

/// Default absolute tolerance (log-scale) for inf-convolution verdicts on
/// exact finite spaces.
pub const IC_TOLERANCE: f64 = 1e-9;

/// Raw inf-convolution kernel: (Q_c f)(xᵢ) = min_j (fⱼ + c(xᵢ, xⱼ)), O(n²).
pub fn inf_convolve_values(
    space: &MetricMeasureSpace,
    values: &[f64],
    cost: &CostMatrix,
) -> Vec<f64> {
    let n = space.len();
    debug_assert_eq!(values.len(), n);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| values[j] + cost.get(i, j))
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

/// Cost-smoothed envelope of a field.
pub fn inf_convolve(
    space: &MetricMeasureSpace,
    f: &ScalarField,
    cost: &CostMatrix,
) -> Result<ScalarField> {
    f.check_len(space)?;
    if cost.len() != space.len() {
        return Err(Error::LengthMismatch {
            expected: space.len(),
            found: cost.len(),
        });
    }
    ScalarField::unrestricted(inf_convolve_values(space, f.values(), cost))
}

/// Default λ grid: 40 log-spaced points inside (0, S(Φ)), capped at 1e3,
/// plus one sentinel beyond S when S is finite so the vacuous regime is
/// exercised once.
pub fn auto_lambda_grid(big_phi: &ConvexProfile) -> Vec<f64> {
    let rate = big_phi.growth_rate();
    let hi = if rate.is_finite() {
        0.99 * rate
    } else {
        1e3
    };
    let hi = hi.min(1e3);
    let lo = (1e-3f64).min(hi / 100.0);
    let mut grid = log_space(lo, hi, 40);
    if rate.is_finite() {
        grid.push(1.05 * rate);
    }
    grid
}

/// Check ∫exp(λ·Q_{c_φ} f) dμ ≤ exp(λ∫f dμ + Φ*(λ)) over a λ grid,
/// comparing in log-domain. Rows with Φ*(λ) = +∞ are flagged vacuous.
pub fn ic_check(
    space: &MetricMeasureSpace,
    phi: &ConvexProfile,
    big_phi: &ConvexProfile,
    f: &ScalarField,
    lambda_grid: &[f64],
    tol: f64,
) -> Result<IcReport> {
    f.check_len(space)?;
    let cost = CostMatrix::from_cost_profile(space, phi)?;
    let qf = inf_convolve_values(space, f.values(), &cost);
    ic_check_precomputed(space, big_phi, f.values(), &qf, lambda_grid, tol, "field")
}

/// Same check with the inf-convolution already in hand.
fn ic_check_precomputed(
    space: &MetricMeasureSpace,
    big_phi: &ConvexProfile,
    values: &[f64],
    qf: &[f64],
    lambda_grid: &[f64],
    tol: f64,
    field_id: &str,
) -> Result<IcReport> {
    if lambda_grid.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::OutOfRange("λ grid must be positive".into()));
    }
    let n = space.len();
    let ln_mu: Vec<f64> = space.weights().iter().map(|w| w.ln()).collect();
    let mean = space.mean(values);
    let rows = lambda_grid
        .iter()
        .map(|&lambda| {
            let log_lhs = log_sum_exp_by(n, |i| ln_mu[i] + lambda * qf[i]);
            let conj = big_phi.legendre(lambda);
            let rhs = lambda * mean + conj;
            let margin = rhs - log_lhs;
            let verdict = if conj.is_infinite() {
                Verdict::VacuousPass
            } else if log_lhs <= rhs + tol {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            IcLambdaRecord {
                lambda,
                log_lhs,
                rhs,
                margin,
                verdict,
            }
        })
        .collect();
    Ok(IcReport::from_rows(field_id, rows))
}

/// One row of the tail-bound reduction at threshold t.
#[derive(Debug, Clone)]
pub struct ConcentrationRow {
    pub t: f64,
    /// Exact tail μ{f ≥ ∫f dμ + t}.
    pub tail: f64,
    /// Numeric inf over λ of exp(Φ*(λ) − λt).
    pub inf_bound: f64,
    /// exp(−Φ(t)), the closed form the inf must collapse to.
    pub closed_bound: f64,
    pub tail_ok: bool,
    pub agreement_ok: bool,
}

#[derive(Debug, Clone)]
pub struct ConcentrationReport {
    pub rows: Vec<ConcentrationRow>,
    pub lipschitz_constant: f64,
    pub pass: bool,
}

/// Reduce a Laplace-transform bound to tail bounds: for 1-Lipschitz f the
/// exact tail must sit below inf_λ exp(Φ*(λ) − λt), and that infimum must
/// equal exp(−Φ(t)) by conjugate duality.
pub fn ic_to_concentration(
    space: &MetricMeasureSpace,
    big_phi: &ConvexProfile,
    f: &ScalarField,
    t_grid: &[f64],
) -> Result<ConcentrationReport> {
    let lip = lipschitz_constant(space, f)?;
    if lip > 1.0 + 1e-9 {
        return Err(Error::OutOfRange(format!(
            "tail reduction needs a 1-Lipschitz field, constant is {lip}"
        )));
    }
    let mean = space.mean(f.values());
    let rows = t_grid
        .iter()
        .map(|&t| {
            let tail: f64 = space
                .weights()
                .iter()
                .zip(f.values())
                .filter(|(_, &v)| v >= mean + t - 1e-12)
                .map(|(&w, _)| w)
                .sum();
            let inf_bound = laplace_tail_bound(big_phi, t);
            let closed_bound = (-big_phi.value(t)).exp();
            let tail_ok = tail <= inf_bound + 1e-12;
            let agreement_ok =
                (inf_bound - closed_bound).abs() <= 1e-6 * closed_bound.max(1e-300);
            ConcentrationRow {
                t,
                tail,
                inf_bound,
                closed_bound,
                tail_ok,
                agreement_ok,
            }
        })
        .collect::<Vec<_>>();
    let pass = rows.iter().all(|r| r.tail_ok && r.agreement_ok);
    Ok(ConcentrationReport {
        rows,
        lipschitz_constant: lip,
        pass,
    })
}

/// inf_{λ>0} exp(Φ*(λ) − λt), evaluated by golden search over the finite
/// domain of Φ*.
pub fn laplace_tail_bound(big_phi: &ConvexProfile, t: f64) -> f64 {
    let rate = big_phi.growth_rate();
    let exponent = |lambda: f64| big_phi.legendre(lambda) - lambda * t;
    let min_exp = if rate.is_finite() {
        let (_, neg_max) = crate::numeric::golden_max(|l| -exponent(l), 0.0, rate, 1e-12, 300);
        -neg_max
    } else {
        let (_, neg_max) = maximize_concave_ray(|l| -exponent(l), 1.0, 1e12, 1e-12);
        -neg_max
    };
    min_exp.exp()
}

/// One λ row of the two-route composition check.
#[derive(Debug, Clone)]
pub struct ReductionRow {
    pub lambda: f64,
    pub log_lhs: f64,
    /// λ∫f + Ψ*(λ) with Ψ* from the composed profile's direct conjugate.
    pub direct_rhs: f64,
    /// λ∫f + inf_α{Φ*(α) + αφ*(λ/α)}, the α-optimization route.
    pub alpha_rhs: f64,
    pub direct_margin: f64,
    pub alpha_margin: f64,
    pub routes_agree: bool,
}

#[derive(Debug, Clone)]
pub struct ReductionReport {
    pub rows: Vec<ReductionRow>,
    pub pass: bool,
}

/// Verify the (Id, Φ∘φ) inequality for a 1-Lipschitz field along both
/// routes: the direct conjugate of the composition, and the α-optimized
/// application of the (φ, Φ) inequality to (λ/α)·f. The two right-hand
/// sides must also agree with each other.
pub fn ic_reduction_check(
    space: &MetricMeasureSpace,
    phi: &ConvexProfile,
    big_phi: &ConvexProfile,
    f: &ScalarField,
    lambda_grid: &[f64],
    tol: f64,
) -> Result<ReductionReport> {
    let lip = lipschitz_constant(space, f)?;
    if lip > 1.0 + 1e-9 {
        return Err(Error::OutOfRange(format!(
            "reduction check needs a 1-Lipschitz field, constant is {lip}"
        )));
    }
    let psi = compose(big_phi, phi)?;
    let qd = inf_convolve_values(space, f.values(), &CostMatrix::distance(space));
    let n = space.len();
    let ln_mu: Vec<f64> = space.weights().iter().map(|w| w.ln()).collect();
    let mean = space.mean(f.values());
    let mut rows = Vec::with_capacity(lambda_grid.len());
    for &lambda in lambda_grid {
        let log_lhs = log_sum_exp_by(n, |i| ln_mu[i] + lambda * qd[i]);
        let direct_conj = psi.legendre(lambda);
        let alpha_conj = conjugate_of_composition(big_phi, phi, lambda);
        let direct_rhs = lambda * mean + direct_conj;
        let alpha_rhs = lambda * mean + alpha_conj;
        let routes_agree = if direct_conj.is_infinite() || alpha_conj.is_infinite() {
            direct_conj.is_infinite() == alpha_conj.is_infinite()
        } else {
            (direct_conj - alpha_conj).abs() <= 1e-6 * (1.0 + direct_conj.abs())
        };
        rows.push(ReductionRow {
            lambda,
            log_lhs,
            direct_rhs,
            alpha_rhs,
            direct_margin: direct_rhs - log_lhs,
            alpha_margin: alpha_rhs - log_lhs,
            routes_agree,
        });
    }
    let pass = rows.iter().all(|r| {
        r.routes_agree
            && (r.direct_rhs.is_infinite() || r.direct_margin >= -tol)
            && (r.alpha_rhs.is_infinite() || r.alpha_margin >= -tol)
    });
    Ok(ReductionReport { rows, pass })
}

/// Instance-wise cross-check of the inf-convolution and transport-entropy
/// formulations on finite families.
#[derive(Debug, Clone)]
pub struct EquivalenceSmokeReport {
    /// (f, ν) Kantorovich-chain instances checked: ∫Q f dν − ∫f dμ ≤ W(ν).
    pub chain_checks: usize,
    pub chain_violations: Vec<String>,
    /// Tilted-measure instances checked in the TE ⇒ IC direction.
    pub tilted_checks: usize,
    /// Worst deviation in the variational identity
    /// log∫e^{λQf}dμ = λ∫Qf dν_t − H(ν_t|μ) at the tilted measure.
    pub tilt_identity_worst: f64,
    /// Worst violation of λΦ⁻¹(y) − y ≤ Φ*(λ) over tested (λ, H) pairs.
    pub fenchel_link_worst: f64,
    /// Instances where one formulation passed and the other failed.
    pub implication_violations: Vec<String>,
    pub pass: bool,
}

/// Cross-check the two formulations on the given families.
///
/// TE ⇒ IC side: for every (f, λ) the tilted measure ν ∝ e^{λQf}·μ
/// maximizes the variational identity; a passing TE instance at that ν
/// forces the IC instance at (f, λ) to pass.
/// IC ⇒ TE side: for every ν the optimal Kantorovich potential extracted
/// from the LP is the extremal f; the IC instances on the λ grid force
/// W(ν) ≤ min_λ (H + Φ*(λ))/λ, which collapses to Φ⁻¹(H).
pub fn prop_equivalence_smoke(
    space: &MetricMeasureSpace,
    phi: &ConvexProfile,
    big_phi: &ConvexProfile,
    nu_family: &[(String, BorelMeasure)],
    f_family: &[ScalarField],
    lambda_grid: &[f64],
    tol: f64,
) -> Result<EquivalenceSmokeReport> {
    let cost = CostMatrix::from_cost_profile(space, phi)?;
    let n = space.len();
    let ln_mu: Vec<f64> = space.weights().iter().map(|w| w.ln()).collect();

    let mut chain_checks = 0;
    let mut chain_violations = Vec::new();
    let mut tilted_checks = 0;
    let mut tilt_identity_worst: f64 = 0.0;
    let mut fenchel_link_worst: f64 = 0.0;
    let mut implication_violations = Vec::new();

    // Per-ν transport data.
    struct NuData {
        w: f64,
        h: f64,
        te_margin: f64,
        potential: Vec<f64>,
    }
    let mut nu_data = Vec::with_capacity(nu_family.len());
    for (_, nu) in nu_family {
        let plan = wasserstein(space, nu, &cost)?;
        let h = relative_entropy(nu, space)?;
        let inv_h = big_phi.generalized_inverse(h);
        // Kantorovich potential on the μ side: f = −v is dual-feasible and
        // optimal.
        let potential: Vec<f64> = plan.col_potentials.iter().map(|v| -v).collect();
        nu_data.push(NuData {
            w: plan.cost,
            h,
            te_margin: inv_h - plan.cost,
            potential,
        });
    }

    // Universal links that back both implication directions.
    for data in &nu_data {
        for &lambda in lambda_grid {
            let conj = big_phi.legendre(lambda);
            if conj.is_infinite() {
                continue;
            }
            let inv_h = big_phi.generalized_inverse(data.h);
            if inv_h.is_finite() && data.h >= big_phi.value(0.0) {
                fenchel_link_worst =
                    fenchel_link_worst.max(lambda * inv_h - data.h - conj);
            }
        }
    }

    // Kantorovich chain for every (f, ν) pair.
    for (fi, f) in f_family.iter().enumerate() {
        f.check_len(space)?;
        let qf = inf_convolve_values(space, f.values(), &cost);
        let mean_f = space.mean(f.values());
        for ((id, nu), data) in nu_family.iter().zip(&nu_data) {
            chain_checks += 1;
            let dual_val: f64 = qf
                .iter()
                .zip(nu.weights())
                .map(|(&q, &w)| q * w)
                .sum::<f64>()
                - mean_f;
            if dual_val > data.w + 1e-9 {
                chain_violations.push(format!(
                    "field {fi} against {id}: dual value {dual_val} exceeds W = {}",
                    data.w
                ));
            }
        }

        // TE ⇒ IC through the tilted measure.
        for &lambda in lambda_grid {
            let conj = big_phi.legendre(lambda);
            if conj.is_infinite() {
                continue;
            }
            tilted_checks += 1;
            let log_lhs = log_sum_exp_by(n, |i| ln_mu[i] + lambda * qf[i]);
            let ic_margin = lambda * mean_f + conj - log_lhs;

            // Tilted measure ν ∝ exp(λ·Qf)·μ, assembled in log-domain.
            let mut tw: Vec<f64> = (0..n)
                .map(|i| (ln_mu[i] + lambda * qf[i] - log_lhs).exp())
                .collect();
            let total: f64 = tw.iter().sum();
            tw.iter_mut().for_each(|x| *x /= total);
            let imax = (0..n)
                .max_by(|&a, &b| tw[a].partial_cmp(&tw[b]).unwrap())
                .unwrap();
            tw[imax] += 1.0 - tw.iter().sum::<f64>();
            let nu_t = BorelMeasure::new(tw)?;

            // Variational identity at the maximizer.
            let h_t = relative_entropy(&nu_t, space)?;
            let mean_qf_t: f64 = qf
                .iter()
                .zip(nu_t.weights())
                .map(|(&q, &w)| q * w)
                .sum();
            tilt_identity_worst = tilt_identity_worst
                .max((log_lhs - (lambda * mean_qf_t - h_t)).abs() / (1.0 + log_lhs.abs()));

            let plan_t = wasserstein(space, &nu_t, &cost)?;
            let te_margin = big_phi.generalized_inverse(h_t) - plan_t.cost;
            if te_margin >= 0.0 && ic_margin < -1e-7 {
                implication_violations.push(format!(
                    "field {fi}, λ={lambda}: TE passes at the tilt (margin {te_margin}) \
                     but IC fails (margin {ic_margin})"
                ));
            }
        }
    }

    // IC ⇒ TE through the optimal potentials.
    for ((id, _), data) in nu_family.iter().zip(&nu_data) {
        let qf = inf_convolve_values(space, &data.potential, &cost);
        let mean_f: f64 = space.mean(&data.potential);
        let (_, lambda_hat) = inverse_via_conjugate_bound(big_phi, data.h);
        let mut lambdas: Vec<f64> = lambda_grid.to_vec();
        if lambda_hat > 0.0 && lambda_hat.is_finite() {
            lambdas.push(lambda_hat);
        }
        let mut all_pass = true;
        let mut any_checked = false;
        let mut w_bound = f64::INFINITY;
        for &lambda in &lambdas {
            let conj = big_phi.legendre(lambda);
            if conj.is_infinite() {
                continue;
            }
            any_checked = true;
            let log_lhs = log_sum_exp_by(n, |i| ln_mu[i] + lambda * qf[i]);
            if log_lhs > lambda * mean_f + conj + tol {
                all_pass = false;
                break;
            }
            w_bound = w_bound.min((data.h + conj) / lambda);
        }
        if any_checked && all_pass && data.te_margin < -1e-6 {
            implication_violations.push(format!(
                "{id}: IC passes on the potential family (W bound {w_bound}) \
                 but TE fails with margin {}",
                data.te_margin
            ));
        }
    }

    let pass = chain_violations.is_empty()
        && implication_violations.is_empty()
        && tilt_identity_worst <= 1e-9
        && fenchel_link_worst <= 1e-9;
    Ok(EquivalenceSmokeReport {
        chain_checks,
        chain_violations,
        tilted_checks,
        tilt_identity_worst,
        fenchel_link_worst,
        implication_violations,
        pass,
    })
}

/// inf_{λ>0} (y + Φ*(λ))/λ together with its argmin — the conjugate-side
/// route to the generalized inverse Φ⁻¹(y).
pub fn inverse_via_conjugate_bound(big_phi: &ConvexProfile, y: f64) -> (f64, f64) {
    let rate = big_phi.growth_rate();
    let hi = if rate.is_finite() { rate } else { 1e9 };
    let objective = |lambda: f64| {
        let conj = big_phi.legendre(lambda);
        if conj.is_infinite() {
            f64::INFINITY
        } else {
            (y + conj) / lambda
        }
    };
    let grid = log_space(1e-9, hi, 240);
    let mut best = f64::INFINITY;
    let mut best_k = 0;
    for (k, &l) in grid.iter().enumerate() {
        let v = objective(l);
        if v < best {
            best = v;
            best_k = k;
        }
    }
    let lo = grid[best_k.saturating_sub(1)].ln();
    let hi_l = grid[(best_k + 1).min(grid.len() - 1)].ln();
    let (arg, refined) =
        crate::numeric::golden_min(|u: f64| objective(u.exp()), lo, hi_l, 1e-13, 300);
    if refined < best {
        (refined.max(0.0), arg.exp())
    } else {
        (best.max(0.0), grid[best_k])
    }
}
