//! Convex growth profiles and their Legendre–Fenchel calculus.
//!
//! A [`ConvexProfile`] is a convex non-decreasing function on ℝ₊. Profiles
//! come in two roles: cost profiles φ (non-negative, φ(0) = 0, composed with
//! the distance to build transport costs) and concentration profiles Φ
//! (allowed to dip below zero at 0). Everything downstream — tail bounds,
//! transport-entropy right-hand sides, moment-comparison constants — is a
//! conjugate, a composition or a generalized inverse of these.
//!
//! Conjugates are extended-real: `f64::INFINITY` is returned exactly for
//! slopes beyond the growth rate `S = lim Ψ(t)/t`, never approximated by a
//! large float. Closed-form catalog entries get exact conjugates; grid and
//! composed profiles are conjugated numerically (knot supremum plus a
//! golden-section refinement of the bracketing interval).

use serde::{Deserialize, Serialize};

use crate::numeric::{bisect_last_true, golden_max, golden_min, log_space, maximize_concave_ray};
use crate::{Error, Result};

/// Tolerance under which a profile value at 0 counts as exactly 0.
pub const TIGHTNESS_TOL: f64 = 1e-12;

/// The Huber-type reference profile: t²/2 up to the kink at 1, then t − ½.
///
/// Quadratic near the origin, linear with unit slope past it; both branches
/// meet with matching value and derivative at t = 1.
pub fn phi1(t: f64) -> f64 {
    if t <= 1.0 {
        0.5 * t * t
    } else {
        t - 0.5
    }
}

/// A validated grid profile: sampled values of a convex non-decreasing
/// function on `[0, T_max]`, extended past the last knot by its final slope.
#[derive(Debug, Clone, PartialEq)]
pub struct GridProfile {
    knots: Vec<f64>,
    values: Vec<f64>,
    final_slope: f64,
}

impl GridProfile {
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 || knots.len() != values.len() {
            return Err(Error::NotConvex(format!(
                "grid needs at least two knots and matching values, got {} and {}",
                knots.len(),
                values.len()
            )));
        }
        if knots[0].abs() > TIGHTNESS_TOL {
            return Err(Error::NotConvex(format!(
                "grid domain must start at 0, got {}",
                knots[0]
            )));
        }
        let mut prev_slope = f64::NEG_INFINITY;
        for k in 0..knots.len() - 1 {
            let dt = knots[k + 1] - knots[k];
            if !(dt > 0.0) {
                return Err(Error::NotConvex(format!(
                    "knots must be strictly increasing, offence at index {k}"
                )));
            }
            let slope = (values[k + 1] - values[k]) / dt;
            if slope < -TIGHTNESS_TOL {
                return Err(Error::NotConvex(format!(
                    "values decrease on segment {k} (slope {slope})"
                )));
            }
            if slope < prev_slope - 1e-12 * (1.0 + prev_slope.abs()) {
                return Err(Error::NotConvex(format!(
                    "slope drops from {prev_slope} to {slope} at segment {k}"
                )));
            }
            prev_slope = slope;
        }
        let final_slope = prev_slope.max(0.0);
        Ok(Self {
            knots,
            values,
            final_slope,
        })
    }

    fn value(&self, t: f64) -> f64 {
        let last = self.knots.len() - 1;
        if t >= self.knots[last] {
            return self.values[last] + self.final_slope * (t - self.knots[last]);
        }
        if t <= self.knots[0] {
            return self.values[0];
        }
        let k = match self
            .knots
            .binary_search_by(|probe| probe.partial_cmp(&t).unwrap())
        {
            Ok(exact) => return self.values[exact],
            Err(ins) => ins - 1,
        };
        let frac = (t - self.knots[k]) / (self.knots[k + 1] - self.knots[k]);
        self.values[k] + frac * (self.values[k + 1] - self.values[k])
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// A convex non-decreasing profile on ℝ₊.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexProfile {
    /// t ↦ t.
    Identity,
    /// t ↦ λ·t²/2.
    Quadratic { lambda: f64 },
    /// t ↦ φ₁(√λ·t), quadratic near 0 saturating to slope √λ.
    Phi1Scaled { lambda: f64 },
    /// t ↦ −offset + slope·t (the non-tight linear profile).
    LinearOffset { offset: f64, slope: f64 },
    /// Sampled values on a knot grid.
    Grid(GridProfile),
    /// Lazy composition outer ∘ inner produced by [`compose`].
    Composed {
        outer: Box<ConvexProfile>,
        inner: Box<ConvexProfile>,
    },
}

impl ConvexProfile {
    pub fn identity() -> Self {
        ConvexProfile::Identity
    }

    pub fn quadratic(lambda: f64) -> Self {
        assert!(lambda > 0.0, "quadratic coefficient must be positive");
        ConvexProfile::Quadratic { lambda }
    }

    pub fn phi1_scaled(lambda: f64) -> Self {
        assert!(lambda > 0.0, "phi1 scale must be positive");
        ConvexProfile::Phi1Scaled { lambda }
    }

    /// The non-tight profile t ↦ −offset + slope·t.
    pub fn linear_offset(offset: f64, slope: f64) -> Self {
        assert!(offset >= 0.0, "offset must be non-negative");
        assert!(slope > 0.0, "slope must be positive");
        ConvexProfile::LinearOffset { offset, slope }
    }

    pub fn grid(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Ok(ConvexProfile::Grid(GridProfile::new(knots, values)?))
    }

    /// Evaluate the profile at `t ≥ 0`.
    pub fn value(&self, t: f64) -> f64 {
        match self {
            ConvexProfile::Identity => t,
            ConvexProfile::Quadratic { lambda } => 0.5 * lambda * t * t,
            ConvexProfile::Phi1Scaled { lambda } => phi1(lambda.sqrt() * t),
            ConvexProfile::LinearOffset { offset, slope } => -offset + slope * t,
            ConvexProfile::Grid(grid) => grid.value(t),
            ConvexProfile::Composed { outer, inner } => outer.value(inner.value(t)),
        }
    }

    /// The asymptotic slope S = lim_{t→∞} Ψ(t)/t, possibly `+∞`.
    pub fn growth_rate(&self) -> f64 {
        match self {
            ConvexProfile::Identity => 1.0,
            ConvexProfile::Quadratic { .. } => f64::INFINITY,
            ConvexProfile::Phi1Scaled { lambda } => lambda.sqrt(),
            ConvexProfile::LinearOffset { slope, .. } => *slope,
            ConvexProfile::Grid(grid) => grid.final_slope,
            ConvexProfile::Composed { outer, inner } => {
                let inner_rate = inner.growth_rate();
                let outer_rate = outer.growth_rate();
                if inner_rate == 0.0 || outer_rate == 0.0 {
                    0.0
                } else if inner_rate.is_infinite() || outer_rate.is_infinite() {
                    f64::INFINITY
                } else {
                    outer_rate * inner_rate
                }
            }
        }
    }

    /// Tight means Ψ(0) = 0 (equivalently Ψ*(0) = 0): the derived
    /// concentration inequality carries no additive slack.
    pub fn is_tight(&self) -> bool {
        self.value(0.0).abs() <= TIGHTNESS_TOL
    }

    /// True when the profile can play the cost role: non-negative with
    /// value 0 at 0.
    pub fn is_cost_role(&self) -> bool {
        match self {
            ConvexProfile::Identity
            | ConvexProfile::Quadratic { .. }
            | ConvexProfile::Phi1Scaled { .. } => true,
            ConvexProfile::LinearOffset { offset, .. } => *offset <= TIGHTNESS_TOL,
            ConvexProfile::Grid(grid) => {
                grid.values[0].abs() <= TIGHTNESS_TOL
                    && grid.values.iter().all(|&v| v >= -TIGHTNESS_TOL)
            }
            ConvexProfile::Composed { outer, inner } => {
                inner.is_cost_role() && outer.is_cost_role()
            }
        }
    }

    /// Legendre–Fenchel conjugate Ψ*(s) = sup_{t>0} {s·t − Ψ(t)} for s ≥ 0.
    ///
    /// Exactly `+∞` for s beyond the growth rate; finite for every s ≥ 0
    /// iff the growth rate is infinite.
    pub fn legendre(&self, s: f64) -> f64 {
        debug_assert!(s >= 0.0, "conjugate is only taken on the positive ray");
        match self {
            // The finiteness gates carry a 1e-12 relative grace so that
            // boundary slopes computed by division (s = λ/α with α = λ/S)
            // land on the closed side of the domain.
            ConvexProfile::Identity => {
                if s <= 1.0 + 1e-12 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            ConvexProfile::Quadratic { lambda } => s * s / (2.0 * lambda),
            ConvexProfile::Phi1Scaled { lambda } => {
                let cap = lambda.sqrt();
                if s <= cap * (1.0 + 1e-12) {
                    let sc = s.min(cap);
                    sc * sc / (2.0 * lambda)
                } else {
                    f64::INFINITY
                }
            }
            ConvexProfile::LinearOffset { offset, slope } => {
                if s <= slope * (1.0 + 1e-12) {
                    *offset
                } else {
                    f64::INFINITY
                }
            }
            ConvexProfile::Grid(grid) => {
                let rate = grid.final_slope;
                if s > rate * (1.0 + 1e-12) + 1e-300 {
                    return f64::INFINITY;
                }
                // Discrete supremum over the knots, then refine the
                // bracketing interval (the sampled function may be smooth).
                let mut best_k = 0;
                let mut best = f64::NEG_INFINITY;
                for (k, (&t, &v)) in grid.knots.iter().zip(&grid.values).enumerate() {
                    let g = s * t - v;
                    if g > best {
                        best = g;
                        best_k = k;
                    }
                }
                let lo = grid.knots[best_k.saturating_sub(1)];
                let hi = grid.knots[(best_k + 1).min(grid.knots.len() - 1)];
                let (_, refined) = golden_max(
                    |t| s * t - grid.value(t),
                    lo,
                    hi,
                    1e-12 * (1.0 + hi),
                    200,
                );
                refined.max(best)
            }
            ConvexProfile::Composed { .. } => {
                let rate = self.growth_rate();
                if rate.is_finite() && s > rate * (1.0 + 1e-12) + 1e-300 {
                    return f64::INFINITY;
                }
                let (_, sup) = maximize_concave_ray(|t| s * t - self.value(t), 1.0, 1e12, 1e-12);
                sup
            }
        }
    }

    /// Generalized inverse Ψ⁻¹(y) = sup{t ≥ 0 : Ψ(t) ≤ y}, with 0 for the
    /// empty set and `+∞` when the profile never exceeds y.
    pub fn generalized_inverse(&self, y: f64) -> f64 {
        match self {
            ConvexProfile::Identity => {
                if y < 0.0 {
                    0.0
                } else {
                    y
                }
            }
            ConvexProfile::Quadratic { lambda } => {
                if y <= 0.0 {
                    0.0
                } else {
                    (2.0 * y / lambda).sqrt()
                }
            }
            ConvexProfile::Phi1Scaled { lambda } => {
                if y <= 0.0 {
                    0.0
                } else {
                    let u = if y <= 0.5 { (2.0 * y).sqrt() } else { y + 0.5 };
                    u / lambda.sqrt()
                }
            }
            ConvexProfile::LinearOffset { offset, slope } => {
                if y < -offset {
                    0.0
                } else {
                    (y + offset) / slope
                }
            }
            ConvexProfile::Grid(_) | ConvexProfile::Composed { .. } => {
                if self.value(0.0) > y {
                    return 0.0;
                }
                // Find a bracket where the profile exceeds y, doubling out.
                let mut hi = 1.0;
                while self.value(hi) <= y {
                    hi *= 2.0;
                    if hi > 1e15 {
                        // Never exceeds y: constant profile below y.
                        return f64::INFINITY;
                    }
                }
                bisect_last_true(|t| self.value(t) <= y, 0.0, hi, 100)
            }
        }
    }

    /// Short human-readable name used in reports.
    pub fn describe(&self) -> String {
        match self {
            ConvexProfile::Identity => "identity".into(),
            ConvexProfile::Quadratic { lambda } => format!("quadratic({lambda})"),
            ConvexProfile::Phi1Scaled { lambda } => format!("phi1({lambda})"),
            ConvexProfile::LinearOffset { offset, slope } => {
                format!("linear_offset(offset={offset}, slope={slope})")
            }
            ConvexProfile::Grid(grid) => format!("grid({} knots)", grid.knots.len()),
            ConvexProfile::Composed { outer, inner } => {
                format!("compose({}, {})", outer.describe(), inner.describe())
            }
        }
    }
}

/// Compose two profiles into Ψ = Φ ∘ φ.
///
/// The inner profile must be a valid cost profile (non-negative, φ(0) = 0),
/// so Ψ inherits Φ's value at 0 and in particular Φ's tightness. Identity
/// factors collapse so that catalog inputs keep exact conjugates.
pub fn compose(outer: &ConvexProfile, inner: &ConvexProfile) -> Result<ConvexProfile> {
    if !inner.is_cost_role() {
        return Err(Error::NotCostProfile(inner.describe()));
    }
    match (outer, inner) {
        (ConvexProfile::Identity, _) => Ok(inner.clone()),
        (_, ConvexProfile::Identity) => Ok(outer.clone()),
        _ => Ok(ConvexProfile::Composed {
            outer: Box::new(outer.clone()),
            inner: Box::new(inner.clone()),
        }),
    }
}

/// Conjugate of a composition evaluated through the infimal form
/// (Φ∘φ)*(λ) = inf_{α>0} { Φ*(α) + α·φ*(λ/α) }.
///
/// This is the second, independent route to the composed conjugate: a
/// log-spaced sweep over the scale parameter α followed by golden-section
/// refinement of the bracketing decade slice.
pub fn conjugate_of_composition(outer: &ConvexProfile, inner: &ConvexProfile, lambda: f64) -> f64 {
    debug_assert!(lambda >= 0.0);
    let objective = |alpha: f64| -> f64 {
        let outer_star = outer.legendre(alpha);
        if outer_star.is_infinite() {
            return f64::INFINITY;
        }
        let inner_star = inner.legendre(lambda / alpha);
        if inner_star.is_infinite() {
            return f64::INFINITY;
        }
        outer_star + alpha * inner_star
    };

    // The objective is finite exactly on an α interval: Φ*(α) needs
    // α ≤ S(Φ), φ*(λ/α) needs α ≥ λ/S(φ). The interval can degenerate to a
    // point (both profiles with linear tails at the critical λ), so its
    // ends are explicit candidates alongside the log-spaced sweep.
    let s_outer = outer.growth_rate();
    let s_inner = inner.growth_rate();
    let alpha_min = if lambda == 0.0 {
        0.0
    } else if s_inner.is_finite() {
        if s_inner == 0.0 {
            return f64::INFINITY;
        }
        lambda / s_inner
    } else {
        0.0
    };
    let alpha_max = if s_outer.is_finite() {
        s_outer
    } else {
        f64::INFINITY
    };
    if alpha_min > alpha_max * (1.0 + 1e-12) {
        return f64::INFINITY;
    }

    let mut alphas: Vec<f64> = log_space(1e-6, 1e6, 60 * 12 + 1)
        .into_iter()
        .filter(|&a| a >= alpha_min && a <= alpha_max)
        .collect();
    if alpha_min > 0.0 && alpha_min.is_finite() {
        alphas.push(alpha_min);
    }
    if alpha_max.is_finite() && alpha_max > 0.0 {
        alphas.push(alpha_max);
    }
    if alpha_min == 0.0 {
        alphas.push(1e-9);
    }
    alphas.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut best_k = usize::MAX;
    let mut best = f64::INFINITY;
    for (k, &alpha) in alphas.iter().enumerate() {
        let v = objective(alpha);
        if v < best {
            best = v;
            best_k = k;
        }
    }
    if best_k == usize::MAX {
        return f64::INFINITY;
    }
    let lo = alphas[best_k.saturating_sub(1)].ln();
    let hi = alphas[(best_k + 1).min(alphas.len() - 1)].ln();
    let (_, refined) = golden_min(|u: f64| objective(u.exp()), lo, hi, 1e-13, 300);
    refined.min(best)
}

/// Worst relative biconjugation error sup_t |(Ψ*)*(t) − Ψ(t)| / (1 + |Ψ(t)|)
/// over the interior of a uniform t-grid.
///
/// The outer conjugate is evaluated numerically from `legendre`, so this
/// exercises the full implementation path rather than any closed form.
pub fn biconjugate_check(profile: &ConvexProfile, t_max: f64, step: f64) -> f64 {
    let rate = profile.growth_rate();
    let mut worst: f64 = 0.0;
    let n = (t_max / step).round() as usize;
    for k in 1..n {
        let t = k as f64 * step;
        let double = if rate.is_finite() {
            // Ψ* is finite exactly on [0, S]; the supremum of s·t − Ψ*(s)
            // lives there.
            let (_, v) = golden_max(
                |s| s * t - profile.legendre(s),
                0.0,
                rate,
                1e-13 * (1.0 + rate),
                300,
            );
            v
        } else {
            let (_, v) =
                maximize_concave_ray(|s| s * t - profile.legendre(s), 1.0, 1e12, 1e-13);
            v
        };
        let direct = profile.value(t);
        let err = (double - direct).abs() / (1.0 + direct.abs());
        worst = worst.max(err);
    }
    worst
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

#[derive(Debug, Default, Serialize, Deserialize)]
pub struct ProfileParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope: Option<f64>,
}

/// On-disk profile description.
#[derive(Debug, Serialize, Deserialize)]
pub struct ProfileFile {
    pub kind: String,
    #[serde(default)]
    pub params: ProfileParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub knots: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

impl ProfileFile {
    pub fn build(self) -> Result<ConvexProfile> {
        let need = |v: Option<f64>, what: &str| {
            v.ok_or_else(|| Error::InvalidInput(format!("profile params missing `{what}`")))
        };
        match self.kind.as_str() {
            "identity" => Ok(ConvexProfile::Identity),
            "quadratic" => {
                let lambda = need(self.params.lambda, "lambda")?;
                if lambda <= 0.0 {
                    return Err(Error::OutOfRange("lambda must be positive".into()));
                }
                Ok(ConvexProfile::quadratic(lambda))
            }
            "phi1" => {
                let lambda = need(self.params.lambda, "lambda")?;
                if lambda <= 0.0 {
                    return Err(Error::OutOfRange("lambda must be positive".into()));
                }
                Ok(ConvexProfile::phi1_scaled(lambda))
            }
            "linear_offset" => {
                let offset = need(self.params.offset, "offset")?;
                let slope = need(self.params.slope, "slope")?;
                if offset < 0.0 || slope <= 0.0 {
                    return Err(Error::OutOfRange(
                        "need offset ≥ 0 and slope > 0 for linear_offset".into(),
                    ));
                }
                Ok(ConvexProfile::linear_offset(offset, slope))
            }
            "grid" => {
                let knots = self
                    .knots
                    .ok_or_else(|| Error::InvalidInput("grid profile needs `knots`".into()))?;
                let values = self
                    .values
                    .ok_or_else(|| Error::InvalidInput("grid profile needs `values`".into()))?;
                ConvexProfile::grid(knots, values)
            }
            other => Err(Error::InvalidInput(format!("unknown profile kind `{other}`"))),
        }
    }

    pub fn from_profile(profile: &ConvexProfile) -> Result<Self> {
        let mut file = ProfileFile {
            kind: String::new(),
            params: ProfileParams::default(),
            knots: None,
            values: None,
        };
        match profile {
            ConvexProfile::Identity => file.kind = "identity".into(),
            ConvexProfile::Quadratic { lambda } => {
                file.kind = "quadratic".into();
                file.params.lambda = Some(*lambda);
            }
            ConvexProfile::Phi1Scaled { lambda } => {
                file.kind = "phi1".into();
                file.params.lambda = Some(*lambda);
            }
            ConvexProfile::LinearOffset { offset, slope } => {
                file.kind = "linear_offset".into();
                file.params.offset = Some(*offset);
                file.params.slope = Some(*slope);
            }
            ConvexProfile::Grid(grid) => {
                file.kind = "grid".into();
                file.knots = Some(grid.knots.clone());
                file.values = Some(grid.values.clone());
            }
            ConvexProfile::Composed { .. } => {
                return Err(Error::InvalidInput(
                    "composed profiles have no file form; serialize the factors".into(),
                ))
            }
        }
        Ok(file)
    }
}

/// Parse an inline profile spec: `identity`, `quadratic(λ)`, `phi1(λ)`,
/// `linear_offset(offset, slope)`. Used by CLI flags as an alternative to
/// a profile file path.
pub fn parse_inline_profile(text: &str) -> Result<ConvexProfile> {
    let text = text.trim();
    if text == "identity" {
        return Ok(ConvexProfile::Identity);
    }
    let (name, args) = match text.split_once('(') {
        Some((name, rest)) if rest.ends_with(')') => {
            (name.trim(), rest.trim_end_matches(')').to_string())
        }
        _ => {
            return Err(Error::InvalidInput(format!(
                "cannot parse profile spec `{text}`"
            )))
        }
    };
    let nums: Vec<f64> = args
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("bad number `{s}` in profile spec")))
        })
        .collect::<Result<_>>()?;
    match (name, nums.as_slice()) {
        ("quadratic", [lambda]) if *lambda > 0.0 => Ok(ConvexProfile::quadratic(*lambda)),
        ("phi1", [lambda]) if *lambda > 0.0 => Ok(ConvexProfile::phi1_scaled(*lambda)),
        ("linear_offset", [offset, slope]) if *offset >= 0.0 && *slope > 0.0 => {
            Ok(ConvexProfile::linear_offset(*offset, *slope))
        }
        _ => Err(Error::InvalidInput(format!(
            "cannot parse profile spec `{text}`"
        ))),
    }
}
