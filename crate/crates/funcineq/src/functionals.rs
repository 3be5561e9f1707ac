//! Measure-theoretic functionals: L^p norms for every real order (with the
//! geometric mean at p = 0 as an exact branch), entropy, variance, the
//! moment-derivative identity, and one-sided log-Lipschitz profiles.
//!
//! All p-norms go through log-domain accumulation, so exponential fields
//! with hundreds of log-units of dynamic range are handled without overflow.

use crate::numeric::log_sum_exp_by;
use crate::space::{MetricMeasureSpace, ScalarField};
use crate::{Error, Result};

/// ‖f‖_{L^p(μ)} for any real p over a strictly positive field.
///
/// For p ≠ 0 this is exp(LSE(log μᵢ + p·log fᵢ)/p); the p = 0 branch is the
/// exact geometric mean exp(∫ log f dμ), not a small-p approximation.
pub fn lp_norm(space: &MetricMeasureSpace, f: &ScalarField, p: f64) -> Result<f64> {
    f.check_len(space)?;
    if !f.is_positive() {
        return Err(Error::InvalidInput(
            "moment norms need a strictly positive field".into(),
        ));
    }
    let w = space.weights();
    let vals = f.values();
    if p == 0.0 {
        let log_geo: f64 = w
            .iter()
            .zip(vals)
            .map(|(&wi, &fi)| wi * fi.ln())
            .sum();
        return Ok(log_geo.exp());
    }
    let lse = log_sum_exp_by(space.len(), |i| w[i].ln() + p * vals[i].ln());
    Ok((lse / p).exp())
}

/// Result of checking ‖f⁻¹‖_p = ‖f‖₋p⁻¹, the reflection that turns an upper
/// moment comparison into the two-sided form.
#[derive(Debug, Clone)]
pub struct ReflectionReport {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
    pub pass: bool,
}

/// Verify the negative-moment reflection identity at order p > 0.
pub fn negative_moment_reflection_check(
    space: &MetricMeasureSpace,
    f: &ScalarField,
    p: f64,
) -> Result<ReflectionReport> {
    if !(p > 0.0) {
        return Err(Error::OutOfRange(format!("need p > 0, got {p}")));
    }
    let lhs = lp_norm(space, &f.reciprocal()?, p)?;
    let rhs = 1.0 / lp_norm(space, f, -p)?;
    let rel_err = (lhs - rhs).abs() / rhs.abs().max(f64::MIN_POSITIVE);
    Ok(ReflectionReport {
        lhs,
        rhs,
        rel_err,
        pass: rel_err <= 1e-12,
    })
}

/// Entropy of a non-negative field: Ent_μ(g) = ∫ g log(g/∫g dμ) dμ, with
/// the 0·log 0 = 0 convention.
pub fn entropy(space: &MetricMeasureSpace, g: &ScalarField) -> Result<f64> {
    g.check_len(space)?;
    let w = space.weights();
    let vals = g.values();
    let mut mean = 0.0;
    for (i, (&wi, &gi)) in w.iter().zip(vals).enumerate() {
        if gi < 0.0 {
            return Err(Error::NonPositiveField { index: i, value: gi });
        }
        mean += wi * gi;
    }
    if mean <= 0.0 {
        return Err(Error::InvalidInput(
            "entropy of the zero field is undefined".into(),
        ));
    }
    let log_mean = mean.ln();
    Ok(w.iter()
        .zip(vals)
        .filter(|(_, &gi)| gi > 0.0)
        .map(|(&wi, &gi)| wi * gi * (gi.ln() - log_mean))
        .sum())
}

/// Variance of a field under μ.
pub fn variance(space: &MetricMeasureSpace, f: &ScalarField) -> Result<f64> {
    f.check_len(space)?;
    let m = space.mean(f.values());
    Ok(space
        .weights()
        .iter()
        .zip(f.values())
        .map(|(&w, &v)| w * (v - m) * (v - m))
        .sum())
}

/// Both sides of the moment-derivative identity
/// d/dt log‖f‖_t = Ent_μ(f^t) / (t² ∫ f^t dμ).
#[derive(Debug, Clone)]
pub struct MomentDerivativeReport {
    pub finite_difference: f64,
    pub entropy_formula: f64,
    pub rel_err: f64,
}

/// Compare the central finite difference of t ↦ log‖f‖_t against the
/// entropy formula at order `t ≠ 0`.
pub fn moment_log_derivative_check(
    space: &MetricMeasureSpace,
    f: &ScalarField,
    t: f64,
    h: f64,
) -> Result<MomentDerivativeReport> {
    if !(h > 0.0) {
        return Err(Error::OutOfRange(format!("step must be positive, got {h}")));
    }
    if t.abs() <= h {
        return Err(Error::OutOfRange(format!(
            "order t = {t} is within one step of the p = 0 branch"
        )));
    }
    f.check_len(space)?;
    let fd = (lp_norm(space, f, t + h)?.ln() - lp_norm(space, f, t - h)?.ln()) / (2.0 * h);

    // Ent_μ(f^t)/(t² ∫f^t dμ) assembled in log-domain: with softmax weights
    // ωᵢ ∝ μᵢ fᵢ^t the quotient is (Σ ωᵢ·t·log fᵢ − log ∫f^t dμ)/t².
    let w = space.weights();
    let vals = f.values();
    let n = space.len();
    let log_terms: Vec<f64> = (0..n).map(|i| w[i].ln() + t * vals[i].ln()).collect();
    let lse = crate::numeric::log_sum_exp(&log_terms);
    let weighted_log: f64 = (0..n)
        .map(|i| (log_terms[i] - lse).exp() * t * vals[i].ln())
        .sum();
    let formula = (weighted_log - lse) / (t * t);

    let scale = fd.abs().max(formula.abs()).max(1e-300);
    let rel_err = (fd - formula).abs() / scale;
    Ok(MomentDerivativeReport {
        finite_difference: fd,
        entropy_formula: formula,
        rel_err,
    })
}

/// The best (smallest) global log-Lipschitz constant of a positive field:
/// max over pairs of |log f(x) − log f(y)| / d(x, y).
pub fn log_lipschitz_constant(space: &MetricMeasureSpace, f: &ScalarField) -> Result<f64> {
    f.check_len(space)?;
    if !f.is_positive() {
        return Err(Error::InvalidInput(
            "log-Lipschitz constants need a positive field".into(),
        ));
    }
    let logs: Vec<f64> = f.values().iter().map(|v| v.ln()).collect();
    let n = space.len();
    let mut best: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            best = best.max((logs[i] - logs[j]).abs() / space.dist(i, j));
        }
    }
    Ok(best)
}

/// Lipschitz constant of a plain (not log) field w.r.t. the space metric.
pub fn lipschitz_constant(space: &MetricMeasureSpace, f: &ScalarField) -> Result<f64> {
    f.check_len(space)?;
    let vals = f.values();
    let n = space.len();
    let mut best: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            best = best.max((vals[i] - vals[j]).abs() / space.dist(i, j));
        }
    }
    Ok(best)
}

/// Pointwise one-sided control of a positive field:
/// log f(y) ≥ log f(x) − L(x)·d(x,y) − b(x) for all pairs.
///
/// The condition is deliberately asymmetric in (x, y): L and b depend on the
/// base point only, and the extraction routines never symmetrize.
#[derive(Debug, Clone)]
pub struct LogLipProfile {
    pub l: Vec<f64>,
    pub b: Vec<f64>,
}

impl LogLipProfile {
    /// Constant-L profile with no additive slack.
    pub fn constant(n: usize, l: f64) -> Self {
        LogLipProfile {
            l: vec![l; n],
            b: vec![0.0; n],
        }
    }

    /// Exact pairwise check of the one-sided condition (slack for rounding
    /// only).
    pub fn satisfied_by(&self, space: &MetricMeasureSpace, f: &ScalarField) -> Result<bool> {
        f.check_len(space)?;
        if self.l.len() != space.len() || self.b.len() != space.len() {
            return Err(Error::LengthMismatch {
                expected: space.len(),
                found: self.l.len(),
            });
        }
        let logs: Vec<f64> = f.values().iter().map(|v| v.ln()).collect();
        let n = space.len();
        for x in 0..n {
            for y in 0..n {
                if x == y {
                    continue;
                }
                let lower = logs[x] - self.l[x] * space.dist(x, y) - self.b[x];
                if logs[y] < lower - 1e-9 * (1.0 + lower.abs()) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// How to extract a one-sided profile from a field.
pub enum ProfileExtraction {
    /// Force b ≡ 0 and take the smallest valid per-point slope.
    BZero,
    /// Keep the given per-point slopes and absorb the excess into b.
    GivenL(Vec<f64>),
}

/// Smallest one-sided profile of `f` in the requested mode. The output
/// satisfies the one-sided condition exactly on all pairs.
pub fn extract_one_sided_profile(
    space: &MetricMeasureSpace,
    f: &ScalarField,
    mode: ProfileExtraction,
) -> Result<LogLipProfile> {
    f.check_len(space)?;
    if !f.is_positive() {
        return Err(Error::InvalidInput(
            "one-sided profiles need a positive field".into(),
        ));
    }
    let logs: Vec<f64> = f.values().iter().map(|v| v.ln()).collect();
    let n = space.len();
    match mode {
        ProfileExtraction::BZero => {
            let l = (0..n)
                .map(|x| {
                    (0..n)
                        .filter(|&y| y != x)
                        .map(|y| (logs[x] - logs[y]) / space.dist(x, y))
                        .fold(0.0f64, f64::max)
                })
                .collect();
            Ok(LogLipProfile { l, b: vec![0.0; n] })
        }
        ProfileExtraction::GivenL(l) => {
            if l.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: l.len(),
                });
            }
            let b = (0..n)
                .map(|x| {
                    (0..n)
                        .filter(|&y| y != x)
                        .map(|y| logs[x] - logs[y] - l[x] * space.dist(x, y))
                        .fold(0.0f64, f64::max)
                })
                .collect();
            Ok(LogLipProfile { l, b })
        }
    }
}
