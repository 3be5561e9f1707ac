//! Shared numerical primitives: stable log-sum-exp, golden-section search,
//! adaptive Simpson quadrature and grid builders.
//!
//! Everything here works on plain `f64` extended reals: `f64::INFINITY` is a
//! first-class value (an infinite conjugate, an unreachable bound), never a
//! stand-in like `1e300`.

/// Golden ratio conjugate (√5 − 1)/2, the section used in golden search.
const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Numerically stable log Σ exp(xᵢ) over a slice.
///
/// Returns `-∞` for an empty slice. Infinite inputs propagate: any `+∞`
/// term makes the sum `+∞`.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    log_sum_exp_by(terms.len(), |i| terms[i])
}

/// Log-sum-exp over an indexed family without materializing the terms.
pub fn log_sum_exp_by(len: usize, f: impl Fn(usize) -> f64) -> f64 {
    if len == 0 {
        return f64::NEG_INFINITY;
    }
    let mut max_val = f64::NEG_INFINITY;
    for i in 0..len {
        max_val = max_val.max(f(i));
    }
    if !max_val.is_finite() {
        // All -inf (empty mass) or some +inf/NaN: the max already tells the story.
        return max_val;
    }
    let mut sum = 0.0;
    for i in 0..len {
        sum += (f(i) - max_val).exp();
    }
    max_val + sum.ln()
}

/// Minimize a unimodal function on `[lo, hi]` by golden-section search.
///
/// Returns `(argmin, min)`. Tolerance is on the bracket width in `x`.
/// `+∞` objective values are allowed (convex functions with a restricted
/// domain); the search still contracts onto the finite valley.
pub fn golden_min(
    mut f: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    x_tol: f64,
    max_iter: usize,
) -> (f64, f64) {
    debug_assert!(lo <= hi);
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..max_iter {
        if (b - a).abs() <= x_tol {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    // Sample the bracket ends too: the minimizer may sit on the boundary.
    let mut best = (x1, f1);
    for (x, v) in [(x2, f2), (a, f(a)), (b, f(b))] {
        if v < best.1 {
            best = (x, v);
        }
    }
    best
}

/// Maximize a unimodal (e.g. concave) function on `[lo, hi]`.
pub fn golden_max(
    mut f: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    x_tol: f64,
    max_iter: usize,
) -> (f64, f64) {
    let (x, neg) = golden_min(|t| -f(t), lo, hi, x_tol, max_iter);
    (x, -neg)
}

/// Maximize a concave function on `[0, ∞)`.
///
/// Doubles an upper bracket from `hi_hint` until the objective stops
/// improving past it (or `cap` is reached), then runs golden search.
pub fn maximize_concave_ray(
    mut f: impl FnMut(f64) -> f64,
    hi_hint: f64,
    cap: f64,
    x_tol_rel: f64,
) -> (f64, f64) {
    let mut hi = hi_hint.max(1e-6);
    while hi < cap && f(2.0 * hi) > f(hi) {
        hi *= 2.0;
    }
    hi = (2.0 * hi).min(cap);
    golden_max(f, 0.0, hi, x_tol_rel * hi.max(1.0), 200)
}

/// Adaptive Simpson quadrature with an absolute-error target.
///
/// Integrands may blow up near (but stay finite inside) the interval; the
/// recursion keeps splitting until the Richardson estimate meets `tol` or
/// the depth cap is hit.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: usize,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        // The relative floor stops refinement once the Richardson estimate
        // drowns in rounding noise of the panel values (huge integrands can
        // never meet a raw absolute target).
        let floor = 1e-15 * (left.abs() + right.abs());
        if depth == 0 || delta.abs() <= (15.0 * tol).max(floor) {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(fa, fm, fb, a, b);
    recurse(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// Composite Simpson rule on `n` panels (`n` rounded up to even).
///
/// Deliberately naive: serves as the independent cross-check for the
/// adaptive rule.
pub fn fixed_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = if n % 2 == 0 { n.max(2) } else { n + 1 };
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h);
    }
    acc * h / 3.0
}

/// `count` log-spaced points from `lo` to `hi` inclusive (both > 0).
pub fn log_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    debug_assert!(lo > 0.0 && hi > 0.0 && lo <= hi);
    if count <= 1 {
        return vec![lo];
    }
    let (ll, lh) = (lo.ln(), hi.ln());
    (0..count)
        .map(|k| (ll + (lh - ll) * k as f64 / (count - 1) as f64).exp())
        .collect()
}

/// Largest `t` in `[lo, hi]` with `pred(t)` true, for monotone predicates
/// (true on a left segment). Assumes `pred(lo)` holds.
pub fn bisect_last_true(pred: impl Fn(f64) -> bool, lo: f64, hi: f64, iters: usize) -> f64 {
    let (mut a, mut b) = (lo, hi);
    if pred(b) {
        return b;
    }
    for _ in 0..iters {
        let m = 0.5 * (a + b);
        if pred(m) {
            a = m;
        } else {
            b = m;
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_sum_exp_matches_direct_sum() {
        let terms = [0.1f64, -2.0, 3.5, 1.0];
        let direct: f64 = terms.iter().map(|x| x.exp()).sum();
        assert!((log_sum_exp(&terms) - direct.ln()).abs() < 1e-12);
    }

    #[test]
    fn log_sum_exp_survives_large_exponents() {
        // exp(800) overflows f64; the shifted form must not.
        let got = log_sum_exp(&[800.0, 800.0]);
        assert!((got - (800.0 + 2f64.ln())).abs() < 1e-10);
    }

    #[test]
    fn log_sum_exp_empty_is_neg_inf() {
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
    }

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, v) = golden_min(|t| (t - 1.3) * (t - 1.3) + 2.0, -5.0, 5.0, 1e-12, 200);
        // The argmin is only locatable to ~√ε on a flat quadratic floor,
        // but the value converges to machine precision.
        assert!((x - 1.3).abs() < 1e-6);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn golden_handles_boundary_minimum() {
        let (x, _) = golden_min(|t| t, 0.0, 1.0, 1e-12, 200);
        assert!(x.abs() < 1e-9);
    }

    #[test]
    fn golden_tolerates_infinite_values() {
        // Convex with +inf outside [0, 1]: minimum at 0.5 must still be found.
        let f = |t: f64| {
            if !(0.0..=1.0).contains(&t) {
                f64::INFINITY
            } else {
                (t - 0.5).powi(2)
            }
        };
        let (x, _) = golden_min(f, -1.0, 2.0, 1e-12, 300);
        assert!((x - 0.5).abs() < 1e-6);
    }

    #[test]
    fn adaptive_simpson_gaussian_moment() {
        // ∫ x² exp(-x²/2)/√(2π) dx over [-10, 10] = 1.
        let f = |x: f64| x * x * (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let got = adaptive_simpson(&f, -10.0, 10.0, 1e-12);
        assert!((got - 1.0).abs() < 1e-10);
    }

    #[test]
    fn adaptive_simpson_integrable_blowup() {
        // ∫₀¹ 1/√x dx = 2, singular at the left endpoint; integrate from eps.
        let f = |x: f64| x.sqrt().recip();
        let got = adaptive_simpson(&f, 1e-12, 1.0, 1e-9);
        assert!((got - 2.0).abs() < 1e-5);
    }

    #[test]
    fn fixed_and_adaptive_simpson_agree() {
        let f = |x: f64| (3.0 * x).sin() * (-x).exp();
        let a = adaptive_simpson(&f, 0.0, 4.0, 1e-12);
        let b = fixed_simpson(&f, 0.0, 4.0, 20_000);
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn log_space_endpoints() {
        let g = log_space(1e-3, 1e3, 61);
        assert_eq!(g.len(), 61);
        assert!((g[0] - 1e-3).abs() < 1e-15);
        assert!((g[60] - 1e3).abs() < 1e-9);
    }

    #[test]
    fn bisect_finds_threshold() {
        let t = bisect_last_true(|x| x * x <= 2.0, 0.0, 10.0, 80);
        assert!((t - 2f64.sqrt()).abs() < 1e-10);
    }
}
