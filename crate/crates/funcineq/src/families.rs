//! Seeded measure and field families feeding the checkers.
//!
//! Exponential tilts of μ are the extremizers suggested by the
//! Laplace-transform duality, so they are always part of the ν family;
//! point masses and flat-Dirichlet draws round out the coverage.
//! Everything is deterministic per seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::numeric::log_sum_exp;
use crate::space::{lipschitz_regularize, BorelMeasure, MetricMeasureSpace, ScalarField};
use crate::Result;

/// Which ν family to generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum NuFamilyKind {
    /// μ tilted by exp(θ·g) for 1-Lipschitz g over a θ grid.
    Tilts,
    /// Point masses δ_x spread over the space.
    Deltas,
    /// Flat-Dirichlet random measures.
    Dirichlet,
}

/// Generate `count` named measures of the requested kind.
pub fn nu_family(
    space: &MetricMeasureSpace,
    kind: NuFamilyKind,
    count: usize,
    seed: u64,
) -> Result<Vec<(String, BorelMeasure)>> {
    let n = space.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        NuFamilyKind::Deltas => Ok((0..count)
            .map(|k| {
                let at = (k * n.max(1) / count.max(1)).min(n - 1);
                (format!("delta_{at}"), BorelMeasure::point_mass(n, at))
            })
            .collect()),
        NuFamilyKind::Dirichlet => (0..count)
            .map(|k| {
                let mut w: Vec<f64> =
                    (0..n).map(|_| (-(1.0 - rng.gen::<f64>()).ln()).max(1e-12)).collect();
                normalize(&mut w);
                Ok((format!("dirichlet_{k}"), BorelMeasure::new(w)?))
            })
            .collect(),
        NuFamilyKind::Tilts => {
            let raw = ScalarField::unrestricted(
                (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect(),
            )?;
            let g = lipschitz_regularize(space, &raw, 1.0)?;
            (0..count)
                .map(|k| {
                    let theta = -2.0 + 4.0 * k as f64 / (count.max(2) - 1) as f64;
                    Ok((format!("tilt_{theta:.3}"), exponential_tilt(space, g.values(), theta)?))
                })
                .collect()
        }
    }
}

/// The tilted measure ν ∝ exp(θ·g)·μ, assembled in log-domain.
pub fn exponential_tilt(
    space: &MetricMeasureSpace,
    g: &[f64],
    theta: f64,
) -> Result<BorelMeasure> {
    let logs: Vec<f64> = space
        .weights()
        .iter()
        .zip(g)
        .map(|(&w, &gi)| w.ln() + theta * gi)
        .collect();
    let lse = log_sum_exp(&logs);
    let mut w: Vec<f64> = logs.iter().map(|&x| (x - lse).exp()).collect();
    normalize(&mut w);
    BorelMeasure::new(w)
}

/// `count` 1-Lipschitz (after regularization, `l`-Lipschitz) test fields.
pub fn lipschitz_field_family(
    space: &MetricMeasureSpace,
    count: usize,
    l: f64,
    seed: u64,
) -> Result<Vec<ScalarField>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let raw = ScalarField::unrestricted(
                (0..space.len()).map(|_| rng.gen_range(-4.0..4.0)).collect(),
            )?;
            lipschitz_regularize(space, &raw, l)
        })
        .collect()
}

/// A strictly positive field whose logarithm is exactly `l`-Lipschitz
/// (up to the regularization), i.e. an `l`-log-Lipschitz test function.
pub fn log_lipschitz_field(space: &MetricMeasureSpace, l: f64, seed: u64) -> Result<ScalarField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw = ScalarField::unrestricted(
        (0..space.len()).map(|_| rng.gen_range(-4.0..4.0)).collect(),
    )?;
    let g = lipschitz_regularize(space, &raw, l)?;
    ScalarField::positive(g.values().iter().map(|v| v.exp()).collect())
}

fn normalize(w: &mut [f64]) {
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    let resid = 1.0 - w.iter().sum::<f64>();
    let imax = (0..w.len())
        .max_by(|&a, &b| w[a].partial_cmp(&w[b]).unwrap())
        .unwrap();
    w[imax] += resid;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::log_lipschitz_constant;
    use crate::space::random_space;

    #[test]
    fn families_are_deterministic_and_valid() {
        let space = random_space(15, 4).unwrap();
        for kind in [NuFamilyKind::Tilts, NuFamilyKind::Deltas, NuFamilyKind::Dirichlet] {
            let a = nu_family(&space, kind, 6, 99).unwrap();
            let b = nu_family(&space, kind, 6, 99).unwrap();
            assert_eq!(a.len(), 6);
            for ((ida, na), (idb, nb)) in a.iter().zip(&b) {
                assert_eq!(ida, idb);
                assert_eq!(na.weights(), nb.weights());
            }
        }
    }

    #[test]
    fn tilt_at_zero_recovers_mu() {
        let space = random_space(9, 7).unwrap();
        let g: Vec<f64> = (0..9).map(|k| k as f64).collect();
        let nu = exponential_tilt(&space, &g, 0.0).unwrap();
        for (a, b) in nu.weights().iter().zip(space.weights()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn log_lipschitz_field_has_prescribed_constant() {
        let space = random_space(12, 3).unwrap();
        let f = log_lipschitz_field(&space, 0.7, 5).unwrap();
        let l = log_lipschitz_constant(&space, &f).unwrap();
        assert!(l <= 0.7 * (1.0 + 1e-9), "constant {l}");
    }
}
