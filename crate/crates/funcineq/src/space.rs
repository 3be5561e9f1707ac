//! Finite metric-measure spaces and scalar fields on them.
//!
//! A [`MetricMeasureSpace`] is a triple (Ω, d, μ): a finite point set, a
//! symmetric distance matrix satisfying the triangle inequality, and a
//! strictly positive probability vector. Every quantity downstream
//! (transport cost, relative entropy, inf-convolution, moments) is exactly
//! computable on these.
//!
//! Besides ingestion/validation of space files, this module generates the
//! benchmark spaces used throughout: discretized Gaussian and two-sided
//! exponential lines, products, and seeded random spaces.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Tolerance for "weights sum to one".
pub const WEIGHT_SUM_TOL: f64 = 1e-12;
/// Slack allowed when checking the triangle inequality (pure rounding).
const TRIANGLE_SLACK: f64 = 1e-12;

/// Distance data: an explicit matrix, or 1-D coordinates whose metric
/// |xᵢ − xⱼ| is computed on demand (fine line grids would need O(n²)
/// memory otherwise).
#[derive(Debug, Clone)]
enum Metric {
    Dense(Vec<Vec<f64>>),
    Line(Vec<f64>),
}

/// A finite metric-measure space (Ω, d, μ).
///
/// Immutable after construction; all invariants are enforced by the
/// constructors, so holders can rely on them without re-checking.
#[derive(Debug, Clone)]
pub struct MetricMeasureSpace {
    points: Vec<String>,
    metric: Metric,
    weights: Vec<f64>,
    edges: Option<Vec<(usize, usize)>>,
}

impl MetricMeasureSpace {
    /// Build a space from raw parts, running the full validation
    /// (symmetry, positivity, triangle inequality, weight normalization).
    pub fn new(
        points: Vec<String>,
        dist: Vec<Vec<f64>>,
        weights: Vec<f64>,
        edges: Option<Vec<(usize, usize)>>,
    ) -> Result<Self> {
        let space = Self {
            points,
            metric: Metric::Dense(dist),
            weights,
            edges,
        };
        space.validate_basic()?;
        space.validate_triangle()?;
        Ok(space)
    }

    /// Constructor for generators whose metric is valid by construction
    /// (products, embedded point clouds). Skips only the O(n³) triangle
    /// sweep; everything else is still checked.
    fn new_trusted_metric(
        points: Vec<String>,
        dist: Vec<Vec<f64>>,
        weights: Vec<f64>,
        edges: Option<Vec<(usize, usize)>>,
    ) -> Result<Self> {
        let space = Self {
            points,
            metric: Metric::Dense(dist),
            weights,
            edges,
        };
        space.validate_basic()?;
        Ok(space)
    }

    /// Constructor for 1-D grids; the line metric is exact by construction.
    fn new_line(
        points: Vec<String>,
        xs: Vec<f64>,
        weights: Vec<f64>,
        edges: Option<Vec<(usize, usize)>>,
    ) -> Result<Self> {
        let space = Self {
            points,
            metric: Metric::Line(xs),
            weights,
            edges,
        };
        space.validate_basic()?;
        Ok(space)
    }

    fn validate_basic(&self) -> Result<()> {
        let n = self.points.len();
        if n == 0 {
            return Err(Error::InvalidInput("space has no points".into()));
        }
        match &self.metric {
            Metric::Dense(dist) => {
                if dist.len() != n || dist.iter().any(|row| row.len() != n) {
                    return Err(Error::LengthMismatch {
                        expected: n,
                        found: dist.len(),
                    });
                }
                for i in 0..n {
                    if dist[i][i] != 0.0 {
                        return Err(Error::InvalidInput(format!(
                            "nonzero diagonal distance at point {i}: {}",
                            dist[i][i]
                        )));
                    }
                    for j in 0..n {
                        let d = dist[i][j];
                        if !d.is_finite() || (i != j && d <= 0.0) {
                            return Err(Error::InvalidInput(format!(
                                "distance between points {i} and {j} must be positive and finite, got {d}"
                            )));
                        }
                        if d != dist[j][i] {
                            return Err(Error::AsymmetricDistance {
                                i,
                                j,
                                forward: d,
                                backward: dist[j][i],
                            });
                        }
                    }
                }
            }
            Metric::Line(xs) => {
                if xs.len() != n {
                    return Err(Error::LengthMismatch {
                        expected: n,
                        found: xs.len(),
                    });
                }
                for w in xs.windows(2) {
                    if !(w[1] > w[0]) {
                        return Err(Error::InvalidInput(
                            "line coordinates must be strictly increasing".into(),
                        ));
                    }
                }
            }
        }
        if self.weights.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: self.weights.len(),
            });
        }
        let mut sum = 0.0;
        for (i, &w) in self.weights.iter().enumerate() {
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::NonPositiveWeight { index: i, value: w });
            }
            sum += w;
        }
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::WeightsNotNormalized { sum });
        }
        if let Some(edges) = &self.edges {
            for &(i, j) in edges {
                if i >= n || j >= n || i == j {
                    return Err(Error::InvalidInput(format!("invalid edge ({i}, {j})")));
                }
            }
        }
        Ok(())
    }

    /// O(n³) triangle-inequality sweep; reports the worst offending triple.
    /// Line metrics satisfy it identically and are skipped.
    fn validate_triangle(&self) -> Result<()> {
        let Metric::Dense(dist) = &self.metric else {
            return Ok(());
        };
        let n = self.points.len();
        let scale = self.scale();
        let mut worst: Option<(usize, usize, usize, f64)> = None;
        for i in 0..n {
            for j in 0..n {
                if j == i {
                    continue;
                }
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    let excess = dist[i][k] - dist[i][j] - dist[j][k];
                    if excess > TRIANGLE_SLACK * scale && worst.map_or(true, |(.., e)| excess > e)
                    {
                        worst = Some((i, j, k, excess));
                    }
                }
            }
        }
        if let Some((i, j, k, _)) = worst {
            return Err(Error::TriangleViolation {
                i,
                j,
                k,
                via: dist[i][j] + dist[j][k],
                direct: dist[i][k],
            });
        }
        Ok(())
    }

    fn scale(&self) -> f64 {
        match &self.metric {
            Metric::Dense(dist) => dist.iter().flatten().fold(1.0f64, |acc, &d| acc.max(d)),
            Metric::Line(xs) => (xs[xs.len() - 1] - xs[0]).max(1.0),
        }
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// True when the space has no points (never the case for a validated space).
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point_ids(&self) -> &[String] {
        &self.points
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        match &self.metric {
            Metric::Dense(dist) => dist[i][j],
            Metric::Line(xs) => (xs[i] - xs[j]).abs(),
        }
    }

    /// Materialize the full distance matrix (O(n²); intended for file
    /// export and small spaces).
    pub fn dense_dist(&self) -> Vec<Vec<f64>> {
        match &self.metric {
            Metric::Dense(dist) => dist.clone(),
            Metric::Line(xs) => xs
                .iter()
                .map(|&xi| xs.iter().map(|&xj| (xi - xj).abs()).collect())
                .collect(),
        }
    }

    /// Grid coordinates when the space is a 1-D line discretization.
    pub fn line_coords(&self) -> Option<&[f64]> {
        match &self.metric {
            Metric::Line(xs) => Some(xs),
            Metric::Dense(_) => None,
        }
    }

    /// The probability vector μ (strictly positive, sums to one).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Adjacency list for graph-presented spaces; only the discrete-gradient
    /// estimators consume this.
    pub fn edges(&self) -> Option<&[(usize, usize)]> {
        self.edges.as_deref()
    }

    /// Mean of a value vector under μ.
    pub fn mean(&self, values: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(values)
            .map(|(&w, &v)| w * v)
            .sum()
    }
}

/// A real-valued function on the points of a host space.
///
/// The `positive` flag marks fields used multiplicatively (an `f` whose
/// moments and logarithms are taken) as opposed to unrestricted test
/// functions `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    values: Vec<f64>,
    positive: bool,
}

impl ScalarField {
    /// A strictly positive field; rejects non-finite or non-positive entries.
    pub fn positive(values: Vec<f64>) -> Result<Self> {
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::NonPositiveField { index: i, value: v });
            }
        }
        Ok(Self {
            values,
            positive: true,
        })
    }

    /// An unrestricted (sign-free) field; entries must be finite.
    pub fn unrestricted(values: Vec<f64>) -> Result<Self> {
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonPositiveField { index: i, value: v });
            }
        }
        Ok(Self {
            values,
            positive: false,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Pointwise reciprocal of a positive field.
    pub fn reciprocal(&self) -> Result<Self> {
        if !self.positive {
            return Err(Error::InvalidInput(
                "reciprocal requires a positive field".into(),
            ));
        }
        Self::positive(self.values.iter().map(|v| 1.0 / v).collect())
    }

    /// Check the field lives on `space`.
    pub fn check_len(&self, space: &MetricMeasureSpace) -> Result<()> {
        if self.values.len() != space.len() {
            return Err(Error::LengthMismatch {
                expected: space.len(),
                found: self.values.len(),
            });
        }
        Ok(())
    }
}

/// A second Borel probability measure ν on the points of a host space.
///
/// Unlike μ, a ν may put zero mass on points (point masses are legal).
#[derive(Debug, Clone, PartialEq)]
pub struct BorelMeasure {
    weights: Vec<f64>,
}

impl BorelMeasure {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        let mut sum = 0.0;
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::NonPositiveWeight { index: i, value: w });
            }
            sum += w;
        }
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::WeightsNotNormalized { sum });
        }
        Ok(Self { weights })
    }

    /// The point mass δ at index `at`.
    pub fn point_mass(n: usize, at: usize) -> Self {
        let mut weights = vec![0.0; n];
        weights[at] = 1.0;
        Self { weights }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn check_len(&self, space: &MetricMeasureSpace) -> Result<()> {
        if self.weights.len() != space.len() {
            return Err(Error::LengthMismatch {
                expected: space.len(),
                found: self.weights.len(),
            });
        }
        Ok(())
    }
}

/// Reference densities for 1-D line discretizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineDensity {
    /// Standard Gaussian density exp(-x²/2)/√(2π).
    Gaussian,
    /// Two-sided exponential density ½·exp(-|x|).
    TwoSidedExponential,
}

impl LineDensity {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            LineDensity::Gaussian => (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt(),
            LineDensity::TwoSidedExponential => 0.5 * (-x.abs()).exp(),
        }
    }
}

/// Largest grid the line discretizer will produce (half_width/step cap).
pub const MAX_HALF_GRID: f64 = 1e6;

/// Discretize a reference density on the segment `[-half_width, half_width]`.
///
/// Grid points are `x_k = -half_width + k·step`; distances are `|x_i - x_j|`;
/// weights are the density sampled at the grid and renormalized, so the tail
/// mass lost to truncation is spread multiplicatively rather than piled onto
/// the boundary. Consecutive points are connected by edges for the
/// discrete-gradient diagnostics.
///
/// Returns the space together with the grid coordinates.
pub fn discretize_line(
    density: LineDensity,
    half_width: f64,
    step: f64,
) -> Result<(MetricMeasureSpace, Vec<f64>)> {
    if !(half_width > 0.0) || !(step > 0.0) {
        return Err(Error::OutOfRange(format!(
            "half_width and step must be positive, got {half_width} and {step}"
        )));
    }
    if half_width / step > MAX_HALF_GRID {
        return Err(Error::GridOverflow {
            points: (2.0 * half_width / step) as usize + 1,
            limit: 2 * MAX_HALF_GRID as usize + 1,
        });
    }
    let intervals = (2.0 * half_width / step + 1e-9).floor() as usize;
    if intervals < 1 {
        return Err(Error::DegenerateGrid { half_width, step });
    }
    let n = intervals + 1;
    let xs: Vec<f64> = (0..n).map(|k| -half_width + k as f64 * step).collect();
    let mut weights: Vec<f64> = xs.iter().map(|&x| density.eval(x)).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    // Kill the residual rounding in the sum so the 1e-12 invariant is exact.
    let resid: f64 = weights.iter().sum::<f64>();
    for w in &mut weights {
        *w /= resid;
    }
    let points = (0..n).map(|k| format!("x{k}")).collect();
    let edges = (0..n - 1).map(|k| (k, k + 1)).collect();
    let space = MetricMeasureSpace::new_line(points, xs.clone(), weights, Some(edges))?;
    Ok((space, xs))
}

/// How to combine factor distances in a product space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricCombine {
    L1,
    L2,
}

/// Cap on the number of points a product space may have.
pub const MAX_PRODUCT_POINTS: usize = 10_000;

/// Product of two spaces with product weights and an ℓ¹ or ℓ² metric
/// combination of the factor distances.
pub fn product_space(
    a: &MetricMeasureSpace,
    b: &MetricMeasureSpace,
    combine: MetricCombine,
) -> Result<MetricMeasureSpace> {
    let n = a.len().checked_mul(b.len()).unwrap_or(usize::MAX);
    if n > MAX_PRODUCT_POINTS {
        return Err(Error::GridOverflow {
            points: n,
            limit: MAX_PRODUCT_POINTS,
        });
    }
    let mut points = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..a.len() {
        for j in 0..b.len() {
            points.push(format!("{}|{}", a.point_ids()[i], b.point_ids()[j]));
            weights.push(a.weights()[i] * b.weights()[j]);
        }
    }
    let mut dist = vec![vec![0.0; n]; n];
    for i1 in 0..a.len() {
        for j1 in 0..b.len() {
            let r = i1 * b.len() + j1;
            for i2 in 0..a.len() {
                for j2 in 0..b.len() {
                    let c = i2 * b.len() + j2;
                    let da = a.dist(i1, i2);
                    let db = b.dist(j1, j2);
                    dist[r][c] = match combine {
                        MetricCombine::L1 => da + db,
                        MetricCombine::L2 => da.hypot(db),
                    };
                }
            }
        }
    }
    // Product weights of two normalized vectors can drift past the 1e-12
    // tolerance; renormalize.
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    MetricMeasureSpace::new_trusted_metric(points, dist, weights, None)
}

/// Bounds on random space sizes.
pub const RANDOM_SPACE_MIN: usize = 2;
pub const RANDOM_SPACE_MAX: usize = 500;

/// A seeded random space: points sampled in the unit cube with the induced
/// Euclidean metric (so the triangle inequality holds by construction) and
/// weights from a flat Dirichlet law. Deterministic per seed.
pub fn random_space(n: usize, seed: u64) -> Result<MetricMeasureSpace> {
    use rand::{Rng, SeedableRng};
    if !(RANDOM_SPACE_MIN..=RANDOM_SPACE_MAX).contains(&n) {
        return Err(Error::OutOfRange(format!(
            "random space size {n} outside [{RANDOM_SPACE_MIN}, {RANDOM_SPACE_MAX}]"
        )));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let coords: Vec<[f64; 3]> = (0..n)
        .map(|_| [rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()])
        .collect();
    let mut dist = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = coords[i]
                .iter()
                .zip(&coords[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            // Collisions have probability zero; nudge if the RNG conspires.
            let d = if d > 0.0 { d } else { 1e-9 };
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    // Flat Dirichlet = normalized unit exponentials.
    let mut weights: Vec<f64> = (0..n)
        .map(|_| (-(1.0 - rng.gen::<f64>()).ln()).max(1e-12))
        .collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let points = (0..n).map(|k| format!("p{k}")).collect();
    MetricMeasureSpace::new_trusted_metric(points, dist, weights, None)
}

/// McShane-type envelope: the largest L-Lipschitz function below `g`,
/// `x ↦ min_y [g(y) + L·d(x,y)]`.
///
/// Leaves `g` unchanged when it is already L-Lipschitz; used to generate
/// log-Lipschitz test functions with a prescribed constant.
pub fn lipschitz_regularize(
    space: &MetricMeasureSpace,
    g: &ScalarField,
    l: f64,
) -> Result<ScalarField> {
    if !(l > 0.0) {
        return Err(Error::OutOfRange(format!(
            "Lipschitz constant must be positive, got {l}"
        )));
    }
    g.check_len(space)?;
    let n = space.len();
    let values: Vec<f64> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| g.values()[y] + l * space.dist(x, y))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    if g.is_positive() {
        ScalarField::positive(values)
    } else {
        ScalarField::unrestricted(values)
    }
}

// ---------------------------------------------------------------------------
// File formats
// ---------------------------------------------------------------------------

/// On-disk space description: either an explicit distance matrix or
/// embedded coordinates with a named metric.
#[derive(Debug, Serialize, Deserialize)]
pub struct SpaceFile {
    pub points: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dist: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<MetricCombine>,
    pub weights: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<(usize, usize)>>,
}

impl SpaceFile {
    /// Validate and build the space this file describes.
    pub fn build(self) -> Result<MetricMeasureSpace> {
        let dist = match (self.dist, self.coords) {
            (Some(d), None) => d,
            (None, Some(coords)) => {
                let metric = self.metric.unwrap_or(MetricCombine::L2);
                let n = coords.len();
                let mut dist = vec![vec![0.0; n]; n];
                for i in 0..n {
                    for j in (i + 1)..n {
                        if coords[i].len() != coords[j].len() {
                            return Err(Error::InvalidInput(
                                "coords rows have mismatched dimensions".into(),
                            ));
                        }
                        let d = match metric {
                            MetricCombine::L1 => coords[i]
                                .iter()
                                .zip(&coords[j])
                                .map(|(a, b)| (a - b).abs())
                                .sum(),
                            MetricCombine::L2 => coords[i]
                                .iter()
                                .zip(&coords[j])
                                .map(|(a, b)| (a - b) * (a - b))
                                .sum::<f64>()
                                .sqrt(),
                        };
                        dist[i][j] = d;
                        dist[j][i] = d;
                    }
                }
                dist
            }
            (Some(_), Some(_)) => {
                return Err(Error::InvalidInput(
                    "space file must give `dist` or `coords`, not both".into(),
                ))
            }
            (None, None) => {
                return Err(Error::InvalidInput(
                    "space file needs a `dist` matrix or `coords` + `metric`".into(),
                ))
            }
        };
        // Embedded coordinates induce a true metric; explicit matrices get
        // the full triangle sweep.
        MetricMeasureSpace::new(self.points, dist, self.weights, self.edges)
    }

    pub fn from_space(space: &MetricMeasureSpace) -> Self {
        SpaceFile {
            points: space.point_ids().to_vec(),
            dist: Some(space.dense_dist()),
            coords: None,
            metric: None,
            weights: space.weights().to_vec(),
            edges: space.edges().map(|e| e.to_vec()),
        }
    }
}

/// On-disk scalar field: `{"values": [...], "positive": bool}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct FieldFile {
    pub values: Vec<f64>,
    #[serde(default)]
    pub positive: bool,
}

impl FieldFile {
    pub fn build(self) -> Result<ScalarField> {
        if self.positive {
            ScalarField::positive(self.values)
        } else {
            ScalarField::unrestricted(self.values)
        }
    }
}

/// On-disk probability vector for a second measure ν.
#[derive(Debug, Serialize, Deserialize)]
pub struct MeasureFile {
    pub weights: Vec<f64>,
}

impl MeasureFile {
    pub fn build(self) -> Result<BorelMeasure> {
        BorelMeasure::new(self.weights)
    }
}
