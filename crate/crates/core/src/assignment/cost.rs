use serde::{Deserialize, Serialize};

use crate::config::{DEFAULT_K, DEFAULT_LAMBDA, EPSILON, FOCAL_ALPHA, FOCAL_GAMMA};
use crate::error::{Error, Result};
use crate::geometry::{FlatContour, Point};

/// One candidate positive sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePrediction {
    pub location: Point,
    pub score: f64,
    pub contour: FlatContour,
    pub in_text_region: bool,
}

impl SamplePrediction {
    pub fn new(location: Point, score: f64, contour: FlatContour, in_text_region: bool) -> Result<Self> {
        if !score.is_finite() {
            return Err(Error::arg("sample score must be finite"));
        }
        Ok(Self {
            location,
            score,
            contour,
            in_text_region,
        })
    }
}

/// How the contour distance between a prediction and an instance is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegressionDistance {
    /// Sum over vertices of the Euclidean distance between matching vertices.
    #[default]
    VertexEuclidean,
    /// Sum of absolute coordinate differences.
    CoordinateL1,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostParams {
    pub lambda: f64,
    pub k: usize,
    pub epsilon: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub distance: RegressionDistance,
    /// Divide the contour distance by the vertex count.
    pub normalize_by_vertices: bool,
}

impl Default for CostParams {
    fn default() -> Self {
        Self {
            lambda: DEFAULT_LAMBDA,
            k: DEFAULT_K,
            epsilon: EPSILON,
            alpha: FOCAL_ALPHA,
            gamma: FOCAL_GAMMA,
            distance: RegressionDistance::VertexEuclidean,
            normalize_by_vertices: false,
        }
    }
}

/// Focal-derived classification cost with the default alpha, gamma and
/// clamping: `-a(1-x)^g ln x + (1-a) x^g ln(1-x)`.
pub fn focal_term(x: f64) -> f64 {
    focal_term_with(x, FOCAL_ALPHA, FOCAL_GAMMA, EPSILON)
}

pub fn focal_term_with(x: f64, alpha: f64, gamma: f64, epsilon: f64) -> f64 {
    let x = x.clamp(epsilon, 1.0 - epsilon);
    -alpha * (1.0 - x).powf(gamma) * x.ln() + (1.0 - alpha) * x.powf(gamma) * (1.0 - x).ln()
}

/// Samples x replicated instances; `+inf` marks samples outside text.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    rows: usize,
    n_instances: usize,
    k: usize,
    lambda: f64,
    values: Vec<f64>,
}

impl CostMatrix {
    /// Wrap raw costs for `n_instances` instances, each already laid out as
    /// `k` consecutive columns.
    pub fn from_values(rows: usize, n_instances: usize, k: usize, lambda: f64, values: Vec<f64>) -> Result<Self> {
        if k == 0 {
            return Err(Error::arg("k must be at least 1"));
        }
        if values.len() != rows * n_instances * k {
            return Err(Error::arg("cost values do not match the matrix shape"));
        }
        if values.iter().any(|v| v.is_nan() || *v == f64::NEG_INFINITY) {
            return Err(Error::Numeric("costs must be finite or +inf".into()));
        }
        Ok(Self {
            rows,
            n_instances,
            k,
            lambda,
            values,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.n_instances * self.k
    }

    pub fn n_instances(&self) -> usize {
        self.n_instances
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols() + col]
    }

    /// Cost of pairing `sample` with `instance` (replicas are identical).
    pub fn cost(&self, sample: usize, instance: usize) -> f64 {
        self.get(sample, instance * self.k)
    }

    pub fn instance_of(&self, col: usize) -> usize {
        col / self.k
    }
}

fn contour_distance(a: &FlatContour, b: &FlatContour, params: &CostParams) -> f64 {
    let (a, b) = (a.coords(), b.coords());
    let d: f64 = match params.distance {
        RegressionDistance::VertexEuclidean => a
            .chunks_exact(2)
            .zip(b.chunks_exact(2))
            .map(|(p, q)| (p[0] - q[0]).hypot(p[1] - q[1]))
            .sum(),
        RegressionDistance::CoordinateL1 => a.iter().zip(b).map(|(p, q)| (p - q).abs()).sum(),
    };
    if params.normalize_by_vertices {
        d / (a.len() / 2) as f64
    } else {
        d
    }
}

pub fn build_cost_matrix(
    samples: &[SamplePrediction],
    instances: &[FlatContour],
    params: &CostParams,
) -> Result<CostMatrix> {
    if !(params.lambda.is_finite() && params.lambda >= 0.0) {
        return Err(Error::arg("lambda must be finite and non-negative"));
    }
    if params.k == 0 {
        return Err(Error::arg("k must be at least 1"));
    }
    let len = instances
        .first()
        .map(|c| c.coords().len())
        .or_else(|| samples.first().map(|s| s.contour.coords().len()));
    if let Some(len) = len {
        let bad = instances
            .iter()
            .map(|c| c.coords().len())
            .chain(samples.iter().map(|s| s.contour.coords().len()))
            .any(|l| l != len);
        if bad {
            return Err(Error::arg("all contours must share the same vertex count"));
        }
    }
    let cols = instances.len() * params.k;
    let mut values = Vec::with_capacity(samples.len() * cols);
    for s in samples {
        if !s.in_text_region {
            values.extend(std::iter::repeat_n(f64::INFINITY, cols));
            continue;
        }
        let cls = focal_term_with(s.score, params.alpha, params.gamma, params.epsilon);
        for inst in instances {
            let v = if params.lambda == 0.0 {
                cls
            } else {
                cls + params.lambda * contour_distance(&s.contour, inst, params)
            };
            values.extend(std::iter::repeat_n(v, params.k));
        }
    }
    CostMatrix::from_values(samples.len(), instances.len(), params.k, params.lambda, values)
}
