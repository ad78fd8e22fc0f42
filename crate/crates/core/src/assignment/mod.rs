//! Sparse positive-sample assignment.
//!
//! Every candidate sample carries a classification score, a decoded contour
//! and a flag telling whether it lies inside a text region. The cost of
//! pairing sample `i` with ground-truth instance `j` is a focal-derived
//! score term plus `lambda` times the contour distance, and `+inf` for
//! samples outside every text region. Each instance is replicated `K` times
//! so that a minimum-cost bipartite matching hands it `K` samples.

mod cost;
mod hungarian;
mod loss;
mod nms;

pub use cost::{
    build_cost_matrix, focal_term, focal_term_with, CostMatrix, CostParams, RegressionDistance, SamplePrediction,
};
pub use hungarian::{hungarian_match, solve_assignment, MatchResult};
pub use loss::{
    cross_entropy, dense_cross_entropy, focal_loss, regression_loss, smooth_l1, sparse_focal_loss, total_loss,
    LossBreakdown,
};
pub use nms::{nms_contours, polygon_nms};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{flatten, Contour, FlatContour, Point};

/// JSON form of one candidate sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub x: f64,
    pub y: f64,
    pub score: f64,
    pub in_tr: bool,
    pub contour: Vec<[f64; 2]>,
}

/// JSON input of the matcher: candidate samples and ground-truth contours.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchInput {
    pub samples: Vec<SampleRecord>,
    pub instances: Vec<Vec<[f64; 2]>>,
}

/// JSON output of the matcher.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchOutput {
    /// `[sample, instance]` pairs, ordered by instance then sample.
    pub pairs: Vec<[usize; 2]>,
    pub total_cost: f64,
    pub unmatched_instances: Vec<usize>,
    /// Samples surviving polygon NMS among the matched ones, by score.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kept_after_nms: Option<Vec<usize>>,
}

fn flat_from_pairs(points: &[[f64; 2]]) -> Result<FlatContour> {
    let pts = points.iter().map(|p| Point::new(p[0], p[1])).collect();
    Ok(flatten(&Contour::new(pts)?))
}

impl MatchInput {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Typed samples and instances.
    pub fn decode(&self) -> Result<(Vec<SamplePrediction>, Vec<FlatContour>)> {
        let samples = self
            .samples
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let contour = flat_from_pairs(&s.contour).map_err(|e| Error::Corpus(format!("sample {i}: {e}")))?;
                SamplePrediction::new(Point::new(s.x, s.y), s.score, contour, s.in_tr)
                    .map_err(|e| Error::Corpus(format!("sample {i}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let instances = self
            .instances
            .iter()
            .enumerate()
            .map(|(j, c)| flat_from_pairs(c).map_err(|e| Error::Corpus(format!("instance {j}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok((samples, instances))
    }
}

impl From<&MatchResult> for MatchOutput {
    fn from(m: &MatchResult) -> Self {
        MatchOutput {
            pairs: m.pairs.iter().map(|&(s, i)| [s, i]).collect(),
            total_cost: m.total_cost,
            unmatched_instances: m.unmatched_instances.clone(),
            kept_after_nms: None,
        }
    }
}
