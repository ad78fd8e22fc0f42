use crate::config::{EPSILON, FOCAL_ALPHA, FOCAL_GAMMA};
use crate::error::{Error, Result};
use crate::geometry::FlatContour;

fn clamp(p: f64) -> f64 {
    p.clamp(EPSILON, 1.0 - EPSILON)
}

/// Binary cross entropy of one prediction.
pub fn cross_entropy(pred: f64, positive: bool) -> f64 {
    let p = clamp(pred);
    if positive {
        -p.ln()
    } else {
        -(1.0 - p).ln()
    }
}

/// Binary focal loss of one prediction (alpha 0.25, gamma 2).
pub fn focal_loss(pred: f64, positive: bool) -> f64 {
    let p = clamp(pred);
    if positive {
        -FOCAL_ALPHA * (1.0 - p).powf(FOCAL_GAMMA) * p.ln()
    } else {
        -(1.0 - FOCAL_ALPHA) * p.powf(FOCAL_GAMMA) * (1.0 - p).ln()
    }
}

fn check_pairs(preds: &[f64], targets: &[bool]) -> Result<()> {
    if preds.len() != targets.len() {
        return Err(Error::arg("predictions and targets differ in length"));
    }
    Ok(())
}

/// Mean cross entropy over a map (text-region loss).
pub fn dense_cross_entropy(preds: &[f64], targets: &[bool]) -> Result<f64> {
    check_pairs(preds, targets)?;
    if preds.is_empty() {
        return Ok(0.0);
    }
    Ok(preds
        .iter()
        .zip(targets)
        .map(|(&p, &t)| cross_entropy(p, t))
        .sum::<f64>()
        / preds.len() as f64)
}

/// Focal loss summed over a map and divided by the positive count (at
/// least one), the usual normalization for sparse targets.
pub fn sparse_focal_loss(preds: &[f64], targets: &[bool]) -> Result<f64> {
    check_pairs(preds, targets)?;
    let positives = targets.iter().filter(|t| **t).count().max(1);
    Ok(preds.iter().zip(targets).map(|(&p, &t)| focal_loss(p, t)).sum::<f64>() / positives as f64)
}

/// Smooth-L1 (Huber, beta = 1) averaged over all `2N` coordinates.
pub fn smooth_l1(pred: &FlatContour, target: &FlatContour) -> Result<f64> {
    let (a, b) = (pred.coords(), target.coords());
    if a.len() != b.len() {
        return Err(Error::arg("contours differ in length"));
    }
    const BETA: f64 = 1.0;
    let sum: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| {
            let d = (x - y).abs();
            if d < BETA {
                0.5 * d * d / BETA
            } else {
                d - 0.5 * BETA
            }
        })
        .sum();
    Ok(sum / a.len() as f64)
}

/// Smooth-L1 summed over the samples inside the positive mask.
pub fn regression_loss(preds: &[FlatContour], targets: &[FlatContour], positive: &[bool]) -> Result<f64> {
    if preds.len() != targets.len() || preds.len() != positive.len() {
        return Err(Error::arg("regression inputs differ in length"));
    }
    let mut total = 0.0;
    for ((p, t), &m) in preds.iter().zip(targets).zip(positive) {
        if m {
            total += smooth_l1(p, t)?;
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossBreakdown {
    pub text_region: f64,
    pub sparse_region: f64,
    pub regression: f64,
}

impl LossBreakdown {
    pub fn classification(&self) -> f64 {
        self.text_region + self.sparse_region
    }
}

/// Classification (text region + sparse region) plus regression.
pub fn total_loss(parts: &LossBreakdown) -> f64 {
    parts.classification() + parts.regression
}
