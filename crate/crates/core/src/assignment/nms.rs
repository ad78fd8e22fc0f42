use super::cost::SamplePrediction;
use crate::error::{Error, Result};
use crate::geometry::{polygon_iou, unflatten, Contour};

/// Greedy polygon NMS over bare contours. Returns kept indices in
/// descending score order (equal scores: lower index first).
pub fn nms_contours(contours: &[Contour], scores: &[f64], threshold: f64, resolution: usize) -> Result<Vec<usize>> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::arg(format!("NMS threshold must be in (0, 1), got {threshold}")));
    }
    if contours.len() != scores.len() {
        return Err(Error::arg("one score per contour is required"));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::Numeric("NaN score".into()));
    }
    let mut order: Vec<usize> = (0..contours.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let mut kept: Vec<usize> = Vec::new();
    for i in order {
        let suppressed = kept
            .iter()
            .any(|&k| polygon_iou(&contours[k], &contours[i], resolution).iou >= threshold);
        if !suppressed {
            kept.push(i);
        }
    }
    Ok(kept)
}

/// Greedy polygon NMS over predictions: keep the best remaining score,
/// drop everything overlapping it by at least `threshold`, repeat.
pub fn polygon_nms(preds: &[SamplePrediction], threshold: f64, resolution: usize) -> Result<Vec<usize>> {
    let contours = preds
        .iter()
        .map(|p| unflatten(&p.contour))
        .collect::<Result<Vec<_>>>()?;
    let scores: Vec<f64> = preds.iter().map(|p| p.score).collect();
    nms_contours(&contours, &scores, threshold, resolution)
}
