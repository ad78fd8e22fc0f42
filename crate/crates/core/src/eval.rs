//! Representation-quality evaluation: reconstruction IoU statistics per
//! codec, CSV reports and SVG overlays.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::codec::ContourCodec;
use crate::error::{Error, Result};
use crate::geometry::{BBox, Contour};

/// Summary of one codec over one corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRow {
    pub codec: String,
    pub dim: usize,
    pub mean_iou: f64,
    pub median_iou: f64,
    pub p5_iou: f64,
    pub corpus_size: usize,
    pub n_vertices: usize,
    pub resolution: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvalReport {
    rows: Vec<EvalRow>,
}

impl EvalReport {
    pub fn new(mut rows: Vec<EvalRow>) -> Self {
        rows.sort_by(|a, b| (&a.codec, a.dim).cmp(&(&b.codec, b.dim)));
        Self { rows }
    }

    pub fn rows(&self) -> &[EvalRow] {
        &self.rows
    }

    pub fn push(&mut self, row: EvalRow) {
        self.rows.push(row);
        self.rows.sort_by(|a, b| (&a.codec, a.dim).cmp(&(&b.codec, b.dim)));
    }

    pub fn find(&self, codec: &str, dim: usize) -> Option<&EvalRow> {
        self.rows.iter().find(|r| r.codec == codec && r.dim == dim)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.rows {
            w.serialize(r).map_err(|e| Error::Format(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let rows = r
            .deserialize()
            .collect::<std::result::Result<Vec<EvalRow>, _>>()
            .map_err(|e| Error::Format(e.to_string()))?;
        Ok(Self::new(rows))
    }
}

/// Mean, median and 5th percentile (linear interpolation between order
/// statistics).
pub fn summarize(values: &[f64]) -> (f64, f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0, 0.0);
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let quantile = |q: f64| {
        let pos = q * (v.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
    };
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    (mean, quantile(0.5), quantile(0.05))
}

/// Reconstruction IoU of every contour, spread over the available cores.
/// Degenerate reconstructions count as 0.
pub fn reconstruction_ious(codec: &dyn ContourCodec, raws: &[Contour], resolution: usize) -> Result<Vec<f64>> {
    if resolution == 0 {
        return Err(Error::arg("resolution must be positive"));
    }
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(raws.len().max(1));
    let chunk = raws.len().div_ceil(workers).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = raws
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|c| codec.reconstruction_iou(c, resolution).map(|o| o.iou))
                        .collect::<Result<Vec<f64>>>()
                })
            })
            .collect();
        let mut out = Vec::with_capacity(raws.len());
        for h in handles {
            out.extend(h.join().expect("evaluation worker panicked")?);
        }
        Ok(out)
    })
}

pub fn evaluate(codec: &dyn ContourCodec, raws: &[Contour], resolution: usize) -> Result<EvalRow> {
    let ious = reconstruction_ious(codec, raws, resolution)?;
    let (mean_iou, median_iou, p5_iou) = summarize(&ious);
    let spec = codec.spec();
    Ok(EvalRow {
        codec: spec.kind.as_str().to_string(),
        dim: spec.dim,
        mean_iou,
        median_iou,
        p5_iou,
        corpus_size: raws.len(),
        n_vertices: spec.n_vertices,
        resolution,
    })
}

pub const GROUND_TRUTH_STROKE: &str = "#00a000";
pub const RECONSTRUCTION_STROKE: &str = "#e00000";

fn points_attr(c: &Contour) -> String {
    c.vertices()
        .iter()
        .map(|p| format!("{:.3},{:.3}", p.x, p.y))
        .collect::<Vec<_>>()
        .join(" ")
}

/// SVG 1.1 document with the ground truth in green and the reconstruction
/// in red.
pub fn svg_overlay(ground_truth: &Contour, reconstruction: &Contour) -> String {
    let bb: BBox = ground_truth.bbox().union(&reconstruction.bbox());
    let pad = 0.05 * bb.width().max(bb.height()).max(1.0);
    let (x, y) = (bb.min.x - pad, bb.min.y - pad);
    let (w, h) = (bb.width() + 2.0 * pad, bb.height() + 2.0 * pad);
    let stroke = 0.005 * w.max(h);
    format!(
        concat!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{:.3} {:.3} {:.3} {:.3}\">\n",
            "  <polygon points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{:.3}\"/>\n",
            "  <polygon points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{:.3}\"/>\n",
            "</svg>\n"
        ),
        x,
        y,
        w,
        h,
        points_attr(ground_truth),
        GROUND_TRUTH_STROKE,
        stroke,
        points_attr(reconstruction),
        RECONSTRUCTION_STROKE,
        stroke,
    )
}
