//! Annotation ingestion, synthetic text contours and the contour matrix.
//!
//! Two text formats are understood:
//!
//! * **PolyLines**: one polygon per line, `x1,y1,x2,y2,...,xK,yK`, ASCII
//!   decimal, comma separated. A trailing `####transcription` field (as in
//!   common CTW1500 / Total-Text exports) is ignored, as are blank lines.
//! * **Json**: `{"contours": [[[x, y], ...], ...]}`.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{flatten, Contour, Point, Preparation};
use crate::linalg::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusSource {
    File,
    Synthetic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnnotationFormat {
    PolyLines,
    Json,
}

impl AnnotationFormat {
    /// `.json` files are Json, everything else PolyLines.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => AnnotationFormat::Json,
            _ => AnnotationFormat::PolyLines,
        }
    }
}

/// Prepared contours (uniform vertex count) together with the raw
/// annotations they came from.
#[derive(Debug, Clone)]
pub struct Corpus {
    raw: Vec<Contour>,
    contours: Vec<Contour>,
    offsets: Vec<Point>,
    source: CorpusSource,
    preparation: Preparation,
}

impl Corpus {
    pub fn from_raw(raw: Vec<Contour>, preparation: Preparation, source: CorpusSource) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::Corpus("empty corpus".into()));
        }
        let mut contours = Vec::with_capacity(raw.len());
        let mut offsets = Vec::with_capacity(raw.len());
        for (i, c) in raw.iter().enumerate() {
            let (p, off) = preparation
                .prepare(c)
                .map_err(|e| Error::Corpus(format!("contour {}: {e}", i + 1)))?;
            contours.push(p);
            offsets.push(off);
        }
        Ok(Self {
            raw,
            contours,
            offsets,
            source,
            preparation,
        })
    }

    /// Number of contours `L`.
    pub fn len(&self) -> usize {
        self.contours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contours.is_empty()
    }

    pub fn contours(&self) -> &[Contour] {
        &self.contours
    }

    pub fn raw(&self) -> &[Contour] {
        &self.raw
    }

    /// Offsets that map each prepared contour back to image coordinates.
    pub fn offsets(&self) -> &[Point] {
        &self.offsets
    }

    pub fn source(&self) -> CorpusSource {
        self.source
    }

    pub fn preparation(&self) -> Preparation {
        self.preparation
    }

    pub fn n_vertices(&self) -> usize {
        self.preparation.n_vertices
    }
}

fn parse_number(field: &str, line: usize) -> Result<f64> {
    let v: f64 = field.trim().parse().map_err(|_| Error::Parse {
        line,
        message: format!("cannot parse `{}` as a number", field.trim()),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse {
            line,
            message: "non-finite coordinate".into(),
        });
    }
    Ok(v)
}

/// Parse PolyLines text into raw contours.
pub fn parse_polylines(text: &str) -> Result<Vec<Contour>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let body = line.split("####").next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let values = body
            .split(',')
            .filter(|f| !f.trim().is_empty())
            .map(|f| parse_number(f, lineno))
            .collect::<Result<Vec<f64>>>()?;
        if values.len() % 2 != 0 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("odd coordinate count {}", values.len()),
            });
        }
        if values.len() < 2 * crate::geometry::MIN_VERTICES {
            return Err(Error::Parse {
                line: lineno,
                message: format!("polygon has {} vertices, need at least 4", values.len() / 2),
            });
        }
        let pts = values.chunks_exact(2).map(|c| Point::new(c[0], c[1])).collect();
        out.push(Contour::new(pts).map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?);
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct JsonCorpus {
    contours: Vec<Vec<[f64; 2]>>,
}

pub fn parse_json(text: &str) -> Result<Vec<Contour>> {
    let doc: JsonCorpus = serde_json::from_str(text)?;
    doc.contours
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            if c.len() < crate::geometry::MIN_VERTICES {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("polygon has {} vertices, need at least 4", c.len()),
                });
            }
            Contour::new(c.iter().map(|p| Point::new(p[0], p[1])).collect()).map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

/// Render contours in PolyLines format, one newline-terminated record each.
pub fn write_polylines(contours: &[Contour]) -> String {
    let mut s = String::new();
    for c in contours {
        let fields: Vec<String> = c
            .vertices()
            .iter()
            .flat_map(|p| [p.x.to_string(), p.y.to_string()])
            .collect();
        s.push_str(&fields.join(","));
        s.push('\n');
    }
    s
}

pub fn write_json(contours: &[Contour]) -> Result<String> {
    let doc = JsonCorpus {
        contours: contours
            .iter()
            .map(|c| c.vertices().iter().map(|p| [p.x, p.y]).collect())
            .collect(),
    };
    Ok(serde_json::to_string(&doc)?)
}

pub fn read_raw(path: &Path, format: AnnotationFormat) -> Result<Vec<Contour>> {
    let text = std::fs::read_to_string(path)?;
    match format {
        AnnotationFormat::PolyLines => parse_polylines(&text),
        AnnotationFormat::Json => parse_json(&text),
    }
}

/// Load an annotation file and prepare every contour.
pub fn load_annotations(path: impl AsRef<Path>, format: AnnotationFormat, preparation: Preparation) -> Result<Corpus> {
    let raw = read_raw(path.as_ref(), format)?;
    if raw.is_empty() {
        return Err(Error::Corpus(format!(
            "{} contains no annotations",
            path.as_ref().display()
        )));
    }
    Corpus::from_raw(raw, preparation, CorpusSource::File)
}

/// `2N x L` matrix whose `j`-th column is the flattened `j`-th contour.
pub fn assemble_matrix(corpus: &Corpus) -> Result<Matrix> {
    let n = corpus.n_vertices();
    let columns: Vec<Vec<f64>> = corpus
        .contours
        .iter()
        .enumerate()
        .map(|(j, c)| {
            if c.len() != n {
                return Err(Error::Corpus(format!(
                    "contour {} has {} vertices, corpus uses {n}",
                    j + 1,
                    c.len()
                )));
            }
            Ok(flatten(c).into_coords())
        })
        .collect::<Result<_>>()?;
    Matrix::from_columns(&columns)
}

/// Parameters of the synthetic text-line generator.
///
/// Each contour is a ribbon swept along a spine whose tangent angle is a
/// rotation plus a uniform bend plus low-order sinusoids; the total bend is
/// bounded by `curvature_range`. Seven points are emitted on the top side
/// (left to right) and seven on the bottom side (right to left).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthParams {
    pub count: usize,
    /// Length / height of the text line.
    pub aspect_ratio_range: (f64, f64),
    /// Line height in pixels.
    pub height_range: (f64, f64),
    /// Maximum total bend of the spine, radians.
    pub curvature_range: f64,
    pub wave_harmonics: usize,
    /// Maximum absolute rotation, radians.
    pub rotation_range: f64,
    /// Maximum relative change of the half-width from one end to the other.
    pub taper_range: f64,
    /// Fraction of contours generated with a straight spine.
    pub straight_fraction: f64,
    /// Side of the square image the lines are scattered in.
    pub image_size: f64,
    pub seed: u64,
}

impl Default for SynthParams {
    fn default() -> Self {
        Self {
            count: 2000,
            aspect_ratio_range: (2.0, 12.0),
            height_range: (16.0, 64.0),
            curvature_range: 0.6,
            wave_harmonics: 1,
            rotation_range: 0.35,
            taper_range: 0.2,
            straight_fraction: 0.3,
            image_size: 1024.0,
            seed: 0,
        }
    }
}

impl SynthParams {
    fn validate(&self) -> Result<()> {
        let range_ok = |(lo, hi): (f64, f64)| lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi;
        if self.count == 0 {
            return Err(Error::arg("synthetic count must be positive"));
        }
        if !range_ok(self.aspect_ratio_range) || !range_ok(self.height_range) {
            return Err(Error::arg("aspect and height ranges must be positive with min <= max"));
        }
        let nonneg = |v: f64| v.is_finite() && v >= 0.0;
        if !nonneg(self.curvature_range)
            || !nonneg(self.rotation_range)
            || !nonneg(self.taper_range)
            || self.taper_range >= 2.0
            || !(0.0..=1.0).contains(&self.straight_fraction)
            || !nonneg(self.image_size)
        {
            return Err(Error::arg("synthetic parameters out of range"));
        }
        Ok(())
    }
}

const SIDE_POINTS: usize = 7;
const SPINE_STEPS: usize = 240;

fn uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..hi)
    }
}

fn symmetric(rng: &mut ChaCha8Rng, half: f64) -> f64 {
    if half == 0.0 {
        0.0
    } else {
        rng.gen_range(-half..half)
    }
}

fn synth_one(params: &SynthParams, rng: &mut ChaCha8Rng) -> Contour {
    let height = uniform(rng, params.height_range);
    let aspect = uniform(rng, params.aspect_ratio_range);
    let length = aspect * height;
    let rotation = symmetric(rng, params.rotation_range);
    let taper = symmetric(rng, params.taper_range);

    let straight = rng.gen_bool(params.straight_fraction);
    let budget = if straight { 0.0 } else { params.curvature_range };
    let bend = symmetric(rng, budget);
    let mut remaining = budget - bend.abs();
    let mut waves = Vec::with_capacity(params.wave_harmonics);
    for j in 1..=params.wave_harmonics {
        let amp = symmetric(rng, remaining * 0.5);
        remaining -= amp.abs();
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        waves.push((j as f64, amp, phase));
    }
    let angle = |s: f64| {
        rotation
            + bend * (s - 0.5)
            + waves
                .iter()
                .map(|&(j, a, ph)| a * (std::f64::consts::TAU * j * s + ph).sin())
                .sum::<f64>()
    };

    // Spine by midpoint integration of the unit tangent.
    let mut spine = Vec::with_capacity(SPINE_STEPS + 1);
    let mut pos = Point::ORIGIN;
    spine.push(pos);
    let ds = 1.0 / SPINE_STEPS as f64;
    for k in 0..SPINE_STEPS {
        let th = angle((k as f64 + 0.5) * ds);
        pos = pos + Point::new(th.cos(), th.sin()) * (length * ds);
        spine.push(pos);
    }
    let centre = (spine[0] + spine[SPINE_STEPS]) * 0.5;
    let margin = 0.5 * length;
    let place = Point::new(
        uniform(rng, (margin, (params.image_size - margin).max(margin))),
        uniform(rng, (margin, (params.image_size - margin).max(margin))),
    );

    let station = |k: usize| {
        let s = k as f64 / (SIDE_POINTS - 1) as f64;
        let idx = k * SPINE_STEPS / (SIDE_POINTS - 1);
        let th = angle(s);
        // Image coordinates: y grows downward, so "up" is (sin, -cos).
        let up = Point::new(th.sin(), -th.cos());
        let half = 0.5 * height * (1.0 + taper * (s - 0.5));
        (spine[idx] - centre + place, up * half)
    };
    let mut pts = Vec::with_capacity(2 * SIDE_POINTS);
    for k in 0..SIDE_POINTS {
        let (c, off) = station(k);
        pts.push(c + off);
    }
    for k in (0..SIDE_POINTS).rev() {
        let (c, off) = station(k);
        pts.push(c - off);
    }
    Contour::new(pts).expect("synthetic contour has 14 finite vertices")
}

/// Raw synthetic annotations (14 vertices each), deterministic in `params`.
pub fn synthesize_raw(params: &SynthParams) -> Result<Vec<Contour>> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    Ok((0..params.count).map(|_| synth_one(params, &mut rng)).collect())
}

/// Synthetic corpus prepared with `preparation`.
pub fn generate_synthetic(params: &SynthParams, preparation: Preparation) -> Result<Corpus> {
    Corpus::from_raw(synthesize_raw(params)?, preparation, CorpusSource::Synthetic)
}
