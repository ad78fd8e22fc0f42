//! Closed-contour primitives: canonicalization, resampling and polygon metrics.
//!
//! Vertex order follows the scene-text annotation convention: the top side is
//! listed left to right, then the bottom side right to left, and the polygon
//! closes implicitly from the last vertex back to the first.

mod raster;
mod spline;

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use raster::{polygon_iou, IouOutcome};
pub use spline::{resample, resample_sides, resample_with, ClosedSpline, OpenSpline, ResampleMode};

/// Minimum vertex count of a canonical contour.
pub const MIN_VERTICES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point::new(x, y)
    }
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub min: Point,
    pub max: Point,
}

impl BBox {
    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn center(&self) -> Point {
        Point::new(0.5 * (self.min.x + self.max.x), 0.5 * (self.min.y + self.max.y))
    }

    pub fn union(&self, other: &BBox) -> BBox {
        BBox {
            min: Point::new(self.min.x.min(other.min.x), self.min.y.min(other.min.y)),
            max: Point::new(self.max.x.max(other.max.x), self.max.y.max(other.max.y)),
        }
    }
}

/// An ordered closed polygon.
///
/// Construction only checks that there are at least three finite vertices;
/// the stricter canonical form (no repeated consecutive vertices, at least
/// [`MIN_VERTICES`]) is produced by [`canonicalize`].
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    vertices: Vec<Point>,
}

impl Contour {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::contour(format!(
                "a polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(Error::contour(format!("vertex {i} is not finite")));
        }
        Ok(Self { vertices })
    }

    pub fn from_xy(xy: &[(f64, f64)]) -> Result<Self> {
        Self::new(xy.iter().copied().map(Point::from).collect())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Point> {
        self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges as `(start, end)` pairs, including the closing edge.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn translate(&self, by: Point) -> Contour {
        Contour {
            vertices: self.vertices.iter().map(|&p| p + by).collect(),
        }
    }

    pub fn bbox(&self) -> BBox {
        let mut min = Point::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &self.vertices {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        BBox { min, max }
    }

    /// Shoelace area, positive for counter-clockwise order in a y-up frame.
    pub fn signed_area(&self) -> f64 {
        0.5 * self.edges().map(|(a, b)| a.x * b.y - b.x * a.y).sum::<f64>()
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| a.distance(b)).sum()
    }

    /// Even-odd point-in-polygon test.
    pub fn contains(&self, p: Point) -> bool {
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if x > p.x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Area centroid; falls back to the vertex mean for zero-area polygons.
    pub fn centroid(&self) -> Point {
        let area = self.signed_area();
        if area.abs() <= 1e-12 * self.bbox().width().max(self.bbox().height()).powi(2) {
            let n = self.vertices.len() as f64;
            let s = self.vertices.iter().fold(Point::ORIGIN, |acc, &p| acc + p);
            return s * (1.0 / n);
        }
        let (mut cx, mut cy) = (0.0, 0.0);
        for (a, b) in self.edges() {
            let cross = a.x * b.y - b.x * a.y;
            cx += (a.x + b.x) * cross;
            cy += (a.y + b.y) * cross;
        }
        Point::new(cx / (6.0 * area), cy / (6.0 * area))
    }
}

/// Interleaved `[x1, y1, ..., xN, yN]` packing of a contour.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatContour {
    coords: Vec<f64>,
}

impl FlatContour {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if !coords.len().is_multiple_of(2) {
            return Err(Error::Format(format!("flat contour has odd length {}", coords.len())));
        }
        Ok(Self { coords })
    }

    pub fn zeros(n_vertices: usize) -> Self {
        Self {
            coords: vec![0.0; 2 * n_vertices],
        }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn n_vertices(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn vertex(&self, i: usize) -> Point {
        Point::new(self.coords[2 * i], self.coords[2 * i + 1])
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.coords.chunks_exact(2).map(|c| Point::new(c[0], c[1]))
    }
}

pub fn flatten(c: &Contour) -> FlatContour {
    let coords = c.vertices.iter().flat_map(|p| [p.x, p.y]).collect();
    FlatContour { coords }
}

pub fn unflatten(f: &FlatContour) -> Result<Contour> {
    Contour::new(f.points().collect())
}

/// Coordinate frame a contour is expressed in before encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OriginPolicy {
    /// Translate so the axis-aligned bounding-box center sits at the origin.
    #[serde(rename = "bbox_center", alias = "bbox-center")]
    BBoxCenter,
    /// Keep image coordinates.
    None,
}

impl OriginPolicy {
    pub fn as_str(&self) -> &'static str {
        match self {
            OriginPolicy::BBoxCenter => "bbox_center",
            OriginPolicy::None => "none",
        }
    }
}

impl std::str::FromStr for OriginPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bbox_center" | "bbox-center" => Ok(OriginPolicy::BBoxCenter),
            "none" => Ok(OriginPolicy::None),
            other => Err(Error::arg(format!("unknown origin policy `{other}`"))),
        }
    }
}

/// Drop repeated consecutive vertices (including a closing vertex equal to
/// the first one) and move the origin according to `policy`.
pub fn canonicalize(raw: &Contour, policy: OriginPolicy) -> Result<Contour> {
    canonicalize_with_offset(raw, policy).map(|(c, _)| c)
}

/// Like [`canonicalize`], also returning the offset that was subtracted.
/// Adding the offset back restores image coordinates.
pub fn canonicalize_with_offset(raw: &Contour, policy: OriginPolicy) -> Result<(Contour, Point)> {
    let mut vertices: Vec<Point> = Vec::with_capacity(raw.len());
    for &p in raw.vertices() {
        if vertices.last() != Some(&p) {
            vertices.push(p);
        }
    }
    while vertices.len() > 1 && vertices.first() == vertices.last() {
        vertices.pop();
    }
    if vertices.len() < MIN_VERTICES {
        return Err(Error::contour(format!(
            "need at least {MIN_VERTICES} distinct vertices, got {}",
            vertices.len()
        )));
    }
    let contour = Contour { vertices };
    let offset = match policy {
        OriginPolicy::BBoxCenter => contour.bbox().center(),
        OriginPolicy::None => Point::ORIGIN,
    };
    let contour = if offset == Point::ORIGIN {
        contour
    } else {
        contour.translate(Point::ORIGIN - offset)
    };
    Ok((contour, offset))
}

/// How raw annotations are turned into fixed-size canonical contours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Preparation {
    pub n_vertices: usize,
    pub origin_policy: OriginPolicy,
    pub resample: ResampleMode,
}

impl Default for Preparation {
    fn default() -> Self {
        Self {
            n_vertices: crate::config::DEFAULT_N_VERTICES,
            origin_policy: OriginPolicy::BBoxCenter,
            resample: ResampleMode::Sides,
        }
    }
}

impl Preparation {
    /// Canonicalize, then resample. Returns the prepared contour and the
    /// offset to add back for image coordinates.
    pub fn prepare(&self, raw: &Contour) -> Result<(Contour, Point)> {
        let (canon, offset) = canonicalize_with_offset(raw, self.origin_policy)?;
        let resampled = resample_with(&canon, self.n_vertices, self.resample)?;
        Ok((resampled, offset))
    }
}
