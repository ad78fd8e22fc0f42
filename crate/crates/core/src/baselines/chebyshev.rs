use std::f64::consts::{PI, TAU};

use crate::codec::{CodecKind, CodecSpec, ContourCodec, ShapeCode};
use crate::error::{Error, Result};
use crate::geometry::{Contour, Point};
use crate::linalg::{least_squares, Matrix};

/// Chebyshev polynomials `T_0(x) .. T_{k-1}(x)`.
pub fn chebyshev_series(x: f64, k: usize) -> Vec<f64> {
    let mut t = Vec::with_capacity(k);
    for j in 0..k {
        t.push(match j {
            0 => 1.0,
            1 => x,
            _ => 2.0 * x * t[j - 1] - t[j - 2],
        });
    }
    t
}

/// Map a polar angle in `[0, 2pi)` onto the Chebyshev domain `[-1, 1)`.
fn to_domain(theta: f64) -> f64 {
    theta / PI - 1.0
}

/// Distance from `center` to the farthest boundary crossing along `theta`,
/// or 0 when the ray misses the polygon.
fn ray_radius(polygon: &Contour, center: Point, theta: f64) -> f64 {
    let d = Point::new(theta.cos(), theta.sin());
    let mut best = 0.0_f64;
    for (a, b) in polygon.edges() {
        let e = b - a;
        let denom = d.x * e.y - d.y * e.x;
        if denom.abs() < 1e-15 {
            continue;
        }
        let w = a - center;
        let t = (w.x * e.y - w.y * e.x) / denom;
        let s = (w.x * d.y - w.y * d.x) / denom;
        if t > 0.0 && (0.0..=1.0).contains(&s) {
            best = best.max(t);
        }
    }
    best
}

/// Encoded contour plus whether the centroid fell outside the polygon (the
/// polar representation is then only an approximation of a non-star shape).
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevEncoding {
    pub code: ShapeCode,
    pub degenerate: bool,
}

/// Polar radius-vs-angle fit with `terms` Chebyshev coefficients.
#[derive(Debug, Clone)]
pub struct ChebyshevCodec {
    terms: usize,
    n_vertices: usize,
}

impl ChebyshevCodec {
    pub fn new(terms: usize, n_vertices: usize) -> Result<Self> {
        CodecSpec::new(CodecKind::ChebyshevPolar, terms, n_vertices)?;
        Ok(Self { terms, n_vertices })
    }

    fn samples(&self) -> usize {
        (4 * self.terms).max(360)
    }

    pub fn encode_detailed(&self, raw: &Contour) -> Result<ChebyshevEncoding> {
        let center = raw.centroid();
        let degenerate = !raw.contains(center);
        let s = self.samples();
        let thetas: Vec<f64> = (0..s).map(|i| TAU * i as f64 / s as f64).collect();
        let radii: Vec<f64> = thetas.iter().map(|&t| ray_radius(raw, center, t)).collect();
        let data = thetas
            .iter()
            .flat_map(|&t| chebyshev_series(to_domain(t), self.terms))
            .collect();
        let design = Matrix::new(s, self.terms, data)?;
        let values = least_squares(&design, &radii)?;
        Ok(ChebyshevEncoding {
            code: ShapeCode { anchor: center, values },
            degenerate,
        })
    }
}

impl ContourCodec for ChebyshevCodec {
    fn spec(&self) -> CodecSpec {
        CodecSpec {
            kind: CodecKind::ChebyshevPolar,
            dim: self.terms,
            n_vertices: self.n_vertices,
        }
    }

    fn encode(&self, raw: &Contour) -> Result<ShapeCode> {
        self.encode_detailed(raw).map(|e| e.code)
    }

    fn decode(&self, code: &ShapeCode) -> Result<Contour> {
        if code.values.len() != self.terms {
            return Err(Error::arg(format!(
                "expected {} Chebyshev coefficients, got {}",
                self.terms,
                code.values.len()
            )));
        }
        let n = self.n_vertices;
        let pts = (0..n)
            .map(|i| {
                let theta = TAU * i as f64 / n as f64;
                let t = chebyshev_series(to_domain(theta), self.terms);
                let r: f64 = t.iter().zip(&code.values).map(|(a, b)| a * b).sum();
                code.anchor + Point::new(theta.cos(), theta.sin()) * r
            })
            .collect();
        Contour::new(pts)
    }
}
