use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::codec::{CodecKind, CodecSpec, ContourCodec, ShapeCode};
use crate::error::{Error, Result};
use crate::geometry::{Contour, Point, Preparation};

/// Fourier coefficients of the closed sequence `z_n = x_n + i y_n` for
/// frequencies `-k..=k`, laid out as `[re, im]` pairs in that order
/// (`4k + 2` reals).
pub fn fourier_encode(points: &[Point], k: usize) -> Result<Vec<f64>> {
    let n = points.len();
    if 2 * k + 1 > n {
        return Err(Error::arg(format!(
            "{k} harmonics need at least {} samples, got {n}",
            2 * k + 1
        )));
    }
    let k = k as i64;
    let mut out = Vec::with_capacity(4 * k as usize + 2);
    for f in -k..=k {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, p) in points.iter().enumerate() {
            let phase = -TAU * (f * j as i64).rem_euclid(n as i64) as f64 / n as f64;
            acc += Complex64::new(p.x, p.y) * Complex64::from_polar(1.0, phase);
        }
        acc /= n as f64;
        out.push(acc.re);
        out.push(acc.im);
    }
    Ok(out)
}

/// Evaluate the series at `n` uniformly spaced parameters.
pub fn fourier_decode(values: &[f64], n: usize) -> Result<Vec<Point>> {
    if values.len() < 2 || !(values.len() - 2).is_multiple_of(4) {
        return Err(Error::arg(format!(
            "{} is not a valid Fourier code length",
            values.len()
        )));
    }
    let k = ((values.len() - 2) / 4) as i64;
    let coeffs: Vec<Complex64> = values.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect();
    Ok((0..n)
        .map(|m| {
            let z: Complex64 = (-k..=k)
                .zip(&coeffs)
                .map(|(f, c)| c * Complex64::from_polar(1.0, TAU * f as f64 * m as f64 / n as f64))
                .sum();
            Point::new(z.re, z.im)
        })
        .collect())
}

/// Truncated Fourier series of the resampled contour.
#[derive(Debug, Clone)]
pub struct FourierCodec {
    harmonics: usize,
    preparation: Preparation,
}

impl FourierCodec {
    pub fn new(harmonics: usize, preparation: Preparation) -> Result<Self> {
        if 2 * harmonics + 1 > preparation.n_vertices {
            return Err(Error::arg(format!(
                "{harmonics} harmonics need at least {} vertices, got {}",
                2 * harmonics + 1,
                preparation.n_vertices
            )));
        }
        Ok(Self { harmonics, preparation })
    }
}

impl ContourCodec for FourierCodec {
    fn spec(&self) -> CodecSpec {
        CodecSpec {
            kind: CodecKind::FourierContour,
            dim: 4 * self.harmonics + 2,
            n_vertices: self.preparation.n_vertices,
        }
    }

    fn encode(&self, raw: &Contour) -> Result<ShapeCode> {
        let (c, anchor) = self.preparation.prepare(raw)?;
        Ok(ShapeCode {
            anchor,
            values: fourier_encode(c.vertices(), self.harmonics)?,
        })
    }

    fn decode(&self, code: &ShapeCode) -> Result<Contour> {
        if code.values.len() != 4 * self.harmonics + 2 {
            return Err(Error::arg(format!(
                "expected {} Fourier reals, got {}",
                4 * self.harmonics + 2,
                code.values.len()
            )));
        }
        let pts = fourier_decode(&code.values, self.preparation.n_vertices)?;
        Contour::new(pts.into_iter().map(|p| p + code.anchor).collect())
    }
}
