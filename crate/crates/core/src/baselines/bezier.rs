use crate::codec::{CodecKind, CodecSpec, ContourCodec, ShapeCode};
use crate::error::{Error, Result};
use crate::geometry::{canonicalize_with_offset, Contour, OriginPolicy, Point};
use crate::linalg::{least_squares, Matrix};

fn bernstein(t: f64) -> [f64; 4] {
    let s = 1.0 - t;
    [s * s * s, 3.0 * s * s * t, 3.0 * s * t * t, t * t * t]
}

fn eval(ctrl: &[Point; 4], t: f64) -> Point {
    let b = bernstein(t);
    ctrl.iter().zip(b).fold(Point::ORIGIN, |acc, (&p, w)| acc + p * w)
}

/// Cubic Bezier through the endpoints of `side`, inner control points fitted
/// by least squares at chord-length parameters. Two points give a straight
/// segment, three an exactly interpolating (degree-elevated) quadratic.
pub fn fit_cubic(side: &[Point]) -> Result<[Point; 4]> {
    let m = side.len();
    if m < 2 {
        return Err(Error::contour("a Bezier side needs at least two points"));
    }
    let (p0, p3) = (side[0], side[m - 1]);
    let mut t = vec![0.0; m];
    for i in 1..m {
        t[i] = t[i - 1] + side[i].distance(side[i - 1]);
    }
    let total = t[m - 1];
    if total <= 0.0 {
        return Err(Error::contour("a Bezier side has zero length"));
    }
    t.iter_mut().for_each(|v| *v /= total);

    match m {
        2 => Ok([p0, p0 + (p3 - p0) * (1.0 / 3.0), p0 + (p3 - p0) * (2.0 / 3.0), p3]),
        3 => {
            let u = t[1];
            if u <= 0.0 || u >= 1.0 {
                return Err(Error::contour("repeated point on a Bezier side"));
            }
            let q = (side[1] - p0 * ((1.0 - u) * (1.0 - u)) - p3 * (u * u)) * (1.0 / (2.0 * u * (1.0 - u)));
            Ok([
                p0,
                p0 * (1.0 / 3.0) + q * (2.0 / 3.0),
                q * (2.0 / 3.0) + p3 * (1.0 / 3.0),
                p3,
            ])
        }
        _ => {
            let mut rows = Vec::with_capacity(2 * m);
            let mut rx = Vec::with_capacity(m);
            let mut ry = Vec::with_capacity(m);
            for (ti, q) in t.iter().zip(side) {
                let b = bernstein(*ti);
                rows.extend([b[1], b[2]]);
                let r = *q - p0 * b[0] - p3 * b[3];
                rx.push(r.x);
                ry.push(r.y);
            }
            let a = Matrix::new(m, 2, rows)?;
            let x = least_squares(&a, &rx)?;
            let y = least_squares(&a, &ry)?;
            Ok([p0, Point::new(x[0], y[0]), Point::new(x[1], y[1]), p3])
        }
    }
}

/// One cubic Bezier per long side: the first half of the vertices is the
/// top side, the second half the bottom side.
#[derive(Debug, Clone)]
pub struct BezierCodec {
    n_vertices: usize,
}

impl BezierCodec {
    pub fn new(n_vertices: usize) -> Result<Self> {
        CodecSpec::new(CodecKind::BezierSides, 16, n_vertices)?;
        Ok(Self { n_vertices })
    }
}

impl ContourCodec for BezierCodec {
    fn spec(&self) -> CodecSpec {
        CodecSpec {
            kind: CodecKind::BezierSides,
            dim: 16,
            n_vertices: self.n_vertices,
        }
    }

    fn encode(&self, raw: &Contour) -> Result<ShapeCode> {
        let (c, anchor) = canonicalize_with_offset(raw, OriginPolicy::BBoxCenter)?;
        let v = c.vertices();
        let half = v.len() / 2;
        let mut values = Vec::with_capacity(16);
        for side in [&v[..half], &v[half..]] {
            for p in fit_cubic(side)? {
                values.extend([p.x, p.y]);
            }
        }
        Ok(ShapeCode { anchor, values })
    }

    fn decode(&self, code: &ShapeCode) -> Result<Contour> {
        if code.values.len() != 16 {
            return Err(Error::arg(format!(
                "expected 16 Bezier reals, got {}",
                code.values.len()
            )));
        }
        let ctrl = |side: usize| -> [Point; 4] {
            std::array::from_fn(|i| {
                let j = 8 * side + 2 * i;
                Point::new(code.values[j], code.values[j + 1]) + code.anchor
            })
        };
        let top_n = self.n_vertices / 2;
        let mut pts = Vec::with_capacity(self.n_vertices);
        for (side, count) in [(0, top_n), (1, self.n_vertices - top_n)] {
            let cp = ctrl(side);
            for j in 0..count {
                pts.push(eval(&cp, j as f64 / (count - 1) as f64));
            }
        }
        Contour::new(pts)
    }
}
