//! Chord-length cubic splines through contour vertices and uniform
//! arc-length resampling along them.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{Contour, Point};
use crate::error::{Error, Result};

/// How a contour is brought to a fixed vertex count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResampleMode {
    /// One closed periodic spline through every vertex.
    Periodic,
    /// Top side (first half of the vertices) and bottom side (second half)
    /// are splined separately, so the four side endpoints are kept exactly.
    /// Contours with an odd vertex count fall back to `Periodic`.
    #[default]
    Sides,
}

impl ResampleMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ResampleMode::Periodic => "periodic",
            ResampleMode::Sides => "sides",
        }
    }
}

impl std::str::FromStr for ResampleMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" => Ok(ResampleMode::Periodic),
            "sides" => Ok(ResampleMode::Sides),
            other => Err(Error::arg(format!("unknown resample mode `{other}`"))),
        }
    }
}

/// Piecewise cubic stored by knot values and second derivatives.
#[derive(Debug, Clone)]
struct Piecewise {
    knots: Vec<f64>,
    values: Vec<Point>,
    second: Vec<Point>,
}

const SUBINTERVALS: usize = 8;
const GAUSS_ORDER: usize = 10;

/// Gauss-Legendre nodes and weights on [-1, 1].
fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GAUSS_ORDER;
        (0..n)
            .map(|i| {
                let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
                let mut dp = 0.0;
                for _ in 0..100 {
                    let (mut p0, mut p1) = (1.0, x);
                    for k in 2..=n {
                        let k = k as f64;
                        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                        p0 = p1;
                        p1 = p2;
                    }
                    dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                    let dx = p1 / dp;
                    x -= dx;
                    if dx.abs() < 1e-16 {
                        break;
                    }
                }
                (x, 2.0 / ((1.0 - x * x) * dp * dp))
            })
            .collect()
    })
}

impl Piecewise {
    fn segments(&self) -> usize {
        self.knots.len() - 1
    }

    fn width(&self, i: usize) -> f64 {
        self.knots[i + 1] - self.knots[i]
    }

    fn eval_local(&self, i: usize, u: f64) -> Point {
        let h = self.width(i);
        let (p0, p1) = (self.values[i], self.values[i + 1]);
        let (s0, s1) = (self.second[i], self.second[i + 1]);
        let w = h - u;
        s0 * (w * w * w / (6.0 * h))
            + s1 * (u * u * u / (6.0 * h))
            + (p0 * (1.0 / h) - s0 * (h / 6.0)) * w
            + (p1 * (1.0 / h) - s1 * (h / 6.0)) * u
    }

    fn derivative_local(&self, i: usize, u: f64) -> Point {
        let h = self.width(i);
        let (p0, p1) = (self.values[i], self.values[i + 1]);
        let (s0, s1) = (self.second[i], self.second[i + 1]);
        let w = h - u;
        s0 * (-w * w / (2.0 * h)) + s1 * (u * u / (2.0 * h)) + (p1 - p0) * (1.0 / h) - (s1 - s0) * (h / 6.0)
    }

    fn segment_at(&self, t: f64) -> usize {
        let last = self.segments() - 1;
        match self.knots.partition_point(|&k| k <= t) {
            0 => 0,
            p => (p - 1).min(last),
        }
    }

    fn eval(&self, t: f64) -> Point {
        let i = self.segment_at(t);
        self.eval_local(i, t - self.knots[i])
    }

    fn speed(&self, i: usize, u: f64) -> f64 {
        self.derivative_local(i, u).norm()
    }

    fn gauss(&self, i: usize, a: f64, b: f64) -> f64 {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        gauss_legendre()
            .iter()
            .map(|&(x, w)| w * self.speed(i, mid + half * x))
            .sum::<f64>()
            * half
    }

    /// Bisect until the two halves agree with the whole. Plain fixed-order
    /// quadrature loses accuracy where the speed nearly vanishes (tight
    /// loops of the spline), which adaptivity handles.
    fn adaptive(&self, i: usize, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (l, r) = (self.gauss(i, a, m), self.gauss(i, m, b));
        let floor = 8.0 * f64::EPSILON * (l.abs() + r.abs());
        if depth == 0 || (l + r - whole).abs() <= tol.max(floor) {
            return l + r;
        }
        self.adaptive(i, a, m, l, 0.5 * tol, depth - 1) + self.adaptive(i, m, b, r, 0.5 * tol, depth - 1)
    }

    /// Arc length of segment `i` between local parameters `a` and `b`.
    fn length_local(&self, i: usize, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let step = (b - a) / SUBINTERVALS as f64;
        let mut total = 0.0;
        for k in 0..SUBINTERVALS {
            let lo = a + step * k as f64;
            let hi = if k + 1 == SUBINTERVALS { b } else { lo + step };
            let whole = self.gauss(i, lo, hi);
            let tol = 1e-14 * whole.abs().max(f64::MIN_POSITIVE);
            total += self.adaptive(i, lo, hi, whole, tol, 24);
        }
        total
    }

    fn cumulative_lengths(&self) -> Vec<f64> {
        let mut cum = Vec::with_capacity(self.knots.len());
        cum.push(0.0);
        for i in 0..self.segments() {
            let l = self.length_local(i, 0.0, self.width(i));
            cum.push(cum[i] + l);
        }
        cum
    }

    /// Local parameter in segment `i` at which the arc length from the
    /// segment start equals `target`.
    fn invert_length(&self, i: usize, target: f64, seg_len: f64) -> f64 {
        let h = self.width(i);
        if target <= 0.0 {
            return 0.0;
        }
        if target >= seg_len {
            return h;
        }
        let tol = 1e-14 * seg_len.max(1e-300);
        let (mut lo, mut hi) = (0.0, h);
        let mut u = h * target / seg_len;
        for _ in 0..100 {
            let f = self.length_local(i, 0.0, u) - target;
            if f.abs() <= tol {
                break;
            }
            if f > 0.0 {
                hi = u;
            } else {
                lo = u;
            }
            let d = self.speed(i, u);
            let newton = u - f / d;
            u = if d > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo <= 1e-15 * h {
                break;
            }
        }
        u
    }

    /// Points at the given arc-length stations (ascending, within range).
    fn at_stations(&self, stations: &[f64]) -> Vec<Point> {
        let cum = self.cumulative_lengths();
        stations
            .iter()
            .map(|&s| {
                let i = match cum.partition_point(|&c| c <= s) {
                    0 => 0,
                    p => (p - 1).min(self.segments() - 1),
                };
                let seg_len = cum[i + 1] - cum[i];
                let u = self.invert_length(i, s - cum[i], seg_len);
                self.eval_local(i, u)
            })
            .collect()
    }
}

/// Thomas algorithm for a tridiagonal system with point-valued right side.
fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[Point]) -> Vec<Point> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![Point::ORIGIN; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] * (1.0 / diag[0]);
    for i in 1..n {
        let m = diag[i] - sub[i] * c[i - 1];
        c[i] = if i + 1 < n { sup[i] / m } else { 0.0 };
        d[i] = (rhs[i] - d[i - 1] * sub[i]) * (1.0 / m);
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        x[i] = x[i] - x[i + 1] * c[i];
    }
    x
}

fn chord_lengths(points: &[Point], closed: bool) -> Result<Vec<f64>> {
    let n = points.len();
    let segs = if closed { n } else { n - 1 };
    let h: Vec<f64> = (0..segs).map(|i| points[i].distance(points[(i + 1) % n])).collect();
    if let Some(i) = h.iter().position(|&l| l <= 0.0) {
        return Err(Error::contour(format!(
            "vertices {i} and {} coincide; canonicalize first",
            (i + 1) % n
        )));
    }
    Ok(h)
}

/// Closed periodic C2 cubic spline with chord-length knots.
#[derive(Debug, Clone)]
pub struct ClosedSpline {
    inner: Piecewise,
}

impl ClosedSpline {
    pub fn through(contour: &Contour) -> Result<Self> {
        let pts = contour.vertices();
        let m = pts.len();
        let h = chord_lengths(pts, true)?;
        let prev = |i: usize| (i + m - 1) % m;

        let mut sub = vec![0.0; m];
        let mut diag = vec![0.0; m];
        let mut sup = vec![0.0; m];
        let mut rhs = vec![Point::ORIGIN; m];
        for i in 0..m {
            let hp = h[prev(i)];
            let hc = h[i];
            sub[i] = hp;
            diag[i] = 2.0 * (hp + hc);
            sup[i] = hc;
            let fwd = (pts[(i + 1) % m] - pts[i]) * (1.0 / hc);
            let back = (pts[i] - pts[prev(i)]) * (1.0 / hp);
            rhs[i] = (fwd - back) * 6.0;
        }

        // Sherman-Morrison on the cyclic corners A[0][m-1] = sub[0] and
        // A[m-1][0] = sup[m-1].
        let beta = sub[0];
        let alpha = sup[m - 1];
        let gamma = -diag[0];
        let mut d2 = diag.clone();
        d2[0] -= gamma;
        d2[m - 1] -= alpha * beta / gamma;
        let x = solve_tridiagonal(&sub, &d2, &sup, &rhs);
        let mut u = vec![Point::ORIGIN; m];
        u[0] = Point::new(gamma, gamma);
        u[m - 1] = Point::new(alpha, alpha);
        let z = solve_tridiagonal(&sub, &d2, &sup, &u);
        // z is identical in both components; use x for the scalar factor.
        let (z0, zl) = (z[0].x, z[m - 1].x);
        let denom = 1.0 + z0 + beta * zl / gamma;
        let fx = (x[0].x + beta * x[m - 1].x / gamma) / denom;
        let fy = (x[0].y + beta * x[m - 1].y / gamma) / denom;
        let mut second: Vec<Point> = x
            .iter()
            .zip(&z)
            .map(|(xi, zi)| Point::new(xi.x - fx * zi.x, xi.y - fy * zi.x))
            .collect();
        second.push(second[0]);

        let mut knots = Vec::with_capacity(m + 1);
        knots.push(0.0);
        for (i, hi) in h.iter().enumerate() {
            knots.push(knots[i] + hi);
        }
        let mut values = pts.to_vec();
        values.push(pts[0]);
        Ok(Self {
            inner: Piecewise { knots, values, second },
        })
    }

    /// Total parameter range (the polygon perimeter).
    pub fn period(&self) -> f64 {
        *self.inner.knots.last().unwrap()
    }

    pub fn knots(&self) -> &[f64] {
        &self.inner.knots[..self.inner.knots.len() - 1]
    }

    /// Spline position at parameter `t`, wrapped into one period.
    pub fn eval(&self, t: f64) -> Point {
        self.inner.eval(t.rem_euclid(self.period()))
    }

    pub fn arc_length(&self) -> f64 {
        *self.inner.cumulative_lengths().last().unwrap()
    }
}

/// Open natural cubic spline with chord-length knots.
#[derive(Debug, Clone)]
pub struct OpenSpline {
    inner: Piecewise,
}

impl OpenSpline {
    pub fn through(points: &[Point]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::contour("a side needs at least 2 points"));
        }
        let m = points.len();
        let h = chord_lengths(points, false)?;
        let mut second = vec![Point::ORIGIN; m];
        if m > 2 {
            let k = m - 2;
            let mut sub = vec![0.0; k];
            let mut diag = vec![0.0; k];
            let mut sup = vec![0.0; k];
            let mut rhs = vec![Point::ORIGIN; k];
            for r in 0..k {
                let i = r + 1;
                sub[r] = h[i - 1];
                diag[r] = 2.0 * (h[i - 1] + h[i]);
                sup[r] = h[i];
                let fwd = (points[i + 1] - points[i]) * (1.0 / h[i]);
                let back = (points[i] - points[i - 1]) * (1.0 / h[i - 1]);
                rhs[r] = (fwd - back) * 6.0;
            }
            let x = solve_tridiagonal(&sub, &diag, &sup, &rhs);
            second[1..m - 1].copy_from_slice(&x);
        }
        let mut knots = Vec::with_capacity(m);
        knots.push(0.0);
        for (i, hi) in h.iter().enumerate() {
            knots.push(knots[i] + hi);
        }
        Ok(Self {
            inner: Piecewise {
                knots,
                values: points.to_vec(),
                second,
            },
        })
    }

    pub fn eval(&self, t: f64) -> Point {
        self.inner.eval(t)
    }

    pub fn arc_length(&self) -> f64 {
        *self.inner.cumulative_lengths().last().unwrap()
    }

    /// `n >= 2` points at uniform arc length, both endpoints included.
    fn uniform(&self, n: usize) -> Vec<Point> {
        let total = self.arc_length();
        let stations: Vec<f64> = (0..n).map(|k| total * k as f64 / (n - 1) as f64).collect();
        let mut out = self.inner.at_stations(&stations);
        out[0] = self.inner.values[0];
        out[n - 1] = *self.inner.values.last().unwrap();
        out
    }
}

fn check_count(n: usize) -> Result<()> {
    if n < super::MIN_VERTICES {
        return Err(Error::arg(format!(
            "resample count must be at least {}, got {n}",
            super::MIN_VERTICES
        )));
    }
    Ok(())
}

/// Resample `c` to `n` vertices at uniform arc length along the closed
/// chord-length cubic spline through its vertices. The first output vertex
/// is the first input vertex and traversal direction is preserved.
pub fn resample(c: &Contour, n: usize) -> Result<Contour> {
    check_count(n)?;
    let spline = ClosedSpline::through(c)?;
    let cum = spline.inner.cumulative_lengths();
    let total = *cum.last().unwrap();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::contour("zero arc length"));
    }
    let stations: Vec<f64> = (0..n).map(|k| total * k as f64 / n as f64).collect();
    let mut out = spline.inner.at_stations(&stations);
    out[0] = c.vertices()[0];
    Contour::new(out)
}

/// Resample the top and bottom sides separately: `n / 2` points along the
/// top side and `n - n / 2` along the bottom side, endpoints included.
///
/// The vertex count of `c` must be even (top side = first half).
pub fn resample_sides(c: &Contour, n: usize) -> Result<Contour> {
    check_count(n)?;
    let v = c.vertices();
    if !v.len().is_multiple_of(2) {
        return Err(Error::contour(format!(
            "side resampling needs an even vertex count, got {}",
            v.len()
        )));
    }
    let half = v.len() / 2;
    let top = OpenSpline::through(&v[..half])?;
    let bottom = OpenSpline::through(&v[half..])?;
    let mut out = top.uniform(n / 2);
    out.extend(bottom.uniform(n - n / 2));
    Contour::new(out)
}

pub fn resample_with(c: &Contour, n: usize, mode: ResampleMode) -> Result<Contour> {
    match mode {
        ResampleMode::Sides if c.len().is_multiple_of(2) => resample_sides(c, n),
        _ => resample(c, n),
    }
}
