//! Independent reference implementations used by the integration tests.
#![allow(dead_code, clippy::too_many_arguments, clippy::needless_range_loop)]

use eigenanchor::geometry::{Contour, Point};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Solve a dense linear system by Gaussian elimination with partial pivoting.
pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                for k in col..n {
                    a[row][k] -= f * a[col][k];
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// Cubic spline through `pts` at parameters `t` written in power form per
/// segment: `p(t) = a + b u + c u^2 + d u^3`, `u = t - t_i`.
pub struct RefSpline {
    pub t: Vec<f64>,
    coef: Vec<[Point; 4]>,
}

impl RefSpline {
    /// Chord-length cubic spline. `closed` gives periodic C2 end
    /// conditions, otherwise natural ones. The unknowns are the first
    /// derivatives at the knots.
    pub fn new(pts: &[Point], closed: bool) -> RefSpline {
        let mut knots_pts = pts.to_vec();
        if closed {
            knots_pts.push(pts[0]);
        }
        let m = knots_pts.len();
        let mut t = vec![0.0; m];
        for i in 1..m {
            t[i] = t[i - 1] + knots_pts[i].distance(knots_pts[i - 1]);
        }
        let h: Vec<f64> = (0..m - 1).map(|i| t[i + 1] - t[i]).collect();
        let seg = m - 1;
        // Unknown derivatives: one per knot (open) or per distinct knot (closed).
        let nu = if closed { seg } else { m };
        let idx = |i: usize| if closed { i % seg } else { i };
        let mut coef = Vec::with_capacity(seg);
        let mut derivs = [vec![0.0; nu], vec![0.0; nu]];
        for (dim, out) in derivs.iter_mut().enumerate() {
            let y: Vec<f64> = knots_pts.iter().map(|p| if dim == 0 { p.x } else { p.y }).collect();
            let mut a = vec![vec![0.0; nu]; nu];
            let mut b = vec![0.0; nu];
            // Continuity of the second derivative at interior knots:
            // D_{i-1}/h_{i-1} + 2 D_i (1/h_{i-1} + 1/h_i) + D_{i+1}/h_i
            //   = 3 (dy_{i-1}/h_{i-1}^2 + dy_i/h_i^2)
            let interior: Vec<usize> = if closed {
                (0..seg).collect()
            } else {
                (1..m - 1).collect()
            };
            for &i in &interior {
                let (hp, hn) = if closed {
                    (h[(i + seg - 1) % seg], h[i])
                } else {
                    (h[i - 1], h[i])
                };
                let (yp, yc, yn) = if closed {
                    (y[(i + seg - 1) % seg], y[i], y[i + 1])
                } else {
                    (y[i - 1], y[i], y[i + 1])
                };
                let (prev, next) = if closed {
                    ((i + seg - 1) % seg, (i + 1) % seg)
                } else {
                    (i - 1, i + 1)
                };
                let row = idx(i);
                a[row][prev] += 1.0 / hp;
                a[row][row] += 2.0 * (1.0 / hp + 1.0 / hn);
                a[row][next] += 1.0 / hn;
                b[row] = 3.0 * ((yc - yp) / (hp * hp) + (yn - yc) / (hn * hn));
            }
            if !closed {
                // Zero second derivative at both ends.
                a[0][0] = 2.0;
                a[0][1] = 1.0;
                b[0] = 3.0 * (y[1] - y[0]) / h[0];
                let l = m - 1;
                a[l][l - 1] = 1.0;
                a[l][l] = 2.0;
                b[l] = 3.0 * (y[l] - y[l - 1]) / h[l - 1];
            }
            *out = dense_solve(a, b);
        }
        for i in 0..seg {
            let p0 = knots_pts[i];
            let p1 = knots_pts[i + 1];
            let d0 = Point::new(derivs[0][idx(i)], derivs[1][idx(i)]);
            let d1 = Point::new(derivs[0][idx(i + 1)], derivs[1][idx(i + 1)]);
            let hi = h[i];
            let c = (p1 - p0) * (3.0 / (hi * hi)) - d0 * (2.0 / hi) - d1 * (1.0 / hi);
            let d = (p0 - p1) * (2.0 / (hi * hi * hi)) + (d0 + d1) * (1.0 / (hi * hi));
            coef.push([p0, d0, c, d]);
        }
        RefSpline { t, coef }
    }

    pub fn eval(&self, seg: usize, u: f64) -> Point {
        let [a, b, c, d] = self.coef[seg];
        a + b * u + c * (u * u) + d * (u * u * u)
    }

    fn speed(&self, seg: usize, u: f64) -> f64 {
        let [_, b, c, d] = self.coef[seg];
        (b + c * (2.0 * u) + d * (3.0 * u * u)).norm()
    }

    /// Arc length of segment `seg` over local parameter `[0, u]` by
    /// adaptive Simpson quadrature.
    pub fn seg_length(&self, seg: usize, u: f64) -> f64 {
        fn simpson(
            f: &dyn Fn(f64) -> f64,
            a: f64,
            b: f64,
            fa: f64,
            fm: f64,
            fb: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                return left + right + (left + right - whole) / 15.0;
            }
            simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
        if u <= 0.0 {
            return 0.0;
        }
        let f = |x: f64| self.speed(seg, x);
        let (fa, fm, fb) = (f(0.0), f(0.5 * u), f(u));
        let whole = u / 6.0 * (fa + 4.0 * fm + fb);
        simpson(&f, 0.0, u, fa, fm, fb, whole, 1e-13, 40)
    }

    pub fn total_length(&self) -> f64 {
        (0..self.coef.len())
            .map(|s| self.seg_length(s, self.t[s + 1] - self.t[s]))
            .sum()
    }

    /// Point at arc length `s` from the start, located by bisection.
    pub fn at_length(&self, s: f64) -> Point {
        let mut acc = 0.0;
        for seg in 0..self.coef.len() {
            let h = self.t[seg + 1] - self.t[seg];
            let len = self.seg_length(seg, h);
            if s <= acc + len || seg == self.coef.len() - 1 {
                let target = s - acc;
                let (mut lo, mut hi) = (0.0, h);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if self.seg_length(seg, mid) < target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if hi - lo < 1e-14 * h {
                        break;
                    }
                }
                return self.eval(seg, 0.5 * (lo + hi));
            }
            acc += len;
        }
        unreachable!()
    }
}

/// Uniform arc-length stations on the closed reference spline, starting at
/// the first vertex.
pub fn oracle_resample(c: &Contour, n: usize) -> Vec<Point> {
    let s = RefSpline::new(c.vertices(), true);
    let total = s.total_length();
    (0..n).map(|k| s.at_length(total * k as f64 / n as f64)).collect()
}

/// Side-wise oracle: natural splines through each half, endpoints included.
pub fn oracle_resample_sides(c: &Contour, n: usize) -> Vec<Point> {
    let v = c.vertices();
    let half = v.len() / 2;
    let mut out = Vec::new();
    for (side, count) in [(&v[..half], n / 2), (&v[half..], n - n / 2)] {
        let s = RefSpline::new(side, false);
        let total = s.total_length();
        out.extend((0..count).map(|k| s.at_length(total * k as f64 / (count - 1) as f64)));
    }
    out
}

/// Random star-shaped polygon with a vertex count and radius drawn from the
/// given ranges.
pub fn random_star(rng: &mut ChaCha8Rng, vertices: std::ops::Range<usize>, scale: std::ops::Range<f64>) -> Contour {
    let vertices = rng.gen_range(vertices);
    let scale = rng.gen_range(scale);
    let center = Point::new(rng.gen_range(-100.0..100.0), rng.gen_range(-100.0..100.0));
    let mut angles: Vec<f64> = (0..vertices)
        .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
        .collect();
    angles.sort_by(f64::total_cmp);
    let pts = angles
        .iter()
        .map(|&a| {
            let r = scale * rng.gen_range(0.4..1.0);
            center + Point::new(r * a.cos(), r * a.sin())
        })
        .collect();
    Contour::new(pts).unwrap()
}

/// Exhaustive optimum over assignments of the smaller side: maximize the
/// number of finite pairs, then minimize their sum.
pub fn brute_force_assignment(rows: usize, cols: usize, cost: &[f64]) -> (usize, f64) {
    fn rec(
        depth: usize,
        small: usize,
        large: usize,
        at: &dyn Fn(usize, usize) -> f64,
        used: &mut Vec<bool>,
        count: usize,
        sum: f64,
        best: &mut (usize, f64),
    ) {
        if depth == small {
            if count > best.0 || (count == best.0 && sum < best.1) {
                *best = (count, sum);
            }
            return;
        }
        for j in 0..large {
            if used[j] {
                continue;
            }
            used[j] = true;
            let v = at(depth, j);
            if v.is_finite() {
                rec(depth + 1, small, large, at, used, count + 1, sum + v, best);
            } else {
                rec(depth + 1, small, large, at, used, count, sum, best);
            }
            used[j] = false;
        }
    }
    let mut best = (0usize, f64::INFINITY);
    if rows <= cols {
        let at = |r: usize, c: usize| cost[r * cols + c];
        rec(0, rows, cols, &at, &mut vec![false; cols], 0, 0.0, &mut best);
    } else {
        let at = |c: usize, r: usize| cost[r * cols + c];
        rec(0, cols, rows, &at, &mut vec![false; rows], 0, 0.0, &mut best);
    }
    if best.0 == 0 {
        best.1 = 0.0;
    }
    best
}

/// `max |Q^T Q - I|` for the columns of a row-major `rows x cols` array.
pub fn orthonormality(data: &[f64], rows: usize, cols: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..cols {
        for j in i..cols {
            let d: f64 = (0..rows).map(|r| data[r * cols + i] * data[r * cols + j]).sum();
            worst = worst.max((d - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    worst
}
