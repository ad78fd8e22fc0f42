//! Dense double-precision linear algebra for the contour-matrix SVD.
//!
//! Matrices are small along one side (at most `2N` rows for a contour
//! matrix), so the SVD works on the `rows x rows` Gram matrix: cyclic Jacobi
//! diagonalizes `A A^T`, and a few one-sided Jacobi sweeps on `U^T A` then
//! restore full accuracy for the smaller singular values.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Relative rank threshold: singular values at or below `RANK_TOL * sigma_1`
/// are treated as zero.
pub const RANK_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 60;

/// Row-major dense matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::arg(format!(
                "matrix data has {} entries, expected {rows}x{cols}",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("matrix has non-finite entries".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::arg("columns have different lengths"));
        }
        let m = Self::from_fn(rows, cols, |r, c| columns[c][r]);
        Self::new(m.rows, m.cols, m.data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::arg(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let out_row = &mut out.data[r * other.cols..(r + 1) * other.cols];
            for (k, &a) in self.row(r).iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `self * x` for a vector `x`.
    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::arg(format!(
                "vector of length {} does not match {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows).map(|r| dot(self.row(r), x)).collect())
    }

    /// `self^T * x` for a vector `x`.
    pub fn tr_mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.rows {
            return Err(Error::arg(format!(
                "vector of length {} does not match {} rows",
                x.len(),
                self.rows
            )));
        }
        let mut out = vec![0.0; self.cols];
        for (r, &xr) in x.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.row(r)) {
                *o += a * xr;
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::arg("shape mismatch in subtraction"));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Leading `n` columns.
    pub fn leading_columns(&self, n: usize) -> Matrix {
        Matrix::from_fn(self.rows, n, |r, c| self[(r, c)])
    }

    /// `max |M^T M - I|` over all entries: zero for orthonormal columns.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.cols {
            for j in i..self.cols {
                let d: f64 = (0..self.rows).map(|r| self[(r, i)] * self[(r, j)]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((d - target).abs());
            }
        }
        worst
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        &mut self.data[r * self.cols + c]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in descending order and the matching eigenvectors as
/// the columns of the second matrix.
pub fn symmetric_eigen(a: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    let n = a.rows;
    if a.cols != n {
        return Err(Error::arg("symmetric_eigen needs a square matrix"));
    }
    let mut m = a.clone();
    let mut v = Matrix::identity(n);
    let scale = m.frobenius_norm();
    if scale == 0.0 {
        return Ok((vec![0.0; n], v));
    }

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| m[(p, q)] * m[(p, q)])
            .sum();
        if off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (m[(p, p)], m[(q, q)]);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                m[(p, p)] = app - t * apq;
                m[(q, q)] = aqq + t * apq;
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let (arp, arq) = (m[(r, p)], m[(r, q)]);
                    let new_rp = arp - s * (arq + tau * arp);
                    let new_rq = arq + s * (arp - tau * arq);
                    m[(r, p)] = new_rp;
                    m[(p, r)] = new_rp;
                    m[(r, q)] = new_rq;
                    m[(q, r)] = new_rq;
                }
                for r in 0..n {
                    let (vrp, vrq) = (v[(r, p)], v[(r, q)]);
                    v[(r, p)] = vrp - s * (vrq + tau * vrp);
                    v[(r, q)] = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].total_cmp(&m[(i, i)]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok((values, vectors))
}

/// Thin singular value decomposition `A = U diag(sigma) V^T`.
#[derive(Debug, Clone)]
pub struct SvdResult {
    /// `rows x r` left singular vectors.
    pub u: Matrix,
    /// Singular values, descending and above the rank threshold.
    pub sigma: Vec<f64>,
    /// `cols x r` right singular vectors.
    pub v: Matrix,
    pub rank: usize,
    /// `rows x (rows - r)` orthonormal completion of `u`. Together with `u`
    /// it spans the whole row space, which lets a basis ask for more
    /// directions than the data has rank.
    pub u_perp: Matrix,
}

impl SvdResult {
    /// `U diag(sigma) V^T`.
    pub fn reconstruct(&self) -> Matrix {
        low_rank_product(&self.u, &self.sigma, &self.v)
    }
}

/// Leading-`m` part of an SVD.
#[derive(Debug, Clone)]
pub struct Truncation {
    pub u: Matrix,
    pub sigma: Vec<f64>,
    pub v: Matrix,
}

impl Truncation {
    /// The rank-`m` approximation `U_m diag(sigma_m) V_m^T`.
    pub fn approximation(&self) -> Matrix {
        low_rank_product(&self.u, &self.sigma, &self.v)
    }
}

fn low_rank_product(u: &Matrix, sigma: &[f64], v: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(u.rows, v.rows);
    for (k, &s) in sigma.iter().enumerate() {
        for r in 0..u.rows {
            let a = u[(r, k)] * s;
            if a == 0.0 {
                continue;
            }
            let row = &mut out.data[r * v.rows..(r + 1) * v.rows];
            for (c, o) in row.iter_mut().enumerate() {
                *o += a * v[(c, k)];
            }
        }
    }
    out
}

/// Singular value decomposition via the Gram matrix of the shorter side.
pub fn svd(a: &Matrix) -> Result<SvdResult> {
    if a.rows == 0 || a.cols == 0 {
        return Err(Error::arg("svd of an empty matrix"));
    }
    if a.data.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("svd input has non-finite entries".into()));
    }
    let result = if a.rows <= a.cols {
        let (w, b) = wide_factor(a)?;
        assemble(w, b)
    } else {
        // A^T = W B  =>  A = B^T W^T; the left factor of A comes from the
        // normalized rows of B.
        let (w, b) = wide_factor(&a.transpose())?;
        let t = assemble(w, b);
        let u_perp = complete_basis(&t.v);
        SvdResult {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
            rank: t.rank,
            u_perp,
        }
    };
    Ok(normalize_signs(result))
}

/// For a wide matrix (`rows <= cols`) returns an orthogonal `W` and
/// `B = W^T A` whose rows are mutually orthogonal.
fn wide_factor(a: &Matrix) -> Result<(Matrix, Matrix)> {
    let p = a.rows;
    let mut gram = Matrix::zeros(p, p);
    for i in 0..p {
        for j in i..p {
            let d = dot(a.row(i), a.row(j));
            gram[(i, j)] = d;
            gram[(j, i)] = d;
        }
    }
    let (_, mut w) = symmetric_eigen(&gram)?;
    let mut b = w.transpose().matmul(a)?;

    // One-sided Jacobi on the rows of B; rotations are mirrored into W so that
    // A = W B keeps holding.
    let q = b.cols;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..p {
            for j in (i + 1)..p {
                let alpha = dot(b.row(i), b.row(i));
                let beta = dot(b.row(j), b.row(j));
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = dot(b.row(i), b.row(j));
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..q {
                    let (bi, bj) = (b.data[i * q + k], b.data[j * q + k]);
                    b.data[i * q + k] = c * bi - s * bj;
                    b.data[j * q + k] = s * bi + c * bj;
                }
                for r in 0..p {
                    let (wi, wj) = (w[(r, i)], w[(r, j)]);
                    w[(r, i)] = c * wi - s * wj;
                    w[(r, j)] = s * wi + c * wj;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    Ok((w, b))
}

fn assemble(w: Matrix, b: Matrix) -> SvdResult {
    let p = w.rows;
    let q = b.cols;
    let norms: Vec<f64> = (0..p).map(|i| dot(b.row(i), b.row(i)).sqrt()).collect();
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));

    let top = norms[order[0]];
    let rank = order
        .iter()
        .take_while(|&&i| top > 0.0 && norms[i] > RANK_TOL * top)
        .count();
    let sigma: Vec<f64> = order[..rank].iter().map(|&i| norms[i]).collect();
    let u = Matrix::from_fn(p, rank, |r, c| w[(r, order[c])]);
    let v = Matrix::from_fn(q, rank, |r, c| b[(order[c], r)] / sigma[c]);
    let u_perp = Matrix::from_fn(p, p - rank, |r, c| w[(r, order[rank + c])]);
    SvdResult {
        u,
        sigma,
        v,
        rank,
        u_perp,
    }
}

/// Flip each left singular vector so its largest-magnitude entry (first one
/// on ties) is positive, flipping the paired right vector with it.
fn normalize_signs(mut s: SvdResult) -> SvdResult {
    fn flip_needed(m: &Matrix, c: usize) -> bool {
        let mut best = 0.0f64;
        let mut sign = 1.0;
        for r in 0..m.rows {
            let x = m[(r, c)];
            if x.abs() > best {
                best = x.abs();
                sign = x.signum();
            }
        }
        sign < 0.0
    }
    for c in 0..s.rank {
        if flip_needed(&s.u, c) {
            for r in 0..s.u.rows {
                s.u[(r, c)] = -s.u[(r, c)];
            }
            for r in 0..s.v.rows {
                s.v[(r, c)] = -s.v[(r, c)];
            }
        }
    }
    for c in 0..s.u_perp.cols {
        if flip_needed(&s.u_perp, c) {
            for r in 0..s.u_perp.rows {
                s.u_perp[(r, c)] = -s.u_perp[(r, c)];
            }
        }
    }
    s
}

/// Orthonormal completion of the columns of `u` by Gram-Schmidt against the
/// standard basis (two passes for stability).
pub fn complete_basis(u: &Matrix) -> Matrix {
    let n = u.rows;
    let mut basis: Vec<Vec<f64>> = (0..u.cols).map(|c| u.column(c)).collect();
    let mut extra: Vec<Vec<f64>> = Vec::new();
    for e in 0..n {
        if basis.len() == n {
            break;
        }
        let mut x = vec![0.0; n];
        x[e] = 1.0;
        for _ in 0..2 {
            for b in &basis {
                let d = dot(&x, b);
                x.iter_mut().zip(b).for_each(|(xi, bi)| *xi -= d * bi);
            }
        }
        let norm = dot(&x, &x).sqrt();
        if norm > 1e-8 {
            x.iter_mut().for_each(|xi| *xi /= norm);
            basis.push(x.clone());
            extra.push(x);
        }
    }
    Matrix::from_fn(n, extra.len(), |r, c| extra[c][r])
}

/// Keep the leading `m` singular triplets.
pub fn truncate(s: &SvdResult, m: usize) -> Result<Truncation> {
    if m == 0 || m > s.rank {
        return Err(Error::arg(format!("truncation rank {m} outside 1..={}", s.rank)));
    }
    Ok(Truncation {
        u: s.u.leading_columns(m),
        sigma: s.sigma[..m].to_vec(),
        v: s.v.leading_columns(m),
    })
}

/// Least-squares solution of `a x = b` for a tall matrix of full column rank,
/// by Householder QR.
pub fn least_squares(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let (m, n) = (a.rows, a.cols);
    if b.len() != m {
        return Err(Error::arg("right-hand side length does not match rows"));
    }
    if m < n {
        return Err(Error::arg("least squares needs at least as many rows as columns"));
    }
    let mut r = a.clone();
    let mut y = b.to_vec();
    for k in 0..n {
        let norm = (k..m).map(|i| r[(i, k)] * r[(i, k)]).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Numeric("rank-deficient least-squares system".into()));
        }
        let alpha = if r[(k, k)] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..m).map(|i| r[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm2 = dot(&v, &v);
        if vnorm2 == 0.0 {
            continue;
        }
        for j in k..n {
            let s = (k..m).map(|i| v[i - k] * r[(i, j)]).sum::<f64>() * 2.0 / vnorm2;
            for i in k..m {
                r[(i, j)] -= s * v[i - k];
            }
        }
        let s = (k..m).map(|i| v[i - k] * y[i]).sum::<f64>() * 2.0 / vnorm2;
        for i in k..m {
            y[i] -= s * v[i - k];
        }
    }
    let scale = (0..n).fold(0.0f64, |acc, i| acc.max(r[(i, i)].abs()));
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        if r[(i, i)].abs() <= 1e-13 * scale {
            return Err(Error::Numeric("rank-deficient least-squares system".into()));
        }
        let s: f64 = ((i + 1)..n).map(|j| r[(i, j)] * x[j]).sum();
        x[i] = (y[i] - s) / r[(i, i)];
    }
    Ok(x)
}
