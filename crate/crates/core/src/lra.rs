//! Eigenanchor basis: learning, projection and reconstruction.
//!
//! Prepared contours are flattened into the columns of the contour matrix
//! `A` (`2N x L`). The first `M` left singular vectors of `A` are the
//! eigenanchors; a contour `p` is encoded as `c = U_M^T p` and decoded as
//! `U_M c`. No mean is subtracted, so the basis also has to model the
//! average text shape itself.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::codec::{CodecKind, CodecSpec, ContourCodec, ShapeCode, FORMAT_VERSION};
use crate::corpus::{assemble_matrix, Corpus};
use crate::error::{Error, Result};
use crate::geometry::{
    flatten, polygon_iou, unflatten, Contour, FlatContour, IouOutcome, OriginPolicy, Preparation, ResampleMode,
};
use crate::linalg::{svd, Matrix};

const ORTHONORMAL_TOL: f64 = 1e-8;

/// Orthonormal eigenanchor basis `U_M` with the metadata needed to prepare
/// contours the same way the training corpus was prepared.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenanchorBasis {
    u_m: Matrix,
    sigma: Vec<f64>,
    preparation: Preparation,
    corpus_size: usize,
    id: String,
}

impl EigenanchorBasis {
    pub fn new(u_m: Matrix, sigma: Vec<f64>, preparation: Preparation, corpus_size: usize) -> Result<Self> {
        let n = preparation.n_vertices;
        if n < crate::geometry::MIN_VERTICES {
            return Err(Error::arg(format!("basis vertex count {n} below minimum")));
        }
        if u_m.rows() != 2 * n {
            return Err(Error::arg(format!(
                "basis has {} rows, expected 2N = {}",
                u_m.rows(),
                2 * n
            )));
        }
        let m = u_m.cols();
        if m == 0 || m > 2 * n {
            return Err(Error::arg(format!("basis dimension {m} outside 1..={}", 2 * n)));
        }
        if sigma.len() != m {
            return Err(Error::arg("sigma length does not match basis dimension"));
        }
        if sigma.iter().any(|s| !s.is_finite() || *s < 0.0) || sigma.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Numeric(
                "singular values must be non-negative and descending".into(),
            ));
        }
        let residual = u_m.orthonormality_residual();
        if residual > ORTHONORMAL_TOL {
            return Err(Error::Numeric(format!(
                "eigenanchors are not orthonormal (residual {residual:e})"
            )));
        }
        let id = content_hash(&u_m, &sigma, &preparation);
        Ok(Self {
            u_m,
            sigma,
            preparation,
            corpus_size,
            id,
        })
    }

    pub fn dim(&self) -> usize {
        self.u_m.cols()
    }

    pub fn n_vertices(&self) -> usize {
        self.preparation.n_vertices
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    /// `2N x M` matrix whose columns are the eigenanchors.
    pub fn u_m(&self) -> &Matrix {
        &self.u_m
    }

    pub fn preparation(&self) -> Preparation {
        self.preparation
    }

    pub fn corpus_size(&self) -> usize {
        self.corpus_size
    }

    /// Hex SHA-256 over the basis content; coefficient vectors carry it.
    pub fn id(&self) -> &str {
        &self.id
    }

    /// The `k`-th eigenanchor (0-based) as a flat contour.
    pub fn eigenanchor(&self, k: usize) -> Result<FlatContour> {
        if k >= self.dim() {
            return Err(Error::arg(format!("eigenanchor {k} out of range")));
        }
        FlatContour::new(self.u_m.column(k))
    }

    /// The leading `m` eigenanchors as a basis of their own.
    pub fn truncated(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.dim() {
            return Err(Error::arg(format!("cannot truncate a {}-dim basis to {m}", self.dim())));
        }
        Self::new(
            self.u_m.leading_columns(m),
            self.sigma[..m].to_vec(),
            self.preparation,
            self.corpus_size,
        )
    }

    pub fn to_json(&self) -> Result<String> {
        let file = BasisFile {
            format_version: FORMAT_VERSION,
            kind: BasisFile::KIND.to_string(),
            n_vertices: self.n_vertices(),
            dim: self.dim(),
            origin_policy: self.preparation.origin_policy,
            resample: self.preparation.resample,
            corpus_size: self.corpus_size,
            sigma: self.sigma.clone(),
            u_m: self.u_m.data().to_vec(),
            content_hash: self.id.clone(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: BasisFile = serde_json::from_str(text)?;
        if file.format_version != FORMAT_VERSION {
            return Err(Error::UnsupportedVersion(file.format_version));
        }
        if file.kind != BasisFile::KIND {
            return Err(Error::Format(format!(
                "expected kind `{}`, found `{}`",
                BasisFile::KIND,
                file.kind
            )));
        }
        let u_m = Matrix::new(2 * file.n_vertices, file.dim, file.u_m)
            .map_err(|e| Error::Format(format!("basis matrix: {e}")))?;
        let preparation = Preparation {
            n_vertices: file.n_vertices,
            origin_policy: file.origin_policy,
            resample: file.resample,
        };
        let basis = Self::new(u_m, file.sigma, preparation, file.corpus_size)
            .map_err(|e| Error::Format(format!("invalid basis: {e}")))?;
        if basis.id != file.content_hash {
            return Err(Error::Format(format!(
                "content hash mismatch: file says {}, content hashes to {}",
                file.content_hash, basis.id
            )));
        }
        Ok(basis)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// On-disk layout of a basis (`kind = "lra_basis"`). `u_m` is row-major
/// `2N x M`.
#[derive(Debug, Serialize, Deserialize)]
struct BasisFile {
    format_version: u32,
    kind: String,
    n_vertices: usize,
    dim: usize,
    origin_policy: OriginPolicy,
    resample: ResampleMode,
    corpus_size: usize,
    sigma: Vec<f64>,
    u_m: Vec<f64>,
    content_hash: String,
}

impl BasisFile {
    const KIND: &'static str = "lra_basis";
}

fn content_hash(u_m: &Matrix, sigma: &[f64], prep: &Preparation) -> String {
    let mut h = Sha256::new();
    h.update(b"eigenanchor-basis\0");
    h.update((prep.n_vertices as u64).to_le_bytes());
    h.update((u_m.cols() as u64).to_le_bytes());
    h.update(prep.origin_policy.as_str().as_bytes());
    h.update([0]);
    h.update(prep.resample.as_str().as_bytes());
    h.update([0]);
    for v in sigma.iter().chain(u_m.data()) {
        h.update(v.to_le_bytes());
    }
    hex::encode(h.finalize())
}

/// `M` projection coefficients of one contour, tagged with the basis id.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    c: Vec<f64>,
    basis_id: String,
}

impl CoefficientVector {
    pub fn new(c: Vec<f64>, basis_id: impl Into<String>) -> Result<Self> {
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("coefficient vector has non-finite entries".into()));
        }
        Ok(Self {
            c,
            basis_id: basis_id.into(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.c
    }

    pub fn basis_id(&self) -> &str {
        &self.basis_id
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }
}

/// Learn an `m`-dimensional eigenanchor basis from a prepared corpus.
///
/// When `m` exceeds the rank of the contour matrix, the extra eigenanchors
/// complete the basis orthonormally and carry singular value 0.
pub fn learn_basis(corpus: &Corpus, m: usize) -> Result<EigenanchorBasis> {
    let n = corpus.n_vertices();
    if m == 0 || m > 2 * n {
        return Err(Error::arg(format!(
            "eigenanchor dimension {m} outside 1..=2N = {}",
            2 * n
        )));
    }
    if corpus.len() < m {
        return Err(Error::arg(format!(
            "corpus has {} contours, fewer than the requested dimension {m}",
            corpus.len()
        )));
    }
    let a = assemble_matrix(corpus)?;
    let s = svd(&a)?;
    let keep = m.min(s.rank);
    let mut columns: Vec<Vec<f64>> = (0..keep).map(|c| s.u.column(c)).collect();
    columns.extend((0..m - keep).map(|c| s.u_perp.column(c)));
    let mut sigma = s.sigma[..keep].to_vec();
    sigma.resize(m, 0.0);
    EigenanchorBasis::new(
        Matrix::from_columns(&columns)?,
        sigma,
        corpus.preparation(),
        corpus.len(),
    )
}

/// `c = U_M^T p`.
pub fn encode(basis: &EigenanchorBasis, p: &FlatContour) -> Result<CoefficientVector> {
    if p.n_vertices() != basis.n_vertices() {
        return Err(Error::arg(format!(
            "contour has {} vertices, basis expects {}",
            p.n_vertices(),
            basis.n_vertices()
        )));
    }
    CoefficientVector::new(basis.u_m.tr_mul_vec(p.coords())?, basis.id.clone())
}

/// `p = U_M c`.
pub fn decode(basis: &EigenanchorBasis, c: &CoefficientVector) -> Result<FlatContour> {
    if c.basis_id != basis.id {
        return Err(Error::BasisMismatch {
            expected: basis.id.clone(),
            found: c.basis_id.clone(),
        });
    }
    if c.len() != basis.dim() {
        return Err(Error::arg(format!(
            "coefficient vector has length {}, basis dimension is {}",
            c.len(),
            basis.dim()
        )));
    }
    FlatContour::new(basis.u_m.mul_vec(&c.c)?)
}

/// Encode a raw annotation: prepare it like the training corpus and project.
/// Returns the coefficients and the offset of the canonical frame.
pub fn encode_contour(basis: &EigenanchorBasis, raw: &Contour) -> Result<(CoefficientVector, crate::geometry::Point)> {
    let (prepared, offset) = basis.preparation.prepare(raw)?;
    Ok((encode(basis, &flatten(&prepared))?, offset))
}

/// Decode coefficients and move the result back by `offset`.
pub fn decode_contour(
    basis: &EigenanchorBasis,
    c: &CoefficientVector,
    offset: crate::geometry::Point,
) -> Result<Contour> {
    Ok(unflatten(&decode(basis, c)?)?.translate(offset))
}

/// IoU between a raw contour and its eigenanchor reconstruction.
pub fn reconstruction_iou(basis: &EigenanchorBasis, raw: &Contour, resolution: usize) -> Result<IouOutcome> {
    let (c, offset) = encode_contour(basis, raw)?;
    let rebuilt = decode_contour(basis, &c, offset)?;
    Ok(polygon_iou(raw, &rebuilt, resolution))
}

/// [`ContourCodec`] adapter over an eigenanchor basis.
#[derive(Debug, Clone)]
pub struct LraCodec {
    basis: EigenanchorBasis,
}

impl LraCodec {
    pub fn new(basis: EigenanchorBasis) -> Self {
        Self { basis }
    }

    pub fn basis(&self) -> &EigenanchorBasis {
        &self.basis
    }
}

impl ContourCodec for LraCodec {
    fn spec(&self) -> CodecSpec {
        CodecSpec {
            kind: CodecKind::Lra,
            dim: self.basis.dim(),
            n_vertices: self.basis.n_vertices(),
        }
    }

    fn encode(&self, raw: &Contour) -> Result<ShapeCode> {
        let (c, anchor) = encode_contour(&self.basis, raw)?;
        Ok(ShapeCode { anchor, values: c.c })
    }

    fn decode(&self, code: &ShapeCode) -> Result<Contour> {
        let c = CoefficientVector::new(code.values.clone(), self.basis.id.clone())?;
        decode_contour(&self.basis, &c, code.anchor)
    }
}
