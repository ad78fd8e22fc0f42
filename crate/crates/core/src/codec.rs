//! Common encode/decode surface shared by the eigenanchor codec and the
//! baseline parameterizations, plus the on-disk container for codes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{polygon_iou, Contour, IouOutcome, Point};

/// Version written into every container this crate emits.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodecKind {
    ChebyshevPolar,
    FourierContour,
    BezierSides,
    Lra,
}

impl CodecKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CodecKind::ChebyshevPolar => "cheb",
            CodecKind::FourierContour => "fourier",
            CodecKind::BezierSides => "bezier",
            CodecKind::Lra => "lra",
        }
    }
}

impl fmt::Display for CodecKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CodecKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cheb" | "chebyshev" => Ok(CodecKind::ChebyshevPolar),
            "fourier" => Ok(CodecKind::FourierContour),
            "bezier" => Ok(CodecKind::BezierSides),
            "lra" => Ok(CodecKind::Lra),
            other => Err(Error::arg(format!("unknown codec `{other}`"))),
        }
    }
}

/// Codec identity: kind, number of real parameters and decoded vertex count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodecSpec {
    pub kind: CodecKind,
    pub dim: usize,
    pub n_vertices: usize,
}

impl CodecSpec {
    pub fn new(kind: CodecKind, dim: usize, n_vertices: usize) -> Result<Self> {
        let ok = match kind {
            CodecKind::ChebyshevPolar | CodecKind::Lra => dim >= 1,
            CodecKind::FourierContour => dim >= 2 && (dim - 2).is_multiple_of(4),
            CodecKind::BezierSides => dim == 16,
        };
        if !ok {
            return Err(Error::arg(format!("dimension {dim} is not valid for {kind}")));
        }
        if n_vertices < crate::geometry::MIN_VERTICES {
            return Err(Error::arg(format!("decoded vertex count {n_vertices} too small")));
        }
        Ok(Self { kind, dim, n_vertices })
    }

    /// Parses `lra:14`, `cheb:44`, `fourier:5` (harmonics) or `bezier`.
    pub fn parse(s: &str, n_vertices: usize) -> Result<Self> {
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k.parse::<CodecKind>()?, Some(a)),
            None => (s.parse::<CodecKind>()?, None),
        };
        let number = |a: Option<&str>| -> Result<usize> {
            a.ok_or_else(|| Error::arg(format!("codec `{s}` needs a size, e.g. `{kind}:14`")))?
                .trim_end_matches('h')
                .parse::<usize>()
                .map_err(|_| Error::arg(format!("bad codec size in `{s}`")))
        };
        let dim = match kind {
            CodecKind::BezierSides => 16,
            CodecKind::FourierContour => 4 * number(arg)? + 2,
            CodecKind::ChebyshevPolar | CodecKind::Lra => number(arg)?,
        };
        Self::new(kind, dim, n_vertices)
    }

    /// Fourier harmonics implied by `dim`.
    pub fn harmonics(&self) -> usize {
        (self.dim - 2) / 4
    }
}

impl fmt::Display for CodecSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            CodecKind::BezierSides => write!(f, "bezier"),
            CodecKind::FourierContour => write!(f, "fourier:{}", self.harmonics()),
            _ => write!(f, "{}:{}", self.kind, self.dim),
        }
    }
}

/// An encoded contour: `values` are the codec parameters, `anchor` is the
/// image position they are relative to.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeCode {
    pub anchor: Point,
    pub values: Vec<f64>,
}

/// A contour parameterization.
pub trait ContourCodec: Send + Sync {
    fn spec(&self) -> CodecSpec;

    fn encode(&self, raw: &Contour) -> Result<ShapeCode>;

    fn decode(&self, code: &ShapeCode) -> Result<Contour>;

    /// IoU between `raw` and its encode/decode round trip.
    fn reconstruction_iou(&self, raw: &Contour, resolution: usize) -> Result<IouOutcome> {
        let rebuilt = self.decode(&self.encode(raw)?)?;
        Ok(polygon_iou(raw, &rebuilt, resolution))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeRecord {
    pub anchor: [f64; 2],
    pub values: Vec<f64>,
}

/// Serialized set of codes (`kind = "codes"`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeFile {
    pub format_version: u32,
    pub kind: String,
    pub codec: String,
    pub n_vertices: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_id: Option<String>,
    pub codes: Vec<CodeRecord>,
}

impl CodeFile {
    pub const KIND: &'static str = "codes";

    pub fn new(spec: CodecSpec, basis_id: Option<String>, codes: &[ShapeCode]) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            kind: Self::KIND.to_string(),
            codec: spec.to_string(),
            n_vertices: spec.n_vertices,
            basis_id,
            codes: codes
                .iter()
                .map(|c| CodeRecord {
                    anchor: [c.anchor.x, c.anchor.y],
                    values: c.values.clone(),
                })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CodeFile = serde_json::from_str(text)?;
        if file.format_version != FORMAT_VERSION {
            return Err(Error::UnsupportedVersion(file.format_version));
        }
        if file.kind != Self::KIND {
            return Err(Error::Format(format!("expected kind `codes`, found `{}`", file.kind)));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn shape_codes(&self) -> Vec<ShapeCode> {
        self.codes
            .iter()
            .map(|r| ShapeCode {
                anchor: Point::new(r.anchor[0], r.anchor[1]),
                values: r.values.clone(),
            })
            .collect()
    }
}
