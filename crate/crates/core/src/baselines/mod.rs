//! Competing contour parameterizations behind the [`ContourCodec`] contract.
//!
//! * [`ChebyshevCodec`]: radius as a function of polar angle around the
//!   centroid, fitted with a Chebyshev series.
//! * [`FourierCodec`]: truncated complex Fourier series of the resampled
//!   vertex sequence.
//! * [`BezierCodec`]: one cubic Bezier curve per long side.

mod bezier;
mod chebyshev;
mod fourier;

pub use bezier::{fit_cubic, BezierCodec};
pub use chebyshev::{chebyshev_series, ChebyshevCodec, ChebyshevEncoding};
pub use fourier::{fourier_decode, fourier_encode, FourierCodec};

use crate::codec::{CodecKind, CodecSpec, ContourCodec};
use crate::error::{Error, Result};
use crate::geometry::Preparation;
use crate::lra::{EigenanchorBasis, LraCodec};

/// Build the codec described by `spec`. LRA codecs need a basis; the basis
/// is truncated to `spec.dim` when it has more eigenanchors.
pub fn build_codec(
    spec: CodecSpec,
    preparation: Preparation,
    basis: Option<&EigenanchorBasis>,
) -> Result<Box<dyn ContourCodec>> {
    let preparation = Preparation {
        n_vertices: spec.n_vertices,
        ..preparation
    };
    Ok(match spec.kind {
        CodecKind::ChebyshevPolar => Box::new(ChebyshevCodec::new(spec.dim, spec.n_vertices)?),
        CodecKind::FourierContour => Box::new(FourierCodec::new(spec.harmonics(), preparation)?),
        CodecKind::BezierSides => Box::new(BezierCodec::new(spec.n_vertices)?),
        CodecKind::Lra => {
            let basis = basis.ok_or_else(|| Error::arg("the lra codec needs a basis"))?;
            if basis.n_vertices() != spec.n_vertices {
                return Err(Error::arg(format!(
                    "basis uses {} vertices, codec asks for {}",
                    basis.n_vertices(),
                    spec.n_vertices
                )));
            }
            Box::new(LraCodec::new(basis.truncated(spec.dim)?))
        }
    })
}
