//! Low-rank parameterization of closed text contours.
//!
//! A corpus of annotated text polygons is canonicalized, resampled to a fixed
//! vertex count and stacked into a `2N x L` contour matrix. The leading left
//! singular vectors of that matrix (the *eigenanchors*) form an orthonormal
//! basis; any contour is then represented by its `M` projection coefficients
//! and reconstructed as a linear combination of eigenanchors.
//!
//! Around that core the crate provides:
//!
//! * [`geometry`]: canonicalization, spline resampling, flattening and a
//!   rasterized polygon IoU.
//! * [`linalg`]: a small dense SVD built on cyclic Jacobi.
//! * [`lra`]: basis learning, encode/decode and the basis file format.
//! * [`baselines`]: Chebyshev-polar, Fourier and Bezier-side codecs for
//!   comparison.
//! * [`assignment`]: the sparse-assignment matching cost, a Hungarian solver
//!   with instance replication, polygon NMS and the training losses.
//! * [`corpus`]: annotation parsing and a seeded synthetic text-contour
//!   generator.
//! * [`eval`]: representation-quality reports (CSV and SVG).

pub mod assignment;
pub mod baselines;
pub mod codec;
pub mod config;
pub mod corpus;
mod error;
pub mod eval;
pub mod geometry;
pub mod linalg;
pub mod lra;

pub use error::{Error, ErrorClass, Result};
