//! Verification toolkit for three-dimensional Lorentzian affine hyperspheres
//! whose difference tensor is invariant under a nontrivial stabilizer.
//!
//! The crate is split into four layers:
//!
//! * [`tensor`]: frame-level linear algebra for the canonical difference
//!   tensor and the curvature built from it, generic over [`Scalar`].
//! * [`poly`] and [`symbolic`]: an exact multivariate polynomial engine and the
//!   Codazzi/Gauss residual machinery on top of it.
//! * [`constructions`]: explicit immersions built from a base surface and a
//!   planar curve, plus the ODE conditions those curves must satisfy.
//! * [`numeric`]: recovery of the induced affine structure from 2-jets and
//!   point-by-point certification over a grid.

pub mod constructions;
pub mod error;
pub mod grid;
pub mod numeric;
pub mod poly;
pub mod scalar;
pub mod symbolic;
pub mod tensor;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Version string echoed into every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
