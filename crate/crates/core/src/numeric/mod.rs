//! Numerical recovery of the induced affine structure of an immersion and
//! pointwise certification over parameter grids.

mod certify;
mod induce;
mod jet;
mod measure;

pub use certify::*;
pub use induce::*;
pub use jet::*;
pub use measure::*;
