//! Exact construction of the simple-root bases SRB+ and SRB- of the
//! logarithmic derivation modules of cones of extended Shi arrangements,
//! together with machine checks of their characterizing properties.
//!
//! Everything is computed over the rationals; there is no floating point.
//! Coordinates are chosen so that the coordinate functionals `x1..xl` are
//! the simple roots and `z` is the homogenizing variable.

pub mod error;
pub mod exactalg;
pub mod rootsys;
pub mod arrangement;
pub mod logmod;
pub mod srb;

pub use error::{Error, Result};
