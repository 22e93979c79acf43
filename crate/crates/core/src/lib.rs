//! Exact computations around self-self-dual spaces of polynomials.
//!
//! A 7-dimensional space of polynomials is self-self-dual when it is self-dual and the
//! squares of its elements are exactly the divided Wronskians of its isotropic 3-planes.
//! Such spaces carry a G2 structure: an invariant 3-form, a spinor model, and a
//! description as populations of G2 Bethe pairs.

pub mod bethe;
pub mod error;
pub mod g2;
pub mod io;
pub mod linalg;
pub mod par;
pub mod poly;
pub mod polyspace;
pub mod scalar;
pub mod spin;
pub mod suite;

pub use error::{Error, Result};
pub use linalg::{Mat, Solution};
pub use par::Exec;
pub use poly::{apply_log_factor, wronskian, Poly, QPoly, RatFun};
pub use scalar::{Field, QExt, Rational};
