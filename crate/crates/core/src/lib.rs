//! Interior transmission eigenvalues of spherically stratified media.
//!
//! The crate evaluates the transmission determinants d_l(k) of a radial
//! refractive profile, locates their complex zeros with the argument
//! principle, and analyzes the zero set with entire-function tools:
//! indicator functions, exponential type, angular densities and truncated
//! Hadamard products.

pub mod determinant;
pub mod entire;
pub mod error;
pub mod inverse;
pub mod json;
pub mod ode;
pub mod profile;
pub mod quadrature;
pub mod radial;
pub mod rootfinder;
pub mod special;

pub use error::{Error, Result};
pub use num_complex::Complex64;
