//! Computational certificate for lower bounds on the Weil height of totally
//! real algebraic numbers.
//!
//! The pieces fit together as follows:
//!
//! - [`algebra`]: integer polynomials, multiprecision root isolation, Mahler
//!   measure and the absolute logarithmic Weil height.
//! - [`geometry`]: the chordal metric on the Riemann sphere and the test
//!   functions `f_p(z) = d(z, i)^p d(z, -i)^p`.
//! - [`quadrature`]: the Haar-circle mean and the Dirichlet energy of `f_p`.
//! - [`bounds`]: the resulting height bound `(2^-p - I(p))^2 / E(p)`, its
//!   exponent sweep and optimizer, and the finite-degree equidistribution terms.
//! - [`equidist`]: test corpora, conjugate averages and backward orbits of
//!   `H(x) = x - 1/x`.
//! - [`verify`]: the end-to-end acceptance checks.

pub mod algebra;
pub mod bounds;
pub mod equidist;
mod error;
pub mod geometry;
pub mod quadrature;
pub mod verify;

pub use error::{Error, Result};
