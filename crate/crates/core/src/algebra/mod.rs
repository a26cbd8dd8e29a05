//! Integer polynomials, their roots, Mahler measures and Weil heights.

mod height;
pub(crate) mod mp;
mod poly;
mod roots;

pub use height::{
    is_totally_real, mahler_from_roots, mahler_measure, roots_are_real, weil_height, HeightValue,
    MahlerMeasure, DEFAULT_REAL_TOL,
};
pub use poly::{parse_polynomial, IntPolynomial};
pub use roots::{roots, RootSet, DEFAULT_PRECISION, MAX_WORKING_PRECISION};
