use astro_float::{BigFloat, Consts};
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::mp::{self, RM};
use super::roots::{roots, RootSet, DEFAULT_PRECISION};
use super::IntPolynomial;
use crate::{Error, Result};

/// Relative imaginary-part tolerance used by [`is_totally_real`] callers
/// that have no better information.
pub const DEFAULT_REAL_TOL: f64 = 1e-20;

/// Mahler measure `|a_n| ∏ max(1, |z_i|)` together with its logarithm and an
/// absolute error bound propagated from the root inclusion radii.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MahlerMeasure {
    pub value: f64,
    pub log_value: f64,
    pub log_error: f64,
    pub precision_bits: usize,
}

impl MahlerMeasure {
    pub fn abs_error(&self) -> f64 {
        self.value * self.log_error.exp_m1()
    }
}

/// Absolute logarithmic Weil height, in natural-log units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeightValue {
    pub value: f64,
    pub error: f64,
    pub precision_bits: usize,
}

pub fn mahler_measure(poly: &IntPolynomial, precision: usize) -> Result<MahlerMeasure> {
    let rs = roots(poly, precision)?;
    Ok(mahler_from_roots(&rs))
}

pub fn mahler_from_roots(rs: &RootSet) -> MahlerMeasure {
    let p = rs.working_precision() + 32;
    let mut cc = Consts::new().expect("astro-float constants");
    let lead = mp::from_bigint(&rs.source().leading().abs(), p, &mut cc);
    let mut log_m = lead.ln(p, RM, &mut cc);
    let two = BigFloat::from_word(2, p);
    let mut log_error = rs.len() as f64 * (-(rs.working_precision() as f64)).exp2();
    for (z, (approx, radius)) in rs.precise().iter().zip(rs.iter()) {
        let modulus = approx.norm();
        if modulus + radius >= 1.0 {
            log_error += radius / f64::max(1.0, modulus - radius);
        }
        if modulus >= 1.0 {
            let n2 = z.norm_sqr(p);
            if n2.cmp(&BigFloat::from_word(1, p)).is_some_and(|c| c > 0) {
                log_m = log_m.add(&n2.ln(p, RM, &mut cc).div(&two, p, RM), p, RM);
            }
        }
    }
    let log_value = mp::to_f64(&log_m).max(0.0);
    MahlerMeasure {
        value: log_value.exp(),
        log_value,
        log_error,
        precision_bits: rs.working_precision(),
    }
}

/// `log M(poly) / deg(poly)`.
///
/// This is the Weil height of any root of `poly` when `poly` is irreducible
/// over the rationals. Irreducibility is not checked: for a reducible input
/// the result is the degree-weighted average of the heights of its factors.
pub fn weil_height(poly: &IntPolynomial, precision: usize) -> Result<HeightValue> {
    if poly.degree() == 0 {
        return Err(Error::DegreeZero);
    }
    let m = mahler_measure(poly, precision)?;
    let d = poly.degree() as f64;
    Ok(HeightValue {
        value: m.log_value / d,
        error: m.log_error / d,
        precision_bits: m.precision_bits,
    })
}

/// Whether every root satisfies `|Im z| ≤ tol · (1 + |z|)`.
pub fn is_totally_real(poly: &IntPolynomial, tol: f64) -> Result<bool> {
    let rs = roots(poly, DEFAULT_PRECISION)?;
    Ok(roots_are_real(&rs, tol))
}

pub fn roots_are_real(rs: &RootSet, tol: f64) -> bool {
    rs.roots()
        .iter()
        .all(|z| z.im.abs() <= tol * (1.0 + z.norm()))
}
