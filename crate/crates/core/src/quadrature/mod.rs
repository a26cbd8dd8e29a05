//! Haar-circle means and Dirichlet energies of the test functions.
//!
//! The Dirichlet form is normalized as
//! `⟨f, g⟩ = (1/2π) ∫_C (f_x g_x + f_y g_y) dx dy`, the normalization for
//! which `dd^c log|z - a|` is the unit point mass.

mod gk;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::geometry::TestFunction;
use crate::{Error, Result};

/// Tolerances and budgets shared by every integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Bits used wherever a computation needs roots of a polynomial.
    pub working_precision: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            rel_tol: 1e-9,
            max_subdivisions: 20_000,
            working_precision: crate::algebra::DEFAULT_PRECISION,
        }
    }
}

impl QuadratureConfig {
    /// Default configuration with both tolerances set to `tol`.
    pub fn with_tol(tol: f64) -> Self {
        Self {
            abs_tol: tol,
            rel_tol: tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter(
                "tolerances must be positive".into(),
            ));
        }
        if self.max_subdivisions < 4 {
            return Err(Error::InvalidParameter(
                "max_subdivisions must be at least 4".into(),
            ));
        }
        Ok(())
    }

    pub fn tolerance_for(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions_used: usize,
    pub converged: bool,
}

impl IntegralResult {
    /// Turn an unconverged result into an error.
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::QuadratureNonConvergence {
                value: self.value,
                error: self.error_estimate,
                subdivisions: self.subdivisions_used,
            })
        }
    }
}

/// `(1/2π) ∫_0^{2π} g(θ) dθ`, the mean of `g` against Haar measure on the circle.
pub fn circle_mean(g: impl Fn(f64) -> f64, cfg: &QuadratureConfig) -> IntegralResult {
    let r = gk::integrate_1d(g, 0.0, TAU, 4, cfg);
    IntegralResult {
        value: r.value / TAU,
        error_estimate: r.error_estimate / TAU,
        ..r
    }
}

/// `∫ f_p dλ`, integrating the closed-form restriction `|cos θ|^p / 2^p`.
pub fn circle_integral(tf: &TestFunction, cfg: &QuadratureConfig) -> IntegralResult {
    circle_mean(|t| tf.circle_restriction(t), cfg)
}

/// `2^-p Γ((p+1)/2) / (√π Γ(p/2 + 1))`, the exact value of [`circle_integral`].
pub fn circle_integral_closed_form(p: f64) -> f64 {
    (-p).exp2() * (ln_gamma(0.5 * (p + 1.0)) - ln_gamma(0.5 * p + 1.0)).exp() / PI.sqrt()
}

/// Dirichlet pairing of two gradient fields over the whole plane.
///
/// Both fields must come from functions that are even in `x`, even in `y`,
/// and invariant under `z ↦ 1/z`. The last symmetry together with conformal
/// invariance of the Dirichlet integrand makes the outer region contribute
/// exactly what the unit disk does; the first two reduce the disk to its
/// first quadrant. The quadrant is integrated in polar coordinates.
pub fn plane_pairing(
    grad_f: impl Fn(Complex64) -> (f64, f64),
    grad_g: impl Fn(Complex64) -> (f64, f64),
    cfg: &QuadratureConfig,
) -> IntegralResult {
    let integrand = |r: f64, t: f64| {
        let z = Complex64::from_polar(r, t);
        let (fx, fy) = grad_f(z);
        let (gx, gy) = grad_g(z);
        (fx * gx + fy * gy) * r
    };
    // 2 (disk doubling) × 4 (quadrants) / 2π
    let scale = 4.0 / PI;
    let inner = QuadratureConfig {
        abs_tol: cfg.abs_tol / scale,
        ..*cfg
    };
    let r = gk::integrate_2d(integrand, (0.0, 1.0), (0.0, FRAC_PI_2), &inner);
    IntegralResult {
        value: r.value * scale,
        error_estimate: r.error_estimate * scale,
        subdivisions_used: r.subdivisions_used,
        converged: r.error_estimate * scale <= cfg.tolerance_for(r.value * scale),
    }
}

/// `⟨f_p, f_p⟩`.
pub fn dirichlet_energy(tf: &TestFunction, cfg: &QuadratureConfig) -> IntegralResult {
    plane_pairing(|z| tf.gradient(z), |z| tf.gradient(z), cfg)
}

/// `⟨f_p, f_q⟩`.
pub fn dirichlet_pairing(
    a: &TestFunction,
    b: &TestFunction,
    cfg: &QuadratureConfig,
) -> IntegralResult {
    plane_pairing(|z| a.gradient(z), |z| b.gradient(z), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tf(p: f64) -> TestFunction {
        TestFunction::new(p).unwrap()
    }

    #[test]
    fn circle_integral_examples() {
        let cfg = QuadratureConfig::default();
        let r = circle_integral(&tf(3.0), &cfg);
        assert!(r.converged);
        assert!((r.value - 1.0 / (6.0 * PI)).abs() < 1e-12, "{r:?}");
        let r = circle_integral(&tf(2.0), &cfg);
        assert!((r.value - 0.125).abs() < 1e-12);
        let r = circle_mean(|_| 1.0, &cfg);
        assert!((r.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn closed_form_reproduces_known_values() {
        assert!((circle_integral_closed_form(3.0) - 1.0 / (6.0 * PI)).abs() < 1e-15);
        assert!((circle_integral_closed_form(2.0) - 0.125).abs() < 1e-15);
        assert!((circle_integral_closed_form(0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn energy_of_cubic_test_function() {
        let r = dirichlet_energy(&tf(3.0), &QuadratureConfig::default());
        assert!(r.converged);
        assert!((r.value - 3.0 / 140.0).abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn constant_function_has_zero_energy() {
        let r = plane_pairing(|_| (0.0, 0.0), |_| (0.0, 0.0), &QuadratureConfig::default());
        assert_eq!(r.value, 0.0);
        assert!(r.converged);
    }

    #[test]
    fn pairing_is_symmetric_and_bounded() {
        let cfg = QuadratureConfig::default();
        let ab = dirichlet_pairing(&tf(2.0), &tf(3.0), &cfg).value;
        let ba = dirichlet_pairing(&tf(3.0), &tf(2.0), &cfg).value;
        assert!((ab - ba).abs() < 1e-10);
        let e2 = dirichlet_energy(&tf(2.0), &cfg).value;
        let e3 = dirichlet_energy(&tf(3.0), &cfg).value;
        assert!(ab <= (e2 * e3).sqrt());
        let diag = dirichlet_pairing(&tf(3.0), &tf(3.0), &cfg).value;
        assert!((diag - 3.0 / 140.0).abs() < 1e-9);
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::default().validate().is_ok());
        assert!(QuadratureConfig::with_tol(0.0).validate().is_err());
        let cfg = QuadratureConfig {
            max_subdivisions: 3,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }
}
