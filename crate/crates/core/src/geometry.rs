//! The projective line with its chordal metric, and the test functions
//! `f_p(z) = d(z, i)^p · d(z, -i)^p`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A point of `P¹(C)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ProjPoint {
    Finite(Complex64),
    Infinity,
}

impl ProjPoint {
    pub fn new(re: f64, im: f64) -> Self {
        ProjPoint::Finite(Complex64::new(re, im))
    }

    pub fn real(x: f64) -> Self {
        Self::new(x, 0.0)
    }

    /// The image under `z ↦ 1/z`, swapping `0` and `∞`.
    pub fn inverse(self) -> Self {
        match self {
            ProjPoint::Infinity => ProjPoint::Finite(Complex64::new(0.0, 0.0)),
            ProjPoint::Finite(z) if z == Complex64::new(0.0, 0.0) => ProjPoint::Infinity,
            ProjPoint::Finite(z) => ProjPoint::Finite(z.inv()),
        }
    }
}

impl From<Complex64> for ProjPoint {
    fn from(z: Complex64) -> Self {
        ProjPoint::Finite(z)
    }
}

/// Chordal distance `|a - b| / (√(1+|a|²) √(1+|b|²))`, with values in `[0, 1]`.
pub fn chordal_distance(a: ProjPoint, b: ProjPoint) -> f64 {
    match (a, b) {
        (ProjPoint::Infinity, ProjPoint::Infinity) => 0.0,
        (ProjPoint::Finite(z), ProjPoint::Infinity)
        | (ProjPoint::Infinity, ProjPoint::Finite(z)) => 1.0 / (1.0 + z.norm_sqr()).sqrt(),
        (ProjPoint::Finite(z), ProjPoint::Finite(w)) => {
            let d = (z - w).norm() / ((1.0 + z.norm_sqr()).sqrt() * (1.0 + w.norm_sqr()).sqrt());
            d.min(1.0)
        }
    }
}

/// The test function `f_p`, whose poles are fixed at `±i`.
///
/// On the extended real line `f_p ≡ 2^-p`; on the unit circle
/// `f_p(e^{iθ}) = |cos θ|^p / 2^p`. The function is `C¹` on the sphere
/// exactly when `p > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    p: f64,
}

impl TestFunction {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() && p > 1.0 {
            Ok(Self { p })
        } else {
            Err(Error::InvalidExponent(p))
        }
    }

    pub fn exponent(&self) -> f64 {
        self.p
    }

    /// Value on `R ∪ {∞}`, which is also the maximum.
    pub fn real_line_value(&self) -> f64 {
        0.5f64.powf(self.p)
    }

    /// `d(z, i)^p · d(z, -i)^p`, evaluated as `(|z² + 1| / (2(1 + |z|²)))^p`,
    /// which is exactly `2^-p` on the real axis. Points outside the unit disk
    /// are folded in by `z ↦ 1/z`, under which `f_p` is invariant.
    pub fn eval(&self, z: ProjPoint) -> f64 {
        match z {
            ProjPoint::Infinity => self.real_line_value(),
            ProjPoint::Finite(w) => {
                let w = if w.norm_sqr() > 1.0 { w.inv() } else { w };
                let num = (w * w + 1.0).norm();
                (0.5 * num / (1.0 + w.norm_sqr())).powf(self.p)
            }
        }
    }

    pub fn eval_finite(&self, z: Complex64) -> f64 {
        self.eval(ProjPoint::Finite(z))
    }

    /// `(∂f/∂x, ∂f/∂y)` at `z = x + iy`.
    ///
    /// With `Q = |z²+1|² / (4(1+|z|²)²)` we have `f = Q^{p/2}` and
    /// `∇Q = (4xy², 2y(y² - x² - 1)) / (1+|z|²)³`.
    pub fn gradient(&self, z: Complex64) -> (f64, f64) {
        let (x, y) = (z.re, z.im);
        let s = 1.0 + x * x + y * y;
        let u = {
            let re = x * x - y * y + 1.0;
            let im = 2.0 * x * y;
            re * re + im * im
        };
        let q = u / (4.0 * s * s);
        if q <= 0.0 {
            return (0.0, 0.0);
        }
        let s3 = s * s * s;
        let qx = 4.0 * x * y * y / s3;
        let qy = 2.0 * y * (y * y - x * x - 1.0) / s3;
        let c = 0.5 * self.p * q.powf(0.5 * self.p - 1.0);
        (c * qx, c * qy)
    }

    /// Norm of the gradient with respect to the spherical metric `|dz| / (1+|z|²)`.
    pub fn spherical_gradient_norm(&self, z: Complex64) -> f64 {
        let (gx, gy) = self.gradient(z);
        (1.0 + z.norm_sqr()) * gx.hypot(gy)
    }

    /// `f_p(e^{iθ}) = |cos θ|^p / 2^p`.
    pub fn circle_restriction(&self, theta: f64) -> f64 {
        (0.5 * theta.cos().abs()).powf(self.p)
    }
}

/// Bracketing pair for the chordal Lipschitz constant of a test function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LipschitzBracket {
    pub lower: f64,
    pub upper: f64,
}

/// Minimum accepted grid density for [`lipschitz_estimate`].
pub const MIN_GRID_DENSITY: usize = 8;

/// Bracket `Lip(f)` with respect to the chordal metric.
///
/// The sample grid is polar on the closed unit disk, `density` radii by
/// `4·density` angles; the inversion `z ↦ 1/z` is an isometry that preserves
/// `f_p`, so the outer hemisphere adds nothing. The lower bound is the largest
/// difference quotient over neighbouring grid pairs and over pairs with the
/// special points `0, ±i, ±1, ∞`. The upper bound is `π/2` (the largest ratio
/// of geodesic to chordal distance) times the largest sampled spherical
/// gradient norm.
pub fn lipschitz_estimate(tf: &TestFunction, density: usize) -> Result<LipschitzBracket> {
    if density < MIN_GRID_DENSITY {
        return Err(Error::InvalidParameter(format!(
            "grid density must be at least {MIN_GRID_DENSITY}, got {density}"
        )));
    }
    let n_ang = 4 * density;
    let grid: Vec<Vec<Complex64>> = (0..=density)
        .map(|i| {
            let r = i as f64 / density as f64;
            (0..n_ang)
                .map(|j| Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / n_ang as f64))
                .collect()
        })
        .collect();
    let special = [
        ProjPoint::new(0.0, 0.0),
        ProjPoint::new(0.0, 1.0),
        ProjPoint::new(0.0, -1.0),
        ProjPoint::real(1.0),
        ProjPoint::real(-1.0),
        ProjPoint::Infinity,
    ];

    let quotient = |a: ProjPoint, b: ProjPoint| {
        let d = chordal_distance(a, b);
        if d > 0.0 {
            (tf.eval(a) - tf.eval(b)).abs() / d
        } else {
            0.0
        }
    };

    let mut lower: f64 = 0.0;
    let mut sup_grad: f64 = 0.0;
    for (i, ring) in grid.iter().enumerate() {
        for (j, &z) in ring.iter().enumerate() {
            let here = ProjPoint::Finite(z);
            sup_grad = sup_grad.max(tf.spherical_gradient_norm(z));
            lower = lower.max(quotient(here, ProjPoint::Finite(ring[(j + 1) % n_ang])));
            if i + 1 < grid.len() {
                lower = lower.max(quotient(here, ProjPoint::Finite(grid[i + 1][j])));
            }
            for &s in &special {
                lower = lower.max(quotient(here, s));
            }
        }
    }
    let upper = std::f64::consts::FRAC_PI_2 * sup_grad;
    Ok(LipschitzBracket { lower, upper })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    use proptest::prelude::*;

    use super::*;

    fn tf(p: f64) -> TestFunction {
        TestFunction::new(p).unwrap()
    }

    #[test]
    fn chordal_examples() {
        let i = ProjPoint::new(0.0, 1.0);
        for x in [-3.0, 0.0, 0.7, 12.5] {
            assert!((chordal_distance(ProjPoint::real(x), i) - FRAC_1_SQRT_2).abs() < 1e-15);
        }
        assert_eq!(
            chordal_distance(ProjPoint::real(0.0), ProjPoint::Infinity),
            1.0
        );
        assert_eq!(
            chordal_distance(ProjPoint::Infinity, ProjPoint::Infinity),
            0.0
        );
        let d = chordal_distance(ProjPoint::new(1.0, 1.0), ProjPoint::new(1.0, -1.0));
        assert!((d - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn exponent_must_exceed_one() {
        assert_eq!(TestFunction::new(1.0), Err(Error::InvalidExponent(1.0)));
        assert!(TestFunction::new(0.5).is_err());
        assert!(TestFunction::new(f64::NAN).is_err());
        assert!(TestFunction::new(1.0001).is_ok());
    }

    #[test]
    fn test_function_examples() {
        let f = tf(3.0);
        assert!((f.eval(ProjPoint::real(0.7)) - 0.125).abs() < 1e-15);
        assert_eq!(f.eval(ProjPoint::new(0.0, 1.0)), 0.0);
        assert_eq!(f.eval(ProjPoint::Infinity), 0.125);
        let z = Complex64::from_polar(1.0, FRAC_PI_4);
        assert!((f.eval_finite(z) - 0.044194173824159216).abs() < 1e-15);
    }

    #[test]
    fn gradient_examples() {
        let f = tf(3.0);
        assert_eq!(f.gradient(Complex64::new(0.0, 0.0)), (0.0, 0.0));
        assert_eq!(f.gradient(Complex64::new(0.0, 1.0)), (0.0, 0.0));
        assert_eq!(f.gradient(Complex64::new(0.0, -1.0)), (0.0, 0.0));
        let z = Complex64::new(0.5, 0.25);
        let (gx, gy) = f.gradient(z);
        let h = 1e-6;
        let fx = (f.eval_finite(z + h) - f.eval_finite(z - h)) / (2.0 * h);
        let fy = (f.eval_finite(z + Complex64::new(0.0, h))
            - f.eval_finite(z - Complex64::new(0.0, h)))
            / (2.0 * h);
        assert!((gx - fx).abs() <= 1e-8 * gx.abs().max(1e-3));
        assert!((gy - fy).abs() <= 1e-8 * gy.abs().max(1e-3));
    }

    #[test]
    fn circle_restriction_examples() {
        assert!((tf(3.0).circle_restriction(0.0) - 0.125).abs() < 1e-16);
        assert!(tf(3.0).circle_restriction(FRAC_PI_2) < 1e-48);
        assert!((tf(2.0).circle_restriction(FRAC_PI_3) - 1.0 / 16.0).abs() < 1e-16);
    }

    #[test]
    fn lipschitz_bracket() {
        assert!(lipschitz_estimate(&tf(3.0), 7).is_err());
        let b = lipschitz_estimate(&tf(3.0), 256).unwrap();
        assert!(b.lower <= b.upper);
        assert!(b.lower >= 0.125 * 2f64.sqrt() - 1e-12, "{b:?}");
        assert!(b.upper / b.lower <= FRAC_PI_2 + 0.1, "{b:?}");
        for p in [1.5, 2.0, 4.0, 8.0] {
            let b = lipschitz_estimate(&tf(p), 32).unwrap();
            assert!(b.lower <= b.upper);
        }
    }

    #[test]
    fn real_line_supremum_is_attained() {
        for p in [2.0, 3.0, 3.3, 4.0] {
            let f = tf(p);
            let sup = (-1000..=1000)
                .map(|k| f.eval(ProjPoint::real(k as f64 / 37.0)))
                .fold(0.0, f64::max);
            assert!((sup - f.real_line_value()).abs() <= 1e-15 * sup);
        }
    }

    fn point() -> impl Strategy<Value = ProjPoint> {
        prop_oneof![
            1 => Just(ProjPoint::Infinity),
            20 => (-1.0f64..1.0, -1.0f64..1.0, -3.0f64..3.0)
                .prop_map(|(a, b, s)| ProjPoint::new(a * 10f64.powf(s), b * 10f64.powf(s))),
        ]
    }

    proptest! {
        #[test]
        fn inversion_is_an_isometry(a in point(), b in point()) {
            let d = chordal_distance(a, b);
            let e = chordal_distance(a.inverse(), b.inverse());
            prop_assert!((d - e).abs() <= 1e-12);
        }

        #[test]
        fn test_function_range_and_symmetries(z in point(), p in 1.01f64..8.0) {
            let f = tf(p);
            let v = f.eval(z);
            prop_assert!((0.0..=f.real_line_value() * (1.0 + 1e-15)).contains(&v));
            if let ProjPoint::Finite(w) = z {
                prop_assert!((f.eval_finite(w.conj()) - v).abs() <= 1e-12);
                prop_assert!((f.eval_finite(-w) - v).abs() <= 1e-12);
            }
            prop_assert!((f.eval(z.inverse()) - v).abs() <= 1e-12);
        }
    }
}
