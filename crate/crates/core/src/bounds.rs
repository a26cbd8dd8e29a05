//! Height lower bounds from the test functions `f_p`.
//!
//! For totally real `α` every conjugate lies on `R`, where `f_p ≡ 2^-p`, so the
//! conjugate average of `f_p` is exactly `2^-p`. Quantitative equidistribution
//! bounds its distance to `I(p) = ∫ f_p dλ` by
//! `Lip(f_p)/d + (h(α) + c log d / d)^{1/2} E(p)^{1/2}`. As `d → ∞` this gives
//! `liminf h(α) ≥ (2^-p - I(p))² / E(p)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{mahler_from_roots, roots, IntPolynomial, RootSet};
use crate::equidist::galois_average_of;
use crate::geometry::{lipschitz_estimate, LipschitzBracket, TestFunction};
use crate::quadrature::{circle_integral, dirichlet_energy, QuadratureConfig};
use crate::{Error, Result};

/// Grid density used when a report carries a Lipschitz bracket.
pub const LIPSCHITZ_DENSITY: usize = 128;

/// Exponent range searched by default.
pub const DEFAULT_SWEEP_RANGE: (f64, f64) = (2.0, 5.0);

/// One evaluation of the height bound for a fixed exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub p: f64,
    /// `2^-p - I(p)`.
    pub main_term: f64,
    pub circle_integral: f64,
    pub energy: f64,
    /// `main_term² / energy`.
    pub bound: f64,
    pub lipschitz: LipschitzBracket,
    pub circle_error: f64,
    pub energy_error: f64,
    /// First-order propagation of the two quadrature error estimates.
    pub bound_error: f64,
}

/// Compute the height bound certificate for exponent `p`.
pub fn lower_bound(p: f64, cfg: &QuadratureConfig) -> Result<BoundReport> {
    let tf = TestFunction::new(p)?;
    cfg.validate()?;
    let circle = circle_integral(&tf, cfg).require_converged()?;
    let energy = dirichlet_energy(&tf, cfg).require_converged()?;
    let lipschitz = lipschitz_estimate(&tf, LIPSCHITZ_DENSITY)?;
    let main_term = tf.real_line_value() - circle.value;
    let bound = main_term * main_term / energy.value;
    let bound_error = 2.0 * main_term.abs() / energy.value * circle.error_estimate
        + bound / energy.value * energy.error_estimate;
    Ok(BoundReport {
        p,
        main_term,
        circle_integral: circle.value,
        energy: energy.value,
        bound,
        lipschitz,
        circle_error: circle.error_estimate,
        energy_error: energy.error_estimate,
        bound_error,
    })
}

/// A sweep grid point; failed evaluations are kept with their error message.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub p: f64,
    pub report: Option<BoundReport>,
    pub failure: Option<String>,
}

/// The grid `p_lo, p_lo + step, …` up to and including `p_hi` (up to rounding).
/// Points closer than `1e-9` relative are merged.
pub fn sweep_grid(p_lo: f64, p_hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(p_lo.is_finite() && p_hi.is_finite() && step.is_finite()) {
        return Err(Error::InvalidParameter(
            "sweep bounds must be finite".into(),
        ));
    }
    if p_lo <= 1.0 {
        return Err(Error::InvalidExponent(p_lo));
    }
    if p_hi <= p_lo {
        return Err(Error::InvalidParameter(format!(
            "empty sweep range [{p_lo}, {p_hi}]"
        )));
    }
    if step <= 0.0 {
        return Err(Error::InvalidParameter(
            "sweep step must be positive".into(),
        ));
    }
    let n = ((p_hi - p_lo) / step + 1e-9).floor() as usize;
    let mut grid: Vec<f64> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let p = (p_lo + k as f64 * step).min(p_hi);
        let merged = grid
            .last()
            .is_some_and(|&q| (p - q).abs() <= 1e-9 * p.abs().max(1.0));
        if !merged {
            grid.push(p);
        }
    }
    Ok(grid)
}

/// Evaluate [`lower_bound`] on a grid, in parallel, keeping grid order.
pub fn sweep(p_lo: f64, p_hi: f64, step: f64, cfg: &QuadratureConfig) -> Result<Vec<SweepPoint>> {
    cfg.validate()?;
    let grid = sweep_grid(p_lo, p_hi, step)?;
    Ok(grid
        .par_iter()
        .map(|&p| match lower_bound(p, cfg) {
            Ok(r) => SweepPoint {
                p,
                report: Some(r),
                failure: None,
            },
            Err(e) => SweepPoint {
                p,
                report: None,
                failure: Some(e.to_string()),
            },
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub p_star: f64,
    pub report: BoundReport,
    /// Width of the final bracket.
    pub width: f64,
    pub evaluations: usize,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the exponent maximizing the bound on `[p_lo, p_hi]`.
///
/// Unimodality is assumed, not checked. The endpoints are evaluated too, and
/// the best evaluated point is returned, so the result is never worse than
/// either endpoint.
pub fn optimize_exponent(
    p_lo: f64,
    p_hi: f64,
    tol: f64,
    cfg: &QuadratureConfig,
) -> Result<Optimum> {
    if p_lo <= 1.0 {
        return Err(Error::InvalidExponent(p_lo));
    }
    if p_hi.is_nan() || p_hi <= p_lo {
        return Err(Error::InvalidParameter(format!(
            "empty search range [{p_lo}, {p_hi}]"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    cfg.validate()?;
    let eval = |p: f64| lower_bound(p, cfg);
    let mut best = eval(p_lo)?;
    let mut evaluations = 1;
    let hi_report = eval(p_hi)?;
    evaluations += 1;
    if hi_report.bound > best.bound {
        best = hi_report;
    }

    let (mut a, mut b) = (p_lo, p_hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut rc = eval(c)?;
    let mut rd = eval(d)?;
    evaluations += 2;
    while b - a > tol {
        if rc.bound >= rd.bound {
            b = d;
            d = c;
            rd = rc;
            c = b - INV_PHI * (b - a);
            rc = eval(c)?;
        } else {
            a = c;
            c = d;
            rc = rd;
            d = a + INV_PHI * (b - a);
            rd = eval(d)?;
        }
        evaluations += 1;
    }
    for r in [rc, rd] {
        if r.bound > best.bound {
            best = r;
        }
    }
    Ok(Optimum {
        p_star: best.p,
        report: best,
        width: b - a,
        evaluations,
    })
}

/// Every term of the quantitative equidistribution inequality for one `α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrlTerms {
    pub degree: usize,
    pub height: f64,
    pub galois_average: f64,
    pub circle_integral: f64,
    /// `|galois_average - circle_integral|`.
    pub discrepancy_lhs: f64,
    /// Upper Lipschitz bracket divided by the degree.
    pub lip_term: f64,
    /// `E(p)^{1/2}`.
    pub energy_root: f64,
    pub c: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Test-function data shared by every polynomial evaluated against it.
#[derive(Debug, Clone, Copy)]
pub struct FrlContext {
    pub tf: TestFunction,
    pub circle_integral: f64,
    pub energy: f64,
    pub lipschitz: LipschitzBracket,
    pub precision: usize,
}

impl FrlContext {
    pub fn new(tf: TestFunction, cfg: &QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            tf,
            circle_integral: circle_integral(&tf, cfg).require_converged()?.value,
            energy: dirichlet_energy(&tf, cfg).require_converged()?.value,
            lipschitz: lipschitz_estimate(&tf, LIPSCHITZ_DENSITY)?,
            precision: cfg.working_precision,
        })
    }

    pub fn terms(&self, poly: &IntPolynomial, c: f64) -> Result<FrlTerms> {
        let rs = roots(poly, self.precision)?;
        self.terms_from_roots(&rs, c)
    }

    pub fn terms_from_roots(&self, rs: &RootSet, c: f64) -> Result<FrlTerms> {
        if c.is_nan() || c < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "constant c must be nonnegative, got {c}"
            )));
        }
        let d = rs.len();
        let height = mahler_from_roots(rs).log_value / d as f64;
        let galois_average = galois_average_of(rs, &self.tf);
        let discrepancy_lhs = (galois_average - self.circle_integral).abs();
        let lip_term = self.lipschitz.upper / d as f64;
        let energy_root = self.energy.sqrt();
        let df = d as f64;
        let rhs = lip_term + (height + c * df.ln() / df).max(0.0).sqrt() * energy_root;
        Ok(FrlTerms {
            degree: d,
            height,
            galois_average,
            circle_integral: self.circle_integral,
            discrepancy_lhs,
            lip_term,
            energy_root,
            c,
            rhs,
            holds: discrepancy_lhs <= rhs,
        })
    }
}

/// Evaluate the inequality for the roots of `poly` against `f_p`.
pub fn frl_inequality_terms(
    poly: &IntPolynomial,
    tf: &TestFunction,
    c: f64,
    cfg: &QuadratureConfig,
) -> Result<FrlTerms> {
    FrlContext::new(*tf, cfg)?.terms(poly, c)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn cubic_bound_matches_closed_form() {
        let r = lower_bound(3.0, &cfg()).unwrap();
        let main = 0.125 - 1.0 / (6.0 * PI);
        let exact = 140.0 / 3.0 * main * main;
        assert!((r.bound - exact).abs() < 1e-8, "{r:?}");
        assert!((r.bound - 0.241573).abs() < 1e-6);
        assert!(r.bound_error < 1e-6);
        assert!(
            (r.bound * r.energy - r.main_term * r.main_term).abs() <= 1e-12 * r.bound * r.energy
        );
    }

    #[test]
    fn quadratic_bound() {
        // I(2) = 1/8 and E(2) = 1/15, the latter checked by Monte Carlo in
        // the integration tests
        let r = lower_bound(2.0, &cfg()).unwrap();
        assert!((r.main_term - 0.125).abs() < 1e-12);
        assert!((r.bound - 15.0 / 64.0).abs() < 1e-8);
    }

    #[test]
    fn exponent_precondition() {
        assert_eq!(
            lower_bound(1.0, &cfg()).unwrap_err(),
            Error::InvalidExponent(1.0)
        );
    }

    #[test]
    fn sweep_grid_shapes() {
        assert_eq!(sweep_grid(2.0, 5.0, 0.5).unwrap().len(), 7);
        assert_eq!(sweep_grid(2.0, 5.0, 0.25).unwrap().len(), 13);
        assert_eq!(sweep_grid(3.0, 3.0 + 1e-12, 1e-12).unwrap(), vec![3.0]);
        assert!(sweep_grid(3.0, 2.0, 0.1).is_err());
        assert!(sweep_grid(2.0, 3.0, 0.0).is_err());
        assert!(sweep_grid(0.5, 3.0, 0.1).is_err());
    }

    #[test]
    fn failed_sweep_points_are_marked() {
        let tight = QuadratureConfig {
            abs_tol: 1e-30,
            rel_tol: 1e-30,
            max_subdivisions: 4,
            ..cfg()
        };
        let pts = sweep(2.0, 3.0, 0.5, &tight).unwrap();
        assert_eq!(pts.len(), 3);
        assert!(pts
            .iter()
            .all(|s| s.report.is_none() && s.failure.is_some()));
    }

    #[test]
    fn frl_terms_for_golden_ratio() {
        let tf = TestFunction::new(3.0).unwrap();
        let poly = IntPolynomial::from_i64s(&[-1, -1, 1]);
        let t = frl_inequality_terms(&poly, &tf, 1.0, &cfg()).unwrap();
        assert_eq!(t.degree, 2);
        assert!((t.galois_average - 0.125).abs() < 1e-15);
        assert!((t.discrepancy_lhs - (0.125 - 1.0 / (6.0 * PI))).abs() < 1e-10);
        assert!((t.height - 0.2406059125298017).abs() < 1e-12);
        assert!(t.holds);
        assert!(frl_inequality_terms(&poly, &tf, -1.0, &cfg()).is_err());
    }

    #[test]
    fn degree_one_points_need_the_lipschitz_term() {
        let tf = TestFunction::new(3.0).unwrap();
        let ctx = FrlContext::new(tf, &cfg()).unwrap();
        let t = ctx.terms(&IntPolynomial::from_i64s(&[-1, 1]), 0.0).unwrap();
        assert_eq!(t.degree, 1);
        assert_eq!(t.height, 0.0);
        assert!((t.discrepancy_lhs - (0.125 - 1.0 / (6.0 * PI))).abs() < 1e-10);
        // without the Lipschitz term the inequality would fail
        assert!(t.discrepancy_lhs > t.rhs - t.lip_term);
        assert!(t.holds);
    }
}
