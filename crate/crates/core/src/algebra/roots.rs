//! Simultaneous root isolation by Aberth–Ehrlich iteration.
//!
//! A double-precision pass produces starting points, which are then polished
//! in multiprecision arithmetic. Each root carries an inclusion radius
//! `n·|W_i|`, where `W_i = p(z_i) / (a_n ∏_{j≠i} (z_i - z_j))` is the
//! Weierstrass correction; the union of the disks of those radii around the
//! approximations contains every root of `p`.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use astro_float::{BigFloat, Consts};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::mp::{self, BigComplex};
use super::IntPolynomial;
use crate::{Error, Result};

/// Default target precision in bits.
pub const DEFAULT_PRECISION: usize = 128;

/// Ceiling on the working precision reached by repeated doubling.
pub const MAX_WORKING_PRECISION: usize = 4096;

const F64_ITERATION_CAP: usize = 1000;

/// All complex roots of an integer polynomial, with multiplicity.
#[derive(Debug, Clone)]
pub struct RootSet {
    roots: Vec<Complex64>,
    radii: Vec<f64>,
    precise: Vec<BigComplex>,
    working_precision: usize,
    source: IntPolynomial,
}

impl RootSet {
    /// Roots rounded to double precision, sorted by real part then imaginary part.
    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    /// Inclusion radius of each root around its multiprecision approximation.
    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn source(&self) -> &IntPolynomial {
        &self.source
    }

    /// Precision (bits) of the final refinement pass.
    pub fn working_precision(&self) -> usize {
        self.working_precision
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn max_radius(&self) -> f64 {
        self.radii.iter().copied().fold(0.0, f64::max)
    }

    pub(crate) fn precise(&self) -> &[BigComplex] {
        &self.precise
    }

    pub fn iter(&self) -> impl Iterator<Item = (Complex64, f64)> + '_ {
        self.roots.iter().copied().zip(self.radii.iter().copied())
    }
}

/// Compute every root of `poly` to the requested precision.
///
/// Working precision starts at `precision` bits and doubles while some
/// well-separated root still has an inclusion radius above `2^(-precision/2)`.
pub fn roots(poly: &IntPolynomial, precision: usize) -> Result<RootSet> {
    if poly.degree() == 0 {
        return Err(Error::DegreeZero);
    }
    let precision = precision.max(53);

    // Exact zero roots are split off before iterating.
    let zeros = poly.coeffs().iter().take_while(|c| c.is_zero()).count();
    let core: Vec<BigInt> = poly.coeffs()[zeros..].to_vec();
    let n = core.len() - 1;

    let mut precise: Vec<BigComplex> = Vec::with_capacity(poly.degree());
    let mut radii: Vec<f64> = Vec::with_capacity(poly.degree());
    let mut wp = precision;

    if n > 0 {
        let seeds = aberth_f64(&core);
        let mut cc = Consts::new().expect("astro-float constants");
        let mut approx: Vec<BigComplex> =
            seeds.iter().map(|&z| BigComplex::from_c64(z, wp)).collect();
        let target = -(precision as f64) / 2.0;
        loop {
            let stage = MpStage::new(&core, wp, &mut cc);
            approx = approx.iter().map(|z| z.with_precision(wp)).collect();
            let outcome = stage.refine(&mut approx);
            let log_radii = stage.log2_radii(&approx);
            let short = match outcome {
                Ok(()) => needs_more_precision(&approx, &log_radii, target),
                Err(e) if wp >= MAX_WORKING_PRECISION => return Err(e),
                Err(_) => true,
            };
            if !short || wp >= MAX_WORKING_PRECISION {
                radii.extend(log_radii.iter().map(|r| r.exp2()));
                break;
            }
            wp = (wp * 2).min(MAX_WORKING_PRECISION);
        }
        precise.extend(approx);
    }
    for _ in 0..zeros {
        precise.push(BigComplex::zero(wp));
        radii.push(0.0);
    }

    let mut order: Vec<(Complex64, usize)> = precise.iter().map(|z| z.to_c64()).zip(0..).collect();
    order.sort_by(|a, b| root_order(a.0, b.0));
    Ok(RootSet {
        roots: order.iter().map(|&(z, _)| z).collect(),
        radii: order.iter().map(|&(_, i)| radii[i]).collect(),
        precise: order.iter().map(|&(_, i)| precise[i].clone()).collect(),
        working_precision: wp,
        source: poly.clone(),
    })
}

/// Sort key: real part on a fixed grid of spacing 2^-32, then imaginary part.
/// The grid makes conjugate pairs compare by imaginary part even when their
/// computed real parts differ in the last bits.
fn root_order(a: Complex64, b: Complex64) -> Ordering {
    let key = |z: Complex64| (z.re * 4294967296.0).round();
    key(a).total_cmp(&key(b)).then(a.im.total_cmp(&b.im))
}

/// True when some root that is isolated from the others still misses the target radius.
fn needs_more_precision(approx: &[BigComplex], log_radii: &[f64], target: f64) -> bool {
    let pts: Vec<Complex64> = approx.iter().map(|z| z.to_c64()).collect();
    pts.iter().enumerate().any(|(i, &z)| {
        let sep = pts
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &w)| (z - w).norm())
            .fold(f64::INFINITY, f64::min);
        let isolated = log_radii[i] + 2.0 < sep.log2();
        isolated && log_radii[i] > target
    })
}

fn fujiwara_bound(c: &[f64]) -> f64 {
    let n = c.len() - 1;
    let lead = c[n].abs();
    let mut bound: f64 = 0.0;
    for (k, ck) in c[..n].iter().enumerate() {
        let mut ratio = ck.abs() / lead;
        if k == 0 {
            ratio /= 2.0;
        }
        bound = bound.max(ratio.powf(1.0 / (n - k) as f64));
    }
    2.0 * bound
}

fn coeffs_f64(core: &[BigInt]) -> Vec<f64> {
    let bits = core.iter().map(|c| c.bits()).max().unwrap_or(0);
    let shift = bits.saturating_sub(900);
    core.iter()
        .map(|c| {
            let scaled: BigInt = c >> shift;
            scaled.to_f64().unwrap_or(0.0)
        })
        .collect()
}

fn horner_f64(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(c[c.len() - 1], 0.0);
    let mut dp = Complex64::zero();
    for &a in c[..c.len() - 1].iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Double-precision Aberth pass producing seeds. Never fails; unconverged
/// points are simply handed to the multiprecision stage.
fn aberth_f64(core: &[BigInt]) -> Vec<Complex64> {
    let c = coeffs_f64(core);
    let n = c.len() - 1;
    if n == 1 {
        return vec![Complex64::new(-c[0] / c[1], 0.0)];
    }
    let radius = fujiwara_bound(&c).max(f64::MIN_POSITIVE);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, TAU * k as f64 / n as f64 + 0.7))
        .collect();
    let abs_c: Vec<f64> = c.iter().map(|a| a.abs()).collect();
    let mut frozen = vec![false; n];
    let eps = f64::EPSILON;
    for _ in 0..F64_ITERATION_CAP {
        let mut active = false;
        for i in 0..n {
            if frozen[i] {
                continue;
            }
            let zi = z[i];
            let (p, dp) = horner_f64(&c, zi);
            let r = zi.norm();
            let scale = abs_c.iter().rev().fold(0.0, |acc, &a| acc * r + a);
            if p.norm() <= 4.0 * n as f64 * eps * scale {
                frozen[i] = true;
                continue;
            }
            active = true;
            let ratio = if dp.is_zero() {
                Complex64::new(1e-3 * (1.0 + r), 0.0)
            } else {
                p / dp
            };
            let sum: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = zi - z[j];
                    if d.is_zero() {
                        Complex64::zero()
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if !w.is_finite() {
                continue;
            }
            z[i] = zi - w;
            if w.norm() <= 4.0 * eps * (1.0 + r) {
                frozen[i] = true;
            }
        }
        if !active {
            break;
        }
    }
    z
}

struct MpStage {
    coeffs: Vec<BigFloat>,
    log2_coeffs: Vec<f64>,
    prec: usize,
    iteration_cap: usize,
}

impl MpStage {
    fn new(core: &[BigInt], prec: usize, cc: &mut Consts) -> Self {
        let coeffs: Vec<BigFloat> = core.iter().map(|c| mp::from_bigint(c, prec, cc)).collect();
        let log2_coeffs = coeffs.iter().map(mp::log2_abs).collect();
        Self {
            coeffs,
            log2_coeffs,
            prec,
            iteration_cap: 200 + 4 * prec,
        }
    }

    fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn horner(&self, z: &BigComplex) -> (BigComplex, BigComplex) {
        let p = self.prec;
        let n = self.degree();
        let mut val = BigComplex::zero(p).add_real(&self.coeffs[n], p);
        let mut der = BigComplex::zero(p);
        for a in self.coeffs[..n].iter().rev() {
            der = der.mul(z, p).add(&val, p);
            val = val.mul(z, p).add_real(a, p);
        }
        (val, der)
    }

    /// `log2 Σ |a_k| |z|^k`, the scale of rounding noise in Horner evaluation.
    fn log2_scale(&self, log2_r: f64) -> f64 {
        let terms: Vec<f64> = self
            .log2_coeffs
            .iter()
            .enumerate()
            .map(|(k, &la)| if k == 0 { la } else { la + k as f64 * log2_r })
            .filter(|t| t.is_finite())
            .collect();
        let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        top + terms.iter().map(|t| (t - top).exp2()).sum::<f64>().log2()
    }

    fn refine(&self, z: &mut [BigComplex]) -> Result<()> {
        let n = z.len();
        let p = self.prec;
        let noise = -(p as f64) + (4.0 * n as f64).log2();
        let one = BigComplex::zero(p).add_real(&BigFloat::from_word(1, p), p);
        let mut frozen = vec![false; n];
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..self.iteration_cap {
            let mut active = false;
            worst = f64::NEG_INFINITY;
            for i in 0..n {
                if frozen[i] {
                    continue;
                }
                let (val, der) = self.horner(&z[i]);
                let log_r = z[i].log2_abs();
                let log_p = val.log2_abs();
                let rel = log_p - self.log2_scale(log_r);
                if rel <= noise {
                    frozen[i] = true;
                    continue;
                }
                worst = worst.max(rel);
                active = true;
                let ratio = if der.is_zero() {
                    // stationary point: nudge off it
                    BigComplex::from_c64(Complex64::new(1e-6, 1e-6), p)
                } else {
                    val.div(&der, p)
                };
                let mut sum = BigComplex::zero(p);
                for j in 0..n {
                    if j != i {
                        let d = z[i].sub(&z[j], p);
                        if !d.is_zero() {
                            sum = sum.add(&d.recip(p), p);
                        }
                    }
                }
                let denom = one.sub(&ratio.mul(&sum, p), p);
                let w = if denom.is_zero() {
                    ratio
                } else {
                    ratio.div(&denom, p)
                };
                z[i] = z[i].sub(&w, p);
                let step = w.log2_abs();
                if step <= -(p as f64) + 2.0 + f64::max(log_r, 0.0) {
                    frozen[i] = true;
                }
            }
            if !active {
                return Ok(());
            }
        }
        Err(Error::NonConvergence {
            iterations: self.iteration_cap,
            log2_residual: worst,
        })
    }

    fn log2_radii(&self, z: &[BigComplex]) -> Vec<f64> {
        let n = z.len();
        let p = self.prec;
        let log_n = (n as f64).log2();
        let log_lead = self.log2_coeffs[n];
        (0..n)
            .map(|i| {
                let (val, _) = self.horner(&z[i]);
                let log_p = val.log2_abs();
                if log_p == f64::NEG_INFINITY {
                    return f64::NEG_INFINITY;
                }
                let mut log_prod = 0.0;
                for j in 0..n {
                    if j != i {
                        let d = z[i].sub(&z[j], p).log2_abs();
                        if d == f64::NEG_INFINITY {
                            return f64::INFINITY;
                        }
                        log_prod += d;
                    }
                }
                log_n + log_p - log_lead - log_prod
            })
            .collect()
    }
}
