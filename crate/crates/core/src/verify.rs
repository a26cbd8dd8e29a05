//! End-to-end acceptance checks, each with a pinned tolerance and time budget.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    is_totally_real, weil_height, IntPolynomial, DEFAULT_PRECISION, DEFAULT_REAL_TOL,
};
use crate::bounds::{lower_bound, optimize_exponent};
use crate::equidist::{az_pairing_estimate, cyclotomic, galois_average, totally_real_corpus};
use crate::geometry::{chordal_distance, ProjPoint, TestFunction};
use crate::quadrature::{
    circle_integral, circle_integral_closed_form, dirichlet_energy, dirichlet_pairing,
    QuadratureConfig,
};
use crate::Result;

/// `(1/2) log((1 + √5)/2)`, the height of the golden ratio.
pub const SCHINZEL_CONSTANT: f64 = 0.2406059;
/// `(140/3)(1/8 - 1/(6π))²`.
pub const CUBIC_BOUND: f64 = 0.241573;
/// Bound obtained from the exponent `3.3`.
pub const EXPONENT_3_3_BOUND: f64 = 0.241713;
/// `∫ log⁺|x| dμ_H` for `H(x) = x - 1/x`.
pub const SMYTH_LIMIT: f64 = 0.27328;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: f64,
    pub budget_ms: f64,
}

impl std::fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] {:>2}. {} ({:.0} ms / {:.0} ms): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed_ms,
            self.budget_ms,
            self.detail
        )
    }
}

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "Schinzel constant"),
    (2, "circle integral"),
    (3, "Dirichlet energy"),
    (4, "bound at p = 3"),
    (5, "exponent optimization"),
    (6, "Smyth limit"),
    (7, "totally real stasis"),
    (8, "equidistribution trend"),
    (9, "invariant suites"),
    (10, "Schinzel floor on corpora"),
];

fn budget(id: u8) -> Duration {
    Duration::from_secs_f64(match id {
        1 => 0.1,
        2 => 1.0,
        3 | 4 => 30.0,
        5 => 300.0,
        6 | 10 => 10.0,
        7 | 8 => 5.0,
        _ => 120.0,
    })
}

/// Run one criterion by number (1 to 10).
pub fn run(id: u8) -> CriterionOutcome {
    let name = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .map_or("unknown", |c| c.1)
        .to_string();
    let start = Instant::now();
    let result = match id {
        1 => schinzel_constant(),
        2 => circle(),
        3 => energy(),
        4 => main_bound(),
        5 => exponent_optimization(),
        6 => smyth_limit(),
        7 => totally_real_stasis(),
        8 => equidistribution_trend(),
        9 => invariant_suites(),
        10 => schinzel_floor(),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let elapsed = start.elapsed();
    let limit = budget(id);
    let (ok, mut detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    if elapsed > limit {
        detail.push_str("; over time budget");
    }
    CriterionOutcome {
        id,
        name,
        passed: ok && elapsed <= limit,
        detail,
        elapsed_ms: elapsed.as_secs_f64() * 1e3,
        budget_ms: limit.as_secs_f64() * 1e3,
    }
}

pub fn run_all() -> Vec<CriterionOutcome> {
    CRITERIA.iter().map(|&(id, _)| run(id)).collect()
}

type Check = Result<(bool, String)>;

fn schinzel_constant() -> Check {
    let h = weil_height(&IntPolynomial::from_i64s(&[-1, -1, 1]), DEFAULT_PRECISION)?;
    Ok((
        (h.value - SCHINZEL_CONSTANT).abs() <= 1e-6,
        format!("h = {:.10}", h.value),
    ))
}

fn circle() -> Check {
    let cfg = QuadratureConfig::default();
    let i3 = circle_integral(&TestFunction::new(3.0)?, &cfg).value;
    let mut ok = (i3 - 1.0 / (6.0 * PI)).abs() <= 1e-9;
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let p = 1.1 + 4.9 * k as f64 / 19.0;
        let r = circle_integral(&TestFunction::new(p)?, &cfg);
        worst = worst.max((r.value - circle_integral_closed_form(p)).abs());
    }
    ok &= worst <= 1e-9;
    Ok((
        ok,
        format!("I(3) = {i3:.12}, max Gamma-form deviation {worst:.2e}"),
    ))
}

fn energy() -> Check {
    let e = dirichlet_energy(&TestFunction::new(3.0)?, &QuadratureConfig::default());
    Ok((
        e.converged && (e.value - 3.0 / 140.0).abs() <= 1e-6,
        format!("E(3) = {:.12} (err est {:.1e})", e.value, e.error_estimate),
    ))
}

fn main_bound() -> Check {
    let r = lower_bound(3.0, &QuadratureConfig::default())?;
    Ok((
        (r.bound - CUBIC_BOUND).abs() <= 1e-5,
        format!("bound(3) = {:.9}", r.bound),
    ))
}

fn exponent_optimization() -> Check {
    let cfg = QuadratureConfig::default();
    let r = lower_bound(3.3, &cfg)?;
    let opt = optimize_exponent(2.0, 5.0, 1e-4, &cfg)?;
    let ok = (r.bound - EXPONENT_3_3_BOUND).abs() <= 1e-5
        && opt.report.bound >= EXPONENT_3_3_BOUND - 1e-5;
    Ok((
        ok,
        format!(
            "bound(3.3) = {:.9}, optimum {:.9} at p = {:.5}",
            r.bound, opt.report.bound, opt.p_star
        ),
    ))
}

fn smyth_limit() -> Check {
    let values: Vec<f64> = (0..=14).map(az_pairing_estimate).collect::<Result<_>>()?;
    let golden_height = 0.5 * ((1.0 + 5f64.sqrt()) / 2.0).ln();
    let gaps: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let shrinking = gaps[1..].windows(2).all(|g| g[1] < g[0]);
    let ok = (values[14] - SMYTH_LIMIT).abs() <= 0.01
        && shrinking
        && (values[1] - golden_height).abs() <= 1e-9;
    Ok((
        ok,
        format!(
            "depth 14: {:.8}, last gap {:.2e}, depth 1: {:.10}",
            values[14], gaps[13], values[1]
        ),
    ))
}

/// Polynomials with only real roots: products of random real-rooted
/// quadratics and linear factors with small integer coefficients.
pub fn real_rooted_corpus(count: usize, seed: u64) -> Vec<IntPolynomial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut poly = IntPolynomial::from_i64s(&[1]);
            for _ in 0..rng.gen_range(1..=3) {
                let (b, c) = loop {
                    let b: i64 = rng.gen_range(-9..=9);
                    let c: i64 = rng.gen_range(-9..=9);
                    if b * b - 4 * c > 0 {
                        break (b, c);
                    }
                };
                poly = poly.mul(&IntPolynomial::from_i64s(&[c, b, 1]));
            }
            for _ in 0..rng.gen_range(0..=2) {
                let a: i64 = rng.gen_range(1..=5);
                let b: i64 = rng.gen_range(-9..=9);
                poly = poly.mul(&IntPolynomial::from_i64s(&[b, a]));
            }
            poly
        })
        .collect()
}

fn totally_real_stasis() -> Check {
    let tf = TestFunction::new(3.0)?;
    let mut worst: f64 = 0.0;
    for poly in real_rooted_corpus(50, 7) {
        worst = worst.max((galois_average(&poly, &tf)? - 0.125).abs());
    }
    Ok((
        worst <= 1e-10,
        format!("max |average - 1/8| = {worst:.2e} over 50 polynomials"),
    ))
}

fn equidistribution_trend() -> Check {
    let tf = TestFunction::new(3.0)?;
    let target = 1.0 / (6.0 * PI);
    let disc: Vec<f64> = [8, 16, 32, 64, 128]
        .iter()
        .map(|&n| galois_average(&cyclotomic(n), &tf).map(|a| (a - target).abs()))
        .collect::<Result<_>>()?;
    let decreasing = disc.windows(2).all(|w| w[1] < w[0]);
    Ok((
        decreasing && disc[4] < 0.01,
        format!(
            "discrepancies {}",
            disc.iter()
                .map(|d| format!("{d:.3e}"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    ))
}

/// Uniform point on the Riemann sphere, pushed to the plane; the north pole maps to `∞`.
pub fn random_sphere_point(rng: &mut impl Rng) -> ProjPoint {
    let z: f64 = rng.gen_range(-1.0..1.0);
    let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    if z >= 1.0 - 1e-15 {
        return ProjPoint::Infinity;
    }
    let r = ((1.0 + z) / (1.0 - z)).sqrt();
    ProjPoint::Finite(Complex64::from_polar(r, t))
}

/// Relative gradient error against a central difference with step `1e-6`,
/// floored at `1e-3` where the gradient vanishes (it is zero on the real axis).
pub fn gradient_fd_error(tf: &TestFunction, z: Complex64) -> f64 {
    let h = 1e-6;
    let (gx, gy) = tf.gradient(z);
    let dx = (tf.eval_finite(z + h) - tf.eval_finite(z - h)) / (2.0 * h);
    let ih = Complex64::new(0.0, h);
    let dy = (tf.eval_finite(z + ih) - tf.eval_finite(z - ih)) / (2.0 * h);
    (gx - dx).hypot(gy - dy) / gx.hypot(gy).max(1e-3)
}

fn invariant_suites() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut failures = Vec::new();

    // metric axioms
    let mut metric_ok = true;
    for _ in 0..10_000 {
        let a = random_sphere_point(&mut rng);
        let b = random_sphere_point(&mut rng);
        let c = if rng.gen_bool(0.05) {
            a
        } else {
            random_sphere_point(&mut rng)
        };
        let (ab, ba, bc, ac) = (
            chordal_distance(a, b),
            chordal_distance(b, a),
            chordal_distance(b, c),
            chordal_distance(a, c),
        );
        metric_ok &= ab == ba && (0.0..=1.0).contains(&ab);
        metric_ok &= ac <= ab + bc + 1e-12;
        metric_ok &= chordal_distance(a, a) == 0.0;
        metric_ok &= (a == c) || ac > 0.0;
    }
    if !metric_ok {
        failures.push("metric axioms");
    }

    let mut inversion_ok = true;
    for _ in 0..10_000 {
        let (a, b) = (random_sphere_point(&mut rng), random_sphere_point(&mut rng));
        if matches!(a, ProjPoint::Infinity) || matches!(b, ProjPoint::Infinity) {
            continue;
        }
        inversion_ok &=
            (chordal_distance(a.inverse(), b.inverse()) - chordal_distance(a, b)).abs() <= 1e-12;
    }
    if !inversion_ok {
        failures.push("inversion isometry");
    }

    let mut symmetry_ok = true;
    for p in [2.0, 3.0, 3.3, 4.0] {
        let tf = TestFunction::new(p)?;
        for _ in 0..2_500 {
            let ProjPoint::Finite(z) = random_sphere_point(&mut rng) else {
                continue;
            };
            let v = tf.eval_finite(z);
            symmetry_ok &= (tf.eval_finite(z.conj()) - v).abs() <= 1e-12;
            symmetry_ok &= (tf.eval_finite(-z) - v).abs() <= 1e-12;
            if z.norm() > 0.0 {
                symmetry_ok &= (tf.eval_finite(z.inv()) - v).abs() <= 1e-12;
            }
            symmetry_ok &= (0.0..=tf.real_line_value()).contains(&v);
        }
        let sup = (-500..=500)
            .map(|k| tf.eval(ProjPoint::real(k as f64 / 17.0)))
            .fold(0.0, f64::max);
        symmetry_ok &= sup == tf.real_line_value();
    }
    if !symmetry_ok {
        failures.push("test function symmetries");
    }

    let tf = TestFunction::new(3.0)?;
    let mut worst_grad: f64 = 0.0;
    let mut n = 0;
    while n < 1_000 {
        let z = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        if (z - Complex64::i()).norm() < 0.05 || (z + Complex64::i()).norm() < 0.05 {
            continue;
        }
        worst_grad = worst_grad.max(gradient_fd_error(&tf, z));
        n += 1;
    }
    if worst_grad > 1e-7 {
        failures.push("gradient vs finite differences");
    }

    let cfg = QuadratureConfig::default();
    let exps = [1.5, 2.0, 3.0, 3.3, 5.0];
    let mut cs_ok = true;
    for (i, &p) in exps.iter().enumerate() {
        for &q in &exps[i + 1..] {
            let (f, g) = (TestFunction::new(p)?, TestFunction::new(q)?);
            let fg = dirichlet_pairing(&f, &g, &cfg).value;
            let ff = dirichlet_energy(&f, &cfg).value;
            let gg = dirichlet_energy(&g, &cfg).value;
            cs_ok &= fg <= (ff * gg).sqrt();
        }
    }
    if !cs_ok {
        failures.push("Cauchy-Schwarz");
    }

    let mut worst_rev: f64 = 0.0;
    let mut count = 0;
    while count < 100 {
        let deg = rng.gen_range(1..=8);
        let coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-9..=9)).collect();
        if coeffs[0] == 0 || coeffs[deg] == 0 {
            continue;
        }
        let p = IntPolynomial::from_i64s(&coeffs);
        let h = weil_height(&p, DEFAULT_PRECISION)?.value;
        let hr = weil_height(&p.reverse(), DEFAULT_PRECISION)?.value;
        worst_rev = worst_rev.max((h - hr).abs());
        count += 1;
    }
    if worst_rev > 1e-10 {
        failures.push("height reversal");
    }

    Ok((
        failures.is_empty(),
        if failures.is_empty() {
            format!("all suites hold (gradient rel err {worst_grad:.1e}, reversal {worst_rev:.1e})")
        } else {
            format!("failed: {}", failures.join(", "))
        },
    ))
}

fn schinzel_floor() -> Check {
    let mut lowest = f64::INFINITY;
    let mut ok = true;
    for (_, poly) in totally_real_corpus() {
        ok &= is_totally_real(&poly, DEFAULT_REAL_TOL)?;
        let h = weil_height(&poly, DEFAULT_PRECISION)?.value;
        lowest = lowest.min(h);
    }
    ok &= lowest >= SCHINZEL_CONSTANT - 1e-6;
    Ok((ok, format!("lowest height {lowest:.10}")))
}
