//! Reference values checked against independent computations.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use totreal::algebra::{roots, weil_height, IntPolynomial, DEFAULT_PRECISION};
use totreal::bounds::{frl_inequality_terms, lower_bound, optimize_exponent, sweep};
use totreal::equidist::{
    az_pairing_estimate, cyclotomic, cyclotomic_corpus, empirical_c, family_polynomial,
    preimage_tree, smyth_map, Family,
};
use totreal::geometry::TestFunction;
use totreal::quadrature::{dirichlet_energy, QuadratureConfig};

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn tf(p: f64) -> TestFunction {
    TestFunction::new(p).unwrap()
}

#[test]
fn energy_matches_monte_carlo() {
    // Over the unit disk, doubled: E = mean of |∇f|² under uniform sampling.
    let f = tf(2.0);
    let h = 1e-5;
    let grad_sq = |z: Complex64| {
        let ih = Complex64::new(0.0, h);
        let dx = (f.eval_finite(z + h) - f.eval_finite(z - h)) / (2.0 * h);
        let dy = (f.eval_finite(z + ih) - f.eval_finite(z - ih)) / (2.0 * h);
        dx * dx + dy * dy
    };
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let n = 10_000_000;
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..n {
        let r = rng.gen::<f64>().sqrt();
        let t = rng.gen_range(0.0..std::f64::consts::TAU);
        let g = grad_sq(Complex64::from_polar(r, t));
        sum += g;
        sum_sq += g * g;
    }
    let mean = sum / n as f64;
    let se = ((sum_sq / n as f64 - mean * mean) / n as f64).sqrt();
    let e = dirichlet_energy(&f, &cfg()).value;
    assert!(
        (e - mean).abs() <= 3.0 * se,
        "quadrature {e}, Monte Carlo {mean} ± {se}"
    );
    assert!((e - 1.0 / 15.0).abs() < 1e-9);
}

#[test]
fn energies_at_integer_exponents() {
    for (p, want) in [
        (2.0, 1.0 / 15.0),
        (3.0, 3.0 / 140.0),
        (4.0, 0.006_349_206_349_206_347_5),
    ] {
        let r = dirichlet_energy(&tf(p), &cfg());
        assert!(r.converged);
        assert!((r.value - want).abs() < 1e-9, "p = {p}: {}", r.value);
    }
}

#[test]
fn bounds_at_reference_exponents() {
    for (p, want) in [
        (2.0, 15.0 / 64.0),
        (3.0, 0.241_573_051_956_770_9),
        (3.3, 0.241_712_730_169_340_42),
        (4.0, 0.240_325_927_734_375),
    ] {
        let r = lower_bound(p, &cfg()).unwrap();
        assert!((r.bound - want).abs() < 1e-8, "p = {p}: {}", r.bound);
    }
    let r = lower_bound(3.0, &cfg()).unwrap();
    let closed = (140.0 / 3.0) * (0.125 - 1.0 / (6.0 * PI)).powi(2);
    assert!((r.bound - closed).abs() < 1e-8);
}

#[test]
fn sweep_has_an_interior_maximum() {
    let pts = sweep(2.0, 5.0, 0.5, &cfg()).unwrap();
    assert_eq!(pts.len(), 7);
    let bounds: Vec<f64> = pts.iter().map(|p| p.report.unwrap().bound).collect();
    let argmax = (0..7)
        .max_by(|&i, &j| bounds[i].total_cmp(&bounds[j]))
        .unwrap();
    assert!(argmax > 0 && argmax < 6, "{bounds:?}");
}

#[test]
fn sweep_is_flat_near_the_optimum() {
    let pts = sweep(3.2, 3.4, 0.05, &cfg()).unwrap();
    assert_eq!(pts.len(), 5);
    for pt in pts {
        let b = pt.report.unwrap().bound;
        assert!((0.2415..=0.2418).contains(&b), "p = {}: {b}", pt.p);
    }
}

#[test]
fn one_point_sweep_matches_lower_bound() {
    let eps = 1e-12;
    let pts = sweep(3.0, 3.0 + eps, eps, &cfg()).unwrap();
    assert_eq!(pts.len(), 1);
    assert_eq!(pts[0].report.unwrap(), lower_bound(3.0, &cfg()).unwrap());
}

#[test]
fn optimizer_examples() {
    let o = optimize_exponent(2.0, 5.0, 1e-4, &cfg()).unwrap();
    assert!(o.report.bound >= 0.241713);
    assert!((3.0..=3.8).contains(&o.p_star));
    let o = optimize_exponent(2.9, 3.1, 1e-4, &cfg()).unwrap();
    assert!(o.report.bound >= 0.241573);

    let tol = 1e-4;
    let o = optimize_exponent(3.0, 3.0 + 2.0 * tol, tol, &cfg()).unwrap();
    assert!((3.0..=3.0 + 2.0 * tol).contains(&o.p_star));
    assert_eq!(o.report, lower_bound(o.p_star, &cfg()).unwrap());
}

#[test]
fn optimizer_beats_a_fine_sweep() {
    let o = optimize_exponent(2.0, 5.0, 1e-4, &cfg()).unwrap();
    for pt in sweep(2.0, 5.0, 0.05, &cfg()).unwrap() {
        let b = pt.report.unwrap().bound;
        assert!(
            o.report.bound >= b,
            "sweep point {} gives {b} > {}",
            pt.p,
            o.report.bound
        );
    }
}

#[test]
fn halving_tolerance_stays_within_error_estimate() {
    let coarse = lower_bound(3.0, &cfg()).unwrap();
    let fine = lower_bound(3.0, &QuadratureConfig::with_tol(0.5e-9)).unwrap();
    assert!((coarse.bound - fine.bound).abs() < coarse.bound_error);
}

#[test]
fn discrepancy_examples() {
    let target = 1.0 / (6.0 * PI);
    let t = frl_inequality_terms(
        &IntPolynomial::from_i64s(&[1, 0, 0, 0, 1]),
        &tf(3.0),
        1.0,
        &cfg(),
    )
    .unwrap();
    let avg = 0.5f64.sqrt().powi(3) / 8.0;
    assert!((t.galois_average - avg).abs() < 1e-14);
    assert!((t.discrepancy_lhs - (target - avg).abs()).abs() < 1e-12);
    assert!((t.discrepancy_lhs - 0.0088574).abs() < 1e-7);

    let t = frl_inequality_terms(
        &IntPolynomial::from_i64s(&[-1, -1, 1]),
        &tf(3.0),
        0.0,
        &cfg(),
    )
    .unwrap();
    assert!((t.discrepancy_lhs - 0.071_948_4).abs() < 1e-7);
    assert!(t.holds);
}

#[test]
fn empirical_c_for_the_imaginary_unit() {
    let c = empirical_c(&[IntPolynomial::from_i64s(&[1, 0, 1])], &tf(3.0), &cfg()).unwrap();
    assert_eq!(c.c, 0.0);
    assert!(c.members[0].absorbed_by_lipschitz);
    assert!((c.members[0].discrepancy_lhs - 1.0 / (6.0 * PI)).abs() < 1e-12);
}

#[test]
fn empirical_c_is_stable_under_corpus_growth() {
    let small = empirical_c(&cyclotomic_corpus(4, 64), &tf(3.0), &cfg()).unwrap();
    let large = empirical_c(&cyclotomic_corpus(4, 128), &tf(3.0), &cfg()).unwrap();
    assert!(small.c.is_finite() && large.c.is_finite());
    let scale = small.c.abs().max(large.c.abs());
    assert!(
        (small.c - large.c).abs() <= 0.005 * scale,
        "{} vs {}",
        small.c,
        large.c
    );
}

#[test]
fn cyclotomic_heights_vanish() {
    for n in 1..=30 {
        let h = weil_height(&cyclotomic(n), DEFAULT_PRECISION).unwrap();
        assert!(h.value.abs() < 1e-10, "n = {n}: {}", h.value);
    }
}

#[test]
fn cyclotomic_degrees_are_totients() {
    let phi = |n: usize| (1..=n).filter(|&k| num_gcd(k, n) == 1).count();
    for n in 1..=60 {
        assert_eq!(cyclotomic(n).degree(), phi(n), "n = {n}");
    }
}

fn num_gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

#[test]
fn preimage_tree_agrees_with_polynomial_roots() {
    for k in 1..=6u32 {
        let poly = family_polynomial(&Family::smyth(k)).unwrap();
        let rs = roots(&poly, DEFAULT_PRECISION).unwrap();
        let mut from_poly: Vec<f64> = rs.roots().iter().map(|z| z.re).collect();
        from_poly.sort_by(f64::total_cmp);
        let tree = preimage_tree(k as usize, Rational64::from_integer(1)).unwrap();
        assert_eq!(tree.points.len(), from_poly.len());
        for (a, b) in tree.points.iter().zip(&from_poly) {
            assert!((a - b).abs() < 1e-8, "depth {k}: {a} vs {b}");
        }
    }
}

#[test]
fn preimage_tree_maps_forward_to_the_seed() {
    for depth in [1usize, 5, 10, 14] {
        let t = preimage_tree(depth, Rational64::from_integer(1)).unwrap();
        assert!(t.max_forward_error() < 1e-9, "depth {depth}");
        for &x in t.points.iter().step_by(97) {
            let mut y = x;
            for _ in 0..depth {
                y = smyth_map(y);
            }
            assert!(
                (y - 1.0).abs() < 1e-6 * (1.0 + x.abs().max(1.0 / x.abs())),
                "{x} -> {y}"
            );
        }
    }
}

#[test]
fn smyth_estimates_increase_towards_the_limit() {
    let values: Vec<f64> = (1..=14).map(|k| az_pairing_estimate(k).unwrap()).collect();
    assert!((values[0] - 0.5 * ((1.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-12);
    assert!(values.windows(2).all(|w| w[1] > w[0]));
    assert!((values[13] - 0.27328).abs() < 1e-4);
    assert!(values[13] < 0.27328 + 1e-5);
}
