//! Test corpora of algebraic numbers, conjugate averages of the test
//! functions, the empirical equidistribution constant, and backward orbits of
//! Smyth's map `H(x) = x - 1/x`.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{roots, IntPolynomial, RootSet, DEFAULT_PRECISION};
use crate::bounds::FrlContext;
use crate::geometry::TestFunction;
use crate::quadrature::QuadratureConfig;
use crate::{Error, Result};

/// Deepest preimage tree built unless a caller raises the cap.
pub const DEFAULT_DEPTH_CAP: usize = 16;

/// Deepest Smyth polynomial expanded symbolically; coefficients grow quickly.
pub const SMYTH_POLYNOMIAL_DEPTH_CAP: usize = 8;

/// `H(x) = x - 1/x`.
pub fn smyth_map(x: f64) -> f64 {
    x - 1.0 / x
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    /// Primitive `n`-th roots of unity, the roots of `Φ_n`.
    RootsOfUnity { n: u32 },
    /// The roots of `x^n - base`.
    Radical { base: u32, n: u32 },
    /// The `depth`-fold `H`-preimages of `seed`.
    SmythPreimages { depth: u32, seed: Rational64 },
}

impl Family {
    pub fn smyth(depth: u32) -> Self {
        Family::SmythPreimages {
            depth,
            seed: Rational64::one(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Family::RootsOfUnity { n } if n < 1 => Err(bad("n must be at least 1")),
            Family::Radical { base, .. } if base < 2 => Err(bad("base must be at least 2")),
            Family::Radical { n, .. } if n < 1 => Err(bad("n must be at least 1")),
            Family::SmythPreimages { seed, .. } if !is_preperiodic_seed(seed) => Err(bad(format!(
                "seed {seed} has an infinite forward orbit under H"
            ))),
            _ => Ok(()),
        }
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

/// Whether the forward `H`-orbit of a rational seed reaches the pole `0` or
/// repeats. Rational orbits that do neither have strictly growing height.
pub fn is_preperiodic_seed(seed: Rational64) -> bool {
    let mut x = BigRational::new(BigInt::from(*seed.numer()), BigInt::from(*seed.denom()));
    let mut seen = vec![x.clone()];
    for _ in 0..32 {
        if x.is_zero() {
            return true;
        }
        // H(a/b) = (a² - b²)/(ab) in lowest terms, so heights only grow from here
        if x.numer().bits() > 64 || x.denom().bits() > 64 {
            return false;
        }
        x = &x - x.recip();
        if seen.contains(&x) {
            return true;
        }
        seen.push(x.clone());
    }
    false
}

/// The integer polynomial whose roots are the members of `fam`.
pub fn family_polynomial(fam: &Family) -> Result<IntPolynomial> {
    fam.validate()?;
    match *fam {
        Family::RootsOfUnity { n } => Ok(cyclotomic(n as usize)),
        Family::Radical { base, n } => {
            let mut coeffs = vec![BigInt::zero(); n as usize + 1];
            coeffs[0] = -BigInt::from(base);
            coeffs[n as usize] = BigInt::one();
            Ok(IntPolynomial::new(coeffs))
        }
        Family::SmythPreimages { depth, seed } => smyth_polynomial(depth as usize, seed),
    }
}

fn mobius(n: usize) -> i32 {
    let mut m = n;
    let mut sign = 1;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            m /= d;
            if m.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

/// `Φ_n = ∏_{d | n} (x^d - 1)^{μ(n/d)}`.
pub fn cyclotomic(n: usize) -> IntPolynomial {
    assert!(n >= 1);
    let x_pow_minus_one = |d: usize| {
        let mut c = vec![BigInt::zero(); d + 1];
        c[0] = -BigInt::one();
        c[d] = BigInt::one();
        IntPolynomial::new(c)
    };
    let mut num = IntPolynomial::from_i64s(&[1]);
    let mut den = IntPolynomial::from_i64s(&[1]);
    for d in (1..=n).filter(|&d| n.is_multiple_of(d)) {
        match mobius(n / d) {
            1 => num = num.mul(&x_pow_minus_one(d)),
            -1 => den = den.mul(&x_pow_minus_one(d)),
            _ => {}
        }
    }
    // den is monic up to sign
    let (den, num) = if den.leading().is_one() {
        (den, num)
    } else {
        (den.scale(&-BigInt::one()), num.scale(&-BigInt::one()))
    };
    num.div_exact_monic(&den)
        .expect("cyclotomic quotient is exact")
}

/// `Q_0 = b·x - a` for seed `a/b`, and `Q_{k+1}(x) = x^{deg Q_k} Q_k((x² - 1)/x)`.
fn smyth_polynomial(depth: usize, seed: Rational64) -> Result<IntPolynomial> {
    if depth > SMYTH_POLYNOMIAL_DEPTH_CAP {
        return Err(Error::DepthCap {
            depth,
            cap: SMYTH_POLYNOMIAL_DEPTH_CAP,
        });
    }
    let mut q = IntPolynomial::new(vec![
        BigInt::from(-*seed.numer()),
        BigInt::from(*seed.denom()),
    ]);
    let h_num = IntPolynomial::from_i64s(&[-1, 0, 1]);
    for _ in 0..depth {
        let d = q.degree();
        // Σ a_j (x² - 1)^j x^{d - j}
        let mut next = IntPolynomial::zero();
        let mut pow = IntPolynomial::from_i64s(&[1]);
        for (j, a) in q.coeffs().iter().enumerate() {
            if !a.is_zero() {
                next = next.add(&pow.mul(&IntPolynomial::monomial(d - j)).scale(a));
            }
            pow = pow.mul(&h_num);
        }
        q = next;
    }
    Ok(q)
}

/// Mean of `f_p` over the roots of `poly`, counted with multiplicity.
pub fn galois_average(poly: &IntPolynomial, tf: &TestFunction) -> Result<f64> {
    Ok(galois_average_of(&roots(poly, DEFAULT_PRECISION)?, tf))
}

pub fn galois_average_of(rs: &RootSet, tf: &TestFunction) -> f64 {
    rs.roots().iter().map(|&z| tf.eval_finite(z)).sum::<f64>() / rs.len() as f64
}

/// The `depth`-fold `H`-preimages of a seed, sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreimageTree {
    pub depth: usize,
    pub seed: f64,
    pub points: Vec<f64>,
}

impl PreimageTree {
    /// Largest `|H^depth(x) - seed|` over the tree, relative to `1 + |seed|`.
    pub fn max_forward_error(&self) -> f64 {
        self.points
            .iter()
            .map(|&x| {
                let y = (0..self.depth).fold(x, |y, _| smyth_map(y));
                (y - self.seed).abs() / (1.0 + self.seed.abs())
            })
            .fold(0.0, f64::max)
    }
}

/// Both solutions of `x² - y x - 1 = 0`, computed without cancellation.
fn preimages(y: f64) -> [f64; 2] {
    let s = (y * y + 4.0).sqrt();
    let big = 0.5 * (y + if y >= 0.0 { s } else { -s });
    [big, -1.0 / big]
}

fn next_level(level: &[f64]) -> Vec<f64> {
    level.par_iter().flat_map_iter(|&y| preimages(y)).collect()
}

fn check_depth(depth: usize, cap: usize) -> Result<()> {
    if depth > cap {
        Err(Error::DepthCap { depth, cap })
    } else {
        Ok(())
    }
}

pub fn preimage_tree(depth: usize, seed: Rational64) -> Result<PreimageTree> {
    preimage_tree_capped(depth, seed, DEFAULT_DEPTH_CAP)
}

pub fn preimage_tree_capped(depth: usize, seed: Rational64, cap: usize) -> Result<PreimageTree> {
    check_depth(depth, cap)?;
    Family::SmythPreimages {
        depth: depth as u32,
        seed,
    }
    .validate()?;
    let s = *seed.numer() as f64 / *seed.denom() as f64;
    let mut level = vec![s];
    for _ in 0..depth {
        level = next_level(&level);
    }
    level.sort_by(f64::total_cmp);
    Ok(PreimageTree {
        depth,
        seed: s,
        points: level,
    })
}

/// Equal-mass average of `log⁺|x|` over a point set, summed in ascending order.
fn mean_log_plus(sorted: &[f64]) -> f64 {
    sorted.iter().map(|x| x.abs().ln().max(0.0)).sum::<f64>() / sorted.len() as f64
}

/// `∫ log⁺|x| dμ` for the equal-mass measure on the depth-fold preimages of 1.
/// Converges to the Arakelov–Zhang pairing of `H` with `z²` as depth grows.
pub fn az_pairing_estimate(depth: usize) -> Result<f64> {
    let tree = preimage_tree(depth, Rational64::one())?;
    Ok(mean_log_plus(&tree.points))
}

/// `(depth, height)` for depths `0..=max_depth`, where height is the Weil
/// height of the monic unit polynomial `Q_depth`, i.e. the same equal-mass
/// `log⁺` average as [`az_pairing_estimate`].
pub fn smyth_height_sequence(max_depth: usize) -> Result<Vec<(usize, f64)>> {
    check_depth(max_depth, DEFAULT_DEPTH_CAP)?;
    let mut level = vec![1.0];
    let mut out = Vec::with_capacity(max_depth + 1);
    for depth in 0..=max_depth {
        let mut sorted = level.clone();
        sorted.sort_by(f64::total_cmp);
        out.push((depth, mean_log_plus(&sorted)));
        if depth < max_depth {
            level = next_level(&level);
        }
    }
    Ok(out)
}

/// One corpus member's requirement on the constant `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MemberConstraint {
    pub degree: usize,
    pub height: f64,
    pub discrepancy_lhs: f64,
    pub lip_term: f64,
    pub required_c: f64,
    /// The Lipschitz term alone already covers the discrepancy.
    pub absorbed_by_lipschitz: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalC {
    pub c: f64,
    pub members: Vec<MemberConstraint>,
    /// Index of the member attaining the maximum, if any member needs `c > 0`.
    pub binding_member: Option<usize>,
}

/// The least `c ≥ 0` for which the equidistribution inequality holds on every
/// corpus member, using the upper Lipschitz bracket.
///
/// Because the upper bracket overestimates `Lip(f)`, the fitted constant is a
/// lower estimate of any admissible `c`.
pub fn empirical_c(
    corpus: &[IntPolynomial],
    tf: &TestFunction,
    cfg: &QuadratureConfig,
) -> Result<EmpiricalC> {
    if corpus.is_empty() {
        return Err(bad("corpus is empty"));
    }
    if let Some(p) = corpus.iter().find(|p| p.degree() < 2) {
        return Err(bad(format!("corpus member {p} has degree below 2")));
    }
    let ctx = FrlContext::new(*tf, cfg)?;
    let members = corpus
        .par_iter()
        .map(|poly| {
            let t = ctx.terms(poly, 0.0)?;
            let d = t.degree as f64;
            let excess = t.discrepancy_lhs - t.lip_term;
            let (required_c, absorbed) = if excess <= 0.0 {
                (0.0, true)
            } else {
                let need = excess * excess / (t.energy_root * t.energy_root) - t.height;
                ((need * d / d.ln()).max(0.0), false)
            };
            Ok(MemberConstraint {
                degree: t.degree,
                height: t.height,
                discrepancy_lhs: t.discrepancy_lhs,
                lip_term: t.lip_term,
                required_c,
                absorbed_by_lipschitz: absorbed,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut c = 0.0;
    let mut binding_member = None;
    for (i, m) in members.iter().enumerate() {
        if m.required_c > c {
            c = m.required_c;
            binding_member = Some(i);
        }
    }
    Ok(EmpiricalC {
        c,
        members,
        binding_member,
    })
}

/// `Φ_n` for `n` in the range, skipping degrees below 2.
pub fn cyclotomic_corpus(n_lo: usize, n_hi: usize) -> Vec<IntPolynomial> {
    (n_lo.max(1)..=n_hi)
        .map(cyclotomic)
        .filter(|p| p.degree() >= 2)
        .collect()
}

/// Totally real members of the built-in families: Smyth preimage polynomials,
/// integers `b`, and square roots `√b`.
pub fn totally_real_corpus() -> Vec<(Family, IntPolynomial)> {
    let mut fams: Vec<Family> = (1..=6).map(Family::smyth).collect();
    fams.extend([
        Family::SmythPreimages {
            depth: 3,
            seed: Rational64::new(-1, 1),
        },
        Family::SmythPreimages {
            depth: 4,
            seed: Rational64::zero(),
        },
    ]);
    for base in 2..=12 {
        fams.push(Family::Radical { base, n: 1 });
        fams.push(Family::Radical { base, n: 2 });
    }
    fams.into_iter()
        .map(|f| {
            let p = family_polynomial(&f).expect("built-in family is valid");
            (f, p)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs(p: &IntPolynomial) -> Vec<i64> {
        p.coeffs()
            .iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect()
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(coeffs(&cyclotomic(1)), vec![-1, 1]);
        assert_eq!(coeffs(&cyclotomic(4)), vec![1, 0, 1]);
        assert_eq!(coeffs(&cyclotomic(5)), vec![1, 1, 1, 1, 1]);
        assert_eq!(coeffs(&cyclotomic(12)), vec![1, 0, -1, 0, 1]);
        // Φ_105 is the first with a coefficient of magnitude 2
        assert!(coeffs(&cyclotomic(105)).contains(&-2));
        assert_eq!(cyclotomic(128).degree(), 64);
    }

    #[test]
    fn family_examples() {
        let p = family_polynomial(&Family::RootsOfUnity { n: 4 }).unwrap();
        assert_eq!(coeffs(&p), vec![1, 0, 1]);
        let p = family_polynomial(&Family::smyth(1)).unwrap();
        assert_eq!(coeffs(&p), vec![-1, -1, 1]);
        let p = family_polynomial(&Family::Radical { base: 2, n: 3 }).unwrap();
        assert_eq!(coeffs(&p), vec![-2, 0, 0, 1]);
        let p = family_polynomial(&Family::smyth(2)).unwrap();
        // x^4 - x^3 - 3x^2 + x + 1
        assert_eq!(coeffs(&p), vec![1, 1, -3, -1, 1]);
    }

    #[test]
    fn family_validation() {
        assert!(family_polynomial(&Family::RootsOfUnity { n: 0 }).is_err());
        assert!(family_polynomial(&Family::Radical { base: 1, n: 2 }).is_err());
        assert!(family_polynomial(&Family::Radical { base: 2, n: 0 }).is_err());
        let two = Family::SmythPreimages {
            depth: 1,
            seed: Rational64::new(2, 1),
        };
        assert!(family_polynomial(&two).is_err());
        assert!(matches!(
            family_polynomial(&Family::smyth(SMYTH_POLYNOMIAL_DEPTH_CAP as u32 + 1)),
            Err(Error::DepthCap { .. })
        ));
    }

    #[test]
    fn preperiodic_seeds() {
        for s in [
            Rational64::one(),
            Rational64::new(-1, 1),
            Rational64::zero(),
        ] {
            assert!(is_preperiodic_seed(s));
        }
        for s in [
            Rational64::new(2, 1),
            Rational64::new(1, 2),
            Rational64::new(3, 7),
        ] {
            assert!(!is_preperiodic_seed(s));
        }
    }

    #[test]
    fn galois_average_examples() {
        let f = TestFunction::new(3.0).unwrap();
        let avg = galois_average(&IntPolynomial::from_i64s(&[-1, -1, 1]), &f).unwrap();
        assert!((avg - 0.125).abs() < 1e-15);
        let avg = galois_average(&IntPolynomial::from_i64s(&[1, 0, 1]), &f).unwrap();
        assert!(avg < 1e-40);
        // Φ_5: (1/4)·2·(cos³(2π/5) + cos³(4π/5))/8 with |cos| = 0.309017, 0.809017
        let (a, b) = (
            (0.4 * std::f64::consts::PI).cos(),
            (0.8 * std::f64::consts::PI).cos().abs(),
        );
        let want = 0.25 * 2.0 * (a.powi(3) + b.powi(3)) / 8.0;
        assert!((want - 0.0349385).abs() < 1e-7);
        let avg = galois_average(&cyclotomic(5), &f).unwrap();
        assert!((avg - want).abs() < 1e-15);
    }

    #[test]
    fn preimage_tree_examples() {
        let t = preimage_tree(0, Rational64::one()).unwrap();
        assert_eq!(t.points, vec![1.0]);
        let t = preimage_tree(1, Rational64::one()).unwrap();
        let s5 = 5f64.sqrt();
        assert!((t.points[0] - (1.0 - s5) / 2.0).abs() < 1e-15);
        assert!((t.points[1] - (1.0 + s5) / 2.0).abs() < 1e-15);
        let t2 = preimage_tree(2, Rational64::one()).unwrap();
        assert_eq!(t2.points.len(), 4);
        let mut images: Vec<f64> = t2.points.iter().map(|&x| smyth_map(x)).collect();
        images.sort_by(f64::total_cmp);
        // each depth-1 point has exactly two preimages
        for (k, img) in images.iter().enumerate() {
            assert!((img - t.points[k / 2]).abs() < 1e-14);
        }
        assert!(matches!(
            preimage_tree(17, Rational64::one()),
            Err(Error::DepthCap { depth: 17, cap: 16 })
        ));
        assert!(preimage_tree_capped(17, Rational64::one(), 17).is_ok());
    }

    #[test]
    fn az_estimate_small_depths() {
        assert_eq!(az_pairing_estimate(0).unwrap(), 0.0);
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((az_pairing_estimate(1).unwrap() - 0.5 * golden.ln()).abs() < 1e-15);
        let seq = smyth_height_sequence(8).unwrap();
        for (k, h) in seq {
            assert_eq!(h.to_bits(), az_pairing_estimate(k).unwrap().to_bits());
        }
    }

    #[test]
    fn empirical_c_examples() {
        let f = TestFunction::new(3.0).unwrap();
        let cfg = QuadratureConfig::default();
        let r = empirical_c(&[IntPolynomial::from_i64s(&[1, 0, 1])], &f, &cfg).unwrap();
        assert_eq!(r.c, 0.0);
        assert!(r.members[0].absorbed_by_lipschitz);
        assert!((r.members[0].discrepancy_lhs - 1.0 / (6.0 * std::f64::consts::PI)).abs() < 1e-10);
        assert!(empirical_c(&[], &f, &cfg).is_err());
        assert!(empirical_c(&[IntPolynomial::from_i64s(&[-1, 1])], &f, &cfg).is_err());
    }
}
