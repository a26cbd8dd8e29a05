//! Thin complex layer over `astro_float::BigFloat`.

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::BigInt;
use num_complex::Complex64;

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

/// `log2 |x|`, `-inf` for zero. Exact enough for stopping tests at any precision.
pub(crate) fn log2_abs(x: &BigFloat) -> f64 {
    match x.as_raw_parts() {
        Some((words, _, _, e, _)) if !words.is_empty() && !x.is_zero() => {
            let top = *words.last().unwrap() as f64 / 18446744073709551616.0;
            top.log2() + e as f64
        }
        _ => f64::NEG_INFINITY,
    }
}

pub(crate) fn to_f64(x: &BigFloat) -> f64 {
    match x.as_raw_parts() {
        Some((words, _, sign, e, _)) if !words.is_empty() && !x.is_zero() => {
            let n = words.len();
            let mut m = words[n - 1] as f64;
            if n > 1 {
                m += words[n - 2] as f64 / 18446744073709551616.0;
            }
            let e = e - 64;
            // split the scaling so intermediate powers stay finite
            let half = e / 2;
            let v = m * 2f64.powi(half) * 2f64.powi(e - half);
            if sign == Sign::Neg {
                -v
            } else {
                v
            }
        }
        _ => 0.0,
    }
}

pub(crate) fn from_bigint(c: &BigInt, prec: usize, cc: &mut Consts) -> BigFloat {
    if let Ok(v) = i64::try_from(c) {
        BigFloat::from_i64(v, prec)
    } else {
        BigFloat::parse(&c.to_string(), Radix::Dec, prec, RM, cc)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn zero(p: usize) -> Self {
        Self {
            re: BigFloat::from_word(0, p),
            im: BigFloat::from_word(0, p),
        }
    }

    pub fn from_c64(z: Complex64, p: usize) -> Self {
        Self {
            re: BigFloat::from_f64(z.re, p),
            im: BigFloat::from_f64(z.im, p),
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }

    pub fn with_precision(&self, p: usize) -> Self {
        let mut out = self.clone();
        out.re.set_precision(p, RM).expect("precision change");
        out.im.set_precision(p, RM).expect("precision change");
        out
    }

    pub fn add(&self, o: &Self, p: usize) -> Self {
        Self {
            re: self.re.add(&o.re, p, RM),
            im: self.im.add(&o.im, p, RM),
        }
    }

    pub fn sub(&self, o: &Self, p: usize) -> Self {
        Self {
            re: self.re.sub(&o.re, p, RM),
            im: self.im.sub(&o.im, p, RM),
        }
    }

    pub fn mul(&self, o: &Self, p: usize) -> Self {
        Self {
            re: self
                .re
                .mul(&o.re, p, RM)
                .sub(&self.im.mul(&o.im, p, RM), p, RM),
            im: self
                .re
                .mul(&o.im, p, RM)
                .add(&self.im.mul(&o.re, p, RM), p, RM),
        }
    }

    pub fn add_real(&self, r: &BigFloat, p: usize) -> Self {
        Self {
            re: self.re.add(r, p, RM),
            im: self.im.clone(),
        }
    }

    pub fn norm_sqr(&self, p: usize) -> BigFloat {
        self.re
            .mul(&self.re, p, RM)
            .add(&self.im.mul(&self.im, p, RM), p, RM)
    }

    pub fn recip(&self, p: usize) -> Self {
        let n = self.norm_sqr(p);
        Self {
            re: self.re.div(&n, p, RM),
            im: self.im.div(&n, p, RM).neg(),
        }
    }

    pub fn div(&self, o: &Self, p: usize) -> Self {
        self.mul(&o.recip(p), p)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// `log2 |z|` computed from the larger component, accurate to about one bit.
    pub fn log2_abs(&self) -> f64 {
        let a = log2_abs(&self.re);
        let b = log2_abs(&self.im);
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        if hi == f64::NEG_INFINITY {
            return hi;
        }
        hi + 0.5 * (1.0 + (2.0 * (lo - hi)).exp2()).log2()
    }
}
