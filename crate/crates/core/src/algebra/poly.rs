use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Univariate polynomial with arbitrary-size integer coefficients.
///
/// Coefficients are stored in ascending degree order and kept normalized: the
/// last stored coefficient is nonzero, and the zero polynomial has no
/// coefficients at all.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<String>", try_from = "Vec<String>")]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// The monomial `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        Self { coeffs }
    }

    /// Coefficients in ascending degree order.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial assigned degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn constant(&self) -> BigInt {
        self.coeffs.first().cloned().unwrap_or_default()
    }

    /// `x^deg · p(1/x)`: the polynomial whose roots are the reciprocals of
    /// the nonzero roots of `self`.
    pub fn reverse(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self::new(coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let out = (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).cloned().unwrap_or_default();
                let b = other.coeffs.get(k).cloned().unwrap_or_default();
                a + b
            })
            .collect();
        Self::new(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Exact division by a monic divisor; `None` when the remainder is nonzero.
    pub fn div_exact_monic(&self, divisor: &Self) -> Option<Self> {
        assert!(divisor.leading().is_one(), "divisor must be monic");
        if self.degree() < divisor.degree() {
            return if self.is_zero() {
                Some(Self::zero())
            } else {
                None
            };
        }
        let dd = divisor.degree();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone();
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
            quot[k] = c;
        }
        if rem.iter().all(Zero::is_zero) {
            Some(Self::new(quot))
        } else {
            None
        }
    }

    /// Largest coefficient magnitude in bits.
    pub fn height_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 if show_coeff => write!(f, "*x")?,
                1 => write!(f, "x")?,
                _ if show_coeff => write!(f, "*x^{k}")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_polynomial(s)
    }
}

impl From<IntPolynomial> for Vec<String> {
    fn from(p: IntPolynomial) -> Self {
        p.coeffs.iter().map(ToString::to_string).collect()
    }
}

impl TryFrom<Vec<String>> for IntPolynomial {
    type Error = Error;

    fn try_from(v: Vec<String>) -> Result<Self> {
        parse_coefficient_list(&v.join(","))
    }
}

/// Parse either a polynomial expression in `x` (`"x^2 - x - 1"`, `"3*x^4 + 2x"`)
/// or an ascending comma-separated coefficient list (`"-1,-1,1"`).
pub fn parse_polynomial(text: &str) -> Result<IntPolynomial> {
    if text.contains(',') {
        parse_coefficient_list(text)
    } else {
        ExprParser::new(text).parse()
    }
}

fn parse_coefficient_list(text: &str) -> Result<IntPolynomial> {
    let mut coeffs = Vec::new();
    let mut offset = 0;
    for field in text.split(',') {
        let lead = field.len() - field.trim_start().len();
        let item = field.trim();
        let pos = offset + lead;
        if item.is_empty() {
            return Err(Error::Syntax {
                pos,
                msg: "empty coefficient".into(),
            });
        }
        if looks_fractional(item) {
            return Err(Error::NonIntegerCoefficient { pos });
        }
        let normalized = item.replace('−', "-");
        let c = BigInt::from_str(&normalized).map_err(|_| Error::Syntax {
            pos,
            msg: format!("expected an integer, found `{item}`"),
        })?;
        coeffs.push(c);
        offset += field.len() + 1;
    }
    Ok(IntPolynomial::new(coeffs))
}

fn looks_fractional(item: &str) -> bool {
    let body = item.trim_start_matches(['+', '-', '−']);
    !body.is_empty()
        && body
            .chars()
            .all(|c| c.is_ascii_digit() || c == '.' || c == '/' || c == 'e' || c == 'E')
        && (body.contains('.') || body.contains('/'))
}

struct ExprParser<'a> {
    chars: Vec<(usize, char)>,
    idx: usize,
    text: &'a str,
}

impl<'a> ExprParser<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            chars: text.char_indices().collect(),
            idx: 0,
            text,
        }
    }

    fn pos(&self) -> usize {
        self.chars
            .get(self.idx)
            .map_or(self.text.len(), |&(p, _)| p)
    }

    fn skip_ws(&mut self) {
        while self
            .chars
            .get(self.idx)
            .is_some_and(|&(_, c)| c.is_whitespace())
        {
            self.idx += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.idx).map(|&(_, c)| c)
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn parse(mut self) -> Result<IntPolynomial> {
        let mut terms: Vec<(usize, BigInt)> = Vec::new();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                None if first => return self.syntax("empty polynomial"),
                None => break,
                Some('+') => {
                    self.idx += 1;
                    1
                }
                Some('-' | '−') => {
                    self.idx += 1;
                    -1
                }
                Some(_) if first => 1,
                Some(c) => return self.syntax(format!("expected `+` or `-`, found `{c}`")),
            };
            first = false;
            let (k, c) = self.term()?;
            terms.push((k, c * sign));
        }
        let deg = terms.iter().map(|&(k, _)| k).max().unwrap_or(0);
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        for (k, c) in terms {
            coeffs[k] += c;
        }
        Ok(IntPolynomial::new(coeffs))
    }

    fn term(&mut self) -> Result<(usize, BigInt)> {
        let coeff = match self.peek() {
            Some(c) if c.is_ascii_digit() || c == '.' => Some(self.integer()?),
            _ => None,
        };
        let has_x = match self.peek() {
            Some('*') if coeff.is_some() => {
                self.idx += 1;
                if self.peek() != Some('x') {
                    return self.syntax("expected `x` after `*`");
                }
                true
            }
            Some('x') => true,
            _ => false,
        };
        if !has_x {
            return match coeff {
                Some(c) => Ok((0, c)),
                None => match self.peek() {
                    Some(c) => self.syntax(format!("unexpected `{c}`")),
                    None => self.syntax("expected a term"),
                },
            };
        }
        self.idx += 1; // x
        let power = if self.peek() == Some('^') {
            self.idx += 1;
            if self.peek().is_none_or(|c| !c.is_ascii_digit()) {
                return self.syntax("expected exponent after `^`");
            }
            let start = self.pos();
            let e = self.integer()?;
            usize::try_from(e).map_err(|_| Error::Syntax {
                pos: start,
                msg: "exponent too large".into(),
            })?
        } else {
            1
        };
        Ok((power, coeff.unwrap_or_else(BigInt::one)))
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start_idx = self.idx;
        let start = self.pos();
        while self
            .chars
            .get(self.idx)
            .is_some_and(|&(_, c)| c.is_ascii_digit())
        {
            self.idx += 1;
        }
        if self
            .chars
            .get(self.idx)
            .is_some_and(|&(_, c)| c == '.' || c == '/')
        {
            return Err(Error::NonIntegerCoefficient { pos: start });
        }
        if self.idx == start_idx {
            return self.syntax("expected digits");
        }
        let end = self.pos();
        Ok(BigInt::from_str(&self.text[start..end]).expect("digit run parses"))
    }
}
