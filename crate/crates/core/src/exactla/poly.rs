use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{format_rational_list, parse_rational_list, Rational};
use crate::error::{Error, Result};

/// A polynomial in `n` with exact rational coefficients.
///
/// `coeffs[i]` is the coefficient of `n^i`. Trailing zeros are stripped, so the
/// zero polynomial has no coefficients at all.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RationalPoly {
    coeffs: Vec<Rational>,
}

impl RationalPoly {
    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c * n^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `n^i`, zero beyond the order.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// Highest exponent with a nonzero coefficient; zero for constants and the zero polynomial.
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_at(&self, n: u64) -> Rational {
        self.eval(&Rational::from_integer(BigInt::from(n)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// The polynomial `n ↦ p(a·n + b)`.
    pub fn affine_subst(&self, a: u64, b: u64) -> Self {
        self.compose_affine(&Rational::from_integer(a.into()), &Rational::from_integer(b.into()))
    }

    /// The polynomial `n ↦ p(a·n + b)` for rational `a`, `b`.
    pub fn compose_affine(&self, a: &Rational, b: &Rational) -> Self {
        let linear = RationalPoly::new(vec![b.clone(), a.clone()]);
        self.coeffs
            .iter()
            .rev()
            .fold(RationalPoly::zero(), |acc, c| &(&acc * &linear) + &RationalPoly::constant(c.clone()))
    }

    /// Drops the constant term.
    pub fn without_constant(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        if let Some(c) = coeffs.first_mut() {
            *c = Rational::zero();
        }
        Self::new(coeffs)
    }

    /// Coordinates in the binomial basis: `p(n) = Σ_j Δ^j p(0) · C(n, j)`.
    ///
    /// `p` maps the naturals into the integers exactly when all of these are integers.
    pub fn forward_differences(&self) -> Vec<Rational> {
        let mut values: Vec<Rational> = (0..=self.order() as u64).map(|n| self.eval_at(n)).collect();
        let mut out = Vec::with_capacity(values.len());
        while !values.is_empty() {
            out.push(values[0].clone());
            values = values.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        out
    }
}

impl fmt::Display for RationalPoly {
    /// Comma separated coefficients from low to high order; `0` for the zero polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&format_rational_list(&self.coeffs))
    }
}

impl FromStr for RationalPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coeffs = parse_rational_list(s)?;
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("empty coefficient list".into()));
        }
        Ok(RationalPoly::new(coeffs))
    }
}

impl Add for &RationalPoly {
    type Output = RationalPoly;

    fn add(self, rhs: &RationalPoly) -> RationalPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RationalPoly::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RationalPoly {
    type Output = RationalPoly;

    fn sub(self, rhs: &RationalPoly) -> RationalPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RationalPoly::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;

    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        if self.is_zero() || rhs.is_zero() {
            return RationalPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPoly::new(out)
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;

    fn neg(self) -> RationalPoly {
        self.scale(&-Rational::one())
    }
}
