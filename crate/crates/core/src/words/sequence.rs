use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exactla::{denominator_lcm, Rational, RationalPoly};
use crate::weights::WeightTuple;

/// A sequence `f : N → Z` used as the block lengths of a block word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntegerSequence {
    /// `n ↦ scale · poly(n)`; `scale` makes every value integral.
    Poly { poly: RationalPoly, scale: BigInt },
    /// Finitely many values; querying past the end is an error.
    Explicit(Vec<BigInt>),
    /// `n ↦ base(n + shift)`.
    Shifted(Box<IntegerSequence>, usize),
    /// The weighted product `tuple ⊙ base`; every value has to be integral.
    Weighted(WeightTuple, Box<IntegerSequence>),
}

impl IntegerSequence {
    /// `⟨p⟩` for a rational polynomial: scaled by [`naturalise`].
    pub fn poly(poly: RationalPoly) -> Self {
        let scale = naturalise(&poly);
        IntegerSequence::Poly { poly, scale }
    }

    pub fn poly_scaled(poly: RationalPoly, scale: BigInt) -> Self {
        IntegerSequence::Poly { poly, scale }
    }

    pub fn explicit<I: Into<BigInt>>(values: impl IntoIterator<Item = I>) -> Self {
        IntegerSequence::Explicit(values.into_iter().map(Into::into).collect())
    }

    pub fn shifted(self, k: usize) -> Self {
        IntegerSequence::Shifted(Box::new(self), k)
    }

    pub fn weighted(tuple: WeightTuple, base: IntegerSequence) -> Self {
        IntegerSequence::Weighted(tuple, Box::new(base))
    }

    /// The exact value at `n`, which may be negative.
    pub fn value(&self, n: usize) -> Result<BigInt> {
        match self {
            IntegerSequence::Poly { poly, scale } => {
                let v = poly.eval_at(n as u64) * Rational::from_integer(scale.clone());
                integral(v, n)
            }
            IntegerSequence::Explicit(values) => values.get(n).cloned().ok_or(Error::SequenceExhausted(n)),
            IntegerSequence::Shifted(base, k) => base.value(n + k),
            IntegerSequence::Weighted(tuple, base) => {
                let v = tuple.value_at(n, |i| base.value(i).map(Rational::from_integer))?;
                integral(v, n)
            }
        }
    }

    /// The value at `n` as a block length.
    pub fn block_len(&self, n: usize) -> Result<BigInt> {
        let v = self.value(n)?;
        if v.is_negative() {
            return Err(Error::NegativeBlock { index: n, value: v.to_string() });
        }
        Ok(v)
    }

    pub fn values(&self, count: usize) -> Result<Vec<BigInt>> {
        (0..count).map(|n| self.value(n)).collect()
    }
}

fn integral(v: Rational, index: usize) -> Result<BigInt> {
    if v.is_integer() {
        Ok(v.to_integer())
    } else {
        Err(Error::NonIntegralBlock { index, value: v.to_string() })
    }
}

/// The least `d ≥ 1` such that `d · p(n)` is an integer for every natural `n`.
///
/// Computed from the coordinates of `p` in the binomial basis `C(n, j)`: the
/// values are all integral exactly when these coordinates are, so `d` is the
/// lcm of their denominators.
pub fn naturalise(p: &RationalPoly) -> BigInt {
    if p.is_zero() {
        return BigInt::one();
    }
    denominator_lcm(&p.forward_differences())
}
