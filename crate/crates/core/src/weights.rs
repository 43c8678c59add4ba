//! Weights, tuples of weights and weighted products.
//!
//! A weight `(a_0,…,a_{k-1}; b)` acts on a window of `k` consecutive values as
//! `Σ a_i f(i) + b`. A tuple of weights is applied cyclically, each weight
//! consuming its window from the sequence.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactla::{parse_rational, Rational, RationalPoly};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight {
    coeffs: Vec<Rational>,
    constant: Rational,
}

impl Weight {
    pub fn new(coeffs: Vec<Rational>, constant: Rational) -> Result<Self> {
        if coeffs.iter().any(Signed::is_negative) {
            return Err(Error::NegativeCoefficient);
        }
        Ok(Weight { coeffs, constant })
    }

    /// `(1; 0)`.
    pub fn identity() -> Self {
        Weight { coeffs: vec![Rational::from_integer(1.into())], constant: Rational::zero() }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    /// Window length `k`.
    pub fn window(&self) -> usize {
        self.coeffs.len()
    }

    pub fn apply(&self, window: &[Rational]) -> Result<Rational> {
        if window.len() < self.window() {
            return Err(Error::ShortWindow { needed: self.window(), available: window.len() });
        }
        Ok(self.coeffs.iter().zip(window).fold(self.constant.clone(), |acc, (a, x)| acc + a * x))
    }

    /// The polynomial `N ↦ Σ a_i p(stride·N + offset + i) + b`.
    pub fn apply_poly(&self, p: &RationalPoly, stride: u64, offset: u64) -> RationalPoly {
        let mut acc = RationalPoly::constant(self.constant.clone());
        for (i, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                acc = &acc + &p.affine_subst(stride, offset + i as u64).scale(a);
            }
        }
        acc
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_non_constant(&self) -> bool {
        !self.is_constant()
    }

    /// At least two window coefficients are nonzero.
    pub fn is_strongly_non_constant(&self) -> bool {
        self.coeffs.iter().filter(|a| !a.is_zero()).count() >= 2
    }

    /// `cα`: every entry, constant included, times `c`.
    pub fn scale(&self, c: &Rational) -> Result<Self> {
        if c.is_negative() {
            return Err(Error::NegativeScalar);
        }
        Ok(Weight { coeffs: self.coeffs.iter().map(|a| a * c).collect(), constant: &self.constant * c })
    }

    /// Only the constant times `c`.
    pub fn last_scale(&self, c: &Rational) -> Self {
        Weight { coeffs: self.coeffs.clone(), constant: &self.constant * c }
    }

    /// `γ·(β_0,…,β_{k-1})`: the weight over the concatenated windows of the `β_i`.
    fn fold(&self, inner: &[Weight]) -> Weight {
        debug_assert_eq!(inner.len(), self.window());
        let mut coeffs = Vec::new();
        let mut constant = self.constant.clone();
        for (x, beta) in self.coeffs.iter().zip(inner) {
            coeffs.extend(beta.coeffs.iter().map(|a| x * a));
            constant += x * &beta.constant;
        }
        Weight { coeffs, constant }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        write!(f, "({};{})", coeffs.join(","), self.constant)
    }
}

/// A nonempty tuple `⟨α_0,…,α_{m-1}⟩` of weights.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightTuple(Vec<Weight>);

impl WeightTuple {
    pub fn new(weights: Vec<Weight>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyTuple);
        }
        Ok(WeightTuple(weights))
    }

    pub fn single(weight: Weight) -> Self {
        WeightTuple(vec![weight])
    }

    pub fn identity() -> Self {
        Self::single(Weight::identity())
    }

    pub fn weights(&self) -> &[Weight] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Total window length of one pass through the tuple.
    pub fn sum_length(&self) -> usize {
        self.0.iter().map(Weight::window).sum()
    }

    /// Index of the first input value read by the weight producing output `n`.
    fn offset(&self, n: usize) -> Result<usize> {
        let sum = self.sum_length();
        if sum == 0 {
            return Err(Error::ZeroSumLength);
        }
        let m = self.len();
        let within: usize = self.0[..n % m].iter().map(Weight::window).sum();
        Ok((n / m) * sum + within)
    }

    /// Value `n` of `self ⊙ f`, reading `f` through the callback.
    pub fn value_at<F>(&self, n: usize, mut f: F) -> Result<Rational>
    where
        F: FnMut(usize) -> Result<Rational>,
    {
        let start = self.offset(n)?;
        let weight = &self.0[n % self.len()];
        let window = (start..start + weight.window()).map(&mut f).collect::<Result<Vec<_>>>()?;
        weight.apply(&window)
    }

    /// The first `count` values of `self ⊙ f` for a finite list of values.
    pub fn product_of_values(&self, values: &[Rational], count: usize) -> Result<Vec<Rational>> {
        (0..count)
            .map(|n| {
                self.value_at(n, |i| {
                    values.get(i).cloned().ok_or(Error::ShortWindow { needed: i + 1, available: values.len() })
                })
            })
            .collect()
    }

    /// The first `count` values of `self ⊙ p`.
    pub fn product_of_poly(&self, p: &RationalPoly, count: usize) -> Result<Vec<Rational>> {
        (0..count).map(|n| self.value_at(n, |i| Ok(p.eval_at(i as u64)))).collect()
    }

    /// `self ⊙ p` as one polynomial per residue class: entry `r` is `N ↦ (self ⊙ p)(mN + r)`.
    pub fn residue_polys(&self, p: &RationalPoly) -> Result<Vec<RationalPoly>> {
        let sum = self.sum_length() as u64;
        if sum == 0 {
            return Err(Error::ZeroSumLength);
        }
        let mut offset = 0u64;
        let mut out = Vec::with_capacity(self.len());
        for w in &self.0 {
            out.push(w.apply_poly(p, sum, offset));
            offset += w.window() as u64;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Result<Self> {
        Ok(WeightTuple(self.0.iter().map(|w| w.scale(c)).collect::<Result<_>>()?))
    }

    pub fn last_scale(&self, c: &Rational) -> Self {
        WeightTuple(self.0.iter().map(|w| w.last_scale(c)).collect())
    }

    pub fn concat(&self, other: &WeightTuple) -> Self {
        WeightTuple(self.0.iter().chain(&other.0).cloned().collect())
    }

    /// The tuple repeated `n` times.
    pub fn unfold(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("unfolding needs n ≥ 1".into()));
        }
        Ok(WeightTuple(self.0.iter().cycle().take(n * self.len()).cloned().collect()))
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|w| w.coeffs.iter().chain([&w.constant]).all(Rational::is_integer))
    }
}

/// The tuple `γ` with `γ ⊙ f = outer ⊙ (inner ⊙ f)` for every `f`.
pub fn compose_tuples(outer: &WeightTuple, inner: &WeightTuple) -> Result<WeightTuple> {
    let sum = outer.sum_length();
    if sum == 0 {
        return Err(Error::ZeroSumLength);
    }
    let l = sum.lcm(&inner.len());
    let outer = outer.unfold(l / sum)?;
    let inner = inner.unfold(l / inner.len())?;
    let mut pos = 0;
    let mut folded = Vec::with_capacity(outer.len());
    for w in outer.weights() {
        folded.push(w.fold(&inner.0[pos..pos + w.window()]));
        pos += w.window();
    }
    WeightTuple::new(folded)
}

impl fmt::Display for WeightTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|w| write!(f, "{w}"))
    }
}

impl FromStr for Weight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tuple: WeightTuple = s.parse()?;
        match <[Weight; 1]>::try_from(tuple.0) {
            Ok([w]) => Ok(w),
            Err(_) => Err(bad_tuple(s, "expected a single weight")),
        }
    }
}

impl FromStr for WeightTuple {
    type Err = Error;

    /// `(a0,a1,...;b)(...)...`, whitespace ignored.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut rest = compact.as_str();
        let mut weights = Vec::new();
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(|| bad_tuple(s, "expected '('"))?;
            let end = body.find(')').ok_or_else(|| bad_tuple(s, "missing ')'"))?;
            let (inside, tail) = (&body[..end], &body[end + 1..]);
            let (window, constant) = inside.split_once(';').ok_or_else(|| bad_tuple(s, "missing ';'"))?;
            let coeffs = if window.is_empty() {
                Vec::new()
            } else {
                window.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?
            };
            weights.push(Weight::new(coeffs, parse_rational(constant)?)?);
            rest = tail;
        }
        WeightTuple::new(weights)
    }
}

fn bad_tuple(s: &str, why: &str) -> Error {
    Error::InvalidArgument(format!("bad weight tuple {s:?}: {why}"))
}
