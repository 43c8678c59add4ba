//! Transducers realising weighted products on block words.
//!
//! A [`Stage`] is one transformation of block lengths together with the
//! machine that performs it on the block word. Stages with rational weights
//! are never compiled directly: [`realize_rational`] first clears
//! denominators into an integer weight stage and then divides exactly with a
//! ratio stage.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactla::{denominator_lcm, Rational, RationalPoly};
use crate::fst::{BlockRun, Fst};
use crate::weights::{Weight, WeightTuple};
use crate::words::{naturalise, Word};

/// Bound on states of a synthesised machine.
const MAX_STATES: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stage {
    /// Keep blocks `0, d, 2d, …` and delete the others.
    Select(usize),
    /// Natural window coefficients and integer constants.
    Weight(WeightTuple),
    /// Multiply every block length by `e / D`.
    Ratio { e: u64, d: u64 },
    /// Drop the first `k` blocks.
    Shift(usize),
}

impl Stage {
    /// `e / D` in lowest terms.
    pub fn ratio(r: &Rational) -> Result<Stage> {
        if !r.is_positive() {
            return Err(Error::UnsupportedWeights(format!("ratio {r} must be positive")));
        }
        let too_big = || Error::UnsupportedWeights(format!("ratio {r} is too large"));
        let e = r.numer().to_u64().ok_or_else(too_big)?;
        let d = r.denom().to_u64().ok_or_else(too_big)?;
        Ok(Stage::Ratio { e, d })
    }

    pub fn fst(&self) -> Result<Fst> {
        match self {
            Stage::Select(d) => synth_weight_fst(&selector(*d)?),
            Stage::Weight(t) => synth_weight_fst(t),
            Stage::Ratio { e, d } => synth_ratio_fst(*e, *d),
            Stage::Shift(k) => Ok(shift_fst(*k)),
        }
    }

    /// The stage acting on the block lengths `n ↦ p(n)`.
    pub fn apply_poly(&self, p: &RationalPoly) -> Result<RationalPoly> {
        match self {
            Stage::Select(d) => Ok(p.affine_subst(*d as u64, 0)),
            Stage::Weight(t) => match t.weights() {
                [w] if w.window() > 0 => Ok(w.apply_poly(p, w.window() as u64, 0)),
                [_] => Err(Error::ZeroSumLength),
                _ => Err(Error::InvalidArgument("only single weights map polynomials to polynomials".into())),
            },
            Stage::Ratio { e, d } => Ok(p.scale(&Rational::new(BigInt::from(*e), BigInt::from(*d)))),
            Stage::Shift(k) => Ok(p.affine_subst(1, *k as u64)),
        }
    }

    /// The stage acting on a finite list of block lengths; as many output
    /// blocks as the input determines.
    pub fn apply_blocks(&self, blocks: &[BigInt]) -> Result<Vec<BigInt>> {
        match self {
            Stage::Select(d) => Ok(blocks.iter().step_by((*d).max(1)).cloned().collect()),
            Stage::Weight(t) => {
                let values: Vec<Rational> = blocks.iter().cloned().map(Rational::from_integer).collect();
                let mut out = Vec::new();
                loop {
                    match t.value_at(out.len(), |i| {
                        values.get(i).cloned().ok_or(Error::ShortWindow { needed: i + 1, available: values.len() })
                    }) {
                        Ok(v) if v.is_integer() => out.push(v.to_integer()),
                        Ok(v) => return Err(Error::NonIntegralBlock { index: out.len(), value: v.to_string() }),
                        Err(Error::ShortWindow { .. }) => return Ok(out),
                        Err(e) => return Err(e),
                    }
                    if t.sum_length() == 0 {
                        return Err(Error::ZeroSumLength);
                    }
                }
            }
            Stage::Ratio { e, d } => {
                check_divisible(blocks.iter().cloned(), *d)?;
                Ok(blocks.iter().map(|b| b / BigInt::from(*d) * BigInt::from(*e)).collect())
            }
            Stage::Shift(k) => Ok(blocks.iter().skip(*k).cloned().collect()),
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stage::Select(d) => write!(f, "select d={d}"),
            Stage::Weight(t) => write!(f, "weight {t}"),
            Stage::Ratio { e, d } => write!(f, "ratio {e}/{d}"),
            Stage::Shift(k) => write!(f, "shift {k}"),
        }
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidArgument(format!("bad stage {s:?}"));
        let (kind, rest) = s.split_once(char::is_whitespace).ok_or_else(bad)?;
        let rest = rest.trim();
        match kind {
            "select" => {
                let d = rest.strip_prefix("d=").ok_or_else(bad)?.parse().map_err(|_| bad())?;
                if d == 0 {
                    return Err(bad());
                }
                Ok(Stage::Select(d))
            }
            "weight" => Ok(Stage::Weight(rest.parse()?)),
            "ratio" => {
                let (e, d) = rest.split_once('/').ok_or_else(bad)?;
                let e: u64 = e.trim().parse().map_err(|_| bad())?;
                let d: u64 = d.trim().parse().map_err(|_| bad())?;
                if e == 0 || d == 0 {
                    return Err(bad());
                }
                Ok(Stage::Ratio { e, d })
            }
            "shift" => Ok(Stage::Shift(rest.parse().map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }
}

fn check_divisible(blocks: impl Iterator<Item = BigInt>, d: u64) -> Result<()> {
    let divisor = BigInt::from(d);
    for (index, b) in blocks.enumerate() {
        if !b.is_multiple_of(&divisor) {
            return Err(Error::IndivisibleBlock {
                index,
                length: b.to_u128().unwrap_or(u128::MAX),
                divisor: d as u128,
            });
        }
    }
    Ok(())
}

/// `((1,0,…,0;0))` with window `d`.
fn selector(d: usize) -> Result<WeightTuple> {
    if d == 0 {
        return Err(Error::InvalidArgument("select needs d ≥ 1".into()));
    }
    let mut coeffs = vec![Rational::zero(); d];
    coeffs[0] = Rational::one();
    Ok(WeightTuple::single(Weight::new(coeffs, Rational::zero())?))
}

fn zeros(n: usize) -> Vec<u8> {
    vec![0; n]
}

fn small(r: &Rational, what: &str) -> Result<usize> {
    r.to_integer()
        .to_usize()
        .filter(|&v| v < MAX_STATES)
        .ok_or_else(|| Error::UnsupportedWeights(format!("{what} {r} is too large")))
}

/// A machine turning `⟨f⟩` into `⟨t ⊙ f⟩`.
///
/// It tracks the current weight and the block inside its window, writes
/// `a_i` zeros for every input zero of block `i`, opens every output block
/// with a `1` followed by `b` zeros, and for `b < 0` swallows the first `|b|`
/// zeros it would otherwise write for that window.
pub fn synth_weight_fst(t: &WeightTuple) -> Result<Fst> {
    if t.sum_length() == 0 {
        return Err(Error::ZeroSumLength);
    }
    struct Shape {
        coeffs: Vec<usize>,
        constant: i64,
        withhold: usize,
        base: usize,
    }
    let mut shapes = Vec::with_capacity(t.len());
    let mut states = 1;
    for w in t.weights() {
        if let Some(a) = w.coeffs().iter().chain([w.constant()]).find(|a| !a.is_integer()) {
            return Err(Error::UnsupportedWeights(format!("entry {a} of {w} is not an integer")));
        }
        let constant = w
            .constant()
            .to_integer()
            .to_i64()
            .filter(|b| b.unsigned_abs() < MAX_STATES as u64)
            .ok_or_else(|| Error::UnsupportedWeights(format!("constant of {w} is too large")))?;
        if w.window() == 0 && constant < 0 {
            return Err(Error::UnsupportedWeights(format!("{w} has an empty window and a negative constant")));
        }
        let coeffs = w.coeffs().iter().map(|a| small(a, "coefficient")).collect::<Result<Vec<_>>>()?;
        let withhold = if constant < 0 { constant.unsigned_abs() as usize } else { 0 };
        shapes.push(Shape { base: states, withhold, constant, coeffs });
        states += w.window() * (withhold + 1);
        if states > MAX_STATES {
            return Err(Error::UnsupportedWeights("machine would be too large".into()));
        }
    }
    let id = |j: usize, i: usize, r: usize| shapes[j].base + i * (shapes[j].withhold + 1) + r;
    // Output written when weight `j` is due, up to the first weight with a window.
    let opening = |mut j: usize| -> (Vec<u8>, usize) {
        let mut out = Vec::new();
        loop {
            let s = &shapes[j];
            out.push(1);
            out.extend(zeros(s.constant.max(0) as usize));
            if !s.coeffs.is_empty() {
                return (out, j);
            }
            j = (j + 1) % shapes.len();
        }
    };

    let mut delta = vec![[0usize; 2]; states];
    let mut lambda: Vec<[Word; 2]> = vec![Default::default(); states];
    let (out, j) = opening(0);
    delta[0] = [0, id(j, 0, shapes[j].withhold)];
    lambda[0] = [Word::empty(), Word::new(out)?];
    for (j, s) in shapes.iter().enumerate() {
        for (i, &a) in s.coeffs.iter().enumerate() {
            for r in 0..=s.withhold {
                let q = id(j, i, r);
                let held = r.min(a);
                delta[q][0] = id(j, i, r - held);
                lambda[q][0] = Word::new(zeros(a - held))?;
                if i + 1 < s.coeffs.len() {
                    delta[q][1] = id(j, i + 1, r);
                } else {
                    let (out, next) = opening((j + 1) % shapes.len());
                    delta[q][1] = id(next, 0, shapes[next].withhold);
                    lambda[q][1] = Word::new(out)?;
                }
            }
        }
    }
    Fst::new(0, delta, lambda)
}

/// Copies every `1` and writes `e` zeros for every `d` consecutive zeros of a block.
pub fn synth_ratio_fst(e: u64, d: u64) -> Result<Fst> {
    if e == 0 || d == 0 {
        return Err(Error::InvalidArgument("ratio needs e, D ≥ 1".into()));
    }
    let d = usize::try_from(d).ok().filter(|&d| d <= MAX_STATES);
    let d = d.ok_or_else(|| Error::UnsupportedWeights("ratio denominator is too large".into()))?;
    let e = usize::try_from(e).ok().filter(|&e| e <= MAX_STATES);
    let e = e.ok_or_else(|| Error::UnsupportedWeights("ratio numerator is too large".into()))?;
    let delta = (0..d).map(|c| [(c + 1) % d, 0]).collect();
    let lambda = (0..d)
        .map(|c| {
            [
                Word::new(if c + 1 == d { zeros(e) } else { Vec::new() }).expect("zeros"),
                Word::new(vec![1]).expect("one"),
            ]
        })
        .collect();
    Fst::new(0, delta, lambda)
}

/// Deletes the first `k` blocks (and anything before the first `1`).
pub fn shift_fst(k: usize) -> Fst {
    let delta = (0..=k + 1).map(|s| [s, (s + 1).min(k + 1)]).collect();
    let lambda = (0..=k + 1)
        .map(|s| {
            let zero = if s == k + 1 { vec![0] } else { Vec::new() };
            let one = if s >= k { vec![1] } else { Vec::new() };
            [Word::new(zero).expect("zero"), Word::new(one).expect("one")]
        })
        .collect();
    Fst::new(0, delta, lambda).expect("valid shift machine")
}

/// A chain of stages and the single machine they compose to.
#[derive(Clone, Debug)]
pub struct Realization {
    pub stages: Vec<Stage>,
    pub single: Fst,
    /// The output is `⟨scale · (t ⊙ f)⟩`.
    pub scale: BigInt,
}

/// Stages taking blocks `in_scale · f(n)` to blocks `out_scale · (t ⊙ f)(n)`.
///
/// Both scales must make the respective sequences natural; the weight stage
/// multiplies by the common denominator of `t`, and the ratio stage divides
/// back exactly.
pub fn weight_then_ratio(t: &WeightTuple, in_scale: &BigInt, out_scale: &BigInt) -> Result<[Stage; 2]> {
    let c = Rational::from_integer(denominator_lcm(
        t.weights().iter().flat_map(|w| w.coeffs().iter().chain([w.constant()])),
    ));
    let s = Rational::from_integer(in_scale.clone());
    let integral = t.scale(&c)?.last_scale(&s);
    let ratio = Rational::from_integer(out_scale.clone()) / (c * s);
    Ok([Stage::Weight(integral), Stage::ratio(&ratio)?])
}

/// Realises `⟨f⟩ → ⟨t ⊙ f⟩` for a rational tuple and a rational polynomial,
/// both block words taken in their naturalised form.
pub fn realize_rational(t: &WeightTuple, f: &RationalPoly) -> Result<Realization> {
    let in_scale = naturalise(f);
    let out_scale = t.residue_polys(f)?.iter().fold(BigInt::one(), |acc, p| acc.lcm(&naturalise(p)));
    let stages = weight_then_ratio(t, &in_scale, &out_scale)?.to_vec();
    let single = compose_stages(&stages)?;
    Ok(Realization { stages, single, scale: out_scale })
}

pub fn compose_stages(stages: &[Stage]) -> Result<Fst> {
    stages.iter().try_fold(Fst::identity(), |acc, s| Ok(acc.compose(&s.fst()?)))
}

/// Runs the stage machines one after another on `1 0^b_0 1 0^b_1 ⋯`.
///
/// Before a ratio stage the complete input blocks are checked for
/// divisibility. Returns at most `max_blocks` complete output blocks.
pub fn run_stages(stages: &[Stage], blocks: Vec<u128>, max_blocks: usize) -> Result<Vec<u128>> {
    let mut run = BlockRun::from_blocks(blocks);
    for (i, stage) in stages.iter().enumerate() {
        if let Stage::Ratio { d, .. } = stage {
            check_divisible(run.complete.iter().map(|&b| BigInt::from(b)), *d)?;
        }
        let cap = if i + 1 == stages.len() { max_blocks } else { usize::MAX };
        let next = stage.fst()?.run_blocks(&run, cap)?;
        if next.leading != 0 {
            return Err(Error::InvalidArgument(format!("stage {stage} wrote zeros before its first block")));
        }
        run = BlockRun { leading: 0, complete: next.complete, open: next.open };
    }
    run.complete.truncate(max_blocks);
    Ok(run.complete)
}

/// Result of [`epsilon_reduce`].
#[derive(Clone, Debug)]
pub struct Reduction {
    pub d: u64,
    /// `q(dn) / (a_k d^k)` without its constant term.
    pub reduced: RationalPoly,
    /// `⟨q⟩ → ⟨q_ε⟩`, both naturalised.
    pub stages: Vec<Stage>,
}

/// Nonnegative rational coefficients and positive order.
pub fn check_qk(q: &RationalPoly) -> Result<()> {
    if q.order() == 0 {
        return Err(Error::NotInQk(format!("{q} has order zero")));
    }
    if q.coeffs().iter().any(Signed::is_negative) {
        return Err(Error::NotInQk(format!("{q} has a negative coefficient")));
    }
    Ok(())
}

/// The least `d` making every lower coefficient of `q(dn)/(a_k d^k)` smaller than `ε`.
pub fn epsilon_reduce(q: &RationalPoly, eps: &Rational) -> Result<Reduction> {
    check_qk(q)?;
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("ε must be positive".into()));
    }
    let k = q.order();
    let lead = q.leading();
    let mut d = BigInt::one();
    for j in 1..k {
        let a = q.coeff(k - j);
        if a.is_zero() {
            continue;
        }
        // least integer x with x^j > a / (lead · ε)
        let bound = a / (&lead * eps);
        let mut x = bound.to_integer().nth_root(j as u32);
        while Rational::from_integer(num_traits::pow(x.clone(), j)) <= bound {
            x += 1;
        }
        d = d.max(x);
    }
    let d_u = d.to_u64().filter(|&d| (d as usize) < MAX_STATES).ok_or(Error::BudgetExhausted)?;
    let norm = (lead * Rational::from_integer(num_traits::pow(d.clone(), k))).recip();
    let reduced = q.affine_subst(d_u, 0).scale(&norm).without_constant();
    let t = WeightTuple::single(Weight::new(vec![norm.clone()], -(q.coeff(0) * &norm))?);
    let in_scale = naturalise(q);
    let out_scale = naturalise(&reduced);
    let mut stages = vec![Stage::Select(d_u as usize)];
    stages.extend(weight_then_ratio(&t, &in_scale, &out_scale)?);
    Ok(Reduction { d: d_u, reduced, stages })
}
