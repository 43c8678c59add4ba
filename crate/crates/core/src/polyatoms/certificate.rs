//! Atom certificates: stage chains from `⟨q⟩` to `⟨p⟩` for an atom polynomial `p`.
//!
//! For `q` of order `k` the chain is
//!
//! 1. select every `d`-th block and normalise, giving `⟨q_ε⟩` whose lower
//!    coefficients are below `ε`,
//! 2. apply `γ = (U_ε; 0)` with `U_ε = M(q_ε)^{-1} V(p)`, so that
//!    `γ ⊙ q_ε = p + c` for a constant slack `c`,
//! 3. remove the slack and rescale to the naturalised `⟨p⟩`.

use std::fmt::{self, Write};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrices::{atom_polynomial, m_mat, v_vec};
use crate::error::{Error, Result};
use crate::exactla::{parse_rational, rat, Rational, RationalPoly};
use crate::synthesis::{check_qk, epsilon_reduce, run_stages, weight_then_ratio, Stage};
use crate::weights::{Weight, WeightTuple};
use crate::words::naturalise;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub source: RationalPoly,
    pub reduced: RationalPoly,
    pub gamma: Weight,
    pub stages: Vec<Stage>,
    pub target: RationalPoly,
    pub slack: Rational,
}

/// `1/2, 1/4, …, 2^-20`.
pub fn default_schedule() -> Vec<Rational> {
    (1..=20).map(|i| rat(1, 1 << i)).collect()
}

/// Searches the schedule for an `ε` giving a positive `U_ε` and assembles the certificate.
pub fn atom_certificate(q: &RationalPoly, a: &[Rational], schedule: &[Rational]) -> Result<Certificate> {
    check_qk(q)?;
    let k = q.order();
    let target = atom_polynomial(k, a)?;
    for eps in schedule {
        let reduction = epsilon_reduce(q, eps)?;
        let m = m_mat(&reduction.reduced)?;
        let u = m.solve(&v_vec(&target)?)?;
        if !u.iter().all(Signed::is_positive) {
            continue;
        }
        let gamma = Weight::new(u, Rational::zero())?;
        let image = gamma.apply_poly(&reduction.reduced, k as u64, 0);
        let slack = image.coeff(0) - target.coeff(0);
        debug_assert_eq!(&image - &target, RationalPoly::constant(slack.clone()));

        let d_p = naturalise(&target);
        let l = d_p.lcm(slack.denom());
        let l_rat = Rational::from_integer(l.clone());
        let mut stages = reduction.stages;
        stages.extend(weight_then_ratio(&WeightTuple::single(gamma.clone()), &naturalise(&reduction.reduced), &l)?);
        if !slack.is_zero() {
            let drop = Weight::new(vec![Rational::one()], -(&slack * &l_rat))?;
            stages.push(Stage::Weight(WeightTuple::single(drop)));
        }
        if d_p != l {
            stages.push(Stage::ratio(&Rational::new(d_p, l))?);
        }
        return Ok(Certificate { source: q.clone(), reduced: reduction.reduced, gamma, stages, target, slack });
    }
    Err(Error::BudgetExhausted)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn pass(detail: impl Into<String>) -> Self {
        CheckResult { passed: true, detail: detail.into() }
    }

    fn fail(detail: impl Into<String>) -> Self {
        CheckResult { passed: false, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub symbolic: CheckResult,
    pub semantic: CheckResult,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.symbolic.passed && self.semantic.passed
    }
}

/// Checks a certificate twice: as exact polynomial identities, and by running
/// the stage machines on the first blocks of `⟨q⟩`.
pub fn verify_certificate(cert: &Certificate, blocks: usize) -> VerifyReport {
    VerifyReport { symbolic: symbolic_check(cert), semantic: semantic_check(cert, blocks) }
}

fn symbolic_check(cert: &Certificate) -> CheckResult {
    let k = cert.source.order();
    if k == 0 || cert.reduced.order() != k || cert.gamma.window() != k {
        return CheckResult::fail("orders of source, reduced polynomial and γ disagree");
    }
    if !cert.gamma.coeffs().iter().all(Signed::is_positive) || !cert.gamma.constant().is_zero() {
        return CheckResult::fail("γ must have positive coefficients and no constant");
    }
    let image = cert.gamma.apply_poly(&cert.reduced, k as u64, 0);
    let shifted = &cert.target + &RationalPoly::constant(cert.slack.clone());
    if image != shifted {
        return CheckResult::fail(format!("γ ⊙ q_ε = {image} but target + slack = {shifted}"));
    }
    let start = cert.source.scale(&Rational::from_integer(naturalise(&cert.source)));
    let end = match cert.stages.iter().try_fold(start, |p, s| s.apply_poly(&p)) {
        Ok(p) => p,
        Err(e) => return CheckResult::fail(format!("stage chain: {e}")),
    };
    let want = cert.target.scale(&Rational::from_integer(naturalise(&cert.target)));
    if end != want {
        return CheckResult::fail(format!("stage chain ends in {end}, expected {want}"));
    }
    CheckResult::pass(format!("γ ⊙ q_ε = p + {} and the stage chain maps the source onto the target", cert.slack))
}

/// Input blocks needed for `out` complete output blocks of the chain.
fn blocks_needed(stages: &[Stage], out: usize) -> usize {
    stages.iter().rev().fold(out + 1, |need, s| match s {
        Stage::Select(d) => need * d + 1,
        Stage::Weight(t) => need.div_ceil(t.len()) * t.sum_length() + 1,
        Stage::Ratio { .. } => need,
        Stage::Shift(k) => need + k,
    })
}

fn semantic_check(cert: &Certificate, blocks: usize) -> CheckResult {
    let scale = Rational::from_integer(naturalise(&cert.source));
    let n = blocks_needed(&cert.stages, blocks);
    let input: Option<Vec<u128>> =
        (0..n as u64).map(|i| (cert.source.eval_at(i) * &scale).to_integer().to_u128()).collect();
    let Some(input) = input else {
        return CheckResult::fail("source blocks are negative or too large");
    };
    let out = match run_stages(&cert.stages, input, blocks) {
        Ok(out) => out,
        Err(e) => return CheckResult::fail(format!("running the stages: {e}")),
    };
    let target_scale = Rational::from_integer(naturalise(&cert.target));
    for i in 0..blocks {
        let want = cert.target.eval_at(i as u64) * &target_scale;
        match out.get(i) {
            None => return CheckResult::fail(format!("only {} of {blocks} blocks were produced", out.len())),
            Some(&got) if Rational::from_integer(BigInt::from(got)) != want => {
                return CheckResult::fail(format!("block {i} has length {got}, expected {want}"))
            }
            Some(_) => {}
        }
    }
    CheckResult::pass(format!("{blocks} blocks of the transduct match the target"))
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        writeln!(s, "CERT v1")?;
        writeln!(s, "source poly {}", self.source)?;
        writeln!(s, "reduced poly {}", self.reduced)?;
        writeln!(s, "gamma {}", self.gamma)?;
        for stage in &self.stages {
            writeln!(s, "stage {stage}")?;
        }
        writeln!(s, "target poly {}", self.target)?;
        writeln!(s, "slack {}", self.slack)?;
        f.write_str(&s)
    }
}

impl FromStr for Certificate {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        match lines.next() {
            Some((_, "CERT v1")) => {}
            Some((line, _)) => return Err(Error::parse(line, "expected header 'CERT v1'")),
            None => return Err(Error::parse(1, "empty certificate")),
        }
        let (mut source, mut reduced, mut gamma, mut target, mut slack) = (None, None, None, None, None);
        let mut stages = Vec::new();
        for (line, l) in lines {
            let (key, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
            let rest = rest.trim();
            let wrap = |e: Error| Error::parse(line, e.to_string());
            let poly = |r: &str| -> Result<RationalPoly> {
                r.strip_prefix("poly")
                    .ok_or_else(|| Error::parse(line, "expected 'poly'"))?
                    .trim()
                    .parse()
                    .map_err(wrap)
            };
            let slot_taken = || Error::parse(line, format!("duplicate '{key}' line"));
            match key {
                "source" if source.is_none() => source = Some(poly(rest)?),
                "reduced" if reduced.is_none() => reduced = Some(poly(rest)?),
                "target" if target.is_none() => target = Some(poly(rest)?),
                "gamma" if gamma.is_none() => gamma = Some(rest.parse::<Weight>().map_err(wrap)?),
                "slack" if slack.is_none() => slack = Some(parse_rational(rest).map_err(wrap)?),
                "stage" => stages.push(rest.parse::<Stage>().map_err(wrap)?),
                "source" | "reduced" | "target" | "gamma" | "slack" => return Err(slot_taken()),
                _ => return Err(Error::parse(line, format!("unknown line '{key}'"))),
            }
        }
        let missing = |what: &str| Error::parse(text.lines().count(), format!("missing '{what}' line"));
        Ok(Certificate {
            source: source.ok_or_else(|| missing("source"))?,
            reduced: reduced.ok_or_else(|| missing("reduced"))?,
            gamma: gamma.ok_or_else(|| missing("gamma"))?,
            stages,
            target: target.ok_or_else(|| missing("target"))?,
            slack: slack.ok_or_else(|| missing("slack"))?,
        })
    }
}
