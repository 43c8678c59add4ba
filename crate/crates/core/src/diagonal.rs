//! A finite word that no listed transducer can map onto its listed word.
//!
//! For each pair `(A_i, s_i)` the construction extends the current prefix `v`
//! by a word after which the output of `A_i` is no longer a prefix of `s_i`.
//! This needs two extensions `x`, `y` of `v` with prefix-incomparable outputs;
//! a machine without them (up to the search depth) is reported instead.

use crate::error::Result;
use crate::fst::Fst;
use crate::words::{first_difference, Stream, Word};

/// Search depth used when none is given.
pub const DEFAULT_DEPTH: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Incomparable {
    /// `λ(q0, vx)` and `λ(q0, vy)` first differ at index `j`.
    Found {
        x: Word,
        y: Word,
        j: usize,
    },
    NoneWithin(usize),
}

/// The first `y` in shortlex order, with the first `x` before it, whose
/// outputs after `v` are prefix-incomparable.
pub fn find_incomparable(a: &Fst, v: &[u8], depth: usize) -> Result<Incomparable> {
    let (base, q) = a.transduce_finite(v)?;
    // level by level: (word, state, output after v)
    let mut seen: Vec<(Vec<u8>, Vec<u8>)> = Vec::new();
    let mut longest: Vec<u8> = Vec::new();
    let mut level: Vec<(Vec<u8>, usize, Vec<u8>)> = vec![(Vec::new(), q, Vec::new())];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(level.len() * 2);
        for (word, state, out) in &level {
            for letter in 0..2u8 {
                let mut w = word.clone();
                w.push(letter);
                let mut o = out.clone();
                o.extend_from_slice(a.output(*state, letter));
                if first_difference(&o, &longest).is_some() {
                    let (x, ox) = seen.iter().find(|(_, ox)| first_difference(ox, &o).is_some()).expect("incomparable");
                    let j = base.len() + first_difference(ox, &o).expect("incomparable");
                    return Ok(Incomparable::Found { x: Word::new(x.clone())?, y: Word::new(w)?, j });
                }
                if o.len() > longest.len() {
                    longest = o.clone();
                }
                seen.push((w.clone(), o.clone()));
                next.push((w, a.next(*state, letter), o));
            }
        }
        level = next;
    }
    Ok(Incomparable::NoneWithin(depth))
}

/// No incomparable extensions of `v` up to `depth`. `false` is conclusive.
pub fn is_predetermined_bounded(a: &Fst, v: &[u8], depth: usize) -> Result<bool> {
    Ok(matches!(find_incomparable(a, v, depth)?, Incomparable::NoneWithin(_)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairOutcome {
    /// After the first `prefix_len` letters of the word, the output differs
    /// from the listed word at `differing_index`.
    Dodged {
        prefix_len: usize,
        differing_index: usize,
    },
    PredeterminedWithinBudget(usize),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiagReport {
    pub outcomes: Vec<PairOutcome>,
}

/// Builds `w = w_0 w_1 ⋯` pair by pair.
///
/// With `(x, y, j)` from [`find_incomparable`] the segment is `y` when the
/// output for `x` agrees with `s_i` at `j`, and `x` otherwise (also when `s_i`
/// has no letter at `j`). Predetermined pairs get the segment `0`.
pub fn diagonal_word(adversary: &[(Fst, Stream)], depth: usize) -> Result<(Word, DiagReport)> {
    let mut w = Word::empty();
    let mut report = DiagReport::default();
    for (a, s) in adversary {
        match find_incomparable(a, &w, depth)? {
            Incomparable::NoneWithin(d) => {
                w.push(0)?;
                report.outcomes.push(PairOutcome::PredeterminedWithinBudget(d));
            }
            Incomparable::Found { x, y, j } => {
                let mut vx = w.clone();
                vx.extend_from(&x);
                let (out_x, _) = a.transduce_finite(&vx)?;
                let target = s.prefix(j + 1)?.word;
                let segment = if target.get(j) == Some(&out_x[j]) { y } else { x };
                w.extend_from(&segment);
                report.outcomes.push(PairOutcome::Dodged { prefix_len: w.len(), differing_index: j });
            }
        }
    }
    Ok((w, report))
}

/// For each pair: `true` unless a dodged pair's output is still a prefix of its word,
/// checked both after the pair's own segment and for the whole word.
pub fn verify_diagonal(adversary: &[(Fst, Stream)], w: &[u8], report: &DiagReport) -> Result<Vec<bool>> {
    let mut ok = Vec::with_capacity(adversary.len());
    for (i, (a, s)) in adversary.iter().enumerate() {
        match report.outcomes.get(i) {
            Some(PairOutcome::Dodged { prefix_len, .. }) if *prefix_len <= w.len() => {
                let dodges = |input: &[u8]| -> Result<bool> {
                    let (out, _) = a.transduce_finite(input)?;
                    Ok(s.prefix(out.len())?.word != out)
                };
                ok.push(dodges(&w[..*prefix_len])? && dodges(w)?);
            }
            Some(PairOutcome::Dodged { .. }) | None => ok.push(false),
            Some(PairOutcome::PredeterminedWithinBudget(_)) => ok.push(true),
        }
    }
    Ok(ok)
}

/// All machines with at most `max_states` states and edge outputs of length at
/// most `max_out`, initial state 0.
///
/// Ordered by number of states, then the tuple of edge targets, then the
/// tuple of edge outputs, with edges listed as `(q, 0), (q, 1)` by state.
pub fn enumerate_fsts(max_states: usize, max_out: usize) -> impl Iterator<Item = Fst> {
    let mut words = vec![Vec::new()];
    for len in 1..=max_out {
        for bits in 0..(1u32 << len) {
            words.push((0..len).rev().map(|i| ((bits >> i) & 1) as u8).collect::<Vec<u8>>());
        }
    }
    (1..=max_states).flat_map(move |n| {
        let edges = 2 * n as u32;
        let targets = (n as u128).pow(edges);
        let outputs = (words.len() as u128).pow(edges);
        let words = words.clone();
        (0..targets * outputs).map(move |index| {
            let t = digits(index / outputs, n, edges);
            let o = digits(index % outputs, words.len(), edges);
            let delta = (0..n).map(|q| [t[2 * q], t[2 * q + 1]]).collect();
            let word = |i: usize| Word::new(words[i].clone()).expect("binary");
            let lambda = (0..n).map(|q| [word(o[2 * q]), word(o[2 * q + 1])]).collect();
            Fst::new(0, delta, lambda).expect("valid enumerated machine")
        })
    })
}

/// `value` in base `radix` with `len` digits, most significant first.
fn digits(mut value: u128, radix: usize, len: u32) -> Vec<usize> {
    let mut out = vec![0; len as usize];
    for slot in out.iter_mut().rev() {
        *slot = (value % radix as u128) as usize;
        value /= radix as u128;
    }
    out
}
