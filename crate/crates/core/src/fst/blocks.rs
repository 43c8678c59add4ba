//! Running a transducer on run-length encoded block words.
//!
//! Block words with polynomial block lengths are far too long to feed letter by
//! letter. Here a long run of zeros is walked along the `0`-edges only until a
//! state repeats; a cycle whose outputs contain no `1` is then skipped
//! arithmetically.

use std::collections::HashMap;

use super::Fst;
use crate::error::{Error, Result};

/// The finite word `0^leading 1 0^c_0 1 0^c_1 ⋯ [1 0^open]`.
///
/// As an output, the `complete` blocks are closed by a later `1` and are exact;
/// `open` is the last run, which more input could still extend.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BlockRun {
    pub leading: u128,
    pub complete: Vec<u128>,
    pub open: Option<u128>,
}

impl BlockRun {
    /// `1 0^b_0 1 0^b_1 ⋯` for the given block lengths.
    pub fn from_blocks(blocks: Vec<u128>) -> Self {
        BlockRun { leading: 0, complete: blocks, open: None }
    }

    fn runs(&self) -> impl Iterator<Item = u128> + '_ {
        self.complete.iter().chain(&self.open).copied()
    }
}

struct Writer {
    leading: u128,
    complete: Vec<u128>,
    current: Option<u128>,
    cap: usize,
}

impl Writer {
    fn full(&self) -> bool {
        self.complete.len() >= self.cap
    }

    fn one(&mut self) {
        if let Some(c) = self.current.replace(0) {
            self.complete.push(c);
        }
    }

    fn zeros(&mut self, n: u128) -> Result<()> {
        let slot = match &mut self.current {
            Some(c) => c,
            None => &mut self.leading,
        };
        *slot = slot.checked_add(n).ok_or(Error::BlockTooLarge { index: self.complete.len() })?;
        Ok(())
    }

    fn word(&mut self, w: &[u8]) -> Result<()> {
        for &a in w {
            if a == 1 {
                self.one();
            } else {
                self.zeros(1)?;
            }
        }
        Ok(())
    }
}

pub(super) fn run(a: &Fst, input: &BlockRun, max_blocks: usize) -> Result<BlockRun> {
    let mut out = Writer { leading: 0, complete: Vec::new(), current: None, cap: max_blocks };
    let mut paths = HashMap::new();
    let mut q = zero_run(a, &mut paths, a.initial(), input.leading, &mut out)?;
    for len in input.runs() {
        if out.full() {
            break;
        }
        out.word(a.output(q, 1))?;
        q = a.next(q, 1);
        q = zero_run(a, &mut paths, q, len, &mut out)?;
    }
    let mut complete = out.complete;
    complete.truncate(max_blocks);
    Ok(BlockRun { leading: out.leading, complete, open: out.current })
}

/// The walk along `0`-edges from one state until a state repeats.
struct ZeroPath {
    /// Distinct states in visiting order; the walk then returns to `states[cycle_start]`.
    states: Vec<usize>,
    cycle_start: usize,
    /// Zeros written and ones written during the first `i` steps.
    zeros: Vec<u128>,
    ones: Vec<usize>,
}

impl ZeroPath {
    fn new(a: &Fst, start: usize) -> Self {
        let mut seen = HashMap::new();
        let mut path = ZeroPath { states: Vec::new(), cycle_start: 0, zeros: vec![0], ones: vec![0] };
        let mut q = start;
        while let std::collections::hash_map::Entry::Vacant(e) = seen.entry(q) {
            e.insert(path.states.len());
            path.states.push(q);
            let out = a.output(q, 0);
            let ones = out.iter().filter(|&&x| x == 1).count();
            path.zeros.push(path.zeros.last().unwrap() + (out.len() - ones) as u128);
            path.ones.push(path.ones.last().unwrap() + ones);
            q = a.next(q, 0);
        }
        path.cycle_start = seen[&q];
        path
    }

    fn len(&self) -> usize {
        self.states.len()
    }

    fn state_after(&self, steps: u128) -> usize {
        let n = self.len() as u128;
        if steps < n {
            return self.states[steps as usize];
        }
        let cycle = n - self.cycle_start as u128;
        self.states[self.cycle_start + ((steps - n) % cycle) as usize]
    }
}

/// Feeds `len` zeros from state `q` and returns the final state.
fn zero_run(a: &Fst, paths: &mut HashMap<usize, ZeroPath>, q: usize, len: u128, out: &mut Writer) -> Result<usize> {
    if len == 0 {
        return Ok(q);
    }
    let path = paths.entry(q).or_insert_with(|| ZeroPath::new(a, q));
    let n = path.len();
    let head = len.min(n as u128) as usize;
    if path.ones[head] == 0 {
        out.zeros(path.zeros[head])?;
    } else {
        for &s in &path.states[..head] {
            if out.full() {
                return Ok(s);
            }
            out.word(a.output(s, 0))?;
        }
    }
    if len <= n as u128 {
        return Ok(path.state_after(len));
    }
    let rest = len - n as u128;
    let cycle = (n - path.cycle_start) as u128;
    if path.ones[n] == path.ones[path.cycle_start] {
        let per_cycle = path.zeros[n] - path.zeros[path.cycle_start];
        let tail = (rest % cycle) as usize;
        let partial = path.zeros[path.cycle_start + tail] - path.zeros[path.cycle_start];
        let total = (rest / cycle)
            .checked_mul(per_cycle)
            .and_then(|z| z.checked_add(partial))
            .ok_or(Error::BlockTooLarge { index: out.complete.len() })?;
        out.zeros(total)?;
        return Ok(path.state_after(len));
    }
    // the cycle writes ones, so the output cap is reached after few rounds
    let mut s = path.states[path.cycle_start];
    let mut left = rest;
    while left > 0 && !out.full() {
        out.word(a.output(s, 0))?;
        s = a.next(s, 0);
        left -= 1;
    }
    Ok(s)
}
