//! Sequential finite-state transducers over `{0,1}`.

mod blocks;
mod text;

pub use blocks::BlockRun;

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::words::{Stream, Word};

/// A deterministic transducer with a total transition and output function.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fst {
    initial: usize,
    delta: Vec<[usize; 2]>,
    lambda: Vec<[Word; 2]>,
}

impl Fst {
    /// `delta[q][a]` is the successor and `lambda[q][a]` the output of state `q` on letter `a`.
    pub fn new(initial: usize, delta: Vec<[usize; 2]>, lambda: Vec<[Word; 2]>) -> Result<Self> {
        let n = delta.len();
        if n == 0 {
            return Err(Error::InvalidFst("a transducer needs at least one state".into()));
        }
        if lambda.len() != n {
            return Err(Error::InvalidFst(format!("{n} transition rows but {} output rows", lambda.len())));
        }
        if initial >= n {
            return Err(Error::InvalidFst(format!("initial state {initial} out of range")));
        }
        if let Some(t) = delta.iter().flatten().find(|&&t| t >= n) {
            return Err(Error::InvalidFst(format!("target state {t} out of range")));
        }
        Ok(Fst { initial, delta, lambda })
    }

    pub fn states(&self) -> usize {
        self.delta.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn next(&self, q: usize, a: u8) -> usize {
        self.delta[q][a as usize]
    }

    pub fn output(&self, q: usize, a: u8) -> &Word {
        &self.lambda[q][a as usize]
    }

    /// Length of the longest edge output.
    pub fn max_output(&self) -> usize {
        self.lambda.iter().flatten().map(|w| w.len()).max().unwrap_or(0)
    }

    /// `λ(q, w)` and `δ(q, w)`.
    pub fn transduce_from(&self, mut q: usize, w: &[u8]) -> Result<(Word, usize)> {
        let mut out = Vec::new();
        for &a in w {
            if a > 1 {
                return Err(Error::BadLetter(a));
            }
            out.extend_from_slice(self.output(q, a));
            q = self.next(q, a);
        }
        Ok((Word::from_vec_unchecked(out), q))
    }

    /// `λ(q0, w)` and the state reached.
    pub fn transduce_finite(&self, w: &[u8]) -> Result<(Word, usize)> {
        self.transduce_from(self.initial, w)
    }

    pub fn transduce_stream(&self, w: Stream) -> Stream {
        Stream::transduct(self.clone(), w)
    }

    /// The machine that runs `self` and feeds its output to `then`.
    ///
    /// Only pairs of states reachable from the pair of initial states are built.
    pub fn compose(&self, then: &Fst) -> Fst {
        let start = (self.initial, then.initial);
        let mut index = HashMap::from([(start, 0usize)]);
        let mut queue = VecDeque::from([start]);
        let mut delta = Vec::new();
        let mut lambda = Vec::new();
        while let Some((qa, qb)) = queue.pop_front() {
            let mut row_delta = [0; 2];
            let mut row_lambda: [Word; 2] = Default::default();
            for a in 0..2u8 {
                let (out, qb2) = then.transduce_from(qb, self.output(qa, a)).expect("binary outputs");
                let target = (self.next(qa, a), qb2);
                let fresh = index.len();
                let id = *index.entry(target).or_insert_with(|| {
                    queue.push_back(target);
                    fresh
                });
                row_delta[a as usize] = id;
                row_lambda[a as usize] = out;
            }
            delta.push(row_delta);
            lambda.push(row_lambda);
        }
        Fst { initial: 0, delta, lambda }
    }

    /// Drops unreachable states and renumbers the rest in breadth-first order.
    pub fn trim(&self) -> Fst {
        let mut index = HashMap::from([(self.initial, 0usize)]);
        let mut order = vec![self.initial];
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for a in 0..2u8 {
                let t = self.next(q, a);
                index.entry(t).or_insert_with(|| {
                    order.push(t);
                    order.len() - 1
                });
            }
            i += 1;
        }
        let delta = order.iter().map(|&q| [index[&self.delta[q][0]], index[&self.delta[q][1]]]).collect();
        let lambda = order.iter().map(|&q| self.lambda[q].clone()).collect();
        Fst { initial: 0, delta, lambda }
    }

    /// One state copying its input.
    pub fn identity() -> Fst {
        Fst { initial: 0, delta: vec![[0, 0]], lambda: vec![[letter(0), letter(1)]] }
    }

    /// One state writing `out` on every edge.
    pub fn constant(out: Word) -> Fst {
        Fst { initial: 0, delta: vec![[0, 0]], lambda: vec![[out.clone(), out]] }
    }

    /// The three-state machine writing the difference modulo 2 of consecutive letters.
    pub fn difference() -> Fst {
        let w = |s: &str| s.parse::<Word>().expect("literal word");
        Fst {
            initial: 0,
            delta: vec![[1, 2], [1, 2], [1, 2]],
            lambda: vec![[w(""), w("")], [w("0"), w("1")], [w("1"), w("0")]],
        }
    }

    /// Copies zeros and keeps only the `1` opening every `m`-th block, merging `m` blocks into one.
    pub fn fuse(m: usize) -> Result<Fst> {
        if m == 0 {
            return Err(Error::InvalidArgument("fuse needs m ≥ 1".into()));
        }
        let delta = (0..m).map(|q| [q, (q + 1) % m]).collect();
        let lambda = (0..m).map(|q| [letter(0), if q == 0 { letter(1) } else { Word::empty() }]).collect();
        Ok(Fst { initial: 0, delta, lambda })
    }

    pub fn to_text(&self) -> String {
        text::serialize(self)
    }

    pub fn from_text(s: &str) -> Result<Fst> {
        text::parse(s)
    }

    /// Runs the machine on a run-length encoded input; see [`BlockRun`].
    ///
    /// At most `max_blocks` complete output blocks are produced.
    pub fn run_blocks(&self, input: &BlockRun, max_blocks: usize) -> Result<BlockRun> {
        blocks::run(self, input, max_blocks)
    }
}

fn letter(a: u8) -> Word {
    Word::from_vec_unchecked(vec![a])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::RationalPoly;
    use crate::words::{split_blocks, IntegerSequence};

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn run(a: &Fst, s: &str) -> String {
        a.transduce_finite(&w(s)).unwrap().0.to_string()
    }

    #[test]
    fn difference_machine() {
        let a = Fst::difference();
        assert_eq!(run(&a, "0110"), "101");
        assert_eq!(run(&a, "00"), "0");
        assert_eq!(run(&a, ""), "");
        assert_eq!(run(&a, "01101001"), "1011101");
        assert_eq!(run(&a, "0110100110010110"), "101110101011101");
        assert_eq!(a.transduce_finite(&w("0110")).unwrap().1, 1);
    }

    #[test]
    fn bad_letters() {
        assert_eq!(Fst::identity().transduce_finite(&[0, 2]), Err(Error::BadLetter(2)));
    }

    #[test]
    fn construction_is_validated() {
        assert!(Fst::new(0, vec![], vec![]).is_err());
        assert!(Fst::new(1, vec![[0, 0]], vec![[w(""), w("")]]).is_err());
        assert!(Fst::new(0, vec![[0, 3]], vec![[w(""), w("")]]).is_err());
        assert!(Fst::new(0, vec![[0, 0]], vec![]).is_err());
    }

    #[test]
    fn identity_and_composition() {
        let a = Fst::difference();
        let id = Fst::identity();
        for s in ["", "0", "1011", "0110100110010110"] {
            assert_eq!(run(&id, s), s);
            assert_eq!(run(&id.compose(&a), s), run(&a, s));
            assert_eq!(run(&a.compose(&id), s), run(&a, s));
        }
        let t20 = "01101001100101101001";
        assert_eq!(run(&a.compose(&a), t20), run(&a, &run(&a, t20)));
    }

    fn block_lengths(a: &Fst, f: RationalPoly, letters: usize) -> Vec<usize> {
        let s = a.transduce_stream(Stream::block(IntegerSequence::poly(f)));
        split_blocks(&s.prefix(letters).unwrap().word).complete
    }

    #[test]
    fn fusing_blocks() {
        let cube = RationalPoly::from_ints(&[0, 0, 0, 1]);
        assert_eq!(block_lengths(&Fst::fuse(2).unwrap(), cube, 240)[..3], [1, 35, 189]);
        let n = RationalPoly::from_ints(&[0, 1]);
        assert_eq!(block_lengths(&Fst::fuse(2).unwrap(), n.clone(), 40)[..3], [1, 5, 9]);
        assert_eq!(block_lengths(&Fst::fuse(1).unwrap(), n.clone(), 40)[..4], [0, 1, 2, 3]);
        let twice = Fst::fuse(2).unwrap().compose(&Fst::fuse(2).unwrap());
        assert_eq!(block_lengths(&twice, n, 80)[..3], [6, 22, 38]);
        assert!(Fst::fuse(0).is_err());
    }

    #[test]
    fn silent_machines_stall() {
        let silent = Fst::constant(Word::empty());
        let p = silent.transduce_stream(Stream::thue_morse()).prefix(5).unwrap();
        assert!(p.word.is_empty() && p.stalled);
    }

    #[test]
    fn trimming_drops_unreachable_states() {
        let a = Fst::new(1, vec![[0, 0], [1, 2], [1, 2]], vec![[w("1"), w("1")], [w("0"), w("1")], [w("1"), w("0")]])
            .unwrap();
        let t = a.trim();
        assert_eq!(t.states(), 2);
        assert_eq!(run(&t, "0110100"), run(&a, "0110100"));
    }
}
