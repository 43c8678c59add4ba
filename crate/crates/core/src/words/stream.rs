use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{IntegerSequence, Prefix, Word};
use crate::error::{Error, Result};
use crate::exactla::RationalPoly;
use crate::fst::Fst;

/// Input letters a transduct may consume per prefix query before giving up.
pub const DEFAULT_INPUT_BUDGET: usize = 1_000_000;

/// A morphic word `c(h^ω(start))` over an internal alphabet `0..images.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphic {
    start: u8,
    images: Vec<Vec<u8>>,
    coding: Vec<u8>,
}

impl Morphic {
    pub fn new(start: u8, images: Vec<Vec<u8>>, coding: Vec<u8>) -> Result<Self> {
        let size = images.len();
        if size == 0 || size > u8::MAX as usize || coding.len() != size {
            return Err(Error::InvalidMorphism("morphism and coding must cover the same alphabet".into()));
        }
        if images.iter().flatten().any(|&a| a as usize >= size) {
            return Err(Error::InvalidMorphism("image letter outside the alphabet".into()));
        }
        if coding.iter().any(|&a| a > 1) {
            return Err(Error::InvalidMorphism("coding must map into {0,1}".into()));
        }
        let image = images.get(start as usize).ok_or(Error::NotProlongable(start))?;
        if image.len() < 2 || image[0] != start {
            return Err(Error::NotProlongable(start));
        }
        Ok(Morphic { start, images, coding })
    }

    fn prefix(&self, n: usize) -> Prefix {
        let mut word = vec![self.start];
        while word.len() < n {
            let mut next = Vec::with_capacity(n.min(2 * word.len() + 8));
            for &a in &word {
                next.extend_from_slice(&self.images[a as usize]);
                if next.len() >= n {
                    break;
                }
            }
            if next.len() <= word.len() {
                // the fixed point is finite
                break;
            }
            word = next;
        }
        let stalled = word.len() < n;
        word.truncate(n);
        let coded = word.into_iter().map(|a| self.coding[a as usize]).collect();
        Prefix { word: Word::from_vec_unchecked(coded), stalled }
    }
}

#[derive(Clone, Debug)]
pub enum StreamKind {
    UltimatelyPeriodic { head: Word, cycle: Word },
    Morphic(Morphic),
    Block(IntegerSequence),
    Transduct { fst: Fst, inner: Stream, budget: usize },
}

/// A deterministic description of an infinite binary word.
///
/// Streams are immutable and cheap to clone; every query recomputes from the
/// description, so equal queries give equal answers.
#[derive(Clone, Debug)]
pub struct Stream(Arc<StreamKind>);

impl Stream {
    pub fn kind(&self) -> &StreamKind {
        &self.0
    }

    /// `u v v v ⋯`.
    pub fn ultimately_periodic(head: Word, cycle: Word) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::EmptyCycle);
        }
        Ok(Stream(Arc::new(StreamKind::UltimatelyPeriodic { head, cycle })))
    }

    pub fn morphic(m: Morphic) -> Self {
        Stream(Arc::new(StreamKind::Morphic(m)))
    }

    /// `1 0^f(0) 1 0^f(1) ⋯`.
    pub fn block(f: IntegerSequence) -> Self {
        Stream(Arc::new(StreamKind::Block(f)))
    }

    pub fn transduct(fst: Fst, inner: Stream) -> Self {
        Self::transduct_with_budget(fst, inner, DEFAULT_INPUT_BUDGET)
    }

    pub fn transduct_with_budget(fst: Fst, inner: Stream, budget: usize) -> Self {
        Stream(Arc::new(StreamKind::Transduct { fst, inner, budget: budget.max(1) }))
    }

    /// Thue–Morse `⟨0 | 0↦01, 1↦10⟩`.
    pub fn thue_morse() -> Self {
        Self::binary_morphic(&[0, 1], &[1, 0])
    }

    /// Period doubling `⟨0 | 0↦01, 1↦00⟩`.
    pub fn period_doubling() -> Self {
        Self::binary_morphic(&[0, 1], &[0, 0])
    }

    /// Mephisto Waltz `⟨0 | 0↦001, 1↦110⟩`.
    pub fn mephisto_waltz() -> Self {
        Self::binary_morphic(&[0, 0, 1], &[1, 1, 0])
    }

    fn binary_morphic(zero: &[u8], one: &[u8]) -> Self {
        let m = Morphic::new(0, vec![zero.to_vec(), one.to_vec()], vec![0, 1]).expect("prolongable on 0");
        Self::morphic(m)
    }

    /// The first `n` letters, or all letters the stream can produce within its budget.
    pub fn prefix(&self, n: usize) -> Result<Prefix> {
        match self.kind() {
            StreamKind::UltimatelyPeriodic { head, cycle } => {
                let word: Vec<u8> = head.iter().chain(cycle.iter().cycle()).copied().take(n).collect();
                Ok(Prefix { word: Word::from_vec_unchecked(word), stalled: false })
            }
            StreamKind::Morphic(m) => Ok(m.prefix(n)),
            StreamKind::Block(f) => block_prefix(f, n),
            StreamKind::Transduct { fst, inner, budget } => transduct_prefix(fst, inner, *budget, n),
        }
    }

    /// Whether the first `n` letters of both streams agree.
    pub fn eq_prefix(&self, other: &Stream, n: usize) -> Result<bool> {
        Ok(self.prefix(n)?.word == other.prefix(n)?.word)
    }
}

fn block_prefix(f: &IntegerSequence, n: usize) -> Result<Prefix> {
    let mut word = Vec::with_capacity(n);
    let mut index = 0;
    while word.len() < n {
        let len = f.block_len(index)?;
        word.push(1);
        let room = BigInt::from(n - word.len());
        let zeros = if len > room { room } else { len };
        let zeros = zeros.to_usize().ok_or(Error::BlockTooLarge { index })?;
        word.resize(word.len() + zeros, 0);
        index += 1;
    }
    Ok(Prefix { word: Word::from_vec_unchecked(word), stalled: false })
}

fn transduct_prefix(fst: &Fst, inner: &Stream, budget: usize, n: usize) -> Result<Prefix> {
    if n == 0 {
        return Ok(Prefix { word: Word::empty(), stalled: false });
    }
    let mut want = n.min(budget);
    loop {
        let input = inner.prefix(want)?;
        let (mut out, _) = fst.transduce_finite(&input.word)?;
        if out.len() >= n {
            out.truncate(n);
            return Ok(Prefix { word: out, stalled: false });
        }
        if input.stalled || input.word.len() < want || want >= budget {
            return Ok(Prefix { word: out, stalled: true });
        }
        want = want.saturating_mul(2).min(budget);
    }
}

impl FromStr for Stream {
    type Err = Error;

    /// `up:<u>:<v>`, `thue-morse`, `period-doubling`, `mephisto`,
    /// `block:poly:<c0,c1,...>` or `block:explicit:<v0,v1,...>`.
    fn from_str(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let bad = || Error::InvalidArgument(format!("unknown word spec {spec:?}"));
        match spec {
            "thue-morse" => return Ok(Stream::thue_morse()),
            "period-doubling" => return Ok(Stream::period_doubling()),
            "mephisto" => return Ok(Stream::mephisto_waltz()),
            _ => {}
        }
        if let Some(rest) = spec.strip_prefix("up:") {
            let (u, v) = rest.split_once(':').ok_or_else(bad)?;
            return Stream::ultimately_periodic(u.parse()?, v.parse()?);
        }
        if let Some(coeffs) = spec.strip_prefix("block:poly:") {
            let p: RationalPoly = coeffs.parse()?;
            return Ok(Stream::block(IntegerSequence::poly(p)));
        }
        if let Some(values) = spec.strip_prefix("block:explicit:") {
            let values =
                values.split(',').map(|v| v.trim().parse::<BigInt>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
            return Ok(Stream::block(IntegerSequence::Explicit(values)));
        }
        Err(bad())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::int;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn pre(s: &Stream, n: usize) -> String {
        s.prefix(n).unwrap().word.to_string()
    }

    #[test]
    fn ultimately_periodic_words() {
        let s = Stream::ultimately_periodic(Word::empty(), w("01")).unwrap();
        assert_eq!(pre(&s, 6), "010101");
        let s = Stream::ultimately_periodic(w("1"), w("0")).unwrap();
        assert_eq!(pre(&s, 4), "1000");
        let s = Stream::ultimately_periodic(w("0"), w("10")).unwrap();
        assert_eq!(pre(&s, 5), "01010");
        assert!(matches!(Stream::ultimately_periodic(w("1"), Word::empty()), Err(Error::EmptyCycle)));
    }

    #[test]
    fn morphic_words() {
        assert_eq!(pre(&Stream::thue_morse(), 16), "0110100110010110");
        assert_eq!(pre(&Stream::thue_morse(), 4), "0110");
        assert_eq!(pre(&Stream::period_doubling(), 8), "01000101");
        assert_eq!(pre(&Stream::mephisto_waltz(), 9), "001001110");
        assert_eq!(pre(&Stream::thue_morse(), 0), "");
    }

    #[test]
    fn morphism_must_be_prolongable() {
        assert!(matches!(Morphic::new(0, vec![vec![1, 0], vec![0]], vec![0, 1]), Err(Error::NotProlongable(0))));
        assert!(matches!(Morphic::new(0, vec![vec![0], vec![1]], vec![0, 1]), Err(Error::NotProlongable(0))));
        assert!(Morphic::new(0, vec![vec![0, 2], vec![1]], vec![0, 1]).is_err());
    }

    #[test]
    fn finite_fixed_points_stall() {
        let m = Morphic::new(0, vec![vec![0, 1], vec![]], vec![0, 1]).unwrap();
        let p = Stream::morphic(m).prefix(5).unwrap();
        assert_eq!(p.word.to_string(), "01");
        assert!(p.stalled);
    }

    #[test]
    fn larger_alphabets_go_through_the_coding() {
        // a ↦ ab, b ↦ c, c ↦ a with coding a,b ↦ 0, c ↦ 1
        let m = Morphic::new(0, vec![vec![0, 1], vec![2], vec![0]], vec![0, 0, 1]).unwrap();
        // ab c a ab ...: h^3(a) = abcaab
        assert_eq!(pre(&Stream::morphic(m), 6), "001000");
    }

    #[test]
    fn block_words() {
        let id = Stream::block(IntegerSequence::poly(RationalPoly::from_ints(&[0, 1])));
        assert_eq!(pre(&id, 10), "1101001000");
        let cubes = Stream::block(IntegerSequence::poly(RationalPoly::monomial(int(1), 3)));
        let expected = format!("1101{}1{}", "0".repeat(8), "0".repeat(27));
        assert_eq!(pre(&cubes, expected.len()), expected);
        let ones = Stream::block(IntegerSequence::explicit([0; 8]));
        assert_eq!(pre(&ones, 5), "11111");
        let neg = Stream::block(IntegerSequence::explicit([1, -2]));
        assert!(matches!(neg.prefix(6), Err(Error::NegativeBlock { index: 1, .. })));
    }

    #[test]
    fn huge_blocks_are_not_materialised() {
        let f = IntegerSequence::explicit([BigInt::from(10u64).pow(30)]);
        assert_eq!(pre(&Stream::block(f), 4), "1000");
    }

    #[test]
    fn eq_prefix_examples() {
        let t = Stream::thue_morse();
        assert!(t.eq_prefix(&t, 100).unwrap());
        let alt = Stream::ultimately_periodic(Word::empty(), w("01")).unwrap();
        assert!(!t.eq_prefix(&alt, 3).unwrap());
        assert!(t.eq_prefix(&alt, 0).unwrap());
    }

    #[test]
    fn word_specs() {
        assert_eq!(pre(&"thue-morse".parse().unwrap(), 8), "01101001");
        assert_eq!(pre(&"up::01".parse().unwrap(), 4), "0101");
        assert_eq!(pre(&"up:1:0".parse().unwrap(), 3), "100");
        assert_eq!(pre(&"block:poly:0,1".parse().unwrap(), 6), "110100");
        assert_eq!(pre(&"block:poly:0,0,1/2".parse().unwrap(), 5), "11010");
        assert_eq!(pre(&"block:explicit:2,0,1".parse().unwrap(), 6), "100110");
        assert!("nope".parse::<Stream>().is_err());
        assert!("up:1:".parse::<Stream>().is_err());
    }
}
