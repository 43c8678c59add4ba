//! Infinite binary words, queried through finite prefixes.

mod sequence;
mod stream;

pub use sequence::{naturalise, IntegerSequence};
pub use stream::{Morphic, Stream, StreamKind, DEFAULT_INPUT_BUDGET};

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A finite word over `{0,1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&a| a > 1) {
            return Err(Error::BadLetter(bad));
        }
        Ok(Word(letters))
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// `1 0^zeros`.
    pub fn block(zeros: usize) -> Self {
        let mut v = vec![0; zeros + 1];
        v[0] = 1;
        Word(v)
    }

    pub(crate) fn from_vec_unchecked(letters: Vec<u8>) -> Self {
        debug_assert!(letters.iter().all(|&a| a <= 1));
        Word(letters)
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u8> {
        self.0
    }

    pub fn push(&mut self, letter: u8) -> Result<()> {
        if letter > 1 {
            return Err(Error::BadLetter(letter));
        }
        self.0.push(letter);
        Ok(())
    }

    pub fn extend_from(&mut self, other: &[u8]) {
        debug_assert!(other.iter().all(|&a| a <= 1));
        self.0.extend_from_slice(other);
    }

    pub fn truncate(&mut self, n: usize) {
        self.0.truncate(n);
    }

    pub fn is_prefix_of(&self, other: &[u8]) -> bool {
        other.starts_with(&self.0)
    }

    /// Neither word is a prefix of the other.
    pub fn incomparable(a: &[u8], b: &[u8]) -> bool {
        first_difference(a, b).is_some()
    }
}

/// First index where both words are defined and differ.
pub fn first_difference(a: &[u8], b: &[u8]) -> Option<usize> {
    a.iter().zip(b).position(|(x, y)| x != y)
}

impl Deref for Word {
    type Target = [u8];

    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().map(|&a| if a == 0 { '0' } else { '1' }).collect();
        f.write_str(&s)
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::InvalidArgument(format!("{c:?} is not a binary letter"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word)
    }
}

/// The first letters of a stream.
///
/// `stalled` is set when the stream produced fewer letters than requested
/// (a transduct that ran out of input budget, or a finite word).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prefix {
    pub word: Word,
    pub stalled: bool,
}

/// A finite binary word read as `0^leading 1 0^b0 1 0^b1 ⋯ 1 0^trailing`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BlockSplit {
    /// Zeros before the first `1`.
    pub leading: usize,
    /// Lengths of zero runs that are closed by a following `1`.
    pub complete: Vec<usize>,
    /// Length of the last, possibly unfinished, zero run; `None` if there is no `1`.
    pub trailing: Option<usize>,
}

pub fn split_blocks(word: &[u8]) -> BlockSplit {
    let mut split = BlockSplit::default();
    let mut run = 0usize;
    let mut seen_one = false;
    for &a in word {
        if a == 1 {
            if seen_one {
                split.complete.push(run);
            } else {
                split.leading = run;
                seen_one = true;
            }
            run = 0;
        } else {
            run += 1;
        }
    }
    if seen_one {
        split.trailing = Some(run);
    } else {
        split.leading = run;
    }
    split
}
