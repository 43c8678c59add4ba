//! Finite-state transducers acting on infinite binary words.
//!
//! The crate provides
//!
//! * exact rational arithmetic, polynomials and small dense linear algebra ([`exactla`]),
//! * generators for ultimately periodic, morphic and block words ([`words`]),
//! * sequential transducers with composition and a line-based text format ([`fst`]),
//! * the weighted-product algebra over tuples of weights ([`weights`]),
//! * transducer synthesis for weighted products ([`synthesis`]),
//! * power means, moment checks, atom polynomials and atom certificates ([`polyatoms`]),
//! * the diagonal construction against a finite list of transducer/word pairs ([`diagonal`]).
//!
//! Everything that decides a mathematical fact is computed with exact rationals.

pub mod diagonal;
pub mod error;
pub mod exactla;
pub mod fst;
pub mod polyatoms;
pub mod synthesis;
pub mod weights;
pub mod words;

pub use error::{Error, Result};
pub use exactla::{RatMatrix, RatVector, Rational, RationalPoly};
pub use fst::Fst;
pub use weights::{Weight, WeightTuple};
pub use words::{IntegerSequence, Prefix, Stream, Word};
