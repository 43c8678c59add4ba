//! Bounded search for `S^{n0} f = t ⊙ S^{m0} g` with a tuple `t` of weights.
//!
//! For a fixed shape (shifts, tuple length `m`, window lengths) the weights
//! of different residue classes modulo `m` are independent: output `mN + r`
//! is produced by weight `r` alone. Each class becomes one exact linear system
//! equating polynomial coefficients in `N`.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactla::{RatMatrix, Rational, RationalPoly};
use crate::weights::{Weight, WeightTuple};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_len: usize,
    pub max_window: usize,
    pub max_shift: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found {
        n0: usize,
        m0: usize,
        tuple: WeightTuple,
    },
    /// `unknown_shapes` counts shapes whose systems have solutions, but where
    /// the particular solution found has a negative coefficient and other
    /// solutions exist.
    NotFoundWithinBounds {
        shapes: usize,
        unknown_shapes: usize,
    },
}

enum Solved<T> {
    Yes(T),
    Impossible,
    Unknown,
}

/// Searches shapes in the order `n0`, `m0`, tuple length, then window
/// lengths lexicographically, and returns the first tuple found.
pub fn search_weighted_preimage(g: &RationalPoly, f: &RationalPoly, bounds: SearchBounds) -> Result<SearchOutcome> {
    for p in [g, f] {
        if p.order() == 0 || p.coeffs().iter().any(Signed::is_negative) {
            return Err(Error::NotInQk(p.to_string()));
        }
    }
    if bounds.max_len == 0 || bounds.max_window == 0 {
        return Err(Error::InvalidArgument("search bounds must be positive".into()));
    }
    let (mut shapes, mut unknown_shapes) = (0, 0);
    for n0 in 0..=bounds.max_shift {
        for m0 in 0..=bounds.max_shift {
            for m in 1..=bounds.max_len {
                for windows in window_shapes(m, bounds.max_window) {
                    shapes += 1;
                    match solve_shape(g, f, n0, m0, &windows)? {
                        Solved::Yes(tuple) => return Ok(SearchOutcome::Found { n0, m0, tuple }),
                        Solved::Unknown => unknown_shapes += 1,
                        Solved::Impossible => {}
                    }
                }
            }
        }
    }
    Ok(SearchOutcome::NotFoundWithinBounds { shapes, unknown_shapes })
}

/// All `m`-tuples over `0..=max` in lexicographic order, except all zeros.
fn window_shapes(m: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; m];
    loop {
        if cur.iter().any(|&k| k > 0) {
            out.push(cur.clone());
        }
        let Some(i) = (0..m).rev().find(|&i| cur[i] < max) else {
            return out;
        };
        cur[i] += 1;
        cur[i + 1..].iter_mut().for_each(|k| *k = 0);
    }
}

fn solve_shape(
    g: &RationalPoly,
    f: &RationalPoly,
    n0: usize,
    m0: usize,
    windows: &[usize],
) -> Result<Solved<WeightTuple>> {
    let m = windows.len() as u64;
    let sum: usize = windows.iter().sum();
    let mut weights = Vec::with_capacity(windows.len());
    let mut undecided = false;
    let mut offset = m0;
    for (r, &k) in windows.iter().enumerate() {
        let lhs = f.affine_subst(m, (n0 + r) as u64);
        let columns: Vec<RationalPoly> = (0..k).map(|i| g.affine_subst(sum as u64, (offset + i) as u64)).collect();
        offset += k;
        match solve_class(&lhs, &columns)? {
            Solved::Yes(w) => weights.push(w),
            Solved::Impossible => return Ok(Solved::Impossible),
            Solved::Unknown => undecided = true,
        }
    }
    if undecided {
        return Ok(Solved::Unknown);
    }
    Ok(Solved::Yes(WeightTuple::new(weights)?))
}

/// Solves `lhs = Σ a_i columns_i + b` coefficientwise with `a ≥ 0`.
fn solve_class(lhs: &RationalPoly, columns: &[RationalPoly]) -> Result<Solved<Weight>> {
    let rows = columns.iter().map(RationalPoly::order).chain([lhs.order()]).max().unwrap_or(0) + 1;
    let unknowns = columns.len() + 1;
    let mut data = Vec::with_capacity(rows * unknowns);
    for j in 0..rows {
        data.extend(columns.iter().map(|c| c.coeff(j)));
        data.push(if j == 0 { Rational::from_integer(1.into()) } else { Rational::zero() });
    }
    let matrix = RatMatrix::new(rows, unknowns, data)?;
    let rhs: Vec<Rational> = (0..rows).map(|j| lhs.coeff(j)).collect();
    let Some(mut x) = matrix.solve_particular(&rhs)? else {
        return Ok(Solved::Impossible);
    };
    let b = x.pop().expect("constant unknown");
    if x.iter().any(Signed::is_negative) {
        return Ok(if matrix.rank() == unknowns { Solved::Impossible } else { Solved::Unknown });
    }
    Ok(Solved::Yes(Weight::new(x, b)?))
}
