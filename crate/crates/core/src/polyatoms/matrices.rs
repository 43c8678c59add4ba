//! The vectors `V(p)`, `U(α)` and the matrix `M(p)` relating weights to polynomials.
//!
//! For a polynomial `p` of order `k` and a weight `α` with window `k`,
//! `M(p) U(α) = V(α ⊙ p)` where `α ⊙ p` is the polynomial
//! `n ↦ Σ a_i p(kn + i) + b`.

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::exactla::{RatMatrix, RatVector, Rational, RationalPoly};
use crate::weights::Weight;

/// Coefficients of `n, n^2, …, n^k`; the constant term is dropped.
pub fn v_vec(p: &RationalPoly) -> Result<RatVector> {
    v_vec_of_order(p, p.order())
}

fn v_vec_of_order(p: &RationalPoly, k: usize) -> Result<RatVector> {
    if k == 0 {
        return Err(Error::ZeroOrder);
    }
    Ok((1..=k).map(|i| p.coeff(i)).collect())
}

/// Column `j` is `V(p(kn + j))` for `j = 0, …, k-1`.
pub fn m_mat(p: &RationalPoly) -> Result<RatMatrix> {
    let k = p.order();
    if k == 0 {
        return Err(Error::ZeroOrder);
    }
    let columns = (0..k).map(|j| v_vec_of_order(&p.affine_subst(k as u64, j as u64), k)).collect::<Result<_>>()?;
    RatMatrix::from_columns(columns)
}

/// The window coefficients of `α`; the constant is dropped.
pub fn u_vec(alpha: &Weight) -> RatVector {
    alpha.coeffs().to_vec()
}

/// `Σ_{i<k} a_i (kn + i)^k`.
pub fn atom_polynomial(k: usize, a: &[Rational]) -> Result<RationalPoly> {
    if k == 0 {
        return Err(Error::ZeroOrder);
    }
    if a.len() != k {
        return Err(Error::DimensionMismatch(format!("{} coefficients for k = {k}", a.len())));
    }
    if a.iter().any(|ai| !ai.is_positive()) {
        return Err(Error::NonPositiveCoefficient);
    }
    let power = RationalPoly::monomial(Rational::from_integer(1.into()), k);
    Ok(a.iter()
        .enumerate()
        .fold(RationalPoly::zero(), |acc, (i, ai)| &acc + &power.affine_subst(k as u64, i as u64).scale(ai)))
}
