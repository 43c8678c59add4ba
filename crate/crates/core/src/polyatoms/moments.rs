//! The moment equations behind the non-atom argument for `⟨n^k⟩`.
//!
//! With `w_i = c_i / ℓ^k` the equations are
//!
//! ```text
//! Σ w_i = 1,   Σ w_i d_i = n0/ℓ,   Σ w_i d_i^{k-1} = (n0/ℓ)^{k-1}.
//! ```
//!
//! When the first two hold, the third compares the arithmetic mean of the
//! `d_i` with their power mean of order `k-1`; for two or more distinct
//! points with positive weight the power mean is strictly larger.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactla::{pow, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentInstance {
    pub k: u32,
    pub l: u64,
    pub n0: u64,
    pub c: Vec<Rational>,
    pub d: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MomentVerdict {
    /// All three equations hold.
    Consistent,
    /// The first two hold with at least two positive weights and the third fails:
    /// `moment = Σ w_i d_i^{k-1}` exceeds `mean^{k-1}`.
    Contradiction { mean: Rational, moment: Rational },
    /// Equation 1 or 2 (numbered from one) fails, so no power-mean argument is needed.
    NoSolution { equation: u8 },
}

impl MomentInstance {
    pub fn validate(&self) -> Result<()> {
        if self.k < 3 || self.l == 0 {
            return Err(Error::InvalidArgument("moment instances need k ≥ 3 and ℓ ≥ 1".into()));
        }
        if self.c.is_empty() || self.c.len() != self.d.len() {
            return Err(Error::DimensionMismatch(format!("{} coefficients for {} points", self.c.len(), self.d.len())));
        }
        if self.c.iter().chain(&self.d).any(Signed::is_negative) {
            return Err(Error::InvalidArgument("coefficients and points must be nonnegative".into()));
        }
        for (i, a) in self.d.iter().enumerate() {
            if self.d[..i].contains(a) {
                return Err(Error::InvalidArgument(format!("point {a} occurs twice")));
            }
        }
        Ok(())
    }
}

pub fn moment_check(inst: &MomentInstance) -> Result<MomentVerdict> {
    inst.validate()?;
    let scale = pow(&Rational::from_integer(inst.l.into()), inst.k as i64);
    let w: Vec<Rational> = inst.c.iter().map(|c| c / &scale).collect();
    let target = Rational::new(inst.n0.into(), inst.l.into());
    if w.iter().sum::<Rational>() != Rational::from_integer(1.into()) {
        return Ok(MomentVerdict::NoSolution { equation: 1 });
    }
    let mean: Rational = w.iter().zip(&inst.d).map(|(wi, di)| wi * di).sum();
    if mean != target {
        return Ok(MomentVerdict::NoSolution { equation: 2 });
    }
    let e = inst.k as i64 - 1;
    let moment: Rational = w.iter().zip(&inst.d).map(|(wi, di)| wi * pow(di, e)).sum();
    let mean_power = pow(&mean, e);
    if moment == mean_power {
        return Ok(MomentVerdict::Consistent);
    }
    let positive = w.iter().filter(|wi| !wi.is_zero()).count();
    debug_assert!(positive >= 2 && moment > mean_power);
    Ok(MomentVerdict::Contradiction { mean, moment })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{int, rat};

    fn inst(k: u32, l: u64, n0: u64, c: &[Rational], d: &[Rational]) -> MomentInstance {
        MomentInstance { k, l, n0, c: c.to_vec(), d: d.to_vec() }
    }

    #[test]
    fn two_points_contradict() {
        let v = moment_check(&inst(3, 2, 1, &[int(4), int(4)], &[int(0), int(1)])).unwrap();
        assert_eq!(v, MomentVerdict::Contradiction { mean: rat(1, 2), moment: rat(1, 2) });
    }

    #[test]
    fn single_point_is_consistent() {
        let v = moment_check(&inst(3, 2, 1, &[int(8)], &[rat(1, 2)])).unwrap();
        assert_eq!(v, MomentVerdict::Consistent);
    }

    #[test]
    fn failing_linear_equations() {
        let v = moment_check(&inst(3, 2, 1, &[int(4), int(3)], &[int(0), int(1)])).unwrap();
        assert_eq!(v, MomentVerdict::NoSolution { equation: 1 });
        let v = moment_check(&inst(3, 2, 3, &[int(4), int(4)], &[int(0), int(1)])).unwrap();
        assert_eq!(v, MomentVerdict::NoSolution { equation: 2 });
    }

    #[test]
    fn zero_coefficients_do_not_count() {
        let v = moment_check(&inst(4, 1, 2, &[int(1), int(0)], &[int(2), int(5)])).unwrap();
        assert_eq!(v, MomentVerdict::Consistent);
    }

    #[test]
    fn invalid_instances() {
        assert!(moment_check(&inst(2, 2, 1, &[int(4)], &[int(0)])).is_err());
        assert!(moment_check(&inst(3, 2, 1, &[int(4), int(4)], &[int(1), int(1)])).is_err());
        assert!(moment_check(&inst(3, 2, 1, &[int(4)], &[int(0), int(1)])).is_err());
        assert!(moment_check(&inst(3, 2, 1, &[int(-4)], &[int(0)])).is_err());
    }
}
