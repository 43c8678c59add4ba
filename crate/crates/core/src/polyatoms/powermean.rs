//! Weighted power means `M_{w,p}(x) = (Σ w_i x_i^p)^{1/p}`, geometric at `p = 0`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactla::{denominator_lcm, exact_root, pow, to_f64, Rational};

fn validate(w: &[Rational], x: &[Rational]) -> Result<()> {
    if w.is_empty() || w.len() != x.len() {
        return Err(Error::DimensionMismatch(format!("{} weights for {} arguments", w.len(), x.len())));
    }
    if w.iter().any(|wi| !wi.is_positive()) || w.iter().sum::<Rational>() != Rational::one() {
        return Err(Error::BadWeights);
    }
    if x.iter().any(|xi| !xi.is_positive()) {
        return Err(Error::NonPositiveArgument);
    }
    Ok(())
}

/// `M_{w,p}(x)` in floating point. The inner sum is exact for integer `p`.
pub fn power_mean(w: &[Rational], p: &Rational, x: &[Rational]) -> Result<f64> {
    validate(w, x)?;
    if x.iter().all(|xi| xi == &x[0]) {
        return Ok(to_f64(&x[0]));
    }
    if p.is_zero() {
        let log: f64 = w.iter().zip(x).map(|(wi, xi)| to_f64(wi) * ln(xi)).sum();
        return Ok(log.exp());
    }
    let pf = to_f64(p);
    let sum_ln = if let Some(e) = p.is_integer().then(|| p.to_integer().to_i64()).flatten() {
        let sum = w.iter().zip(x).map(|(wi, xi)| wi * pow(xi, e)).sum::<Rational>();
        let direct = to_f64(&sum);
        if direct.is_normal() {
            return Ok(direct.powf(1.0 / pf));
        }
        ln(&sum)
    } else {
        // log-sum-exp keeps large or tiny powers finite
        let terms: Vec<f64> = w.iter().zip(x).map(|(wi, xi)| ln(wi) + pf * ln(xi)).collect();
        let top = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        top + terms.iter().map(|t| (t - top).exp()).sum::<f64>().ln()
    };
    Ok((sum_ln / pf).exp())
}

/// Natural logarithm of a positive rational without overflowing `f64`.
fn ln(r: &Rational) -> f64 {
    big_ln(r.numer()) - big_ln(r.denom())
}

fn big_ln(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    (n >> shift).to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
}

/// `M_{w,p}(x)` when it is rational, for integer `p`.
pub fn power_mean_exact(w: &[Rational], p: i64, x: &[Rational]) -> Result<Option<Rational>> {
    validate(w, x)?;
    let (value, root) = raised(w, p, x);
    let root = match root.to_u32() {
        Some(r) => r,
        None => return Ok(None),
    };
    let (num, den) = (exact_root(value.numer(), root), exact_root(value.denom(), root));
    Ok(num.zip(den).map(|(n, d)| Rational::new(n, d)))
}

/// `(M^R, R)` with `M^R` rational: `R = |p|` and `M^R = S^{±1}`, or `R = N` for
/// the geometric mean with `N` the common denominator of `w`.
fn raised(w: &[Rational], p: i64, x: &[Rational]) -> (Rational, BigInt) {
    if p == 0 {
        let n = denominator_lcm(w);
        let value = w.iter().zip(x).fold(Rational::one(), |acc, (wi, xi)| {
            let e = (wi * Rational::from_integer(n.clone())).to_integer();
            acc * pow(xi, e.to_i64().expect("weight exponent fits"))
        });
        return (value, n);
    }
    let sum: Rational = w.iter().zip(x).map(|(wi, xi)| wi * pow(xi, p)).sum();
    let value = if p > 0 { sum } else { sum.recip() };
    (value, BigInt::from(p.unsigned_abs()))
}

/// Exact comparison of `M_{w,p}(x)` with `M_{w,q}(x)` for integer exponents.
///
/// Both means are raised to a common power `R > 0`, which is rational on both sides.
pub fn compare_power_means(w: &[Rational], p: i64, q: i64, x: &[Rational]) -> Result<Ordering> {
    validate(w, x)?;
    let (vp, rp) = raised(w, p, x);
    let (vq, rq) = raised(w, q, x);
    let r = rp.lcm(&rq);
    let ep = (&r / &rp).to_i64().ok_or_else(|| Error::InvalidArgument("exponent too large".into()))?;
    let eq = (&r / &rq).to_i64().ok_or_else(|| Error::InvalidArgument("exponent too large".into()))?;
    Ok(pow(&vp, ep).cmp(&pow(&vq, eq)))
}
