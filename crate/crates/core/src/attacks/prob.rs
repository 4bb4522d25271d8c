//! Exact probability that a uniform weight-t vector is orthogonal to a
//! fixed weight-w vector, in big-rational arithmetic.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::gf2::sample::binomial_big;

/// Pr[r . e = 0] for r uniform over weight-exactly-t vectors of length n and
/// e any fixed vector of weight w: the overlap j must be even, so the value
/// is sum over even j of C(w,j) C(n-w,t-j), divided by C(n,t).
pub fn prob_r_dot_e_zero(n: usize, t: usize, w: usize) -> Result<BigRational> {
    if t > n || w > n {
        return Err(Error::Parameter(format!(
            "need t <= n and w <= n, got n={n} t={t} w={w}"
        )));
    }
    let mut numer = BigInt::zero();
    let mut j = 0;
    while j <= t.min(w) {
        if t - j <= n - w {
            let term = binomial_big(w, j) * binomial_big(n - w, t - j);
            numer += BigInt::from(term);
        }
        j += 2;
    }
    let denom = BigInt::from(binomial_big(n, t));
    Ok(BigRational::new(numer, denom))
}

/// Truncated decimal rendering with the given count of significant digits.
/// Leading zeros after the point do not count as significant.
pub fn decimal_string(value: &BigRational, significant: usize) -> String {
    let negative = value.is_negative();
    let num = value.numer().abs();
    let den = value.denom().abs();

    let int_part = &num / &den;
    let mut rem = &num % &den;

    let mut out = String::new();
    if negative {
        out.push('-');
    }
    let int_str = int_part.to_string();
    out.push_str(&int_str);
    let mut counted = if int_part.is_zero() { 0 } else { int_str.len() };

    if rem.is_zero() || counted >= significant {
        return out;
    }
    out.push('.');
    let ten = BigInt::from(10);
    while counted < significant && !rem.is_zero() {
        rem *= &ten;
        let digit = &rem / &den;
        rem -= &digit * &den;
        let d = digit.to_string();
        out.push_str(&d);
        if counted > 0 || !digit.is_zero() {
            counted += 1;
        }
    }
    out
}
