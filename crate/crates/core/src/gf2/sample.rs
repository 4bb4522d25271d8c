//! Seeded random generation of GF(2) objects.
//!
//! Every function is a pure function of the RNG stream it is handed, so a
//! fixed seed reproduces identical samples bit for bit.

use num::bigint::BigUint;
use num::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// Retry bound for rejection sampling of invertible / full-row-rank matrices.
const MAX_REJECTIONS: usize = 1000;

/// Uniform random vector.
pub fn random_vector<R: Rng + ?Sized>(len: usize, rng: &mut R) -> BitVector {
    BitVector::from_bits((0..len).map(|_| rng.random::<bool>()))
}

/// Uniform random matrix.
pub fn random_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> BitMatrix {
    let mut m = BitMatrix::zeros(rows, cols);
    for i in 0..rows {
        m.set_row(i, &random_vector(cols, rng));
    }
    m
}

/// Uniform random permutation matrix (Fisher-Yates).
pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> BitMatrix {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    BitMatrix::permutation_from(&perm).expect("shuffled identity is a permutation")
}

/// Uniform random invertible square matrix, by rejection.
pub fn random_invertible<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<BitMatrix> {
    for _ in 0..MAX_REJECTIONS {
        let m = random_matrix(n, n, rng);
        if m.rank() == n {
            return Ok(m);
        }
    }
    Err(Error::SamplingExhausted(MAX_REJECTIONS))
}

/// Uniform random full-row-rank rows x cols matrix (rows <= cols), by rejection.
pub fn random_full_row_rank<R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> Result<BitMatrix> {
    if rows > cols {
        return Err(Error::Parameter(format!(
            "full row rank impossible for {rows}x{cols}"
        )));
    }
    for _ in 0..MAX_REJECTIONS {
        let m = random_matrix(rows, cols, rng);
        if m.has_full_row_rank() {
            return Ok(m);
        }
    }
    Err(Error::SamplingExhausted(MAX_REJECTIONS))
}

/// Uniform random vector of weight exactly `t`.
pub fn random_weight_exact<R: Rng + ?Sized>(len: usize, t: usize, rng: &mut R) -> Result<BitVector> {
    if t > len {
        return Err(Error::Parameter(format!("weight {t} exceeds length {len}")));
    }
    let mut v = BitVector::zeros(len);
    for idx in rand::seq::index::sample(rng, len, t) {
        v.set(idx, true);
    }
    Ok(v)
}

/// Uniform random vector over all vectors of weight at most `t`:
/// the weight is drawn proportional to the number of vectors carrying it,
/// then a uniform subset of that size is chosen.
pub fn random_weight_at_most<R: Rng + ?Sized>(
    len: usize,
    t: usize,
    rng: &mut R,
) -> Result<BitVector> {
    if t > len {
        return Err(Error::Parameter(format!("weight {t} exceeds length {len}")));
    }
    let counts: Vec<BigUint> = (0..=t).map(|w| binomial_big(len, w)).collect();
    let total: BigUint = counts.iter().sum();
    let mut draw = uniform_below(&total, rng);
    let mut weight = t;
    for (w, c) in counts.iter().enumerate() {
        if &draw < c {
            weight = w;
            break;
        }
        draw -= c;
    }
    random_weight_exact(len, weight, rng)
}

/// Exact binomial coefficient as a big integer.
pub fn binomial_big(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k.min(n - k) {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Uniform big integer in `[0, bound)` by masked rejection from raw bits.
fn uniform_below<R: Rng + ?Sized>(bound: &BigUint, rng: &mut R) -> BigUint {
    assert!(!bound.is_zero());
    let bits = bound.bits();
    let nbytes = bits.div_ceil(8) as usize;
    let excess = (nbytes as u64) * 8 - bits;
    loop {
        let mut bytes = vec![0u8; nbytes];
        rng.fill_bytes(&mut bytes);
        bytes[0] >>= excess;
        let x = BigUint::from_bytes_be(&bytes);
        if &x < bound {
            return x;
        }
    }
}
