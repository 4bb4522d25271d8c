//! Linear `[n, k, d]` codes with exhaustive syndrome-table decoding.
//!
//! Desk-scale stand-in for an algebraic code with a private fast decoder:
//! the minimum distance is found by brute force and every error of weight
//! up to the correction radius is tabulated, so decoding is exact.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::gf2::{sample, weight_vectors, BitMatrix, BitVector};

/// Brute-force cap: minimum distance and syndrome tables enumerate
/// exponentially many vectors, so code length is bounded.
pub const MAX_CODE_LENGTH: usize = 24;

/// A binary linear code with generator, parity check and an exact
/// syndrome-decoding table of all correctable errors.
#[derive(Clone)]
pub struct LinearCode {
    n: usize,
    k: usize,
    d: usize,
    t: usize,
    generator: BitMatrix,
    check: BitMatrix,
    check_transpose: BitMatrix,
    table: HashMap<BitVector, BitVector>,
}

impl LinearCode {
    /// Builds a code from a full-row-rank generator. The parity check is the
    /// kernel basis, the minimum distance comes from enumerating all nonzero
    /// codewords, and the radius is `min(t_request, (d-1)/2)`.
    pub fn from_generator(generator: BitMatrix, t_request: usize) -> Result<Self> {
        let (k, n) = (generator.rows(), generator.cols());
        if n > MAX_CODE_LENGTH {
            return Err(Error::Parameter(format!(
                "code length {n} exceeds brute-force cap {MAX_CODE_LENGTH}"
            )));
        }
        if k == 0 || k >= n {
            return Err(Error::Parameter(format!(
                "need 0 < k < n, got [{n},{k}]"
            )));
        }
        if !generator.has_full_row_rank() {
            return Err(Error::NotFullRowRank);
        }
        let check = generator.kernel_basis();
        debug_assert_eq!(check.rows(), n - k);
        let d = min_distance(&generator);
        let t = t_request.min((d - 1) / 2);
        Self::assemble(generator, check, d, t)
    }

    /// Rebuilds a code from serialized parts. The generator/check relation
    /// and ranks are verified; the syndrome table is always rebuilt, and the
    /// claimed distance is checked by brute force.
    pub fn from_parts(generator: BitMatrix, check: BitMatrix, d: usize, t: usize) -> Result<Self> {
        let (k, n) = (generator.rows(), generator.cols());
        if n > MAX_CODE_LENGTH {
            return Err(Error::Parameter(format!(
                "code length {n} exceeds brute-force cap {MAX_CODE_LENGTH}"
            )));
        }
        if check.cols() != n || check.rows() != n - k {
            return Err(Error::dim(
                "from_parts",
                format!("check matrix {}x{}", check.rows(), check.cols()),
            ));
        }
        if !generator.has_full_row_rank() || !check.has_full_row_rank() {
            return Err(Error::NotFullRowRank);
        }
        if !generator.mat_mul(&check.transpose())?.is_zero() {
            return Err(Error::Format("generator and check are not dual".into()));
        }
        if min_distance(&generator) != d {
            return Err(Error::Format("stored minimum distance is wrong".into()));
        }
        if t > (d - 1) / 2 {
            return Err(Error::Parameter(format!(
                "radius {t} exceeds (d-1)/2 for d = {d}"
            )));
        }
        Self::assemble(generator, check, d, t)
    }

    fn assemble(generator: BitMatrix, check: BitMatrix, d: usize, t: usize) -> Result<Self> {
        let (k, n) = (generator.rows(), generator.cols());
        let check_transpose = check.transpose();
        let mut table = HashMap::new();
        for w in 0..=t {
            for e in weight_vectors(n, w) {
                let s = e.vec_mat(&check_transpose)?;
                if table.insert(s, e).is_some() {
                    return Err(Error::Parameter(format!(
                        "radius {t} infeasible: syndrome collision at weight {w}"
                    )));
                }
            }
        }
        Ok(LinearCode {
            n,
            k,
            d,
            t,
            generator,
            check,
            check_transpose,
            table,
        })
    }

    /// The standard-form `[7,4,3]` Hamming code with t = 1.
    pub fn hamming_7_4() -> Self {
        let rows: Vec<BitVector> = ["1000110", "0100011", "0010111", "0001101"]
            .iter()
            .map(|s| s.parse().expect("static bit strings"))
            .collect();
        let g = BitMatrix::from_rows(&rows).expect("static shape");
        Self::from_generator(g, 1).expect("Hamming [7,4,3] is well formed")
    }

    /// Random code from a seeded full-row-rank generator. The radius is
    /// capped by the true minimum distance of whatever was drawn.
    pub fn random(n: usize, k: usize, t_request: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let g = sample::random_full_row_rank(k, n, &mut rng)?;
        Self::from_generator(g, t_request)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// True minimum distance.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Correction radius; every error of weight <= t decodes exactly.
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn check(&self) -> &BitMatrix {
        &self.check
    }

    /// Codeword for a k-bit message: `m * G`.
    pub fn encode(&self, m: &BitVector) -> Result<BitVector> {
        if m.len() != self.k {
            return Err(Error::dim(
                "encode",
                format!("message length {} vs k = {}", m.len(), self.k),
            ));
        }
        m.vec_mat(&self.generator)
    }

    /// Syndrome of an n-bit word: `c * H^T`.
    pub fn syndrome(&self, c: &BitVector) -> Result<BitVector> {
        if c.len() != self.n {
            return Err(Error::dim(
                "syndrome",
                format!("word length {} vs n = {}", c.len(), self.n),
            ));
        }
        c.vec_mat(&self.check_transpose)
    }

    /// The unique error of weight <= t with the given syndrome.
    pub fn decode_error(&self, s: &BitVector) -> Result<BitVector> {
        if s.len() != self.n - self.k {
            return Err(Error::dim(
                "decode_error",
                format!("syndrome length {} vs n-k = {}", s.len(), self.n - self.k),
            ));
        }
        self.table.get(s).cloned().ok_or(Error::UnknownSyndrome)
    }
}

/// Minimum distance by enumerating all nonzero messages.
fn min_distance(generator: &BitMatrix) -> usize {
    let k = generator.rows();
    let mut best = generator.cols();
    for m in 1u64..(1 << k) {
        let msg = BitVector::from_index(k, m);
        let c = msg.vec_mat(generator).expect("shape fixed");
        best = best.min(c.weight());
    }
    best
}
