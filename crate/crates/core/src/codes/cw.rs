//! Constant-weight enumerative coding.
//!
//! Messages of k bits map bijectively onto the first 2^k weight-t strings of
//! length n in lexicographic order ('0' < '1', leftmost bit first), where
//! k = floor(log2 C(n, t)). Encoding unranks, decoding ranks.

use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// Injective map from k-bit messages to n-bit strings of weight exactly t.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstantWeightCode {
    n: usize,
    t: usize,
    k: usize,
}

impl ConstantWeightCode {
    /// Largest k with 2^k <= C(n, t).
    pub fn new(n: usize, t: usize) -> Result<Self> {
        if t > n {
            return Err(Error::Parameter(format!("weight {t} exceeds length {n}")));
        }
        let total = binomial(n, t)
            .ok_or_else(|| Error::Parameter(format!("C({n},{t}) overflows u128")))?;
        if total < 2 {
            return Err(Error::Parameter(format!(
                "C({n},{t}) = {total} leaves no room for messages"
            )));
        }
        let k = (128 - total.leading_zeros() as usize) - 1; // floor(log2 total)
        Ok(ConstantWeightCode { n, t, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Message length in bits.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Weight-t codeword of a k-bit message.
    pub fn encode(&self, m: &BitVector) -> Result<BitVector> {
        if m.len() != self.k {
            return Err(Error::dim(
                "cw_encode",
                format!("message length {} vs k = {}", m.len(), self.k),
            ));
        }
        let index = m.to_index() as u128;
        Ok(self.unrank(index))
    }

    /// Message whose codeword is `w`. Rejects wrong weight and strings past
    /// the 2^k-th codeword.
    pub fn decode(&self, w: &BitVector) -> Result<BitVector> {
        if w.len() != self.n {
            return Err(Error::dim(
                "cw_decode",
                format!("codeword length {} vs n = {}", w.len(), self.n),
            ));
        }
        if w.weight() != self.t {
            return Err(Error::Decode(format!(
                "weight {} != {}",
                w.weight(),
                self.t
            )));
        }
        let index = self.rank(w);
        if index >> self.k != 0 {
            return Err(Error::Decode(format!(
                "codeword ranks at {index}, outside the 2^{} message range",
                self.k
            )));
        }
        Ok(BitVector::from_index(self.k, index as u64))
    }

    /// index -> the index-th weight-t string in lexicographic order.
    fn unrank(&self, mut index: u128) -> BitVector {
        let mut out = BitVector::zeros(self.n);
        let mut ones = self.t;
        for pos in 0..self.n {
            let remaining = self.n - pos - 1;
            let zero_block = binomial(remaining, ones).expect("within new() bounds");
            if index < zero_block {
                // bit stays 0
            } else {
                index -= zero_block;
                out.set(pos, true);
                ones -= 1;
            }
        }
        debug_assert_eq!(ones, 0);
        out
    }

    /// Lexicographic rank of a weight-t string.
    fn rank(&self, w: &BitVector) -> u128 {
        let mut index = 0u128;
        let mut ones = self.t;
        for pos in 0..self.n {
            let remaining = self.n - pos - 1;
            if w.get(pos) {
                index += binomial(remaining, ones).expect("within new() bounds");
                ones -= 1;
            }
        }
        index
    }
}

/// Checked binomial coefficient in u128.
fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i + 1) as u128;
    }
    Some(acc)
}
