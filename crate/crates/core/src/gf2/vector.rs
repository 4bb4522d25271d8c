//! Packed GF(2) row vectors.
//!
//! Index 0 is the leftmost bit in every textual rendering and the most
//! significant bit whenever a vector is read as a basis-state index.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

/// Dense bit-packed GF(2) row vector. Trailing pad bits are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

impl BitVector {
    /// All-zero vector of the given length.
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Unit vector with a single 1 at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        assert!(index < len, "unit index {index} out of range {len}");
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    /// Builds a vector from explicit bits, index 0 first.
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = Self::zeros(bits.len());
        for (i, b) in bits.iter().enumerate() {
            v.set(i, *b);
        }
        v
    }

    /// Reconstructs a vector of length `len` from a basis-state index
    /// (bit 0 of the vector = most significant bit of `index`).
    pub fn from_index(len: usize, index: u64) -> Self {
        assert!(len <= 63, "index form only supports up to 63 bits");
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, (index >> (len - 1 - i)) & 1 == 1);
        }
        v
    }

    /// Basis-state index of this vector (bit 0 is most significant).
    pub fn to_index(&self) -> u64 {
        assert!(self.len <= 63, "index form only supports up to 63 bits");
        let mut idx = 0u64;
        for i in 0..self.len {
            if self.get(i) {
                idx |= 1 << (self.len - 1 - i);
            }
        }
        idx
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Indices of the 1 bits, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    /// Mod-2 inner product with another vector of the same length.
    pub fn dot(&self, other: &BitVector) -> Result<bool> {
        if self.len != other.len {
            return Err(Error::dim(
                "dot",
                format!("lengths {} and {}", self.len, other.len),
            ));
        }
        let parity: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        Ok(parity % 2 == 1)
    }

    /// Bitwise XOR with another vector of the same length.
    pub fn xor(&self, other: &BitVector) -> Result<BitVector> {
        if self.len != other.len {
            return Err(Error::dim(
                "xor",
                format!("lengths {} and {}", self.len, other.len),
            ));
        }
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(BitVector {
            len: self.len,
            words,
        })
    }

    pub fn iter_bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Concatenation: `self` bits first, then `other`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        BitVector::from_bits(self.iter_bits().chain(other.iter_bits()))
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn from_words(len: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(len));
        let v = BitVector { len, words };
        debug_assert!(v.pad_is_zero());
        v
    }

    fn pad_is_zero(&self) -> bool {
        if self.len.is_multiple_of(WORD_BITS) {
            return true;
        }
        match self.words.last() {
            Some(&w) => w >> (self.len % WORD_BITS) == 0,
            None => true,
        }
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut v = BitVector::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                other => {
                    return Err(Error::Format(format!(
                        "bit string may only contain 0/1, found {other:?}"
                    )))
                }
            }
        }
        Ok(v)
    }
}

impl Serialize for BitVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(|e| D::Error::custom(format!("{e}")))
    }
}

/// All weight-`w` vectors of length `n` in lexicographic string order
/// ('0' < '1', index 0 leftmost), i.e. ascending basis-state index.
pub fn weight_vectors(n: usize, w: usize) -> impl Iterator<Item = BitVector> {
    assert!(n <= 63, "weight enumeration supports up to 63 bits");
    let first = if w > n { None } else { Some((1u64 << w) - 1) };
    WeightVectors { n, cur: first }
}

struct WeightVectors {
    n: usize,
    cur: Option<u64>,
}

impl Iterator for WeightVectors {
    type Item = BitVector;

    fn next(&mut self) -> Option<BitVector> {
        let x = self.cur.take()?;
        let out = BitVector::from_index(self.n, x);
        if x != 0 {
            // Gosper's hack: next larger integer with the same popcount
            let u = x & x.wrapping_neg();
            let v = x + u;
            let y = v | (((x ^ v) / u) >> 2);
            if y < (1u64 << self.n) {
                self.cur = Some(y);
            }
        }
        Some(out)
    }
}
