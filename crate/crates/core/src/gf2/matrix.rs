//! Packed GF(2) matrices with Gauss-Jordan elimination.
//!
//! Elimination always selects the leftmost available pivot column, so rank,
//! inverses, canonical right inverses and kernel bases are deterministic.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf2::BitVector;

const WORD_BITS: usize = 64;

/// Dense row-major bit-packed GF(2) matrix. Rows may be zero only for
/// kernel/annihilator results; columns are always positive.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    /// All-zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(cols > 0, "matrices need at least one column");
        let words_per_row = cols.div_ceil(WORD_BITS);
        BitMatrix {
            rows,
            cols,
            words_per_row,
            data: vec![0; rows * words_per_row],
        }
    }

    /// Identity matrix of the given dimension.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows, which must all have the same length.
    pub fn from_rows(rows: &[BitVector]) -> Result<Self> {
        let cols = match rows.first() {
            Some(r) => r.len(),
            None => return Err(Error::Parameter("from_rows needs at least one row".into())),
        };
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::dim("from_rows", "rows of differing lengths"));
        }
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            m.set_row(i, row);
        }
        Ok(m)
    }

    /// Builds a matrix from a predicate on (row, col).
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Permutation matrix sending row position `i` to column `perm[i]`.
    pub fn permutation_from(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || seen[p] {
                return Err(Error::Parameter("not a permutation".into()));
            }
            seen[p] = true;
        }
        Ok(Self::from_fn(n, n, |i, j| perm[i] == j))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        assert!(row < self.rows && col < self.cols, "index out of range");
        let w = row * self.words_per_row + col / WORD_BITS;
        (self.data[w] >> (col % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        assert!(row < self.rows && col < self.cols, "index out of range");
        let w = row * self.words_per_row + col / WORD_BITS;
        let mask = 1u64 << (col % WORD_BITS);
        if value {
            self.data[w] |= mask;
        } else {
            self.data[w] &= !mask;
        }
    }

    /// Copy of row `i`.
    pub fn row(&self, i: usize) -> BitVector {
        assert!(i < self.rows, "row {i} out of range {}", self.rows);
        let start = i * self.words_per_row;
        BitVector::from_words(
            self.cols,
            self.data[start..start + self.words_per_row].to_vec(),
        )
    }

    /// Copy of column `j` as a vector of length `rows`.
    pub fn column(&self, j: usize) -> BitVector {
        BitVector::from_bits((0..self.rows).map(|i| self.get(i, j)))
    }

    pub fn set_row(&mut self, i: usize, row: &BitVector) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        let start = i * self.words_per_row;
        self.data[start..start + self.words_per_row].copy_from_slice(row.words());
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
    }

    /// Exactly one 1 per row and per column.
    pub fn is_permutation(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let mut col_seen = vec![false; self.cols];
        for i in 0..self.rows {
            let r = self.row(i);
            if r.weight() != 1 {
                return false;
            }
            let j = r.support()[0];
            if col_seen[j] {
                return false;
            }
            col_seen[j] = true;
        }
        true
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    /// XOR row `src` into row `dst` (`dst != src`).
    fn xor_row_into(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        let w = self.words_per_row;
        let (d0, s0) = (dst * w, src * w);
        if dst < src {
            let (a, b) = self.data.split_at_mut(s0);
            for i in 0..w {
                a[d0 + i] ^= b[i];
            }
        } else {
            let (a, b) = self.data.split_at_mut(d0);
            for i in 0..w {
                b[i] ^= a[s0 + i];
            }
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let w = self.words_per_row;
        for i in 0..w {
            self.data.swap(a * w + i, b * w + i);
        }
    }

    /// In-place reduced row echelon form considering only columns
    /// `0..col_limit` for pivots (row operations span the full width).
    /// Returns the pivot columns in ascending order.
    fn rref_in_place(&mut self, col_limit: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..col_limit {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.swap_rows(r, p);
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.xor_row_into(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Rank over GF(2).
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place(m.cols).len()
    }

    pub fn has_full_row_rank(&self) -> bool {
        self.rank() == self.rows
    }

    /// Horizontal concatenation `[self | right]`.
    pub fn augment(&self, right: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != right.rows {
            return Err(Error::dim(
                "augment",
                format!("{} vs {} rows", self.rows, right.rows),
            ));
        }
        let mut m = BitMatrix::zeros(self.rows, self.cols + right.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    m.set(i, j, true);
                }
            }
            for j in 0..right.cols {
                if right.get(i, j) {
                    m.set(i, self.cols + j, true);
                }
            }
        }
        Ok(m)
    }

    /// Column slice `[col_start, col_end)` of all rows.
    pub fn columns_range(&self, col_start: usize, col_end: usize) -> BitMatrix {
        assert!(col_start < col_end && col_end <= self.cols);
        BitMatrix::from_fn(self.rows, col_end - col_start, |i, j| {
            self.get(i, col_start + j)
        })
    }

    /// Matrix product over GF(2). Inner dimensions must agree.
    pub fn mat_mul(&self, rhs: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::dim(
                "mat_mul",
                format!(
                    "{}x{} times {}x{}",
                    self.rows, self.cols, rhs.rows, rhs.cols
                ),
            ));
        }
        let mut out = BitMatrix::zeros(self.rows, rhs.cols);
        let w = rhs.words_per_row;
        for i in 0..self.rows {
            let dst = i * out.words_per_row;
            for j in 0..self.cols {
                if self.get(i, j) {
                    let src = j * w;
                    for t in 0..w {
                        out.data[dst + t] ^= rhs.data[src + t];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Entrywise XOR `self ^ rhs` (same shape).
    pub fn xor(&self, rhs: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::dim(
                "xor",
                format!(
                    "{}x{} vs {}x{}",
                    self.rows, self.cols, rhs.rows, rhs.cols
                ),
            ));
        }
        let mut out = self.clone();
        for (d, s) in out.data.iter_mut().zip(&rhs.data) {
            *d ^= s;
        }
        Ok(out)
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Result<BitMatrix> {
        if self.rows != self.cols {
            return Err(Error::dim(
                "inverse",
                format!("{}x{} is not square", self.rows, self.cols),
            ));
        }
        let n = self.rows;
        let mut aug = self.augment(&BitMatrix::identity(n))?;
        let pivots = aug.rref_in_place(n);
        if pivots.len() < n {
            return Err(Error::SingularMatrix);
        }
        Ok(aug.columns_range(n, 2 * n))
    }

    /// Canonical right inverse of a full-row-rank k x n matrix: the unique
    /// solution of `self * X = I_k` whose free variables (non-pivot rows of X
    /// under leftmost-pivot elimination) are zero.
    pub fn right_inverse(&self) -> Result<BitMatrix> {
        let (k, n) = (self.rows, self.cols);
        if k > n {
            return Err(Error::NotFullRowRank);
        }
        let mut aug = self.augment(&BitMatrix::identity(k))?;
        let pivots = aug.rref_in_place(n);
        if pivots.len() < k {
            return Err(Error::NotFullRowRank);
        }
        let transform = aug.columns_range(n, n + k);
        let mut x = BitMatrix::zeros(n, k);
        for (i, &p) in pivots.iter().enumerate() {
            x.set_row(p, &transform.row(i));
        }
        Ok(x)
    }

    /// Member of the affine family of right inverses:
    /// `canonical ^ u ^ canonical * (self * u)` for any n x k matrix `u`.
    /// Every member X satisfies `self * X = I_k`.
    pub fn right_inverse_member(&self, canonical: &BitMatrix, u: &BitMatrix) -> Result<BitMatrix> {
        let (k, n) = (self.rows, self.cols);
        if canonical.rows != n || canonical.cols != k || u.rows != n || u.cols != k {
            return Err(Error::dim(
                "right_inverse_member",
                format!(
                    "expected {n}x{k} operands, got {}x{} and {}x{}",
                    canonical.rows, canonical.cols, u.rows, u.cols
                ),
            ));
        }
        let gu = self.mat_mul(u)?;
        canonical.xor(u)?.xor(&canonical.mat_mul(&gu)?)
    }

    /// Basis of the kernel `{x : self * x^T = 0}` as rows of an
    /// (n - rank) x n matrix. The result may have zero rows.
    pub fn kernel_basis(&self) -> BitMatrix {
        let mut r = self.clone();
        let pivots = r.rref_in_place(r.cols);
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut basis = BitMatrix::zeros(free.len(), self.cols);
        for (row_idx, &f) in free.iter().enumerate() {
            basis.set(row_idx, f, true);
            for (i, &p) in pivots.iter().enumerate() {
                if r.get(i, f) {
                    basis.set(row_idx, p, true);
                }
            }
        }
        basis
    }
}

impl BitVector {
    /// Row-vector times matrix over GF(2): `self * m`.
    pub fn vec_mat(&self, m: &BitMatrix) -> Result<BitVector> {
        if self.len() != m.rows() {
            return Err(Error::dim(
                "vec_mat",
                format!("vector length {} vs {} rows", self.len(), m.rows()),
            ));
        }
        let mut acc = BitVector::zeros(m.cols());
        for i in self.support() {
            acc = acc.xor(&m.row(i))?;
        }
        Ok(acc)
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}", self.row(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix({}x{})[{}]", self.rows, self.cols, {
            let rows: Vec<String> = (0..self.rows).map(|i| self.row(i).to_string()).collect();
            rows.join(", ")
        })
    }
}

impl Serialize for BitMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<String> = (0..self.rows).map(|i| self.row(i).to_string()).collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BitMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<String>::deserialize(deserializer)?;
        let parsed: std::result::Result<Vec<BitVector>, _> =
            rows.iter().map(|s| s.parse::<BitVector>()).collect();
        let parsed = parsed.map_err(|e| D::Error::custom(format!("{e}")))?;
        BitMatrix::from_rows(&parsed).map_err(|e| D::Error::custom(format!("{e}")))
    }
}
