//! Dense state-vector simulation of the register operations the schemes
//! need: basis-linear isometries and their inverses on the image, X/Z masks,
//! the global Hadamard, ancilla arithmetic, register measurement and removal.
//!
//! States are pure and immutable; every operation returns a new state.
//! Basis index convention: qubit 0 is leftmost, so basis state |b0 b1 ...⟩
//! has index sum(b_i * 2^(q-1-i)). A register `a..b` of qubits therefore
//! occupies the contiguous index bits `q-b .. q-a`.

use std::ops::Range;
use std::sync::atomic::{AtomicUsize, Ordering};

use num::complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// Default ceiling on simultaneous qubits (2^24 amplitudes = 256 MiB).
pub const DEFAULT_QUBIT_CAP: usize = 24;

/// Amplitudes at or below this magnitude are treated as numerically zero
/// when a state's support is inspected.
pub const SUPPORT_EPS: f64 = 1e-12;

static QUBIT_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_QUBIT_CAP);

/// Current qubit cap.
pub fn qubit_cap() -> usize {
    QUBIT_CAP.load(Ordering::Relaxed)
}

/// Raises or lowers the qubit cap (memory guard only; 63 is the hard limit
/// of the index representation).
pub fn set_qubit_cap(cap: usize) {
    QUBIT_CAP.store(cap.min(63), Ordering::Relaxed);
}

fn check_cap(qubits: usize) -> Result<()> {
    let cap = qubit_cap();
    if qubits > cap {
        return Err(Error::QubitCap {
            requested: qubits,
            cap,
        });
    }
    Ok(())
}

/// Normalized pure state over a register of qubits.
#[derive(Clone, Debug)]
pub struct StateVector {
    qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state |bits⟩.
    pub fn basis_state(bits: &BitVector) -> Result<Self> {
        let q = bits.len();
        check_cap(q)?;
        let mut amps = vec![Complex64::ZERO; 1 << q];
        amps[bits.to_index() as usize] = Complex64::ONE;
        Ok(StateVector { qubits: q, amps })
    }

    /// State from raw amplitudes; the length must be a power of two and the
    /// norm within 1e-6 of 1. The state is renormalized exactly afterwards.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::Parameter(format!(
                "amplitude count {len} is not a power of two"
            )));
        }
        let q = len.trailing_zeros() as usize;
        check_cap(q)?;
        let norm = l2_norm(&amps);
        if (norm - 1.0).abs() > 1e-6 {
            return Err(Error::NormDeviation((norm - 1.0).abs()));
        }
        let mut s = StateVector { qubits: q, amps };
        s.renormalize();
        Ok(s)
    }

    /// Haar-like random state: complex normal amplitudes, renormalized.
    pub fn random<R: Rng + ?Sized>(qubits: usize, rng: &mut R) -> Result<Self> {
        check_cap(qubits)?;
        let amps: Vec<Complex64> = (0..1usize << qubits)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im)
            })
            .collect();
        let mut s = StateVector { qubits, amps };
        s.renormalize();
        Ok(s)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amps)
    }

    fn renormalize(&mut self) {
        let norm = self.norm();
        if norm > 0.0 {
            for a in &mut self.amps {
                *a /= norm;
            }
        }
    }

    /// Basis indices with non-negligible amplitude.
    pub fn support(&self) -> Vec<u64> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > SUPPORT_EPS)
            .map(|(i, _)| i as u64)
            .collect()
    }

    /// Tensor product; `self`'s qubits come first (leftmost).
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let q = self.qubits + other.qubits;
        check_cap(q)?;
        let mut amps = vec![Complex64::ZERO; 1 << q];
        let shift = other.qubits;
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm() == 0.0 {
                continue;
            }
            for (j, b) in other.amps.iter().enumerate() {
                amps[(i << shift) | j] = a * b;
            }
        }
        Ok(StateVector { qubits: q, amps })
    }

    pub fn inner_product(&self, other: &StateVector) -> Result<Complex64> {
        if self.qubits != other.qubits {
            return Err(Error::dim(
                "inner_product",
                format!("{} vs {} qubits", self.qubits, other.qubits),
            ));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Fidelity |⟨self|other⟩| of two pure states.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner_product(other)?.norm())
    }

    /// Largest pointwise amplitude difference.
    pub fn max_pointwise_diff(&self, other: &StateVector) -> Result<f64> {
        if self.qubits != other.qubits {
            return Err(Error::dim(
                "max_pointwise_diff",
                format!("{} vs {} qubits", self.qubits, other.qubits),
            ));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Basis-linear isometry: sum a_m |m⟩ -> sum a_m |m*G⟩ for a
    /// full-row-rank k x n matrix G, realized as injective index reindexing.
    pub fn apply_isometry(&self, g: &BitMatrix) -> Result<StateVector> {
        let (k, n) = (g.rows(), g.cols());
        if k != self.qubits {
            return Err(Error::dim(
                "apply_isometry",
                format!("{} qubits vs {} matrix rows", self.qubits, k),
            ));
        }
        check_cap(n)?;
        if !g.has_full_row_rank() {
            return Err(Error::NotFullRowRank);
        }
        let row_index = row_indices(g);
        let mut amps = vec![Complex64::ZERO; 1 << n];
        for (m, a) in self.amps.iter().enumerate() {
            if a.norm() == 0.0 {
                continue;
            }
            let mut c = 0u64;
            for (i, ri) in row_index.iter().enumerate() {
                if (m >> (k - 1 - i)) & 1 == 1 {
                    c ^= ri;
                }
            }
            amps[c as usize] = *a;
        }
        Ok(StateVector { qubits: n, amps })
    }

    /// Inverse of `apply_isometry` on its image: every supported basis state
    /// must be a row-space element of G, otherwise the reindexing has no
    /// preimage and the operation is physically meaningless.
    pub fn apply_isometry_inverse(&self, g: &BitMatrix) -> Result<StateVector> {
        let (k, n) = (g.rows(), g.cols());
        if n != self.qubits {
            return Err(Error::dim(
                "apply_isometry_inverse",
                format!("{} qubits vs {} matrix columns", self.qubits, n),
            ));
        }
        if !g.has_full_row_rank() {
            return Err(Error::NotFullRowRank);
        }
        let canonical = g.right_inverse()?;
        let back_index = row_indices(&canonical); // n entries of k-bit indices
        let row_index = row_indices(g);
        let mut amps = vec![Complex64::ZERO; 1 << k];
        for (c, a) in self.amps.iter().enumerate() {
            if a.norm() <= SUPPORT_EPS {
                continue;
            }
            let mut m = 0u64;
            for (j, bi) in back_index.iter().enumerate() {
                if (c >> (n - 1 - j)) & 1 == 1 {
                    m ^= bi;
                }
            }
            // verify c really is m*G; c in row space iff this holds
            let mut check = 0u64;
            for (i, ri) in row_index.iter().enumerate() {
                if (m >> (k - 1 - i)) & 1 == 1 {
                    check ^= ri;
                }
            }
            if check != c as u64 {
                return Err(Error::SupportOutsideImage);
            }
            amps[m as usize] = *a;
        }
        Ok(StateVector { qubits: k, amps })
    }

    /// Bit-flip mask X(e): amplitude reindexing by XOR with e.
    pub fn apply_x(&self, e: &BitVector) -> Result<StateVector> {
        if e.len() != self.qubits {
            return Err(Error::dim(
                "apply_x",
                format!("mask length {} vs {} qubits", e.len(), self.qubits),
            ));
        }
        let mask = e.to_index() as usize;
        let mut amps = vec![Complex64::ZERO; self.amps.len()];
        for (i, a) in self.amps.iter().enumerate() {
            amps[i ^ mask] = *a;
        }
        Ok(StateVector {
            qubits: self.qubits,
            amps,
        })
    }

    /// Phase mask Z(b): amplitude at |m⟩ gains (-1)^(b·m).
    pub fn apply_z(&self, b: &BitVector) -> Result<StateVector> {
        if b.len() != self.qubits {
            return Err(Error::dim(
                "apply_z",
                format!("mask length {} vs {} qubits", b.len(), self.qubits),
            ));
        }
        let mask = b.to_index() as usize;
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(m, a)| {
                if (m & mask).count_ones() % 2 == 1 {
                    -a
                } else {
                    *a
                }
            })
            .collect();
        Ok(StateVector {
            qubits: self.qubits,
            amps,
        })
    }

    /// Global Hadamard H^{⊗q}: normalized fast Walsh-Hadamard transform.
    pub fn apply_h_all(&self) -> StateVector {
        let mut amps = self.amps.clone();
        walsh_hadamard(&mut amps);
        let scale = 1.0 / (amps.len() as f64).sqrt();
        for a in &mut amps {
            *a *= scale;
        }
        StateVector {
            qubits: self.qubits,
            amps,
        }
    }

    /// Reversible register arithmetic: for every basis state, XOR the bits
    /// of `dst` with (bits of `src`) * m. The ranges must be disjoint; m is
    /// src.len() x dst.len(). This is the compute/uncompute primitive behind
    /// the encryption and attack circuits.
    pub fn apply_xor_linear(
        &self,
        src: Range<usize>,
        dst: Range<usize>,
        m: &BitMatrix,
    ) -> Result<StateVector> {
        let q = self.qubits;
        if src.end > q || dst.end > q || src.start >= src.end || dst.start >= dst.end {
            return Err(Error::dim("apply_xor_linear", "register out of range"));
        }
        if src.end > dst.start && dst.end > src.start {
            return Err(Error::Parameter("registers overlap".into()));
        }
        let (sw, dw) = (src.end - src.start, dst.end - dst.start);
        if m.rows() != sw || m.cols() != dw {
            return Err(Error::dim(
                "apply_xor_linear",
                format!("matrix {}x{} vs registers {sw} and {dw}", m.rows(), m.cols()),
            ));
        }
        // per src-qubit XOR masks, pre-shifted into dst's index bits
        let dst_shift = q - dst.end;
        let masks: Vec<usize> = (0..sw)
            .map(|i| {
                let mut acc = 0usize;
                for j in 0..dw {
                    if m.get(i, j) {
                        acc |= 1 << (dw - 1 - j);
                    }
                }
                acc << dst_shift
            })
            .collect();
        let mut amps = vec![Complex64::ZERO; self.amps.len()];
        for (b, a) in self.amps.iter().enumerate() {
            if a.norm() == 0.0 {
                continue;
            }
            let mut target = b;
            for (i, mask) in masks.iter().enumerate() {
                if (b >> (q - 1 - (src.start + i))) & 1 == 1 {
                    target ^= mask;
                }
            }
            amps[target] = *a;
        }
        Ok(StateVector { qubits: q, amps })
    }

    /// Exact marginal outcome distribution of a qubit register.
    pub fn register_distribution(&self, range: Range<usize>) -> Result<Vec<f64>> {
        self.check_range(&range)?;
        let width = range.end - range.start;
        let shift = self.qubits - range.end;
        let mut probs = vec![0.0; 1 << width];
        for (b, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                probs[(b >> shift) & ((1 << width) - 1)] += p;
            }
        }
        Ok(probs)
    }

    /// Samples a measurement of the register in the computational basis and
    /// collapses the state (register qubits remain, now classical).
    pub fn measure_register<R: Rng + ?Sized>(
        &self,
        range: Range<usize>,
        rng: &mut R,
    ) -> Result<(BitVector, StateVector)> {
        let probs = self.register_distribution(range.clone())?;
        let width = range.end - range.start;
        let shift = self.qubits - range.end;
        let u: f64 = rng.random();
        // fallback for cumulative rounding: the most likely outcome
        let fallback = probs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(o, _)| o)
            .unwrap_or(0);
        let mut acc = 0.0;
        let mut outcome = fallback;
        for (o, p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                outcome = o;
                break;
            }
        }
        let p_outcome = probs[outcome];
        let mut amps = self.amps.clone();
        for (b, a) in amps.iter_mut().enumerate() {
            if (b >> shift) & ((1 << width) - 1) != outcome {
                *a = Complex64::ZERO;
            }
        }
        let scale = 1.0 / p_outcome.sqrt();
        for a in &mut amps {
            *a *= scale;
        }
        Ok((
            BitVector::from_index(width, outcome as u64),
            StateVector {
                qubits: self.qubits,
                amps,
            },
        ))
    }

    /// Value of a register that is classical on the state's support.
    /// Errors with `RegisterNotClassical` if two supported basis states
    /// disagree on the register bits.
    pub fn register_value(&self, range: Range<usize>) -> Result<BitVector> {
        self.check_range(&range)?;
        let width = range.end - range.start;
        let shift = self.qubits - range.end;
        let mut value: Option<usize> = None;
        for (b, a) in self.amps.iter().enumerate() {
            if a.norm() <= SUPPORT_EPS {
                continue;
            }
            let v = (b >> shift) & ((1 << width) - 1);
            match value {
                None => value = Some(v),
                Some(prev) if prev != v => return Err(Error::RegisterNotClassical),
                _ => {}
            }
        }
        let v = value.ok_or(Error::RegisterNotClassical)?;
        Ok(BitVector::from_index(width, v as u64))
    }

    /// Splits off a register that is classical on the support, returning its
    /// value and the state of the remaining qubits.
    pub fn remove_register(&self, range: Range<usize>) -> Result<(BitVector, StateVector)> {
        let value = self.register_value(range.clone())?;
        let q = self.qubits;
        let width = range.end - range.start;
        let low_bits = q - range.end;
        let expect = (value.to_index() as usize) << low_bits;
        let reg_mask = ((1usize << width) - 1) << low_bits;
        let low_mask = (1usize << low_bits) - 1;
        let mut amps = vec![Complex64::ZERO; 1 << (q - width)];
        for (b, a) in self.amps.iter().enumerate() {
            if a.norm() == 0.0 {
                continue;
            }
            if b & reg_mask != expect {
                // numerically negligible residue on other register values
                continue;
            }
            let hi = b >> (q - range.start);
            amps[(hi << low_bits) | (b & low_mask)] = *a;
        }
        let mut s = StateVector {
            qubits: q - width,
            amps,
        };
        s.renormalize();
        Ok((value, s))
    }

    /// Exact X-basis outcome probabilities |⟨x|H^{⊗q}|s⟩|^2 for all x.
    pub fn xbasis_distribution(&self) -> Vec<f64> {
        self.apply_h_all().amps.iter().map(|a| a.norm_sqr()).collect()
    }

    fn check_range(&self, range: &Range<usize>) -> Result<()> {
        if range.start >= range.end {
            return Err(Error::Parameter("empty register range".into()));
        }
        if range.end > self.qubits {
            return Err(Error::dim(
                "register",
                format!("range {range:?} vs {} qubits", self.qubits),
            ));
        }
        Ok(())
    }
}

/// Basis-state index of each row of a matrix (leftmost column = MSB).
fn row_indices(m: &BitMatrix) -> Vec<u64> {
    (0..m.rows()).map(|i| m.row(i).to_index()).collect()
}

fn l2_norm(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// In-place unnormalized Walsh-Hadamard butterfly.
fn walsh_hadamard(amps: &mut [Complex64]) {
    let n = amps.len();
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(h * 2) {
            for i in block..block + h {
                let x = amps[i];
                let y = amps[i + h];
                amps[i] = x + y;
                amps[i + h] = x - y;
            }
        }
        h *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::sample;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn hamming_g() -> BitMatrix {
        let rows: Vec<BitVector> = ["1000110", "0100011", "0010111", "0001101"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        BitMatrix::from_rows(&rows).unwrap()
    }

    fn random_state(q: usize, seed: u64) -> StateVector {
        StateVector::random(q, &mut ChaCha20Rng::seed_from_u64(seed)).unwrap()
    }

    #[test]
    fn fidelity_basics() {
        let s = random_state(3, 1);
        assert_abs_diff_eq!(s.fidelity(&s).unwrap(), 1.0, epsilon = 1e-12);

        let zero = StateVector::basis_state(&"0".parse().unwrap()).unwrap();
        let one = StateVector::basis_state(&"1".parse().unwrap()).unwrap();
        assert_abs_diff_eq!(zero.fidelity(&one).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn bell_state_fidelity_with_00() {
        // (|00⟩ + |11⟩)/sqrt(2) against |00⟩: direct inner product 1/sqrt(2)
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let bell = StateVector::from_amplitudes(vec![
            Complex64::new(r, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::new(r, 0.0),
        ])
        .unwrap();
        let zz = StateVector::basis_state(&"00".parse().unwrap()).unwrap();
        assert_abs_diff_eq!(bell.fidelity(&zz).unwrap(), r, epsilon = 1e-12);
    }

    #[test]
    fn identity_isometry_is_identity() {
        let s = random_state(4, 2);
        let out = s.apply_isometry(&BitMatrix::identity(4)).unwrap();
        assert_abs_diff_eq!(s.max_pointwise_diff(&out).unwrap(), 0.0, epsilon = 0.0);
    }

    #[test]
    fn basis_state_maps_to_generator_row() {
        // |1000⟩ under the Hamming generator lands on the row-1 codeword
        let g = hamming_g();
        let s = StateVector::basis_state(&"1000".parse().unwrap()).unwrap();
        let out = s.apply_isometry(&g).unwrap();
        let expected = StateVector::basis_state(&g.row(0)).unwrap();
        assert_abs_diff_eq!(out.max_pointwise_diff(&expected).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn superpositions_map_linearly() {
        let g = hamming_g();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![Complex64::ZERO; 16];
        amps[0b1000] = Complex64::new(r, 0.0);
        amps[0b0100] = Complex64::new(r, 0.0);
        let s = StateVector::from_amplitudes(amps).unwrap();
        let out = s.apply_isometry(&g).unwrap();
        assert_abs_diff_eq!(out.norm(), 1.0, epsilon = 1e-12);
        let c1 = g.row(0).to_index() as usize;
        let c2 = g.row(1).to_index() as usize;
        assert_abs_diff_eq!(out.amplitudes()[c1].re, r, epsilon = 1e-12);
        assert_abs_diff_eq!(out.amplitudes()[c2].re, r, epsilon = 1e-12);
    }

    #[test]
    fn isometry_inverse_roundtrips_random_states() {
        let g = hamming_g();
        for seed in 0..50 {
            let s = random_state(4, seed);
            let back = s
                .apply_isometry(&g)
                .unwrap()
                .apply_isometry_inverse(&g)
                .unwrap();
            assert!(s.max_pointwise_diff(&back).unwrap() < 1e-12);
        }
    }

    #[test]
    fn isometry_inverse_recovers_message_from_codeword_table() {
        let g = hamming_g();
        // oracle: table of all 16 codewords via vec_mat
        let s = random_state(4, 77);
        let encoded = s.apply_isometry(&g).unwrap();
        for m in 0..16u64 {
            let c = BitVector::from_index(4, m).vec_mat(&g).unwrap();
            let amp = encoded.amplitudes()[c.to_index() as usize];
            assert_abs_diff_eq!((amp - s.amplitudes()[m as usize]).norm(), 0.0, epsilon = 1e-15);
        }
        let back = encoded.apply_isometry_inverse(&g).unwrap();
        assert!(s.max_pointwise_diff(&back).unwrap() < 1e-12);
    }

    #[test]
    fn non_codeword_support_is_rejected() {
        let g = hamming_g();
        let e7 = StateVector::basis_state(&BitVector::unit(7, 6)).unwrap();
        assert!(matches!(
            e7.apply_isometry_inverse(&g),
            Err(Error::SupportOutsideImage)
        ));
    }

    #[test]
    fn rank_deficient_isometry_is_rejected() {
        let g = BitMatrix::from_rows(&["1100".parse().unwrap(), "1100".parse().unwrap()]).unwrap();
        let s = random_state(2, 3);
        assert!(matches!(
            s.apply_isometry(&g),
            Err(Error::NotFullRowRank)
        ));
    }

    #[test]
    fn zero_masks_are_identity() {
        let s = random_state(5, 4);
        let x = s.apply_x(&BitVector::zeros(5)).unwrap();
        let z = s.apply_z(&BitVector::zeros(5)).unwrap();
        assert_abs_diff_eq!(s.max_pointwise_diff(&x).unwrap(), 0.0, epsilon = 0.0);
        assert_abs_diff_eq!(s.max_pointwise_diff(&z).unwrap(), 0.0, epsilon = 0.0);
    }

    #[test]
    fn hadamard_is_an_involution() {
        for seed in 0..20 {
            let s = random_state(6, seed);
            let back = s.apply_h_all().apply_h_all();
            assert!(s.max_pointwise_diff(&back).unwrap() < 1e-12);
        }
    }

    #[test]
    fn hadamard_conjugates_x_to_z() {
        // both routes computed independently: H X(e) s vs Z(e) H s
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        for seed in 0..50 {
            let s = random_state(5, 1000 + seed);
            let e = sample::random_vector(5, &mut rng);
            let lhs = s.apply_x(&e).unwrap().apply_h_all();
            let rhs = s.apply_h_all().apply_z(&e).unwrap();
            assert!(lhs.max_pointwise_diff(&rhs).unwrap() < 1e-12);
        }
    }

    #[test]
    fn measuring_all_zero_state_is_deterministic() {
        let s = StateVector::basis_state(&BitVector::zeros(4)).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let (outcome, collapsed) = s.measure_register(0..4, &mut rng).unwrap();
        assert!(outcome.is_zero());
        assert_abs_diff_eq!(collapsed.fidelity(&s).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn bell_measurement_statistics_within_3_sigma() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let bell = StateVector::from_amplitudes(vec![
            Complex64::new(r, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::new(r, 0.0),
        ])
        .unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(17);
        let trials = 10_000;
        let mut ones = 0usize;
        for _ in 0..trials {
            let (outcome, _) = bell.measure_register(0..1, &mut rng).unwrap();
            if outcome.get(0) {
                ones += 1;
            }
        }
        // binomial(10^4, 1/2): 3 sigma = 150
        let dev = (ones as f64 - 5000.0).abs();
        assert!(dev <= 150.0, "deviation {dev} exceeds 3 sigma");
    }

    #[test]
    fn xbasis_distribution_of_zero_state_is_uniform() {
        let s = StateVector::basis_state(&BitVector::zeros(3)).unwrap();
        let dist = s.xbasis_distribution();
        for p in dist {
            assert_abs_diff_eq!(p, 1.0 / 8.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn xbasis_distribution_of_plus_state_is_point_mass() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let plus = StateVector::from_amplitudes(vec![
            Complex64::new(r, 0.0),
            Complex64::new(r, 0.0),
        ])
        .unwrap();
        let dist = plus.xbasis_distribution();
        assert_abs_diff_eq!(dist[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(dist[1], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn xbasis_distribution_ignores_x_masks() {
        let mut rng = ChaCha20Rng::seed_from_u64(23);
        for seed in 0..50 {
            let s = random_state(4, 2000 + seed);
            let e = sample::random_vector(4, &mut rng);
            let a = s.xbasis_distribution();
            let b = s.apply_x(&e).unwrap().xbasis_distribution();
            let tv: f64 = a
                .iter()
                .zip(&b)
                .map(|(x, y)| (x - y).abs())
                .sum::<f64>()
                / 2.0;
            assert!(tv < 1e-12, "tv distance {tv}");
        }
    }

    #[test]
    fn xor_linear_computes_register_products() {
        // |m⟩|0⟩ -> |m⟩|mG⟩ on basis states
        let g = hamming_g();
        for m in 0..16u64 {
            let msg = BitVector::from_index(4, m);
            let joint = StateVector::basis_state(&msg)
                .unwrap()
                .tensor(&StateVector::basis_state(&BitVector::zeros(7)).unwrap())
                .unwrap();
            let out = joint.apply_xor_linear(0..4, 4..11, &g).unwrap();
            let expected = msg.concat(&msg.vec_mat(&g).unwrap());
            let expected_state = StateVector::basis_state(&expected).unwrap();
            assert_abs_diff_eq!(
                out.max_pointwise_diff(&expected_state).unwrap(),
                0.0,
                epsilon = 0.0
            );
        }
    }

    #[test]
    fn xor_linear_is_involutive() {
        let g = hamming_g();
        let s = random_state(11, 31);
        let once = s.apply_xor_linear(0..4, 4..11, &g).unwrap();
        let twice = once.apply_xor_linear(0..4, 4..11, &g).unwrap();
        assert_abs_diff_eq!(s.max_pointwise_diff(&twice).unwrap(), 0.0, epsilon = 0.0);
    }

    #[test]
    fn xor_linear_rejects_overlap() {
        let s = random_state(6, 8);
        let m = BitMatrix::identity(3);
        assert!(matches!(
            s.apply_xor_linear(0..3, 2..5, &m),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn register_value_and_removal() {
        // |101⟩ ⊗ random(2): register 0..3 is classical
        let tag = StateVector::basis_state(&"101".parse().unwrap()).unwrap();
        let payload = random_state(2, 12);
        let joint = tag.tensor(&payload).unwrap();
        assert_eq!(joint.register_value(0..3).unwrap().to_string(), "101");
        let (value, rest) = joint.remove_register(0..3).unwrap();
        assert_eq!(value.to_string(), "101");
        assert!(rest.max_pointwise_diff(&payload).unwrap() < 1e-12);

        // a genuinely quantum register is refused
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let plus = StateVector::from_amplitudes(vec![
            Complex64::new(r, 0.0),
            Complex64::new(r, 0.0),
        ])
        .unwrap();
        let joint2 = plus.tensor(&payload).unwrap();
        assert!(matches!(
            joint2.register_value(0..1),
            Err(Error::RegisterNotClassical)
        ));
    }

    #[test]
    fn middle_register_removal_keeps_order() {
        let a = StateVector::basis_state(&"10".parse().unwrap()).unwrap();
        let b = StateVector::basis_state(&"11".parse().unwrap()).unwrap();
        let c = random_state(2, 44);
        let joint = a.tensor(&b).unwrap().tensor(&c).unwrap();
        let (value, rest) = joint.remove_register(2..4).unwrap();
        assert_eq!(value.to_string(), "11");
        let expected = a.tensor(&c).unwrap();
        assert!(rest.max_pointwise_diff(&expected).unwrap() < 1e-12);
    }

    #[test]
    fn norm_is_preserved_by_all_unitary_ops() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let g = hamming_g();
        for seed in 0..10 {
            let s = random_state(4, 3000 + seed);
            assert_abs_diff_eq!(s.norm(), 1.0, epsilon = 1e-9);
            assert_abs_diff_eq!(s.apply_isometry(&g).unwrap().norm(), 1.0, epsilon = 1e-9);
            assert_abs_diff_eq!(s.apply_h_all().norm(), 1.0, epsilon = 1e-9);
            let e = sample::random_vector(4, &mut rng);
            assert_abs_diff_eq!(s.apply_x(&e).unwrap().norm(), 1.0, epsilon = 1e-9);
            assert_abs_diff_eq!(s.apply_z(&e).unwrap().norm(), 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn qubit_cap_is_enforced() {
        let err = StateVector::random(25, &mut ChaCha20Rng::seed_from_u64(0));
        assert!(matches!(err, Err(Error::QubitCap { .. })));
    }

    #[test]
    fn from_amplitudes_rejects_bad_norm() {
        let amps = vec![Complex64::new(0.5, 0.0); 2];
        assert!(matches!(
            StateVector::from_amplitudes(amps),
            Err(Error::NormDeviation(_))
        ));
    }

    #[test]
    fn measurement_is_seed_deterministic() {
        let s = random_state(5, 90);
        let run = |seed: u64| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let mut outcomes = Vec::new();
            for _ in 0..20 {
                let (o, _) = s.measure_register(0..5, &mut rng).unwrap();
                outcomes.push(o.to_string());
            }
            outcomes
        };
        assert_eq!(run(7), run(7));
    }
}
