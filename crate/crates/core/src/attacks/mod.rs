//! Everything the adversary can do with a ciphertext and the public key:
//! the right-inverse transform that strips the generator (leaking a parity
//! of the error), its double-layer variant, the classical bit leak, the
//! low-weight column search, the exact leak probability, and a sampling
//! harness for distinguishing ciphertext distributions.

mod distinguish;
mod prob;
mod search;

pub use distinguish::{distinguishability_trial, DistinguishReport, MeasureBasis};
pub use prob::{decimal_string, prob_r_dot_e_zero};
pub use search::{low_weight_search, search_instance, SearchEngine, SearchRecord, SearchResult};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::pke::PublicKey;
use crate::qsim::StateVector;

/// Result of running the ciphertext transform with one chosen right inverse.
#[derive(Clone, Debug)]
pub struct AttackOutcome {
    /// Measured value r(I + G'^- G'), an error parity the attacker learns.
    pub leak: BitVector,
    /// The k-qubit state left behind: X(r G'^-) applied to the message.
    pub residual: StateVector,
    /// Which member of the right-inverse family was used.
    pub applied_inverse: BitMatrix,
}

/// Ciphertext transform of the single scheme, executed literally on an
/// (n + k)-qubit register: compute c G'^- into an ancilla, XOR its image
/// under G' back onto the cipher register (leaving the constant
/// r(I + G'^- G')), read that register off and drop it.
pub fn attack_transform(
    pk: &PublicKey,
    cipher: &StateVector,
    u: &BitMatrix,
) -> Result<AttackOutcome> {
    let (k, n) = (pk.k(), pk.n());
    if cipher.qubits() != n {
        return Err(Error::dim(
            "attack_transform",
            format!("cipher has {} qubits, key expects {n}", cipher.qubits()),
        ));
    }
    let g_prime = pk.g_prime();
    let canonical = g_prime.right_inverse()?;
    let inverse = g_prime.right_inverse_member(&canonical, u)?;

    let ancilla = StateVector::basis_state(&BitVector::zeros(k))?;
    let joint = cipher
        .tensor(&ancilla)? // |c⟩|0⟩
        .apply_xor_linear(0..n, n..n + k, &inverse)? // |c⟩|c G'^-⟩
        .apply_xor_linear(n..n + k, 0..n, g_prime)?; // |c + (c G'^-) G'⟩|c G'^-⟩
    let (leak, residual) = joint.remove_register(0..n)?;
    Ok(AttackOutcome {
        leak,
        residual,
        applied_inverse: inverse,
    })
}

/// Result of attacking the double scheme end to end.
#[derive(Clone, Debug)]
pub struct DoubleAttackOutcome {
    /// r2(I + G2'^- G2'), measured while stripping the outer layer.
    pub leak_outer: BitVector,
    /// r1(I + G1'^- G1'), measured while stripping the inner layer.
    pub leak_inner: BitVector,
    /// State after the outer strip and the Hadamard:
    /// Z(r2 G2'^-) sum a_m |m G1' + r1⟩.
    pub intermediate: StateVector,
    /// Final k-qubit state: X(r1 G1'^-) with the layered phases attached.
    pub residual: StateVector,
    pub applied_inverse_outer: BitMatrix,
    pub applied_inverse_inner: BitMatrix,
}

/// Double-scheme transform: strip the outer encryption (measuring its leak),
/// apply the global Hadamard, strip the inner encryption (measuring its
/// leak). The intermediate state is returned for inspection.
pub fn attack_transform_double(
    pk_outer: &PublicKey,
    pk_inner: &PublicKey,
    cipher: &StateVector,
    u_outer: &BitMatrix,
    u_inner: &BitMatrix,
) -> Result<DoubleAttackOutcome> {
    if pk_outer.k() != pk_inner.n() {
        return Err(Error::dim(
            "attack_transform_double",
            format!("layer widths {} vs {}", pk_inner.n(), pk_outer.k()),
        ));
    }
    let outer = attack_transform(pk_outer, cipher, u_outer)?;
    let intermediate = outer.residual.apply_h_all();
    let inner = attack_transform(pk_inner, &intermediate, u_inner)?;
    Ok(DoubleAttackOutcome {
        leak_outer: outer.leak,
        leak_inner: inner.leak,
        intermediate,
        residual: inner.residual,
        applied_inverse_outer: outer.applied_inverse,
        applied_inverse_inner: inner.applied_inverse,
    })
}

/// Classical ciphertext times a chosen right inverse: c G'^- = m + r G'^-.
/// Bit i equals m_i xor (r . e_i) with e_i the i-th column of the inverse.
pub fn classical_bit_leak(c: &BitVector, inverse: &BitMatrix) -> Result<BitVector> {
    c.vec_mat(inverse)
}

/// One CSV row of an attack report.
#[derive(Clone, Debug, Serialize)]
pub struct AttackRecord {
    pub layer: &'static str,
    pub n: usize,
    pub k: usize,
    pub u_seed: u64,
    pub leak: String,
    pub leak_weight: usize,
    /// Rank of I + G'^- G', the dimension of the leaked parity space.
    pub leak_space_rank: usize,
}

/// Rank of I + G'^- G' for a chosen inverse, i.e. how many independent
/// parities of r the transform leaks.
pub fn leak_space_rank(g_prime: &BitMatrix, inverse: &BitMatrix) -> Result<usize> {
    let n = g_prime.cols();
    let projector = BitMatrix::identity(n).xor(&inverse.mat_mul(g_prime)?)?;
    Ok(projector.rank())
}
