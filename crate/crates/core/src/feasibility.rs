//! Deciding whether a basis-state linear map extends to a physical quantum
//! transformation. The operational criterion is injectivity on the declared
//! domain: an injective map extends reversibly with ancilla, a collision
//! makes amplitude reindexing meaningless. Witnesses are produced for the
//! infeasible case.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::gf2::{weight_vectors, BitMatrix, BitVector};

/// Exhaustive scans over constant-weight domains cap the bit length.
pub const MAX_SCAN_BITS: usize = 24;

/// Which basis states the map is defined on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// All `bits`-bit strings.
    Full { bits: usize },
    /// All `bits`-bit strings of weight exactly `weight`.
    ConstantWeight { bits: usize, weight: usize },
}

impl Domain {
    pub fn bits(&self) -> usize {
        match *self {
            Domain::Full { bits } => bits,
            Domain::ConstantWeight { bits, .. } => bits,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Domain::Full { bits: 0 } | Domain::ConstantWeight { bits: 0, .. } => {
                Err(Error::Parameter("empty domain".into()))
            }
            Domain::ConstantWeight { bits, weight } if weight > bits => {
                Err(Error::Parameter(format!(
                    "constant-weight domain needs weight <= bits, got {weight} > {bits}"
                )))
            }
            _ => Ok(()),
        }
    }
}

/// A basis-state map m -> m * matrix restricted to a domain.
#[derive(Clone, Debug)]
pub struct BasisMapSpec {
    pub matrix: BitMatrix,
    pub domain: Domain,
}

impl BasisMapSpec {
    pub fn new(matrix: BitMatrix, domain: Domain) -> Result<Self> {
        domain.validate()?;
        if domain.bits() != matrix.rows() {
            return Err(Error::dim(
                "basis map",
                format!("domain bits {} vs matrix rows {}", domain.bits(), matrix.rows()),
            ));
        }
        Ok(BasisMapSpec { matrix, domain })
    }
}

/// Outcome of the feasibility check.
#[derive(Clone, Debug)]
pub enum Feasibility {
    /// The map is injective on the domain; a reversible extension exists.
    Feasible,
    /// Two domain elements share an image.
    Infeasible {
        witness: (BitVector, BitVector),
    },
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible)
    }
}

/// Decides feasibility. Full domains use elimination (a kernel vector splits
/// into a colliding pair); constant-weight domains are scanned exhaustively.
pub fn check_feasible(spec: &BasisMapSpec) -> Result<Feasibility> {
    match spec.domain {
        Domain::Full { .. } => {
            // left kernel: inputs v with v * matrix = 0
            let kernel = spec.matrix.transpose().kernel_basis();
            if kernel.rows() == 0 {
                return Ok(Feasibility::Feasible);
            }
            let v = kernel.row(0);
            // split the kernel vector into two distinct colliding inputs
            let witness = if v.weight() >= 2 {
                let lead = BitVector::unit(v.len(), v.support()[0]);
                let rest = v.xor(&lead)?;
                (rest, lead)
            } else {
                (BitVector::zeros(v.len()), v)
            };
            debug_assert_eq!(
                witness.0.vec_mat(&spec.matrix)?,
                witness.1.vec_mat(&spec.matrix)?
            );
            Ok(Feasibility::Infeasible { witness })
        }
        Domain::ConstantWeight { bits, weight } => {
            if bits > MAX_SCAN_BITS {
                return Err(Error::Budget(format!(
                    "constant-weight scan over {bits} bits exceeds the {MAX_SCAN_BITS}-bit cap"
                )));
            }
            let mut images: HashMap<BitVector, BitVector> = HashMap::new();
            for m in weight_vectors(bits, weight) {
                let image = m.vec_mat(&spec.matrix)?;
                if let Some(prev) = images.get(&image) {
                    return Ok(Feasibility::Infeasible {
                        witness: (prev.clone(), m),
                    });
                }
                images.insert(image, m);
            }
            Ok(Feasibility::Feasible)
        }
    }
}

/// Basis of the annihilator {a : m . a = 0 for every m in the domain},
/// i.e. the kernel of the domain's span. May have zero rows.
pub fn annihilator_space(domain: &Domain) -> Result<BitMatrix> {
    domain.validate()?;
    let bits = domain.bits();
    match *domain {
        Domain::Full { .. } => Ok(BitMatrix::zeros(0, bits)),
        Domain::ConstantWeight { weight, .. } => {
            if bits > MAX_SCAN_BITS {
                return Err(Error::Budget(format!(
                    "constant-weight scan over {bits} bits exceeds the {MAX_SCAN_BITS}-bit cap"
                )));
            }
            // span of the domain, built by incremental elimination
            let mut basis: Vec<BitVector> = Vec::new();
            for m in weight_vectors(bits, weight) {
                let mut candidate = m;
                for b in &basis {
                    // reduce on the leading position of b
                    let lead = b.support()[0];
                    if candidate.get(lead) {
                        candidate = candidate.xor(b)?;
                    }
                }
                if !candidate.is_zero() {
                    basis.push(candidate);
                    basis.sort_by_key(|v| v.support()[0]);
                    if basis.len() == bits {
                        break;
                    }
                }
            }
            if basis.is_empty() {
                // domain is {0}: everything annihilates it
                return Ok(BitMatrix::identity(bits));
            }
            let span = BitMatrix::from_rows(&basis)?;
            Ok(span.kernel_basis())
        }
    }
}
