//! Statistical distinguishability harness: sample measurement outcomes from
//! two preparation procedures and report how far apart the empirical
//! distributions look. This can falsify an indistinguishability claim; it
//! proves nothing when the statistic stays small.

use std::collections::HashMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::qsim::StateVector;

/// Measurement basis for the trial outcomes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasureBasis {
    /// Computational (Z) basis.
    Computational,
    /// X basis: global Hadamard first.
    X,
}

/// Report of a two-sample distinguishing experiment.
#[derive(Clone, Debug)]
pub struct DistinguishReport {
    pub trials: usize,
    /// Empirical total-variation distance between outcome histograms.
    pub tv_estimate: f64,
    /// Two-proportion z statistic on the most frequent pooled outcome.
    pub z_statistic: f64,
    /// Number of distinct outcomes observed across both samples.
    pub distinct_outcomes: usize,
}

/// Runs `trials` fresh preparations of each side, measures every qubit in
/// the chosen basis, and compares the outcome histograms.
pub fn distinguishability_trial<R, A, B>(
    mut prep_a: A,
    mut prep_b: B,
    basis: MeasureBasis,
    trials: usize,
    rng: &mut R,
) -> Result<DistinguishReport>
where
    R: Rng + ?Sized,
    A: FnMut(&mut R) -> Result<StateVector>,
    B: FnMut(&mut R) -> Result<StateVector>,
{
    if trials == 0 {
        return Err(Error::Parameter("trials must be positive".into()));
    }
    let mut counts: HashMap<u64, [u64; 2]> = HashMap::new();
    let sample = |side: usize,
                      prep: &mut dyn FnMut(&mut R) -> Result<StateVector>,
                      counts: &mut HashMap<u64, [u64; 2]>,
                      rng: &mut R|
     -> Result<()> {
        for _ in 0..trials {
            let mut state = prep(rng)?;
            if basis == MeasureBasis::X {
                state = state.apply_h_all();
            }
            let q = state.qubits();
            let (outcome, _) = state.measure_register(0..q, rng)?;
            counts.entry(outcome.to_index()).or_default()[side] += 1;
        }
        Ok(())
    };
    sample(0, &mut prep_a, &mut counts, rng)?;
    sample(1, &mut prep_b, &mut counts, rng)?;

    let n = trials as f64;
    let tv_estimate = counts
        .values()
        .map(|[a, b]| ((*a as f64) / n - (*b as f64) / n).abs())
        .sum::<f64>()
        / 2.0;

    // z statistic on the single most frequent pooled outcome
    let (&_, &[na, nb]) = counts
        .iter()
        .max_by_key(|(_, [a, b])| a + b)
        .expect("trials > 0 implies outcomes");
    let pa = na as f64 / n;
    let pb = nb as f64 / n;
    let pooled = (na + nb) as f64 / (2.0 * n);
    let var = pooled * (1.0 - pooled) * (2.0 / n);
    let z_statistic = if var > 0.0 {
        (pa - pb) / var.sqrt()
    } else {
        0.0
    };

    Ok(DistinguishReport {
        trials,
        tv_estimate,
        z_statistic,
        distinct_outcomes: counts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::LinearCode;
    use crate::gf2::{sample, BitVector};
    use crate::pke;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn identical_preparations_look_identical() {
        let pair = pke::keygen(
            LinearCode::hamming_7_4(),
            &mut ChaCha20Rng::seed_from_u64(1),
        )
        .unwrap();
        let pk = pair.public.clone();
        let msg = StateVector::basis_state(&"0110".parse().unwrap()).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let report = distinguishability_trial(
            |r: &mut ChaCha20Rng| pke::encrypt(&pk, &msg, r),
            |r: &mut ChaCha20Rng| pke::encrypt(&pk, &msg, r),
            MeasureBasis::Computational,
            10_000,
            &mut rng,
        )
        .unwrap();
        assert!(
            report.z_statistic.abs() < 3.0,
            "z = {}",
            report.z_statistic
        );
    }

    #[test]
    fn x_masks_are_invisible_in_the_x_basis_exactly() {
        // exact distributions, no sampling: TV distance is zero
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for _ in 0..10 {
            let s = StateVector::random(4, &mut rng).unwrap();
            let e = sample::random_vector(4, &mut rng);
            let a = s.xbasis_distribution();
            let b = s.apply_x(&e).unwrap().xbasis_distribution();
            let tv: f64 = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).sum::<f64>() / 2.0;
            assert!(tv <= 1e-12);
        }
    }

    #[test]
    fn cleartext_structure_shows_in_the_computational_basis() {
        // toy parameters leak: encryptions of |0000⟩ and |1111⟩ are easily
        // separated by computational-basis measurement
        let pair = pke::keygen(
            LinearCode::hamming_7_4(),
            &mut ChaCha20Rng::seed_from_u64(4),
        )
        .unwrap();
        let pk = pair.public.clone();
        let zeros = StateVector::basis_state(&BitVector::zeros(4)).unwrap();
        let ones = StateVector::basis_state(&"1111".parse().unwrap()).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let report = distinguishability_trial(
            |r: &mut ChaCha20Rng| pke::encrypt(&pk, &zeros, r),
            |r: &mut ChaCha20Rng| pke::encrypt(&pk, &ones, r),
            MeasureBasis::Computational,
            2_000,
            &mut rng,
        )
        .unwrap();
        // codeword neighborhoods are disjoint at these parameters
        assert!(report.tv_estimate > 0.9, "tv = {}", report.tv_estimate);
        assert!(report.z_statistic.abs() > 3.0, "z = {}", report.z_statistic);
    }

    #[test]
    fn zero_trials_is_rejected() {
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        let err = distinguishability_trial(
            |_: &mut ChaCha20Rng| StateVector::basis_state(&BitVector::zeros(1)),
            |_: &mut ChaCha20Rng| StateVector::basis_state(&BitVector::zeros(1)),
            MeasureBasis::Computational,
            0,
            &mut rng,
        );
        assert!(err.is_err());
    }
}
