use rand::Rng;

use super::state::PureState;
use crate::error::{Error, Result};
use crate::seeds::shot_rng;

/// Measurement basis applied to every qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    X,
    Z,
}

/// A single-shot readout: bit `i` set means qubit `i` returned `−1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Outcome(pub u32);

impl Outcome {
    /// Product of the `±1` results over the qubits in `mask`.
    pub fn parity(self, mask: u32) -> i8 {
        if (self.0 & mask).count_ones() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// `½ Σᵢ rᵢ` over all `n` qubits.
    pub fn collective(self, n_qubits: usize) -> f64 {
        let ones = self.0.count_ones() as f64;
        0.5 * (n_qubits as f64 - 2.0 * ones)
    }

    pub fn bitstring(self, n_qubits: usize) -> String {
        (0..n_qubits)
            .map(|q| if self.0 >> q & 1 == 1 { '1' } else { '0' })
            .collect()
    }
}

/// Inverse-CDF sampler over a fixed outcome distribution.
#[derive(Debug, Clone)]
pub struct OutcomeSampler {
    cdf: Vec<f64>,
}

impl OutcomeSampler {
    pub fn new(probabilities: &[f64]) -> Result<Self> {
        let mut acc = 0.0;
        let mut cdf = Vec::with_capacity(probabilities.len());
        for &p in probabilities {
            if !(p >= -1e-12) {
                return Err(Error::InternalConsistency(format!(
                    "negative outcome probability {p}"
                )));
            }
            acc += p.max(0.0);
            cdf.push(acc);
        }
        if (acc - 1.0).abs() > 1e-9 {
            return Err(Error::InternalConsistency(format!(
                "outcome probabilities sum to {acc}"
            )));
        }
        Ok(Self { cdf })
    }

    pub fn for_state(state: &PureState, basis: Basis) -> Result<Self> {
        let probs = match basis {
            Basis::X => state.x_basis_probabilities(),
            Basis::Z => state.probabilities(),
        };
        Self::new(&probs)
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Outcome {
        let total = *self.cdf.last().unwrap_or(&1.0);
        let u: f64 = rng.random::<f64>() * total;
        let idx = self.cdf.partition_point(|&c| c <= u);
        // Guard against u landing exactly on the total after rounding.
        let idx = idx.min(self.cdf.len() - 1);
        Outcome(idx as u32)
    }

    /// Shots `first..first+count`, each from its own `(seed, shot)` stream.
    pub fn sample(&self, seed: u64, first: u64, count: usize) -> Vec<Outcome> {
        (0..count as u64)
            .map(|s| self.draw(&mut shot_rng(seed, first + s)))
            .collect()
    }
}

impl PureState {
    /// `shots` i.i.d. x-basis readouts, deterministic in `seed`.
    pub fn sample_x_basis(&self, shots: usize, seed: u64) -> Result<Vec<Outcome>> {
        self.sample_basis(Basis::X, shots, seed)
    }

    pub fn sample_basis(&self, basis: Basis, shots: usize, seed: u64) -> Result<Vec<Outcome>> {
        if shots == 0 {
            return Err(Error::Argument("shots must be at least 1".into()));
        }
        Ok(OutcomeSampler::for_state(self, basis)?.sample(seed, 0, shots))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plus_state_always_reads_plus() {
        let s = PureState::plus(4).unwrap();
        let shots = s.sample_x_basis(500, 3).unwrap();
        assert!(shots.iter().all(|o| o.0 == 0));
    }

    #[test]
    fn ghz3_parity_at_zero_phase_is_plus_one() {
        let s = PureState::ghz(3).unwrap();
        let shots = s.sample_x_basis(10_000, 1).unwrap();
        let mean = shots.iter().map(|o| o.parity(0b111) as f64).sum::<f64>() / 1e4;
        // Exact distribution puts all weight on even parity, so the 3σ window is {1}.
        assert_eq!(mean, 1.0);
    }

    #[test]
    fn single_qubit_quarter_turn_gives_balanced_parity() {
        let mut s = PureState::plus(1).unwrap();
        s.evolve_field(&[std::f64::consts::FRAC_PI_2], 1.0).unwrap();
        let probs = s.x_basis_probabilities();
        assert!((probs[0] - 0.5).abs() < 1e-14);
        let shots = s.sample_x_basis(20_000, 9).unwrap();
        let mean = shots.iter().map(|o| o.parity(1) as f64).sum::<f64>() / 2e4;
        assert!(mean.abs() < 4.0 / (2e4f64).sqrt());
    }

    #[test]
    fn sampling_is_seed_deterministic_and_prefix_stable() {
        let mut s = PureState::ghz(3).unwrap();
        s.evolve_field(&[0.4, 0.1, -0.3], 1.0).unwrap();
        let a = s.sample_x_basis(200, 42).unwrap();
        let b = s.sample_x_basis(200, 42).unwrap();
        assert_eq!(a, b);
        let sampler = OutcomeSampler::for_state(&s, Basis::X).unwrap();
        let tail = sampler.sample(42, 150, 50);
        assert_eq!(&a[150..], &tail[..]);
    }

    #[test]
    fn zero_shots_rejected() {
        let s = PureState::zero(1).unwrap();
        assert!(s.sample_x_basis(0, 1).is_err());
    }

    #[test]
    fn outcome_helpers() {
        let o = Outcome(0b101);
        assert_eq!(o.parity(0b111), 1);
        assert_eq!(o.parity(0b001), -1);
        assert_eq!(o.collective(3), -0.5);
        assert_eq!(o.bitstring(3), "101");
    }
}
