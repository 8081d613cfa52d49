use std::collections::HashMap;

use rand::Rng;

use super::{ProtocolId, ProtocolRun, ShotRecord};
use crate::error::{Error, Result};
use crate::network::NetworkConfig;
use crate::seeds::shot_rng;
use crate::sim::{ghz_like_state, Basis, OutcomeSampler};

pub const MAX_BRUTEFORCE_QUBITS: usize = 10;

/// Per-qubit weights `P(τⱼ = s) = αⱼ(αⱼ + s)/2`, `P(τⱼ = 0) = 1 − αⱼ²`.
///
/// These sum to one and reproduce `E[τⱼ] = αⱼ`, `E[τⱼ²] = αⱼ²`, but one branch is negative
/// whenever `0 < |αⱼ| < 1`. Sampling then draws from `|P|/‖P‖₁` and carries the sign and
/// `‖P‖₁` as a per-shot weight, which keeps every weighted average unbiased.
#[derive(Debug, Clone, PartialEq)]
pub struct TauDistribution {
    /// `[P(−1), P(0), P(+1)]` for each qubit.
    probs: Vec<[f64; 3]>,
}

const TAU_VALUES: [i8; 3] = [-1, 0, 1];

impl TauDistribution {
    pub fn new(alpha: &[f64]) -> Result<Self> {
        let mut probs = Vec::with_capacity(alpha.len());
        for (j, &a) in alpha.iter().enumerate() {
            if !(a.abs() <= 1.0) {
                return Err(Error::Argument(format!("|alpha[{j}]| = {} exceeds 1", a.abs())));
            }
            let p = [a * (a - 1.0) / 2.0, 1.0 - a * a, a * (a + 1.0) / 2.0];
            let total: f64 = p.iter().sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(Error::InternalConsistency(format!(
                    "tau weights for qubit {j} sum to {total}"
                )));
            }
            probs.push(p);
        }
        Ok(Self { probs })
    }

    pub fn probabilities(&self) -> &[[f64; 3]] {
        &self.probs
    }

    /// True when every weight lies in `[0, 1]` within 1e-12.
    pub fn is_physical(&self) -> bool {
        self.probs.iter().flatten().all(|&p| p >= -1e-12 && p <= 1.0 + 1e-12)
    }

    /// Signed weight of a full τ vector.
    pub fn weight_of(&self, tau: &[i8]) -> f64 {
        self.probs
            .iter()
            .zip(tau)
            .map(|(p, &t)| p[(t + 1) as usize])
            .product()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> TauSample {
        let mut tau = Vec::with_capacity(self.probs.len());
        let mut weight = 1.0;
        for p in &self.probs {
            let l1: f64 = p.iter().map(|x| x.abs()).sum();
            let u = rng.random::<f64>() * l1;
            let mut acc = 0.0;
            let mut pick = 2;
            for (k, x) in p.iter().enumerate() {
                acc += x.abs();
                if u < acc {
                    pick = k;
                    break;
                }
            }
            tau.push(TAU_VALUES[pick]);
            weight *= p[pick].signum() * l1;
        }
        TauSample { tau, weight }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TauSample {
    pub tau: Vec<i8>,
    /// `1` whenever the distribution is physical.
    pub weight: f64,
}

pub fn sample_tau(alpha: &[f64], seed: u64) -> Result<TauSample> {
    Ok(TauDistribution::new(alpha)?.sample(&mut shot_rng(seed, 0)))
}

/// Per shot: draw τ, prepare `|ψ(τ)⟩`, evolve for `t`, and record `Π` over the `τⱼ ≠ 0` qubits.
pub fn run_tau_protocol(config: &NetworkConfig, shots: usize, seed: u64) -> Result<ProtocolRun> {
    if shots == 0 {
        return Err(Error::Argument("shots must be at least 1".into()));
    }
    let dist = TauDistribution::new(config.alpha())?;
    let mut samplers: HashMap<Vec<i8>, OutcomeSampler> = HashMap::new();
    let mut outcomes = Vec::with_capacity(shots);
    for shot in 0..shots as u64 {
        let mut rng = shot_rng(seed, shot);
        let TauSample { tau, weight } = dist.sample(&mut rng);
        if !samplers.contains_key(&tau) {
            let (mut state, _) = ghz_like_state(&tau)?;
            state.evolve_field(config.theta(), config.t())?;
            samplers.insert(tau.clone(), OutcomeSampler::for_state(&state, Basis::X)?);
        }
        let outcome = samplers[&tau].draw(&mut rng);
        let mask = tau
            .iter()
            .enumerate()
            .filter(|(_, &t)| t != 0)
            .fold(0u32, |m, (j, _)| m | 1 << j);
        outcomes.push(ShotRecord {
            bits: outcome.0,
            partner_bits: None,
            value: outcome.parity(mask) as f64,
            tau: Some(tau),
            weight,
        });
    }
    let regime_warning = (config.t() * config.q()).powi(2) >= 1.0;
    Ok(ProtocolRun::from_outcomes(
        ProtocolId::TauRandomized,
        config.clone(),
        outcomes,
        regime_warning,
    ))
}

/// `Σ_τ P(τ)·cos(t θ·τ)` over all `3ⁿ` vectors.
pub fn tau_expectation_bruteforce(config: &NetworkConfig) -> Result<f64> {
    let n = config.n();
    if n > MAX_BRUTEFORCE_QUBITS {
        return Err(Error::Size(format!(
            "brute-force tau enumeration limited to {MAX_BRUTEFORCE_QUBITS} qubits, got {n}"
        )));
    }
    let dist = TauDistribution::new(config.alpha())?;
    let mut tau = vec![-1i8; n];
    let mut total = 0.0;
    for _ in 0..3usize.pow(n as u32) {
        let w = dist.weight_of(&tau);
        if w != 0.0 {
            let phase: f64 = config
                .theta()
                .iter()
                .zip(&tau)
                .map(|(th, &t)| th * t as f64)
                .sum();
            total += w * (config.t() * phase).cos();
        }
        // Odometer increment over {−1, 0, 1}ⁿ.
        for slot in tau.iter_mut() {
            if *slot < 1 {
                *slot += 1;
                break;
            }
            *slot = -1;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(alpha: &[f64], theta: &[f64], t: f64) -> NetworkConfig {
        NetworkConfig::new(alpha.to_vec(), theta.to_vec(), t).unwrap()
    }

    #[test]
    fn unit_and_zero_weights_are_deterministic() {
        for seed in 0..50 {
            let s = sample_tau(&[1.0, 0.0, -1.0], seed).unwrap();
            assert_eq!(s.tau, vec![1, 0, -1]);
            assert_eq!(s.weight, 1.0);
        }
    }

    #[test]
    fn half_weight_has_negative_branch() {
        let d = TauDistribution::new(&[0.5]).unwrap();
        let p = d.probabilities()[0];
        assert!((p[2] - 0.375).abs() < 1e-15);
        assert!((p[0] + 0.125).abs() < 1e-15);
        assert!((p[1] - 0.75).abs() < 1e-15);
        assert!(!d.is_physical());
    }

    #[test]
    fn weighted_moments_match_weights() {
        let alpha = [0.5, -0.3, 1.0];
        let d = TauDistribution::new(&alpha).unwrap();
        let shots = 200_000u64;
        let mut m1 = [0.0; 3];
        let mut m2 = [0.0; 3];
        let mut sq1 = [0.0; 3];
        for k in 0..shots {
            let s = d.sample(&mut shot_rng(77, k));
            for j in 0..3 {
                let x = s.weight * s.tau[j] as f64;
                m1[j] += x;
                sq1[j] += x * x;
                m2[j] += s.weight * (s.tau[j] as f64).powi(2);
            }
        }
        let n = shots as f64;
        for j in 0..3 {
            let mean = m1[j] / n;
            let se = ((sq1[j] / n - mean * mean) / n).sqrt().max(1e-3 / n.sqrt());
            assert!((mean - alpha[j]).abs() < 4.0 * se, "qubit {j}: {mean}");
            assert!((m2[j] / n - alpha[j] * alpha[j]).abs() < 0.02);
        }
    }

    #[test]
    fn zero_field_parity_is_always_plus() {
        let run = run_tau_protocol(&cfg(&[1.0, 0.0, -1.0], &[0.0; 3], 1.0), 500, 3).unwrap();
        assert!(run.outcomes.iter().all(|o| o.value == 1.0));
        assert_eq!(run.mean, 1.0);
    }

    #[test]
    fn all_ones_reduces_to_ghz_parity() {
        let c = cfg(&[1.0; 3], &[0.3, 0.1, 0.2], 1.0);
        assert!((tau_expectation_bruteforce(&c).unwrap() - 0.6f64.cos()).abs() < 1e-14);
        let run = run_tau_protocol(&c, 20_000, 8).unwrap();
        let se = (run.value_variance() / 20_000.0).sqrt();
        assert!((run.mean - 0.6f64.cos()).abs() < 4.0 * se);
    }

    #[test]
    fn single_qubit_brute_force() {
        let c = cfg(&[1.0], &[0.8], 1.3);
        assert!((tau_expectation_bruteforce(&c).unwrap() - (0.8f64 * 1.3).cos()).abs() < 1e-14);
    }

    #[test]
    fn brute_force_matches_quadratic_expansion() {
        // Σ P(τ) cos(tθ·τ) = 1 − (t²/2)·E[(θ·τ)²] + O(t⁴), and E[(θ·τ)²] = (α·θ)².
        let c = cfg(&[1.0, 0.5], &[0.2, 0.4], 0.1);
        let exact = tau_expectation_bruteforce(&c).unwrap();
        let q = c.q();
        let second = 1.0 - 0.5 * (0.1f64 * q).powi(2);
        assert!((exact - second).abs() < 1e-6);
    }

    #[test]
    fn brute_force_size_limit() {
        let c = cfg(&[1.0; 11], &[0.0; 11], 1.0);
        assert!(matches!(tau_expectation_bruteforce(&c), Err(Error::Size(_))));
    }
}
