//! Repeated M-shot experiments, estimators of `q` and their empirical variance against the
//! bounds.
//!
//! Every experiment is repeated `R` times. Repetition `r` draws its shots from
//! `derive_seed(seed, r)`, so results do not depend on how repetitions are scheduled.

use std::f64::consts::FRAC_PI_2;

use log::warn;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fisher::{qfi_matrix, saturates, BoundsReport, FisherKind, FisherMatrix, GeneratorSet};
use crate::network::NetworkConfig;
use crate::protocols::{
    ramsey_probe, ramsey_readout_state, run_partial_time_ghz, run_squeezed_ramsey, two_step_exact,
    two_step_probe, two_step_state, ProtocolId, TwoStep, TwoStepSpec,
};
use crate::reparam::known_structure_protocol;
use crate::seeds::derive_seed;
use crate::sim::{squeezed_state, Basis, GateSpec, OutcomeSampler, PureState};

/// Closest the biased phase `(q + b)t` may come to `0` or `π`.
pub const OPERATING_MARGIN: f64 = 0.2;

/// Bias that puts the parity readout at its steepest point, `(q + b)t = π/2`.
///
/// In a real network this comes from a prior estimate of `q`; the simulation uses the
/// configured value.
pub fn operating_bias(config: &NetworkConfig) -> f64 {
    FRAC_PI_2 / config.t() - config.q()
}

fn check_operating_point(q: f64, bias: f64, t: f64) -> Result<()> {
    let phase = (q + bias) * t;
    if !(phase >= OPERATING_MARGIN && phase <= std::f64::consts::PI - OPERATING_MARGIN) {
        return Err(Error::Argument(format!(
            "biased phase (q + bias)t = {phase} outside [{OPERATING_MARGIN}, π − {OPERATING_MARGIN}]"
        )));
    }
    Ok(())
}

/// Post-protocol GHZ state, optionally with an extra `R̂_z(bias·t)` on qubit 0, sampled in
/// the x basis.
#[derive(Debug, Clone)]
pub struct ParityExperiment {
    sampler: OutcomeSampler,
    mask: u32,
}

impl ParityExperiment {
    pub fn new(config: &NetworkConfig, bias: f64) -> Result<Self> {
        let mut state = run_partial_time_ghz(config)?;
        if bias != 0.0 {
            state.apply_gate(&GateSpec::RotationZ {
                target: 0,
                angle: bias * config.t(),
            })?;
        }
        Ok(Self {
            sampler: OutcomeSampler::for_state(&state, Basis::X)?,
            mask: ((1u64 << config.n()) - 1) as u32,
        })
    }

    /// Mean of `⊗σ̂ˣ` over `shots` shots.
    pub fn mean_parity(&self, shots: usize, seed: u64) -> Result<f64> {
        check_shots(shots)?;
        let sum: i64 = self
            .sampler
            .sample(seed, 0, shots)
            .iter()
            .map(|o| o.parity(self.mask) as i64)
            .sum();
        Ok(sum as f64 / shots as f64)
    }
}

fn check_shots(shots: usize) -> Result<()> {
    if shots == 0 {
        return Err(Error::Argument("shots must be at least 1".into()));
    }
    Ok(())
}

/// Mean parity of `shots` x-basis readouts of the unbiased post-protocol GHZ state;
/// distributed around `cos(qt)` with variance `sin²(qt)/M`.
pub fn simulate_parity_experiment(config: &NetworkConfig, shots: usize, seed: u64) -> Result<f64> {
    ParityExperiment::new(config, 0.0)?.mean_parity(shots, seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inversion {
    pub estimate: f64,
    /// The mean was outside `[−1, 1]` and was clamped.
    pub clamped: bool,
}

/// `Q̂ = arccos(mean)/t − bias`.
pub fn invert_parity(mean_parity: f64, config: &NetworkConfig, bias: f64) -> Result<Inversion> {
    if !mean_parity.is_finite() {
        return Err(Error::Argument(format!("mean parity {mean_parity} is not finite")));
    }
    let clamped = mean_parity.abs() > 1.0;
    if clamped {
        warn!("mean parity {mean_parity} clamped to ±1");
    }
    Ok(Inversion {
        estimate: mean_parity.clamp(-1.0, 1.0).acos() / config.t() - bias,
        clamped,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct RegimeFlags {
    /// Repetitions whose parity mean had to be clamped.
    pub clamped: usize,
    /// The protocol ran outside the regime its variance formula assumes.
    pub regime_warning: bool,
}

/// What the repetitions of one protocol produced.
#[derive(Debug, Clone, Serialize)]
pub struct EstimatorReport {
    pub protocol: ProtocolId,
    #[serde(skip)]
    pub config: NetworkConfig,
    /// Shots per experiment, `M`.
    pub shots: usize,
    /// `R`.
    pub repetitions: usize,
    pub estimates: Vec<f64>,
    /// The configured `q = α·θ`.
    pub truth: f64,
    pub mean: f64,
    /// Sample variance of the estimates (denominator `R − 1`).
    pub empirical_variance: f64,
    /// `mean − q`.
    pub bias: f64,
    /// Single-experiment variance the protocol's analysis predicts.
    pub predicted: f64,
    pub bounds: BoundsReport,
    pub flags: RegimeFlags,
}

impl EstimatorReport {
    fn new(
        protocol: ProtocolId,
        config: &NetworkConfig,
        shots: usize,
        estimates: Vec<f64>,
        predicted: f64,
        bounds: BoundsReport,
        flags: RegimeFlags,
    ) -> Self {
        let r = estimates.len() as f64;
        let mean = estimates.iter().sum::<f64>() / r;
        let empirical_variance = estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (r - 1.0).max(1.0);
        let truth = config.q();
        Self {
            protocol,
            config: config.clone(),
            shots,
            repetitions: estimates.len(),
            estimates,
            truth,
            mean,
            empirical_variance,
            bias: mean - truth,
            predicted,
            bounds,
            flags,
        }
    }

    /// `M·Var(Q̂)`, comparable with single-experiment bounds.
    pub fn scaled_variance(&self) -> f64 {
        self.shots as f64 * self.empirical_variance
    }

    /// Standard error of the mean estimate.
    pub fn standard_error(&self) -> f64 {
        (self.empirical_variance / self.repetitions as f64).sqrt()
    }

    /// The smallest bound that applies to this protocol: the one-parameter bound under the
    /// `θ ∝ α` prior for the known-structure strategy, otherwise the probe's own quantum
    /// Cramér–Rao bound where it is finite and the network bound where it is not.
    pub fn applicable_bound(&self) -> f64 {
        if self.protocol == ProtocolId::KnownStructure {
            self.bounds.known_structure
        } else if self.bounds.qcrb_linear.is_finite() {
            self.bounds.qcrb_linear
        } else {
            self.bounds.network_heisenberg
        }
    }

    /// `M·Var(Q̂) ≥ bound·(1 − 5/√R)`.
    pub fn respects_floor(&self) -> bool {
        let slack = 1.0 - 5.0 / (self.repetitions as f64).sqrt();
        self.scaled_variance() >= self.applicable_bound() * slack
    }
}

/// Bound comparison with the empirical `M·Var(Q̂)` filled in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsComparison {
    pub bounds: BoundsReport,
    /// `(bound name, SATURATES)` in [`BoundsReport::entries`] order.
    pub saturated: Vec<(&'static str, bool)>,
}

pub fn compare_to_bounds(report: &EstimatorReport) -> BoundsComparison {
    let empirical = report.scaled_variance();
    let bounds = report.bounds.clone().with_empirical(empirical);
    let saturated = bounds
        .entries()
        .iter()
        .map(|(name, b)| (*name, b.is_finite() && saturates(*b, empirical)))
        .collect();
    BoundsComparison { bounds, saturated }
}

fn check_repetitions(repetitions: usize) -> Result<()> {
    if repetitions < 2 {
        return Err(Error::Argument("at least two repetitions are needed for a variance".into()));
    }
    Ok(())
}

/// Run `f(derive_seed(seed, r))` for every repetition in parallel, collected in index order.
fn repeat<T, F>(repetitions: usize, seed: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
{
    (0..repetitions as u64)
        .into_par_iter()
        .map(|r| f(derive_seed(seed, r)))
        .collect()
}

/// QFI of a post-protocol state whose evolution acts as `αᵢ·½σ̂ᶻᵢ` for time `t`.
fn effective_qfi(state: &PureState, config: &NetworkConfig) -> Result<FisherMatrix> {
    qfi_matrix(state, &GeneratorSet::scaled_half_z(config.alpha())?, config.t())
}

fn physical_bounds(config: &NetworkConfig, qfi: &FisherMatrix) -> Result<BoundsReport> {
    BoundsReport::new(config, qfi, &GeneratorSet::half_z(config.n())?)
}

/// Quantum Fisher matrix of a protocol's probe with respect to `θ`.
pub fn protocol_qfi(protocol: ProtocolId, config: &NetworkConfig, mu: f64) -> Result<FisherMatrix> {
    match protocol {
        ProtocolId::GhzPartial => effective_qfi(&run_partial_time_ghz(config)?, config),
        ProtocolId::SqueezedRamsey => {
            let input = squeezed_state(config.n(), mu)?;
            effective_qfi(&ramsey_probe(config, &input.state)?, config)
        }
        ProtocolId::Baseline => {
            let mut s = PureState::plus(config.n())?;
            s.evolve_field(config.theta(), config.t())?;
            qfi_matrix(&s, &GeneratorSet::half_z(config.n())?, config.t())
        }
        ProtocolId::TwoStepSqueezed => {
            let spec = TwoStepSpec::new(config.alpha(), mu)?;
            let input = squeezed_state(config.n(), mu)?;
            let gens = GeneratorSet::half_z(config.n())?;
            let mut total = None;
            for step in [TwoStep::Plus, TwoStep::Minus] {
                let probe = two_step_probe(config, &spec, &input.state, step)?;
                let f = qfi_matrix(&probe, &gens, config.t() / 2.0)?.entries;
                total = Some(total.map_or(f.clone(), |acc: nalgebra::DMatrix<f64>| acc + f));
            }
            FisherMatrix::new(total.expect("two steps"), config.t(), FisherKind::Quantum)
        }
        ProtocolId::KnownStructure => {
            let plan = known_structure_protocol(config)?;
            effective_qfi(&run_partial_time_ghz(&plan.measured)?, &plan.measured)
        }
        ProtocolId::TauRandomized => Err(Error::Scope(
            "the τ-randomized protocol is a quasi-probability mixture without a single probe state".into(),
        )),
    }
}

fn biased_ghz_estimates(config: &NetworkConfig, shots: usize, repetitions: usize, seed: u64) -> Result<(Vec<f64>, usize)> {
    check_shots(shots)?;
    check_repetitions(repetitions)?;
    let bias = operating_bias(config);
    check_operating_point(config.q(), bias, config.t())?;
    let experiment = ParityExperiment::new(config, bias)?;
    let inversions = repeat(repetitions, seed, |s| {
        invert_parity(experiment.mean_parity(shots, s)?, config, bias)
    })?;
    let clamped = inversions.iter().filter(|i| i.clamped).count();
    Ok((inversions.into_iter().map(|i| i.estimate).collect(), clamped))
}

/// Partial-time GHZ protocol read out by parity at the biased operating point.
pub fn ghz_experiment(config: &NetworkConfig, shots: usize, repetitions: usize, seed: u64) -> Result<EstimatorReport> {
    let (estimates, clamped) = biased_ghz_estimates(config, shots, repetitions, seed)?;
    let qfi = protocol_qfi(ProtocolId::GhzPartial, config, 0.0)?;
    let t = config.t();
    Ok(EstimatorReport::new(
        ProtocolId::GhzPartial,
        config,
        shots,
        estimates,
        1.0 / (t * t),
        physical_bounds(config, &qfi)?,
        RegimeFlags {
            clamped,
            regime_warning: false,
        },
    ))
}

/// Independent single-qubit Ramsey on every qubit with `αᵢ ≠ 0`, combined as `Σαᵢθ̂ᵢ`.
pub fn baseline_local(config: &NetworkConfig, shots: usize, repetitions: usize, seed: u64) -> Result<EstimatorReport> {
    check_shots(shots)?;
    check_repetitions(repetitions)?;
    let t = config.t();
    let biases: Vec<f64> = config.theta().iter().map(|th| FRAC_PI_2 / t - th).collect();
    let mut state = PureState::plus(config.n())?;
    let shifted: Vec<f64> = config.theta().iter().zip(&biases).map(|(th, b)| th + b).collect();
    state.evolve_field(&shifted, t)?;
    let sampler = OutcomeSampler::for_state(&state, Basis::X)?;
    let active: Vec<usize> = (0..config.n()).filter(|&i| config.alpha()[i] != 0.0).collect();
    let per_rep = repeat(repetitions, seed, |s| {
        let outcomes = sampler.sample(s, 0, shots);
        let mut estimate = 0.0;
        let mut clamped = 0;
        for &i in &active {
            let sum: i64 = outcomes.iter().map(|o| o.parity(1 << i) as i64).sum();
            let mean = sum as f64 / shots as f64;
            clamped += usize::from(mean.abs() > 1.0);
            let theta_hat = mean.clamp(-1.0, 1.0).acos() / t - biases[i];
            estimate += config.alpha()[i] * theta_hat;
        }
        Ok((estimate, clamped))
    })?;
    let qfi = protocol_qfi(ProtocolId::Baseline, config, 0.0)?;
    Ok(EstimatorReport::new(
        ProtocolId::Baseline,
        config,
        shots,
        per_rep.iter().map(|(e, _)| *e).collect(),
        config.alpha_norm_sq() / (t * t),
        physical_bounds(config, &qfi)?,
        RegimeFlags {
            clamped: per_rep.iter().map(|(_, c)| c).sum(),
            regime_warning: false,
        },
    ))
}

/// Squeezed Ramsey with `Q̂ = mean(Ĵ_z)/slope`, linearized at zero signal.
pub fn squeezed_experiment(
    config: &NetworkConfig,
    mu: f64,
    shots: usize,
    repetitions: usize,
    seed: u64,
) -> Result<EstimatorReport> {
    check_shots(shots)?;
    check_repetitions(repetitions)?;
    let n = config.n();
    let zero = config.with_theta(vec![0.0; n])?;
    let linear = run_squeezed_ramsey(&zero, mu)?;
    let input = squeezed_state(n, mu)?;
    let sampler = OutcomeSampler::for_state(&ramsey_readout_state(config, &input.state)?, Basis::Z)?;
    let estimates = repeat(repetitions, seed, |s| {
        let sum: f64 = sampler.sample(s, 0, shots).iter().map(|o| o.collective(n)).sum();
        Ok(sum / shots as f64 / linear.slope)
    })?;
    let here = run_squeezed_ramsey(config, mu)?;
    let qfi = protocol_qfi(ProtocolId::SqueezedRamsey, config, mu)?;
    Ok(EstimatorReport::new(
        ProtocolId::SqueezedRamsey,
        config,
        shots,
        estimates,
        linear.inferred_variance,
        physical_bounds(config, &qfi)?,
        RegimeFlags {
            clamped: 0,
            regime_warning: here.regime_warning,
        },
    ))
}

/// Two-step squeezed scheme; each experiment is one paired readout `Ĵ_z⁺ + Ĵ_z⁻`.
pub fn two_step_experiment(
    config: &NetworkConfig,
    mu: f64,
    shots: usize,
    repetitions: usize,
    seed: u64,
) -> Result<EstimatorReport> {
    check_shots(shots)?;
    check_repetitions(repetitions)?;
    let n = config.n();
    let spec = TwoStepSpec::new(config.alpha(), mu)?;
    let linear = two_step_exact(&config.with_theta(vec![0.0; n])?, &spec)?;
    let input = squeezed_state(n, mu)?;
    let plus = OutcomeSampler::for_state(&two_step_state(config, &spec, &input.state, TwoStep::Plus)?, Basis::Z)?;
    let minus = OutcomeSampler::for_state(&two_step_state(config, &spec, &input.state, TwoStep::Minus)?, Basis::Z)?;
    let estimates = repeat(repetitions, seed, |s| {
        let a = plus.sample(derive_seed(s, 0), 0, shots);
        let b = minus.sample(derive_seed(s, 1), 0, shots);
        let sum: f64 = a.iter().zip(&b).map(|(p, m)| p.collective(n) + m.collective(n)).sum();
        Ok(sum / shots as f64 / linear.slope)
    })?;
    let here = two_step_exact(config, &spec)?;
    let qfi = protocol_qfi(ProtocolId::TwoStepSqueezed, config, mu)?;
    Ok(EstimatorReport::new(
        ProtocolId::TwoStepSqueezed,
        config,
        shots,
        estimates,
        linear.inferred_variance,
        physical_bounds(config, &qfi)?,
        RegimeFlags {
            clamped: 0,
            regime_warning: here.regime_warning,
        },
    ))
}

/// Under `θ ∝ α`: measure `w·θ` with `w = sign(α)` by the GHZ protocol and rescale by
/// `‖α‖²/Σ|αᵢ|`.
pub fn known_structure_experiment(
    config: &NetworkConfig,
    shots: usize,
    repetitions: usize,
    seed: u64,
) -> Result<EstimatorReport> {
    let plan = known_structure_protocol(config)?;
    let (measured, clamped) = biased_ghz_estimates(&plan.measured, shots, repetitions, seed)?;
    let estimates = measured.iter().map(|m| plan.rescale * m).collect();
    let qfi = protocol_qfi(ProtocolId::KnownStructure, config, 0.0)?;
    Ok(EstimatorReport::new(
        ProtocolId::KnownStructure,
        config,
        shots,
        estimates,
        plan.target_variance,
        physical_bounds(config, &qfi)?,
        RegimeFlags {
            clamped,
            regime_warning: false,
        },
    ))
}
