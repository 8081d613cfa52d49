use log::warn;

use super::ghz::apply_partial_time;
use super::{ProtocolId, ProtocolRun, ShotRecord};
use crate::error::{Error, Result};
use crate::network::NetworkConfig;
use crate::seeds::derive_seed;
use crate::sim::{squeezed_state, Basis, GateSpec, OutcomeSampler, Pauli, PauliObservable, PureState};

/// Largest per-qubit signal phase for which linear response is trusted.
pub const SMALL_SIGNAL_LIMIT: f64 = 0.05;

const SLOPE_STEP: f64 = 1e-4;

/// Exact `Ĵ_z` statistics of one squeezed Ramsey run.
#[derive(Debug, Clone)]
pub struct RamseyRecord {
    pub mean_jz: f64,
    pub var_jz: f64,
    pub xi: f64,
    /// Single-qubit contrast `⟨σ̂ˣᵢ⟩` of the input.
    pub contrast: f64,
    /// `∂⟨Ĵ_z⟩/∂q` by central differences.
    pub slope: f64,
    /// `Var Ĵ_z / slope²`.
    pub inferred_variance: f64,
    pub regime_warning: bool,
}

/// Largest `|wᵢθᵢt|` over qubits.
fn signal_phase(weights: &[f64], theta: &[f64], t: f64) -> f64 {
    weights
        .iter()
        .zip(theta)
        .fold(0.0f64, |m, (w, th)| m.max((w * th * t).abs()))
}

fn rotate_readout(s: &mut PureState) -> Result<()> {
    s.apply_gate(&GateSpec::CollectiveRotationX {
        angle: std::f64::consts::FRAC_PI_2,
    })
}

/// Input after partial-time evolution, before the readout rotation.
pub(crate) fn ramsey_probe(config: &NetworkConfig, input: &PureState) -> Result<PureState> {
    let mut s = input.clone();
    apply_partial_time(&mut s, config)?;
    Ok(s)
}

pub(crate) fn ramsey_readout_state(config: &NetworkConfig, input: &PureState) -> Result<PureState> {
    let mut s = ramsey_probe(config, input)?;
    rotate_readout(&mut s)?;
    Ok(s)
}

/// Squeezed input with twisting `mu`, partial-time evolution, `R̂ₓ(π/2)`, then `Ĵ_z`.
pub fn run_squeezed_ramsey(config: &NetworkConfig, mu: f64) -> Result<RamseyRecord> {
    let n = config.n();
    let input = squeezed_state(n, mu)?;
    let jz = PauliObservable::collective(n, Pauli::Z)?;
    let contrast = PauliObservable::single(n, 0, Pauli::X, 1.0)?.expectation(&input.state)?;
    let final_state = |c: &NetworkConfig| ramsey_readout_state(c, &input.state);
    let s = final_state(config)?;
    let mean_jz = jz.expectation(&s)?;
    let var_jz = jz.variance(&s)?;
    let h = SLOPE_STEP / config.t();
    let up = jz.expectation(&final_state(&config.shifted_q(h)?)?)?;
    let down = jz.expectation(&final_state(&config.shifted_q(-h)?)?)?;
    let slope = (up - down) / (2.0 * h);
    let regime_warning = signal_phase(config.alpha(), config.theta(), config.t()) > SMALL_SIGNAL_LIMIT;
    if regime_warning {
        warn!("squeezed Ramsey outside small-signal regime");
    }
    Ok(RamseyRecord {
        mean_jz,
        var_jz,
        xi: input.xi,
        contrast,
        slope,
        inferred_variance: var_jz / (slope * slope),
        regime_warning,
    })
}

/// Rotation angles `φᵢ = arccos αᵢ` and the twisting strength of the shared input.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoStepSpec {
    pub phi: Vec<f64>,
    pub mu: f64,
}

impl TwoStepSpec {
    pub fn new(alpha: &[f64], mu: f64) -> Result<Self> {
        if alpha.iter().any(|a| !(a.abs() <= 1.0)) {
            return Err(Error::Argument("two-step weights must satisfy |alpha| <= 1".into()));
        }
        Ok(Self {
            phi: alpha.iter().map(|a| a.acos()).collect(),
            mu,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoStep {
    /// `ηᵢ = +φᵢ`
    Plus,
    /// `ηᵢ = −φᵢ`
    Minus,
}

/// One run of the two-step scheme before its readout rotation.
pub(crate) fn two_step_probe(config: &NetworkConfig, spec: &TwoStepSpec, input: &PureState, step: TwoStep) -> Result<PureState> {
    let sign = match step {
        TwoStep::Plus => 1.0,
        TwoStep::Minus => -1.0,
    };
    let mut s = input.clone();
    for (i, phi) in spec.phi.iter().enumerate() {
        s.apply_gate(&GateSpec::RotationZ {
            target: i,
            angle: sign * phi,
        })?;
    }
    s.evolve_field(config.theta(), config.t() / 2.0)?;
    Ok(s)
}

pub(crate) fn two_step_state(config: &NetworkConfig, spec: &TwoStepSpec, input: &PureState, step: TwoStep) -> Result<PureState> {
    let mut s = two_step_probe(config, spec, input, step)?;
    rotate_readout(&mut s)?;
    Ok(s)
}

/// Exact statistics of the two-step scheme.
#[derive(Debug, Clone)]
pub struct TwoStepExact {
    /// `⟨Ĵ_z⁺⟩ + ⟨Ĵ_z⁻⟩`.
    pub mean_sum: f64,
    /// `Var Ĵ_z⁺ + Var Ĵ_z⁻` for the two independent runs.
    pub var_sum: f64,
    /// `Var(Σαᵢσ̂ʸᵢ)` on the input: the zero-signal operator `Ĵ_z⁺ + Ĵ_z⁻` maps onto.
    pub var_weighted_sigma_y: f64,
    pub var_jy: f64,
    pub xi: f64,
    pub slope: f64,
    /// `var_sum / slope²`.
    pub inferred_variance: f64,
    pub regime_warning: bool,
}

pub fn two_step_exact(config: &NetworkConfig, spec: &TwoStepSpec) -> Result<TwoStepExact> {
    let n = config.n();
    if spec.phi.len() != n {
        return Err(Error::Shape {
            expected: n,
            got: spec.phi.len(),
        });
    }
    let input = squeezed_state(n, spec.mu)?;
    let jz = PauliObservable::collective(n, Pauli::Z)?;
    let jy = PauliObservable::collective(n, Pauli::Y)?;
    let weighted = PauliObservable::local_sum(n, Pauli::Y, config.alpha())?;
    let mean_of = |c: &NetworkConfig| -> Result<f64> {
        let p = jz.expectation(&two_step_state(c, spec, &input.state, TwoStep::Plus)?)?;
        let m = jz.expectation(&two_step_state(c, spec, &input.state, TwoStep::Minus)?)?;
        Ok(p + m)
    };
    let plus = two_step_state(config, spec, &input.state, TwoStep::Plus)?;
    let minus = two_step_state(config, spec, &input.state, TwoStep::Minus)?;
    let var_sum = jz.variance(&plus)? + jz.variance(&minus)?;
    let h = SLOPE_STEP / config.t();
    let slope = (mean_of(&config.shifted_q(h)?)? - mean_of(&config.shifted_q(-h)?)?) / (2.0 * h);
    let regime_warning = signal_phase(&vec![1.0; config.n()], config.theta(), config.t() / 2.0) > SMALL_SIGNAL_LIMIT;
    Ok(TwoStepExact {
        mean_sum: mean_of(config)?,
        var_sum,
        var_weighted_sigma_y: weighted.variance(&input.state)?,
        var_jy: jy.variance(&input.state)?,
        xi: input.xi,
        slope,
        inferred_variance: var_sum / (slope * slope),
        regime_warning,
    })
}

/// `shots` paired readouts; shot `k` records `Ĵ_z⁺ + Ĵ_z⁻` from independent runs.
pub fn run_two_step_squeezed(config: &NetworkConfig, spec: &TwoStepSpec, shots: usize, seed: u64) -> Result<ProtocolRun> {
    if shots == 0 {
        return Err(Error::Argument("shots must be at least 1".into()));
    }
    let n = config.n();
    if spec.phi.len() != n {
        return Err(Error::Shape {
            expected: n,
            got: spec.phi.len(),
        });
    }
    let input = squeezed_state(n, spec.mu)?;
    let plus = OutcomeSampler::for_state(&two_step_state(config, spec, &input.state, TwoStep::Plus)?, Basis::Z)?;
    let minus = OutcomeSampler::for_state(&two_step_state(config, spec, &input.state, TwoStep::Minus)?, Basis::Z)?;
    let a = plus.sample(derive_seed(seed, 0), 0, shots);
    let b = minus.sample(derive_seed(seed, 1), 0, shots);
    let outcomes = a
        .iter()
        .zip(&b)
        .map(|(p, m)| ShotRecord {
            bits: p.0,
            partner_bits: Some(m.0),
            value: p.collective(n) + m.collective(n),
            tau: None,
            weight: 1.0,
        })
        .collect();
    let warn_flag = signal_phase(&vec![1.0; config.n()], config.theta(), config.t() / 2.0) > SMALL_SIGNAL_LIMIT;
    if warn_flag {
        warn!("two-step run outside small-signal regime");
    }
    Ok(ProtocolRun::from_outcomes(
        ProtocolId::TwoStepSqueezed,
        config.clone(),
        outcomes,
        warn_flag,
    ))
}
