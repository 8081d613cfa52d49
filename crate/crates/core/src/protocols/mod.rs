//! Measurement protocols: partial-time GHZ, squeezed Ramsey, τ-randomized GHZ-like
//! states and the two-step squeezed scheme, plus the partial-trace secrecy check.

mod ghz;
mod squeezed;
mod tau;

use serde::{Deserialize, Serialize};

use crate::network::NetworkConfig;

pub use ghz::{
    apply_partial_time, effective_unitary_reference, flip_schedule, parity_expectation,
    run_partial_time_ghz, run_partial_time_ghz_literal, secrecy_deviation, FlipEvent,
    FlipSchedule,
};
pub(crate) use squeezed::{ramsey_probe, ramsey_readout_state, two_step_probe, two_step_state};
pub use squeezed::{
    run_squeezed_ramsey, run_two_step_squeezed, two_step_exact, RamseyRecord, TwoStep,
    TwoStepExact, TwoStepSpec, SMALL_SIGNAL_LIMIT,
};
pub use tau::{
    run_tau_protocol, sample_tau, tau_expectation_bruteforce, TauDistribution, TauSample,
    MAX_BRUTEFORCE_QUBITS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolId {
    GhzPartial,
    SqueezedRamsey,
    TauRandomized,
    TwoStepSqueezed,
    Baseline,
    KnownStructure,
}

impl ProtocolId {
    pub fn as_str(self) -> &'static str {
        match self {
            ProtocolId::GhzPartial => "ghz-partial",
            ProtocolId::SqueezedRamsey => "squeezed-ramsey",
            ProtocolId::TauRandomized => "tau-randomized",
            ProtocolId::TwoStepSqueezed => "two-step-squeezed",
            ProtocolId::Baseline => "baseline",
            ProtocolId::KnownStructure => "known-structure",
        }
    }
}

impl std::fmt::Display for ProtocolId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One simulated shot.
#[derive(Debug, Clone, PartialEq)]
pub struct ShotRecord {
    /// Raw readout, bit `i` set when qubit `i` returned `−1`.
    pub bits: u32,
    /// Second readout for two-step runs.
    pub partner_bits: Option<u32>,
    /// Observable value of the shot: a parity for GHZ-type runs, `Ĵ_z` sums for squeezed runs.
    pub value: f64,
    pub tau: Option<Vec<i8>>,
    /// Quasi-probability weight; `1` unless the τ distribution has negative entries.
    pub weight: f64,
}

#[derive(Debug, Clone)]
pub struct ProtocolRun {
    pub protocol: ProtocolId,
    pub config: NetworkConfig,
    pub outcomes: Vec<ShotRecord>,
    /// Mean of `weight · value` over shots.
    pub mean: f64,
    /// Set when the run left the regime its analysis assumes.
    pub regime_warning: bool,
}

impl ProtocolRun {
    pub(crate) fn from_outcomes(
        protocol: ProtocolId,
        config: NetworkConfig,
        outcomes: Vec<ShotRecord>,
        regime_warning: bool,
    ) -> Self {
        let mean = outcomes.iter().map(|o| o.weight * o.value).sum::<f64>() / outcomes.len() as f64;
        Self {
            protocol,
            config,
            outcomes,
            mean,
            regime_warning,
        }
    }

    pub fn shots(&self) -> usize {
        self.outcomes.len()
    }

    /// Sample variance of `weight · value`.
    pub fn value_variance(&self) -> f64 {
        let m = self.mean;
        let n = self.outcomes.len() as f64;
        self.outcomes
            .iter()
            .map(|o| (o.weight * o.value - m).powi(2))
            .sum::<f64>()
            / (n - 1.0).max(1.0)
    }
}
