use crate::error::{Error, Result};
use crate::network::NetworkConfig;
use crate::sim::{GateSpec, PauliObservable, PureState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlipEvent {
    pub qubit: usize,
    pub time: f64,
}

/// σ̂ˣ flip times `tᵢ = t(1+αᵢ)/2`, sorted by time and then qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct FlipSchedule {
    pub events: Vec<FlipEvent>,
    pub t: f64,
}

impl FlipSchedule {
    /// Events strictly before `t`; a flip at `t` needs no gate.
    pub fn active(&self) -> impl Iterator<Item = &FlipEvent> {
        self.events.iter().filter(move |e| e.time < self.t)
    }

    /// Qubits whose readout frame is inverted by the mid-protocol flips.
    pub fn frame_mask(&self) -> u32 {
        self.active().fold(0, |m, e| m | 1 << e.qubit)
    }

    /// Time each qubit spends accumulating phase with its original sign, minus the rest.
    pub fn effective_weights(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.events.len()];
        for e in &self.events {
            w[e.qubit] = (2.0 * e.time - self.t) / self.t;
        }
        w
    }
}

pub fn flip_schedule(config: &NetworkConfig) -> FlipSchedule {
    let t = config.t();
    let mut events: Vec<FlipEvent> = config
        .alpha()
        .iter()
        .enumerate()
        .map(|(qubit, a)| FlipEvent {
            qubit,
            time: t * (1.0 + a) / 2.0,
        })
        .collect();
    events.sort_by(|a, b| a.time.total_cmp(&b.time).then(a.qubit.cmp(&b.qubit)));
    FlipSchedule { events, t }
}

/// Time-ordered evolution with the scheduled flips, leaving the readout frame flipped.
fn evolve_scheduled(state: &mut PureState, config: &NetworkConfig, schedule: &FlipSchedule) -> Result<()> {
    let mut now = 0.0;
    for e in schedule.active() {
        state.evolve_field(config.theta(), e.time - now)?;
        state.apply_gate(&GateSpec::PauliX { target: e.qubit })?;
        now = e.time;
    }
    state.evolve_field(config.theta(), config.t() - now)
}

/// Partial-time evolution of an arbitrary input, with the frame flips undone at `t`.
pub fn apply_partial_time(state: &mut PureState, config: &NetworkConfig) -> Result<()> {
    let schedule = flip_schedule(config);
    evolve_scheduled(state, config, &schedule)?;
    for e in schedule.active() {
        state.apply_gate(&GateSpec::PauliX { target: e.qubit })?;
    }
    Ok(())
}

/// GHZ input through the flip schedule; equals [`effective_unitary_reference`] up to a
/// global phase.
pub fn run_partial_time_ghz(config: &NetworkConfig) -> Result<PureState> {
    let mut s = PureState::ghz(config.n())?;
    apply_partial_time(&mut s, config)?;
    Ok(s)
}

/// Only the physical mid-protocol flips; returns the state and the frame mask that a
/// readout would have to absorb.
pub fn run_partial_time_ghz_literal(config: &NetworkConfig) -> Result<(PureState, u32)> {
    let schedule = flip_schedule(config);
    let mut s = PureState::ghz(config.n())?;
    evolve_scheduled(&mut s, config, &schedule)?;
    Ok((s, schedule.frame_mask()))
}

/// `exp(−i(t/2)Σαᵢθᵢσ̂ᶻᵢ)` applied to the GHZ state.
pub fn effective_unitary_reference(config: &NetworkConfig) -> Result<PureState> {
    let mut s = PureState::ghz(config.n())?;
    let field: Vec<f64> = config
        .alpha()
        .iter()
        .zip(config.theta())
        .map(|(a, th)| a * th)
        .collect();
    s.evolve_field(&field, config.t())?;
    Ok(s)
}

/// `⟨⊗σ̂ˣᵢ⟩`.
pub fn parity_expectation(state: &PureState) -> Result<f64> {
    PauliObservable::parity_x(state.n_qubits())?.expectation(state)
}

/// Largest entrywise change of the reduced state on `subset` as `q` moves through
/// `probe_values` (offsets added to the configured `q` along α).
pub fn secrecy_deviation(config: &NetworkConfig, subset: &[usize], probe_values: &[f64]) -> Result<f64> {
    if subset.is_empty() || subset.len() >= config.n() {
        return Err(Error::Argument(
            "secrecy subset must be a proper nonempty subset of the qubits".into(),
        ));
    }
    if probe_values.is_empty() {
        return Err(Error::Argument("at least one probe value is required".into()));
    }
    let mut reference = None;
    let mut worst = 0.0f64;
    for &dq in probe_values {
        let state = run_partial_time_ghz(&config.shifted_q(dq)?)?;
        let rho = state.partial_trace(subset)?;
        match &reference {
            None => reference = Some(rho),
            Some(r) => worst = worst.max(rho.max_abs_diff(r)?),
        }
    }
    Ok(worst)
}
