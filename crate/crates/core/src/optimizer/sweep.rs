use log::debug;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ansatz::{ControlAnsatz, N_DIRECTIONS};
use super::descent::{descend_with, gradient_fd_by, DescentSettings};
use super::objective::{objective_qcrb, theorem_floor, Scenario, SegmentCache};
use crate::error::{Error, Result};
use crate::seeds::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerSettings {
    pub segments: usize,
    /// Length of the first segment as a fraction of `t`; the rest split evenly.
    pub prep_fraction: f64,
    pub restarts: usize,
    /// Initial pulse areas are uniform in `[−init_scale, init_scale]`.
    pub init_scale: f64,
    pub max_init_attempts: usize,
    pub descent: DescentSettings,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            segments: 4,
            prep_fraction: 0.01,
            restarts: 8,
            init_scale: 0.1,
            max_init_attempts: 20,
            descent: DescentSettings::default(),
        }
    }
}

impl OptimizerSettings {
    pub fn validate(&self) -> Result<()> {
        if self.segments == 0 || self.restarts == 0 || self.max_init_attempts == 0 {
            return Err(Error::Argument(
                "segments, restarts and max_init_attempts must be at least 1".into(),
            ));
        }
        ControlAnsatz::prepared_durations(self.segments, 1.0, self.prep_fraction)?;
        if !(self.init_scale > 0.0) {
            return Err(Error::Argument("init_scale must be positive".into()));
        }
        self.descent.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    pub objective: f64,
    pub ansatz: ControlAnsatz,
    pub iterations: usize,
    /// Gradient norm of the log objective over pulse areas at exit.
    pub grad_norm: f64,
    /// Index of the restart that produced this result.
    pub restart: usize,
}

impl OptResult {
    pub fn coefficients(&self) -> &[f64] {
        self.ansatz.coefficients()
    }
}

/// Descent runs on `ln(αᵀF̃⁻¹α)` over pulse areas `c·τ_k`, so the short preparation
/// segment and the long ones share one step size.
fn single_restart(scenario: &Scenario, settings: &OptimizerSettings, seed: u64, restart: usize) -> Result<OptResult> {
    let durations = ControlAnsatz::prepared_durations(settings.segments, scenario.t, settings.prep_fraction)?;
    let rates = |x: &[f64]| -> Vec<f64> {
        x.iter()
            .enumerate()
            .map(|(i, v)| v / durations[i / N_DIRECTIONS])
            .collect()
    };
    let ansatz_of = |x: &[f64]| ControlAnsatz::new(durations.clone(), rates(x));
    let log_objective = |x: &[f64]| {
        ansatz_of(x)
            .and_then(|a| objective_qcrb(&a, scenario))
            .map_or(f64::INFINITY, f64::ln)
    };
    let gradient = |x: &[f64]| -> Vec<f64> {
        let Ok(cache) = ansatz_of(x).and_then(|a| SegmentCache::new(&a, scenario)) else {
            return vec![0.0; x.len()];
        };
        let mut segment = [0.0; N_DIRECTIONS];
        let mut probe = |i: usize, v: f64| {
            let k = i / N_DIRECTIONS;
            for (a, s) in segment.iter_mut().enumerate() {
                *s = x[N_DIRECTIONS * k + a] / durations[k];
            }
            segment[i % N_DIRECTIONS] = v / durations[k];
            cache.objective_with(k, &segment).map_or(f64::INFINITY, f64::ln)
        };
        let f0 = probe(0, x[0]);
        gradient_fd_by(f0, x, settings.descent.fd_step, probe)
    };

    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, restart as u64));
    for _ in 0..settings.max_init_attempts {
        let x0: Vec<f64> = (0..N_DIRECTIONS * settings.segments)
            .map(|_| settings.init_scale * (2.0 * rng.random::<f64>() - 1.0))
            .collect();
        if !log_objective(&x0).is_finite() {
            continue;
        }
        let out = descend_with(log_objective, gradient, &x0, &settings.descent)?;
        let ansatz = ansatz_of(&out.x)?;
        let objective = objective_qcrb(&ansatz, scenario)?;
        debug!(
            "restart {restart}: objective {objective:.6} after {} iterations",
            out.iterations
        );
        return Ok(OptResult {
            objective,
            ansatz,
            iterations: out.iterations,
            grad_norm: out.grad_norm,
            restart,
        });
    }
    Err(Error::NoInformation)
}

/// Best of `settings.restarts` independent descents; ties go to the lower restart index.
pub fn optimize(scenario: &Scenario, settings: &OptimizerSettings, seed: u64) -> Result<OptResult> {
    settings.validate()?;
    let runs: Vec<Result<OptResult>> = (0..settings.restarts)
        .into_par_iter()
        .map(|r| single_restart(scenario, settings, seed, r))
        .collect();
    let mut best: Option<OptResult> = None;
    let mut last_err = None;
    for run in runs {
        match run {
            Ok(r) => {
                if best.as_ref().is_none_or(|b| r.objective < b.objective) {
                    best = Some(r);
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    best.ok_or_else(|| last_err.unwrap_or(Error::NoInformation))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig2Row {
    pub alpha2: f64,
    pub optimized: f64,
    /// `max(¼, α₂²)`.
    pub bound: f64,
    /// `(optimized − bound)/bound`.
    pub gap: f64,
    pub result: OptResult,
}

/// Optimize the asymmetric two-qubit scenario at each `α₂`.
pub fn fig2_sweep(alpha2_values: &[f64], settings: &OptimizerSettings, seed: u64) -> Result<Vec<Fig2Row>> {
    settings.validate()?;
    if let Some(a) = alpha2_values.iter().find(|a| !(**a >= 0.0 && **a <= 1.0)) {
        return Err(Error::Argument(format!("alpha2 = {a} outside [0, 1]")));
    }
    alpha2_values
        .par_iter()
        .enumerate()
        .map(|(i, &alpha2)| {
            let scenario = Scenario::asymmetric(alpha2)?;
            let bound = theorem_floor(&scenario)?;
            let result = optimize(&scenario, settings, derive_seed(seed, i as u64))?;
            Ok(Fig2Row {
                alpha2,
                optimized: result.objective,
                bound,
                gap: (result.objective - bound) / bound,
                result,
            })
        })
        .collect()
}
