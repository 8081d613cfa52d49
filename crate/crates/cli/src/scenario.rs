//! Scenario files: JSON with a fixed set of keys, validated before anything runs.

use std::path::{Path, PathBuf};

use netsense_core::optimizer::OptimizerSettings;
use netsense_core::protocols::ProtocolId;
use netsense_core::NetworkConfig;
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: invalid {field}: {message}")]
    Invalid {
        path: PathBuf,
        field: &'static str,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSection {
    pub alpha: Vec<f64>,
    pub theta: Vec<f64>,
    pub t: f64,
}

/// `α₂` grid `start, start + step, …, stop` for the control-optimization sweep.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            start: 0.0,
            stop: 1.0,
            step: 0.05,
        }
    }
}

impl SweepSection {
    pub fn values(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=count).map(|k| self.start + k as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SecrecySection {
    /// Qubits held by the eavesdropper; all proper subsets when absent.
    pub subset: Option<Vec<usize>>,
    /// Offsets of `q` to compare reduced states at.
    pub probes: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: String,
    protocol: Option<ProtocolId>,
    network: Option<NetworkSection>,
    shots: Option<usize>,
    repetitions: Option<usize>,
    seed: Option<u64>,
    /// One-axis-twisting strength for squeezed protocols.
    mu: Option<f64>,
    optimizer: Option<OptimizerSettings>,
    sweep: Option<SweepSection>,
    secrecy: Option<SecrecySection>,
    output: Option<PathBuf>,
}

/// A parsed scenario. Which sections are required depends on the subcommand; see
/// [`ScenarioFile::network`] and friends.
#[derive(Debug, Clone)]
pub struct ScenarioFile {
    pub path: PathBuf,
    pub name: String,
    pub protocol: Option<ProtocolId>,
    pub network: Option<NetworkConfig>,
    pub shots: Option<usize>,
    pub repetitions: Option<usize>,
    pub seed: Option<u64>,
    pub mu: Option<f64>,
    pub optimizer: OptimizerSettings,
    pub sweep: SweepSection,
    pub secrecy: Option<SecrecySection>,
    pub output: Option<PathBuf>,
}

pub fn parse_scenario(path: &Path) -> Result<ScenarioFile, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenario_str(&text, path)
}

pub fn parse_scenario_str(text: &str, path: &Path) -> Result<ScenarioFile, ScenarioError> {
    let raw: RawScenario = serde_json::from_str(text).map_err(|e| ScenarioError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: strip_location(&e.to_string()),
    })?;
    let invalid = |field: &'static str, message: String| ScenarioError::Invalid {
        path: path.to_path_buf(),
        field,
        message,
    };
    let network = raw
        .network
        .map(|n| NetworkConfig::new(n.alpha, n.theta, n.t))
        .transpose()
        .map_err(|e| invalid("network", e.to_string()))?;
    if raw.shots == Some(0) {
        return Err(invalid("shots", "must be at least 1".into()));
    }
    if matches!(raw.repetitions, Some(r) if r < 2) {
        return Err(invalid("repetitions", "must be at least 2".into()));
    }
    if let Some(mu) = raw.mu {
        if !(mu >= 0.0 && mu.is_finite()) {
            return Err(invalid("mu", format!("must be finite and >= 0, got {mu}")));
        }
    }
    let optimizer = raw.optimizer.unwrap_or_default();
    optimizer.validate().map_err(|e| invalid("optimizer", e.to_string()))?;
    let sweep = raw.sweep.unwrap_or_default();
    if !(sweep.step > 0.0) || !(sweep.start >= 0.0) || !(sweep.stop <= 1.0) || sweep.start > sweep.stop {
        return Err(invalid(
            "sweep",
            "need 0 <= start <= stop <= 1 and step > 0".into(),
        ));
    }
    if let (Some(sec), Some(net)) = (&raw.secrecy, &network) {
        if let Some(subset) = &sec.subset {
            if subset.is_empty() || subset.len() >= net.n() || subset.iter().any(|&q| q >= net.n()) {
                return Err(invalid(
                    "secrecy",
                    format!("subset must be a proper nonempty subset of 0..{}", net.n()),
                ));
            }
        }
    }
    Ok(ScenarioFile {
        path: path.to_path_buf(),
        name: raw.name,
        protocol: raw.protocol,
        network,
        shots: raw.shots,
        repetitions: raw.repetitions,
        seed: raw.seed,
        mu: raw.mu,
        optimizer,
        sweep,
        secrecy: raw.secrecy,
        output: raw.output,
    })
}

/// serde_json appends " at line L column C"; the error already carries both.
fn strip_location(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

impl ScenarioFile {
    fn missing(&self, field: &'static str) -> ScenarioError {
        ScenarioError::Invalid {
            path: self.path.clone(),
            field,
            message: "required by this subcommand".into(),
        }
    }

    pub fn network(&self) -> Result<&NetworkConfig, ScenarioError> {
        self.network.as_ref().ok_or_else(|| self.missing("network"))
    }

    pub fn protocol(&self) -> Result<ProtocolId, ScenarioError> {
        self.protocol.ok_or_else(|| self.missing("protocol"))
    }

    pub fn shots(&self) -> Result<usize, ScenarioError> {
        self.shots.ok_or_else(|| self.missing("shots"))
    }

    pub fn repetitions(&self) -> Result<usize, ScenarioError> {
        self.repetitions.ok_or_else(|| self.missing("repetitions"))
    }
}
