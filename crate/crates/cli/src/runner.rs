//! Subcommand execution. Each command returns its artifacts without touching the disk.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use netsense_core::estimation::{
    baseline_local, compare_to_bounds, ghz_experiment, known_structure_experiment, protocol_qfi,
    squeezed_experiment, two_step_experiment, EstimatorReport, RegimeFlags, OPERATING_MARGIN,
};
use netsense_core::fisher::{BoundsReport, GeneratorSet, KERNEL_RTOL, OVERLAP_RTOL, SATURATION_FACTOR};
use netsense_core::network::WEIGHT_TOL;
use netsense_core::optimizer::{direction_labels, fig2_sweep, OptimizerSettings, FIDUCIAL_THETA, N_DIRECTIONS};
use netsense_core::protocols::{
    run_tau_protocol, secrecy_deviation, tau_expectation_bruteforce, ProtocolId, SMALL_SIGNAL_LIMIT,
};
use netsense_core::reparam::MAX_CONDITION;
use netsense_core::seeds::derive_seed;
use netsense_core::sim::optimal_twisting;
use netsense_core::NetworkConfig;
use serde::Serialize;

use crate::output::{csv_table, flag, json_record, num, Artifact, SCHEMA_VERSION};
use crate::scenario::ScenarioFile;

/// Environment variable that overrides the master seed of any scenario.
pub const SEED_ENV: &str = "NETSENSE_SEED";

/// Secrecy probes: offsets added to `q`.
const DEFAULT_SECRECY_PROBES: [f64; 6] = [0.0, 0.3, 0.7, 1.1, 1.9, 2.6];
/// Above this many qubits a secrecy run must name its subset.
const MAX_SUBSET_ENUMERATION: usize = 8;
pub const SECRECY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Run,
    Fig2Sweep,
    Bounds,
    Secrecy,
    TauCheck,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Run => "run",
            Command::Fig2Sweep => "fig2-sweep",
            Command::Bounds => "bounds",
            Command::Secrecy => "secrecy",
            Command::TauCheck => "tau-check",
        }
    }
}

/// Command-line values that take precedence over the scenario file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub shots: Option<usize>,
    pub repetitions: Option<usize>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeedSource {
    CommandLine,
    Environment,
    Scenario,
    Default,
}

/// Command line, then `NETSENSE_SEED`, then the scenario, then 0.
pub fn resolve_seed(cli: Option<u64>, scenario: Option<u64>) -> Result<(u64, SeedSource)> {
    if let Some(s) = cli {
        return Ok((s, SeedSource::CommandLine));
    }
    if let Ok(v) = std::env::var(SEED_ENV) {
        let s = v
            .trim()
            .parse()
            .with_context(|| format!("{SEED_ENV}={v:?} is not an unsigned integer"))?;
        return Ok((s, SeedSource::Environment));
    }
    Ok(match scenario {
        Some(s) => (s, SeedSource::Scenario),
        None => (0, SeedSource::Default),
    })
}

#[derive(Debug, Clone, Serialize)]
struct Constants {
    kernel_rtol: f64,
    overlap_rtol: f64,
    saturation_factor: f64,
    operating_margin: f64,
    small_signal_limit: f64,
    fiducial_theta: [f64; 2],
    max_condition: f64,
    weight_tol: f64,
    secrecy_tolerance: f64,
}

impl Constants {
    fn current() -> Self {
        Self {
            kernel_rtol: KERNEL_RTOL,
            overlap_rtol: OVERLAP_RTOL,
            saturation_factor: SATURATION_FACTOR,
            operating_margin: OPERATING_MARGIN,
            small_signal_limit: SMALL_SIGNAL_LIMIT,
            fiducial_theta: FIDUCIAL_THETA,
            max_condition: MAX_CONDITION,
            weight_tol: WEIGHT_TOL,
            secrecy_tolerance: SECRECY_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct Metadata {
    schema: String,
    tool: &'static str,
    version: &'static str,
    scenario: String,
    command: &'static str,
    seed: u64,
    seed_source: SeedSource,
    protocol: Option<ProtocolId>,
    shots: Option<usize>,
    repetitions: Option<usize>,
    mu: Option<f64>,
    optimizer: Option<OptimizerSettings>,
    flags: Option<RegimeFlags>,
    constants: Constants,
}

struct RunContext<'a> {
    scenario: &'a ScenarioFile,
    command: Command,
    seed: u64,
    seed_source: SeedSource,
    shots: Option<usize>,
    repetitions: Option<usize>,
}

impl RunContext<'_> {
    fn shots(&self) -> Result<usize> {
        match self.shots {
            Some(0) => bail!("--shots must be at least 1"),
            Some(s) => Ok(s),
            None => Ok(self.scenario.shots()?),
        }
    }

    fn repetitions(&self) -> Result<usize> {
        match self.repetitions {
            Some(r) if r < 2 => bail!("--reps must be at least 2"),
            Some(r) => Ok(r),
            None => Ok(self.scenario.repetitions()?),
        }
    }

    fn metadata(&self) -> Metadata {
        Metadata {
            schema: format!("netsense metadata v{SCHEMA_VERSION}"),
            tool: "netsense",
            version: env!("CARGO_PKG_VERSION"),
            scenario: self.scenario.name.clone(),
            command: self.command.as_str(),
            seed: self.seed,
            seed_source: self.seed_source,
            protocol: self.scenario.protocol,
            shots: self.shots.or(self.scenario.shots),
            repetitions: self.repetitions.or(self.scenario.repetitions),
            mu: self.scenario.mu,
            optimizer: None,
            flags: None,
            constants: Constants::current(),
        }
    }
}

fn artifact(name: &str, contents: Vec<u8>) -> Artifact {
    Artifact {
        name: name.to_string(),
        contents,
    }
}

/// Everything the command would write, in file order.
pub fn execute(command: Command, scenario: &ScenarioFile, overrides: &Overrides) -> Result<Vec<Artifact>> {
    let (seed, seed_source) = resolve_seed(overrides.seed, scenario.seed)?;
    let ctx = RunContext {
        scenario,
        command,
        seed,
        seed_source,
        shots: overrides.shots,
        repetitions: overrides.repetitions,
    };
    let context = || format!("scenario {:?} ({})", scenario.name, command.as_str());
    match command {
        Command::Run => run(&ctx),
        Command::Fig2Sweep => fig2(&ctx),
        Command::Bounds => bounds(&ctx),
        Command::Secrecy => secrecy(&ctx),
        Command::TauCheck => tau_check(&ctx),
    }
    .with_context(context)
}

fn squeezing(ctx: &RunContext, n: usize) -> Result<f64> {
    Ok(match ctx.scenario.mu {
        Some(mu) => mu,
        None => optimal_twisting(n)?.mu,
    })
}

fn run(ctx: &RunContext) -> Result<Vec<Artifact>> {
    let protocol = ctx.scenario.protocol()?;
    if protocol == ProtocolId::TauRandomized {
        return tau_check(ctx);
    }
    let config = ctx.scenario.network()?;
    let shots = ctx.shots()?;
    let reps = ctx.repetitions()?;
    let mut mu = None;
    let report = match protocol {
        ProtocolId::GhzPartial => ghz_experiment(config, shots, reps, ctx.seed)?,
        ProtocolId::Baseline => baseline_local(config, shots, reps, ctx.seed)?,
        ProtocolId::KnownStructure => known_structure_experiment(config, shots, reps, ctx.seed)?,
        ProtocolId::SqueezedRamsey => {
            let m = squeezing(ctx, config.n())?;
            mu = Some(m);
            squeezed_experiment(config, m, shots, reps, ctx.seed)?
        }
        ProtocolId::TwoStepSqueezed => {
            let m = squeezing(ctx, config.n())?;
            mu = Some(m);
            two_step_experiment(config, m, shots, reps, ctx.seed)?
        }
        ProtocolId::TauRandomized => unreachable!("dispatched above"),
    };
    let mut meta = ctx.metadata();
    meta.mu = mu;
    meta.flags = Some(report.flags);
    Ok(vec![
        artifact("results.csv", results_table(&report)?),
        artifact("bounds.csv", bounds_table(&report)?),
        artifact("metadata.json", json_record(&meta)?),
    ])
}

fn results_table(report: &EstimatorReport) -> Result<Vec<u8>> {
    let header = [
        "kind",
        "repetition",
        "estimate",
        "truth",
        "empirical_variance",
        "scaled_variance",
        "bias",
        "standard_error",
        "predicted",
    ];
    let blank = String::new;
    let mut rows: Vec<Vec<String>> = report
        .estimates
        .iter()
        .enumerate()
        .map(|(r, e)| {
            vec![
                "repetition".into(),
                r.to_string(),
                num(*e),
                num(report.truth),
                blank(),
                blank(),
                blank(),
                blank(),
                blank(),
            ]
        })
        .collect();
    rows.push(vec![
        "summary".into(),
        blank(),
        num(report.mean),
        num(report.truth),
        num(report.empirical_variance),
        num(report.scaled_variance()),
        num(report.bias),
        num(report.standard_error()),
        num(report.predicted),
    ]);
    csv_table(&format!("results {}", report.protocol), &header, &rows)
}

fn bounds_table(report: &EstimatorReport) -> Result<Vec<u8>> {
    let cmp = compare_to_bounds(report);
    let empirical = cmp.bounds.empirical.expect("filled by compare_to_bounds");
    let rows: Vec<Vec<String>> = cmp
        .bounds
        .entries()
        .iter()
        .zip(&cmp.saturated)
        .map(|((name, value), (_, sat))| {
            vec![
                name.to_string(),
                num(*value),
                num(empirical),
                if *sat { "SATURATES".into() } else { String::new() },
            ]
        })
        .collect();
    csv_table("bounds", &["bound", "value", "empirical", "status"], &rows)
}

fn plain_bounds_table(report: &BoundsReport) -> Result<Vec<u8>> {
    let rows: Vec<Vec<String>> = report
        .entries()
        .iter()
        .map(|(name, value)| vec![name.to_string(), num(*value)])
        .collect();
    csv_table("bounds", &["bound", "value"], &rows)
}

fn fig2(ctx: &RunContext) -> Result<Vec<Artifact>> {
    let settings = ctx.scenario.optimizer;
    let values = ctx.scenario.sweep.values();
    let rows = fig2_sweep(&values, &settings, ctx.seed)?;
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                num(r.alpha2),
                num(r.optimized),
                num(r.bound),
                num(r.gap),
                r.result.iterations.to_string(),
                num(r.result.grad_norm),
                r.result.restart.to_string(),
            ]
        })
        .collect();
    let labels = direction_labels();
    let mut controls = Vec::new();
    for r in &rows {
        let a = &r.result.ansatz;
        for k in 0..a.segments() {
            for (d, c) in a.segment(k).iter().enumerate() {
                controls.push(vec![
                    num(r.alpha2),
                    k.to_string(),
                    num(a.durations()[k]),
                    labels[d].clone(),
                    num(*c),
                ]);
            }
        }
    }
    debug_assert_eq!(labels.len(), N_DIRECTIONS);
    let mut meta = ctx.metadata();
    meta.optimizer = Some(settings);
    Ok(vec![
        artifact(
            "results.csv",
            csv_table(
                "fig2",
                &["alpha2", "optimized", "bound", "gap", "iterations", "grad_norm", "restart"],
                &table,
            )?,
        ),
        artifact(
            "controls.csv",
            csv_table("controls", &["alpha2", "segment", "duration", "direction", "coefficient"], &controls)?,
        ),
        artifact("metadata.json", json_record(&meta)?),
    ])
}

/// Bounds of the protocol named in the scenario, or of the partial-time GHZ probe.
fn bounds(ctx: &RunContext) -> Result<Vec<Artifact>> {
    let config = ctx.scenario.network()?;
    let protocol = match ctx.scenario.protocol {
        None | Some(ProtocolId::TauRandomized) => ProtocolId::GhzPartial,
        Some(p) => p,
    };
    let mu = match protocol {
        ProtocolId::SqueezedRamsey | ProtocolId::TwoStepSqueezed => squeezing(ctx, config.n())?,
        _ => 0.0,
    };
    let qfi = protocol_qfi(protocol, config, mu)?;
    let report = BoundsReport::new(config, &qfi, &GeneratorSet::half_z(config.n())?)?;
    Ok(vec![
        artifact("bounds.csv", plain_bounds_table(&report)?),
        artifact("metadata.json", json_record(&ctx.metadata())?),
    ])
}

fn proper_subsets(n: usize) -> Vec<Vec<usize>> {
    (1..(1u32 << n) - 1)
        .map(|mask| (0..n).filter(|&q| mask >> q & 1 == 1).collect())
        .collect()
}

fn secrecy(ctx: &RunContext) -> Result<Vec<Artifact>> {
    let config = ctx.scenario.network()?;
    let section = ctx.scenario.secrecy.as_ref();
    let probes = section
        .and_then(|s| s.probes.clone())
        .unwrap_or_else(|| DEFAULT_SECRECY_PROBES.to_vec());
    let subsets = match section.and_then(|s| s.subset.clone()) {
        Some(s) => vec![s],
        None if config.n() <= MAX_SUBSET_ENUMERATION => proper_subsets(config.n()),
        None => bail!(
            "networks above {MAX_SUBSET_ENUMERATION} qubits need an explicit secrecy.subset"
        ),
    };
    let mut rows = Vec::with_capacity(subsets.len());
    for subset in &subsets {
        let dev = secrecy_deviation(config, subset, &probes)?;
        let label: Vec<String> = subset.iter().map(|q| q.to_string()).collect();
        rows.push(vec![
            label.join(" "),
            probes.len().to_string(),
            num(dev),
            flag(dev <= SECRECY_TOLERANCE),
        ]);
    }
    Ok(vec![
        artifact(
            "results.csv",
            csv_table("secrecy", &["subset", "probes", "max_deviation", "secret"], &rows)?,
        ),
        artifact("metadata.json", json_record(&ctx.metadata())?),
    ])
}

fn tau_check(ctx: &RunContext) -> Result<Vec<Artifact>> {
    let config: &NetworkConfig = ctx.scenario.network()?;
    let shots = ctx.shots()?;
    let reps = match ctx.repetitions {
        Some(r) => r,
        None => ctx.scenario.repetitions.unwrap_or(1),
    };
    if reps == 0 {
        bail!("--reps must be at least 1");
    }
    let exact = tau_expectation_bruteforce(config)?;
    let second_order = 1.0 - 0.5 * (config.t() * config.q()).powi(2);
    let mut rows = Vec::with_capacity(reps);
    let mut regime_warning = false;
    for r in 0..reps {
        let run = run_tau_protocol(config, shots, derive_seed(ctx.seed, r as u64))?;
        regime_warning |= run.regime_warning;
        let se = (run.value_variance() / shots as f64).sqrt();
        let z = if se > 0.0 { (run.mean - exact) / se } else { 0.0 };
        rows.push(vec![
            r.to_string(),
            num(run.mean),
            num(se),
            num(exact),
            num(second_order),
            num(z),
        ]);
    }
    let mut meta = ctx.metadata();
    meta.protocol = Some(ProtocolId::TauRandomized);
    meta.flags = Some(RegimeFlags {
        clamped: 0,
        regime_warning,
    });
    Ok(vec![
        artifact(
            "results.csv",
            csv_table(
                "tau-check",
                &["repetition", "mc_mean", "mc_stderr", "bruteforce", "second_order", "z"],
                &rows,
            )?,
        ),
        artifact("metadata.json", json_record(&meta)?),
    ])
}
