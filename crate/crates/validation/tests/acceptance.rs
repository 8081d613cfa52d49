//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::path::Path;
use std::time::{Duration, Instant};

use netsense_cli::runner::{execute, Command, Overrides};
use netsense_cli::scenario::parse_scenario_str;
use netsense_core::estimation::{baseline_local, ghz_experiment, known_structure_experiment, protocol_qfi};
use netsense_core::fisher::{classical_fisher, crb_linear, network_heisenberg_bound, qfi_matrix, GeneratorSet};
use netsense_core::optimizer::{fig2_sweep, optimize, OptimizerSettings, Scenario};
use netsense_core::protocols::{
    parity_expectation, run_partial_time_ghz, run_squeezed_ramsey, run_tau_protocol, secrecy_deviation,
    tau_expectation_bruteforce, two_step_exact, ProtocolId, TwoStepSpec,
};
use netsense_core::reparam::{basis_from_rows, divergence_curve, dual_basis, naive_bound, optimal_completion};
use netsense_core::seeds::derive_seed;
use netsense_core::sim::{optimal_twisting, twisting_for_contrast, GateSpec, PureState};
use netsense_core::{NetworkConfig, Result};
use netsense_validation::{random_alpha, random_config, rng, Tally};
use num_complex::Complex64;
use rand::Rng;

const MASTER: u64 = 0x5eed_2024;

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn criterion_1() -> Result<(bool, String)> {
    let start = Instant::now();
    let mut r = rng(derive_seed(MASTER, 1));
    let mut worst = 0.0f64;
    for n in 2..=8 {
        for _ in 0..50 {
            let c = random_config(&mut r, n, 1.0, (0.2, 3.0));
            let f = protocol_qfi(ProtocolId::GhzPartial, &c, 0.0)?.entries;
            let (a, t) = (c.alpha(), c.t());
            for i in 0..n {
                for j in 0..n {
                    worst = worst.max((f[(i, j)] - a[i] * a[j] * t * t).abs());
                }
            }
        }
    }
    let elapsed = start.elapsed();
    Ok((
        worst <= 1e-9 && elapsed < Duration::from_secs(10),
        format!("GHZ QFI = a_i a_j t^2: 350 configs, max entry error {worst:.2e} (tol 1e-9), {}", secs(elapsed)),
    ))
}

fn parity_probabilities(c: &NetworkConfig, q: f64) -> Result<Vec<f64>> {
    let shifted = c.shifted_q(q - c.q())?;
    let p = parity_expectation(&run_partial_time_ghz(&shifted)?)?;
    Ok(vec![(1.0 + p) / 2.0, (1.0 - p) / 2.0])
}

fn criterion_2() -> Result<(bool, String)> {
    let start = Instant::now();
    let mut r = rng(derive_seed(MASTER, 2));
    let mut worst = 0.0f64;
    for k in 0..20 {
        let n = 2 + k % 5;
        let base = random_config(&mut r, n, 0.0, (0.5, 2.0));
        let phase: f64 = r.random_range(0.2..PI - 0.2);
        let c = base.shifted_q(phase / base.t())?;
        let f = classical_fisher(|q| parity_probabilities(&c, q), c.q(), None)?;
        let t2 = c.t() * c.t();
        worst = worst.max((f - t2).abs() / t2);
    }
    let elapsed = start.elapsed();
    Ok((
        worst <= 1e-6 && elapsed < Duration::from_secs(1),
        format!("parity Fisher = t^2 at 20 points: max rel error {worst:.2e} (tol 1e-6), {}", secs(elapsed)),
    ))
}

fn saturation_configs() -> Vec<NetworkConfig> {
    let mut r = rng(derive_seed(MASTER, 3));
    (0..10).map(|k| random_config(&mut r, 2 + k % 5, 0.5, (0.5, 2.0))).collect()
}

fn criterion_3_4() -> Result<((bool, String), (bool, String))> {
    let start = Instant::now();
    let configs = saturation_configs();
    let mut in_window = 0;
    let mut ratios = Vec::new();
    let mut ghz = Vec::new();
    for (k, c) in configs.iter().enumerate() {
        let rep = ghz_experiment(c, 10_000, 200, derive_seed(MASTER, 300 + k as u64))?;
        let s = rep.scaled_variance() * c.t() * c.t();
        ratios.push(s);
        if (1.0..=1.3).contains(&s) {
            in_window += 1;
        }
        ghz.push(rep.scaled_variance());
    }
    let elapsed = start.elapsed();
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(0.0, f64::max);
    let pooled = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let c3 = (
        in_window == configs.len() && elapsed < Duration::from_secs(60),
        format!(
            "GHZ M*Var*t^2 in [1, 1.3]: {in_window}/10 configs, range [{lo:.3}, {hi:.3}], pooled mean {pooled:.3} (per-config sd ~0.10), {}",
            secs(elapsed)
        ),
    );

    let mut worst_sql = 0.0f64;
    let mut worst_ratio = 0.0f64;
    for (k, c) in configs.iter().enumerate() {
        let rep = baseline_local(c, 10_000, 200, derive_seed(MASTER, 400 + k as u64))?;
        let sql = c.alpha_norm_sq() / (c.t() * c.t());
        worst_sql = worst_sql.max((rep.scaled_variance() / sql - 1.0).abs());
        let ratio = rep.scaled_variance() / ghz[k];
        worst_ratio = worst_ratio.max((ratio / c.alpha_norm_sq() - 1.0).abs());
    }
    let c4 = (
        worst_sql <= 0.2 && worst_ratio <= 0.2,
        format!(
            "baseline vs |a|^2/t^2: max rel dev {worst_sql:.3}; baseline/GHZ vs |a|^2: max rel dev {worst_ratio:.3} (tol 0.2)"
        ),
    );
    Ok((c3, c4))
}

fn criterion_5() -> Result<(bool, String)> {
    let start = Instant::now();
    let values: Vec<f64> = (0..=20).map(|i| i as f64 * 0.05).collect();
    let rows = fig2_sweep(&values, &OptimizerSettings::default(), derive_seed(MASTER, 5))?;
    let elapsed = start.elapsed();
    let worst = rows.iter().map(|r| r.gap.abs()).fold(0.0, f64::max);
    let at = rows
        .iter()
        .max_by(|a, b| a.gap.abs().total_cmp(&b.gap.abs()))
        .map(|r| r.alpha2)
        .unwrap_or(0.0);
    Ok((
        worst <= 0.02 && elapsed < Duration::from_secs(600),
        format!(
            "control sweep, 21 points: max gap to max(1/4, a2^2) {:.3}% at a2={at:.2} (tol 2%), {}",
            100.0 * worst,
            secs(elapsed)
        ),
    ))
}

fn criterion_6() -> Result<(bool, String)> {
    let basis = basis_from_rows(&[vec![1.0, 0.5], vec![0.5, -1.0]])?;
    let beta = dual_basis(&basis)?.beta();
    let beta_err = (beta[0] - 0.8).abs().max((beta[1] - 0.4).abs());
    let bound = naive_bound(&beta, 1.0)?;
    let bound_err = (bound - 25.0 / 36.0).abs();
    let mut worst_l1 = 0.0f64;
    let mut r = rng(derive_seed(MASTER, 6));
    let mut alphas = vec![vec![1.0, 0.5]];
    alphas.extend((0..20).map(|k| random_alpha(&mut r, 2 + k % 6)));
    for a in &alphas {
        let l1: f64 = optimal_completion(a)?.beta().iter().map(|b| b.abs()).sum();
        worst_l1 = worst_l1.max((l1 - 1.0).abs());
    }
    Ok((
        beta_err <= 1e-12 && bound_err <= 1e-12 && worst_l1 <= 1e-10,
        format!(
            "beta error {beta_err:.1e}, naive bound {bound:.15} vs 25/36 ({bound_err:.1e}), optimal completion |sum|b|-1| <= {worst_l1:.1e}"
        ),
    ))
}

fn criterion_7() -> Result<(bool, String)> {
    let alpha = [1.0, 0.5];
    let eps: Vec<f64> = (1..=10).map(|k| 10f64.powi(-k)).collect();
    let curve = divergence_curve(alpha, &eps)?;
    let increasing = curve.windows(2).all(|w| w[1].cap > w[0].cap);
    let mut worst_formula = 0.0f64;
    let mut worst_dual = 0.0f64;
    for p in &curve {
        let exact = (1.0 + p.eps + alpha[0] / alpha[1]) / (p.eps * alpha[1]);
        worst_formula = worst_formula.max((p.cap - exact).abs() / exact);
        worst_dual = worst_dual.max((p.dual_seminorm - exact).abs() / exact);
    }
    let last = curve.last().map(|p| p.cap).unwrap_or(0.0);
    Ok((
        curve.len() == eps.len() && increasing && worst_formula <= 1e-15 && worst_dual <= 1e-6 && last > 1e10,
        format!(
            "eps 1e-1..1e-10: increasing={increasing}, cap at 1e-10 = {last:.3e}, formula rel err {worst_formula:.1e}, dual inversion rel err {worst_dual:.1e}"
        ),
    ))
}

fn criterion_8() -> Result<((bool, String), (bool, String))> {
    let mut r = rng(derive_seed(MASTER, 8));
    let mut worst_z = 0.0f64;
    for n in 2..=6 {
        let c = random_config(&mut r, n, 0.5, (0.3, 1.0));
        let run = run_tau_protocol(&c, 100_000, derive_seed(MASTER, 800 + n as u64))?;
        let se = (run.value_variance() / run.shots() as f64).sqrt();
        let exact = tau_expectation_bruteforce(&c)?;
        worst_z = worst_z.max((run.mean - exact).abs() / se);
    }
    let a = (worst_z <= 4.0, format!("tau Monte Carlo vs brute force, n=2..6, 1e5 shots: max |z| {worst_z:.2} (tol 4)"));

    let base = NetworkConfig::new(vec![1.0, -0.6, 0.3], vec![0.4, 0.2, -0.5], 1.0)?;
    let q = base.q();
    let mut residuals = Vec::new();
    for t in [0.02, 0.04, 0.08] {
        let exact = tau_expectation_bruteforce(&base.with_t(t)?)?;
        residuals.push((exact - (1.0 - t * t * q * q)).abs());
    }
    let ratios = [residuals[1] / residuals[0], residuals[2] / residuals[1]];
    let ok = ratios.iter().all(|x| (x / 16.0 - 1.0).abs() <= 0.3);
    let b = (
        ok,
        format!(
            "residual from 1 - t^2 q^2 over t=0.02,0.04,0.08: {:.3e}, {:.3e}, {:.3e}; doubling ratios {:.2}, {:.2} (want 16 +- 30%)",
            residuals[0], residuals[1], residuals[2], ratios[0], ratios[1]
        ),
    );
    Ok((a, b))
}

/// Single-qubit contrasts of the tested one-axis-twisted inputs. The small-angle readout
/// assumes `⟨σˣᵢ⟩ ≈ 1`; the ξ-optimal state (contrast ≈ 0.7) is reported separately.
const CONTRASTS: [f64; 3] = [0.98, 0.95, 0.9];

fn criterion_9() -> Result<(bool, String)> {
    let mut r = rng(derive_seed(MASTER, 9));
    let mut worst = 0.0f64;
    let mut implication_ok = true;
    let mut cases = 0;
    let mut xi_opt_dev = 0.0f64;
    for n in [4, 6, 8] {
        let mut alphas = vec![vec![1.0; n]];
        alphas.extend((0..4).map(|_| random_alpha(&mut r, n)));
        for a in alphas {
            let t = r.random_range(0.5..2.0);
            let c = NetworkConfig::new(a, vec![0.0; n], t)?;
            let predicted = |xi: f64| n as f64 * xi * xi / (t * t);
            let sql = c.alpha_norm_sq() / (t * t);
            let squeezed_enough = |xi: f64| xi <= (c.alpha_norm_sq() / n as f64).sqrt();
            for contrast in CONTRASTS {
                let rec = run_squeezed_ramsey(&c, twisting_for_contrast(n, contrast)?.mu)?;
                worst = worst.max((rec.inferred_variance / predicted(rec.xi) - 1.0).abs());
                if squeezed_enough(rec.xi) && rec.inferred_variance > sql {
                    implication_ok = false;
                }
                cases += 1;
            }
            let rec = run_squeezed_ramsey(&c, optimal_twisting(n)?.mu)?;
            xi_opt_dev = xi_opt_dev.max((rec.inferred_variance / predicted(rec.xi) - 1.0).abs());
        }
    }
    Ok((
        worst <= 0.1 && implication_ok,
        format!(
            "squeezed Ramsey inferred variance vs N xi^2/t^2 over {cases} cases (contrast {CONTRASTS:?}): max rel dev {worst:.3} (tol 0.1); SQL implication holds: {implication_ok}; xi-optimal inputs (not scored): max rel dev {xi_opt_dev:.3}"
        ),
    ))
}

fn criterion_10() -> Result<((bool, String), (bool, String))> {
    let mut r = rng(derive_seed(MASTER, 10));
    let mut cases = 0;
    let mut ineq_fail = 0;
    let mut ineq_fail_same_sign = 0;
    let mut worst_excess = f64::NEG_INFINITY;
    let mut bound_ok = true;
    let mut worst_ratio = 0.0f64;
    let mut xi_opt_ratio = 0.0f64;
    for n in [4, 6, 8] {
        let mut alphas = vec![vec![1.0; n]];
        alphas.extend((0..3).map(|_| random_alpha(&mut r, n)));
        alphas.push((0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect());
        for a in alphas {
            let same_sign = a.iter().all(|x| *x >= 0.0) || a.iter().all(|x| *x <= 0.0);
            let t = r.random_range(0.5..2.0);
            let c = NetworkConfig::new(a.clone(), vec![0.0; n], t)?;
            let cap = |xi: f64| 16.0 * n as f64 * xi * xi / (t * t);
            for contrast in CONTRASTS {
                let mu = twisting_for_contrast(n, contrast)?.mu;
                let ex = two_step_exact(&c, &TwoStepSpec::new(&a, mu)?)?;
                let excess = ex.var_weighted_sigma_y - 4.0 * ex.var_jy;
                worst_excess = worst_excess.max(excess);
                if excess > 1e-9 {
                    ineq_fail += 1;
                    if same_sign {
                        ineq_fail_same_sign += 1;
                    }
                }
                worst_ratio = worst_ratio.max(ex.inferred_variance / cap(ex.xi));
                if ex.inferred_variance > cap(ex.xi) {
                    bound_ok = false;
                }
                cases += 1;
            }
            let ex = two_step_exact(&c, &TwoStepSpec::new(&a, optimal_twisting(n)?.mu)?)?;
            xi_opt_ratio = xi_opt_ratio.max(ex.inferred_variance / cap(ex.xi));
        }
    }
    let a = (
        ineq_fail == 0,
        format!(
            "Var(sum a_i sy_i) <= 4 Var Jy: violated in {ineq_fail}/{cases} cases ({ineq_fail_same_sign} with same-sign weights), max excess {worst_excess:.3e}"
        ),
    );
    let b = (
        bound_ok,
        format!(
            "two-step inferred variance <= 16 N xi^2/t^2 with t/2 per step: max ratio {worst_ratio:.3} over {cases} cases; xi-optimal inputs (not scored): max ratio {xi_opt_ratio:.3}"
        ),
    );
    Ok((a, b))
}

fn criterion_11() -> Result<(bool, String)> {
    let mut r = rng(derive_seed(MASTER, 11));
    let probes = [0.0, 0.3, 0.7, 1.1, 1.9, 2.6];
    let mut worst = 0.0f64;
    let mut subsets = 0;
    for n in 2..=6 {
        let mut a = random_alpha(&mut r, n);
        let mut configs = vec![random_config(&mut r, n, 1.0, (0.5, 2.0))];
        let big = a.iter().position(|x| x.abs() == 1.0).unwrap_or(0);
        a[(big + 1) % n] = 0.0;
        configs.push(NetworkConfig::new(a, vec![0.3; n], 1.0)?);
        for c in &configs {
            for mask in 1u32..(1 << n) - 1 {
                let subset: Vec<usize> = (0..n).filter(|q| mask >> q & 1 == 1).collect();
                worst = worst.max(secrecy_deviation(c, &subset, &probes)?);
                subsets += 1;
            }
        }
    }
    Ok((
        worst <= 1e-12,
        format!("reduced-state deviation over {subsets} proper subsets (n=2..6, incl. a_i = 0): max {worst:.2e} (tol 1e-12)"),
    ))
}

fn criterion_12() -> Result<(bool, String)> {
    let mut r = rng(derive_seed(MASTER, 12));
    let mut worst = 0.0f64;
    for k in 0..3 {
        let n = 3 + k;
        let a = random_alpha(&mut r, n);
        let s: f64 = r.random_range(-0.5..0.5);
        let theta: Vec<f64> = a.iter().map(|x| s * x).collect();
        let t = r.random_range(0.5..2.0);
        let c = NetworkConfig::new(a.clone(), theta, t)?;
        let rep = known_structure_experiment(&c, 10_000, 2000, derive_seed(MASTER, 1200 + k as u64))?;
        let l1: f64 = a.iter().map(|x| x.abs()).sum();
        let target = c.alpha_norm_sq().powi(2) / (t * t * l1 * l1);
        worst = worst.max((rep.scaled_variance() / target - 1.0).abs());
    }
    Ok((
        worst <= 0.1,
        format!("known-structure M*Var vs |a|^4/(t^2 (sum|a|)^2), M=1e4, R=2000, 3 configs: max rel dev {worst:.3} (tol 0.1)"),
    ))
}

fn random_state<R: Rng>(r: &mut R, n: usize) -> Result<PureState> {
    let amps = (0..1 << n)
        .map(|_| Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
        .collect();
    PureState::normalized(n, amps)
}

fn fidelity_qfi_oracle(s: &PureState, i: usize, t: f64) -> Result<f64> {
    let delta = 1e-4;
    let mut theta = vec![0.0; s.n_qubits()];
    theta[i] = delta;
    let mut moved = s.clone();
    moved.evolve_field(&theta, t)?;
    Ok(8.0 * (1.0 - s.inner(&moved)?.norm()) / (delta * delta))
}

fn fig2_scenario() -> &'static str {
    r#"{"name": "rerun", "seed": 3,
        "optimizer": {"restarts": 3, "descent": {"max_iters": 40}},
        "sweep": {"start": 0.2, "stop": 0.8, "step": 0.3}}"#
}

fn run_scenario_twice(command: Command, text: &str) -> anyhow::Result<bool> {
    let scenario = parse_scenario_str(text, Path::new("rerun.json"))?;
    let overrides = Overrides::default();
    let mut outputs = Vec::new();
    for threads in [1, 3] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
        outputs.push(pool.install(|| execute(command, &scenario, &overrides))?);
    }
    Ok(outputs[0] == outputs[1])
}

fn criterion_13() -> anyhow::Result<(bool, String)> {
    let mut r = rng(derive_seed(MASTER, 13));
    let mut failed = Vec::new();

    let mut norm_err = 0.0f64;
    for _ in 0..50 {
        let n = r.random_range(2..=8);
        let mut s = random_state(&mut r, n)?;
        for _ in 0..20 {
            let target = r.random_range(0..n);
            match r.random_range(0..4) {
                0 => s.apply_gate(&GateSpec::PauliX { target })?,
                1 => s.apply_gate(&GateSpec::RotationZ { target, angle: r.random_range(-PI..PI) })?,
                2 => s.apply_gate(&GateSpec::CollectiveRotationX { angle: r.random_range(-PI..PI) })?,
                _ => {
                    let theta: Vec<f64> = (0..n).map(|_| r.random_range(-2.0..2.0)).collect();
                    s.evolve_field(&theta, r.random_range(0.0..2.0))?
                }
            }
        }
        norm_err = norm_err.max((s.norm() - 1.0).abs());
    }
    if norm_err > 1e-12 {
        failed.push("norm preservation");
    }

    let mut chain_ok = true;
    for _ in 0..30 {
        let n = r.random_range(2..=6);
        let c = random_config(&mut r, n, 1.0, (0.5, 2.0));
        let gens = GeneratorSet::half_z(n)?;
        let floor = network_heisenberg_bound(c.alpha(), &gens, c.t())?;
        for state in [run_partial_time_ghz(&c)?, random_state(&mut r, n)?] {
            let f = qfi_matrix(&state, &gens, c.t())?;
            let crb = crb_linear(c.alpha(), &f).unwrap_or(f64::INFINITY);
            chain_ok &= crb >= floor - 1e-10;
        }
    }
    if !chain_ok {
        failed.push("bound chain");
    }

    let mut bio = 0.0f64;
    for _ in 0..50 {
        let n = r.random_range(2..=8);
        let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| r.random_range(-1.0..1.0)).collect()).collect();
        if let Ok(b) = dual_basis(&basis_from_rows(&rows)?) {
            bio = bio.max(b.biorthogonality_error());
        }
    }
    if bio > 1e-9 {
        failed.push("biorthogonality");
    }

    let mut qfi_dev = 0.0f64;
    let gens = GeneratorSet::half_z(2)?;
    for _ in 0..20 {
        let s = random_state(&mut r, 2)?;
        let f = qfi_matrix(&s, &gens, 1.0)?.entries;
        for i in 0..2 {
            let oracle = fidelity_qfi_oracle(&s, i, 1.0)?;
            if f[(i, i)] > 1e-3 {
                qfi_dev = qfi_dev.max((oracle - f[(i, i)]).abs() / f[(i, i)]);
            }
        }
    }
    if qfi_dev > 1e-4 {
        failed.push("QFI finite-difference cross-check");
    }

    let scenario = Scenario::asymmetric(0.6)?;
    let mut settings = OptimizerSettings::default();
    settings.restarts = 3;
    settings.descent.max_iters = 60;
    let first = optimize(&scenario, &settings, 17)?;
    let second = optimize(&scenario, &settings, 17)?;
    if first != second {
        failed.push("restart determinism");
    }

    let run = r#"{"name": "rerun", "protocol": "ghz-partial", "seed": 11, "shots": 500, "repetitions": 8,
                  "network": {"alpha": [1.0, -0.4, 0.7], "theta": [0.2, 0.1, -0.3], "t": 1.0}}"#;
    let identical = run_scenario_twice(Command::Run, run)? && run_scenario_twice(Command::Fig2Sweep, fig2_scenario())?;
    if !identical {
        failed.push("byte-identical reruns");
    }

    Ok((
        failed.is_empty(),
        if failed.is_empty() {
            format!(
                "norm err {norm_err:.1e}, bound chain ok, biorthogonality {bio:.1e}, QFI FD rel dev {qfi_dev:.1e}, restarts deterministic, reruns byte-identical across 1 and 3 threads"
            )
        } else {
            format!("failed: {}", failed.join(", "))
        },
    ))
}

fn report(tally: &mut Tally, id: &str, outcome: Result<(bool, String)>) {
    match outcome {
        Ok((pass, detail)) => tally.record(id, pass, detail),
        Err(e) => tally.record(id, false, format!("error: {e}")),
    }
}

fn report_pair(tally: &mut Tally, ids: [&str; 2], outcome: Result<((bool, String), (bool, String))>) {
    match outcome {
        Ok((a, b)) => {
            tally.record(ids[0], a.0, a.1);
            tally.record(ids[1], b.0, b.1);
        }
        Err(e) => {
            for id in ids {
                tally.record(id, false, format!("error: {e}"));
            }
        }
    }
}

fn main() {
    let mut tally = Tally::default();
    report(&mut tally, "1", criterion_1());
    report(&mut tally, "2", criterion_2());
    report_pair(&mut tally, ["3", "4"], criterion_3_4());
    report(&mut tally, "5", criterion_5());
    report(&mut tally, "6", criterion_6());
    report(&mut tally, "7", criterion_7());
    report_pair(&mut tally, ["8a", "8b"], criterion_8());
    report(&mut tally, "9", criterion_9());
    report_pair(&mut tally, ["10a", "10b"], criterion_10());
    report(&mut tally, "11", criterion_11());
    report(&mut tally, "12", criterion_12());
    match criterion_13() {
        Ok((pass, detail)) => tally.record("13", pass, detail),
        Err(e) => tally.record("13", false, format!("error: {e:#}")),
    }
    println!("acceptance: {} of {} checks passed", tally.len() - tally.failures(), tally.len());
    if tally.failures() > 0 {
        std::process::exit(1);
    }
}
