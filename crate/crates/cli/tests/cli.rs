use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const GHZ: &str = r#"{
  "name": "ghz",
  "protocol": "ghz-partial",
  "network": {"alpha": [1.0, -0.5, 0.25], "theta": [0.3, 0.1, -0.2], "t": 1.0},
  "shots": 400,
  "repetitions": 12,
  "seed": 5
}"#;

fn netsense(args: &[&str], seed_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_netsense"));
    cmd.args(args).env_remove("NETSENSE_SEED");
    if let Some(s) = seed_env {
        cmd.env("NETSENSE_SEED", s);
    }
    cmd.output().expect("binary runs")
}

fn write_scenario(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn run_into(scenario: &str, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["run", "--scenario", scenario, "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    netsense(&args, None)
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let s = write_scenario(tmp.path(), "ghz.json", GHZ);
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    assert!(run_into(&s, &a, &["--threads", "1"]).status.success());
    assert!(run_into(&s, &b, &["--threads", "4"]).status.success());
    let fa = files(&a);
    assert_eq!(
        fa.iter().map(|f| f.0.as_str()).collect::<Vec<_>>(),
        ["bounds.csv", "metadata.json", "results.csv"]
    );
    assert_eq!(fa, files(&b));
}

#[test]
fn sweep_reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let s = write_scenario(
        tmp.path(),
        "fig2.json",
        r#"{"name": "fig2", "seed": 1, "optimizer": {"restarts": 2, "descent": {"max_iters": 30}},
            "sweep": {"start": 0.0, "stop": 1.0, "step": 0.5}}"#,
    );
    let mut outs = Vec::new();
    for (dir, threads) in [("a", "1"), ("b", "3")] {
        let out = tmp.path().join(dir);
        let o = netsense(&["fig2-sweep", "--scenario", &s, "--out", out.to_str().unwrap(), "--threads", threads], None);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        outs.push(files(&out));
    }
    assert_eq!(outs[0], outs[1]);
    let results = String::from_utf8(outs[0].iter().find(|f| f.0 == "results.csv").unwrap().1.clone()).unwrap();
    assert!(results.starts_with("# netsense fig2 v1\nalpha2,optimized,bound,gap,iterations,grad_norm,restart\n"));
    assert_eq!(results.lines().count(), 2 + 3);
}

#[test]
fn seed_precedence_is_flag_then_environment_then_file() {
    let tmp = tempfile::tempdir().unwrap();
    let s = write_scenario(tmp.path(), "ghz.json", GHZ);
    let meta = |dir: &str, args: &[&str], env: Option<&str>| -> serde_json::Value {
        let out = tmp.path().join(dir);
        let mut full = vec!["run", "--scenario", s.as_str(), "--out", out.to_str().unwrap()];
        full.extend_from_slice(args);
        assert!(netsense(&full, env).status.success());
        serde_json::from_slice(&fs::read(out.join("metadata.json")).unwrap()).unwrap()
    };
    let file = meta("file", &[], None);
    assert_eq!((file["seed"].as_u64(), file["seed_source"].as_str()), (Some(5), Some("scenario")));
    let env = meta("env", &[], Some("9"));
    assert_eq!((env["seed"].as_u64(), env["seed_source"].as_str()), (Some(9), Some("environment")));
    let flag = meta("flag", &["--seed", "13"], Some("9"));
    assert_eq!((flag["seed"].as_u64(), flag["seed_source"].as_str()), (Some(13), Some("command-line")));
}

#[test]
fn invalid_scenarios_write_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    let cases = [
        ("typo.json", GHZ.replace("\"shots\"", "\"shotz\"")),
        ("alpha.json", GHZ.replace("[1.0, -0.5, 0.25]", "[0.5, -0.5, 0.25]")),
        ("missing.json", r#"{"name": "x", "protocol": "ghz-partial", "shots": 10, "repetitions": 3}"#.to_string()),
        ("syntax.json", "{\"name\": ".to_string()),
    ];
    for (name, text) in cases {
        let s = write_scenario(tmp.path(), name, &text);
        let out = tmp.path().join(format!("out-{name}"));
        let o = run_into(&s, &out, &[]);
        assert!(!o.status.success(), "{name} should fail");
        assert!(!String::from_utf8_lossy(&o.stderr).is_empty());
        assert!(!out.exists(), "{name} left output behind");
    }
    let s = write_scenario(tmp.path(), "ok.json", GHZ);
    let out = tmp.path().join("out-reps");
    assert!(!run_into(&s, &out, &["--reps", "1"]).status.success());
    assert!(!out.exists());
}

#[test]
fn parse_errors_name_the_line() {
    let tmp = tempfile::tempdir().unwrap();
    let s = write_scenario(tmp.path(), "typo.json", &GHZ.replace("\"seed\"", "\"sed\""));
    let o = run_into(&s, &tmp.path().join("o"), &[]);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("typo.json:7:"), "{err}");
    assert!(err.contains("sed"), "{err}");
}

#[test]
fn bounds_prints_its_table() {
    let tmp = tempfile::tempdir().unwrap();
    let s = write_scenario(tmp.path(), "ghz.json", GHZ);
    let out = tmp.path().join("b");
    let o = netsense(&["bounds", "--scenario", &s, "--out", out.to_str().unwrap()], None);
    assert!(o.status.success());
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.starts_with("# netsense bounds v1\nbound,value\n"));
    assert_eq!(stdout.as_bytes(), fs::read(out.join("bounds.csv")).unwrap().as_slice());
    let network = stdout.lines().find(|l| l.starts_with("network_heisenberg,")).unwrap();
    assert_eq!(network, "network_heisenberg,1");
}

#[test]
fn secrecy_and_tau_check_produce_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let s = write_scenario(tmp.path(), "ghz.json", GHZ);
    let out = tmp.path().join("s");
    assert!(netsense(&["secrecy", "--scenario", &s, "--out", out.to_str().unwrap()], None).status.success());
    let text = fs::read_to_string(out.join("results.csv")).unwrap();
    assert_eq!(text.lines().count(), 2 + 6);
    assert!(text.lines().skip(2).all(|l| l.ends_with(",true")), "{text}");

    let tau = write_scenario(tmp.path(), "tau.json", &GHZ.replace("ghz-partial", "tau-randomized"));
    let out = tmp.path().join("t");
    let o = netsense(&["tau-check", "--scenario", &tau, "--out", out.to_str().unwrap(), "--reps", "2"], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(out.join("results.csv")).unwrap();
    assert!(text.starts_with("# netsense tau-check v1\nrepetition,mc_mean,mc_stderr,bruteforce,second_order,z\n"));
}
