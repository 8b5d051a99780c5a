//! End-to-end tests of the binary: file round trips, exit codes, JSON
//! diagnostics, and determinism of the seeded commands.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sparseperm"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

/// Writes the named builtin fixture and returns its path.
fn fixture(dir: &Path, name: &str, n: &str) -> PathBuf {
    let path = format!("{name}.json");
    let out = run(
        dir,
        &["sample", "--n", n, "--builtin", name, "--out", &path],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    dir.join(path)
}

#[test]
fn marginal_recover_round_trip_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let dir = dir.path();
    fixture(dir, "mass-shift-pair", "4");

    let out = run(
        dir,
        &[
            "marginal",
            "--input",
            "mass-shift-pair.json",
            "--shape",
            "3,1",
            "--out",
            "m.json",
        ],
    );
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["d"], 4);

    let out = run(dir, &["recover", "--marginal", "m.json", "--out", "g.json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["status"], "recovered");

    // The recovered function explains the same marginal byte-for-byte.
    let out = run(
        dir,
        &[
            "marginal", "--input", "g.json", "--shape", "3,1", "--out", "m2.json",
        ],
    );
    assert_eq!(code(&out), 0);
    assert_eq!(
        std::fs::read(dir.join("m.json")).unwrap(),
        std::fs::read(dir.join("m2.json")).unwrap()
    );
}

#[test]
fn check_reports_the_conditions_as_json() {
    let dir = tempfile::tempdir().unwrap();
    let dir = dir.path();

    // 1+2=3 refutes value independence.
    fixture(dir, "ambiguous-triple", "4");
    let out = run(
        dir,
        &[
            "check",
            "--input",
            "ambiguous-triple.json",
            "--shape",
            "3,1",
        ],
    );
    assert_eq!(code(&out), 0);
    let report = stdout_json(&out);
    assert_eq!(report["holds"], false);
    assert_eq!(report["linear_independence"]["verdict"], "refuted");
    assert!(report["linear_independence"]["coefficients"].is_array());

    // A single support point always passes.
    std::fs::write(
        dir.join("single.json"),
        r#"{"n": 4, "mode": "exact", "entries": [{"perm": [2,1,3,4], "value": "7"}]}"#,
    )
    .unwrap();
    let out = run(dir, &["check", "--input", "single.json", "--shape", "3,1"]);
    let report = stdout_json(&out);
    assert_eq!(report["holds"], true);
    assert_eq!(report["unique_witness"]["all_witnessed"], true);
}

#[test]
fn aborted_recovery_exits_2_with_a_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let dir = dir.path();
    fixture(dir, "sparser-alternative", "4");
    run(
        dir,
        &[
            "marginal",
            "--input",
            "sparser-alternative.json",
            "--shape",
            "2,2",
            "--out",
            "m.json",
        ],
    );

    let out = run(dir, &["recover", "--marginal", "m.json", "--out", "g.json"]);
    assert_eq!(code(&out), 2);
    let certificate = stdout_json(&out);
    assert!(certificate["stage"].is_string());
    assert!(certificate["detail"].is_string());
    assert!(!dir.join("g.json").exists());
}

#[test]
fn failures_exit_3_and_can_be_json() {
    let dir = tempfile::tempdir().unwrap();
    let dir = dir.path();
    fixture(dir, "twin-marginal", "4");

    // Shape and function dimensions disagree.
    let out = run(
        dir,
        &["check", "--input", "twin-marginal.json", "--shape", "4,1"],
    );
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));

    let out = run(
        dir,
        &[
            "--json-errors",
            "check",
            "--input",
            "twin-marginal.json",
            "--shape",
            "4,1",
        ],
    );
    assert_eq!(code(&out), 3);
    let err: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    assert_eq!(err["error"]["kind"], "dimension-mismatch");

    // Missing file.
    let out = run(
        dir,
        &[
            "--json-errors",
            "check",
            "--input",
            "nope.json",
            "--shape",
            "3,1",
        ],
    );
    assert_eq!(code(&out), 3);
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "io");

    // Randomized commands refuse to run unseeded.
    let out = run(dir, &["sample", "--n", "8", "--k", "3", "--out", "x.json"]);
    assert_eq!(code(&out), 3);

    // Bad analyze arguments.
    let out = run(
        dir,
        &["analyze", "--shape", "3,1", "--epsilon", "1.5", "--T", "10"],
    );
    assert_eq!(code(&out), 3);
}

#[test]
fn sample_is_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let dir = dir.path();
    for (file, seed) in [("a.json", "7"), ("b.json", "7"), ("c.json", "8")] {
        let out = run(
            dir,
            &[
                "sample", "--n", "8", "--k", "5", "--a", "1", "--b", "2", "--seed", seed, "--out",
                file,
            ],
        );
        assert_eq!(code(&out), 0);
    }
    let a = std::fs::read(dir.join("a.json")).unwrap();
    assert_eq!(a, std::fs::read(dir.join("b.json")).unwrap());
    assert_ne!(a, std::fs::read(dir.join("c.json")).unwrap());

    // Integer-valued model round-trips through the loader too.
    let out = run(
        dir,
        &[
            "sample", "--n", "6", "--k", "4", "--t", "100", "--seed", "9", "--out", "i.json",
        ],
    );
    assert_eq!(code(&out), 0);
    let out = run(
        dir,
        &[
            "marginal", "--input", "i.json", "--shape", "5,1", "--out", "im.json",
        ],
    );
    assert_eq!(code(&out), 0);
}

#[test]
fn sweep_csv_is_worker_count_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let dir = dir.path();
    let common = [
        "sweep",
        "--shape",
        "n-1,1",
        "--n",
        "10,20",
        "--schedule",
        "0.5*n*log(n)",
        "--trials",
        "25",
        "--mode",
        "condition1",
        "--seed",
        "42",
    ];
    for (threads, file) in [("1", "one.csv"), ("8", "eight.csv")] {
        let mut args = vec!["--threads", threads];
        args.extend_from_slice(&common);
        args.extend_from_slice(&["--out", file]);
        let out = run(dir, &args);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    let one = std::fs::read_to_string(dir.join("one.csv")).unwrap();
    assert_eq!(one, std::fs::read_to_string(dir.join("eight.csv")).unwrap());
    assert!(one.starts_with("n,shape,K,schedule_tag,trials,successes,rate,seconds,seed\n"));
    assert!(
        one.contains("\"9,1\""),
        "shape column is RFC-4180 quoted: {one}"
    );
}

#[test]
fn oracle_subcommands_report_solutions_and_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let dir = dir.path();
    fixture(dir, "twin-marginal", "4");
    run(
        dir,
        &[
            "marginal",
            "--input",
            "twin-marginal.json",
            "--shape",
            "3,1",
            "--out",
            "m.json",
        ],
    );

    let out = run(
        dir,
        &["oracle", "l0", "--marginal", "m.json", "--kmax", "2"],
    );
    assert_eq!(code(&out), 0);
    let report = stdout_json(&out);
    assert_eq!(report["count"], 2);
    assert_eq!(report["sparsity"], 2);

    let out = run(
        dir,
        &[
            "oracle",
            "l1-witness",
            "--input",
            "twin-marginal.json",
            "--shape",
            "3,1",
            "--out",
            "w.json",
        ],
    );
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["found"], true);
    // The witness is a loadable function with the same marginal.
    let out = run(
        dir,
        &[
            "marginal", "--input", "w.json", "--shape", "3,1", "--out", "wm.json",
        ],
    );
    assert_eq!(code(&out), 0);
    assert_eq!(
        std::fs::read(dir.join("m.json")).unwrap(),
        std::fs::read(dir.join("wm.json")).unwrap()
    );

    // A single-cycle relative permutation has no witness; still exit 0.
    std::fs::write(
        dir.join("pair.json"),
        r#"{"n": 4, "mode": "exact", "entries": [
            {"perm": [1,2,3,4], "value": "1"},
            {"perm": [2,3,4,1], "value": "2"}]}"#,
    )
    .unwrap();
    let out = run(
        dir,
        &[
            "oracle",
            "l1-witness",
            "--input",
            "pair.json",
            "--shape",
            "3,1",
        ],
    );
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["found"], false);
}

#[test]
fn analyze_prints_the_threshold_report() {
    let dir = tempfile::tempdir().unwrap();
    let dir = dir.path();
    let out = run(
        dir,
        &[
            "analyze",
            "--shape",
            "199,1",
            "--n",
            "200",
            "--epsilon",
            "0.5",
            "--T",
            "100",
        ],
    );
    assert_eq!(code(&out), 0);
    let report = stdout_json(&out);
    assert_eq!(report["case"], "n-log-n");
    assert_eq!(report["k_achievable"], 529);
    assert_eq!(report["m_floor"], 200);

    // --n must agree with the shape's part sum.
    let out = run(
        dir,
        &[
            "analyze",
            "--shape",
            "199,1",
            "--n",
            "100",
            "--epsilon",
            "0.5",
            "--T",
            "100",
        ],
    );
    assert_eq!(code(&out), 3);
}

#[test]
fn help_and_version_exit_0() {
    for flag in ["--help", "--version"] {
        let out = bin().arg(flag).output().unwrap();
        assert_eq!(code(&out), 0);
    }
    // Unknown subcommands are argument errors, not certificates.
    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(code(&out), 3);
}
