//! CLI acceptance criterion, printed in the same one-line format as the core
//! suite (run with `--nocapture`). The fine-grained contract assertions live
//! in `cli_contract.rs`; this drives the binary end to end under the runtime
//! budget.

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_qds"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().expect("no signal"), out.stdout)
}

#[test]
fn criterion_10_cli_contract() {
    let budget = Duration::from_secs(10);
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(|| {
        let pass = fixture("lindblad_m2.json");
        let fail = fixture("transpose_minus_identity.json");
        let invalid = fixture("invalid_complex_entry.json");

        let (code, _) = run(&["certify", pass.to_str().unwrap()]);
        assert_eq!(code, 0, "clean certification exits 0");
        let (code, stdout) = run(&["certify", fail.to_str().unwrap()]);
        assert_eq!(code, 1, "violation exits 1");
        let report: serde_json::Value = serde_json::from_slice(&stdout).unwrap();
        assert!(report["report"]["certificate"]["levels"][1]["witness"].is_object());
        let (code, stdout) = run(&["certify", invalid.to_str().unwrap()]);
        assert_eq!(code, 2, "invalid input exits 2");
        assert!(stdout.is_empty());

        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.json");
        let b = dir.path().join("b.json");
        for out in [&a, &b] {
            let (code, _) = run(&["certify", fail.to_str().unwrap(), "--out", out.to_str().unwrap()]);
            assert_eq!(code, 1);
        }
        assert_eq!(
            std::fs::read(&a).unwrap(),
            std::fs::read(&b).unwrap(),
            "fixed seed reruns must be byte-identical"
        );
    }));
    let elapsed = start.elapsed();
    let verdict = if outcome.is_ok() && elapsed <= budget { "PASS" } else { "FAIL" };
    println!("criterion 10 (CLI contract): {verdict} [{elapsed:.2?}, budget {budget:?}]");
    if let Err(panic) = outcome {
        resume_unwind(panic);
    }
    assert!(elapsed <= budget, "criterion 10 exceeded its budget: {elapsed:?}");
}
