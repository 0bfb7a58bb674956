//! One test per acceptance criterion; each prints a single
//! `criterion k: PASS|FAIL ...` line (run with `--nocapture` to see them).

use std::process::Command;
use std::time::Instant;

use elemhyp::EvalPolicy;
use elemhyp_cli::report::Report;
use elemhyp_cli::suite::run_criterion;

fn criterion(k: u8, what: &str) {
    let start = Instant::now();
    let report = Report::new(run_criterion(k, &EvalPolicy::default()));
    let s = &report.summary;
    let failed: Vec<&str> = {
        let mut ops: Vec<&str> = report
            .entries
            .iter()
            .filter(|e| !e.pass)
            .map(|e| e.operation.as_str())
            .collect();
        ops.dedup();
        ops
    };
    println!(
        "criterion {k}: {} {what} ({}/{} checks, max rel_err {:.3e}, {:.2?}){}",
        if report.all_passed() { "PASS" } else { "FAIL" },
        s.passed,
        s.total,
        s.max_rel_err,
        start.elapsed(),
        if failed.is_empty() {
            String::new()
        } else {
            format!(" failing: {}", failed.join(", "))
        }
    );
    assert!(s.total > 0, "criterion {k} produced no checks");
    assert!(report.all_passed(), "criterion {k} failed: {failed:?}");
}

#[test]
fn criterion_1_hypergeometric_oracle() {
    criterion(1, "general closed form vs series");
}

#[test]
fn criterion_2_representations_agree() {
    criterion(2, "alternative representations and specializations");
}

#[test]
fn criterion_3_second_moments() {
    criterion(3, "three routes to the second moment, e0 and e1");
}

#[test]
fn criterion_4_basis_structure() {
    criterion(4, "combination cardinality, basis sets and values");
}

#[test]
fn criterion_5_higher_moments() {
    criterion(5, "moments of order 3..5 vs direct summation");
}

#[test]
fn criterion_6_other_operators() {
    criterion(6, "durrmeyer-type and generalized operators");
}

#[test]
fn criterion_7_heun() {
    criterion(
        7,
        "heun parameters, termination, oracle and equation residual",
    );
}

fn elemhyp(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_elemhyp"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf-8 output"),
    )
}

#[test]
fn criterion_8_cli_contract() {
    let mut problems = Vec::new();

    let (code, out) = elemhyp(&["verify", "--suite", "all"]);
    match serde_json::from_str::<Report>(&out) {
        Ok(r) => {
            if r.summary.total != r.entries.len() {
                problems.push("summary total does not match entries".to_string());
            }
            if (code == 0) != r.all_passed() {
                problems.push("exit code disagrees with report".to_string());
            }
            if code != 0 {
                problems.push(format!(
                    "verify --suite all exited {code} ({}/{} passed)",
                    r.summary.passed, r.summary.total
                ));
            }
        }
        Err(e) => problems.push(format!("report is not well-formed: {e}")),
    }

    let examples: [(&[&str], &str); 3] = [
        (
            &["hyp2f1", "--m", "1", "--n", "2", "--p", "2", "--x", "0"],
            "{\"value\": 1.0}\n",
        ),
        (
            &[
                "moment",
                "--operator",
                "gmkz",
                "--n",
                "2",
                "--rop",
                "3",
                "--alpha",
                "2",
                "--beta",
                "1",
                "--r",
                "1",
                "--x",
                "0.5",
            ],
            "{\"value\": 0.625}\n",
        ),
        (
            &["heun", "--m", "2", "--n", "-1", "--p", "4", "--x", "0.6"],
            "{\"value\": 0.7, \"termination\": 1, \"normalization\": 1.0}\n",
        ),
    ];
    for (args, want) in examples {
        let (code, out) = elemhyp(args);
        if code != 0 || out != want {
            problems.push(format!(
                "{} -> exit {code}, {:?}",
                args.join(" "),
                out.trim_end()
            ));
        }
    }

    println!(
        "criterion 8: {} cli contract{}",
        if problems.is_empty() { "PASS" } else { "FAIL" },
        if problems.is_empty() {
            String::new()
        } else {
            format!(" ({})", problems.join("; "))
        }
    );
    assert!(problems.is_empty(), "{problems:?}");
}
