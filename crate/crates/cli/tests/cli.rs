//! End-to-end tests for the `mspace` binary: exit codes, file parsing with
//! positions, round trips, and the output formats.

use std::path::PathBuf;
use std::process::{Command, Output};

fn mspace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mspace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mspace-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const CAP_GAUGE: &str = "kind = pl\ngamma = 1/1\njump = 0/1\nknot = 1/2 1/1\nfinal_slope = 0/1\n";
const U_FN: &str = "gamma = 1/1\npiece = 0/1 1/2 2/1\ntail = 0/1\n";

#[test]
fn norm_of_the_remark_pair_is_one() {
    let gauge = write_temp("cap.gauge", CAP_GAUGE);
    let f = write_temp("u.fn", U_FN);
    let out = mspace(&["norm", "--gauge", gauge.to_str().unwrap(), "--fn", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("norm = 1/1"), "{text}");
    assert!(text.contains("finite = yes"));
}

#[test]
fn zero_function_has_zero_norm() {
    let gauge = write_temp("cap2.gauge", CAP_GAUGE);
    let f = write_temp("zero.fn", "gamma = 1/1\ntail = 0/1\n");
    let out = mspace(&["norm", "--gauge", gauge.to_str().unwrap(), "--fn", f.to_str().unwrap()]);
    assert!(stdout_of(&out).contains("norm = 0/1"));
}

#[test]
fn infinite_norm_exits_3_and_reports() {
    // Constant tail against an eventually flat gauge on (0, inf).
    let gauge = write_temp(
        "flat.gauge",
        "kind = pl\ngamma = inf\njump = 0/1\nknot = 1/1 1/1\nfinal_slope = 0/1\n",
    );
    let f = write_temp("tail.fn", "gamma = inf\ntail = 1/1\n");
    let out = mspace(&["norm", "--gauge", gauge.to_str().unwrap(), "--fn", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let text = stdout_of(&out);
    assert!(text.contains("finite = no"), "{text}");
}

#[test]
fn parse_errors_exit_2_with_position() {
    let bad = write_temp("bad.fn", "gamma = 1/1\npiece = 0 1\n");
    let gauge = write_temp("cap3.gauge", CAP_GAUGE);
    let out = mspace(&["norm", "--gauge", gauge.to_str().unwrap(), "--fn", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    let out = mspace(&["norm"]);
    assert_eq!(out.status.code(), Some(2));
    let f = write_temp("u2.fn", U_FN);
    // weaklp without --p is a validation error.
    let out = mspace(&["norm", "--fn", f.to_str().unwrap(), "--variant", "weaklp"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn weaklp_norm_contains_one_for_unit_block() {
    let f = write_temp("block.fn", "gamma = inf\npiece = 0/1 1/1 1/1\ntail = 0/1\n");
    let out = mspace(&["norm", "--fn", f.to_str().unwrap(), "--variant", "weaklp", "--p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("norm = 1/1"), "{text}");
    assert!(text.contains("quasinorm = 1/1"), "{text}");
}

#[test]
fn natural_variant_needs_delta() {
    let gauge = write_temp("cap4.gauge", CAP_GAUGE);
    let f = write_temp("u3.fn", U_FN);
    let out = mspace(&[
        "norm", "--gauge", gauge.to_str().unwrap(), "--fn", f.to_str().unwrap(), "--variant",
        "natural",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = mspace(&[
        "norm", "--gauge", gauge.to_str().unwrap(), "--fn", f.to_str().unwrap(), "--variant",
        "natural", "--delta", "1/4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("norm = 1/1"));
}

#[test]
fn classify_reports_the_b_certificate() {
    let gauge = write_temp("cap5.gauge", CAP_GAUGE);
    let out = mspace(&["classify", "--gauge", gauge.to_str().unwrap()]);
    let text = stdout_of(&out);
    assert!(text.contains("verdict = B"));
    assert!(text.contains("beta = 2/1"));
    assert!(text.contains("delta = 1/4"));
    assert!(text.contains("grothendieck = yes"));
}

#[test]
fn submajorize_detects_scalar_dominance() {
    let small = write_temp("small.fn", "gamma = 1/1\npiece = 0/1 1/1 1/1\ntail = 0/1\n");
    let big = write_temp("big.fn", "gamma = 1/1\npiece = 0/1 1/1 2/1\ntail = 0/1\n");
    let yes = mspace(&["submajorize", "--fn", small.to_str().unwrap(), "--by", big.to_str().unwrap()]);
    assert!(stdout_of(&yes).contains("submajorized = yes"));
    let no = mspace(&["submajorize", "--fn", big.to_str().unwrap(), "--by", small.to_str().unwrap()]);
    assert!(stdout_of(&no).contains("submajorized = no"));
    assert_eq!(no.status.code(), Some(0));
}

#[test]
fn curve_formats_and_exact_flag() {
    let gauge = write_temp("cap6.gauge", CAP_GAUGE);
    let out = mspace(&["curve", "--gauge", gauge.to_str().unwrap(), "--what", "ratio", "--samples", "4"]);
    let text = stdout_of(&out);
    // Plateau at 2 near zero, decay toward 1 at the right end.
    assert!(text.lines().next().unwrap().ends_with(",2"), "{text}");
    let exact = mspace(&[
        "curve", "--gauge", gauge.to_str().unwrap(), "--what", "ratio", "--samples", "4",
        "--exact",
    ]);
    assert!(stdout_of(&exact).contains("1/4,2/1"));
    // Sample floor.
    let bad = mspace(&["curve", "--gauge", gauge.to_str().unwrap(), "--what", "ratio", "--samples", "1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn curve_head_of_zero_function_is_zero() {
    let gauge = write_temp("cap7.gauge", CAP_GAUGE);
    let zero = write_temp("zero2.fn", "gamma = 1/1\ntail = 0/1\n");
    let out = mspace(&[
        "curve", "--gauge", gauge.to_str().unwrap(), "--fn", zero.to_str().unwrap(), "--what",
        "head", "--samples", "3",
    ]);
    for line in stdout_of(&out).lines() {
        assert!(line.ends_with(",0"), "{line}");
    }
}

#[test]
fn curve_bigpsi_of_linear_gauge_is_constant_one() {
    let gauge = write_temp("lin.gauge", "kind = pl\ngamma = 1/1\njump = 0/1\nfinal_slope = 1/1\n");
    let out = mspace(&[
        "curve", "--gauge", gauge.to_str().unwrap(), "--what", "bigpsi", "--samples", "4",
    ]);
    for line in stdout_of(&out).lines() {
        assert!(line.ends_with(",1"), "{line}");
    }
}

#[test]
fn verify_summary_and_json_lines() {
    let out = mspace(&["verify", "--seed", "1", "--cases", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.ends_with("violations=0 cases=28 seed=1\n"), "{text}");
    let json = mspace(&["verify", "--seed", "1", "--cases", "3", "--out", "json-lines"]);
    let jtext = stdout_of(&json);
    assert!(jtext.lines().all(|l| l.starts_with('{') && l.ends_with('}')), "{jtext}");
    assert!(jtext.contains("\"check\":\"superadditivity\""));
}

#[test]
fn remark_bundle_is_deterministic() {
    let a = mspace(&["remark"]);
    let b = mspace(&["remark"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
    assert!(stdout_of(&a).contains("violations=0 cases=4"));
}

#[test]
fn remark_with_perturbed_gauge_reports_values() {
    let gauge = write_temp(
        "cap3x.gauge",
        "kind = pl\ngamma = 1/1\njump = 0/1\nknot = 1/3 1/1\nfinal_slope = 0/1\n",
    );
    let out = mspace(&["remark", "--gauge", gauge.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("counterexample_report_norm_midpoint"), "{text}");
}

#[test]
fn function_files_round_trip_through_the_formats() {
    // A function with an interior gap and a tail anchor.
    let f = write_temp(
        "gap.fn",
        "gamma = 10/1\npiece = 0/1 1/1 2/1\npiece = 3/1 10/1 0/1\ntail = 5/1\n",
    );
    let gauge = write_temp(
        "wide.gauge",
        "kind = pl\ngamma = 10/1\njump = 0/1\nfinal_slope = 1/1\n",
    );
    let out = mspace(&["norm", "--gauge", gauge.to_str().unwrap(), "--fn", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn csv_output_is_comma_separated() {
    let gauge = write_temp("cap8.gauge", CAP_GAUGE);
    let out = mspace(&["classify", "--gauge", gauge.to_str().unwrap(), "--out", "csv"]);
    let text = stdout_of(&out);
    assert!(text.contains("verdict,B"), "{text}");
    assert!(text.contains("beta,2/1"));
}
