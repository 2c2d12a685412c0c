//! End-to-end tests of the `elqcc` binary: exit codes, output formats,
//! file/stdin plumbing, and the bit-for-bit JSON round-trip guarantee.

use std::io::Write as _;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use elqcc::numfmt::round_sig9;
use elqcc::{optimal_catalysed, p_max, Spectrum};
use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_elqcc"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_file(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_owned()
}

fn stdout_json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

fn stdout_text(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

#[test]
fn pmax_prints_the_conversion_probability() {
    let dir = TempDir::new().unwrap();
    let source = write_file(dir.path(), "x.json", r#"{"coefficients":[0.4,0.4,0.1,0.1]}"#);
    let target = write_file(dir.path(), "y.json", "[0.5,0.25,0.25]");

    let output = run(&["pmax", "--source", &source, "--target", &target]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(stdout_json(&output)["p_max"], 0.8);

    let plain = run(&[
        "pmax", "--source", &source, "--target", &target, "--format", "plain",
    ]);
    assert_eq!(plain.status.code(), Some(0));
    assert_eq!(stdout_text(&plain), "0.8\n");
}

#[test]
fn json_numbers_round_trip_bit_for_bit() {
    let dir = TempDir::new().unwrap();
    let source = write_file(dir.path(), "x.json", "[0.73,0.17,0.06,0.04]");
    let target = write_file(dir.path(), "y.json", "[0.81,0.11,0.08]");

    let output = run(&["pmax", "--source", &source, "--target", &target]);
    assert_eq!(output.status.code(), Some(0));
    let x = Spectrum::new(vec![0.73, 0.17, 0.06, 0.04]).unwrap();
    let y = Spectrum::new(vec![0.81, 0.11, 0.08]).unwrap();
    let printed = stdout_json(&output)["p_max"].as_f64().unwrap();
    assert_eq!(printed, round_sig9(p_max(&x, &y)));
}

#[test]
fn check_separates_verdicts_by_exit_code() {
    let dir = TempDir::new().unwrap();
    let x = write_file(dir.path(), "x.json", "[0.4,0.4,0.1,0.1]");
    let y = write_file(dir.path(), "y.json", "[0.5,0.25,0.25]");

    // Reflexive conversion is deterministic.
    let same = run(&["check", "--source", &x, "--target", &x]);
    assert_eq!(same.status.code(), Some(0));
    let body = stdout_json(&same);
    assert_eq!(body["majorized"], true);
    assert_eq!(body["verdict"], "Equivalent");

    // An incomparable pair is a negative verdict: exit 1, JSON on stdout
    // even when a plain rendering was requested.
    let other = run(&[
        "check", "--source", &x, "--target", &y, "--format", "plain",
    ]);
    assert_eq!(other.status.code(), Some(1));
    let body = stdout_json(&other);
    assert_eq!(body["majorized"], false);
    assert_eq!(body["verdict"], "Incomparable");
    assert_eq!(body["first_violation"], 2);
}

#[test]
fn classify_reports_both_directions() {
    let dir = TempDir::new().unwrap();
    let x = write_file(dir.path(), "x.json", "[0.4,0.4,0.1,0.1]");
    let y = write_file(dir.path(), "y.json", "[0.5,0.25,0.25]");

    let output = run(&["classify", "--source", &x, "--target", &y]);
    assert_eq!(output.status.code(), Some(0));
    let body = stdout_json(&output);
    assert_eq!(body["verdict"], "Incomparable");
    assert_eq!(body["forward_violation"], 2);
    assert_eq!(body["backward_violation"], 1);

    let plain = run(&[
        "classify", "--source", &x, "--target", &y, "--format", "plain",
    ]);
    assert_eq!(
        stdout_text(&plain),
        "verdict=Incomparable\nforward_violation=2\nbackward_violation=1\n"
    );
}

#[test]
fn find_catalyst_reports_a_witness_on_success() {
    let dir = TempDir::new().unwrap();
    let x = write_file(dir.path(), "x.json", "[0.4,0.4,0.1,0.1]");
    let y = write_file(dir.path(), "y.json", "[0.5,0.25,0.25]");

    let output = run(&[
        "find-catalyst", "--source", &x, "--target", &y, "--dim", "2", "--grid-step", "0.005",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let body = stdout_json(&output);
    assert_eq!(body["found"], true);
    assert_eq!(body["achieved_probability"], 1.0);
    assert_eq!(body["gate"], Value::Null);
    let witness: Vec<f64> = body["catalyst"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(witness.len(), 2);
    assert!(witness[0] >= witness[1] && witness[1] > 0.0);
}

#[test]
fn find_catalyst_explains_a_gate_prune() {
    let dir = TempDir::new().unwrap();
    let s = write_file(dir.path(), "s.json", "[0.5,0.4,0.1]");
    let t = write_file(dir.path(), "t.json", "[0.6,0.2,0.2]");

    let output = run(&["find-catalyst", "--source", &s, "--target", &t, "--dim", "2"]);
    assert_eq!(output.status.code(), Some(1));
    let body = stdout_json(&output);
    assert_eq!(body["found"], false);
    assert_eq!(body["gate"], "Lemma3");
    assert_eq!(body["catalyst"], Value::Null);
    assert_eq!(body["evaluations"], 0);
}

#[test]
fn boost_finds_the_probability_raise() {
    let dir = TempDir::new().unwrap();
    let s = write_file(dir.path(), "s.json", "[0.6,0.2,0.2]");
    let t = write_file(dir.path(), "t.json", "[0.5,0.4,0.1]");

    let output = run(&[
        "boost", "--source", &s, "--target", &t, "--dim", "2", "--grid-step", "0.005",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let body = stdout_json(&output);
    assert_eq!(body["found"], true);
    assert_eq!(body["baseline_probability"], 0.8);
    assert!(body["achieved_probability"].as_f64().unwrap() > 0.9);
}

#[test]
fn ecp_handles_bare_and_catalysed_protocols() {
    let dir = TempDir::new().unwrap();
    let state = write_file(dir.path(), "s.json", "[0.5,0.3,0.2]");
    let catalyst = write_file(dir.path(), "c.json", "[0.5825,0.4175]");

    let bare = run(&["ecp", "--state", &state]);
    assert_eq!(bare.status.code(), Some(0));
    let body = stdout_json(&bare);
    assert_eq!(body["probabilities"], serde_json::json!([0.2, 0.2, 0.6]));

    let catalysed = run(&["ecp", "--state", &state, "--catalyst", &catalyst]);
    assert_eq!(catalysed.status.code(), Some(0));
    let body = stdout_json(&catalysed);
    // Bit-for-bit: printed numbers equal the library's, rounded to 9
    // significant digits.
    let dist = optimal_catalysed(
        &Spectrum::new(vec![0.5, 0.3, 0.2]).unwrap(),
        &Spectrum::new(vec![0.5825, 0.4175]).unwrap(),
    )
    .unwrap();
    assert_eq!(
        body["expected_entanglement_nats"].as_f64().unwrap(),
        round_sig9(dist.expected_entanglement_nats)
    );
    let printed: Vec<f64> = body["probabilities"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    for (p, q) in printed.iter().zip(&dist.probabilities) {
        assert_eq!(*p, round_sig9(*q));
    }
}

#[test]
fn bounds_prints_both_caps_and_the_binding_one() {
    let dir = TempDir::new().unwrap();
    let state = write_file(dir.path(), "s.json", "[0.5,0.3,0.2]");

    let output = run(&["bounds", "--state", &state, "--format", "plain"]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(
        stdout_text(&output),
        "bound_b_nats=0.936426245\nentropy_nats=1.02965301\nbinding=B\n"
    );
}

#[test]
fn landscape_defaults_to_csv_and_honors_out() {
    let dir = TempDir::new().unwrap();
    let state = write_file(dir.path(), "s.json", "[0.5,0.3,0.2]");
    let out_path = dir.path().join("rows.csv");

    let output = run(&[
        "landscape", "--state", &state, "--steps", "4",
        "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    // A positive result routed to a file leaves stdout empty.
    assert!(output.stdout.is_empty());

    let csv = std::fs::read_to_string(&out_path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "beta1,beta2,E_nats,E_ebits");
    assert_eq!(lines.len(), 6);
    for row in &lines[1..] {
        let fields: Vec<f64> = row.split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields.len(), 4);
        assert!((fields[0] + fields[1] - 1.0).abs() < 1e-9);
    }
    // The sweep starts at the flat catalyst and ends at the product state.
    assert!(lines[1].starts_with("0.5,0.5,"));
    assert!(lines[5].starts_with("1,0,"));
}

#[test]
fn landscape_renders_json_rows_on_request() {
    let dir = TempDir::new().unwrap();
    let state = write_file(dir.path(), "s.json", "[0.5,0.3,0.2]");

    let output = run(&[
        "landscape", "--state", &state, "--steps", "4", "--format", "json",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let body = stdout_json(&output);
    let rows = body["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0]["beta1"], 0.5);
    assert_eq!(rows[4]["beta1"], 1.0);
}

#[test]
fn spectra_arrive_via_stdin_too() {
    let dir = TempDir::new().unwrap();
    let target = write_file(dir.path(), "y.json", "[0.5,0.25,0.25]");

    let mut child = bin()
        .args(["pmax", "--source", "-", "--target", &target])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"coefficients":[0.4,0.4,0.1,0.1]}"#)
        .unwrap();
    let output = child.wait_with_output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(stdout_json(&output)["p_max"], 0.8);
}

#[test]
fn invalid_inputs_exit_two() {
    let dir = TempDir::new().unwrap();
    let good = write_file(dir.path(), "x.json", "[0.5,0.5]");
    let junk = write_file(dir.path(), "junk.json", "not json at all");
    let unnormalized = write_file(dir.path(), "bad.json", "[0.9,0.9]");

    // Missing file.
    let output = run(&["pmax", "--source", "missing.json", "--target", &good]);
    assert_eq!(output.status.code(), Some(2));
    assert!(output.stdout.is_empty());

    // Unparseable and unnormalized spectra.
    assert_eq!(
        run(&["pmax", "--source", &junk, "--target", &good]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["pmax", "--source", &unnormalized, "--target", &good]).status.code(),
        Some(2)
    );

    // csv is a landscape-only format.
    assert_eq!(
        run(&["check", "--source", &good, "--target", &good, "--format", "csv"])
            .status
            .code(),
        Some(2)
    );

    // Flag validation: dimension range, sweep size, unknown flags.
    assert_eq!(
        run(&["find-catalyst", "--source", &good, "--target", &good, "--dim", "9"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["landscape", "--state", &good, "--steps", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["bounds", "--state", &good, "--frobnicate"]).status.code(),
        Some(2)
    );

    // A grid pitch coarser than the supported maximum is invalid input.
    assert_eq!(
        run(&[
            "find-catalyst", "--source", &good, "--target", &good,
            "--dim", "2", "--grid-step", "0.5",
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn negative_verdicts_reach_stdout_even_with_out() {
    let dir = TempDir::new().unwrap();
    let s = write_file(dir.path(), "s.json", "[0.5,0.4,0.1]");
    let t = write_file(dir.path(), "t.json", "[0.6,0.2,0.2]");
    let out_path = dir.path().join("result.json");

    let output = run(&[
        "find-catalyst", "--source", &s, "--target", &t, "--dim", "2",
        "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(1));
    let on_stdout = stdout_json(&output);
    let in_file: Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(on_stdout, in_file);
    assert_eq!(on_stdout["gate"], "Lemma3");
}
