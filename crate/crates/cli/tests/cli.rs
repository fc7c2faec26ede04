use std::path::PathBuf;
use std::process::{Command, Output};

use secrecy_cli::io::{self, ChannelSpec};
use secrecy_cli::{parse_split, sig};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn secrecy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_secrecy")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Number following `label` on its output line.
fn value(text: &str, label: &str) -> f64 {
    let line = text.lines().find(|l| l.starts_with(label)).unwrap_or_else(|| panic!("no `{label}` in {text}"));
    line[label.len()..].trim().trim_start_matches(':').trim().split_whitespace().next().unwrap().parse().unwrap()
}

#[test]
fn validate_accepts_good_channel() {
    let o = secrecy(&["validate", &fixture("bsc_wiretap.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("|X| = 2"));
}

#[test]
fn validate_names_bad_letter() {
    let o = secrecy(&["validate", &fixture("bad_trace.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("letter 1"), "{}", stderr(&o));
}

#[test]
fn truncated_file_reports_position() {
    let o = secrecy(&["validate", &fixture("truncated.json")]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("line 1 column"), "{err}");
}

#[test]
fn missing_file_is_an_input_error() {
    let o = secrecy(&["validate", "/nonexistent/channel.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn channel_round_trip_is_exact() {
    let spec = io::read_channel_spec(fixture("bsc_wiretap.json").as_ref()).unwrap();
    let w = spec.to_channel().unwrap();
    let text = serde_json::to_string(&ChannelSpec::from_channel("copy", &w)).unwrap();
    let back: ChannelSpec = serde_json::from_str(&text).unwrap();
    let w2 = back.to_channel().unwrap();
    for (a, b) in w.states().iter().zip(w2.states()) {
        assert_eq!(a.matrix(), b.matrix());
    }
}

#[test]
fn capacity_of_bsc_wiretap() {
    let o = secrecy(&["capacity", &fixture("bsc_wiretap.json")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!((value(&out, "private capacity P") - 0.35770).abs() < 1e-4, "{out}");
    assert!(out.contains("optimal input: [0.500000, 0.500000]"), "{out}");
}

#[test]
fn capacity_of_pure_state_channel() {
    let o = secrecy(&["capacity", &fixture("pure_overlap.json")]);
    let out = stdout(&o);
    assert!((value(&out, "classical capacity C") - 0.60088).abs() < 1e-4, "{out}");
    assert!((value(&out, "private capacity P") - 0.60088).abs() < 1e-4, "{out}");
}

#[test]
fn degrade_check_exit_codes() {
    let o = secrecy(&["degrade-check", &fixture("bsc_wiretap.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("degraded: yes"));
    let o = secrecy(&["degrade-check", &fixture("leaky.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("degraded: no"));
}

#[test]
fn converse_outside_region() {
    let o = secrecy(&["converse", &fixture("bsc_wiretap.json"), "-n", "100", "--eps", "0.5", "--delta", "0.3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("outside converse region"), "{}", stderr(&o));
}

#[test]
fn converse_inside_region() {
    let o = secrecy(&["converse", &fixture("bsc_wiretap.json"), "-n", "100", "--eps", "0.1", "--delta", "0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let bound = value(&out, "bound on log M");
    let np = value(&out, "n P(W)");
    assert!(bound > np, "{out}");
}

#[test]
fn converse_rejects_non_degraded_channel() {
    let o = secrecy(&["converse", &fixture("leaky.json"), "-n", "10", "--eps", "0.1", "--delta", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn region_grid_to_stdout() {
    let o = secrecy(&["region", "--grid", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 26);
    assert_eq!(lines[0], "epsilon,delta,region");
    assert_eq!(lines[1], "0,0,Converse");
    assert_eq!(lines[25], "1,1,NoGo");
}

#[test]
fn region_file_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = secrecy(&["region", "--grid", "20", "-o", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 442);
}

#[test]
fn entropy_of_bell_state() {
    let o = secrecy(&["entropy", &fixture("bell.json"), "--which", "hmin", "--split", "0,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!((value(&stdout(&o), "H_min^0(A|B)") + 1.0).abs() < 1e-6, "{}", stdout(&o));
    let o = secrecy(&["entropy", &fixture("bell.json"), "--which", "hmax", "--split", "0,-"]);
    assert!((value(&stdout(&o), "H_max^0(A|B)") - 1.0).abs() < 1e-6, "{}", stdout(&o));
}

#[test]
fn lemma_harness_small_run() {
    let o = secrecy(&["lemmas", "--trials", "2", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("DataProcessingMin: 2 of 2 hold"));
}

#[test]
fn code_eval_perfect_code() {
    let o = secrecy(&["code-eval", &fixture("noiseless_bit.json"), &fixture("perfect_code.json")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(value(&out, "transmission error").abs() < 1e-6, "{out}");
    assert!(value(&out, "privacy error (Optimized)").abs() < 1e-6, "{out}");
}

#[test]
fn code_eval_mixture_code() {
    let o = secrecy(&["code-eval", &fixture("copy_eve.json"), &fixture("mixture_code.json")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!((value(&out, "success probability") - 0.82).abs() < 1e-6, "{out}");
    assert!(value(&out, "privacy error (Optimized)") <= 0.6 + 1e-6, "{out}");
}

#[test]
fn code_search_noiseless_bit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("code.json");
    let o = secrecy(&[
        "code-search",
        &fixture("noiseless_bit.json"),
        "-n",
        "1",
        "--eps",
        "0",
        "--delta",
        "0",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(value(&stdout(&o), "M"), 2.0);
    let o = secrecy(&["code-eval", &fixture("noiseless_bit.json"), path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn sig_formatting() {
    assert_eq!(sig(0.357751234), "0.357751");
    assert_eq!(sig(35.77512), "35.7751");
    assert_eq!(sig(-1.0), "-1.00000");
}

#[test]
fn split_syntax() {
    assert_eq!(parse_split("0,1", 2).unwrap(), (vec![0], vec![1], vec![]));
    assert_eq!(parse_split("0+2,-,1", 3).unwrap(), (vec![0, 2], vec![], vec![1]));
    assert!(parse_split("0,0", 2).is_err());
    assert!(parse_split("0", 2).is_err());
}

#[test]
fn usage_errors_exit_with_input_code() {
    let o = secrecy(&["entropy", &fixture("bell.json"), "--which", "hmin", "--split", "0,3"]);
    assert_eq!(o.status.code(), Some(1));
    let o = secrecy(&["capacity"]);
    assert_eq!(o.status.code(), Some(1));
    let o = secrecy(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
}
