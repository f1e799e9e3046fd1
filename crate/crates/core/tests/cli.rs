use std::process::Command;

fn apery(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_apery")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn eval_agrees_and_exits_zero() {
    let (code, out) = apery(&["--json", "eval", "--s", "1,1", "--bars", "1,1", "--x", "1/2"]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["pass"], true);
    let p = v["pipeline"].as_f64().unwrap();
    assert!((p + 0.019408779689355384).abs() < 1e-15, "{p}");
}

#[test]
fn malformed_series_is_a_usage_error() {
    assert_eq!(apery(&["eval", "--s", "0"]).0, 2);
    assert_eq!(apery(&["eval", "--s", "1", "--kernels", "3n"]).0, 2);
    assert_eq!(apery(&["no-such-command"]).0, 2);
}

#[test]
fn level8_switch_after_series_flags() {
    let (code, out) = apery(&["represent", "--s", "2b,1", "--x", "1", "--level8"]);
    assert_eq!(code, 0);
    assert!(out.contains("x[mu"), "{out}");
}

#[test]
fn failing_catalogue_row_exits_one() {
    let (code, out) = apery(&["verify-paper", "--only", "sigma(2b,1b;1)"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("FAIL"));
    let (code, _) = apery(&["verify-paper", "--only", "a:(-1)^n/(2n);x=1/2"]);
    assert_eq!(code, 0);
}
