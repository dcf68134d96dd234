use std::io::Write;
use std::process::{Command, Output};

fn cfdt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfdt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scenario_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn list_names_the_builtins() {
    let o = cfdt(&["list"]);
    assert!(o.status.success());
    let out = stdout(&o);
    for name in ["russian-roulette", "rps-cycle", "sawant", "gm-extension"] {
        assert!(out.contains(name), "{out}");
    }
}

#[test]
fn passing_run_exits_zero() {
    let o = cfdt(&[
        "scenario",
        "run",
        "russian-roulette",
        "--command",
        "evaluate",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("-1/21") && out.contains("PASS"), "{out}");
}

#[test]
fn json_and_csv_formats() {
    let o = cfdt(&[
        "scenario",
        "run",
        "russian-roulette",
        "--command",
        "evaluate",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let text = v.to_string();
    assert!(text.contains("\"-1/21\""), "{text}");

    let o = cfdt(&[
        "scenario",
        "run",
        "sawant",
        "--command",
        "bounds",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().next().unwrap().contains(','), "{out}");
    assert!(
        out.contains("signed[a,c]") && out.contains("[1/3, 2/3]"),
        "{out}"
    );

    let o = cfdt(&[
        "scenario",
        "run",
        "russian-roulette",
        "--command",
        "evaluate",
        "--decimal",
        "4",
    ]);
    assert!(stdout(&o).contains("-0.0476"), "{}", stdout(&o));
}

#[test]
fn export_then_run_from_file() {
    let o = cfdt(&["scenario", "export", "gm-extension"]);
    assert!(o.status.success());
    let f = scenario_file(&stdout(&o));
    let o = cfdt(&[
        "scenario",
        "run",
        f.path().to_str().unwrap(),
        "--command",
        "extend",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn mismatch_exits_one() {
    let o = cfdt(&["scenario", "export", "russian-roulette"]);
    let text = stdout(&o).replace("\"-1/21\"", "\"1/21\"");
    let f = scenario_file(&text);
    let o = cfdt(&[
        "scenario",
        "run",
        f.path().to_str().unwrap(),
        "--command",
        "evaluate",
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn input_errors_exit_two() {
    let o = cfdt(&[
        "scenario",
        "run",
        "no-such-scenario",
        "--command",
        "evaluate",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());

    let o = cfdt(&["scenario", "export", "russian-roulette"]);
    let text = stdout(&o).replacen("\"1/42\"", "0.0238", 1);
    assert_ne!(text, stdout(&o), "fixture did not change");
    let f = scenario_file(&text);
    let o = cfdt(&[
        "scenario",
        "run",
        f.path().to_str().unwrap(),
        "--command",
        "evaluate",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("float"));

    let o = cfdt(&["scenario", "run", "allais-four", "--command", "extend"]);
    assert_eq!(o.status.code(), Some(2));
}
