use std::process::{Command, Output};

fn qform(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qform"))
        .args(args)
        .env_remove("QFORM_ORDER")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(qform(&["formula", "-k", "2", "-m", "4"]).status.code(), Some(0));
    assert_eq!(qform(&["formula", "-k", "2", "-m", "5"]).status.code(), Some(2));
    assert_eq!(qform(&["eta", "--spec", "1:1", "--level", "1", "--cusp", "1/1"]).status.code(), Some(3));
    assert_eq!(qform(&["eta", "--spec", "1:x", "--level", "1"]).status.code(), Some(2));
    assert_eq!(qform(&["bernoulli", "-k", "2", "--character", "-2"]).status.code(), Some(2));
}

#[test]
fn order_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_qform"))
        .args(["verify", "-k", "2", "-m", "2"])
        .env("QFORM_ORDER", "50")
        .output()
        .unwrap();
    assert!(stdout(&out).contains("order=50"));
    let out = Command::new(env!("CARGO_BIN_EXE_qform"))
        .args(["verify", "-k", "2", "-m", "2"])
        .env("QFORM_ORDER", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn deterministic_output() {
    let args = ["verify", "-k", "1..4", "-m", "1,2,4", "--order", "80"];
    let a = qform(&args);
    let b = qform(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let lines: Vec<String> = stdout(&a).lines().map(String::from).collect();
    assert_eq!(lines.len(), 13);
    assert!(lines[0].starts_with("k=1 m=1 "));
    assert!(lines[11].starts_with("k=4 m=4 "));
}

#[test]
fn json_round_trips_byte_exact() {
    for (k, m) in [(1, 1), (1, 2), (3, 2), (4, 4), (7, 4), (8, 2)] {
        let (k, m) = (k.to_string(), m.to_string());
        let out = qform(&["formula", "-k", &k, "-m", &m, "--format", "json", "--order", "60"]);
        let text = stdout(&out);
        let json = text.trim_end_matches('\n');
        let parsed = qform::RepFormula::from_json(json).unwrap();
        assert_eq!(parsed.to_json(), json);
        let value: serde_json::Value = serde_json::from_str(json).unwrap();
        assert_eq!(value["ell"].as_u64().unwrap() as usize, value["corrections"].as_array().unwrap().len());
    }
}

#[test]
fn count_methods_agree() {
    for n in ["0", "7", "13"] {
        let out = qform(&["count", "-k", "3", "-m", "2", "-n", n, "--check-all", "--order", "60"]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn eta_report() {
    let out = qform(&["eta", "--spec", "1:4,2:-6,4:4,8:-6,16:4", "--level", "16", "--cusp", "1/4"]);
    let text = stdout(&out);
    assert!(text.contains("width: 1\n"), "{text}");
    assert!(text.contains("order: 0\n"), "{text}");
    assert!(text.contains("conditions: satisfied"), "{text}");
}
