use std::path::{Path, PathBuf};
use std::process::Command;

use isoleaf_cli::Document;
use serde_json::Value;

fn dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

struct Case {
    name: String,
    args: Vec<String>,
    code: i32,
}

fn cases() -> Vec<Case> {
    let text = std::fs::read_to_string(dir().join("golden/cases.txt")).unwrap();
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let parts: Vec<&str> = l.split_whitespace().collect();
            Case {
                name: parts[0].to_string(),
                args: vec![parts[1].to_string(), parts[2].to_string()],
                code: parts[3].parse().unwrap(),
            }
        })
        .collect()
}

fn run(args: &[String]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_isoleaf"))
        .args(args)
        .current_dir(dir())
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn verdicts(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if k == "verdict" {
                    if let Value::String(s) = x {
                        out.push(s.clone());
                    }
                }
                verdicts(x, out);
            }
        }
        Value::Array(a) => a.iter().for_each(|x| verdicts(x, out)),
        _ => {}
    }
}

#[test]
fn human_output_matches_golden() {
    for c in cases() {
        let (code, stdout, stderr) = run(&c.args);
        assert_eq!(code, c.code, "exit code of {}", c.name);
        let expected =
            std::fs::read_to_string(dir().join(format!("golden/{}.txt", c.name))).unwrap();
        assert_eq!(
            format!("{stdout}{stderr}"),
            expected,
            "text output of {}",
            c.name
        );
    }
}

#[test]
fn json_output_matches_golden() {
    for c in cases() {
        let mut args = vec!["--json".to_string()];
        args.extend(c.args.clone());
        let (code, stdout, _) = run(&args);
        assert_eq!(code, c.code, "exit code of {}", c.name);
        let expected =
            std::fs::read_to_string(dir().join(format!("golden/{}.json", c.name))).unwrap();
        assert_eq!(stdout, expected, "json output of {}", c.name);
    }
}

#[test]
fn json_keys_are_sorted() {
    fn sorted(v: &Value) -> bool {
        match v {
            Value::Object(m) => {
                let keys: Vec<&String> = m.keys().collect();
                keys.windows(2).all(|w| w[0] < w[1]) && m.values().all(sorted)
            }
            Value::Array(a) => a.iter().all(sorted),
            _ => true,
        }
    }
    for c in cases() {
        let text = std::fs::read_to_string(dir().join(format!("golden/{}.json", c.name))).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert!(sorted(&v), "{}", c.name);
        // textual order as well, not just the parsed map
        let reserialized = serde_json::to_string_pretty(&v).unwrap() + "\n";
        assert_eq!(reserialized, text, "{}", c.name);
    }
}

#[test]
fn text_and_json_verdicts_agree() {
    for c in cases().into_iter().filter(|c| c.code == 0) {
        let text = std::fs::read_to_string(dir().join(format!("golden/{}.txt", c.name))).unwrap();
        let json: Value = serde_json::from_str(
            &std::fs::read_to_string(dir().join(format!("golden/{}.json", c.name))).unwrap(),
        )
        .unwrap();
        let mut vs = Vec::new();
        verdicts(&json, &mut vs);
        for v in vs {
            assert!(
                text.contains(&v),
                "{}: verdict {v} missing from text",
                c.name
            );
        }
    }
}

#[test]
fn fixtures_round_trip() {
    let mut n = 0;
    for entry in std::fs::read_dir(dir().join("fixtures")).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let Ok(doc) = Document::parse(&text) else {
            continue;
        };
        let Ok(canon) = doc.canonicalize() else {
            continue;
        };
        let again = Document::parse(&canon.emit()).unwrap();
        assert_eq!(again, canon, "{}", path.display());
        assert_eq!(again.canonicalize().unwrap(), canon, "{}", path.display());
        n += 1;
    }
    assert!(n >= 18, "only {n} fixtures round-tripped");
}

#[test]
fn canon_subcommand_is_idempotent() {
    let (code, first, _) = run(&["canon".into(), "fixtures/family_moret_bailly.json".into()]);
    assert_eq!(code, 0);
    let doc = Document::parse(&first).unwrap();
    assert_eq!(doc.emit() + "\n", first);
    assert_eq!(doc.kind(), "family");
}

#[test]
fn moret_bailly_document_matches_fixture() {
    let (_, out, _) = run(&[
        "--json".into(),
        "moret-bailly".into(),
        "--prime".into(),
        "5".into(),
    ]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let emitted = Document::parse(&v["family"].to_string()).unwrap();
    let fixture = Document::parse(
        &std::fs::read_to_string(dir().join("fixtures/family_moret_bailly.json")).unwrap(),
    )
    .unwrap()
    .canonicalize()
    .unwrap();
    assert_eq!(emitted, fixture);
}

#[test]
fn reads_standard_input() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_isoleaf"))
        .args(["slope", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"kind": "bundle", "twists": [0, 0]}"#)
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("slope: 0"));
    assert!(text.contains("positivity: Nef"));
}

#[test]
fn usage_errors_exit_two() {
    let (code, _, err) = run(&["reduce".into(), "--max-steps".into(), "x".into()]);
    assert_eq!(code, 2);
    assert!(err.contains("max-steps"));
    let (code, _, _) = run(&[
        "reduce".into(),
        "fixtures/reduction_case_one.json".into(),
        "--max-steps".into(),
        "0".into(),
    ]);
    assert_eq!(code, 2);
}

#[test]
fn step_limit_is_reported() {
    let (code, out, _) = run(&[
        "reduce".into(),
        "fixtures/reduction_case_two.json".into(),
        "--max-steps".into(),
        "2".into(),
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("StepLimit after 2 steps"));
}

#[test]
fn sweep_is_deterministic_and_clean() {
    let args: Vec<String> = ["--json", "sweep", "--seed", "7", "--cases", "40"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let (code, a, _) = run(&args);
    let (_, b, _) = run(&args);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
    assert_eq!(v["checked"]["exact_triple"], 40);
}

#[test]
fn wrong_kind_is_invalid_input() {
    let (code, _, err) = run(&["dieudonne".into(), "fixtures/bundle_trivial.json".into()]);
    assert_eq!(code, 2);
    assert!(err.contains("expected a `dieudonne` document"));
}
