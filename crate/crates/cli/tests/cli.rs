use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use diarep::linalg::Field;
use diarep_cli::workspace::Workspace;
use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn corpus_files() -> Vec<PathBuf> {
    let mut files: Vec<_> = std::fs::read_dir(Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    files.sort();
    files
}

fn diarep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diarep")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn run_file(name: &str, extra: &[&str]) -> (i32, Value) {
    let path = corpus(name);
    let mut args = vec!["--workspace", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = diarep(&args);
    (out.status.code().unwrap(), json(&out))
}

fn results<'a>(report: &'a Value, op: &str) -> Vec<&'a Value> {
    report["commands"].as_array().unwrap().iter().filter(|c| c["op"] == op).map(|c| &c["result"]).collect()
}

#[test]
fn valid_corpus_files_exit_zero() {
    for path in corpus_files() {
        if path.file_name().unwrap().to_str().unwrap().starts_with("invalid") {
            continue;
        }
        let out = diarep(&["--workspace", path.to_str().unwrap()]);
        let report = json(&out);
        assert_eq!(out.status.code(), Some(0), "{}: {report}", path.display());
        assert_eq!(report["passed"], true);
        assert_eq!(report["tool"], "diarep");
        assert!(report["rustc"].as_str().unwrap().starts_with("rustc"));
    }
}

#[test]
fn corpus_round_trips_through_serialization() {
    for path in corpus_files() {
        let text = std::fs::read_to_string(&path).unwrap();
        let first = Workspace::parse(&text, Field::Prime(3)).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let once = first.to_text();
        let second = Workspace::parse(&once, Field::Prime(3)).unwrap();
        assert_eq!(once, second.to_text(), "{}", path.display());
        assert_eq!(first.representations.len(), second.representations.len());
    }
}

#[test]
fn trivial_module_of_c2_over_f2_fools_the_map_test_only() {
    let (code, report) = run_file("c2_f2.toml", &[]);
    assert_eq!(code, 0);
    let h = results(&report, "classify")[0];
    assert_eq!(h["phi_proj"]["member"], true);
    let v = &h["verdicts"][0];
    assert_eq!(v["oracle"], false);
    assert_eq!(v["criterion"], false);
    assert_eq!(v["agreement"], true);
}

#[test]
fn trivial_module_of_c2_over_f3_is_projective_and_injective() {
    let (code, report) = run_file("c2_f3.toml", &[]);
    assert_eq!(code, 0);
    for v in results(&report, "classify")[0]["verdicts"].as_array().unwrap() {
        assert_eq!(v["oracle"], true);
        assert_eq!(v["criterion"], true);
    }
}

#[test]
fn chain_stratifies_one_vertex_at_a_time() {
    let (_, report) = run_file("a3_chain.toml", &["stratify", "category=A3"]);
    let levels = &results(&report, "stratify")[0]["levels"];
    let expected: Value = serde_json::from_str(r#"[[], ["1"], ["1", "2"], ["1", "2", "3"]]"#).unwrap();
    assert_eq!(levels, &expected);
}

#[test]
fn free_and_evaluation_adjunction_holds() {
    let (code, report) = run_file("square_twisted.toml", &["adjoint-check", "diagram=T", "pair=fre-eva", "samples=4"]);
    assert_eq!(code, 0, "{report}");
    assert_eq!(report["commands"][0]["status"], "pass");
}

#[test]
fn randomly_generated_adjunctions_hold() {
    let out = diarep(&["--seed", "3", "adjoint-check", "samples=2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn ring_diagram_transports_through_module_systems() {
    let (code, report) = run_file("ring_a2.toml", &[]);
    assert_eq!(code, 0, "{report}");
    assert_eq!(results(&report, "appendix-check").len(), 2);
}

#[test]
fn invalid_representation_exits_one_with_report() {
    let (code, report) = run_file("invalid_functoriality.toml", &[]);
    assert_eq!(code, 1);
    assert_eq!(report["passed"], false);
    assert_eq!(report["error"]["kind"], "ValidationFailure");
    assert_eq!(report["error"]["report"]["violations"][0]["axiom"], "composition");
}

#[test]
fn unknown_command_exits_two() {
    let (code, report) = run_file("c2_f3.toml", &["frobnicate"]);
    assert_eq!(code, 2);
    assert_eq!(report["error"]["kind"], "UnknownCommand");
}

#[test]
fn unresolved_reference_exits_two() {
    let (code, report) = run_file("c2_f3.toml", &["classify", "rep=Nope"]);
    assert_eq!(code, 2);
    assert_eq!(report["error"]["kind"], "UnresolvedReference");
}

#[test]
fn missing_argument_exits_two() {
    let (code, report) = run_file("c2_f3.toml", &["hom", "source=H"]);
    assert_eq!(code, 2);
    assert_eq!(report["error"]["kind"], "MissingArgument");
}

#[test]
fn parse_error_reports_position() {
    let dir = std::env::temp_dir().join(format!("diarep-parse-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.toml");
    std::fs::write(&path, "[field]\nname = \"Fp:3\"\n[category X]\nkind = = 3\n").unwrap();
    let out = diarep(&["--workspace", path.to_str().unwrap()]);
    let report = json(&out);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report["error"]["kind"], "ParseError");
    assert_eq!(report["error"]["line"], 4);
    assert!(report["error"]["column"].as_u64().unwrap() > 0);
}

fn generated(seed: &str) -> String {
    let out = diarep(&["--seed", seed, "generate", "kind=diagram", "objects=3"]);
    assert_eq!(out.status.code(), Some(0));
    json(&out)["commands"][0]["result"]["workspace"].as_str().unwrap().to_string()
}

#[test]
fn generation_is_deterministic_per_seed() {
    let a = generated("11");
    assert_eq!(a, generated("11"));
    let ws = Workspace::parse(&a, Field::Prime(3)).unwrap();
    assert!(ws.validate_all().iter().all(|r| r.violations.is_empty()));
    let distinct = (0..6).map(|s| generated(&s.to_string())).collect::<std::collections::BTreeSet<_>>();
    assert!(distinct.len() > 1);
}

#[test]
fn oversized_generation_is_rejected() {
    let out = diarep(&["generate", "kind=quiver", "objects=9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_out_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("diarep-json-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let dest = dir.join("report.json");
    let path = corpus("c2_f3.toml");
    let out = diarep(&["--workspace", path.to_str().unwrap(), "--json-out", dest.to_str().unwrap()]);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&dest).unwrap()).unwrap();
    assert_eq!(written, json(&out));
}

#[test]
fn reports_carry_the_schema_required_keys() {
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/report.schema.json")).unwrap()).unwrap();
    let keys = |def: &str| -> Vec<String> {
        schema["$defs"][def]["required"].as_array().unwrap().iter().map(|k| k.as_str().unwrap().to_string()).collect()
    };
    let (_, ok) = run_file("a3_chain.toml", &[]);
    for k in keys("run") {
        assert!(ok.get(&k).is_some(), "run report lacks `{k}`");
    }
    for c in ok["commands"].as_array().unwrap() {
        for k in keys("command") {
            assert!(c.get(&k).is_some(), "command entry lacks `{k}`");
        }
    }
    let (_, err) = run_file("c2_f3.toml", &["bogus"]);
    for k in keys("failure") {
        assert!(err.get(&k).is_some(), "failure report lacks `{k}`");
    }
}

#[test]
fn misspelled_keys_are_rejected() {
    let text = std::fs::read_to_string(corpus("c2_f3.toml")).unwrap();
    for typo in [text.replace("order = 2", "ordr = 2"), text.replace("{ dim = 1 }", "{ dim = 1, dimm = 2 }")] {
        match Workspace::parse(&typo, Field::Prime(3)) {
            Err(diarep_cli::CliError::Parse { message, .. }) => assert!(message.contains("unknown field"), "{message}"),
            other => panic!("expected a parse error, got {:?}", other.map(|_| ())),
        }
    }
}
