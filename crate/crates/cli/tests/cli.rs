use std::io::Write;
use std::process::{Command, Output, Stdio};

fn majorana(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_majorana"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(args: &[&str], stdin: &str) -> String {
    let out = majorana(args, stdin);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).expect("valid JSON")
}

#[test]
fn ghz_classifies_as_three_distinct_points() {
    let ghz = stdout(&["gen", "ghz", "--n", "3"], "");
    let label = stdout(&["classify"], &ghz);
    assert_eq!(label.lines().next(), Some("D_{1,1,1}"));
    assert_eq!(label.lines().nth(1), Some("diversity 3"));
    let config = json(&stdout(&["classify", "--json"], &ghz));
    assert_eq!(config["mults"], serde_json::json!([1, 1, 1]));
}

#[test]
fn dicke_points_sit_at_the_poles() {
    let state = stdout(&["gen", "dicke", "--n", "3", "--l", "2"], "");
    let doc = json(&stdout(&["points"], &state));
    assert_eq!(doc["n"], 3);
    let mut pts: Vec<(f64, u64)> = doc["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p["beta"].as_f64().unwrap(), p["mult"].as_u64().unwrap()))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    assert_eq!(pts, vec![(0.0, 1), (std::f64::consts::PI, 2)]);
    let csv = stdout(&["points", "--csv-only"], &state);
    assert_eq!(csv.lines().next(), Some("alpha,beta,mult"));
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn ghz_entanglement_is_one_half() {
    let ghz = stdout(&["gen", "ghz", "--n", "3"], "");
    let report = json(&stdout(&["entangle", "--json"], &ghz));
    assert!((report["eg"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert_eq!(report["ring"], false);
    let text = stdout(&["entangle"], &ghz);
    assert!(text.starts_with("eg = 0.49999999") || text.starts_with("eg = 0.5"));
}

#[test]
fn ilo_carries_eta_family_to_ghz_family() {
    let eta = r#"{"n":3,"basis":"dicke","re":[0,1,1,0],"im":[0,0,0,0]}"#;
    let out = stdout(
        &["ilo", "--matrix", "1,-0.5+0.8660254037844386i,1,-0.5-0.8660254037844386i"],
        eta,
    );
    let doc = json(&out);
    let re: Vec<f64> = doc["re"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    let im: Vec<f64> = doc["im"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let overlap = (re[0] * h + re[3] * h).powi(2) + (im[0] * h + im[3] * h).powi(2);
    assert!(overlap > 1.0 - 1e-9);
}

#[test]
fn rotation_keeps_the_family() {
    let w = stdout(&["gen", "dicke", "--n", "4", "--l", "1"], "");
    let rotated = stdout(&["rotate", "--euler", "0.3", "-1.1", "2.0"], &w);
    assert_eq!(stdout(&["classify"], &rotated).lines().next(), Some("D_{3,1}"));
}

#[test]
fn reconstruct_recovers_or_reports_ambiguity() {
    let dir = std::env::temp_dir().join(format!("majorana-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let state = stdout(&["gen", "dnk", "--n", "5", "--k", "2", "--d0", "0.6", "--d1", "0.8i"], "");
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    std::fs::write(&a, stdout(&["rdm", "--keep", "1,2,3,4"], &state)).unwrap();
    std::fs::write(&b, stdout(&["rdm", "--keep", "2,3,4,5"], &state)).unwrap();
    let rebuilt = json(&stdout(&["reconstruct", a.to_str().unwrap(), b.to_str().unwrap()], ""));
    assert_eq!(rebuilt["basis"], "computational");
    assert_eq!(rebuilt["n"], 5);

    let ghz = stdout(&["gen", "ghz", "--n", "4"], "");
    std::fs::write(&a, stdout(&["rdm", "--keep", "1,2,3"], &ghz)).unwrap();
    std::fs::write(&b, stdout(&["rdm", "--keep", "2,3,4"], &ghz)).unwrap();
    let verdict = stdout(&["reconstruct", a.to_str().unwrap(), b.to_str().unwrap()], "");
    assert_eq!(verdict.trim(), "AMBIGUOUS");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn symmetric_marginal_uses_dicke_basis() {
    let w = stdout(&["gen", "dicke", "--n", "3", "--l", "1"], "");
    let rho = json(&stdout(&["rdm", "--keep", "1,2", "--symmetric"], &w));
    assert_eq!(rho["basis"], "symmetric");
    assert_eq!(rho["dim"], 3);
}

#[test]
fn falsify_lists_matches() {
    let w = stdout(&["gen", "dicke", "--n", "3", "--l", "1"], "");
    let list = json(&stdout(&["falsify", "--marginals", "1,2;1,3"], &w));
    let found = list.as_array().unwrap();
    assert!(!found.is_empty());
    assert!(found[0]["fidelity_with_input"].as_f64().unwrap() > 1.0 - 1e-6);
}

#[test]
fn landscape_emits_grid_rows() {
    let ghz = stdout(&["gen", "ghz", "--n", "2"], "");
    let csv = stdout(&["landscape", "--grid", "5"], &ghz);
    assert_eq!(csv.lines().count(), 26);
    assert_eq!(csv.lines().next(), Some("alpha,beta,fidelity"));
}

#[test]
fn generation_is_seeded() {
    let a = stdout(&["gen", "random", "--n", "4", "--seed", "7"], "");
    let b = stdout(&["gen", "random", "--n", "4", "--seed", "7"], "");
    let c = stdout(&["gen", "random", "--n", "4", "--seed", "8"], "");
    assert_eq!(a, b);
    assert_ne!(a, c);
    let g = json(&stdout(&["gen", "gdicke", "--n", "4", "--k", "2", "--unique", "--seed", "3"], ""));
    assert_eq!(g["basis"], "computational");
}

#[test]
fn table_reproduces() {
    let out = majorana(&["table1"], "");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().filter(|l| l.starts_with("ok")).count(), 8);
}

#[test]
fn exit_codes() {
    assert_eq!(majorana(&["classify"], "{not json").status.code(), Some(2));
    let short = r#"{"n":3,"basis":"dicke","re":[1,0],"im":[0,0]}"#;
    assert_eq!(majorana(&["classify"], short).status.code(), Some(2));
    let ghz = stdout(&["gen", "ghz", "--n", "3"], "");
    assert_eq!(majorana(&["ilo", "--matrix", "1,1,1,1"], &ghz).status.code(), Some(3));
    assert_eq!(majorana(&["rdm", "--keep", "4"], &ghz).status.code(), Some(3));
}
