use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/corpus")
}

fn entry(name: &str) -> PathBuf {
    corpus_dir().join("actions").join(format!("{name}.json"))
}

fn toral(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toral")).args(args).output().expect("spawn toral")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

#[test]
fn analyze_reports_cyclic_maximal_action() {
    let o = toral(&["analyze", path_str(&entry("example2a_min")), "--box", "12"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("\nfixed_points: 1\n"), "{text}");
    assert!(text.contains("\ncyclic: true"), "{text}");
    assert!(text.contains("\nmaximal: true"), "{text}");
}

#[test]
fn analyze_json_for_2b() {
    let o = toral(&["analyze", path_str(&entry("example2b_max")), "--box", "12", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).expect("json report");
    assert_eq!(v["fixed_points"], "4");
    assert_eq!(v["name"], "example2b_max");
    assert!(v["cyclicity"]["NonCyclic"].is_object(), "{v}");
}

#[test]
fn analyze_rejects_malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"name": "x", "dim": 3}"#).unwrap();
    let o = toral(&["analyze", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn construct_reproduces_corpus_generators() {
    let dir = tempfile::tempdir().unwrap();
    for (name, lattice) in [("example2a_max", "ok_basis"), ("example2a_max", "power_basis")] {
        let out = dir.path().join(format!("{lattice}.json"));
        let o = toral(&["construct", "--field", path_str(&entry(name)), "--lattice", lattice, "-o", path_str(&out)]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).starts_with("wrote "));
        let built: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        let twin = if lattice == "ok_basis" { "example2a_max" } else { "example2a_min" };
        let expected: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(entry(twin)).unwrap()).unwrap();
        assert_eq!(built["generators"], expected["generators"], "{lattice}");
        assert_eq!(built["name"], format!("{name}_{lattice}"));
    }
}

#[test]
fn construct_refuses_lattice_that_is_not_a_module() {
    let dir = tempfile::tempdir().unwrap();
    let mut file: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(entry("example2a_max")).unwrap()).unwrap();
    // span{2, λ, λ²} is not closed under λ: λ·λ² has constant term -1
    file["field"]["lattices"]["odd"] = serde_json::json!([[[2, 1]], [[0, 1], [1, 1]], [[0, 1], [0, 1], [1, 1]]]);
    let field = dir.path().join("field.json");
    std::fs::write(&field, file.to_string()).unwrap();
    let out = dir.path().join("out.json");
    let o = toral(&["construct", "--field", path_str(&field), "--lattice", "odd", "-o", path_str(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.exists());
    let o = toral(&["construct", "--field", path_str(&field), "--lattice", "missing", "-o", path_str(&out)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn compare_with_itself_is_identity() {
    let p = entry("example3c_max");
    let o = toral(&["compare", path_str(&p), path_str(&p), "--box", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: isomorphic: yes (identity)"), "{}", stdout(&o));
}

#[test]
fn compare_ideal_classes_in_3a() {
    let o = toral(&[
        "compare",
        path_str(&entry("example3a_principal")),
        path_str(&entry("example3a_second")),
        "--box",
        "10",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).expect("json");
    assert_eq!(v["report"]["distinguishing_invariant"], "ideal class");
    assert_eq!(v["verdict"], "weakly isomorphic: yes; Z-conjugate: no (ideal classes differ)");
}

#[test]
fn compare_products_in_1b() {
    let o = toral(&[
        "compare",
        path_str(&entry("example1b_cube_times")),
        path_str(&entry("example1b_square_square")),
        "--box",
        "5",
    ]);
    let text = stdout(&o);
    assert!(
        text.contains("verdict: entropy functions equal; not weakly isomorphic (commutant ranks 6 vs 12)"),
        "{text}"
    );
}

#[test]
fn verify_paper_filtered() {
    let o = toral(&["verify-paper", "--filter", "3b", "--box", "20"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.lines().filter(|l| l.starts_with("PASS [3b]")).count() > 10, "{text}");
    assert!(!text.contains("FAIL"), "{text}");
}

#[test]
fn verify_paper_flags_a_perturbed_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let actions = dir.path().join("actions");
    std::fs::create_dir(&actions).unwrap();
    for name in ["example2a_min", "example2a_max"] {
        let text = std::fs::read_to_string(entry(name)).unwrap();
        let text = if name == "example2a_min" {
            let t = text.replacen("[[2, -4, -1], [1, -4, -1]", "[[2, -4, -1], [1, -3, -1]", 1);
            assert_ne!(t, text);
            t
        } else {
            text
        };
        std::fs::write(actions.join(format!("{name}.json")), text).unwrap();
    }
    let o = toral(&["verify-paper", "--corpus", path_str(dir.path()), "--box", "12"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(1), "{text}");
    assert!(text.lines().any(|l| l.starts_with("FAIL [2a] example2a_min: commutation")), "{text}");
}
