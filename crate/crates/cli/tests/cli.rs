use std::process::{Command, Output};

fn chains(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chains"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON report")
}

#[test]
fn pappus_all_runs_five_passing_checks() {
    let out = chains(&[
        "verify",
        "pappus",
        "--outer",
        "0,0,1",
        "--inner",
        "0.5,0,0.5",
        "-n",
        "12",
        "--all",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = report(&out);
    let checks = r["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 5);
    assert!(checks.iter().all(|c| c["ok"] == true));
    assert_eq!(r["overall"], true);
}

#[test]
fn counterexample_exits_zero_because_it_fails() {
    let out = chains(&["verify", "counterexample", "--n", "6", "--omega", "5,1"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = report(&out);
    for c in r["checks"].as_array().unwrap() {
        assert_eq!(c["expect_fail"], true);
        assert_eq!(c["report"]["pass"], false);
    }
}

#[test]
fn missing_inner_is_a_config_error() {
    let out = chains(&["verify", "pappus", "--outer", "0,0,1", "-n", "12"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--inner"));
}

#[test]
fn malformed_triple_is_a_config_error() {
    let out = chains(&["verify", "pappus", "--outer", "0,0", "--inner", "0.5,0,0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_scene_file_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scene.json");
    std::fs::write(&path, "{\n  \"version\": 1,\n  \"chains\": {\"c\": {\"kind\": \"pappus\", \"outer\": \"a\"}}\n}\n").unwrap();
    let out = chains(&["verify", "scene", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("chains.c") && msg.contains("line 3"), "{msg}");
}

#[test]
fn failing_check_exits_one() {
    let out = chains(&[
        "--tol",
        "1e-30",
        "verify",
        "pappus",
        "--outer",
        "0,0,1",
        "--inner",
        "0.5,0,0.5",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["overall"], false);
}

#[test]
fn fixture_prints_a_stable_scene() {
    let a = chains(&["fixture", "pappus-basic"]);
    let b = chains(&["fixture", "pappus-basic"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let scene: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(scene["circles"]["outer"]["radius"], 1.0);
    assert_eq!(scene["circles"]["inner"]["center"][0], 0.5);
    assert_eq!(scene["chains"]["pappus"]["count"], 12);
    assert_eq!(chains(&["fixture", "bogus"]).status.code(), Some(2));
}

#[test]
fn fixture_file_verifies_like_the_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mirrored.json");
    std::fs::write(&path, chains(&["fixture", "mirrored-60"]).stdout).unwrap();
    let from_file = chains(&["verify", "scene", path.to_str().unwrap()]);
    let builtin = chains(&["verify", "fixture", "mirrored-60"]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(
        report(&from_file)["input_hash"],
        report(&builtin)["input_hash"]
    );
}

#[test]
fn render_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.svg"), dir.path().join("b.svg"));
    for p in [&a, &b] {
        let out = chains(&[
            "render",
            "--fixture",
            "pappus-basic",
            "--svg-out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    assert!(String::from_utf8(a).unwrap().starts_with("<?xml"));
}

#[test]
fn json_out_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = chains(&[
        "--json-out",
        path.to_str().unwrap(),
        "verify",
        "fixture",
        "ortho-pair",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let written: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(written["checks"], report(&out)["checks"]);
}

#[test]
fn unwritable_svg_path_is_reported() {
    let out = chains(&[
        "render",
        "--fixture",
        "steiner-6",
        "--svg-out",
        "/nonexistent-dir/x.svg",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot write"));
}

#[test]
fn seeded_locus_runs_are_repeatable() {
    let a = chains(&["--seed", "11", "locus", "--random", "10"]);
    let b = chains(&["--seed", "11", "locus", "--random", "10"]);
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stderr)
    );
    assert_eq!(report(&a)["input_hash"], report(&b)["input_hash"]);
    assert_eq!(report(&a)["checks"].as_array().unwrap().len(), 10);
}
