use std::path::PathBuf;
use std::process::Command;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).to_string_lossy().into_owned()
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn qnil(args: &[&str]) -> Run {
    qnil_env(args, None)
}

fn qnil_env(args: &[&str], cache: Option<&std::path::Path>) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qnil"));
    cmd.args(args).env_remove("QNIL_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.env("QNIL_CACHE_DIR", dir);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

#[test]
fn generator_image() {
    let a2 = data("a2.json");
    let r = qnil(&["feigin", "--cartan", &a2, "--word", "1,2,1", "--x", "x1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, "t1 + t3\n");
    let r = qnil(&["feigin", "--cartan", &a2, "--word", "1,2", "--x", "1,2"]);
    assert_eq!(r.stdout, "t1 t2\n");
}

#[test]
fn grouplike_report() {
    let r = qnil(&["grouplike", "--cartan", &data("a2.json"), "--word", "1,2,1", "--degree", "4"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, "group-like: OK (heights 0..4)\n");
    let r = qnil(&[
        "grouplike", "--cartan", &data("b2.json"), "--word", "2,1", "--degree", "3", "--scalar", "2", "--scalar", "(1+q)/(q)",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
}

#[test]
fn skewform_summary() {
    let r = qnil(&["skewform", "--cartan", &data("a2.json"), "--word", "1,2,1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, "{\"divisors\":[1],\"rank\":2}\n");
    let r = qnil(&["skewform", "--cartan", &data("a3.json"), "--word", "1,2,1,3", "--other", "2,1,2,3"]);
    assert_eq!(r.stdout, "{\"equivalent\":true,\"sl_equivalent\":true}\n");
}

#[test]
fn transition_images() {
    let r = qnil(&["transition", "--cartan", &data("a2.json"), "--from", "1,2,1", "--to", "2,1,2", "--format", "json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["images"][1], "t1 + t3");
    assert_eq!(v["relations_preserved"], true);
}

#[test]
fn checks_through_the_front_end() {
    let a2 = data("a2.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["universal", "--cartan", &a2, "--word", "1,2", "--degree", "3"],
        vec!["verify-identity", "--cartan", &a2, "--from", "1,2,1", "--to", "2,1,2", "--degree", "3", "--scalar", "0", "--scalar", "q"],
        vec!["extremal", "--cartan", &a2, "--word", "2,1,2", "--lambda", "2,1", "--relations", "2"],
        vec!["inverse", "--cartan", &a2, "--word", "2,1,2"],
        vec!["kernel", "--cartan", &a2, "--word", "1,2", "--gamma", "2,1"],
        vec!["component", "--cartan", &a2, "--gamma", "2,1"],
        vec!["pair", "--cartan", &a2, "--u", "1,2", "--v", "2,1"],
    ];
    for args in cases {
        let r = qnil(&args);
        assert_eq!(r.code, 0, "{:?}: {}", args, r.stderr);
    }
    let a3 = data("a3.json");
    let r = qnil(&["typea", "--cartan", &a3, "--word", "2,1,3,2", "--degree", "2"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("factorization along (2,1,3,2): OK"));
}

#[test]
fn usage_errors_exit_with_two() {
    let a2 = data("a2.json");
    let b2 = data("b2.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["feigin", "--cartan", &a2, "--word", "1,3", "--x", "x1"],
        vec!["feigin", "--cartan", &a2, "--word", "1", "--x", "x7"],
        vec!["feigin", "--cartan", "/nonexistent/a2.json", "--word", "1", "--x", "x1"],
        vec!["feigin", "--cartan", &a2, "--word", "1,a", "--x", "x1"],
        vec!["transition", "--cartan", &a2, "--from", "1,1", "--to", "1,1"],
        vec!["transition", "--cartan", &a2, "--from", "1,2", "--to", "2,1"],
        vec!["typea", "--cartan", &b2],
        vec!["inverse", "--cartan", &a2, "--word", "1,2", "--lambda", "1,0"],
        vec!["grouplike", "--cartan", &a2, "--word", "1,2", "--degree", "2", "--scalar", "1"],
        vec!["extremal", "--cartan", &a2, "--word", "1", "--lambda", "1"],
        vec!["--ore-cap", "0", "suite"],
        vec!["suite", "--only", "13"],
        vec!["frobnicate"],
        vec!["grouplike", "--cartan", &a2, "--word", "1"],
    ];
    for args in cases {
        let r = qnil(&args);
        assert_eq!(r.code, 2, "{:?}: {}{}", args, r.stdout, r.stderr);
        assert!(r.stdout.is_empty(), "{:?}", args);
        assert!(!r.stderr.is_empty(), "{:?}", args);
    }
    let r = qnil(&["grouplike", "--cartan", &a2, "--word", "1,2", "--degree", "2", "--scalar", "1"]);
    assert!(r.stderr.contains("--scalar"), "{}", r.stderr);
}

#[test]
fn invalid_cartan_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"A": [[2, 1], [-1, 2]], "d": [1, 1]}"#).unwrap();
    let r = qnil(&["pair", "--cartan", path.to_str().unwrap(), "--u", "1", "--v", "1"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("invalid Cartan data"), "{}", r.stderr);
}

#[test]
fn json_output_is_deterministic() {
    let b2 = data("b2.json");
    let args = ["skewform", "--cartan", &b2, "--word", "1,2,1,2", "--format", "json"];
    assert_eq!(qnil(&args).stdout, qnil(&args).stdout);
    let args = ["suite", "--only", "2,9,12", "--format", "json"];
    let (a, b) = (qnil(&args), qnil(&args));
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.contains("seconds"));
}

#[test]
fn warm_cache_matches_cold_cache() {
    let dir = tempfile::tempdir().unwrap();
    let b2 = data("b2.json");
    let args = ["component", "--cartan", &b2, "--gamma", "2,2", "--format", "json"];
    let cold = qnil_env(&args, Some(dir.path()));
    assert_eq!(cold.code, 0, "{}", cold.stderr);
    let files: Vec<PathBuf> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert!(!files.is_empty());
    let warm = qnil_env(&args, Some(dir.path()));
    assert_eq!(cold.stdout, warm.stdout);
    let uncached = qnil(&args);
    assert_eq!(cold.stdout, uncached.stdout);

    // a file written by another format version is ignored, not trusted
    let target = files.iter().find(|p| p.to_string_lossy().contains("2_2")).expect("cache file of the degree");
    let text = std::fs::read_to_string(target).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["version"] = serde_json::json!(999);
    v["basis"]["u_basis"] = serde_json::json!([0]);
    std::fs::write(target, v.to_string()).unwrap();
    let stale = qnil_env(&args, Some(dir.path()));
    assert_eq!(cold.stdout, stale.stdout);

    let flag = qnil(&["--cache-dir", dir.path().to_str().unwrap(), "component", "--cartan", &b2, "--gamma", "2,2", "--format", "json"]);
    assert_eq!(cold.stdout, flag.stdout);
}

#[test]
fn full_suite_with_cold_and_warm_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cold = qnil_env(&["suite", "--format", "json"], Some(dir.path()));
    assert_eq!(cold.code, 0, "{}", cold.stdout);
    let warm = qnil_env(&["suite", "--format", "json"], Some(dir.path()));
    assert_eq!(cold.stdout, warm.stdout);
}
