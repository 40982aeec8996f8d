use std::path::PathBuf;
use std::process::{Command, Output};

fn cubforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubforge")).args(args).output().expect("run cubforge")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cubforge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn construct_32_node_rule() {
    let out = scratch("d5.json");
    let o = cubforge(&["construct", "--degree", "4", "--gamma", "0", "--d", "5", "--k", "6,1,2,3", "--p", "5", "--a", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("lambda_4 = 15/56"));
    assert!(text.contains("nodes: 32"));
    let v = cubforge(&["verify", out.to_str().unwrap(), "--sharp", "--invariants"]);
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
}

#[test]
fn construct_degree5_sphere_case() {
    let o = cubforge(&["construct", "--degree", "5", "--gamma", "-1/2", "--d", "3", "--p", "2", "--m", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("lambda_6 = 27/40"));
}

#[test]
fn degenerate_and_negative_exit_codes() {
    let o = cubforge(&["construct", "--degree", "4", "--d", "5", "--k", "6,1,2,3", "--a", "1"]);
    assert_eq!(o.status.code(), Some(2));
    // a = 2 leaves a negative weight at d = 5.
    let o = cubforge(&["construct", "--degree", "4", "--d", "5", "--k", "6,1,2,3", "--a", "2"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    let o = cubforge(&["verify", "/nonexistent/rule.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn obstruct_reports() {
    let o = cubforge(&["obstruct", "--gamma", "-1/2"]);
    assert_eq!(stdout(&o).trim(), "a = 7/3 vs a^2 - 6a + 1 = 0: inconsistent");
    let o = cubforge(&["obstruct", "--gamma", "0", "--p4", "30"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("certificate holds for d = 1..30"));
}

#[test]
fn identity_checks() {
    let o = cubforge(&["identity", "--check", "hurwitz"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("check: pass"));
    let o = cubforge(&["identity", "--check", "schur-as-printed"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn reduce_with_bundled_design_file() {
    let rule = scratch("d10.json");
    let o = cubforge(&["construct", "--degree", "4", "--d", "10", "--k", "11,1,2,5", "--a", "5", "--out", rule.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let design = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/4-11-5-1.design");
    let out = scratch("d10-reduced.json");
    let o = cubforge(&["reduce", "--design", design, rule.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("nodes: 485 → 89"));
    let v = cubforge(&["verify", out.to_str().unwrap()]);
    assert!(stdout(&v).contains("index 4: exact (1001 monomials)"), "{}", stdout(&v));
    let o = cubforge(&["reduce", rule.to_str().unwrap(), "--count-design", "2=4-(11,5,1)"]);
    assert!(stdout(&o).contains("→ 89"), "{}", stdout(&o));
}

#[test]
fn malformed_design_reports_position() {
    let bad = scratch("bad.design");
    std::fs::write(&bad, "11 5 4 1\n0 1 2 x 4\n").unwrap();
    let rule = scratch("d10b.json");
    cubforge(&["construct", "--degree", "4", "--d", "10", "--k", "11,1,2,5", "--a", "5", "--out", rule.to_str().unwrap()]);
    let o = cubforge(&["reduce", "--design", bad.to_str().unwrap(), rule.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn output_independent_of_threads() {
    let args = ["search", "--degree", "4", "--d-min", "3", "--d-max", "7"];
    let one = Command::new(env!("CARGO_BIN_EXE_cubforge")).args(args).arg("--threads").arg("1").output().unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_cubforge")).args(args).env("CUBFORGE_THREADS", "4").output().unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn sphere_pipeline_and_embedding() {
    let rule = scratch("s3.json");
    let half = scratch("s3-half.json");
    cubforge(&["construct", "--degree", "4", "--gamma", "-1/2", "--d", "3", "--k", "4,1,2,3", "--p", "2", "--a", "4", "--out", rule.to_str().unwrap()]);
    let o = cubforge(&["to-sphere", "--antipodal", rule.to_str().unwrap(), "--out", half.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("nodes: 72"));
    let o = cubforge(&["embed", half.to_str().unwrap(), "--t", "4", "--certify"]);
    assert!(stdout(&o).contains("l_2^4 → l_8^72"));
    assert_eq!(o.status.code(), Some(0));
    let o = cubforge(&["identity", "--from-rule", half.to_str().unwrap(), "--t", "4"]);
    assert!(stdout(&o).starts_with("lhs: 5040 * sum_squares(4) ^ 4"), "{}", stdout(&o));
}

#[test]
fn embedding_needs_surface_measure() {
    let rule = scratch("d5.json");
    let sphere = scratch("d5-sphere.json");
    cubforge(&["construct", "--degree", "4", "--d", "5", "--k", "6,1,2,3", "--a", "4", "--out", rule.to_str().unwrap()]);
    let o = cubforge(&["to-sphere", rule.to_str().unwrap(), "--out", sphere.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let sphere = sphere.to_str().unwrap();
    for argv in [vec!["embed", sphere, "--t", "2"], vec!["identity", "--from-rule", sphere, "--t", "2"]] {
        let o = cubforge(&argv);
        assert_eq!(o.status.code(), Some(2));
        assert!(String::from_utf8_lossy(&o.stderr).contains("gamma = -1/2"));
    }
}
