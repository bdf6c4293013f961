use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sharygin")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn golden(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(p).expect("golden file")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sharygin-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn limiting_points_of_nested_circles() {
    let o = bin(&["0 0 3", "1 0 1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("S  = (1.14589803375, 0)\nS' = (7.85410196625, 0)\n"), "{}", stdout(&o));
}

#[test]
fn intersecting_circles_are_rejected() {
    let o = bin(&["0 0 1", "1 0 1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: IntersectingCircles"));
    assert!(stdout(&o).is_empty());
}

#[test]
fn svg_of_a_pair() {
    let out = scratch("pair.svg");
    let o = bin(&["-1 0 0.5", "2 0 1", "--svg", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let svg = std::fs::read_to_string(&out).unwrap();
    for id in ["w1", "w2", "S", "S'", "polar"] {
        assert!(svg.contains(&format!("id=\"{id}\"")), "{id}");
    }
}

#[test]
fn generated_scenario_matches_golden() {
    let out = scratch("weak.txt");
    let o = bin(&["generate", "weak-mt", "--seed", "1", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), golden("weak_mt_seed1.txt"));
}

#[test]
fn rendered_svg_matches_golden() {
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/weak_mt_seed1.txt");
    let out = scratch("weak.svg");
    let o = bin(&["render", s(&src), s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), golden("weak_mt_seed1.svg"));
}

#[test]
fn verify_matches_golden() {
    let json = scratch("verify.json");
    let o = bin(&["verify", "weak-mt", "--seeds", "3", "--json", s(&json)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("verify_weak_mt.stdout"));
    assert_eq!(std::fs::read_to_string(&json).unwrap(), golden("verify_weak_mt.json"));
}

#[test]
fn tolerance_override_fails_the_run() {
    let strict = golden("weak_mt_seed1.txt") + "tol: residual_a 1e-30\n";
    let file = scratch("strict.txt");
    std::fs::write(&file, strict).unwrap();
    let o = bin(&["verify", "weak-mt", "--scenario", s(&file)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("seed 1: FAIL residual_a"));
}

#[test]
fn parse_errors_report_position() {
    let file = scratch("bad.txt");
    std::fs::write(&file, "name: x\nobject: p point 1 y\n").unwrap();
    let o = bin(&["render", s(&file), s(&scratch("bad.svg"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2, column 19"), "{}", stderr(&o));
}

#[test]
fn transforms_keep_tangency() {
    let o = bin(&["transform", "lorentz", "0 0 1", "2 0 -1", "--v", "-0.5", "--check-tangency"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("1 2  yes  yes\n"), "{}", stdout(&o));
    let o = bin(&["transform", "inflate", "--rho", "ln(2)", "0 0 1", "2 0 -1", "--check-tangency"]);
    assert!(stdout(&o).ends_with("1 2  yes  yes\n"), "{}", stdout(&o));
    let o = bin(&["transform", "hyp-inflate", "--rho", "0.4", "--absolute", "0 0 2", "0.5 0 0.5", "-0.5 0 -0.5", "--check-tangency"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).ends_with("1 2  yes  yes\n"), "{}", stdout(&o));
    let o = bin(&["transform", "invert", "--center", "0 0", "--k2", "4", "point 1 0", "3 0 1", "--check-tangency"]);
    assert_eq!(stdout(&o).lines().next(), Some("point 4 0"));
}

#[test]
fn bad_transform_input_exits_2() {
    assert_eq!(bin(&["transform", "lorentz", "0 0 1", "--v", "1.5"]).status.code(), Some(2));
    assert_eq!(bin(&["transform", "inflate", "0 0 1"]).status.code(), Some(2));
    assert_eq!(bin(&["transform", "inflate", "--rho", "x", "0 0 1"]).status.code(), Some(2));
    assert_eq!(bin(&["verify", "nothing"]).status.code(), Some(2));
}
