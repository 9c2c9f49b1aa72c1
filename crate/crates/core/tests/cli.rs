use std::path::Path;
use std::process::{Command, Output};

fn dividelab(args: &[&str], seed: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dividelab"));
    cmd.args(args);
    match seed {
        Some(s) => cmd.env("DIVIDELAB_SEED", s),
        None => cmd.env_remove("DIVIDELAB_SEED"),
    };
    cmd.output().expect("binary runs")
}

#[test]
fn every_fixture_verifies() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let out = dividelab(&["verify", path.to_str().unwrap()], None);
        assert_eq!(out.status.code(), Some(0), "{}: {}", path.display(), String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn generated_divides_round_trip_through_files() {
    let tmp = tempfile::tempdir().unwrap();
    let base = tmp.path().join("p23.json");
    let out = dividelab(&["gen", "torus", "2", "3"], None);
    assert!(out.status.success());
    std::fs::write(&base, &out.stdout).unwrap();
    let out = dividelab(&["cable", "2", "9", "--input", base.to_str().unwrap()], None);
    assert!(out.status.success());
    let cabled = tmp.path().join("c.json");
    std::fs::write(&cabled, &out.stdout).unwrap();
    let out = dividelab(&["analyze", cabled.to_str().unwrap(), "--json"], None);
    assert!(out.status.success());
    let report: dividelab::report::Report = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.counts.d, 8);
    assert!(report.all_pass());
}

#[test]
fn render_is_deterministic_per_seed() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("d.json");
    let out = dividelab(&["gen", "puiseux", "(2,3),(2,7)"], None);
    std::fs::write(&input, &out.stdout).unwrap();
    let render = |name: &str, seed: &str| {
        let path = tmp.path().join(name);
        let out = dividelab(&["render", input.to_str().unwrap(), "-o", path.to_str().unwrap()], Some(seed));
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read(path).unwrap()
    };
    let a = render("a.svg", "7");
    let b = render("b.svg", "7");
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("<?xml"));
    assert!(text.contains(r#"version="1.1""#));
    assert!(text.trim_end().ends_with("</svg>"));
}

#[test]
fn missing_output_flag_is_a_usage_error() {
    let out = dividelab(&["render", "x.json"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--output"));
}
