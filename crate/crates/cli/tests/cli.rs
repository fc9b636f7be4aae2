use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn cdmid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdmid")).args(args).output().expect("binary runs")
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn run(config_name: &str, dir: &Path) -> Output {
    cdmid(&["run", config(config_name).to_str().unwrap(), "--out", dir.to_str().unwrap()])
}

#[test]
fn heat_example_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = run("heat_example.toml", dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let recon = dir.path().join("reconstruction.txt");
    let recon = recon.to_str().unwrap();

    let report = cdmid(&["report", recon]);
    assert!(report.status.success());
    let text = stdout(&report);
    assert!(text.contains("linear:      [3.000000000"), "{text}");
    assert!(text.contains("linear:      [-2.000000000"), "{text}");

    let passthrough = cdmid(&["viabilize", recon, "1,0.55"]);
    assert_eq!(stdout(&passthrough).trim(), "1,0.55");
    let mapped = cdmid(&["viabilize", recon, "1,0.55", "--modes-first"]);
    let value: Vec<f64> = stdout(&mapped).trim().split(',').map(|s| s.parse().unwrap()).collect();
    assert_eq!(value[0], 1.0);
    assert!((value[1] - 0.1).abs() < 1e-9);

    let unviable = cdmid(&["viabilize", recon, "1,5"]);
    assert_eq!(unviable.status.code(), Some(4));
    assert!(stderr(&unviable).starts_with("error code=4 kind=unviable_input"));

    let csv = std::fs::read_to_string(dir.path().join("convergence.csv")).unwrap();
    assert!(csv.starts_with("time,sample,modes_identified,h_charred,h_pristine,h_vascular,eps_charred"));
    assert_eq!(csv.lines().count(), 201);
}

#[test]
fn identity_cdm_reports_no_modes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run("identity.toml", dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("convergence.csv")).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.split(',').nth(2) == Some("0")));
    let recon = dir.path().join("reconstruction.txt");
    let report = cdmid(&["report", recon.to_str().unwrap()]);
    assert!(stdout(&report).contains("no degradation detected"));
    let echo = cdmid(&["viabilize", recon.to_str().unwrap(), "0.3,-0.2"]);
    assert_eq!(stdout(&echo).trim(), "0.3,-0.2");
}

#[test]
fn oversized_separation_is_an_identification_failure() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(config("heat_example.toml"))
        .unwrap()
        .replace("delta = 0.4", "delta = 0.9");
    let path = dir.path().join("wide.toml");
    std::fs::write(&path, text).unwrap();
    let out = cdmid(&["run", path.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(stderr(&out).contains("kind=identification_failure"));
}

#[test]
fn truncated_reconstruction_names_the_missing_section() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run("two_mode_linear.toml", dir.path()).status.success());
    let full = std::fs::read_to_string(dir.path().join("reconstruction.txt")).unwrap();
    let cut = full.find("[mode 1]").unwrap();
    let path = dir.path().join("cut.txt");
    std::fs::write(&path, &full[..cut]).unwrap();
    let out = cdmid(&["report", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("missing section [mode 1]"), "{}", stderr(&out));
}

#[test]
fn bad_configs_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "[system]\nkind = \"heat\"\n").unwrap();
    let out = cdmid(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error code=2"));

    let text = std::fs::read_to_string(config("heat_example.toml"))
        .unwrap()
        .replace("jitter = 0.01", "jitter = 0.2");
    std::fs::write(&path, text).unwrap();
    let out = cdmid(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn missing_files_are_io_errors() {
    let out = cdmid(&["report", "/nonexistent/reconstruction.txt"]);
    assert_eq!(out.status.code(), Some(1));
}
