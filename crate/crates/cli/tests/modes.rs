use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use pmelab_cli::{run_in_dir, ExperimentConfig, EXIT_ERROR, EXIT_OK};

const VALIDATE: &str = r#"
mode = "validate"
seed = 5

[domain]
shape = "ball"
extents = [1.0]

[params]
a = 1.0
b = 1.0
c = 1.0
k = 1.0
m = 2.5
p = 3.0
q = 2.0

[initial]
kind = "gaussian-bump"
offset = 1.0
amplitude = 2.0
width = 0.5

[solver]
resolution = 32
"#;

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn pmelab(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pmelab")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn only_subdir(base: &Path) -> PathBuf {
    let dirs: Vec<_> = fs::read_dir(base).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(dirs.len(), 1, "{dirs:?}");
    dirs[0].clone()
}

#[test]
fn validate_mode_reports_the_bound_check() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "v.toml", VALIDATE);
    let out = tmp.path().join("runs");
    let (code, stdout, _) = pmelab(&[cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(stdout.contains("bound holds: yes"), "{stdout}");
    assert!(stdout.contains("T = ") && stdout.contains("t_star_est: "));
    let dir = only_subdir(&out);
    for f in ["config.toml", "report.txt", "series.csv", "bounds.csv", "inequalities.csv"] {
        assert!(dir.join(f).exists(), "missing {f}");
    }
    let series = fs::read_to_string(dir.join("series.csv")).unwrap();
    assert!(series.starts_with("t,sup_u,phi,psi,dt\n"));
    // 17 significant digits
    let first = series.lines().nth(1).unwrap().split(',').next().unwrap();
    assert_eq!(first.split('e').next().unwrap().replace(['.', '-'], "").len(), 17);
}

#[test]
fn uncovered_regime_is_a_configuration_error() {
    let tmp = tempfile::tempdir().unwrap();
    let text = VALIDATE.replace("q = 2.0", "q = 1.4").replace("mode = \"validate\"", "mode = \"bound-only\"");
    let cfg = write_config(tmp.path(), "b.toml", &text);
    let out = tmp.path().join("runs");
    let (code, _, stderr) = pmelab(&[cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_ERROR);
    assert!(stderr.contains("q > 3/2"), "{stderr}");
}

#[test]
fn parse_errors_name_the_line_and_field() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "t.toml", &VALIDATE.replace("resolution = 32", "resolutoin = 32"));
    let (code, _, stderr) = pmelab(&[cfg.to_str().unwrap(), "--out", tmp.path().join("r").to_str().unwrap()]);
    assert_eq!(code, EXIT_ERROR);
    assert!(stderr.contains("resolutoin") && stderr.contains("line"), "{stderr}");

    let cfg = write_config(tmp.path(), "n.toml", &VALIDATE.replace("a = 1.0", "a = \"one\""));
    let (code, _, stderr) = pmelab(&[cfg.to_str().unwrap(), "--out", tmp.path().join("r").to_str().unwrap()]);
    assert_eq!(code, EXIT_ERROR);
    assert!(stderr.contains("line"), "{stderr}");
}

#[test]
fn mode_override_and_quiet() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "v.toml", VALIDATE);
    let out = tmp.path().join("runs");
    let (code, stdout, _) = pmelab(&[cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--mode", "bound-only", "--quiet"]);
    assert_eq!(code, EXIT_OK);
    assert!(stdout.is_empty());
    let dir = only_subdir(&out);
    assert!(dir.join("bounds.csv").exists());
    assert!(!dir.join("series.csv").exists());
    let echoed = ExperimentConfig::load(&dir.join("config.toml")).unwrap();
    assert_eq!(echoed.mode.name(), "bound-only");
}

#[test]
fn echoed_config_reproduces_the_run() {
    let tmp = tempfile::tempdir().unwrap();
    let config = ExperimentConfig::parse(VALIDATE).unwrap();
    let first = tmp.path().join("first");
    fs::create_dir(&first).unwrap();
    run_in_dir(&config, &first).unwrap();
    let echoed = ExperimentConfig::load(&first.join("config.toml")).unwrap();
    assert_eq!(echoed, config);
    let second = tmp.path().join("second");
    fs::create_dir(&second).unwrap();
    run_in_dir(&echoed, &second).unwrap();
    for f in ["series.csv", "bounds.csv", "inequalities.csv"] {
        assert_eq!(fs::read(first.join(f)).unwrap(), fs::read(second.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn sweep_rows_match_single_shot_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let base = VALIDATE
        .replace("mode = \"validate\"", "mode = \"sweep\"")
        .replace("p = 3.0", "p = 2.0")
        .replace("q = 2.0", "q = 1.6");
    let text = format!("{base}\n[sweep]\nparameter = \"b\"\nrange = [0.5, 4.0]\nsamples = 8\nmode = \"bound-only\"\n");
    let config = ExperimentConfig::parse(&text).unwrap();
    let dir = tmp.path().join("sweep");
    fs::create_dir(&dir).unwrap();
    let outcome = run_in_dir(&config, &dir).unwrap();
    assert_eq!(outcome.status, EXIT_OK);
    assert!(outcome.report.contains("bound nondecreasing in b: "));

    let csv = fs::read_to_string(dir.join("sweep.csv")).unwrap();
    let rows: Vec<Vec<String>> = csv.lines().skip(1).map(|l| l.split(',').map(String::from).collect()).collect();
    assert_eq!(rows.len(), 8);
    for (i, row) in rows.iter().enumerate() {
        let b: f64 = row[2].parse().unwrap();
        let single = config.sweep_instance(b).unwrap();
        let sdir = tmp.path().join(format!("single-{i}"));
        fs::create_dir(&sdir).unwrap();
        let o = run_in_dir(&single, &sdir).unwrap();
        let t: f64 = row[4].parse().unwrap();
        assert_eq!(t, o.bound.unwrap(), "row {i}");
        assert_eq!(
            fs::read(dir.join(format!("{i:03}")).join("bounds.csv")).unwrap(),
            fs::read(sdir.join("bounds.csv")).unwrap()
        );
    }
}

#[test]
fn inequality_suite_mode_counts_cases() {
    let tmp = tempfile::tempdir().unwrap();
    let text = "mode = \"inequality-suite\"\nseed = 9\n\n[inequality]\nresolution = 32\nper_combination = 1\n";
    let config = ExperimentConfig::parse(text).unwrap();
    let dir = tmp.path().join("s");
    fs::create_dir(&dir).unwrap();
    let o = run_in_dir(&config, &dir).unwrap();
    assert_eq!(o.status, EXIT_OK);
    assert!(o.report.contains("cases: 39, passed: 39"), "{}", o.report);
    let csv = fs::read_to_string(dir.join("inequalities.csv")).unwrap();
    assert_eq!(csv.lines().count(), 40);
}

#[test]
fn global_validate_checks_the_ceiling() {
    let tmp = tempfile::tempdir().unwrap();
    let text = VALIDATE
        .replace("m = 2.5", "m = 1.5")
        .replace("p = 3.0", "p = 2.0")
        .replace("q = 2.0", "q = 3.0")
        .replace("resolution = 32", "resolution = 32\nt_horizon = 2.0\nintegrator = \"rkc\"\ndt_max = 0.01");
    let config = ExperimentConfig::parse(&text).unwrap();
    let dir = tmp.path().join("g");
    fs::create_dir(&dir).unwrap();
    let o = run_in_dir(&config, &dir).unwrap();
    assert_eq!(o.status, EXIT_OK);
    assert!(o.report.contains("ceiling holds: yes"), "{}", o.report);
}

#[test]
fn failed_runs_leave_a_report() {
    let tmp = tempfile::tempdir().unwrap();
    let text = VALIDATE.replace("q = 2.0", "q = 1.4");
    let config = ExperimentConfig::parse(&text).unwrap();
    let dir = tmp.path().join("f");
    fs::create_dir(&dir).unwrap();
    assert!(run_in_dir(&config, &dir).is_err());
    let report = fs::read_to_string(dir.join("report.txt")).unwrap();
    assert!(report.contains("error:"));
}
