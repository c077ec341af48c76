//! CLI contract tests: exact CSV schemas and formatting, exit codes,
//! override flags, diagnostics routing, and scenario round trips for the
//! shipped files.

use std::path::{Path, PathBuf};
use std::process::Command;

fn voltstab_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_voltstab"))
}

fn scenario_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn write_temp(dir: &tempfile::TempDir, name: &str, content: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, content).unwrap();
    path
}

const RC_MINI: &str = r#"
[model]
kind = "benchmark"

[benchmark]
v1 = 1.0
r = 0.2
c = 10.0
h_coeffs = [0.0, 0.0, 0.0, 0.0, 0.0]

[simulation]
duration = 0.005
dt = 0.001
output_stride = 1
initial_v2 = 0.0
"#;

#[test]
fn simulate_benchmark_csv_is_pinned() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_temp(&dir, "rc.scenario", RC_MINI);
    let csv = dir.path().join("rc.csv");
    let out = voltstab_bin().arg("simulate").arg(&scenario).arg("-o").arg(&csv).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    // RC charging from zero: v(k ms) = 1 - exp(-t/2), 12 significant digits.
    let expected = "t,v2\n\
                    0,0\n\
                    0.001,0.000499875020831\n\
                    0.002,0.000999500166625\n\
                    0.003,0.00149887556229\n\
                    0.004,0.00199800133267\n\
                    0.005,0.00249687760254\n\
                    # status=Completed\n";
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), expected);
}

#[test]
fn simulate_dl_header_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("dl.csv");
    let out = voltstab_bin()
        .arg("simulate")
        .arg(scenario_path("dl_fig5.scenario"))
        .arg("-o")
        .arg(&csv)
        .args(["--duration", "0.05", "--dt", "0.01"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,v2,delta2,p2,q2,x,y");
    // 5 steps at stride 10: only t = 0 and the final boundary are recorded.
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("0,"));
    assert!(lines[2].starts_with("0.05,"));
    assert_eq!(lines[3], "# status=Completed");
}

#[test]
fn pv_curve_csv_is_pinned() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("pv.csv");
    let out = voltstab_bin()
        .arg("pv-curve")
        .arg(scenario_path("dl_fig5.scenario"))
        .args(["--k", "1", "--p-max", "8", "-n", "5", "-o"])
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    // p2 = 4 and 6 solve exactly ({0.8, 0.2} and {0.6, 0.4}); p2 = 8 lies
    // past the nose (6.25) and its row is omitted.
    let expected = "p2,v_upper,v_lower\n\
                    0,1,0\n\
                    2,0.912310562562,0.0876894374382\n\
                    4,0.8,0.2\n\
                    6,0.6,0.4\n\
                    # status=Completed\n";
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), expected);
}

#[test]
fn region_scan_csv_is_pinned_and_job_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let expected = "x,y,valid\n\
                    0,0,0\n\
                    3,0,1\n\
                    0,3,1\n\
                    3,3,1\n\
                    # status=Completed\n";
    for jobs in ["1", "3"] {
        let csv = dir.path().join(format!("region_{jobs}.csv"));
        let out = voltstab_bin()
            .arg("region-scan")
            .arg(scenario_path("dl_fig5.scenario"))
            .args(["--x-max", "3", "--y-max", "3", "--resolution", "2", "--jobs", jobs, "-o"])
            .arg(&csv)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(std::fs::read_to_string(&csv).unwrap(), expected, "jobs={jobs}");
    }
}

#[test]
fn equilibria_stdout_is_pinned() {
    let out = voltstab_bin()
        .arg("equilibria")
        .arg(scenario_path("benchmark_fig4.scenario"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "0.200001 Stable\n0.49999 Unstable\n0.900002 Stable\n"
    );
}

#[test]
fn premature_termination_exit_code_and_partial_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("case3.csv");
    let out = voltstab_bin()
        .arg("simulate")
        .arg(scenario_path("dl_case3.scenario"))
        .arg("-o")
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.lines().count() > 100, "partial trajectory must be written");
    let status = text.lines().last().unwrap();
    assert!(status.starts_with("# status=TerminatedNoRoot t="), "got: {status}");
    // Diagnostics go to stderr, not into the data file.
    assert!(String::from_utf8_lossy(&out.stderr).contains("terminated"));
}

#[test]
fn config_errors_exit_2_with_diagnostics() {
    // Missing file.
    let out = voltstab_bin()
        .arg("simulate")
        .arg("/nonexistent/missing.scenario")
        .args(["-o", "/tmp/unused.csv"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    // Unknown key: diagnostic must name the key and carry a position.
    let dir = tempfile::tempdir().unwrap();
    let bad = write_temp(
        &dir,
        "bad.scenario",
        &RC_MINI.replace("initial_v2 = 0.0", "initial_v2 = 0.0\nmystery_knob = 1"),
    );
    let out = voltstab_bin()
        .arg("simulate")
        .arg(&bad)
        .arg("-o")
        .arg(dir.path().join("unused.csv"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("mystery_knob"), "stderr: {stderr}");
    assert!(stderr.contains("line"), "stderr: {stderr}");

    // Disturbance target invalid for the model.
    let bad = write_temp(
        &dir,
        "badtarget.scenario",
        &format!("{RC_MINI}\n[[disturbance]]\nat_time = 0.001\ntarget = \"p0\"\ndelta = 1.0\n"),
    );
    let out = voltstab_bin()
        .arg("simulate")
        .arg(&bad)
        .arg("-o")
        .arg(dir.path().join("unused2.csv"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn shipped_scenarios_parse_and_round_trip() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("scenario") {
            continue;
        }
        seen += 1;
        let text = std::fs::read_to_string(&path).unwrap();
        let file = voltstab::ScenarioFile::parse(&text)
            .unwrap_or_else(|e| panic!("{} does not parse: {e}", path.display()));
        let scenario = file
            .to_scenario()
            .unwrap_or_else(|e| panic!("{} is not a valid scenario: {e}", path.display()));
        let rewritten = voltstab::ScenarioFile::from_scenario(&scenario).to_toml();
        let reparsed = voltstab::ScenarioFile::parse(&rewritten)
            .unwrap()
            .to_scenario()
            .unwrap();
        assert_eq!(scenario, reparsed, "round trip changed {}", path.display());
    }
    assert_eq!(seen, 6, "expected the six shipped scenario files");
}
