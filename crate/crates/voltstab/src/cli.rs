//! Command implementations behind the `voltstab` binary: scenario-driven
//! simulation, equilibrium listings, P-V curve sampling, and load-state
//! region scans. Data goes to files, diagnostics to stderr, and exit codes
//! follow a fixed contract:
//!
//! * 0 — success (simulation ran to completion)
//! * 2 — configuration error (unreadable/invalid scenario, bad arguments)
//! * 3 — simulation terminated prematurely on root loss (partial CSV is
//!   still written)

use crate::dynload::{self, RegionClass};
use crate::powerflow::{self, PvPoint};
use crate::scenario::load_scenario;
use crate::simcore::{run_simulation, ModelConfig, RunStatus, Scenario, SimulationOutcome};
use std::io::Write;
use std::path::Path;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_TERMINATED: i32 = 3;

/// Significant digits used for all CSV numeric fields.
pub const CSV_SIG_DIGITS: usize = 12;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Optional overrides applied on top of the scenario file.
#[derive(Debug, Clone, Copy, Default)]
pub struct SimOverrides {
    pub dt: Option<f64>,
    pub duration: Option<f64>,
}

fn load(scenario_path: &Path) -> Result<Scenario, CliError> {
    load_scenario(scenario_path).map_err(|e| CliError::Config(e.to_string()))
}

fn report(result: Result<i32, CliError>) -> i32 {
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("voltstab: error: {e}");
            EXIT_CONFIG
        }
    }
}

/// Runs a scenario and writes the trajectory CSV. Premature termination
/// still writes the partial trajectory and maps to exit code 3.
pub fn cmd_simulate(scenario_path: &Path, output_path: &Path, overrides: SimOverrides) -> i32 {
    report((|| {
        let mut scenario = load(scenario_path)?;
        if let Some(dt) = overrides.dt {
            scenario.dt = dt;
        }
        if let Some(duration) = overrides.duration {
            scenario.duration = duration;
        }
        let outcome = run_simulation(&scenario).map_err(|e| CliError::Config(e.to_string()))?;
        let is_dl = matches!(scenario.model, ModelConfig::DynamicLoad(_));
        write_output(output_path, |w| write_simulation_csv(w, &outcome, is_dl))?;
        match outcome.status {
            RunStatus::Completed => Ok(EXIT_OK),
            RunStatus::TerminatedNoRoot { at_time } => {
                eprintln!(
                    "voltstab: simulation terminated at t={}: no real positive voltage root",
                    fmt_sig(at_time, CSV_SIG_DIGITS)
                );
                Ok(EXIT_TERMINATED)
            }
        }
    })())
}

/// Prints equilibrium voltages (ascending, 6 significant digits) to stdout;
/// benchmark equilibria carry their stability classification.
pub fn cmd_equilibria(scenario_path: &Path) -> i32 {
    report((|| {
        let scenario = load(scenario_path)?;
        match &scenario.model {
            ModelConfig::DynamicLoad(dl) => {
                let eqs = dynload::dl_equilibria(&dl.load, &dl.network)
                    .map_err(|e| CliError::Config(e.to_string()))?;
                for v in eqs {
                    println!("{}", fmt_sig(v, 6));
                }
            }
            ModelConfig::Benchmark(b) => {
                for eq in crate::benchmark::benchmark_equilibria(&b.bench) {
                    let label = match eq.classification {
                        crate::benchmark::Stability::Stable => "Stable",
                        crate::benchmark::Stability::Unstable => "Unstable",
                        crate::benchmark::Stability::Marginal => "Marginal",
                    };
                    println!("{} {}", fmt_sig(eq.v_eq, 6), label);
                }
            }
        }
        Ok(EXIT_OK)
    })())
}

/// Samples the P-V curve of a dynamic-load scenario's network at power
/// factor ratio `k`, writing `n` evenly spaced samples on `[0, p_max]`.
pub fn cmd_pv_curve(
    scenario_path: &Path,
    k: f64,
    p_max: f64,
    n: usize,
    output_path: &Path,
) -> i32 {
    report((|| {
        if n < 2 {
            return Err(CliError::Config(format!("need at least 2 samples, got {n}")));
        }
        if p_max <= 0.0 || p_max.is_nan() {
            return Err(CliError::Config(format!("p_max must be positive, got {p_max}")));
        }
        let scenario = load(scenario_path)?;
        let net = match &scenario.model {
            ModelConfig::DynamicLoad(dl) => dl.network,
            ModelConfig::Benchmark(_) => {
                return Err(CliError::Config(
                    "pv-curve needs a dynamic_load scenario (it samples the phasor network)"
                        .into(),
                ))
            }
        };
        let samples: Vec<f64> = (0..n)
            .map(|i| p_max * i as f64 / (n - 1) as f64)
            .collect();
        let points =
            powerflow::pv_curve(&net, k, &samples).map_err(|e| CliError::Config(e.to_string()))?;
        write_output(output_path, |w| write_pv_csv(w, &points))?;
        Ok(EXIT_OK)
    })())
}

/// Classifies the `[0, x_max] x [0, y_max]` load-state grid and writes one
/// row per cell. `jobs` splits grid rows across threads; the output order is
/// the same regardless.
pub fn cmd_region_scan(
    scenario_path: &Path,
    x_max: f64,
    y_max: f64,
    resolution: usize,
    jobs: usize,
    output_path: &Path,
) -> i32 {
    report((|| {
        let scenario = load(scenario_path)?;
        let dl = match &scenario.model {
            ModelConfig::DynamicLoad(dl) => dl,
            ModelConfig::Benchmark(_) => {
                return Err(CliError::Config(
                    "region-scan needs a dynamic_load scenario".into(),
                ))
            }
        };
        if resolution < 2 {
            return Err(CliError::Config(format!(
                "resolution must be at least 2, got {resolution}"
            )));
        }
        if jobs == 0 {
            return Err(CliError::Config("jobs must be at least 1".into()));
        }
        let grid = scan_parallel(&dl.load, &dl.network, x_max, y_max, resolution, jobs)
            .map_err(|e| CliError::Config(e.to_string()))?;
        write_output(output_path, |w| write_region_csv(w, &grid))?;
        Ok(EXIT_OK)
    })())
}

struct ScanRows {
    x_values: Vec<f64>,
    y_values: Vec<f64>,
    /// One entry per (y, x) pair, x fastest.
    valid: Vec<bool>,
}

fn scan_parallel(
    load: &dynload::DlLoadParams,
    net: &crate::powerflow::NetworkParams,
    x_max: f64,
    y_max: f64,
    resolution: usize,
    jobs: usize,
) -> Result<ScanRows, dynload::DynLoadError> {
    let axis = |hi: f64| -> Vec<f64> {
        (0..resolution)
            .map(|i| hi * i as f64 / (resolution - 1) as f64)
            .collect()
    };
    let x_values = axis(x_max);
    let y_values = axis(y_max);

    let classify_row = |y: f64| -> Result<Vec<bool>, dynload::DynLoadError> {
        x_values
            .iter()
            .map(|&x| {
                dynload::classify_region_point(load, net, &dynload::LoadState::new(x, y))
                    .map(|c| c == RegionClass::TwoRoots)
            })
            .collect()
    };

    let rows: Vec<Result<Vec<bool>, dynload::DynLoadError>> = if jobs <= 1 {
        y_values.iter().map(|&y| classify_row(y)).collect()
    } else {
        let mut rows: Vec<Option<Result<Vec<bool>, dynload::DynLoadError>>> =
            (0..resolution).map(|_| None).collect();
        let chunk = resolution.div_ceil(jobs);
        std::thread::scope(|scope| {
            for (ys, out) in y_values.chunks(chunk).zip(rows.chunks_mut(chunk)) {
                scope.spawn(move || {
                    for (y, slot) in ys.iter().zip(out.iter_mut()) {
                        *slot = Some(classify_row(*y));
                    }
                });
            }
        });
        rows.into_iter().map(|r| r.expect("all rows scanned")).collect()
    };

    let mut valid = Vec::with_capacity(resolution * resolution);
    for row in rows {
        valid.extend(row?);
    }
    Ok(ScanRows { x_values, y_values, valid })
}

fn write_output<F>(path: &Path, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> std::io::Result<()>,
{
    let wrap = |source: std::io::Error| CliError::Output {
        path: path.display().to_string(),
        source,
    };
    let file = std::fs::File::create(path).map_err(wrap)?;
    let mut writer = std::io::BufWriter::new(file);
    body(&mut writer).map_err(wrap)?;
    writer.flush().map_err(wrap)
}

fn write_simulation_csv(
    w: &mut dyn Write,
    outcome: &SimulationOutcome,
    is_dl: bool,
) -> std::io::Result<()> {
    if is_dl {
        writeln!(w, "t,v2,delta2,p2,q2,x,y")?;
        for s in &outcome.samples {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                fmt_sig(s.t, CSV_SIG_DIGITS),
                fmt_sig(s.v2, CSV_SIG_DIGITS),
                fmt_sig(s.delta2.unwrap_or(0.0), CSV_SIG_DIGITS),
                fmt_sig(s.p2.unwrap_or(0.0), CSV_SIG_DIGITS),
                fmt_sig(s.q2.unwrap_or(0.0), CSV_SIG_DIGITS),
                fmt_sig(s.x.unwrap_or(0.0), CSV_SIG_DIGITS),
                fmt_sig(s.y.unwrap_or(0.0), CSV_SIG_DIGITS),
            )?;
        }
    } else {
        writeln!(w, "t,v2")?;
        for s in &outcome.samples {
            writeln!(
                w,
                "{},{}",
                fmt_sig(s.t, CSV_SIG_DIGITS),
                fmt_sig(s.v2, CSV_SIG_DIGITS)
            )?;
        }
    }
    write_status_comment(w, Some(outcome.status))
}

fn write_pv_csv(w: &mut dyn Write, points: &[PvPoint]) -> std::io::Result<()> {
    writeln!(w, "p2,v_upper,v_lower")?;
    for pt in points {
        if let Some(b) = pt.branches {
            writeln!(
                w,
                "{},{},{}",
                fmt_sig(pt.p2, CSV_SIG_DIGITS),
                fmt_sig(b.upper, CSV_SIG_DIGITS),
                fmt_sig(b.lower, CSV_SIG_DIGITS)
            )?;
        }
    }
    write_status_comment(w, None)
}

fn write_region_csv(w: &mut dyn Write, grid: &ScanRows) -> std::io::Result<()> {
    writeln!(w, "x,y,valid")?;
    let nx = grid.x_values.len();
    for (i, ok) in grid.valid.iter().enumerate() {
        writeln!(
            w,
            "{},{},{}",
            fmt_sig(grid.x_values[i % nx], CSV_SIG_DIGITS),
            fmt_sig(grid.y_values[i / nx], CSV_SIG_DIGITS),
            u8::from(*ok)
        )?;
    }
    write_status_comment(w, None)
}

fn write_status_comment(w: &mut dyn Write, status: Option<RunStatus>) -> std::io::Result<()> {
    match status {
        None | Some(RunStatus::Completed) => writeln!(w, "# status=Completed"),
        Some(RunStatus::TerminatedNoRoot { at_time }) => {
            writeln!(w, "# status=TerminatedNoRoot t={}", fmt_sig(at_time, CSV_SIG_DIGITS))
        }
    }
}

/// Formats with `sig` significant digits in plain decimal notation,
/// switching to exponent form outside [1e-4, 1e12) like C's `%g`, and
/// trimming trailing zeros.
pub fn fmt_sig(v: f64, sig: usize) -> String {
    assert!(sig >= 1);
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{:.*e}", sig - 1, v);
    let (_, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("valid exponent");
    if exp >= -4 && exp < sig as i32 {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}"))
    } else {
        let (mantissa, _) = sci.split_once('e').unwrap();
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(fmt_sig(0.0, 12), "0");
        assert_eq!(fmt_sig(-0.0, 12), "0");
        assert_eq!(fmt_sig(1.0, 12), "1");
        assert_eq!(fmt_sig(6.25, 12), "6.25");
        assert_eq!(fmt_sig(0.01, 12), "0.01");
        assert_eq!(fmt_sig(0.961171687744137, 12), "0.961171687744");
        assert_eq!(fmt_sig(2.889_862_365_317_578e-4, 12), "0.000288986236532");
        assert_eq!(fmt_sig(2.8898623653175783e-5, 12), "2.88986236532e-5");
        assert_eq!(fmt_sig(-1.5, 12), "-1.5");
        assert_eq!(fmt_sig(1.23456789e13, 12), "1.23456789e13");
        assert_eq!(fmt_sig(0.9612, 6), "0.9612");
        assert_eq!(fmt_sig(0.96117168774, 6), "0.961172");
    }

    #[test]
    fn region_rows_are_x_fastest() {
        let load = dynload::DlLoadParams::new(1.0, 1.0, 0.5625, 3.0, 1.0, 1.0).unwrap();
        let net = crate::powerflow::NetworkParams::symmetric(1.0, 0.02).unwrap();
        let grid = scan_parallel(&load, &net, 2.0, 2.0, 3, 1).unwrap();
        assert_eq!(grid.x_values, vec![0.0, 1.0, 2.0]);
        assert_eq!(grid.valid.len(), 9);
        // parallel scan must match the serial one cell for cell
        let par = scan_parallel(&load, &net, 2.0, 2.0, 3, 4).unwrap();
        assert_eq!(grid.valid, par.valid);
    }
}
