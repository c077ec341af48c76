use clap::{Parser, Subcommand};
use std::path::PathBuf;
use voltstab::cli::{self, SimOverrides};

/// Voltage-stability studies on a two-node distribution circuit.
#[derive(Parser)]
#[command(name = "voltstab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Override the integrator step of the scenario file (seconds).
    #[arg(long, global = true)]
    dt: Option<f64>,

    /// Override the simulated duration of the scenario file (seconds).
    #[arg(long, global = true)]
    duration: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write the trajectory as CSV.
    Simulate {
        scenario: PathBuf,
        /// Output CSV path.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Print the scenario's equilibrium voltages (with stability for the
    /// benchmark model).
    Equilibria { scenario: PathBuf },
    /// Sample the P-V curve of the scenario's network at a fixed power
    /// factor ratio.
    PvCurve {
        scenario: PathBuf,
        /// Reactive-to-real power ratio q2/p2.
        #[arg(long)]
        k: f64,
        /// Largest sampled real power (p.u.).
        #[arg(long)]
        p_max: f64,
        /// Number of evenly spaced samples on [0, p_max].
        #[arg(short, long, default_value_t = 201)]
        n: usize,
        /// Output CSV path.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Classify the load-state grid by the number of admissible voltages.
    RegionScan {
        scenario: PathBuf,
        /// Upper edge of the scanned x range (lower edge is 0).
        #[arg(long, default_value_t = 3.0)]
        x_max: f64,
        /// Upper edge of the scanned y range (lower edge is 0).
        #[arg(long, default_value_t = 3.0)]
        y_max: f64,
        /// Grid cells per axis.
        #[arg(long, default_value_t = 60)]
        resolution: usize,
        /// Worker threads for the scan.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Output CSV path.
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn main() {
    let args = Cli::parse();
    let overrides = SimOverrides { dt: args.dt, duration: args.duration };
    let code = match args.command {
        Command::Simulate { scenario, output } => {
            cli::cmd_simulate(&scenario, &output, overrides)
        }
        Command::Equilibria { scenario } => cli::cmd_equilibria(&scenario),
        Command::PvCurve { scenario, k, p_max, n, output } => {
            cli::cmd_pv_curve(&scenario, k, p_max, n, &output)
        }
        Command::RegionScan { scenario, x_max, y_max, resolution, jobs, output } => {
            cli::cmd_region_scan(&scenario, x_max, y_max, resolution, jobs, &output)
        }
    };
    std::process::exit(code);
}
