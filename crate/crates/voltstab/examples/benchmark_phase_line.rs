//! Phase-line picture of the bistable benchmark circuit: equilibria with
//! stability, then a fan of trajectories showing the two basins of
//! attraction separated by the unstable middle equilibrium.
//!
//! ```bash
//! cargo run -p voltstab --example benchmark_phase_line
//! ```

use voltstab::benchmark::benchmark_equilibria;
use voltstab::simcore::{BenchModel, ModelConfig, Scenario};
use voltstab::{run_simulation, BenchmarkParams};

fn main() {
    let params = BenchmarkParams::reference_circuit();
    println!("benchmark circuit: v1 = {}, r = {}, c = {}", params.v1, params.r, params.c);
    println!();

    println!("equilibria:");
    for eq in benchmark_equilibria(&params) {
        println!("  v2 = {:<12.8} {:?}", eq.v_eq, eq.classification);
    }
    println!();

    println!("trajectory fan (60 s, dt = 1 ms):");
    println!("{:>10} {:>14}", "v2(0)", "v2(60)");
    for v0 in [0.05, 0.3, 0.49, 0.51, 0.7, 1.1] {
        let scenario = Scenario {
            model: ModelConfig::Benchmark(BenchModel { bench: params, initial_v2: v0 }),
            duration: 60.0,
            dt: 0.001,
            output_stride: 100,
            disturbances: vec![],
        };
        let out = run_simulation(&scenario).expect("benchmark run");
        println!("{:>10} {:>14.8}", v0, out.final_sample().v2);
    }
    println!();
    println!("initial voltages below the middle equilibrium decay to the low");
    println!("stable point; above it they recover to the high one.");
}
