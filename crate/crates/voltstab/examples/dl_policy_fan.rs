//! The root-policy split of the recovery-load model: one set of initial
//! load states, simulated twice. An initial (x, y) admits two operating
//! voltages, and the chosen root decides which equilibrium the run reaches
//! - the model cannot visit both branches in a single run.
//!
//! ```bash
//! cargo run -p voltstab --example dl_policy_fan
//! ```

use voltstab::dynload::{dl_equilibria, LoadState, RootPolicy};
use voltstab::simcore::{DlInitial, DlModel, ModelConfig, Scenario};
use voltstab::{run_simulation, DlLoadParams, NetworkParams};

fn main() {
    let net = NetworkParams::symmetric(1.0, 0.02).unwrap();
    let load = DlLoadParams::new(1.0, 1.0, 0.5625, 3.0, 1.0, 1.0).unwrap();
    let eqs = dl_equilibria(&load, &net).unwrap();
    println!("equilibrium voltages: {:.10} and {:.10}", eqs[0], eqs[1]);
    println!();

    let fan = [
        LoadState::new(0.2, 0.2),
        LoadState::new(0.5, 1.5),
        LoadState::new(1.5, 0.5),
        LoadState::new(2.0, 2.0),
    ];

    for policy in [RootPolicy::Maximum, RootPolicy::Minimum] {
        println!("policy = {policy:?}");
        println!("{:>12} {:>12} {:>16}", "x(0)", "y(0)", "v2(50 s)");
        for state in fan {
            let scenario = Scenario {
                model: ModelConfig::DynamicLoad(DlModel {
                    network: net,
                    load,
                    policy,
                    initial: DlInitial::State(state),
                }),
                duration: 50.0,
                dt: 0.001,
                output_stride: 100,
                disturbances: vec![],
            };
            let out = run_simulation(&scenario).expect("fan run");
            println!("{:>12} {:>12} {:>16.10}", state.x, state.y, out.final_sample().v2);
        }
        println!();
    }
    println!("maximum-root runs ride the upper branch into the high equilibrium;");
    println!("minimum-root runs ride the lower branch into the low equilibrium.");
}
