//! Load-step response of the recovery-load model in three regimes: the
//! stepped system keeps two equilibria (the run settles on the new high
//! one), keeps only v2 = 0, or keeps none. In the last two the run stops
//! prematurely when the voltage constraint loses its real positive roots -
//! the model cannot show what happens beyond that point.
//!
//! ```bash
//! cargo run -p voltstab --example dl_disturbances
//! ```

use voltstab::dynload::dl_equilibria;
use voltstab::simcore::{DlInitial, DlModel, ModelConfig, RunStatus, Scenario};
use voltstab::{
    run_simulation, DlLoadParams, Disturbance, DisturbanceTarget, NetworkParams, RootPolicy,
};

struct Case {
    name: &'static str,
    load: DlLoadParams,
    p_step: f64,
    q_step: f64,
    start_voltage: f64,
    duration: f64,
}

fn main() {
    let net = NetworkParams::symmetric(1.0, 0.02).unwrap();
    let cases = [
        Case {
            name: "case 1: 5+j5 -> 6+j6 (two equilibria survive)",
            load: DlLoadParams::new(5.0, 5.0, 0.0, 0.0, 1.0, 1.0).unwrap(),
            p_step: 1.0,
            q_step: 1.0,
            start_voltage: 0.723606797749979,
            duration: 120.0,
        },
        Case {
            name: "case 2: p-only 12 -> 18 (single equilibrium, at v2 = 0)",
            load: DlLoadParams::new(12.0, 0.0, 0.5625, 3.0, 1.0, 1.0).unwrap(),
            p_step: 6.0,
            q_step: 0.0,
            start_voltage: 0.6730104203344093,
            duration: 30.0,
        },
        Case {
            name: "case 3: 5+j5 -> 8+j8 (no equilibria survive)",
            load: DlLoadParams::new(5.0, 5.0, 0.0, 0.0, 1.0, 1.0).unwrap(),
            p_step: 3.0,
            q_step: 3.0,
            start_voltage: 0.723606797749979,
            duration: 30.0,
        },
    ];

    for case in cases {
        println!("{}", case.name);
        let mut stepped = case.load;
        stepped.p0 += case.p_step;
        stepped.q0 += case.q_step;
        let post = dl_equilibria(&stepped, &net).unwrap();
        println!("  stepped-system equilibria: {post:?}");

        let mut disturbances = vec![Disturbance {
            at_time: 1.0,
            target: DisturbanceTarget::P0,
            delta: case.p_step,
        }];
        if case.q_step != 0.0 {
            disturbances.push(Disturbance {
                at_time: 1.0,
                target: DisturbanceTarget::Q0,
                delta: case.q_step,
            });
        }
        let scenario = Scenario {
            model: ModelConfig::DynamicLoad(DlModel {
                network: net,
                load: case.load,
                policy: RootPolicy::Maximum,
                initial: DlInitial::SteadyStateAt(case.start_voltage),
            }),
            duration: case.duration,
            dt: 0.001,
            output_stride: 10,
            disturbances,
        };
        let out = run_simulation(&scenario).expect("case run");
        let last = out.final_sample();
        match out.status {
            RunStatus::Completed => {
                println!("  completed: v2({}) = {:.8}", last.t, last.v2);
            }
            RunStatus::TerminatedNoRoot { at_time } => {
                println!(
                    "  terminated at t = {:.3} s (no real positive voltage root); last v2 = {:.6}",
                    at_time, last.v2
                );
            }
        }
        println!();
    }
}
