//! Working with scenario files: parse one of the shipped files, inspect it,
//! tweak it in memory, and serialize it back to TOML.
//!
//! ```bash
//! cargo run -p voltstab --example scenario_files
//! ```

use std::path::Path;
use voltstab::simcore::ModelConfig;
use voltstab::{run_simulation, RunStatus, ScenarioFile};

fn main() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/dl_case3.scenario");
    let text = std::fs::read_to_string(&path).expect("shipped scenario readable");
    let file = ScenarioFile::parse(&text).expect("parses");
    let scenario = file.to_scenario().expect("valid");

    println!("loaded {}", path.display());
    println!("  duration = {} s, dt = {} s", scenario.duration, scenario.dt);
    println!("  disturbances: {:?}", scenario.disturbances);
    if let ModelConfig::DynamicLoad(dl) = &scenario.model {
        println!("  load: p0 = {}, q0 = {}, policy = {:?}", dl.load.p0, dl.load.q0, dl.policy);
    }
    println!();

    let out = run_simulation(&scenario).expect("runs");
    match out.status {
        RunStatus::Completed => println!("run completed at t = {}", out.final_sample().t),
        RunStatus::TerminatedNoRoot { at_time } => {
            println!("run terminated at t = {at_time:.3} s on root loss (as this case should)")
        }
    }
    println!();

    // Soften the step so the run completes, then write the edited file back
    // out as TOML.
    let mut edited = scenario.clone();
    for d in &mut edited.disturbances {
        d.delta = 0.5;
    }
    let out = run_simulation(&edited).expect("softened run");
    println!("with the step softened to +0.5: {:?}", out.status);
    println!();
    println!("edited scenario as TOML:");
    println!("{}", ScenarioFile::from_scenario(&edited).to_toml());
}
