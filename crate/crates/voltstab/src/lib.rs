//! Voltage-stability toolkit for a two-node distribution circuit.
//!
//! The crate studies how load dynamics interact with the network's algebraic
//! power-flow constraint:
//!
//! - [`powerflow`] — closed-form voltage solutions of the two-node phasor
//!   circuit, voltage angle, complex-power round trips, and P-V curves.
//! - [`dynload`] — a generic recovery load whose internal states scale
//!   quadratic transient characteristics; its operating voltage is a root of
//!   a state-dependent quartic, chosen by a [`dynload::RootPolicy`].
//! - [`benchmark`] — a DC circuit (source, line resistance, capacitor in
//!   parallel with a tunnel diode) whose voltage is a physical state with up
//!   to three equilibria.
//! - [`simcore`] — fixed-step RK4 with the algebraic constraint re-solved at
//!   every stage, timed parameter steps, and premature termination when the
//!   constraint loses its real positive roots.
//! - [`numerics`] — polynomial root extraction (companion matrix plus
//!   bisection polish), bracketed refinement, and the dense sign-scan oracle.
//! - [`scenario`] / [`cli`] — TOML scenario files and the commands behind
//!   the `voltstab` binary.
//!
//! Runnable walk-throughs live in `examples/`; shipped scenario files in
//! `scenarios/`.

pub mod benchmark;
pub mod cli;
pub mod dynload;
pub mod numerics;
pub mod powerflow;
pub mod scenario;
pub mod simcore;

pub use benchmark::{benchmark_equilibria, BenchmarkParams, EquilibriumReport, Stability};
pub use dynload::{
    coupled_voltage, dl_equilibria, load_power, state_derivative, valid_region_scan,
    DlLoadParams, LoadState, RegionClass, RootPolicy,
};
pub use powerflow::{
    complex_power_at_node2, pv_curve, solve_voltage, voltage_angle, NetworkParams, PowerPoint,
    VoltageSolutions,
};
pub use scenario::{load_scenario, ScenarioFile};
pub use simcore::{
    run_simulation, Disturbance, DisturbanceTarget, DlInitial, ModelConfig, RunStatus, Scenario,
    SimulationOutcome, TrajectorySample,
};
