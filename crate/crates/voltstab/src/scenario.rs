//! Scenario files: a TOML document with `[model]`, `[network]`, `[load]` or
//! `[benchmark]`, and `[simulation]` sections plus repeated `[[disturbance]]`
//! entries. Unknown keys are rejected, parse failures carry line/column
//! positions, and a parsed scenario serializes back to an equivalent file.
//!
//! ```toml
//! [model]
//! kind = "dynamic_load"
//! policy = "maximum"
//!
//! [network]
//! v1 = 1.0
//! r = 0.02
//! x = 0.02
//!
//! [load]
//! p0 = 1.0
//! q0 = 1.0
//! a = 0.5625
//! b = 3.0
//! tp = 1.0
//! tq = 1.0
//!
//! [simulation]
//! duration = 30.0
//! initial_x = 0.5
//! initial_y = 0.5
//!
//! [[disturbance]]
//! at_time = 1.0
//! target = "p0"
//! delta = 1.0
//! ```

use crate::benchmark::BenchmarkParams;
use crate::dynload::{DlLoadParams, LoadState, RootPolicy};
use crate::powerflow::NetworkParams;
use crate::simcore::{
    BenchModel, Disturbance, DlInitial, DlModel, ModelConfig, Scenario, SimError, DEFAULT_DT,
    DEFAULT_OUTPUT_STRIDE,
};
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(#[from] toml::de::Error),
    #[error("{0}")]
    Semantic(String),
    #[error(transparent)]
    Invalid(#[from] SimError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    DynamicLoad,
    Benchmark,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub kind: ModelKind,
    /// Root-selection policy; dynamic-load scenarios only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub policy: Option<RootPolicy>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SimulationSection {
    pub duration: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_stride: Option<usize>,
    /// Dynamic load: start on the steady-state characteristics at this
    /// voltage. Mutually exclusive with `initial_x`/`initial_y`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steady_state_at: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_x: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_y: Option<f64>,
    /// Benchmark: the initial capacitor voltage.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_v2: Option<f64>,
}

/// Direct image of a scenario file on disk.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub model: ModelSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub network: Option<NetworkParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub load: Option<DlLoadParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub benchmark: Option<BenchmarkParams>,
    pub simulation: SimulationSection,
    #[serde(default, rename = "disturbance", skip_serializing_if = "Vec::is_empty")]
    pub disturbances: Vec<Disturbance>,
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        Ok(toml::from_str(text)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("scenario files always serialize")
    }

    /// Validates section consistency and builds the runnable scenario.
    pub fn to_scenario(&self) -> Result<Scenario, ScenarioError> {
        let sim = &self.simulation;
        let model = match self.model.kind {
            ModelKind::DynamicLoad => {
                let network = self.network.ok_or_else(|| {
                    ScenarioError::Semantic("dynamic_load scenarios need a [network] section".into())
                })?;
                let load = self.load.ok_or_else(|| {
                    ScenarioError::Semantic("dynamic_load scenarios need a [load] section".into())
                })?;
                if self.benchmark.is_some() {
                    return Err(ScenarioError::Semantic(
                        "[benchmark] section is not valid for a dynamic_load scenario".into(),
                    ));
                }
                let policy = self.model.policy.ok_or_else(|| {
                    ScenarioError::Semantic(
                        "dynamic_load scenarios need `policy` in [model]".into(),
                    )
                })?;
                if sim.initial_v2.is_some() {
                    return Err(ScenarioError::Semantic(
                        "`initial_v2` is not valid for a dynamic_load scenario".into(),
                    ));
                }
                let initial = match (sim.steady_state_at, sim.initial_x, sim.initial_y) {
                    (Some(v), None, None) => DlInitial::SteadyStateAt(v),
                    (None, Some(x), Some(y)) => DlInitial::State(LoadState::new(x, y)),
                    _ => {
                        return Err(ScenarioError::Semantic(
                            "dynamic_load scenarios need either `steady_state_at` or both \
                             `initial_x` and `initial_y` in [simulation]"
                                .into(),
                        ))
                    }
                };
                ModelConfig::DynamicLoad(DlModel { network, load, policy, initial })
            }
            ModelKind::Benchmark => {
                let bench = self.benchmark.ok_or_else(|| {
                    ScenarioError::Semantic("benchmark scenarios need a [benchmark] section".into())
                })?;
                if self.network.is_some() || self.load.is_some() {
                    return Err(ScenarioError::Semantic(
                        "[network]/[load] sections are not valid for a benchmark scenario".into(),
                    ));
                }
                if self.model.policy.is_some() {
                    return Err(ScenarioError::Semantic(
                        "`policy` is not valid for a benchmark scenario".into(),
                    ));
                }
                if sim.steady_state_at.is_some() || sim.initial_x.is_some() || sim.initial_y.is_some()
                {
                    return Err(ScenarioError::Semantic(
                        "benchmark scenarios take `initial_v2`, not load-state initials".into(),
                    ));
                }
                let initial_v2 = sim.initial_v2.ok_or_else(|| {
                    ScenarioError::Semantic(
                        "benchmark scenarios need `initial_v2` in [simulation]".into(),
                    )
                })?;
                ModelConfig::Benchmark(BenchModel { bench, initial_v2 })
            }
        };

        let scenario = Scenario {
            model,
            duration: sim.duration,
            dt: sim.dt.unwrap_or(DEFAULT_DT),
            output_stride: sim.output_stride.unwrap_or(DEFAULT_OUTPUT_STRIDE),
            disturbances: self.disturbances.clone(),
        };
        scenario.validate()?;
        Ok(scenario)
    }

    /// Inverse of `to_scenario`, used for round-trip checks and tooling.
    pub fn from_scenario(scenario: &Scenario) -> Self {
        let mut file = ScenarioFile {
            model: ModelSection { kind: ModelKind::Benchmark, policy: None },
            network: None,
            load: None,
            benchmark: None,
            simulation: SimulationSection {
                duration: scenario.duration,
                dt: Some(scenario.dt),
                output_stride: Some(scenario.output_stride),
                steady_state_at: None,
                initial_x: None,
                initial_y: None,
                initial_v2: None,
            },
            disturbances: scenario.disturbances.clone(),
        };
        match &scenario.model {
            ModelConfig::DynamicLoad(dl) => {
                file.model = ModelSection {
                    kind: ModelKind::DynamicLoad,
                    policy: Some(dl.policy),
                };
                file.network = Some(dl.network);
                file.load = Some(dl.load);
                match dl.initial {
                    DlInitial::SteadyStateAt(v) => file.simulation.steady_state_at = Some(v),
                    DlInitial::State(s) => {
                        file.simulation.initial_x = Some(s.x);
                        file.simulation.initial_y = Some(s.y);
                    }
                }
            }
            ModelConfig::Benchmark(b) => {
                file.benchmark = Some(b.bench);
                file.simulation.initial_v2 = Some(b.initial_v2);
            }
        }
        file
    }
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: &Path) -> Result<Scenario, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    })?;
    ScenarioFile::parse(&text)?.to_scenario()
}
