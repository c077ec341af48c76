//! Fixed-step time-domain engine: classical RK4 with the algebraic voltage
//! constraint re-solved at every stage for the recovery-load model, plain
//! ODE stepping for the benchmark circuit, timed parameter steps, trajectory
//! recording, and premature-termination handling when the constraint loses
//! its real positive roots.

use crate::benchmark::{self, BenchmarkParams};
use crate::dynload::{
    coupled_voltage, load_power, state_derivative, DlLoadParams, DynLoadError, LoadState,
    RootPolicy,
};
use crate::powerflow::{voltage_angle, NetworkParams};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("invalid scenario: {0}")]
    Config(String),
    #[error("disturbance target `{target}` is not valid for the {model} model")]
    UnknownTarget { target: String, model: &'static str },
    #[error("numerical failure: {0}")]
    Numeric(String),
}

/// Parameter identifiers a disturbance may step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DisturbanceTarget {
    P0,
    Q0,
    V1,
    R,
    X,
    C,
}

impl DisturbanceTarget {
    pub fn name(&self) -> &'static str {
        match self {
            Self::P0 => "p0",
            Self::Q0 => "q0",
            Self::V1 => "v1",
            Self::R => "r",
            Self::X => "x",
            Self::C => "c",
        }
    }
}

/// A timed additive parameter step. Applied on the first step boundary at or
/// after `at_time`; parameters mutate between steps, never inside one.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Disturbance {
    pub at_time: f64,
    pub target: DisturbanceTarget,
    pub delta: f64,
}

/// Initial condition of a recovery-load run: either explicit states, or
/// states placed on the steady-state characteristics at a given voltage
/// (`x = ps(v)/pt(v)`, `y = qs(v)/qt(v)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DlInitial {
    State(LoadState),
    SteadyStateAt(f64),
}

/// Recovery-load model configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct DlModel {
    pub network: NetworkParams,
    pub load: DlLoadParams,
    pub policy: RootPolicy,
    pub initial: DlInitial,
}

/// Benchmark circuit configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchModel {
    pub bench: BenchmarkParams,
    pub initial_v2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelConfig {
    DynamicLoad(DlModel),
    Benchmark(BenchModel),
}

impl ModelConfig {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::DynamicLoad(_) => "dynamic_load",
            Self::Benchmark(_) => "benchmark",
        }
    }
}

pub const DEFAULT_DT: f64 = 0.001;
pub const DEFAULT_OUTPUT_STRIDE: usize = 10;

/// One declarative simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub model: ModelConfig,
    /// Simulated time span (s).
    pub duration: f64,
    /// Fixed integrator step (s).
    pub dt: f64,
    /// Steps between recorded samples.
    pub output_stride: usize,
    /// Must be sorted by `at_time`.
    pub disturbances: Vec<Disturbance>,
}

impl Scenario {
    pub fn validate(&self) -> Result<(), SimError> {
        if self.duration <= 0.0 || !self.duration.is_finite() {
            return Err(SimError::Config(format!(
                "duration must be positive, got {}",
                self.duration
            )));
        }
        if self.dt <= 0.0 || !self.dt.is_finite() {
            return Err(SimError::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if self.dt > self.duration {
            return Err(SimError::Config(format!(
                "dt ({}) exceeds duration ({})",
                self.dt, self.duration
            )));
        }
        if self.output_stride == 0 {
            return Err(SimError::Config("output_stride must be at least 1".into()));
        }
        if self.disturbances.windows(2).any(|w| w[0].at_time > w[1].at_time) {
            return Err(SimError::Config("disturbances must be sorted by at_time".into()));
        }
        if let Some(d) = self.disturbances.iter().find(|d| d.at_time < 0.0) {
            return Err(SimError::Config(format!(
                "disturbance at_time must be nonnegative, got {}",
                d.at_time
            )));
        }
        // Every target must be applicable to the model kind.
        let mut probe = self.model.clone();
        for d in &self.disturbances {
            apply_disturbance_in_place(&mut probe, &Disturbance { delta: 0.0, ..*d })?;
        }
        match &self.model {
            ModelConfig::DynamicLoad(dl) => {
                dl.network.validate().map_err(|e| SimError::Config(e.to_string()))?;
                dl.load.validate().map_err(|e| SimError::Config(e.to_string()))?;
                if let DlInitial::SteadyStateAt(v) = dl.initial {
                    if v < 0.0 || v.is_nan() {
                        return Err(SimError::Config(format!(
                            "steady-state initial voltage must be nonnegative, got {v}"
                        )));
                    }
                }
            }
            ModelConfig::Benchmark(b) => {
                b.bench.validate().map_err(|e| SimError::Config(e.to_string()))?;
                if !b.initial_v2.is_finite() {
                    return Err(SimError::Config("initial_v2 must be finite".into()));
                }
            }
        }
        Ok(())
    }
}

/// One recorded trajectory point. Angle and load states are absent for
/// benchmark runs; load power is absent there too (the benchmark records
/// voltage only).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub v2: f64,
    pub delta2: Option<f64>,
    pub p2: Option<f64>,
    pub q2: Option<f64>,
    pub x: Option<f64>,
    pub y: Option<f64>,
}

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RunStatus {
    Completed,
    /// The algebraic constraint lost its real positive roots. `at_time` is
    /// the boundary of the step whose solve failed; the recorded samples end
    /// at or before it.
    TerminatedNoRoot { at_time: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationOutcome {
    pub status: RunStatus,
    pub samples: Vec<TrajectorySample>,
}

impl SimulationOutcome {
    pub fn final_sample(&self) -> &TrajectorySample {
        self.samples.last().expect("outcome always carries samples")
    }
}

/// Classical fourth-order Runge-Kutta step. The evaluator may fail (the
/// recovery-load stages re-solve the voltage constraint); any stage failure
/// aborts the whole step.
pub fn rk4_step<const N: usize, E, F>(
    mut f: F,
    t: f64,
    state: &[f64; N],
    dt: f64,
) -> Result<[f64; N], E>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N], E>,
{
    let half = 0.5 * dt;
    let k1 = f(t, state)?;
    let k2 = f(t + half, &offset(state, half, &k1))?;
    let k3 = f(t + half, &offset(state, half, &k2))?;
    let k4 = f(t + dt, &offset(state, dt, &k3))?;
    let mut next = *state;
    for i in 0..N {
        next[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    Ok(next)
}

fn offset<const N: usize>(state: &[f64; N], scale: f64, dir: &[f64; N]) -> [f64; N] {
    let mut out = *state;
    for i in 0..N {
        out[i] += scale * dir[i];
    }
    out
}

/// Returns `model` with one disturbance applied. All other fields are
/// untouched; an inapplicable target is an error.
pub fn apply_disturbance(
    model: &ModelConfig,
    disturbance: &Disturbance,
) -> Result<ModelConfig, SimError> {
    let mut updated = model.clone();
    apply_disturbance_in_place(&mut updated, disturbance)?;
    Ok(updated)
}

fn apply_disturbance_in_place(
    model: &mut ModelConfig,
    d: &Disturbance,
) -> Result<(), SimError> {
    use DisturbanceTarget as T;
    match model {
        ModelConfig::DynamicLoad(dl) => match d.target {
            T::P0 => dl.load.p0 += d.delta,
            T::Q0 => dl.load.q0 += d.delta,
            T::V1 => dl.network.v1 += d.delta,
            T::R => dl.network.r += d.delta,
            T::X => dl.network.x += d.delta,
            T::C => {
                return Err(SimError::UnknownTarget {
                    target: d.target.name().into(),
                    model: "dynamic_load",
                })
            }
        },
        ModelConfig::Benchmark(b) => match d.target {
            T::V1 => b.bench.v1 += d.delta,
            T::R => b.bench.r += d.delta,
            T::C => b.bench.c += d.delta,
            T::P0 | T::Q0 | T::X => {
                return Err(SimError::UnknownTarget {
                    target: d.target.name().into(),
                    model: "benchmark",
                })
            }
        },
    }
    Ok(())
}

/// Runs a scenario from t = 0 to `duration`. Parameter steps land on step
/// boundaries; a sample is recorded at t = 0, every `output_stride` steps,
/// and at the final boundary (normal completion or premature termination).
pub fn run_simulation(scenario: &Scenario) -> Result<SimulationOutcome, SimError> {
    scenario.validate()?;
    match &scenario.model {
        ModelConfig::DynamicLoad(dl) => run_dynamic_load(scenario, dl),
        ModelConfig::Benchmark(b) => run_benchmark(scenario, b),
    }
}

fn step_count(duration: f64, dt: f64) -> usize {
    ((duration / dt).round() as usize).max(1)
}

fn run_dynamic_load(scenario: &Scenario, dl: &DlModel) -> Result<SimulationOutcome, SimError> {
    let mut net = dl.network;
    let mut load = dl.load;
    let policy = dl.policy;

    let mut state = match dl.initial {
        DlInitial::State(s) => s,
        DlInitial::SteadyStateAt(v) => steady_state_at(&load, v)?,
    };

    let steps = step_count(scenario.duration, scenario.dt);
    let dt = scenario.dt;
    let mut samples = Vec::with_capacity(steps / scenario.output_stride + 2);
    let mut next_disturbance = 0;
    let mut last_recorded_step: Option<usize> = None;
    let mut last_valid: Option<(usize, LoadState, f64, NetworkParams, DlLoadParams)> = None;

    let record = |samples: &mut Vec<TrajectorySample>,
                  net: &NetworkParams,
                  load: &DlLoadParams,
                  k: usize,
                  state: &LoadState,
                  v2: f64|
     -> Result<(), SimError> {
        let power = load_power(load, state, v2);
        let delta2 = if v2 > 0.0 {
            voltage_angle(net, power.p2, v2).map_err(|e| SimError::Numeric(e.to_string()))?
        } else {
            0.0
        };
        samples.push(TrajectorySample {
            t: k as f64 * dt,
            v2,
            delta2: Some(delta2),
            p2: Some(power.p2),
            q2: Some(power.q2),
            x: Some(state.x),
            y: Some(state.y),
        });
        Ok(())
    };

    for k in 0..=steps {
        let t_k = k as f64 * dt;
        if k < steps {
            while next_disturbance < scenario.disturbances.len()
                && scenario.disturbances[next_disturbance].at_time <= t_k
            {
                let d = &scenario.disturbances[next_disturbance];
                let mut model = ModelConfig::DynamicLoad(DlModel {
                    network: net,
                    load,
                    policy,
                    initial: dl.initial,
                });
                apply_disturbance_in_place(&mut model, d)?;
                if let ModelConfig::DynamicLoad(updated) = model {
                    net = updated.network;
                    load = updated.load;
                }
                next_disturbance += 1;
            }
        }

        // Boundary solve: doubles as feasibility check of the arrived state.
        let v2 = match coupled_voltage(&load, &net, &state, policy) {
            Ok(v) => v,
            Err(DynLoadError::NoRealPositiveRoot { .. }) => {
                if k == 0 {
                    return Err(SimError::Config(
                        "initial state has no real positive voltage solution".into(),
                    ));
                }
                // The step that produced this state is discarded; the data
                // ends at the previous boundary, recorded even off-stride.
                if let Some((pk, pstate, pv2, pnet, pload)) = last_valid {
                    if last_recorded_step != Some(pk) {
                        record(&mut samples, &pnet, &pload, pk, &pstate, pv2)?;
                    }
                }
                return Ok(SimulationOutcome {
                    status: RunStatus::TerminatedNoRoot { at_time: t_k },
                    samples,
                });
            }
            Err(e) => return Err(SimError::Numeric(e.to_string())),
        };
        last_valid = Some((k, state, v2, net, load));

        if k % scenario.output_stride == 0 || k == steps {
            record(&mut samples, &net, &load, k, &state, v2)?;
            last_recorded_step = Some(k);
        }
        if k == steps {
            break;
        }

        let stages = |_t: f64, s: &[f64; 2]| -> Result<[f64; 2], DynLoadError> {
            let st = LoadState::new(s[0], s[1]);
            let v = coupled_voltage(&load, &net, &st, policy)?;
            let (dx, dy) = state_derivative(&load, &st, v)?;
            Ok([dx, dy])
        };
        match rk4_step(stages, t_k, &[state.x, state.y], dt) {
            Ok(next) => state = LoadState::new(next[0], next[1]),
            Err(DynLoadError::NoRealPositiveRoot { .. }) => {
                // Discard the partial step; the trajectory ends here.
                if last_recorded_step != Some(k) {
                    record(&mut samples, &net, &load, k, &state, v2)?;
                }
                return Ok(SimulationOutcome {
                    status: RunStatus::TerminatedNoRoot { at_time: t_k },
                    samples,
                });
            }
            Err(e) => return Err(SimError::Numeric(e.to_string())),
        }
    }

    Ok(SimulationOutcome { status: RunStatus::Completed, samples })
}

/// Places the load states on the steady-state characteristics at `v`.
pub fn steady_state_at(load: &DlLoadParams, v: f64) -> Result<LoadState, SimError> {
    let pt = load.pt(v);
    let qt = load.qt(v);
    if pt == 0.0 || qt == 0.0 {
        return Err(SimError::Config(format!(
            "transient characteristic vanishes at v = {v}; steady-state initialisation undefined"
        )));
    }
    let ps = load.ps(v).map_err(|e| SimError::Config(e.to_string()))?;
    let qs = load.qs(v).map_err(|e| SimError::Config(e.to_string()))?;
    Ok(LoadState::new(ps / pt, qs / qt))
}

fn run_benchmark(scenario: &Scenario, b: &BenchModel) -> Result<SimulationOutcome, SimError> {
    let mut bench = b.bench;
    let steps = step_count(scenario.duration, scenario.dt);
    let dt = scenario.dt;
    let mut samples = Vec::with_capacity(steps / scenario.output_stride + 2);
    let mut next_disturbance = 0;
    let mut v2 = b.initial_v2;

    for k in 0..=steps {
        let t_k = k as f64 * dt;
        if k < steps {
            while next_disturbance < scenario.disturbances.len()
                && scenario.disturbances[next_disturbance].at_time <= t_k
            {
                let d = &scenario.disturbances[next_disturbance];
                let mut model = ModelConfig::Benchmark(BenchModel {
                    bench,
                    initial_v2: b.initial_v2,
                });
                apply_disturbance_in_place(&mut model, d)?;
                if let ModelConfig::Benchmark(updated) = model {
                    bench = updated.bench;
                }
                next_disturbance += 1;
            }
        }

        if k % scenario.output_stride == 0 || k == steps {
            samples.push(TrajectorySample {
                t: t_k,
                v2,
                delta2: None,
                p2: None,
                q2: None,
                x: None,
                y: None,
            });
        }
        if k == steps {
            break;
        }

        let stages = |_t: f64, s: &[f64; 1]| -> Result<[f64; 1], SimError> {
            Ok([benchmark::benchmark_derivative(&bench, s[0])])
        };
        let next = rk4_step(stages, t_k, &[v2], dt)?;
        v2 = next[0];
    }

    Ok(SimulationOutcome { status: RunStatus::Completed, samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmark::BenchmarkParams;

    fn bench_scenario(initial_v2: f64, duration: f64) -> Scenario {
        Scenario {
            model: ModelConfig::Benchmark(BenchModel {
                bench: BenchmarkParams::reference_circuit(),
                initial_v2,
            }),
            duration,
            dt: DEFAULT_DT,
            output_stride: DEFAULT_OUTPUT_STRIDE,
            disturbances: vec![],
        }
    }

    fn stock_dl_model(policy: RootPolicy, initial: DlInitial) -> DlModel {
        DlModel {
            network: NetworkParams::symmetric(1.0, 0.02).unwrap(),
            load: DlLoadParams::new(1.0, 1.0, 0.5625, 3.0, 1.0, 1.0).unwrap(),
            policy,
            initial,
        }
    }

    #[test]
    fn rk4_fixed_point_of_benchmark() {
        let p = BenchmarkParams::reference_circuit();
        let eqs = crate::benchmark::benchmark_equilibria(&p);
        for eq in eqs {
            let next = rk4_step::<1, SimError, _>(
                |_t, s| Ok([crate::benchmark::benchmark_derivative(&p, s[0])]),
                0.0,
                &[eq.v_eq],
                0.001,
            )
            .unwrap();
            assert!((next[0] - eq.v_eq).abs() < 1e-14);
        }
    }

    #[test]
    fn rk4_matches_exact_rc_response() {
        // Pure RC charging from zero: v(t) = v1 (1 - exp(-t / (r c))).
        let p = BenchmarkParams::new(1.0, 0.2, 10.0, [0.0; 5]).unwrap();
        let dt = 0.001;
        let next = rk4_step::<1, SimError, _>(
            |_t, s| Ok([crate::benchmark::benchmark_derivative(&p, s[0])]),
            0.0,
            &[0.0],
            dt,
        )
        .unwrap();
        let exact = 1.0 - (-dt / (p.r * p.c)).exp();
        assert!((next[0] - exact).abs() < 1e-12);
    }

    #[test]
    fn rk4_dl_equilibrium_drift() {
        let dl = stock_dl_model(
            RootPolicy::Maximum,
            DlInitial::State(LoadState::new(
                crate::dynload::tests::X_STAR,
                crate::dynload::tests::Y_STAR,
            )),
        );
        let f = |_t: f64, s: &[f64; 2]| -> Result<[f64; 2], DynLoadError> {
            let st = LoadState::new(s[0], s[1]);
            let v = coupled_voltage(&dl.load, &dl.network, &st, dl.policy)?;
            let (dx, dy) = state_derivative(&dl.load, &st, v)?;
            Ok([dx, dy])
        };
        let s0 = [crate::dynload::tests::X_STAR, crate::dynload::tests::Y_STAR];
        let s1 = rk4_step(f, 0.0, &s0, 0.001).unwrap();
        assert!((s1[0] - s0[0]).abs() < 1e-12);
        assert!((s1[1] - s0[1]).abs() < 1e-12);
    }

    #[test]
    fn benchmark_separatrix() {
        // The unstable middle equilibrium separates the two basins.
        let up = run_simulation(&bench_scenario(0.51, 60.0)).unwrap();
        assert_eq!(up.status, RunStatus::Completed);
        assert!((up.final_sample().v2 - 0.9).abs() < 1e-4);

        let down = run_simulation(&bench_scenario(0.49, 60.0)).unwrap();
        assert!((down.final_sample().v2 - 0.2).abs() < 1e-4);
    }

    #[test]
    fn benchmark_voltage_is_monotone() {
        // Scalar autonomous flow: no overshoot between equilibria.
        let out = run_simulation(&bench_scenario(0.51, 60.0)).unwrap();
        for w in out.samples.windows(2) {
            assert!(w[1].v2 >= w[0].v2 - 1e-12);
            assert!(w[1].t > w[0].t);
        }
    }

    #[test]
    fn dl_equilibrium_capture() {
        // Initialised on the steady-state characteristics at an equilibrium
        // voltage, the run must hold that state. Each equilibrium pairs with
        // the policy that selects its own branch.
        let eqs = crate::dynload::dl_equilibria(
            &stock_dl_model(RootPolicy::Maximum, DlInitial::SteadyStateAt(1.0)).load,
            &NetworkParams::symmetric(1.0, 0.02).unwrap(),
        )
        .unwrap();
        assert_eq!(eqs.len(), 2);
        for (v_star, policy) in [(eqs[1], RootPolicy::Maximum), (eqs[0], RootPolicy::Minimum)] {
            let scenario = Scenario {
                model: ModelConfig::DynamicLoad(stock_dl_model(
                    policy,
                    DlInitial::SteadyStateAt(v_star),
                )),
                duration: 10.0,
                dt: DEFAULT_DT,
                output_stride: DEFAULT_OUTPUT_STRIDE,
                disturbances: vec![],
            };
            let out = run_simulation(&scenario).unwrap();
            assert_eq!(out.status, RunStatus::Completed);
            let first = &out.samples[0];
            let last = out.final_sample();
            assert!((last.x.unwrap() - first.x.unwrap()).abs() < 1e-9);
            assert!((last.y.unwrap() - first.y.unwrap()).abs() < 1e-9);
            assert!((last.v2 - v_star).abs() < 1e-9);
        }
    }

    #[test]
    fn dl_sample_consistency() {
        let scenario = Scenario {
            model: ModelConfig::DynamicLoad(stock_dl_model(
                RootPolicy::Maximum,
                DlInitial::State(LoadState::new(0.5, 0.5)),
            )),
            duration: 2.0,
            dt: DEFAULT_DT,
            output_stride: DEFAULT_OUTPUT_STRIDE,
            disturbances: vec![],
        };
        let out = run_simulation(&scenario).unwrap();
        let dl = match &scenario.model {
            ModelConfig::DynamicLoad(dl) => dl,
            _ => unreachable!(),
        };
        for s in &out.samples {
            let state = LoadState::new(s.x.unwrap(), s.y.unwrap());
            let poly = crate::dynload::coupled_polynomial(&dl.load, &dl.network, &state);
            assert!(poly.eval(s.v2).abs() <= 1e-7, "constraint residual at t={}", s.t);
            let power = load_power(&dl.load, &state, s.v2);
            assert_eq!(s.p2.unwrap(), power.p2);
            assert_eq!(s.q2.unwrap(), power.q2);
        }
        // 2 s at dt 1 ms and stride 10 : t = 0, 0.01, ..., 2.0
        assert_eq!(out.samples.len(), 201);
    }

    #[test]
    fn constant_power_overload_terminates() {
        let mut model = stock_dl_model(
            RootPolicy::Maximum,
            DlInitial::SteadyStateAt(0.723606797749979),
        );
        model.load = DlLoadParams::new(5.0, 5.0, 0.0, 0.0, 1.0, 1.0).unwrap();
        let scenario = Scenario {
            model: ModelConfig::DynamicLoad(model),
            duration: 30.0,
            dt: DEFAULT_DT,
            output_stride: DEFAULT_OUTPUT_STRIDE,
            disturbances: vec![
                Disturbance { at_time: 1.0, target: DisturbanceTarget::P0, delta: 3.0 },
                Disturbance { at_time: 1.0, target: DisturbanceTarget::Q0, delta: 3.0 },
            ],
        };
        let out = run_simulation(&scenario).unwrap();
        match out.status {
            RunStatus::TerminatedNoRoot { at_time } => {
                assert!(at_time > 1.0, "must fail strictly after the disturbance");
                let last = out.final_sample();
                assert!(last.t <= at_time);
            }
            RunStatus::Completed => panic!("overload run must terminate prematurely"),
        }
    }

    #[test]
    fn instant_root_loss_records_last_valid_boundary() {
        // A near-total source collapse leaves no admissible voltage for the
        // current state the moment it lands. The failed boundary is
        // off-stride, so the engine must still record the preceding valid
        // state as the final sample.
        let mut model = stock_dl_model(
            RootPolicy::Maximum,
            DlInitial::SteadyStateAt(0.723606797749979),
        );
        model.load = DlLoadParams::new(5.0, 5.0, 0.0, 0.0, 1.0, 1.0).unwrap();
        let scenario = Scenario {
            model: ModelConfig::DynamicLoad(model),
            duration: 1.0,
            dt: DEFAULT_DT,
            output_stride: DEFAULT_OUTPUT_STRIDE,
            disturbances: vec![Disturbance {
                at_time: 0.0034,
                target: DisturbanceTarget::V1,
                delta: -0.9,
            }],
        };
        let out = run_simulation(&scenario).unwrap();
        assert_eq!(out.status, RunStatus::TerminatedNoRoot { at_time: 0.004 });
        let last = out.final_sample();
        assert_eq!(last.t, 0.003);
        assert!((last.v2 - 0.723606797749979).abs() < 1e-6);
    }

    #[test]
    fn disturbance_lands_on_next_boundary() {
        // Zero load keeps v2 pinned at v1, so a v1 step is visible exactly
        // at the boundary that absorbs it.
        let mut model = stock_dl_model(RootPolicy::Maximum, DlInitial::State(LoadState::new(0.0, 0.0)));
        model.load = DlLoadParams::new(0.0, 0.0, 0.0, 0.0, 1.0, 1.0).unwrap();
        let scenario = Scenario {
            model: ModelConfig::DynamicLoad(model),
            duration: 0.01,
            dt: DEFAULT_DT,
            output_stride: 1,
            disturbances: vec![Disturbance {
                at_time: 0.0045,
                target: DisturbanceTarget::V1,
                delta: 0.1,
            }],
        };
        let out = run_simulation(&scenario).unwrap();
        for s in &out.samples {
            let expected = if s.t >= 0.005 { 1.1 } else { 1.0 };
            assert!((s.v2 - expected).abs() < 1e-12, "t={} v2={}", s.t, s.v2);
        }
    }

    #[test]
    fn determinism_bit_identical() {
        let scenario = Scenario {
            model: ModelConfig::DynamicLoad(stock_dl_model(
                RootPolicy::Maximum,
                DlInitial::State(LoadState::new(0.7, 1.3)),
            )),
            duration: 3.0,
            dt: DEFAULT_DT,
            output_stride: DEFAULT_OUTPUT_STRIDE,
            disturbances: vec![Disturbance {
                at_time: 1.0,
                target: DisturbanceTarget::P0,
                delta: 0.5,
            }],
        };
        let a = run_simulation(&scenario).unwrap();
        let b = run_simulation(&scenario).unwrap();
        assert_eq!(a, b);
        for (sa, sb) in a.samples.iter().zip(&b.samples) {
            assert_eq!(sa.v2.to_bits(), sb.v2.to_bits());
            assert_eq!(sa.x.unwrap().to_bits(), sb.x.unwrap().to_bits());
        }
    }

    #[test]
    fn apply_disturbance_examples() {
        let model = ModelConfig::DynamicLoad(stock_dl_model(
            RootPolicy::Maximum,
            DlInitial::State(LoadState::new(0.0, 0.0)),
        ));
        let stepped = apply_disturbance(
            &model,
            &Disturbance { at_time: 0.0, target: DisturbanceTarget::P0, delta: 1.0 },
        )
        .unwrap();
        match &stepped {
            ModelConfig::DynamicLoad(dl) => assert_eq!(dl.load.p0, 2.0),
            _ => unreachable!(),
        }

        let unchanged = apply_disturbance(
            &model,
            &Disturbance { at_time: 0.0, target: DisturbanceTarget::Q0, delta: 0.0 },
        )
        .unwrap();
        assert_eq!(unchanged, model);

        let err = apply_disturbance(
            &model,
            &Disturbance { at_time: 0.0, target: DisturbanceTarget::C, delta: 1.0 },
        );
        assert!(matches!(err, Err(SimError::UnknownTarget { .. })));
    }

    #[test]
    fn scenario_validation_errors() {
        let mut scenario = bench_scenario(0.5, 1.0);
        scenario.dt = 2.0;
        assert!(matches!(run_simulation(&scenario), Err(SimError::Config(_))));

        let mut scenario = bench_scenario(0.5, 1.0);
        scenario.disturbances = vec![
            Disturbance { at_time: 0.5, target: DisturbanceTarget::V1, delta: 0.1 },
            Disturbance { at_time: 0.2, target: DisturbanceTarget::V1, delta: 0.1 },
        ];
        assert!(matches!(run_simulation(&scenario), Err(SimError::Config(_))));

        let mut scenario = bench_scenario(0.5, 1.0);
        scenario.disturbances =
            vec![Disturbance { at_time: 0.5, target: DisturbanceTarget::P0, delta: 0.1 }];
        assert!(matches!(run_simulation(&scenario), Err(SimError::UnknownTarget { .. })));
    }

    #[test]
    fn infeasible_initial_state_is_config_error() {
        let scenario = Scenario {
            model: ModelConfig::DynamicLoad(stock_dl_model(
                RootPolicy::Maximum,
                DlInitial::State(LoadState::new(30.0, 30.0)),
            )),
            duration: 1.0,
            dt: DEFAULT_DT,
            output_stride: DEFAULT_OUTPUT_STRIDE,
            disturbances: vec![],
        };
        assert!(matches!(run_simulation(&scenario), Err(SimError::Config(_))));
    }
}
