//! Generic dynamic recovery load: steady-state and transient characteristics,
//! the two recovery states driving them, the algebraic coupling of load power
//! to the network under a root-selection policy, equilibrium search, and
//! load-state-space region classification.
//!
//! The load consumes `p2 = x * pt(v2)` and `q2 = y * qt(v2)` while the states
//! recover toward the steady-state characteristics:
//!
//! ```text
//! dx/dt = (ps(v2) - x * pt(v2)) / tp
//! dy/dt = (qs(v2) - y * qt(v2)) / tq
//! ```
//!
//! with `ps(v2) = p0 * v2^a`, `qs(v2) = q0 * v2^b`, and quadratic transient
//! characteristics `pt`, `qt`. Substituting the transient load power into the
//! network constraint yields a quartic in `v2` whose positive real roots are
//! the admissible operating voltages for a given state.

use crate::numerics::{self, Polynomial};
use crate::powerflow::{NetworkParams, PowerFlowError, PowerPoint};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DynLoadError {
    #[error(transparent)]
    Network(#[from] PowerFlowError),
    #[error("{0}")]
    DomainError(String),
    #[error("no real positive voltage root for state (x={x}, y={y})")]
    NoRealPositiveRoot { x: f64, y: f64 },
    #[error("invalid load parameters: {0}")]
    InvalidParams(String),
}

/// Quadratic `c2 v^2 + c1 v + c0`. Serialized as the array `[c2, c1, c0]`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Quadratic {
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

impl From<[f64; 3]> for Quadratic {
    fn from([c2, c1, c0]: [f64; 3]) -> Self {
        Self { c2, c1, c0 }
    }
}

impl From<Quadratic> for [f64; 3] {
    fn from(q: Quadratic) -> Self {
        [q.c2, q.c1, q.c0]
    }
}

impl Quadratic {
    pub const fn new(c2: f64, c1: f64, c0: f64) -> Self {
        Self { c2, c1, c0 }
    }

    pub fn eval(&self, v: f64) -> f64 {
        (self.c2 * v + self.c1) * v + self.c0
    }

    pub fn slope(&self, v: f64) -> f64 {
        2.0 * self.c2 * v + self.c1
    }
}

/// Stock transient real-power characteristic.
pub const DEFAULT_PT_COEFFS: Quadratic = Quadratic::new(-0.08, 0.96, 0.12);
/// Stock transient reactive-power characteristic. Note qt(1) = 0.92, not 1;
/// the coefficients are used as configured, without renormalisation.
pub const DEFAULT_QT_COEFFS: Quadratic = Quadratic::new(3.255, -3.49, 1.155);

/// Recovery-load parameters.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DlLoadParams {
    /// Nominal real power (p.u.).
    pub p0: f64,
    /// Nominal reactive power (p.u.).
    pub q0: f64,
    /// Steady-state real-power voltage exponent.
    pub a: f64,
    /// Steady-state reactive-power voltage exponent.
    pub b: f64,
    /// Real-power recovery time constant (s).
    pub tp: f64,
    /// Reactive-power recovery time constant (s).
    pub tq: f64,
    #[serde(default = "default_pt")]
    pub pt_coeffs: Quadratic,
    #[serde(default = "default_qt")]
    pub qt_coeffs: Quadratic,
}

fn default_pt() -> Quadratic {
    DEFAULT_PT_COEFFS
}

fn default_qt() -> Quadratic {
    DEFAULT_QT_COEFFS
}

impl DlLoadParams {
    pub fn new(p0: f64, q0: f64, a: f64, b: f64, tp: f64, tq: f64) -> Result<Self, DynLoadError> {
        let params = Self {
            p0,
            q0,
            a,
            b,
            tp,
            tq,
            pt_coeffs: DEFAULT_PT_COEFFS,
            qt_coeffs: DEFAULT_QT_COEFFS,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), DynLoadError> {
        for (name, v) in [
            ("p0", self.p0),
            ("q0", self.q0),
            ("a", self.a),
            ("b", self.b),
            ("tp", self.tp),
            ("tq", self.tq),
        ] {
            if !v.is_finite() {
                return Err(DynLoadError::InvalidParams(format!("{name} must be finite")));
            }
        }
        if self.tp <= 0.0 || self.tq <= 0.0 {
            return Err(DynLoadError::InvalidParams(format!(
                "recovery time constants must be positive, got tp={}, tq={}",
                self.tp, self.tq
            )));
        }
        if self.p0 < 0.0 || self.q0 < 0.0 {
            return Err(DynLoadError::InvalidParams(format!(
                "nominal powers must be nonnegative, got p0={}, q0={}",
                self.p0, self.q0
            )));
        }
        Ok(())
    }

    /// Steady-state real power `p0 * v2^a`. For `a = 0` this is `p0` at every
    /// voltage, including `v2 = 0`.
    pub fn ps(&self, v2: f64) -> Result<f64, DynLoadError> {
        check_nonnegative_voltage(v2)?;
        Ok(self.p0 * v2.powf(self.a))
    }

    /// Steady-state reactive power `q0 * v2^b`.
    pub fn qs(&self, v2: f64) -> Result<f64, DynLoadError> {
        check_nonnegative_voltage(v2)?;
        Ok(self.q0 * v2.powf(self.b))
    }

    /// Transient real-power characteristic.
    pub fn pt(&self, v2: f64) -> f64 {
        self.pt_coeffs.eval(v2)
    }

    /// Transient reactive-power characteristic.
    pub fn qt(&self, v2: f64) -> f64 {
        self.qt_coeffs.eval(v2)
    }
}

fn check_nonnegative_voltage(v2: f64) -> Result<(), DynLoadError> {
    if v2 < 0.0 || !v2.is_finite() {
        return Err(DynLoadError::DomainError(format!(
            "steady-state characteristics need v2 >= 0, got {v2}"
        )));
    }
    Ok(())
}

/// The load's internal recovery states. Dimensionless and unrestricted in
/// sign; the dynamics keep them positive from positive initial data.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LoadState {
    pub x: f64,
    pub y: f64,
}

impl LoadState {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Which algebraic voltage root drives the simulation when several exist.
/// Applied independently at every solve, with no continuity tracking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootPolicy {
    Maximum,
    Minimum,
}

/// Instantaneous load power `(x * pt(v2), y * qt(v2))`.
pub fn load_power(params: &DlLoadParams, state: &LoadState, v2: f64) -> PowerPoint {
    PowerPoint::new(state.x * params.pt(v2), state.y * params.qt(v2))
}

/// Recovery-state rates at the given operating voltage.
pub fn state_derivative(
    params: &DlLoadParams,
    state: &LoadState,
    v2: f64,
) -> Result<(f64, f64), DynLoadError> {
    let dx = (params.ps(v2)? - state.x * params.pt(v2)) / params.tp;
    let dy = (params.qs(v2)? - state.y * params.qt(v2)) / params.tq;
    Ok((dx, dy))
}

/// Degree-4 polynomial in `v2` obtained by substituting the state-dependent
/// load power into the network constraint, coefficients ascending.
pub fn coupled_polynomial(
    params: &DlLoadParams,
    net: &NetworkParams,
    state: &LoadState,
) -> Polynomial {
    // p2(v) = a2 v^2 + a1 v + a0, q2(v) = b2 v^2 + b1 v + b0
    let (a2, a1, a0) = (
        state.x * params.pt_coeffs.c2,
        state.x * params.pt_coeffs.c1,
        state.x * params.pt_coeffs.c0,
    );
    let (b2, b1, b0) = (
        state.y * params.qt_coeffs.c2,
        state.y * params.qt_coeffs.c1,
        state.y * params.qt_coeffs.c0,
    );
    let s = net.r * net.r + net.x * net.x;
    // 2 (r p2 + x q2) contributes through v^2; (p2^2 + q2^2) s is degree 4.
    let l0 = 2.0 * (net.r * a0 + net.x * b0);
    let l1 = 2.0 * (net.r * a1 + net.x * b1);
    let l2 = 2.0 * (net.r * a2 + net.x * b2);
    Polynomial::new(vec![
        s * (a0 * a0 + b0 * b0),
        2.0 * s * (a1 * a0 + b1 * b0),
        l0 - net.v1 * net.v1 + s * (a1 * a1 + 2.0 * a2 * a0 + b1 * b1 + 2.0 * b2 * b0),
        l1 + 2.0 * s * (a2 * a1 + b2 * b1),
        1.0 + l2 + s * (a2 * a2 + b2 * b2),
    ])
}

/// Positive real roots of the coupled polynomial carrying nonnegative real
/// load power, ascending.
pub fn admissible_voltages(
    params: &DlLoadParams,
    net: &NetworkParams,
    state: &LoadState,
) -> Result<Vec<f64>, DynLoadError> {
    net.validate()?;
    net.require_equal_rx()?;
    let poly = coupled_polynomial(params, net, state);
    let roots = numerics::real_roots(&poly, 0.0, 2.0 * net.v1)
        .map_err(|e| DynLoadError::DomainError(e.to_string()))?;
    Ok(roots
        .into_iter()
        .filter(|&v| v > 0.0 && state.x * params.pt(v) >= 0.0)
        .collect())
}

/// Operating voltage selected by the root policy for the given state.
pub fn coupled_voltage(
    params: &DlLoadParams,
    net: &NetworkParams,
    state: &LoadState,
    policy: RootPolicy,
) -> Result<f64, DynLoadError> {
    let roots = admissible_voltages(params, net, state)?;
    let picked = match policy {
        RootPolicy::Maximum => roots.last(),
        RootPolicy::Minimum => roots.first(),
    };
    picked
        .copied()
        .ok_or(DynLoadError::NoRealPositiveRoot { x: state.x, y: state.y })
}

/// Residual of the steady-state voltage equation: the network constraint
/// with the load power pinned to its steady-state characteristics.
pub fn equilibrium_residual(params: &DlLoadParams, net: &NetworkParams, v2: f64) -> f64 {
    let ps = params.p0 * v2.powf(params.a);
    let qs = params.q0 * v2.powf(params.b);
    let u = v2 * v2;
    u * u + (2.0 * (net.r * ps + net.x * qs) - net.v1 * net.v1) * u
        + (ps * ps + qs * qs) * (net.r * net.r + net.x * net.x)
}

/// Number of logarithmically spaced scan points used by `dl_equilibria`.
const EQUILIBRIUM_SCAN_POINTS: usize = 10_000;

/// All equilibrium voltages in `[0, 1.5 v1]`, ascending.
///
/// The steady-state equation is non-polynomial for fractional exponents, so
/// roots are located by a logarithmic bracket scan (the low equilibrium can
/// sit four orders of magnitude below the high one) and polished by
/// bisection. `v2 = 0` is reported only when the residual vanishes there and
/// no strictly positive equilibrium exists: a bare zero-voltage fixed point
/// is the surviving operating point, not a shadow of a healthy one.
pub fn dl_equilibria(
    params: &DlLoadParams,
    net: &NetworkParams,
) -> Result<Vec<f64>, DynLoadError> {
    net.validate()?;
    net.require_equal_rx()?;
    params.validate()?;

    let hi = 1.5 * net.v1;
    let lo = 1e-8f64;
    let f = |v: f64| equilibrium_residual(params, net, v);

    let log_lo = lo.ln();
    let log_step = (hi.ln() - log_lo) / (EQUILIBRIUM_SCAN_POINTS - 1) as f64;
    let grid = |i: usize| -> f64 {
        if i == EQUILIBRIUM_SCAN_POINTS - 1 {
            hi
        } else {
            (log_lo + i as f64 * log_step).exp()
        }
    };

    let mut roots = Vec::new();
    let mut v_prev = grid(0);
    let mut f_prev = f(v_prev);
    if f_prev == 0.0 {
        roots.push(v_prev);
    }
    for i in 1..EQUILIBRIUM_SCAN_POINTS {
        let v = grid(i);
        let fv = f(v);
        if fv == 0.0 {
            roots.push(v);
        } else if f_prev != 0.0 && f_prev.signum() != fv.signum() {
            let bracket = numerics::Bracket { lo: v_prev, hi: v };
            // tol 0 drives the bisection down to its width floor; the low
            // equilibrium sits on a nearly flat residual, so a residual
            // criterion alone would leave it orders of magnitude too loose.
            let root = numerics::bisect_refine(f, bracket, 0.0)
                .expect("sign change checked at grid points");
            roots.push(root);
        }
        v_prev = v;
        f_prev = fv;
    }

    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-10);
    if roots.is_empty() && f(0.0) == 0.0 {
        roots.push(0.0);
    }
    Ok(roots)
}

/// Classification of one load-state-space cell by the count of admissible
/// operating voltages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionClass {
    /// Exactly two distinct positive roots with nonnegative real power.
    TwoRoots,
    /// Anything else, including tangency (a repeated root counts once).
    FewerRoots,
}

/// Classifies a single state.
pub fn classify_region_point(
    params: &DlLoadParams,
    net: &NetworkParams,
    state: &LoadState,
) -> Result<RegionClass, DynLoadError> {
    let roots = admissible_voltages(params, net, state)?;
    Ok(if roots.len() == 2 {
        RegionClass::TwoRoots
    } else {
        RegionClass::FewerRoots
    })
}

/// Rectangular scan of load-state space, `resolution` cells per axis with
/// inclusive endpoints. Cells are stored row-major with `x` varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionGrid {
    pub x_values: Vec<f64>,
    pub y_values: Vec<f64>,
    classes: Vec<RegionClass>,
}

impl RegionGrid {
    pub fn class_at(&self, ix: usize, iy: usize) -> RegionClass {
        self.classes[iy * self.x_values.len() + ix]
    }

    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, RegionClass)> + '_ {
        let nx = self.x_values.len();
        self.classes.iter().enumerate().map(move |(i, &c)| {
            (self.x_values[i % nx], self.y_values[i / nx], c)
        })
    }
}

/// Classifies every grid cell of `[x_range] x [y_range]`.
pub fn valid_region_scan(
    params: &DlLoadParams,
    net: &NetworkParams,
    x_range: (f64, f64),
    y_range: (f64, f64),
    resolution: usize,
) -> Result<RegionGrid, DynLoadError> {
    if resolution < 2 {
        return Err(DynLoadError::InvalidParams(format!(
            "region scan needs resolution >= 2, got {resolution}"
        )));
    }
    for (name, (lo, hi)) in [("x", x_range), ("y", y_range)] {
        if !(lo >= 0.0 && hi > lo) {
            return Err(DynLoadError::InvalidParams(format!(
                "{name} range must be nonnegative and increasing, got [{lo}, {hi}]"
            )));
        }
    }
    let axis = |(lo, hi): (f64, f64)| -> Vec<f64> {
        (0..resolution)
            .map(|i| lo + (hi - lo) * i as f64 / (resolution - 1) as f64)
            .collect()
    };
    let x_values = axis(x_range);
    let y_values = axis(y_range);
    let mut classes = Vec::with_capacity(resolution * resolution);
    for &y in &y_values {
        for &x in &x_values {
            classes.push(classify_region_point(params, net, &LoadState::new(x, y))?);
        }
    }
    Ok(RegionGrid { x_values, y_values, classes })
}
