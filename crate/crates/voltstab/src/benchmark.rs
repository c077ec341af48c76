//! DC benchmark circuit: a source behind a line resistance feeding a
//! capacitor in parallel with a tunnel diode. The diode's static
//! characteristic is a quintic `h(v2)`, giving the scalar autonomous ODE
//!
//! ```text
//! dv2/dt = (-h(v2) - v2/r + v1/r) / c
//! ```
//!
//! Unlike the phasor load model, the voltage here is a physical state: one
//! initial voltage determines one trajectory, and a disturbance that removes
//! the high-voltage equilibrium lets the dynamics carry the system down to
//! the low-voltage one.

use crate::numerics::{self, Polynomial};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BenchmarkError {
    #[error("invalid benchmark parameters: {0}")]
    InvalidParams(String),
}

/// Diode characteristic coefficients `[a, b, c, d, e]` for
/// `h(v) = a v^5 + b v^4 + c v^3 + d v^2 + e v` that give the circuit three
/// equilibria near 0.2, 0.5 and 0.9 when paired with `r = 0.2`.
pub const DEFAULT_H_COEFFS: [f64; 5] = [218.6576, -539.0593, 517.9071, -246.6894, 52.5842];

/// Benchmark circuit constants.
///
/// `reference_circuit` uses `r = 0.2`, the value consistent with the stock
/// diode quintic: the quoted constant set carries `r = 0.02`, but with
/// that value the circuit has a single equilibrium instead of the three the
/// characteristic was fitted to produce (`h(0.2) = 4.0 = (1 - 0.2)/0.2`
/// only holds for `r = 0.2`). Both values remain constructible.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkParams {
    /// Source voltage (p.u.).
    pub v1: f64,
    /// Line resistance (p.u.).
    pub r: f64,
    /// Capacitance (p.u.-time).
    pub c: f64,
    /// Quintic coefficients, descending degree, no constant term.
    #[serde(default = "default_h")]
    pub h_coeffs: [f64; 5],
}

fn default_h() -> [f64; 5] {
    DEFAULT_H_COEFFS
}

impl BenchmarkParams {
    pub fn new(v1: f64, r: f64, c: f64, h_coeffs: [f64; 5]) -> Result<Self, BenchmarkError> {
        let p = Self { v1, r, c, h_coeffs };
        p.validate()?;
        Ok(p)
    }

    /// Stock bistable circuit: `v1 = 1`, `r = 0.2`, `c = 10`.
    pub fn reference_circuit() -> Self {
        Self { v1: 1.0, r: 0.2, c: 10.0, h_coeffs: DEFAULT_H_COEFFS }
    }

    pub fn validate(&self) -> Result<(), BenchmarkError> {
        if !(self.v1.is_finite() && self.r.is_finite() && self.c.is_finite())
            || self.h_coeffs.iter().any(|c| !c.is_finite())
        {
            return Err(BenchmarkError::InvalidParams("non-finite parameter".into()));
        }
        if self.r <= 0.0 || self.c <= 0.0 {
            return Err(BenchmarkError::InvalidParams(format!(
                "need r > 0 and c > 0, got r={}, c={}",
                self.r, self.c
            )));
        }
        Ok(())
    }
}

/// Diode current at voltage `v2` (Horner form).
pub fn h(params: &BenchmarkParams, v2: f64) -> f64 {
    let [a, b, c, d, e] = params.h_coeffs;
    ((((a * v2 + b) * v2 + c) * v2 + d) * v2 + e) * v2
}

/// Slope of the diode characteristic.
pub fn h_slope(params: &BenchmarkParams, v2: f64) -> f64 {
    let [a, b, c, d, e] = params.h_coeffs;
    (((5.0 * a * v2 + 4.0 * b) * v2 + 3.0 * c) * v2 + 2.0 * d) * v2 + e
}

/// Capacitor voltage rate: `(-h(v2) - v2/r + v1/r) / c`.
pub fn benchmark_derivative(params: &BenchmarkParams, v2: f64) -> f64 {
    (-h(params, v2) - v2 / params.r + params.v1 / params.r) / params.c
}

/// Stability of an equilibrium from the slope of the right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Unstable,
    /// `|h'(v) + 1/r|` below tolerance: a tangency/bifurcation point.
    Marginal,
}

/// Slope magnitudes below this at an equilibrium are flagged `Marginal`.
pub const MARGINAL_SLOPE_TOL: f64 = 1e-9;

/// An equilibrium voltage with its phase-line classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumReport {
    pub v_eq: f64,
    pub classification: Stability,
}

/// Classifies an equilibrium: stable iff the ODE right-hand side has negative
/// slope there, i.e. `h'(v_eq) + 1/r > 0`.
pub fn classify_stability(params: &BenchmarkParams, v_eq: f64) -> Stability {
    let slope = h_slope(params, v_eq) + 1.0 / params.r;
    if slope.abs() < MARGINAL_SLOPE_TOL {
        Stability::Marginal
    } else if slope > 0.0 {
        Stability::Stable
    } else {
        Stability::Unstable
    }
}

/// All equilibria in `[0, 1.5 v1]` — roots of `h(v) + v/r - v1/r` — each
/// classified. Fewer than three is a normal outcome after a disturbance.
pub fn benchmark_equilibria(params: &BenchmarkParams) -> Vec<EquilibriumReport> {
    let [a, b, c, d, e] = params.h_coeffs;
    let poly = Polynomial::new(vec![
        -params.v1 / params.r,
        e + 1.0 / params.r,
        d,
        c,
        b,
        a,
    ]);
    numerics::real_roots(&poly, 0.0, 1.5 * params.v1)
        .unwrap_or_default()
        .into_iter()
        .map(|v_eq| EquilibriumReport { v_eq, classification: classify_stability(params, v_eq) })
        .collect()
}

/// Residual of the equilibrium condition `(v1 - v2)/r = h(v2)`.
pub fn equilibrium_residual(params: &BenchmarkParams, v2: f64) -> f64 {
    h(params, v2) + v2 / params.r - params.v1 / params.r
}
