//! Algebraic constraints of the two-node phasor circuit: voltage-magnitude
//! solutions for a given load power, the receiving-end voltage angle, a
//! complex-power oracle for round-trip checks, and P-V curve sampling.
//!
//! The closed-form voltage solve assumes the sending-end angle is zero and
//! the line has equal resistance and reactance; the quartic in the voltage
//! magnitude then reduces to a quadratic in `u = v2^2`:
//!
//! ```text
//! u^2 + (2 r (p2 + q2) - v1^2) u + 2 r^2 (p2^2 + q2^2) = 0
//! ```

use num_complex::Complex64;
use thiserror::Error;

/// Discriminant magnitudes below this (in `u = v2^2` space) are treated as a
/// coalesced double root at the nose of the P-V curve.
pub const COALESCE_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum PowerFlowError {
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("{0}")]
    DomainError(String),
}

/// Two-node circuit constants: an infinite bus (magnitude `v1`, angle
/// `delta1` fixed at zero) feeding a load through impedance `r + jx`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkParams {
    pub v1: f64,
    pub r: f64,
    pub x: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub delta1: f64,
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

impl NetworkParams {
    pub fn new(v1: f64, r: f64, x: f64) -> Result<Self, PowerFlowError> {
        let p = Self { v1, r, x, delta1: 0.0 };
        p.validate()?;
        Ok(p)
    }

    /// Equal-impedance line, the configuration the closed-form solve needs.
    pub fn symmetric(v1: f64, r: f64) -> Result<Self, PowerFlowError> {
        Self::new(v1, r, r)
    }

    pub fn validate(&self) -> Result<(), PowerFlowError> {
        if !(self.v1.is_finite() && self.r.is_finite() && self.x.is_finite()) {
            return Err(PowerFlowError::InvalidNetwork("non-finite parameter".into()));
        }
        if self.v1 <= 0.0 {
            return Err(PowerFlowError::InvalidNetwork(format!(
                "source voltage must be positive, got {}",
                self.v1
            )));
        }
        if self.r <= 0.0 || self.x < 0.0 {
            return Err(PowerFlowError::InvalidNetwork(format!(
                "line impedance must satisfy r > 0, x >= 0, got r={}, x={}",
                self.r, self.x
            )));
        }
        if self.delta1 != 0.0 {
            return Err(PowerFlowError::InvalidNetwork(
                "sending-end angle is fixed at zero".into(),
            ));
        }
        Ok(())
    }

    /// The voltage-magnitude algebra is only valid for r == x (exact
    /// representation equality of the configured values).
    pub fn require_equal_rx(&self) -> Result<(), PowerFlowError> {
        if self.r != self.x {
            return Err(PowerFlowError::InvalidNetwork(format!(
                "closed-form voltage solution requires r == x, got r={}, x={}",
                self.r, self.x
            )));
        }
        Ok(())
    }
}

/// Real and reactive power consumed at the receiving node, in p.u.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PowerPoint {
    pub p2: f64,
    pub q2: f64,
}

impl PowerPoint {
    pub fn new(p2: f64, q2: f64) -> Self {
        Self { p2, q2 }
    }
}

/// Nonnegative real voltage magnitudes satisfying the power-flow constraint,
/// ascending. Zero to two entries for a fixed load power.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct VoltageSolutions {
    roots: Vec<f64>,
}

impl VoltageSolutions {
    pub fn roots(&self) -> &[f64] {
        &self.roots
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn min(&self) -> Option<f64> {
        self.roots.first().copied()
    }

    pub fn max(&self) -> Option<f64> {
        self.roots.last().copied()
    }
}

/// Residual of the voltage-magnitude constraint at `v2`; zero at a solution.
pub fn constraint_residual(net: &NetworkParams, power: &PowerPoint, v2: f64) -> f64 {
    let u = v2 * v2;
    u * u + (2.0 * net.r * (power.p2 + power.q2) - net.v1 * net.v1) * u
        + 2.0 * net.r * net.r * (power.p2 * power.p2 + power.q2 * power.q2)
}

/// All real voltage magnitudes `v2 >= 0` admitted by the load power, solved
/// in closed form through the quadratic in `u = v2^2`. An empty result means
/// the operating point lies beyond the nose; a coalesced double root (the
/// nose itself) is reported once.
pub fn solve_voltage(
    net: &NetworkParams,
    power: &PowerPoint,
) -> Result<VoltageSolutions, PowerFlowError> {
    net.validate()?;
    net.require_equal_rx()?;
    if !(power.p2.is_finite() && power.q2.is_finite()) {
        return Err(PowerFlowError::DomainError("non-finite load power".into()));
    }

    let b = 2.0 * net.r * (power.p2 + power.q2) - net.v1 * net.v1;
    let c = 2.0 * net.r * net.r * (power.p2 * power.p2 + power.q2 * power.q2);
    let disc = b * b - 4.0 * c;

    let mut us: Vec<f64> = Vec::with_capacity(2);
    if disc.abs() <= COALESCE_TOL {
        us.push(-b / 2.0);
    } else if disc > 0.0 {
        // Standard cancellation-free quadratic: the large-magnitude root
        // first, the companion from the product of roots.
        let s = disc.sqrt();
        let q = -0.5 * (b + b.signum() * s);
        let (u1, u2) = (q, if q != 0.0 { c / q } else { -b - q });
        us.push(u1);
        us.push(u2);
    }

    let mut roots: Vec<f64> = us
        .into_iter()
        .filter(|u| *u >= 0.0)
        .map(f64::sqrt)
        .collect();
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() <= COALESCE_TOL);
    Ok(VoltageSolutions { roots })
}

/// Receiving-end voltage angle for a given real power and voltage magnitude:
///
/// ```text
/// delta2 = -pi/4 + acos((sqrt2 r p2 + (sqrt2 / 2) v2^2) / (v1 v2))
/// ```
///
/// The `v2^2` in the numerator is what makes the angle consistent with the
/// magnitude constraint: recomputing complex power from `(v2, delta2)`
/// returns the original `(p2, q2)` (see `complex_power_at_node2`).
pub fn voltage_angle(net: &NetworkParams, p2: f64, v2: f64) -> Result<f64, PowerFlowError> {
    net.validate()?;
    net.require_equal_rx()?;
    if v2 <= 0.0 || v2.is_nan() {
        return Err(PowerFlowError::DomainError(format!(
            "voltage angle needs v2 > 0, got {v2}"
        )));
    }
    let sqrt2 = std::f64::consts::SQRT_2;
    let arg = (sqrt2 * net.r * p2 + 0.5 * sqrt2 * v2 * v2) / (net.v1 * v2);
    // Allow a whisker of floating-point overshoot at the domain edge.
    if arg.abs() > 1.0 + 1e-12 {
        return Err(PowerFlowError::DomainError(format!(
            "operating point off the power-flow surface: acos argument {arg}"
        )));
    }
    Ok(-std::f64::consts::FRAC_PI_4 + arg.clamp(-1.0, 1.0).acos())
}

/// Complex power delivered into node 2 for a phasor `v2 /_ delta2`:
/// `s2 = v2 * conj((v1 - v2) / (r + jx))`. Valid for any nonzero line
/// impedance; this is the independent oracle for the closed-form solve.
pub fn complex_power_at_node2(net: &NetworkParams, v2: f64, delta2: f64) -> PowerPoint {
    let z = Complex64::new(net.r, net.x);
    let v2c = Complex64::from_polar(v2, delta2);
    let i = (Complex64::new(net.v1, 0.0) - v2c) / z;
    let s = v2c * i.conj();
    PowerPoint::new(s.re, s.im)
}

/// One sampled point of a P-V curve: both voltage branches when the load is
/// deliverable, nothing past the nose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PvPoint {
    pub p2: f64,
    pub branches: Option<PvBranches>,
}

/// Upper and lower voltage branches; equal at the nose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PvBranches {
    pub upper: f64,
    pub lower: f64,
}

/// Evaluates the voltage branches along a constant power factor ray
/// `q2 = k * p2`.
pub fn pv_curve(
    net: &NetworkParams,
    k: f64,
    p2_samples: &[f64],
) -> Result<Vec<PvPoint>, PowerFlowError> {
    if !k.is_finite() {
        return Err(PowerFlowError::DomainError("power factor ratio must be finite".into()));
    }
    let mut out = Vec::with_capacity(p2_samples.len());
    for &p2 in p2_samples {
        if p2 < 0.0 {
            return Err(PowerFlowError::DomainError(format!(
                "p2 samples must be nonnegative, got {p2}"
            )));
        }
        let sols = solve_voltage(net, &PowerPoint::new(p2, k * p2))?;
        let branches = match sols.roots() {
            [] => None,
            [only] => Some(PvBranches { upper: *only, lower: *only }),
            [lo, .., hi] => Some(PvBranches { upper: *hi, lower: *lo }),
        };
        out.push(PvPoint { p2, branches });
    }
    Ok(out)
}
