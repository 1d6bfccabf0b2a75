use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::graph::CouplingGraph;
use super::route::RoutedCircuit;
use crate::circuit::{Circuit, Gate};
use crate::{Error, Result};

fn default_divisor() -> f64 {
    PI
}

/// Per-node calibration entry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeCalibration {
    pub id: usize,
    pub eps1: f64,
    pub t1_us: f64,
}

/// Per-edge calibration entry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeCalibration {
    pub a: usize,
    pub b: usize,
    pub eps2: f64,
}

/// Device error rates as stored in a calibration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationFile {
    pub nodes: Vec<NodeCalibration>,
    pub edges: Vec<EdgeCalibration>,
    pub pulse_scaling: bool,
    /// Angle that costs a full `ε₂` under pulse scaling.
    #[serde(default = "default_divisor")]
    pub pulse_angle_divisor: f64,
}

/// Validated error model used by [`estimate_fidelity`].
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationModel {
    eps1: HashMap<usize, f64>,
    t1_us: HashMap<usize, f64>,
    eps2: HashMap<(usize, usize), f64>,
    pub pulse_scaling: bool,
    pub pulse_angle_divisor: f64,
}

fn check_rate(what: &str, eps: f64) -> Result<()> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::invalid(format!("{what} error rate {eps} outside [0, 1)")));
    }
    Ok(())
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl CalibrationModel {
    pub fn from_file(file: &CalibrationFile) -> Result<Self> {
        if !(file.pulse_angle_divisor > 0.0) || !file.pulse_angle_divisor.is_finite() {
            return Err(Error::invalid("pulse angle divisor must be positive"));
        }
        let mut eps1 = HashMap::new();
        let mut t1_us = HashMap::new();
        for n in &file.nodes {
            check_rate(&format!("node {}", n.id), n.eps1)?;
            if !(n.t1_us > 0.0) || !n.t1_us.is_finite() {
                return Err(Error::invalid(format!("node {} has non-positive T1 {}", n.id, n.t1_us)));
            }
            if eps1.insert(n.id, n.eps1).is_some() {
                return Err(Error::invalid(format!("node {} listed twice", n.id)));
            }
            t1_us.insert(n.id, n.t1_us);
        }
        let mut eps2 = HashMap::new();
        for e in &file.edges {
            check_rate(&format!("edge ({}, {})", e.a, e.b), e.eps2)?;
            if eps2.insert(edge_key(e.a, e.b), e.eps2).is_some() {
                return Err(Error::invalid(format!("edge ({}, {}) listed twice", e.a, e.b)));
            }
        }
        Ok(CalibrationModel {
            eps1,
            t1_us,
            eps2,
            pulse_scaling: file.pulse_scaling,
            pulse_angle_divisor: file.pulse_angle_divisor,
        })
    }

    /// Same rates on every node and edge of `g`.
    pub fn uniform(g: &CouplingGraph, eps1: f64, eps2: f64, t1_us: f64, pulse_scaling: bool) -> Result<Self> {
        Self::from_file(&CalibrationFile {
            nodes: (0..g.num_nodes()).map(|id| NodeCalibration { id, eps1, t1_us }).collect(),
            edges: g.edges().iter().map(|&(a, b)| EdgeCalibration { a, b, eps2 }).collect(),
            pulse_scaling,
            pulse_angle_divisor: PI,
        })
    }

    pub fn eps1(&self, q: usize) -> Result<f64> {
        self.eps1.get(&q).copied().ok_or_else(|| Error::MissingCalibration(format!("node {q}")))
    }

    pub fn t1_us(&self, q: usize) -> Result<f64> {
        self.t1_us.get(&q).copied().ok_or_else(|| Error::MissingCalibration(format!("node {q}")))
    }

    pub fn eps2(&self, a: usize, b: usize) -> Result<f64> {
        self.eps2.get(&edge_key(a, b)).copied().ok_or_else(|| Error::MissingCalibration(format!("edge ({a}, {b})")))
    }

    /// Success probability of a single gate.
    pub fn gate_fidelity(&self, g: &Gate) -> Result<f64> {
        Ok(match *g {
            Gate::Rz(..) => 1.0,
            Gate::H(q) | Gate::X(q) | Gate::S(q) | Gate::Sdg(q) | Gate::T(q) | Gate::Tdg(q) => 1.0 - self.eps1(q)?,
            Gate::Cx(a, b) => 1.0 - self.eps2(a, b)?,
            Gate::Swap(a, b) => (1.0 - self.eps2(a, b)?).powi(3),
            Gate::Rzz(a, b, theta) => {
                let e = self.eps2(a, b)?;
                if self.pulse_scaling {
                    1.0 - e * wrap_angle(theta).abs() / self.pulse_angle_divisor
                } else {
                    (1.0 - e).powi(2)
                }
            }
        })
    }
}

/// `θ` mapped into `(-π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let w = theta.rem_euclid(TAU);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

/// Product of per-gate success probabilities of a physical circuit.
///
/// Rz is free. Other single-qubit gates cost `ε₁`, CX costs `ε₂`, SWAP three
/// CX. RZZ costs two CX, or `ε₂·|θ|/divisor` with θ wrapped into `(-π, π]`
/// when pulse scaling is on.
pub fn estimate_circuit_fidelity(c: &Circuit, cal: &CalibrationModel) -> Result<f64> {
    c.gates().iter().try_fold(1.0, |f, g| Ok(f * cal.gate_fidelity(g)?))
}

/// [`estimate_circuit_fidelity`] of the routed physical circuit.
pub fn estimate_fidelity(rc: &RoutedCircuit, cal: &CalibrationModel) -> Result<f64> {
    estimate_circuit_fidelity(&rc.circuit, cal)
}
