use std::f64::consts::FRAC_PI_4;
use std::fmt;

use crate::{CMatrix, Error, Result, C64};

/// Gate kinds of the fixed gate set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    H,
    X,
    S,
    Sdg,
    T,
    Tdg,
    Rz,
    CX,
    RZZ,
    SWAP,
}

impl GateKind {
    pub const ALL: [GateKind; 10] = [
        GateKind::H,
        GateKind::X,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
        GateKind::Rz,
        GateKind::CX,
        GateKind::RZZ,
        GateKind::SWAP,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::S => "S",
            GateKind::Sdg => "SDG",
            GateKind::T => "T",
            GateKind::Tdg => "TDG",
            GateKind::Rz => "RZ",
            GateKind::CX => "CX",
            GateKind::RZZ => "RZZ",
            GateKind::SWAP => "SWAP",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        GateKind::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(s))
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::CX | GateKind::RZZ | GateKind::SWAP => 2,
            _ => 1,
        }
    }

    pub fn has_angle(self) -> bool {
        matches!(self, GateKind::Rz | GateKind::RZZ)
    }
}

/// One gate with its operands.
///
/// Conventions: `Rz(θ) = diag(e^{-iθ/2}, e^{iθ/2})` and
/// `RZZ(θ) = exp(-i θ/2 Z⊗Z)`; `Cx` lists control before target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    S(usize),
    Sdg(usize),
    T(usize),
    Tdg(usize),
    Rz(usize, f64),
    Cx(usize, usize),
    Rzz(usize, usize, f64),
    Swap(usize, usize),
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        match self {
            Gate::H(_) => GateKind::H,
            Gate::X(_) => GateKind::X,
            Gate::S(_) => GateKind::S,
            Gate::Sdg(_) => GateKind::Sdg,
            Gate::T(_) => GateKind::T,
            Gate::Tdg(_) => GateKind::Tdg,
            Gate::Rz(..) => GateKind::Rz,
            Gate::Cx(..) => GateKind::CX,
            Gate::Rzz(..) => GateKind::RZZ,
            Gate::Swap(..) => GateKind::SWAP,
        }
    }

    /// Operand qubits; for `Cx` the control comes first.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::X(q) | Gate::S(q) | Gate::Sdg(q) | Gate::T(q) | Gate::Tdg(q) | Gate::Rz(q, _) => {
                vec![q]
            }
            Gate::Cx(a, b) | Gate::Rzz(a, b, _) | Gate::Swap(a, b) => vec![a, b],
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Rz(_, a) | Gate::Rzz(_, _, a) => Some(a),
            _ => None,
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.kind().arity() == 2
    }

    /// Builds a gate from its kind, operands and optional angle.
    pub fn from_parts(kind: GateKind, qubits: &[usize], angle: Option<f64>) -> Result<Self> {
        if qubits.len() != kind.arity() {
            return Err(Error::invalid(format!(
                "{} takes {} qubit(s), got {}",
                kind.name(),
                kind.arity(),
                qubits.len()
            )));
        }
        if kind.has_angle() != angle.is_some() {
            return Err(Error::invalid(format!(
                "{} {} an angle",
                kind.name(),
                if kind.has_angle() { "needs" } else { "does not take" }
            )));
        }
        let q = qubits[0];
        Ok(match kind {
            GateKind::H => Gate::H(q),
            GateKind::X => Gate::X(q),
            GateKind::S => Gate::S(q),
            GateKind::Sdg => Gate::Sdg(q),
            GateKind::T => Gate::T(q),
            GateKind::Tdg => Gate::Tdg(q),
            GateKind::Rz => Gate::Rz(q, angle.unwrap()),
            GateKind::CX => Gate::Cx(q, qubits[1]),
            GateKind::RZZ => Gate::Rzz(q, qubits[1], angle.unwrap()),
            GateKind::SWAP => Gate::Swap(q, qubits[1]),
        })
    }

    /// Inverse gate.
    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::S(q) => Gate::Sdg(q),
            Gate::Sdg(q) => Gate::S(q),
            Gate::T(q) => Gate::Tdg(q),
            Gate::Tdg(q) => Gate::T(q),
            Gate::Rz(q, a) => Gate::Rz(q, -a),
            Gate::Rzz(a, b, t) => Gate::Rzz(a, b, -t),
            g => g,
        }
    }

    /// Same gate with operands relabelled through `map`.
    pub fn remap(&self, map: impl Fn(usize) -> usize) -> Gate {
        match *self {
            Gate::H(q) => Gate::H(map(q)),
            Gate::X(q) => Gate::X(map(q)),
            Gate::S(q) => Gate::S(map(q)),
            Gate::Sdg(q) => Gate::Sdg(map(q)),
            Gate::T(q) => Gate::T(map(q)),
            Gate::Tdg(q) => Gate::Tdg(map(q)),
            Gate::Rz(q, a) => Gate::Rz(map(q), a),
            Gate::Cx(a, b) => Gate::Cx(map(a), map(b)),
            Gate::Rzz(a, b, t) => Gate::Rzz(map(a), map(b), t),
            Gate::Swap(a, b) => Gate::Swap(map(a), map(b)),
        }
    }

    /// Local matrix; the first operand is the least significant local bit.
    pub fn matrix(&self) -> CMatrix {
        let z = C64::new(0.0, 0.0);
        let o = C64::new(1.0, 0.0);
        let diag2 = |a: C64, b: C64| CMatrix::from_row_slice(2, 2, &[a, z, z, b]);
        match *self {
            Gate::H(_) => {
                let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                CMatrix::from_row_slice(2, 2, &[h, h, h, -h])
            }
            Gate::X(_) => CMatrix::from_row_slice(2, 2, &[z, o, o, z]),
            Gate::S(_) => diag2(o, C64::new(0.0, 1.0)),
            Gate::Sdg(_) => diag2(o, C64::new(0.0, -1.0)),
            Gate::T(_) => diag2(o, C64::from_polar(1.0, FRAC_PI_4)),
            Gate::Tdg(_) => diag2(o, C64::from_polar(1.0, -FRAC_PI_4)),
            Gate::Rz(_, a) => diag2(C64::from_polar(1.0, -a / 2.0), C64::from_polar(1.0, a / 2.0)),
            Gate::Cx(..) => {
                // local index = control + 2·target
                let mut m = CMatrix::zeros(4, 4);
                m[(0, 0)] = o;
                m[(3, 1)] = o;
                m[(2, 2)] = o;
                m[(1, 3)] = o;
                m
            }
            Gate::Rzz(_, _, t) => {
                let same = C64::from_polar(1.0, -t / 2.0);
                let diff = C64::from_polar(1.0, t / 2.0);
                CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![same, diff, diff, same]))
            }
            Gate::Swap(..) => {
                let mut m = CMatrix::zeros(4, 4);
                m[(0, 0)] = o;
                m[(2, 1)] = o;
                m[(1, 2)] = o;
                m[(3, 3)] = o;
                m
            }
        }
    }
}

impl fmt::Display for Gate {
    /// `KIND q0 [q1] [angle]`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind().name())?;
        for q in self.qubits() {
            write!(f, " {q}")?;
        }
        if let Some(a) = self.angle() {
            write!(f, " {a:?}")?;
        }
        Ok(())
    }
}
