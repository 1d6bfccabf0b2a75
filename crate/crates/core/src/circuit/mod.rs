//! Gate-level circuit representation with exact unitary extraction.

mod gate;

use std::fmt;
use std::str::FromStr;

pub use crate::dense::{equal_up_to_phase, phase_insensitive_distance};
pub use gate::{Gate, GateKind};

use crate::dense::apply_local;
use crate::{CMatrix, Error, Result, C64};

/// Widest circuit for which [`Circuit::unitary`] builds a dense matrix.
pub const UNITARY_QUBIT_LIMIT: usize = 12;

/// Ordered gate list on a fixed number of qubits. Gates apply first to last.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Circuit { width, gates: Vec::new() }
    }

    pub fn from_gates(width: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut c = Circuit::new(width);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Appends a gate after checking its operands and angle.
    pub fn push(&mut self, g: Gate) -> Result<()> {
        let qs = g.qubits();
        if let Some(&q) = qs.iter().find(|&&q| q >= self.width) {
            return Err(Error::invalid(format!("{g} uses qubit {q} outside width {}", self.width)));
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::invalid(format!("{g} repeats an operand")));
        }
        if g.angle().is_some_and(|a| !a.is_finite()) {
            return Err(Error::invalid(format!("{g} has a non-finite angle")));
        }
        self.gates.push(g);
        Ok(())
    }

    /// Appends all gates of `other`, which must not be wider.
    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.width > self.width {
            return Err(Error::WidthMismatch { expected: self.width, found: other.width });
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    /// `a` followed by `b`.
    pub fn compose(a: &Circuit, b: &Circuit) -> Result<Circuit> {
        if a.width != b.width {
            return Err(Error::WidthMismatch { expected: a.width, found: b.width });
        }
        let mut c = a.clone();
        c.gates.extend_from_slice(&b.gates);
        Ok(c)
    }

    pub fn dagger(&self) -> Circuit {
        Circuit { width: self.width, gates: self.gates.iter().rev().map(Gate::inverse).collect() }
    }

    /// Same gates on a wider register, with qubit `q` relabelled `map[q]`.
    pub fn remapped(&self, width: usize, map: &[usize]) -> Result<Circuit> {
        if map.len() < self.width {
            return Err(Error::invalid("qubit map shorter than circuit width"));
        }
        Circuit::from_gates(width, self.gates.iter().map(|g| g.remap(|q| map[q])))
    }

    pub fn count(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind() == kind).count()
    }

    /// CX count after lowering: each RZZ is two CX around an Rz, each SWAP
    /// three CX.
    pub fn effective_cx_count(&self) -> usize {
        self.count(GateKind::CX) + 2 * self.count(GateKind::RZZ) + 3 * self.count(GateKind::SWAP)
    }

    /// Echoed cross-resonance tally with each RZZ realised as one
    /// pulse-scaled interaction and each SWAP as three CX.
    pub fn ecr_equivalent_count(&self) -> usize {
        self.count(GateKind::CX) + self.count(GateKind::RZZ) + 3 * self.count(GateKind::SWAP)
    }

    /// Replaces every `RZZ(θ)` on `(a, b)` by `CX(a→b) Rz_b(θ) CX(a→b)`.
    pub fn lower_rzz(&self) -> Circuit {
        let mut gates = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            match *g {
                Gate::Rzz(a, b, t) => gates.extend([Gate::Cx(a, b), Gate::Rz(b, t), Gate::Cx(a, b)]),
                other => gates.push(other),
            }
        }
        Circuit { width: self.width, gates }
    }

    /// Replaces every SWAP by three CX.
    pub fn lower_swaps(&self) -> Circuit {
        let mut gates = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            match *g {
                Gate::Swap(a, b) => gates.extend([Gate::Cx(a, b), Gate::Cx(b, a), Gate::Cx(a, b)]),
                other => gates.push(other),
            }
        }
        Circuit { width: self.width, gates }
    }

    /// Applies the gates to a flat amplitude vector over `n ≥ width` qubits.
    pub(crate) fn apply_to(&self, amps: &mut [C64], n: usize) {
        for g in &self.gates {
            apply_local(amps, n, &g.qubits(), &g.matrix());
        }
    }

    /// Dense unitary (product of gate matrices in application order).
    pub fn unitary(&self) -> Result<CMatrix> {
        if self.width > UNITARY_QUBIT_LIMIT {
            return Err(Error::TooLarge { what: "circuit unitary", qubits: self.width, limit: UNITARY_QUBIT_LIMIT });
        }
        let d = 1usize << self.width;
        let mut u = CMatrix::zeros(d, d);
        let mut col = vec![C64::new(0.0, 0.0); d];
        for b in 0..d {
            col.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
            col[b] = C64::new(1.0, 0.0);
            self.apply_to(&mut col, self.width);
            u.set_column(b, &nalgebra::DVector::from_column_slice(&col));
        }
        Ok(u)
    }
}

/// Dense unitary of `c`.
pub fn unitary_of(c: &Circuit) -> Result<CMatrix> {
    c.unitary()
}

impl fmt::Display for Circuit {
    /// A `# width N` header followed by one `KIND q0 [q1] [angle]` line per gate.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# width {}", self.width)?;
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

impl FromStr for Circuit {
    type Err = Error;

    /// Parses the `Display` format. Without a `# width` header the width is
    /// one more than the largest operand.
    fn from_str(s: &str) -> Result<Self> {
        let mut width: Option<usize> = None;
        let mut gates = Vec::new();
        for (idx, raw) in s.lines().enumerate() {
            let line = idx + 1;
            let text = raw.trim();
            if let Some(rest) = text.strip_prefix('#') {
                let mut it = rest.split_whitespace();
                if it.next() == Some("width") {
                    let w = it
                        .next()
                        .and_then(|w| w.parse().ok())
                        .ok_or(Error::Parse { line, msg: "bad width header".into() })?;
                    width = Some(w);
                }
                continue;
            }
            if text.is_empty() {
                continue;
            }
            let fields: Vec<&str> = text.split_whitespace().collect();
            let kind = GateKind::from_name(fields[0])
                .ok_or_else(|| Error::Parse { line, msg: format!("unknown gate {:?}", fields[0]) })?;
            let arity = kind.arity();
            let expected = arity + usize::from(kind.has_angle());
            if fields.len() != 1 + expected {
                return Err(Error::Parse { line, msg: format!("{} expects {expected} operand field(s)", kind.name()) });
            }
            let qubits = fields[1..=arity]
                .iter()
                .map(|f| f.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse { line, msg: format!("bad qubit index: {e}") })?;
            let angle = if kind.has_angle() {
                Some(
                    fields[arity + 1]
                        .parse::<f64>()
                        .map_err(|e| Error::Parse { line, msg: format!("bad angle: {e}") })?,
                )
            } else {
                None
            };
            let g = Gate::from_parts(kind, &qubits, angle).map_err(|e| Error::Parse { line, msg: e.to_string() })?;
            gates.push((line, g));
        }
        let width = width.unwrap_or_else(|| gates.iter().flat_map(|(_, g)| g.qubits()).max().map_or(0, |q| q + 1));
        let mut c = Circuit::new(width);
        for (line, g) in gates {
            c.push(g).map_err(|e| Error::Parse { line, msg: e.to_string() })?;
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toffoli() -> CMatrix {
        // controls 0 and 1, target 2
        let mut m = CMatrix::zeros(8, 8);
        for b in 0..8usize {
            let out = if b & 0b011 == 0b011 { b ^ 0b100 } else { b };
            m[(out, b)] = C64::new(1.0, 0.0);
        }
        m
    }

    #[test]
    fn empty_circuit_is_identity() {
        let u = Circuit::new(1).unitary().unwrap();
        assert_eq!(u, CMatrix::identity(2, 2));
        assert_eq!(Circuit::new(3).count(GateKind::CX), 0);
    }

    #[test]
    fn cx_permutation() {
        let c = Circuit::from_gates(2, [Gate::Cx(0, 1)]).unwrap();
        let u = c.unitary().unwrap();
        // control is qubit 0 (low bit): |01> (index 1) -> |11> (index 3)
        let perm = [0usize, 3, 2, 1];
        for (b, &out) in perm.iter().enumerate() {
            assert_eq!(u[(out, b)], C64::new(1.0, 0.0));
        }
    }

    #[test]
    fn rotation_conventions() {
        let t = 0.37;
        let rz = Circuit::from_gates(1, [Gate::Rz(0, t)]).unwrap().unitary().unwrap();
        assert!((rz[(0, 0)] - C64::from_polar(1.0, -t / 2.0)).norm() < 1e-15);
        assert!((rz[(1, 1)] - C64::from_polar(1.0, t / 2.0)).norm() < 1e-15);
        // two CX around Rz realise RZZ with the same angle
        let ladder = Circuit::from_gates(2, [Gate::Cx(0, 1), Gate::Rz(1, t), Gate::Cx(0, 1)]).unwrap();
        let rzz = Circuit::from_gates(2, [Gate::Rzz(0, 1, t)]).unwrap();
        assert!((ladder.unitary().unwrap() - rzz.unitary().unwrap()).norm() < 1e-14);
        let lowered = rzz.lower_rzz();
        assert_eq!(lowered.count(GateKind::CX), 2);
        let sw = Circuit::from_gates(2, [Gate::Swap(0, 1)]).unwrap();
        assert!((sw.lower_swaps().unitary().unwrap() - sw.unitary().unwrap()).norm() < 1e-15);
    }

    #[test]
    fn decomposed_toffoli_is_toffoli() {
        // H, T/T† and six CX
        let (a, b, t) = (0, 1, 2);
        let gates = [
            Gate::H(t),
            Gate::Cx(b, t),
            Gate::Tdg(t),
            Gate::Cx(a, t),
            Gate::T(t),
            Gate::Cx(b, t),
            Gate::Tdg(t),
            Gate::Cx(a, t),
            Gate::T(b),
            Gate::T(t),
            Gate::Cx(a, b),
            Gate::H(t),
            Gate::T(a),
            Gate::Tdg(b),
            Gate::Cx(a, b),
        ];
        let c = Circuit::from_gates(3, gates).unwrap();
        assert_eq!(c.count(GateKind::CX), 6);
        assert!(equal_up_to_phase(&toffoli(), &c.unitary().unwrap(), 1e-12));
    }

    #[test]
    fn counting_modes() {
        let c = Circuit::from_gates(3, [Gate::Swap(0, 1), Gate::Swap(1, 2), Gate::Cx(0, 2)]).unwrap();
        assert_eq!(c.count(GateKind::SWAP), 2);
        assert_eq!(c.count(GateKind::CX), 1);
        assert_eq!(c.effective_cx_count() - c.count(GateKind::CX), 6);
    }

    #[test]
    fn dagger_and_compose() {
        let c = Circuit::from_gates(
            3,
            [
                Gate::H(0),
                Gate::T(1),
                Gate::Rz(2, 0.4),
                Gate::Cx(0, 2),
                Gate::Rzz(1, 2, -1.3),
                Gate::S(1),
                Gate::Swap(0, 1),
            ],
        )
        .unwrap();
        let id = Circuit::compose(&c, &c.dagger()).unwrap().unitary().unwrap();
        assert!((id - CMatrix::identity(8, 8)).norm() < 1e-10);
        assert_eq!(Circuit::from_gates(1, [Gate::Rz(0, 0.3)]).unwrap().dagger().gates(), &[Gate::Rz(0, -0.3)]);
        assert_eq!(Circuit::from_gates(1, [Gate::T(0)]).unwrap().dagger().gates(), &[Gate::Tdg(0)]);
        assert!(matches!(Circuit::compose(&c, &Circuit::new(2)), Err(Error::WidthMismatch { .. })));
    }

    #[test]
    fn push_validation() {
        let mut c = Circuit::new(2);
        assert!(c.push(Gate::H(2)).is_err());
        assert!(c.push(Gate::Cx(1, 1)).is_err());
        assert!(c.push(Gate::Rz(0, f64::NAN)).is_err());
        assert!(c.push(Gate::Rzz(0, 1, 0.5)).is_ok());
    }

    #[test]
    fn unitary_guard() {
        assert!(matches!(Circuit::new(UNITARY_QUBIT_LIMIT + 1).unitary(), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn text_format() {
        let c = Circuit::from_gates(
            4,
            [Gate::H(3), Gate::Cx(3, 0), Gate::Rz(1, -0.125), Gate::Rzz(0, 2, 1e-3), Gate::Swap(2, 1)],
        )
        .unwrap();
        let text = c.to_string();
        assert!(text.contains("CX 3 0\n"));
        assert!(text.contains("RZ 1 -0.125\n"));
        assert_eq!(text.parse::<Circuit>().unwrap(), c);
        let inferred: Circuit = "h 0\ncx 0 2\n".parse().unwrap();
        assert_eq!(inferred.width(), 3);
        match "H 0\nRZ 1\n".parse::<Circuit>() {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!("FOO 1\n".parse::<Circuit>().is_err());
        assert!("# width 2\nCX 0 2\n".parse::<Circuit>().is_err());
    }
}
