use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::operator::{Hamiltonian, Pauli, PauliString};
use crate::{Error, Result};

/// Decomposition used for each controlled Pauli rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SynthesisVariant {
    /// Every gate of the uncontrolled rotation gets the pointer as an extra
    /// control: CX ladders become Toffolis (six CX each), the central Rz a
    /// two-CX controlled Rz.
    #[serde(rename = "a", alias = "toffoli")]
    ToffoliBased,
    /// The pointer flips the direction of a half-angle rotation:
    /// `R(θ/2) · CX · R(-θ/2) · CX`, with the rotations built from RZZ.
    #[serde(rename = "b", alias = "nested_rzz")]
    NestedRzz,
    /// Only the central Rz is controlled, realised as an uncontrolled
    /// `Rz(θ/2)` followed by `RZZ(-θ/2)` between pointer and Rz site.
    #[serde(rename = "c", alias = "half_angle")]
    HalfAngle,
}

impl SynthesisVariant {
    pub const ALL: [SynthesisVariant; 3] =
        [SynthesisVariant::ToffoliBased, SynthesisVariant::NestedRzz, SynthesisVariant::HalfAngle];

    pub fn label(self) -> &'static str {
        match self {
            SynthesisVariant::ToffoliBased => "a",
            SynthesisVariant::NestedRzz => "b",
            SynthesisVariant::HalfAngle => "c",
        }
    }
}

impl fmt::Display for SynthesisVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SynthesisVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" | "toffoli" => Ok(SynthesisVariant::ToffoliBased),
            "b" | "nested_rzz" => Ok(SynthesisVariant::NestedRzz),
            "c" | "half_angle" => Ok(SynthesisVariant::HalfAngle),
            other => Err(Error::invalid(format!("unknown synthesis variant {other:?}"))),
        }
    }
}

/// How the qubit carrying the central Rz is picked from a string's support.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum RzSite {
    /// Highest-index qubit of the support.
    #[default]
    Highest,
    /// Support qubit with the smallest distance to the pointer; `distances[q]`
    /// is the coupling-graph distance of system qubit `q`. Ties go to the
    /// higher index.
    Nearest(Vec<usize>),
}

impl RzSite {
    pub fn pick(&self, support: &[usize]) -> usize {
        match self {
            RzSite::Highest => *support.last().expect("non-empty support"),
            RzSite::Nearest(dist) => *support
                .iter()
                .rev()
                .min_by_key(|&&q| dist.get(q).copied().unwrap_or(usize::MAX))
                .expect("non-empty support"),
        }
    }
}

/// Toffoli with controls `c1`, `c2` and target `t`: H, T/T† and six CX.
pub fn toffoli_gates(c1: usize, c2: usize, t: usize) -> [Gate; 15] {
    [
        Gate::H(t),
        Gate::Cx(c2, t),
        Gate::Tdg(t),
        Gate::Cx(c1, t),
        Gate::T(t),
        Gate::Cx(c2, t),
        Gate::T(c2),
        Gate::Tdg(t),
        Gate::Cx(c1, t),
        Gate::Cx(c1, c2),
        Gate::T(t),
        Gate::T(c1),
        Gate::Tdg(c2),
        Gate::H(t),
        Gate::Cx(c1, c2),
    ]
}

fn basis_in(p: &PauliString, out: &mut Vec<Gate>) {
    for q in p.support() {
        match p.get(q) {
            Pauli::X => out.push(Gate::H(q)),
            Pauli::Y => out.extend([Gate::Sdg(q), Gate::H(q)]),
            _ => {}
        }
    }
}

fn basis_out(p: &PauliString, out: &mut Vec<Gate>) {
    for q in p.support() {
        match p.get(q) {
            Pauli::X => out.push(Gate::H(q)),
            Pauli::Y => out.extend([Gate::H(q), Gate::S(q)]),
            _ => {}
        }
    }
}

/// `exp(-i φ/2 Z_S)` with the parity collected on `site`; the last ladder
/// qubit pairs with `site` through a single RZZ.
fn z_string_rotation(others: &[usize], site: usize, phi: f64, out: &mut Vec<Gate>) {
    match others.split_last() {
        None => out.push(Gate::Rz(site, phi)),
        Some((&last, ladder)) => {
            out.extend(ladder.iter().map(|&q| Gate::Cx(q, site)));
            out.push(Gate::Rzz(last, site, phi));
            out.extend(ladder.iter().rev().map(|&q| Gate::Cx(q, site)));
        }
    }
}

/// `|0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ exp(-iθ/2 P)` with `pointer` as control, up to
/// global phase.
///
/// X and Y letters are rotated onto Z with H (X) or S†·H (Y) before the
/// rotation and back afterwards. The parity of the support is collected on
/// `rz_site` by CX gates targeting it. The circuit is `max(len(P),
/// pointer + 1)` qubits wide.
pub fn controlled_pauli_rotation(
    p: &PauliString,
    theta: f64,
    variant: SynthesisVariant,
    pointer: usize,
    rz_site: usize,
) -> Result<Circuit> {
    let width = p.len().max(pointer + 1);
    let mut gates = Vec::new();
    append_controlled_rotation(p, theta, variant, pointer, rz_site, &mut gates)?;
    Circuit::from_gates(width, gates)
}

pub(crate) fn append_controlled_rotation(
    p: &PauliString,
    theta: f64,
    variant: SynthesisVariant,
    pointer: usize,
    rz_site: usize,
    out: &mut Vec<Gate>,
) -> Result<()> {
    if p.is_identity() {
        return Err(Error::invalid("controlled rotation needs a non-identity Pauli string"));
    }
    if !theta.is_finite() {
        return Err(Error::invalid("rotation angle must be finite"));
    }
    let support = p.support();
    if !support.contains(&rz_site) {
        return Err(Error::invalid(format!("Rz site {rz_site} is not in the support of {p}")));
    }
    if support.contains(&pointer) {
        return Err(Error::invalid(format!("pointer {pointer} overlaps the support of {p}")));
    }
    let others: Vec<usize> = support.iter().copied().filter(|&q| q != rz_site).collect();

    basis_in(p, out);
    match variant {
        SynthesisVariant::ToffoliBased => {
            for &q in &others {
                out.extend(toffoli_gates(pointer, q, rz_site));
            }
            out.extend([
                Gate::Rz(rz_site, theta / 2.0),
                Gate::Cx(pointer, rz_site),
                Gate::Rz(rz_site, -theta / 2.0),
                Gate::Cx(pointer, rz_site),
            ]);
            for &q in others.iter().rev() {
                out.extend(toffoli_gates(pointer, q, rz_site));
            }
        }
        SynthesisVariant::NestedRzz => {
            z_string_rotation(&others, rz_site, theta / 2.0, out);
            out.push(Gate::Cx(pointer, rz_site));
            z_string_rotation(&others, rz_site, -theta / 2.0, out);
            out.push(Gate::Cx(pointer, rz_site));
        }
        SynthesisVariant::HalfAngle => {
            out.extend(others.iter().map(|&q| Gate::Cx(q, rz_site)));
            out.push(Gate::Rz(rz_site, theta / 2.0));
            out.push(Gate::Rzz(pointer, rz_site, -theta / 2.0));
            out.extend(others.iter().rev().map(|&q| Gate::Cx(q, rz_site)));
        }
    }
    basis_out(p, out);
    Ok(())
}

/// One first-order Trotter step of `exp(-iH dt)` controlled on `pointer`.
///
/// Terms are applied in the Hamiltonian's own order, each as a controlled
/// rotation with `θ = 2·c·dt`. An identity term only shifts the phase of
/// the pointer's `|1⟩` branch and becomes `Rz(-θ/2)` on the pointer.
pub fn controlled_trotter_step(
    h: &Hamiltonian,
    dt: f64,
    variant: SynthesisVariant,
    pointer: usize,
    rz_site: &RzSite,
) -> Result<Circuit> {
    let n = h.num_qubits();
    if pointer < n {
        return Err(Error::invalid(format!("pointer {pointer} collides with system qubits 0..{n}")));
    }
    if !dt.is_finite() {
        return Err(Error::invalid("time step must be finite"));
    }
    let mut gates = Vec::new();
    for term in h.terms() {
        let theta = 2.0 * term.coefficient * dt;
        if term.string.is_identity() {
            gates.push(Gate::Rz(pointer, -theta / 2.0));
            continue;
        }
        let site = rz_site.pick(&term.string.support());
        append_controlled_rotation(&term.string, theta, variant, pointer, site, &mut gates)?;
    }
    Circuit::from_gates(pointer + 1, gates)
}

/// Bell-pair preparation on `2n` qubits: garbage qubit `n + k` gets H and
/// then controls a CX onto computation qubit `k`. Tracing out the garbage
/// leaves `I / 2^n` on qubits `0..n`.
pub fn mms_prep_circuit(n: usize) -> Circuit {
    let mut c = Circuit::new(2 * n);
    for k in 0..n {
        c.push(Gate::H(n + k)).expect("in range");
        c.push(Gate::Cx(n + k, k)).expect("in range");
    }
    c
}

/// Register layout of the Hadamard-test circuit: system qubits `0..n`,
/// then (when purified) garbage qubits `n..2n`, then the pointer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProtocolLayout {
    pub system: usize,
    pub purified: bool,
}

impl ProtocolLayout {
    pub fn pointer(&self) -> usize {
        if self.purified {
            2 * self.system
        } else {
            self.system
        }
    }

    pub fn width(&self) -> usize {
        self.pointer() + 1
    }
}

/// Full Hadamard-test circuit for `exp(-iHt)` with `steps` Trotter steps.
///
/// With a purified layout the Bell pairs are prepared first. The pointer's
/// Hadamard is placed immediately before the first gate that touches the
/// pointer, so the pointer idles in `|0⟩` for as long as possible.
pub fn hadamard_test_circuit(
    h: &Hamiltonian,
    t: f64,
    steps: usize,
    variant: SynthesisVariant,
    layout: ProtocolLayout,
    rz_site: &RzSite,
) -> Result<Circuit> {
    if steps == 0 {
        return Err(Error::invalid("at least one Trotter step is required"));
    }
    if layout.system != h.num_qubits() {
        return Err(Error::WidthMismatch { expected: h.num_qubits(), found: layout.system });
    }
    let pointer = layout.pointer();
    let step = controlled_trotter_step(h, t / steps as f64, variant, pointer, rz_site)?;

    let mut c = Circuit::new(layout.width());
    if layout.purified {
        c.extend(&mms_prep_circuit(layout.system))?;
    }
    let mut evolution = Circuit::new(layout.width());
    for _ in 0..steps {
        evolution.extend(&step)?;
    }
    let first = evolution.gates().iter().position(|g| g.qubits().contains(&pointer)).unwrap_or(evolution.len());
    for (k, g) in evolution.gates().iter().enumerate() {
        if k == first {
            c.push(Gate::H(pointer))?;
        }
        c.push(*g)?;
    }
    if first == evolution.len() {
        c.push(Gate::H(pointer))?;
    }
    Ok(c)
}
