use serde::Serialize;

use super::calibration::{estimate_fidelity, CalibrationModel};
use super::graph::CouplingGraph;
use super::rotation::{hadamard_test_circuit, ProtocolLayout, RzSite, SynthesisVariant};
use super::route::{route, RoutedCircuit};
use crate::circuit::GateKind;
use crate::operator::Hamiltonian;
use crate::{Error, Result};

/// A long shortest path: the farthest node from node 0, then the farthest
/// node from that one, joined by a shortest path.
fn long_path(g: &CouplingGraph) -> Vec<usize> {
    let farthest = |src: usize| {
        let d = g.distances_from(src);
        (0..d.len()).max_by_key(|&v| (d[v], std::cmp::Reverse(v))).expect("non-empty graph")
    };
    let a = farthest(0);
    let b = farthest(a);
    g.shortest_path(a, b)
}

/// Initial placement of a Hadamard-test register on `g`.
///
/// System qubits occupy consecutive nodes of a long path, so chain bonds
/// are graph edges. Each garbage qubit takes the free node closest to its
/// partner, and the pointer the free node with the smallest total distance
/// to the system. Ties go to the lowest node index.
pub fn protocol_placement(g: &CouplingGraph, layout: ProtocolLayout) -> Result<Vec<usize>> {
    let n = layout.system;
    let path = long_path(g);
    if n == 0 || n > path.len() || layout.width() > g.num_nodes() {
        return Err(Error::Routing(format!(
            "cannot place a {n}-site chain on a graph with {} nodes and a {}-node path",
            g.num_nodes(),
            path.len()
        )));
    }
    let start = (path.len() - n) / 2;
    let mut place: Vec<usize> = path[start..start + n].to_vec();
    let mut used = vec![false; g.num_nodes()];
    for &p in &place {
        used[p] = true;
    }
    let nearest_free = |used: &[bool], score: &dyn Fn(usize) -> usize| {
        (0..g.num_nodes()).filter(|&v| !used[v]).min_by_key(|&v| (score(v), v)).expect("enough free nodes")
    };
    if layout.purified {
        for k in 0..n {
            let d = g.distances_from(place[k]);
            let v = nearest_free(&used, &|v| d[v]);
            used[v] = true;
            place.push(v);
        }
    }
    let dists: Vec<Vec<usize>> = place[..n].iter().map(|&p| g.distances_from(p)).collect();
    let v = nearest_free(&used, &|v| dists.iter().map(|d| d[v]).sum());
    place.push(v);
    Ok(place)
}

/// Routed protocol circuit with its gate tallies and estimated fidelity.
#[derive(Debug, Clone, Serialize)]
pub struct FidelityEstimate {
    pub sites: usize,
    pub gates: usize,
    pub cx: usize,
    pub rzz: usize,
    pub swaps: usize,
    pub effective_cx: usize,
    pub fidelity: f64,
}

/// Builds the purified Hadamard-test circuit for `exp(-iHt)`, places it with
/// [`protocol_placement`], routes it and multiplies the calibrated gate
/// fidelities. Rz sites are chosen nearest to the pointer's initial node.
pub fn protocol_fidelity(
    h: &Hamiltonian,
    t: f64,
    steps: usize,
    variant: SynthesisVariant,
    g: &CouplingGraph,
    cal: &CalibrationModel,
    seed: u64,
) -> Result<(RoutedCircuit, FidelityEstimate)> {
    let layout = ProtocolLayout { system: h.num_qubits(), purified: true };
    let placement = protocol_placement(g, layout)?;
    let from_pointer = g.distances_from(placement[layout.pointer()]);
    let rz = RzSite::Nearest(placement[..layout.system].iter().map(|&p| from_pointer[p]).collect());
    let logical = hadamard_test_circuit(h, t, steps, variant, layout, &rz)?;
    let routed = route(&logical, g, &placement, seed)?;
    let fidelity = estimate_fidelity(&routed, cal)?;
    let est = FidelityEstimate {
        sites: h.num_qubits(),
        gates: routed.circuit.len(),
        cx: routed.circuit.count(GateKind::CX),
        rzz: routed.circuit.count(GateKind::RZZ),
        swaps: routed.swap_count,
        effective_cx: routed.effective_cx_count(),
        fidelity,
    };
    Ok((routed, est))
}
