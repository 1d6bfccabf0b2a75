use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::graph::CouplingGraph;
use crate::circuit::{Circuit, Gate, GateKind};
use crate::{Error, Result};

/// Circuit expressed on physical qubits, with every two-qubit gate on an
/// edge of the coupling graph.
#[derive(Debug, Clone)]
pub struct RoutedCircuit {
    /// Physical circuit; its width is the graph's node count.
    pub circuit: Circuit,
    /// `initial_layout[l]` is the physical qubit holding logical `l` at the start.
    pub initial_layout: Vec<usize>,
    /// Where each logical qubit sits once the circuit has run.
    pub final_layout: Vec<usize>,
    pub swap_count: usize,
}

impl RoutedCircuit {
    /// CX count with RZZ as 2 and SWAP as 3.
    pub fn effective_cx_count(&self) -> usize {
        self.circuit.effective_cx_count()
    }

    pub fn ecr_equivalent_count(&self) -> usize {
        self.circuit.ecr_equivalent_count()
    }

    pub fn two_qubit_count(&self) -> usize {
        self.circuit.gates().iter().filter(|g| g.is_two_qubit()).count()
    }
}

/// Two-qubit gates ahead of the current one that score a candidate SWAP.
pub const LOOKAHEAD_GATES: usize = 20;
const LOOKAHEAD_DECAY: f64 = 0.8;

/// Greedy SWAP insertion.
///
/// Gates are taken in order. Before a two-qubit gate whose operands are not
/// adjacent, SWAPs move one operand a step along a shortest path towards the
/// other until they touch. Among the moves of either operand that shorten
/// the distance, each step keeps those minimising the decayed total distance
/// of the next [`LOOKAHEAD_GATES`] two-qubit gates and draws uniformly among
/// them from a stream fixed by `seed`.
pub fn route(c: &Circuit, g: &CouplingGraph, layout: &[usize], seed: u64) -> Result<RoutedCircuit> {
    let n_phys = g.num_nodes();
    if layout.len() != c.width() {
        return Err(Error::WidthMismatch { expected: c.width(), found: layout.len() });
    }
    let mut logical_at: Vec<Option<usize>> = vec![None; n_phys];
    for (l, &p) in layout.iter().enumerate() {
        if p >= n_phys {
            return Err(Error::Routing(format!("logical {l} mapped to missing node {p}")));
        }
        if logical_at[p].replace(l).is_some() {
            return Err(Error::Routing(format!("layout maps two logical qubits to node {p}")));
        }
    }
    let dist = g.distance_matrix();
    let mut phys = layout.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Circuit::new(n_phys);
    let mut swaps = 0;
    let pairs: Vec<Option<(usize, usize)>> = c
        .gates()
        .iter()
        .map(|gate| match gate.qubits()[..] {
            [a, b] => Some((a, b)),
            _ => None,
        })
        .collect();

    for (i, gate) in c.gates().iter().enumerate() {
        if let [a, b] = gate.qubits()[..] {
            loop {
                let (pa, pb) = (phys[a], phys[b]);
                let d = dist[pa][pb];
                if d == usize::MAX {
                    return Err(Error::Routing(format!("nodes {pa} and {pb} are disconnected")));
                }
                if d <= 1 {
                    break;
                }
                let moves: Vec<(usize, usize)> = g
                    .neighbors(pa)
                    .iter()
                    .filter(|&&w| dist[w][pb] < d)
                    .map(|&w| (pa, w))
                    .chain(g.neighbors(pb).iter().filter(|&&w| dist[pa][w] < d).map(|&w| (pb, w)))
                    .collect();
                let upcoming: Vec<(usize, usize)> =
                    pairs[i + 1..].iter().flatten().take(LOOKAHEAD_GATES).copied().collect();
                let score = |&(from, to): &(usize, usize)| {
                    let moved = |p: usize| match p {
                        p if p == from => to,
                        p if p == to => from,
                        p => p,
                    };
                    upcoming
                        .iter()
                        .zip(std::iter::successors(Some(1.0), |w| Some(w * LOOKAHEAD_DECAY)))
                        .map(|(&(x, y), w)| w * dist[moved(phys[x])][moved(phys[y])] as f64)
                        .sum::<f64>()
                };
                let scores: Vec<f64> = moves.iter().map(score).collect();
                let best = scores.iter().copied().fold(f64::INFINITY, f64::min);
                let tied: Vec<(usize, usize)> =
                    moves.iter().zip(&scores).filter(|(_, &s)| s <= best + 1e-9).map(|(&m, _)| m).collect();
                let &(from, to) = tied.choose(&mut rng).expect("a shortening move exists");
                out.push(Gate::Swap(from, to))?;
                swaps += 1;
                let (lf, lt) = (logical_at[from], logical_at[to]);
                logical_at.swap(from, to);
                if let Some(l) = lf {
                    phys[l] = to;
                }
                if let Some(l) = lt {
                    phys[l] = from;
                }
            }
        }
        out.push(gate.remap(|q| phys[q]))?;
    }
    Ok(RoutedCircuit { circuit: out, initial_layout: layout.to_vec(), final_layout: phys, swap_count: swaps })
}

/// Two-qubit gates of `c` that do not sit on an edge of `g`.
pub fn nonconforming_gates(c: &Circuit, g: &CouplingGraph) -> usize {
    c.gates()
        .iter()
        .filter(|gate| match gate.qubits()[..] {
            [a, b] => !g.has_edge(a, b),
            _ => false,
        })
        .count()
}

/// SWAPs in `c`, as routing inserted them.
pub fn swap_count(c: &Circuit) -> usize {
    c.count(GateKind::SWAP)
}
