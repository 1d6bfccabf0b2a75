//! Controlled time-evolution circuits, coupling graphs, routing and
//! calibration-based fidelity estimates.

mod calibration;
mod graph;
mod placement;
mod rotation;
mod route;

pub use calibration::{
    estimate_circuit_fidelity, estimate_fidelity, wrap_angle, CalibrationFile, CalibrationModel, EdgeCalibration,
    NodeCalibration,
};
pub use graph::{eagle_127, heavy_hex_graph, CouplingGraph};
pub use placement::{protocol_fidelity, protocol_placement, FidelityEstimate};
pub use rotation::{
    controlled_pauli_rotation, controlled_trotter_step, hadamard_test_circuit, mms_prep_circuit, toffoli_gates,
    ProtocolLayout, RzSite, SynthesisVariant,
};
pub use route::{nonconforming_gates, route, swap_count, RoutedCircuit};
