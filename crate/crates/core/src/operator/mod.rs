//! Pauli-sum Hamiltonians and the exact-diagonalization reference.

mod hamiltonian;
mod pauli;
mod spectrum;

pub use hamiltonian::{build_heisenberg, Boundary, Hamiltonian, PauliTerm, DENSE_QUBIT_LIMIT};
pub use pauli::{Pauli, PauliString};
pub use spectrum::{diagonalize, diagonalize_with_vectors, trace_evolution_exact, Spectrum};

pub(crate) use spectrum::eigh;
