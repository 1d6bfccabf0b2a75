use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::pauli::{Pauli, PauliString};
use crate::{CMatrix, Error, Result, C64};

/// Largest register for which dense matrices are built.
pub const DENSE_QUBIT_LIMIT: usize = 14;

/// Real-weighted Pauli string.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub coefficient: f64,
    pub string: PauliString,
}

impl PauliTerm {
    pub fn new(coefficient: f64, string: PauliString) -> Result<Self> {
        if !coefficient.is_finite() {
            return Err(Error::invalid(format!("coefficient {coefficient} is not finite")));
        }
        Ok(PauliTerm { coefficient, string })
    }
}

/// Sum of Pauli terms on a fixed number of qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    terms: Vec<PauliTerm>,
    num_qubits: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    #[default]
    Open,
    Periodic,
}

impl Hamiltonian {
    pub fn new(num_qubits: usize, terms: Vec<PauliTerm>) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::invalid("Hamiltonian needs at least one qubit"));
        }
        for (k, t) in terms.iter().enumerate() {
            if t.string.len() != num_qubits {
                return Err(Error::invalid(format!("term {k} has length {}, expected {num_qubits}", t.string.len())));
            }
            if !t.coefficient.is_finite() {
                return Err(Error::invalid(format!("term {k} has a non-finite coefficient")));
            }
        }
        Ok(Hamiltonian { terms, num_qubits })
    }

    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::new(num_qubits, Vec::new())
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    /// Σ |c_k|, an upper bound on the operator norm.
    pub fn coefficient_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient.abs()).sum()
    }

    /// `H |ψ⟩` without forming the dense matrix.
    pub fn apply(&self, psi: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); psi.len()];
        for term in &self.terms {
            for (b, &amp) in psi.iter().enumerate() {
                let (b2, phase) = term.string.apply_to_basis(b);
                out[b2] += phase * amp * term.coefficient;
            }
        }
        out
    }

    /// Dense matrix Σ c_k P_k in the computational basis.
    pub fn to_dense(&self) -> Result<CMatrix> {
        if self.num_qubits > DENSE_QUBIT_LIMIT {
            return Err(Error::TooLarge {
                what: "dense Hamiltonian",
                qubits: self.num_qubits,
                limit: DENSE_QUBIT_LIMIT,
            });
        }
        let d = self.dim();
        let mut m = CMatrix::zeros(d, d);
        for term in &self.terms {
            for b in 0..d {
                let (row, phase) = term.string.apply_to_basis(b);
                m[(row, b)] += phase * term.coefficient;
            }
        }
        Ok(m)
    }
}

/// Heisenberg chain `-J Σ (XX + YY + ZZ) - B Σ Z`.
///
/// Terms come out bond by bond (XX, YY, ZZ for bond (i, i+1), left to right,
/// then the wrap-around bond for a periodic chain), followed by the Z field on
/// each site in ascending order (omitted when `B = 0`). Synthesis and Trotterization keep this order.
pub fn build_heisenberg(n: usize, j: f64, b: f64, boundary: Boundary) -> Result<Hamiltonian> {
    if n == 0 {
        return Err(Error::invalid("chain needs at least one site"));
    }
    if !j.is_finite() || !b.is_finite() {
        return Err(Error::invalid("couplings must be finite"));
    }
    let mut bonds: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    if boundary == Boundary::Periodic {
        if n < 3 {
            return Err(Error::invalid("periodic chain needs at least three sites"));
        }
        bonds.push((n - 1, 0));
    }
    let mut terms = Vec::with_capacity(3 * bonds.len() + n);
    for &(a, c) in &bonds {
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            terms.push(PauliTerm::new(-j, PauliString::from_sparse(n, &[(a, p), (c, p)])?)?);
        }
    }
    for site in (0..n).filter(|_| b != 0.0) {
        terms.push(PauliTerm::new(-b, PauliString::from_sparse(n, &[(site, Pauli::Z)])?)?);
    }
    Hamiltonian::new(n, terms)
}

impl fmt::Display for Hamiltonian {
    /// One `coefficient PAULI_STRING` line per term.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.terms {
            writeln!(f, "{:?} {}", t.coefficient, t.string)?;
        }
        Ok(())
    }
}

impl FromStr for Hamiltonian {
    type Err = Error;

    /// Parses the line format written by `Display`. Blank lines and lines
    /// starting with `#` are skipped; at least one term is required.
    fn from_str(s: &str) -> Result<Self> {
        let mut terms = Vec::new();
        let mut width = None;
        for (idx, raw) in s.lines().enumerate() {
            let line = idx + 1;
            let text = raw.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = text.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::Parse { line, msg: format!("expected `coefficient PAULI_STRING`, got {text:?}") });
            }
            let coefficient: f64 = fields[0]
                .parse()
                .map_err(|_| Error::Parse { line, msg: format!("bad coefficient {:?}", fields[0]) })?;
            let string: PauliString =
                fields[1].parse().map_err(|e: Error| Error::Parse { line, msg: e.to_string() })?;
            let n = *width.get_or_insert(string.len());
            if string.len() != n {
                return Err(Error::Parse {
                    line,
                    msg: format!("string has {} qubits, earlier terms have {n}", string.len()),
                });
            }
            let term = PauliTerm::new(coefficient, string).map_err(|e| Error::Parse { line, msg: e.to_string() })?;
            terms.push(term);
        }
        match width {
            Some(n) => Hamiltonian::new(n, terms),
            None => Err(Error::Parse { line: 0, msg: "no terms found".into() }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn dimer_matches_closed_form_matrix() {
        for (j, b) in [(1.0, 1.0), (0.7, -0.3), (1.0, 2.0)] {
            let h = build_heisenberg(2, j, b, Boundary::Open).unwrap();
            let m = h.to_dense().unwrap();
            let expected = [
                [-(j + 2.0 * b), 0.0, 0.0, 0.0],
                [0.0, j, -2.0 * j, 0.0],
                [0.0, -2.0 * j, j, 0.0],
                [0.0, 0.0, 0.0, -(j - 2.0 * b)],
            ];
            for r in 0..4 {
                for col in 0..4 {
                    assert!((m[(r, col)] - c(expected[r][col])).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn zero_couplings_give_zero_matrix() {
        let m = build_heisenberg(2, 0.0, 0.0, Boundary::Open).unwrap().to_dense().unwrap();
        assert!(m.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn term_counts() {
        let h = build_heisenberg(3, 1.0, 0.0, Boundary::Open).unwrap();
        let two_body = h.terms().iter().filter(|t| t.string.weight() == 2).count();
        let one_body = h.terms().iter().filter(|t| t.string.weight() == 1).count();
        assert_eq!(two_body, 6);
        assert_eq!(one_body, 0);
        let m = h.to_dense().unwrap();
        assert!((&m - m.adjoint()).norm() < 1e-12);

        let h = build_heisenberg(5, 1.0, 0.5, Boundary::Open).unwrap();
        assert_eq!(h.terms().len(), 3 * 4 + 5);
        let ring = build_heisenberg(4, 1.0, 0.5, Boundary::Periodic).unwrap();
        assert_eq!(ring.terms().len(), 3 * 4 + 4);
        assert!(build_heisenberg(2, 1.0, 0.0, Boundary::Periodic).is_err());
    }

    #[test]
    fn builder_rejects_bad_input() {
        assert!(build_heisenberg(0, 1.0, 1.0, Boundary::Open).is_err());
        assert!(build_heisenberg(2, f64::NAN, 1.0, Boundary::Open).is_err());
        assert!(build_heisenberg(2, 1.0, f64::INFINITY, Boundary::Open).is_err());
    }

    #[test]
    fn single_terms() {
        let z: Hamiltonian = "1.0 Z".parse().unwrap();
        let m = z.to_dense().unwrap();
        assert_eq!(m[(0, 0)], c(1.0));
        assert_eq!(m[(1, 1)], c(-1.0));
        let xx: Hamiltonian = "1.0 XX".parse().unwrap();
        let m = xx.to_dense().unwrap();
        for r in 0..4 {
            for col in 0..4 {
                let want = if r + col == 3 { 1.0 } else { 0.0 };
                assert_eq!(m[(r, col)], c(want));
            }
        }
    }

    #[test]
    fn text_round_trip_and_errors() {
        let h = build_heisenberg(3, 1.25, -0.5, Boundary::Open).unwrap();
        let back: Hamiltonian = h.to_string().parse().unwrap();
        assert_eq!(back, h);

        assert!(matches!("".parse::<Hamiltonian>(), Err(Error::Parse { .. })));
        assert!(matches!("# only a comment\n".parse::<Hamiltonian>(), Err(Error::Parse { .. })));
        match "1.0 XX\nabc YY\n".parse::<Hamiltonian>() {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match "1.0 XX\n\n2.0 XYZ\n".parse::<Hamiltonian>() {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        match "1.0 XQ\n".parse::<Hamiltonian>() {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dense_guard() {
        let h = Hamiltonian::zero(DENSE_QUBIT_LIMIT + 1).unwrap();
        assert!(matches!(h.to_dense(), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn matrix_free_apply_matches_dense() {
        let h = build_heisenberg(3, 0.8, 0.3, Boundary::Open).unwrap();
        let m = h.to_dense().unwrap();
        let psi: Vec<C64> = (0..8).map(|k| C64::new(k as f64 * 0.1, 1.0 - k as f64 * 0.2)).collect();
        let v = nalgebra::DVector::from_vec(psi.clone());
        let want = &m * v;
        let got = h.apply(&psi);
        for k in 0..8 {
            assert!((want[k] - got[k]).norm() < 1e-13);
        }
    }
}
