use nalgebra::DVector;

use super::channel::QuantumChannel;
use crate::circuit::Circuit;
use crate::dense::apply_local;
use crate::operator::PauliString;
use crate::{CMatrix, Error, Result, C64};

const NORM_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-10;
const PSD_TOL: f64 = -1e-9;

/// Widest register the simulator accepts.
pub const SIMULATOR_QUBIT_LIMIT: usize = 24;
/// Widest register for density matrices (4^n entries).
pub const DENSITY_QUBIT_LIMIT: usize = 12;

fn check_width(n: usize, limit: usize, what: &'static str) -> Result<()> {
    if n > limit {
        return Err(Error::TooLarge { what, qubits: n, limit });
    }
    Ok(())
}

fn check_targets(n: usize, targets: &[usize], m: &CMatrix) -> Result<()> {
    if m.nrows() != 1 << targets.len() || m.ncols() != m.nrows() {
        return Err(Error::invalid(format!(
            "{}×{} operator does not act on {} qubit(s)",
            m.nrows(),
            m.ncols(),
            targets.len()
        )));
    }
    for (k, &q) in targets.iter().enumerate() {
        if q >= n {
            return Err(Error::invalid(format!("qubit {q} outside register of {n}")));
        }
        if targets[..k].contains(&q) {
            return Err(Error::invalid(format!("qubit {q} listed twice")));
        }
    }
    Ok(())
}

/// Pure state on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n: usize) -> Result<Self> {
        check_width(n, SIMULATOR_QUBIT_LIMIT, "state vector")?;
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[0] = C64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    /// Computational basis state `|b⟩`.
    pub fn basis(n: usize, b: usize) -> Result<Self> {
        let mut s = Self::zero(n)?;
        if b >= s.amps.len() {
            return Err(Error::invalid(format!("basis index {b} out of range")));
        }
        s.amps[0] = C64::new(0.0, 0.0);
        s.amps[b] = C64::new(1.0, 0.0);
        Ok(s)
    }

    /// Wraps amplitudes whose length is a power of two and whose norm is 1.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::invalid(format!("{len} amplitudes is not a power of two")));
        }
        let n = len.trailing_zeros() as usize;
        check_width(n, SIMULATOR_QUBIT_LIMIT, "state vector")?;
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::invalid(format!("state norm {norm} differs from 1")));
        }
        Ok(StateVector { n, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn apply_circuit(&mut self, c: &Circuit) -> Result<()> {
        if c.width() != self.n {
            return Err(Error::WidthMismatch { expected: self.n, found: c.width() });
        }
        c.apply_to(&mut self.amps, self.n);
        Ok(())
    }

    /// Applies a unitary on `targets` (`targets[0]` is its low local bit).
    pub fn apply_unitary(&mut self, targets: &[usize], u: &CMatrix) -> Result<()> {
        check_targets(self.n, targets, u)?;
        apply_local(&mut self.amps, self.n, targets, u);
        Ok(())
    }

    /// `⟨ψ|P|ψ⟩`.
    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        if p.len() != self.n {
            return Err(Error::WidthMismatch { expected: self.n, found: p.len() });
        }
        let mut acc = C64::new(0.0, 0.0);
        for (b, amp) in self.amps.iter().enumerate() {
            let (b2, phase) = p.apply_to_basis(b);
            acc += self.amps[b2].conj() * phase * amp;
        }
        Ok(acc.re)
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        check_width(self.n, DENSITY_QUBIT_LIMIT, "density matrix")?;
        let d = self.amps.len();
        let mut data = vec![C64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for c in 0..d {
                data[r * d + c] = self.amps[r] * self.amps[c].conj();
            }
        }
        Ok(DensityMatrix { n: self.n, data })
    }

    /// Reduced state on `keep` (new qubit `i` is old qubit `keep[i]`),
    /// computed without forming the full density matrix.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let traced = traced_qubits(self.n, keep)?;
        let k = keep.len();
        check_width(k, DENSITY_QUBIT_LIMIT, "density matrix")?;
        let dk = 1usize << k;
        let mut data = vec![C64::new(0.0, 0.0); dk * dk];
        for e in 0..(1usize << traced.len()) {
            let env = scatter(e, &traced);
            let slice: Vec<C64> = (0..dk).map(|l| self.amps[env | scatter(l, keep)]).collect();
            for r in 0..dk {
                for c in 0..dk {
                    data[r * dk + c] += slice[r] * slice[c].conj();
                }
            }
        }
        Ok(DensityMatrix { n: k, data })
    }
}

/// Spreads the bits of `local` onto the positions listed in `qubits`.
fn scatter(local: usize, qubits: &[usize]) -> usize {
    qubits.iter().enumerate().filter(|(bit, _)| local >> bit & 1 == 1).fold(0, |acc, (_, &q)| acc | (1 << q))
}

fn traced_qubits(n: usize, keep: &[usize]) -> Result<Vec<usize>> {
    if keep.is_empty() {
        return Err(Error::invalid("partial trace must keep at least one qubit"));
    }
    for (k, &q) in keep.iter().enumerate() {
        if q >= n {
            return Err(Error::invalid(format!("qubit {q} outside register of {n}")));
        }
        if keep[..k].contains(&q) {
            return Err(Error::invalid(format!("qubit {q} listed twice")));
        }
    }
    Ok((0..n).filter(|q| !keep.contains(q)).collect())
}

/// Mixed state on `n` qubits, stored row-major.
///
/// The row index occupies bits `n..2n` and the column index bits `0..n` of
/// the flat storage, so gates act on rows through qubit `q + n` and on
/// columns (conjugated) through qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    data: Vec<C64>,
}

impl DensityMatrix {
    /// `I / 2^n`.
    pub fn maximally_mixed(n: usize) -> Result<Self> {
        check_width(n, DENSITY_QUBIT_LIMIT, "density matrix")?;
        let d = 1usize << n;
        let mut data = vec![C64::new(0.0, 0.0); d * d];
        for k in 0..d {
            data[k * d + k] = C64::new(1.0 / d as f64, 0.0);
        }
        Ok(DensityMatrix { n, data })
    }

    pub fn zero_state(n: usize) -> Result<Self> {
        StateVector::zero(n)?.to_density()
    }

    /// Validates Hermiticity, unit trace and positivity.
    pub fn from_matrix(m: &CMatrix) -> Result<Self> {
        let d = m.nrows();
        if d == 0 || !d.is_power_of_two() || m.ncols() != d {
            return Err(Error::invalid(format!("{}×{} is not a qubit density matrix", d, m.ncols())));
        }
        let n = d.trailing_zeros() as usize;
        check_width(n, DENSITY_QUBIT_LIMIT, "density matrix")?;
        let mut data = vec![C64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for c in 0..d {
                data[r * d + c] = m[(r, c)];
            }
        }
        let rho = DensityMatrix { n, data };
        rho.validate()?;
        Ok(rho)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.dim() + c]
    }

    pub fn matrix(&self) -> CMatrix {
        let d = self.dim();
        CMatrix::from_row_slice(d, d, &self.data)
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|k| self.get(k, k)).sum()
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..d {
            for c in r..d {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    /// Checks the density-matrix invariants.
    pub fn validate(&self) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(Error::invalid(format!("not Hermitian (deviation {herm:.3e})")));
        }
        let tr = self.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > NORM_TOL {
            return Err(Error::invalid(format!("trace {tr} differs from 1")));
        }
        let min = self.eigenvalues()?.into_iter().fold(f64::INFINITY, f64::min);
        if min < PSD_TOL {
            return Err(Error::invalid(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(())
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(crate::operator::eigh(self.hermitian_part())?.values)
    }

    pub(crate) fn hermitian_part(&self) -> CMatrix {
        let m = self.matrix();
        (&m + m.adjoint()) * C64::new(0.5, 0.0)
    }

    /// Population of basis state `|b⟩`.
    pub fn probability(&self, b: usize) -> f64 {
        self.get(b, b).re
    }

    pub fn apply_circuit(&mut self, c: &Circuit) -> Result<()> {
        if c.width() != self.n {
            return Err(Error::WidthMismatch { expected: self.n, found: c.width() });
        }
        for g in c.gates() {
            self.conjugate_by(&g.qubits(), &g.matrix());
        }
        Ok(())
    }

    /// `ρ → UρU†` with `U` acting on `targets`.
    pub fn apply_unitary(&mut self, targets: &[usize], u: &CMatrix) -> Result<()> {
        check_targets(self.n, targets, u)?;
        self.conjugate_by(targets, u);
        Ok(())
    }

    fn conjugate_by(&mut self, targets: &[usize], u: &CMatrix) {
        let rows: Vec<usize> = targets.iter().map(|q| q + self.n).collect();
        apply_local(&mut self.data, 2 * self.n, &rows, u);
        apply_local(&mut self.data, 2 * self.n, targets, &u.conjugate());
    }

    /// `ρ → Σ_k K_k ρ K_k†` with the Kraus operators acting on `qubits`.
    pub fn apply_channel(&mut self, ch: &QuantumChannel, qubits: &[usize]) -> Result<()> {
        if qubits.len() != ch.num_qubits() {
            return Err(Error::WidthMismatch { expected: ch.num_qubits(), found: qubits.len() });
        }
        let mut out = vec![C64::new(0.0, 0.0); self.data.len()];
        for k in ch.kraus() {
            check_targets(self.n, qubits, k)?;
            let mut term = self.clone();
            term.conjugate_by(qubits, k);
            out.iter_mut().zip(&term.data).for_each(|(o, t)| *o += t);
        }
        self.data = out;
        Ok(())
    }

    /// Reduced state on `keep` (new qubit `i` is old qubit `keep[i]`).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let traced = traced_qubits(self.n, keep)?;
        let dk = 1usize << keep.len();
        let d = self.dim();
        let mut data = vec![C64::new(0.0, 0.0); dk * dk];
        for e in 0..(1usize << traced.len()) {
            let env = scatter(e, &traced);
            for r in 0..dk {
                let rr = env | scatter(r, keep);
                for c in 0..dk {
                    let cc = env | scatter(c, keep);
                    data[r * dk + c] += self.data[rr * d + cc];
                }
            }
        }
        Ok(DensityMatrix { n: keep.len(), data })
    }

    /// `Tr(ρP)`.
    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        if p.len() != self.n {
            return Err(Error::WidthMismatch { expected: self.n, found: p.len() });
        }
        let d = self.dim();
        // Tr(ρP) = Σ_b ⟨b|ρ P|b⟩ = Σ_b phase_b ρ[b, P(b)]
        let mut acc = C64::new(0.0, 0.0);
        for b in 0..d {
            let (b2, phase) = p.apply_to_basis(b);
            acc += self.data[b * d + b2] * phase;
        }
        Ok(acc.re)
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).fold(0.0, |acc, (a, b)| acc.max((a - b).norm()))
    }
}

impl From<&DensityMatrix> for CMatrix {
    fn from(rho: &DensityMatrix) -> Self {
        rho.matrix()
    }
}

impl StateVector {
    pub fn as_dvector(&self) -> DVector<C64> {
        DVector::from_column_slice(&self.amps)
    }
}
