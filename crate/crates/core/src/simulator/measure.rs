use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use super::state::{DensityMatrix, StateVector};
use crate::operator::{eigh, PauliString};
use crate::{CMatrix, Error, Result, C64};

const PSD_TOL: f64 = -1e-9;

/// Mean of `shots` independent ±1 outcomes with `Pr(+1) = (1 + value)/2`.
///
/// The stream is fixed by `seed`; the ±1 count is drawn from the
/// equivalent binomial distribution.
pub fn sample_from_expectation(value: f64, shots: u64, seed: u64) -> Result<f64> {
    if shots == 0 {
        return Err(Error::invalid("at least one shot is required"));
    }
    if !value.is_finite() || value.abs() > 1.0 + 1e-9 {
        return Err(Error::invalid(format!("expectation {value} outside [-1, 1]")));
    }
    let p_plus = ((1.0 + value) / 2.0).clamp(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let plus =
        Binomial::new(shots, p_plus).map_err(|e| Error::Numerical(format!("binomial sampler: {e}")))?.sample(&mut rng);
    Ok((2.0 * plus as f64 - shots as f64) / shots as f64)
}

impl StateVector {
    /// Finite-shot estimate of `⟨P⟩`.
    pub fn sample_expectation(&self, p: &PauliString, shots: u64, seed: u64) -> Result<f64> {
        sample_from_expectation(self.expectation(p)?, shots, seed)
    }
}

impl DensityMatrix {
    /// Finite-shot estimate of `Tr(ρP)`.
    pub fn sample_expectation(&self, p: &PauliString, shots: u64, seed: u64) -> Result<f64> {
        sample_from_expectation(self.expectation(p)?, shots, seed)
    }
}

/// `√ρ` from the eigen-decomposition, after a positivity check.
fn psd_sqrt(rho: &DensityMatrix) -> Result<CMatrix> {
    let spec = eigh(rho.hermitian_part())?;
    if let Some(&min) = spec.values.first() {
        if min < PSD_TOL {
            return Err(Error::invalid(format!("state has negative eigenvalue {min:.3e}")));
        }
    }
    let v = spec.eigenvectors.expect("eigh returns eigenvectors");
    let mut scaled = v.clone();
    for (k, mut col) in scaled.column_iter_mut().enumerate() {
        col *= C64::new(spec.values[k].max(0.0).sqrt(), 0.0);
    }
    Ok(scaled * v.adjoint())
}

/// Uhlmann fidelity `(Tr √(√ρ σ √ρ))²`, clamped to `[0, 1]`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.num_qubits() != sigma.num_qubits() {
        return Err(Error::WidthMismatch { expected: rho.num_qubits(), found: sigma.num_qubits() });
    }
    let s_sigma = sigma.eigenvalues()?;
    if s_sigma.first().is_some_and(|&m| m < PSD_TOL) {
        return Err(Error::invalid("second state is not positive semidefinite"));
    }
    let root = psd_sqrt(rho)?;
    let inner = &root * sigma.matrix() * &root;
    let inner = (&inner + inner.adjoint()) * C64::new(0.5, 0.0);
    let mu = eigh(inner)?.values;
    let f: f64 = mu.iter().map(|m| m.max(0.0).sqrt()).sum();
    Ok((f * f).clamp(0.0, 1.0))
}

/// Fidelity with `I/d`, which reduces to `(Σ_i √(λ_i/d))²`.
pub fn fidelity_with_maximally_mixed(rho: &DensityMatrix) -> Result<f64> {
    let d = rho.dim() as f64;
    let lam = rho.eigenvalues()?;
    if lam.first().is_some_and(|&m| m < PSD_TOL) {
        return Err(Error::invalid("state is not positive semidefinite"));
    }
    let s: f64 = lam.iter().map(|l| (l.max(0.0) / d).sqrt()).sum();
    Ok((s * s).clamp(0.0, 1.0))
}
