use nalgebra::SymmetricEigen;

use super::hamiltonian::Hamiltonian;
use crate::{CMatrix, Error, Result, C64};

const EIGEN_EPS: f64 = 1e-14;
const EIGEN_MAX_SWEEPS: usize = 100_000;

/// Eigen-decomposition of a Hamiltonian.
///
/// `values` holds every eigenvalue (with repetition) in ascending order and
/// lines up with the columns of `eigenvectors`. `eigenvalues` and
/// `multiplicities` hold the distinct levels after degeneracy grouping.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub eigenvectors: Option<CMatrix>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `Σ_j exp(-i λ_j t)` over all eigenvalues.
    pub fn trace_evolution(&self, t: f64) -> C64 {
        self.values.iter().map(|&l| C64::from_polar(1.0, -l * t)).sum()
    }

    /// `V exp(-iΛt) V†`; needs eigenvectors.
    pub fn propagator(&self, t: f64) -> Result<CMatrix> {
        let v =
            self.eigenvectors.as_ref().ok_or_else(|| Error::invalid("spectrum was computed without eigenvectors"))?;
        let phases: Vec<C64> = self.values.iter().map(|&l| C64::from_polar(1.0, -l * t)).collect();
        let mut scaled = v.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col *= phases[k];
        }
        Ok(scaled * v.adjoint())
    }

    /// `V Λ V†`; needs eigenvectors.
    pub fn reconstruct(&self) -> Result<CMatrix> {
        let v =
            self.eigenvectors.as_ref().ok_or_else(|| Error::invalid("spectrum was computed without eigenvectors"))?;
        let mut scaled = v.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col *= C64::new(self.values[k], 0.0);
        }
        Ok(scaled * v.adjoint())
    }
}

/// Eigenvalues of `H` grouped into degenerate levels.
pub fn diagonalize(h: &Hamiltonian) -> Result<Spectrum> {
    let mut s = diagonalize_with_vectors(h)?;
    s.eigenvectors = None;
    Ok(s)
}

/// As [`diagonalize`], keeping the orthonormal eigenvectors.
pub fn diagonalize_with_vectors(h: &Hamiltonian) -> Result<Spectrum> {
    eigh(h.to_dense()?)
}

/// Hermitian eigen-decomposition of a dense matrix, sorted ascending.
pub(crate) fn eigh(m: CMatrix) -> Result<Spectrum> {
    let d = m.nrows();
    let eig = SymmetricEigen::try_new(m, EIGEN_EPS, EIGEN_MAX_SWEEPS)
        .ok_or_else(|| Error::Numerical("Hermitian eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("eigensolver produced non-finite eigenvalues".into()));
    }
    let vectors = CMatrix::from_fn(d, d, |r, c| eig.eigenvectors[(r, order[c])]);

    let norm = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let tol = 1e-9 * norm.max(1.0);
    let mut eigenvalues: Vec<f64> = Vec::new();
    let mut multiplicities: Vec<usize> = Vec::new();
    let mut group_sum = 0.0;
    let mut prev = f64::NEG_INFINITY;
    for &v in &values {
        if v - prev > tol || multiplicities.is_empty() {
            if let Some(&m) = multiplicities.last() {
                *eigenvalues.last_mut().unwrap() = group_sum / m as f64;
            }
            eigenvalues.push(v);
            multiplicities.push(1);
            group_sum = v;
        } else {
            *multiplicities.last_mut().unwrap() += 1;
            group_sum += v;
        }
        prev = v;
    }
    if let Some(&m) = multiplicities.last() {
        *eigenvalues.last_mut().unwrap() = group_sum / m as f64;
    }

    Ok(Spectrum { values, eigenvalues, multiplicities, eigenvectors: Some(vectors) })
}

/// Ground-truth `u(t) = Tr exp(-iHt)`.
pub fn trace_evolution_exact(h: &Hamiltonian, t: f64) -> Result<C64> {
    Ok(diagonalize(h)?.trace_evolution(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{build_heisenberg, Boundary};
    use std::f64::consts::PI;

    #[test]
    fn dimer_levels() {
        let h = build_heisenberg(2, 1.0, 1.0, Boundary::Open).unwrap();
        let s = diagonalize(&h).unwrap();
        assert_eq!(s.multiplicities, vec![1, 1, 1, 1]);
        for (got, want) in s.eigenvalues.iter().zip([-3.0, -1.0, 1.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(s.eigenvectors.is_none());
    }

    #[test]
    fn dimer_degeneracy_at_b_equal_2j() {
        // levels of the closed-form matrix: -(J+2B), -(J-2B), J ± 2J
        let h = build_heisenberg(2, 1.0, 2.0, Boundary::Open).unwrap();
        let s = diagonalize(&h).unwrap();
        assert_eq!(s.multiplicities, vec![1, 1, 2]);
        for (got, want) in s.eigenvalues.iter().zip([-5.0, -1.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_hamiltonian() {
        let s = diagonalize(&Hamiltonian::zero(3).unwrap()).unwrap();
        assert_eq!(s.eigenvalues, vec![0.0]);
        assert_eq!(s.multiplicities, vec![8]);
    }

    #[test]
    fn trace_evolution_values() {
        let h = build_heisenberg(2, 1.0, 1.0, Boundary::Open).unwrap();
        assert_eq!(trace_evolution_exact(&h, 0.0).unwrap(), C64::new(4.0, 0.0));
        let u = trace_evolution_exact(&h, PI).unwrap();
        assert!((u - C64::new(-4.0, 0.0)).norm() < 1e-12);
        for t in [0.1, 0.77, 2.5, 5.9] {
            let u = trace_evolution_exact(&h, t).unwrap();
            let closed = 2.0 * (t.cos() + (3.0 * t).cos());
            assert!((u - C64::new(closed, 0.0)).norm() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn reconstruction_and_propagator() {
        let h: Hamiltonian = "0.3 XY\n-1.1 ZI\n0.45 YY\n0.2 IX\n".parse().unwrap();
        let s = diagonalize_with_vectors(&h).unwrap();
        let m = h.to_dense().unwrap();
        assert!((s.reconstruct().unwrap() - &m).norm() < 1e-10);
        let v = s.eigenvectors.as_ref().unwrap();
        assert!((v.adjoint() * v - CMatrix::identity(4, 4)).norm() < 1e-10);
        let u = s.propagator(0.9).unwrap();
        assert!((u.trace() - s.trace_evolution(0.9)).norm() < 1e-10);
        assert!((&u * u.adjoint() - CMatrix::identity(4, 4)).norm() < 1e-10);
    }
}
