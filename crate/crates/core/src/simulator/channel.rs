use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::operator::Pauli;
use crate::{CMatrix, Error, Result, C64};

const COMPLETENESS_TOL: f64 = 1e-10;

/// Trace-preserving channel given by Kraus operators on `k` qubits.
#[derive(Debug, Clone)]
pub struct QuantumChannel {
    num_qubits: usize,
    kraus: Vec<CMatrix>,
}

impl QuantumChannel {
    /// Checks shapes and completeness `Σ K†K = I`.
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| Error::invalid("channel needs at least one Kraus operator"))?;
        let d = first.nrows();
        if d == 0 || !d.is_power_of_two() {
            return Err(Error::invalid(format!("Kraus dimension {d} is not a power of two")));
        }
        if kraus.iter().any(|k| k.nrows() != d || k.ncols() != d) {
            return Err(Error::invalid("Kraus operators have mismatched shapes"));
        }
        let sum = kraus.iter().fold(CMatrix::zeros(d, d), |acc, k| acc + k.adjoint() * k);
        let dev = (sum - CMatrix::identity(d, d)).camax();
        if dev > COMPLETENESS_TOL {
            return Err(Error::NotTracePreserving(dev));
        }
        Ok(QuantumChannel { num_qubits: d.trailing_zeros() as usize, kraus })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    /// Single-qubit `ρ → (1-p)ρ + p I/2`, for `p ∈ [0, 1]`.
    pub fn depolarizing(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(format!("depolarizing probability {p} outside [0, 1]")));
        }
        let mut kraus = vec![pauli_matrix(Pauli::I) * C64::new((1.0 - 0.75 * p).sqrt(), 0.0)];
        for q in [Pauli::X, Pauli::Y, Pauli::Z] {
            kraus.push(pauli_matrix(q) * C64::new((p / 4.0).sqrt(), 0.0));
        }
        Self::new(kraus)
    }

    /// Single-qubit amplitude damping towards `|0⟩` with strength `γ ∈ [0, 1]`.
    pub fn amplitude_damping(gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::invalid(format!("damping strength {gamma} outside [0, 1]")));
        }
        let z = C64::new(0.0, 0.0);
        let k0 = CMatrix::from_row_slice(2, 2, &[C64::new(1.0, 0.0), z, z, C64::new((1.0 - gamma).sqrt(), 0.0)]);
        let k1 = CMatrix::from_row_slice(2, 2, &[z, C64::new(gamma.sqrt(), 0.0), z, z]);
        Self::new(vec![k0, k1])
    }

    /// Amplitude damping after idling for `t` with relaxation time `t1`
    /// (same units), i.e. `γ = 1 - exp(-t/T1)`.
    pub fn relaxation(t: f64, t1: f64) -> Result<Self> {
        Self::amplitude_damping(relaxation_gamma(t, t1)?)
    }

    /// Haar-like random channel on `num_qubits` qubits with `num_kraus`
    /// operators, drawn from a Gaussian isometry orthonormalised by QR.
    pub fn random(num_qubits: usize, num_kraus: usize, seed: u64) -> Result<Self> {
        if num_kraus == 0 {
            return Err(Error::invalid("random channel needs at least one Kraus operator"));
        }
        let d = 1usize << num_qubits;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = CMatrix::from_fn(d * num_kraus, d, |_, _| {
            C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
        });
        let q = a.qr().q();
        let kraus = (0..num_kraus).map(|k| q.rows(k * d, d).into_owned()).collect();
        Self::new(kraus)
    }
}

/// `1 - exp(-t/T1)`.
pub fn relaxation_gamma(t: f64, t1: f64) -> Result<f64> {
    if !(t1 > 0.0) || !t1.is_finite() {
        return Err(Error::invalid(format!("T1 must be positive, got {t1}")));
    }
    if !(t >= 0.0) {
        return Err(Error::invalid(format!("idle time must be non-negative, got {t}")));
    }
    Ok(-(-t / t1).exp_m1())
}

fn pauli_matrix(p: Pauli) -> CMatrix {
    let m = p.matrix();
    CMatrix::from_row_slice(2, 2, &[m[0][0], m[0][1], m[1][0], m[1][1]])
}
