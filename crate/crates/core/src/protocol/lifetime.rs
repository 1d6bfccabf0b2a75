use serde::Serialize;

use crate::simulator::{fidelity_with_maximally_mixed, relaxation_gamma, DensityMatrix, QuantumChannel};
use crate::synthesis::mms_prep_circuit;
use crate::{Error, Result};

/// State of the computation register after idling for `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LifetimePoint {
    pub t: f64,
    /// Fidelity with `I/2^n`.
    pub fidelity: f64,
    /// Probability of reading all zeros.
    pub p_zero: f64,
}

/// Prepares `n` Bell pairs, lets every qubit relax for each idle time and
/// reports the reduced computation state.
///
/// `t1[q]` is the relaxation time of qubit `q`, computation qubits `0..n`
/// first, then garbage `n..2n`; a single value applies to all qubits. Idle
/// times share the unit of `t1`.
pub fn mms_lifetime_experiment(n: usize, t1: &[f64], idle_times: &[f64]) -> Result<Vec<LifetimePoint>> {
    if n == 0 {
        return Err(Error::invalid("at least one Bell pair is required"));
    }
    let t1: Vec<f64> = match t1.len() {
        1 => vec![t1[0]; 2 * n],
        len if len == 2 * n => t1.to_vec(),
        len => return Err(Error::invalid(format!("expected 1 or {} T1 values, got {len}", 2 * n))),
    };
    let mut prepared = DensityMatrix::zero_state(2 * n)?;
    prepared.apply_circuit(&mms_prep_circuit(n))?;
    let computation: Vec<usize> = (0..n).collect();
    idle_times
        .iter()
        .map(|&t| {
            let mut rho = prepared.clone();
            for (q, &t1q) in t1.iter().enumerate() {
                rho.apply_channel(&QuantumChannel::amplitude_damping(relaxation_gamma(t, t1q)?)?, &[q])?;
            }
            let reduced = rho.partial_trace(&computation)?;
            Ok(LifetimePoint { t, fidelity: fidelity_with_maximally_mixed(&reduced)?, p_zero: reduced.probability(0) })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limits_and_monotonicity() {
        let times: Vec<f64> = (0..12).map(|k| 10.0 * k as f64).collect();
        let pts = mms_lifetime_experiment(2, &[50.0], &times).unwrap();
        assert!((pts[0].fidelity - 1.0).abs() < 1e-10);
        assert!((pts[0].p_zero - 0.25).abs() < 1e-12);
        for w in pts.windows(2) {
            assert!(w[1].fidelity < w[0].fidelity);
            assert!(w[1].p_zero > w[0].p_zero);
        }
        let late = mms_lifetime_experiment(1, &[1.0], &[60.0]).unwrap();
        assert!((late[0].p_zero - 1.0).abs() < 1e-12);
    }

    #[test]
    fn per_qubit_relaxation_times() {
        assert!(mms_lifetime_experiment(2, &[50.0, 60.0], &[1.0]).is_err());
        let pts = mms_lifetime_experiment(1, &[40.0, 1e9], &[20.0]).unwrap();
        // garbage barely relaxes, so the computation qubit decays alone
        let gamma = 1.0 - (-0.5f64).exp();
        assert!((pts[0].p_zero - (0.5 + 0.5 * gamma)).abs() < 1e-6);
    }
}
