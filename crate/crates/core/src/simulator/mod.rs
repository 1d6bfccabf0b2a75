//! Statevector and density-matrix backends, noise channels, finite-shot
//! sampling and state fidelity.

mod channel;
mod measure;
mod state;

pub use channel::{relaxation_gamma, QuantumChannel};
pub use measure::{fidelity, fidelity_with_maximally_mixed, sample_from_expectation};
pub use state::{DensityMatrix, StateVector, DENSITY_QUBIT_LIMIT, SIMULATOR_QUBIT_LIMIT};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Circuit, Gate};
    use crate::operator::PauliString;
    use crate::{CMatrix, C64};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn bell() -> StateVector {
        let mut s = StateVector::zero(2).unwrap();
        s.apply_circuit(&Circuit::from_gates(2, [Gate::H(0), Gate::Cx(0, 1)]).unwrap()).unwrap();
        s
    }

    fn pauli(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn hadamard_on_zero() {
        let mut s = StateVector::zero(1).unwrap();
        s.apply_circuit(&Circuit::from_gates(1, [Gate::H(0)]).unwrap()).unwrap();
        for a in s.amplitudes() {
            assert!((a - C64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        }
        assert!((s.expectation(&pauli("X")).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bell_state_from_h_and_cx() {
        let s = bell();
        let a = s.amplitudes();
        assert!((a[0] - C64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((a[3] - C64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!(a[1].norm() < 1e-15 && a[2].norm() < 1e-15);
        for keep in [0, 1] {
            let r = s.reduced_density(&[keep]).unwrap();
            assert!(r.max_abs_diff(&DensityMatrix::maximally_mixed(1).unwrap()) < 1e-15);
            let r2 = s.to_density().unwrap().partial_trace(&[keep]).unwrap();
            assert!(r2.max_abs_diff(&r) < 1e-15);
        }
    }

    #[test]
    fn maximally_mixed_is_unitarily_invariant() {
        let mut rho = DensityMatrix::maximally_mixed(3).unwrap();
        let c =
            Circuit::from_gates(3, [Gate::H(0), Gate::Cx(0, 2), Gate::Rzz(1, 2, 0.7), Gate::T(1), Gate::Swap(0, 1)])
                .unwrap();
        rho.apply_circuit(&c).unwrap();
        assert!(rho.max_abs_diff(&DensityMatrix::maximally_mixed(3).unwrap()) < 1e-12);
    }

    #[test]
    fn unitary_application_matches_circuit_unitary() {
        let c = Circuit::from_gates(3, [Gate::H(2), Gate::Cx(2, 0), Gate::S(1), Gate::Rzz(0, 1, 0.3)]).unwrap();
        let u = c.unitary().unwrap();
        let mut a = StateVector::zero(3).unwrap();
        a.apply_circuit(&c).unwrap();
        let mut b = StateVector::zero(3).unwrap();
        b.apply_unitary(&[0, 1, 2], &u).unwrap();
        assert!((a.inner(&b) - C64::new(1.0, 0.0)).norm() < 1e-12);
        let mut rho = DensityMatrix::zero_state(3).unwrap();
        rho.apply_unitary(&[0, 1, 2], &u).unwrap();
        assert!(rho.max_abs_diff(&a.to_density().unwrap()) < 1e-12);
        assert!(a.apply_circuit(&Circuit::new(2)).is_err());
        assert!(b.apply_unitary(&[0, 0], &CMatrix::identity(4, 4)).is_err());
    }

    #[test]
    fn depolarized_garbage_leaves_computation_maximally_mixed() {
        let mut rho = bell().to_density().unwrap();
        rho.apply_channel(&QuantumChannel::depolarizing(1.0).unwrap(), &[0]).unwrap();
        let c = rho.partial_trace(&[1]).unwrap();
        assert!(c.max_abs_diff(&DensityMatrix::maximally_mixed(1).unwrap()) < 1e-15);
        // garbage itself is fully depolarized
        let g = rho.partial_trace(&[0]).unwrap();
        assert!(g.max_abs_diff(&DensityMatrix::maximally_mixed(1).unwrap()) < 1e-15);
    }

    #[test]
    fn amplitude_damping_limits() {
        let start = bell().to_density().unwrap();
        for q in [0, 1] {
            let mut rho = start.clone();
            rho.apply_channel(&QuantumChannel::amplitude_damping(0.0).unwrap(), &[q]).unwrap();
            assert!(rho.max_abs_diff(&start) < 1e-15);
        }
        let mut rho = start.clone();
        let full = QuantumChannel::amplitude_damping(1.0).unwrap();
        rho.apply_channel(&full, &[0]).unwrap();
        rho.apply_channel(&full, &[1]).unwrap();
        assert!(rho.max_abs_diff(&DensityMatrix::zero_state(2).unwrap()) < 1e-15);
    }

    #[test]
    fn channel_width_checks() {
        let mut rho = DensityMatrix::maximally_mixed(2).unwrap();
        let two = QuantumChannel::random(2, 2, 7).unwrap();
        assert!(rho.apply_channel(&two, &[0]).is_err());
        rho.apply_channel(&two, &[1, 0]).unwrap();
        assert!((rho.trace() - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(rho.hermiticity_error() < 1e-12);
    }

    #[test]
    fn partial_trace_cases() {
        // |0> ⊗ |+>: qubit 0 in |0>, qubit 1 in |+>
        let mut s = StateVector::zero(2).unwrap();
        s.apply_circuit(&Circuit::from_gates(2, [Gate::H(1)]).unwrap()).unwrap();
        let plus = s.to_density().unwrap().partial_trace(&[1]).unwrap();
        for r in 0..2 {
            for c in 0..2 {
                assert!((plus.get(r, c) - C64::new(0.5, 0.0)).norm() < 1e-15);
            }
        }
        // three Bell pairs (0,3), (1,4), (2,5)
        let mut s = StateVector::zero(6).unwrap();
        let mut c = Circuit::new(6);
        for k in 0..3 {
            c.push(Gate::H(k + 3)).unwrap();
            c.push(Gate::Cx(k + 3, k)).unwrap();
        }
        s.apply_circuit(&c).unwrap();
        let r = s.reduced_density(&[0, 1, 2]).unwrap();
        assert!(r.max_abs_diff(&DensityMatrix::maximally_mixed(3).unwrap()) < 1e-12);
        assert!(s.reduced_density(&[]).is_err());
        assert!(s.reduced_density(&[6]).is_err());
        assert!(s.reduced_density(&[1, 1]).is_err());
    }

    #[test]
    fn expectations() {
        let mixed = DensityMatrix::maximally_mixed(1).unwrap();
        for p in ["X", "Y", "Z"] {
            assert!(mixed.expectation(&pauli(p)).unwrap().abs() < 1e-15);
        }
        assert!((mixed.expectation(&pauli("I")).unwrap() - 1.0).abs() < 1e-15);
        let b = bell();
        assert!((b.expectation(&pauli("XX")).unwrap() - 1.0).abs() < 1e-12);
        assert!((b.expectation(&pauli("YY")).unwrap() + 1.0).abs() < 1e-12);
        let rho = b.to_density().unwrap();
        assert!((rho.expectation(&pauli("YY")).unwrap() + 1.0).abs() < 1e-12);
        assert!(rho.expectation(&pauli("XYZ")).is_err());
    }

    #[test]
    fn shot_sampling() {
        let plus = {
            let mut s = StateVector::zero(1).unwrap();
            s.apply_circuit(&Circuit::from_gates(1, [Gate::H(0)]).unwrap()).unwrap();
            s
        };
        for shots in [1, 17, 8192] {
            assert_eq!(plus.sample_expectation(&pauli("X"), shots, 3).unwrap(), 1.0);
        }
        let a = plus.sample_expectation(&pauli("Z"), 1000, 42).unwrap();
        let b = plus.sample_expectation(&pauli("Z"), 1000, 42).unwrap();
        assert_eq!(a, b);
        assert!(sample_from_expectation(0.0, 0, 1).is_err());
        assert!(sample_from_expectation(1.5, 10, 1).is_err());
    }

    #[test]
    fn fidelity_closed_forms() {
        let zero = DensityMatrix::zero_state(1).unwrap();
        let mixed1 = DensityMatrix::maximally_mixed(1).unwrap();
        assert!((fidelity(&zero, &mixed1).unwrap() - 0.5).abs() < 1e-12);
        assert!((fidelity(&mixed1, &zero).unwrap() - 0.5).abs() < 1e-12);
        let zz = DensityMatrix::zero_state(2).unwrap();
        let mixed2 = DensityMatrix::maximally_mixed(2).unwrap();
        assert!((fidelity(&zz, &mixed2).unwrap() - 0.25).abs() < 1e-12);
        assert!((fidelity_with_maximally_mixed(&zz).unwrap() - 0.25).abs() < 1e-12);
        let mut rho = bell().to_density().unwrap();
        rho.apply_channel(&QuantumChannel::amplitude_damping(0.3).unwrap(), &[0]).unwrap();
        assert!((fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-10);
        let reduced = rho.partial_trace(&[1]).unwrap();
        let a = fidelity(&reduced, &mixed1).unwrap();
        let b = fidelity_with_maximally_mixed(&reduced).unwrap();
        assert!((a - b).abs() < 1e-12);
        assert!(fidelity(&zz, &mixed1).is_err());
    }

    #[test]
    fn density_validation() {
        let mut m = CMatrix::identity(2, 2) * C64::new(0.5, 0.0);
        assert!(DensityMatrix::from_matrix(&m).is_ok());
        m[(0, 0)] = C64::new(1.2, 0.0);
        m[(1, 1)] = C64::new(-0.2, 0.0);
        assert!(DensityMatrix::from_matrix(&m).is_err());
        let mut m = CMatrix::identity(2, 2) * C64::new(0.5, 0.0);
        m[(0, 1)] = C64::new(0.1, 0.0);
        assert!(DensityMatrix::from_matrix(&m).is_err());
    }
}
