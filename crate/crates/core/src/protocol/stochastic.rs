use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::series::{uniform_grid, SeriesMeta, TimeSeries};
use crate::operator::{diagonalize_with_vectors, Hamiltonian, Spectrum};
use crate::seed::{derive, stream};
use crate::simulator::{StateVector, SIMULATOR_QUBIT_LIMIT};
use crate::{Error, Result, C64};

/// Norm drift above which an Euler run carries a warning.
pub const EULER_DRIFT_WARNING: f64 = 0.1;

/// Basis in which random-phase states are expanded.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum StochasticBasis {
    #[default]
    Computational,
    /// Eigenvectors of an auxiliary Hamiltonian.
    EigenbasisOf(Hamiltonian),
}

/// Random-phase state `(1/√S) Σ_j e^{iθ_j} |E_j⟩` with its seed.
#[derive(Debug, Clone)]
pub struct StochasticSample {
    pub state: StateVector,
    pub seed: u64,
}

/// `S = 2^n` i.i.d. uniform phases in `[0, 2π)` drawn from `seed`.
pub fn stochastic_state(n: usize, seed: u64, basis: &StochasticBasis) -> Result<StochasticSample> {
    if n == 0 || n > SIMULATOR_QUBIT_LIMIT {
        return Err(Error::TooLarge { what: "stochastic state", qubits: n, limit: SIMULATOR_QUBIT_LIMIT });
    }
    let d = 1usize << n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.0 / (d as f64).sqrt();
    let coeffs: Vec<C64> = (0..d).map(|_| C64::from_polar(scale, rng.random_range(0.0..TAU))).collect();
    let amps = match basis {
        StochasticBasis::Computational => coeffs,
        StochasticBasis::EigenbasisOf(aux) => {
            if aux.num_qubits() != n {
                return Err(Error::WidthMismatch { expected: n, found: aux.num_qubits() });
            }
            let v = diagonalize_with_vectors(aux)?.eigenvectors.expect("requested eigenvectors");
            (&v * nalgebra::DVector::from_vec(coeffs)).iter().copied().collect()
        }
    };
    Ok(StochasticSample { state: StateVector::from_amplitudes(amps)?, seed })
}

/// Propagator used for the autocorrelation `⟨ψ|e^{-iHt}|ψ⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Propagator {
    /// Eigendecomposition of `H`.
    Exact,
    /// Repeated `(I - iHΔt)` with `Δt = inner_dt`, without renormalisation.
    Euler { inner_dt: f64 },
}

/// Averaged stochastic series plus the per-sample series behind it.
#[derive(Debug, Clone)]
pub struct StochasticRun {
    /// Mean over samples, with standard errors of the mean when `K ≥ 2`.
    pub mean: TimeSeries,
    pub samples: Vec<Vec<C64>>,
    /// Largest `|‖ψ(t)‖ - 1|` seen by the Euler propagator.
    pub norm_drift: Option<f64>,
    pub warnings: Vec<String>,
}

/// Per-sample `⟨ψ|e^{-iHt}|ψ⟩` on the grid `0, dt, …, T`, averaged over `K`
/// samples. Sample `k` uses the seed derived from `root_seed` and `k`.
pub fn run_stochastic_series(
    h: &Hamiltonian,
    k: usize,
    t_max: f64,
    dt: f64,
    propagator: Propagator,
    basis: &StochasticBasis,
    root_seed: u64,
) -> Result<StochasticRun> {
    if k == 0 {
        return Err(Error::invalid("at least one stochastic sample is required"));
    }
    let times = uniform_grid(t_max, dt)?;
    let n = h.num_qubits();
    let mut samples = Vec::with_capacity(k);
    let mut drift: Option<f64> = None;
    let spectrum = match propagator {
        Propagator::Exact => Some(diagonalize_with_vectors(h)?),
        Propagator::Euler { .. } => None,
    };
    for i in 0..k {
        let sample = stochastic_state(n, derive(root_seed, &[stream::STOCHASTIC_SAMPLE, i as u64]), basis)?;
        let series = match (&spectrum, propagator) {
            (Some(spec), _) => exact_autocorrelation(spec, &sample.state, &times),
            (None, Propagator::Euler { inner_dt }) => {
                let (s, d) = euler_autocorrelation(h, &sample.state, &times, inner_dt)?;
                drift = Some(drift.map_or(d, |x: f64| x.max(d)));
                s
            }
            (None, Propagator::Exact) => unreachable!("exact propagator carries a spectrum"),
        };
        samples.push(series);
    }

    let kf = k as f64;
    let mean: Vec<C64> = (0..times.len()).map(|j| samples.iter().map(|s| s[j]).sum::<C64>() / kf).collect();
    let mut warnings = Vec::new();
    if let Some(d) = drift {
        if d > EULER_DRIFT_WARNING {
            warnings.push(format!(
                "Euler propagator norm drifted by {:.1}% (above {:.0}%); reduce the inner step",
                100.0 * d,
                100.0 * EULER_DRIFT_WARNING
            ));
        }
    }
    let meta = SeriesMeta { seed: Some(root_seed), samples: Some(k), ..SeriesMeta::default() };
    let mut series = TimeSeries::new(times, mean.clone(), meta)?;
    if k >= 2 {
        let errs = (0..mean.len())
            .map(|j| {
                let (vr, vi) = samples.iter().fold((0.0, 0.0), |(a, b), s| {
                    let d = s[j] - mean[j];
                    (a + d.re * d.re, b + d.im * d.im)
                });
                C64::new((vr / (kf - 1.0) / kf).sqrt(), (vi / (kf - 1.0) / kf).sqrt())
            })
            .collect();
        series = series.with_std_errors(errs)?;
    }
    Ok(StochasticRun { mean: series, samples, norm_drift: drift, warnings })
}

/// `Σ_j |⟨E_j|ψ⟩|² e^{-iλ_j t}` for every grid time.
fn exact_autocorrelation(spec: &Spectrum, psi: &StateVector, times: &[f64]) -> Vec<C64> {
    let v = spec.eigenvectors.as_ref().expect("requested eigenvectors");
    let psi = psi.as_dvector();
    let weights: Vec<f64> = (0..v.ncols()).map(|j| v.column(j).dotc(&psi).norm_sqr()).collect();
    times
        .iter()
        .map(|&t| weights.iter().zip(&spec.values).map(|(w, &lam)| C64::from_polar(*w, -lam * t)).sum())
        .collect()
}

/// Euler autocorrelation and the largest norm drift along the way.
fn euler_autocorrelation(h: &Hamiltonian, psi: &StateVector, times: &[f64], inner_dt: f64) -> Result<(Vec<C64>, f64)> {
    if !(inner_dt > 0.0) || !inner_dt.is_finite() {
        return Err(Error::invalid(format!("inner time step must be positive, got {inner_dt}")));
    }
    let dt = times[1] - times[0];
    let per_step = (dt / inner_dt).round().max(1.0);
    if ((per_step * inner_dt - dt) / dt).abs() > 1e-9 {
        return Err(Error::invalid(format!("grid step {dt} is not a multiple of the inner step {inner_dt}")));
    }
    let bra = psi.amplitudes();
    let mut phi = bra.to_vec();
    let mut out = Vec::with_capacity(times.len());
    let mut drift: f64 = 0.0;
    let overlap = |phi: &[C64]| bra.iter().zip(phi).map(|(a, b)| a.conj() * b).sum::<C64>();
    out.push(overlap(&phi));
    let step = C64::new(0.0, -inner_dt);
    for _ in 1..times.len() {
        for _ in 0..per_step as usize {
            let hphi = h.apply(&phi);
            for (p, hp) in phi.iter_mut().zip(hphi) {
                *p += step * hp;
            }
        }
        let norm = phi.iter().map(C64::norm_sqr).sum::<f64>().sqrt();
        if !norm.is_finite() {
            return Err(Error::Numerical("Euler propagation overflowed".into()));
        }
        drift = drift.max((norm - 1.0).abs());
        out.push(overlap(&phi));
    }
    Ok((out, drift))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{build_heisenberg, trace_evolution_exact, Boundary};

    fn dimer() -> Hamiltonian {
        build_heisenberg(2, 1.0, 1.0, Boundary::Open).unwrap()
    }

    #[test]
    fn flat_amplitudes_and_distinct_seeds() {
        for basis in [StochasticBasis::Computational] {
            let a = stochastic_state(3, 1, &basis).unwrap();
            for amp in a.state.amplitudes() {
                assert!((amp.norm() - 8f64.sqrt().recip()).abs() < 1e-12);
            }
            let b = stochastic_state(3, 2, &basis).unwrap();
            assert!(a.state.inner(&b.state).norm() < 1.0 - 1e-6);
        }
        let aux = StochasticBasis::EigenbasisOf(dimer());
        let s = stochastic_state(2, 4, &aux).unwrap();
        assert!((s.state.norm() - 1.0).abs() < 1e-12);
        assert!(stochastic_state(3, 4, &aux).is_err());
    }

    #[test]
    fn samples_start_at_one() {
        let run =
            run_stochastic_series(&dimer(), 5, 1.0, 0.1, Propagator::Exact, &StochasticBasis::default(), 3).unwrap();
        for s in &run.samples {
            assert!((s[0] - C64::new(1.0, 0.0)).norm() < 1e-12);
        }
        assert!(run.mean.std_errors().is_some());
        assert!(run.norm_drift.is_none());
    }

    #[test]
    fn large_k_mean_tracks_trace() {
        let run =
            run_stochastic_series(&dimer(), 1000, 3.0, 0.1, Propagator::Exact, &StochasticBasis::default(), 8).unwrap();
        let errs = run.mean.std_errors().unwrap();
        for ((t, v), e) in run.mean.times().iter().zip(run.mean.values()).zip(errs) {
            let want = trace_evolution_exact(&dimer(), *t).unwrap() / 4.0;
            assert!((v.re - want.re).abs() <= 5.0 * e.re + 1e-12);
            assert!((v.im - want.im).abs() <= 5.0 * e.im + 1e-12);
        }
    }

    #[test]
    fn euler_converges_and_reports_drift() {
        let basis = StochasticBasis::default();
        let exact = run_stochastic_series(&dimer(), 3, 1.0, 0.1, Propagator::Exact, &basis, 2).unwrap();
        let fine =
            run_stochastic_series(&dimer(), 3, 1.0, 0.1, Propagator::Euler { inner_dt: 1e-4 }, &basis, 2).unwrap();
        assert!(exact.mean.max_abs_diff(&fine.mean).unwrap() < 1e-2);
        assert!(fine.warnings.is_empty());
        let coarse =
            run_stochastic_series(&dimer(), 3, 1.0, 0.1, Propagator::Euler { inner_dt: 0.1 }, &basis, 2).unwrap();
        assert!(coarse.norm_drift.unwrap() > EULER_DRIFT_WARNING);
        assert_eq!(coarse.warnings.len(), 1);
        assert!(run_stochastic_series(&dimer(), 3, 1.0, 0.1, Propagator::Euler { inner_dt: 0.03 }, &basis, 2).is_err());
    }
}
