use serde::{Deserialize, Serialize};

use super::series::{uniform_grid, SeriesMeta, TimeSeries};
use crate::circuit::{Circuit, Gate};
use crate::operator::{diagonalize_with_vectors, Hamiltonian, Pauli, PauliString, Spectrum};
use crate::seed::{derive, stream};
use crate::simulator::{sample_from_expectation, DensityMatrix, QuantumChannel, StateVector};
use crate::synthesis::{hadamard_test_circuit, mms_prep_circuit, ProtocolLayout, RzSite, SynthesisVariant};
use crate::{CMatrix, Error, Result, C64};

/// How pointer expectations are read out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measurement {
    /// Exact `⟨X⟩` and `⟨Y⟩`.
    Exact,
    /// Means of `shots` ±1 outcomes per basis, seeded.
    Shots { shots: u64, seed: u64 },
}

/// How the controlled evolution is realised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Evolution {
    /// Controlled `exp(-iHt)` built from the eigendecomposition.
    Exact,
    /// `steps` first-order Trotter steps synthesized as a gate circuit.
    Trotter { steps: usize, variant: SynthesisVariant },
}

/// Where the maximally mixed input comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MmsRealization {
    /// Bell pairs with garbage qubits, simulated as a pure state.
    #[default]
    Purified,
    /// `I/d` as a density matrix.
    Direct,
}

/// Depolarizing noise with probability `p` on each qubit of every
/// two-qubit gate, applied after the gate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSchedule {
    pub two_qubit_depolarizing: f64,
}

/// Settings of a Hadamard-test experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HadamardTest {
    pub measurement: Measurement,
    pub evolution: Evolution,
    pub realization: MmsRealization,
    pub noise: Option<NoiseSchedule>,
}

impl Default for HadamardTest {
    fn default() -> Self {
        HadamardTest {
            measurement: Measurement::Exact,
            evolution: Evolution::Exact,
            realization: MmsRealization::Purified,
            noise: None,
        }
    }
}

/// Reusable state for repeated points on the same Hamiltonian.
struct Engine<'a> {
    h: &'a Hamiltonian,
    cfg: HadamardTest,
    spectrum: Option<Spectrum>,
    channel: Option<QuantumChannel>,
}

impl<'a> Engine<'a> {
    fn new(h: &'a Hamiltonian, cfg: HadamardTest) -> Result<Self> {
        let spectrum = match cfg.evolution {
            Evolution::Exact => {
                if cfg.noise.is_some() {
                    return Err(Error::invalid("gate noise requires Trotter evolution"));
                }
                Some(diagonalize_with_vectors(h)?)
            }
            Evolution::Trotter { steps: 0, .. } => {
                return Err(Error::invalid("at least one Trotter step is required"));
            }
            Evolution::Trotter { .. } => None,
        };
        let channel = cfg.noise.map(|n| QuantumChannel::depolarizing(n.two_qubit_depolarizing)).transpose()?;
        Ok(Engine { h, cfg, spectrum, channel })
    }

    fn layout(&self) -> ProtocolLayout {
        ProtocolLayout { system: self.h.num_qubits(), purified: self.cfg.realization == MmsRealization::Purified }
    }

    /// Exact `(⟨X⟩, ⟨Y⟩)` of the pointer.
    fn pointer_expectations(&self, t: f64) -> Result<(f64, f64)> {
        let layout = self.layout();
        let (n, width, pointer) = (layout.system, layout.width(), layout.pointer());
        let px = PauliString::from_sparse(width, &[(pointer, Pauli::X)])?;
        let py = PauliString::from_sparse(width, &[(pointer, Pauli::Y)])?;

        if let Some(spec) = &self.spectrum {
            let cu = controlled(&spec.propagator(t)?);
            let mut targets: Vec<usize> = (0..n).collect();
            targets.push(pointer);
            return match layout.purified {
                true => {
                    let mut s = StateVector::zero(width)?;
                    s.apply_circuit(&mms_prep_circuit(n).remapped(width, &(0..2 * n).collect::<Vec<_>>())?)?;
                    s.apply_circuit(&Circuit::from_gates(width, [Gate::H(pointer)])?)?;
                    s.apply_unitary(&targets, &cu)?;
                    Ok((s.expectation(&px)?, s.expectation(&py)?))
                }
                false => {
                    let mut rho = mixed_with_plus_pointer(n)?;
                    rho.apply_unitary(&targets, &cu)?;
                    Ok((rho.expectation(&px)?, rho.expectation(&py)?))
                }
            };
        }

        let Evolution::Trotter { steps, variant } = self.cfg.evolution else {
            unreachable!("exact evolution carries a spectrum")
        };
        let c = hadamard_test_circuit(self.h, t, steps, variant, layout, &RzSite::Highest)?;
        match (&self.channel, layout.purified) {
            (None, true) => {
                let mut s = StateVector::zero(width)?;
                s.apply_circuit(&c)?;
                Ok((s.expectation(&px)?, s.expectation(&py)?))
            }
            (channel, purified) => {
                let mut rho = if purified { DensityMatrix::zero_state(width)? } else { mixed_with_zero_pointer(n)? };
                match channel {
                    None => rho.apply_circuit(&c)?,
                    Some(ch) => {
                        for g in c.gates() {
                            rho.apply_circuit(&Circuit::from_gates(width, [*g])?)?;
                            if g.is_two_qubit() {
                                for q in g.qubits() {
                                    rho.apply_channel(ch, &[q])?;
                                }
                            }
                        }
                    }
                }
                Ok((rho.expectation(&px)?, rho.expectation(&py)?))
            }
        }
    }

    fn point(&self, t: f64, shot_seed: Option<u64>) -> Result<C64> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::invalid(format!("evolution time must be non-negative, got {t}")));
        }
        let (x, y) = self.pointer_expectations(t)?;
        match (self.cfg.measurement, shot_seed) {
            (Measurement::Exact, _) => Ok(C64::new(x, y)),
            (Measurement::Shots { shots, seed }, override_seed) => {
                let s = override_seed.unwrap_or(seed);
                Ok(C64::new(
                    sample_from_expectation(x, shots, derive(s, &[stream::MEASURE_X]))?,
                    sample_from_expectation(y, shots, derive(s, &[stream::MEASURE_Y]))?,
                ))
            }
        }
    }
}

/// `|0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ U` with the pointer as the most significant
/// local qubit.
fn controlled(u: &CMatrix) -> CMatrix {
    let d = u.nrows();
    let mut m = CMatrix::identity(2 * d, 2 * d);
    m.view_mut((d, d), (d, d)).copy_from(u);
    m
}

/// `I/d ⊗ |p⟩⟨p|` on `n + 1` qubits, pointer on top, with `|p⟩⟨p|` given
/// by its 2×2 entries.
fn mixed_with_pointer(n: usize, pointer: [[f64; 2]; 2]) -> Result<DensityMatrix> {
    let d = 1usize << n;
    let mut m = CMatrix::zeros(2 * d, 2 * d);
    for i in 0..d {
        for a in 0..2 {
            for b in 0..2 {
                m[(i + a * d, i + b * d)] = C64::new(pointer[a][b] / d as f64, 0.0);
            }
        }
    }
    DensityMatrix::from_matrix(&m)
}

fn mixed_with_plus_pointer(n: usize) -> Result<DensityMatrix> {
    mixed_with_pointer(n, [[0.5, 0.5], [0.5, 0.5]])
}

fn mixed_with_zero_pointer(n: usize) -> Result<DensityMatrix> {
    mixed_with_pointer(n, [[1.0, 0.0], [0.0, 0.0]])
}

/// Hadamard-test estimate of `Tr(U(t))/d`, returned as `⟨X⟩ + i⟨Y⟩` of the
/// pointer.
///
/// The system register starts maximally mixed, the pointer in `|+⟩`, and
/// `U` is applied on the pointer's `|1⟩` branch. Exact measurement returns
/// the expectations themselves; shot measurement draws each from its own
/// stream derived from the configured seed.
pub fn hadamard_test_point(h: &Hamiltonian, t: f64, cfg: &HadamardTest) -> Result<C64> {
    Engine::new(h, *cfg)?.point(t, None)
}

/// One Hadamard-test point per grid time `0, dt, …, T`.
///
/// With shot measurement, point `k` uses the seed derived from the
/// configured root seed and `k`, so each point is reproducible on its own.
pub fn run_hadamard_series(h: &Hamiltonian, t_max: f64, dt: f64, cfg: &HadamardTest) -> Result<TimeSeries> {
    let times = uniform_grid(t_max, dt)?;
    let engine = Engine::new(h, *cfg)?;
    let values = times
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let point_seed = match cfg.measurement {
                Measurement::Shots { seed, .. } => Some(derive(seed, &[stream::HADAMARD_POINT, k as u64])),
                Measurement::Exact => None,
            };
            engine.point(t, point_seed)
        })
        .collect::<Result<Vec<_>>>()?;
    let (shots, seed) = match cfg.measurement {
        Measurement::Exact => (None, None),
        Measurement::Shots { shots, seed } => (Some(shots), Some(seed)),
    };
    let (trotter_steps, variant) = match cfg.evolution {
        Evolution::Exact => (None, None),
        Evolution::Trotter { steps, variant } => (Some(steps), Some(variant)),
    };
    TimeSeries::new(times, values, SeriesMeta { shots, seed, trotter_steps, variant, ..SeriesMeta::default() })
}
