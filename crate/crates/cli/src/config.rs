//! JSON experiment configurations.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;
use tracespec::operator::{build_heisenberg, Boundary, Hamiltonian};
use tracespec::protocol::{Evolution, MmsRealization, NoiseSchedule, Propagator};
use tracespec::spectral::Window;
use tracespec::synthesis::{
    eagle_127, heavy_hex_graph, CalibrationFile, CalibrationModel, CouplingGraph, SynthesisVariant,
};

use crate::error::CliError;

/// Reads and validates a config file. Relative paths inside it resolve
/// against the file's directory.
pub fn load<T: DeserializeOwned>(path: &Path) -> Result<(T, PathBuf), CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    let cfg = serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        CliError::Config(format!("{}: at `{field}`: {}", path.display(), e.inner()))
    })?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((cfg, base))
}

fn read_text(base: &Path, file: &Path) -> Result<String, CliError> {
    let p = base.join(file);
    fs::read_to_string(&p).map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))
}

/// Parameters of a Heisenberg chain.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSpec {
    pub n: usize,
    pub j: f64,
    pub b: f64,
    #[serde(default)]
    pub boundary: Boundary,
}

/// A Hamiltonian given inline or as a term file.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum HamiltonianRef {
    Heisenberg(ChainSpec),
    File(PathBuf),
}

impl HamiltonianRef {
    pub fn resolve(&self, base: &Path) -> Result<Hamiltonian, CliError> {
        match self {
            HamiltonianRef::Heisenberg(c) => Ok(build_heisenberg(c.n, c.j, c.b, c.boundary)?),
            HamiltonianRef::File(f) => {
                let text = read_text(base, f)?;
                text.parse().map_err(|e| CliError::Config(format!("{}: {e}", f.display())))
            }
        }
    }
}

/// A coupling graph given by name, shape or edge-list file.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphRef {
    Eagle127,
    Line(usize),
    HeavyHex { rows: usize, cols: usize },
    File(PathBuf),
}

impl GraphRef {
    pub fn resolve(&self, base: &Path) -> Result<CouplingGraph, CliError> {
        match self {
            GraphRef::Eagle127 => Ok(eagle_127()),
            GraphRef::Line(n) => Ok(CouplingGraph::line(*n)?),
            GraphRef::HeavyHex { rows, cols } => Ok(heavy_hex_graph(*rows, *cols)?),
            GraphRef::File(f) => {
                let text = read_text(base, f)?;
                text.parse().map_err(|e| CliError::Config(format!("{}: {e}", f.display())))
            }
        }
    }
}

/// Uniform error rates over every node and edge.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniformCalibration {
    pub eps1: f64,
    pub eps2: f64,
    pub t1_us: f64,
    pub pulse_scaling: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CalibrationRef {
    Uniform(UniformCalibration),
    File(PathBuf),
}

impl CalibrationRef {
    pub fn resolve(&self, base: &Path, g: &CouplingGraph) -> Result<CalibrationModel, CliError> {
        match self {
            CalibrationRef::Uniform(u) => Ok(CalibrationModel::uniform(g, u.eps1, u.eps2, u.t1_us, u.pulse_scaling)?),
            CalibrationRef::File(f) => {
                let text = read_text(base, f)?;
                let de = &mut serde_json::Deserializer::from_str(&text);
                let file: CalibrationFile = serde_path_to_error::deserialize(de)
                    .map_err(|e| CliError::Config(format!("{}: at `{}`: {}", f.display(), e.path(), e.inner())))?;
                Ok(CalibrationModel::from_file(&file)?)
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesConfig {
    pub hamiltonian: HamiltonianRef,
    pub t_max: f64,
    pub dt: f64,
    #[serde(default = "exact_evolution")]
    pub evolution: Evolution,
    /// Shots per basis; exact expectations when absent.
    #[serde(default)]
    pub shots: Option<u64>,
    #[serde(default)]
    pub realization: MmsRealization,
    #[serde(default)]
    pub noise: Option<NoiseSchedule>,
    #[serde(default)]
    pub seed: Option<u64>,
}

fn exact_evolution() -> Evolution {
    Evolution::Exact
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BasisRef {
    Computational,
    EigenbasisOf(HamiltonianRef),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StochasticConfig {
    pub hamiltonian: HamiltonianRef,
    pub samples: usize,
    pub t_max: f64,
    pub dt: f64,
    #[serde(default = "exact_propagator")]
    pub propagator: Propagator,
    #[serde(default = "computational")]
    pub basis: BasisRef,
    #[serde(default)]
    pub seed: Option<u64>,
}

fn exact_propagator() -> Propagator {
    Propagator::Exact
}

fn computational() -> BasisRef {
    BasisRef::Computational
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    /// Series CSV as written by `series` or `stochastic`.
    pub input: PathBuf,
    #[serde(default)]
    pub window: Window,
    #[serde(default = "yes")]
    pub normalize: bool,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    /// Resample onto this step by quadratic interpolation first.
    #[serde(default)]
    pub interpolate_dt: Option<f64>,
}

fn yes() -> bool {
    true
}

fn default_threshold() -> f64 {
    0.2
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthCountConfig {
    pub hamiltonian: HamiltonianRef,
    #[serde(default = "default_step")]
    pub dt: f64,
    #[serde(default = "all_variants")]
    pub variants: Vec<SynthesisVariant>,
    /// Also route each step onto this graph.
    #[serde(default)]
    pub graph: Option<GraphRef>,
    #[serde(default)]
    pub seed: Option<u64>,
}

fn default_step() -> f64 {
    0.1
}

fn all_variants() -> Vec<SynthesisVariant> {
    SynthesisVariant::ALL.to_vec()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RouteConfig {
    /// Circuit text file.
    pub circuit: PathBuf,
    pub graph: GraphRef,
    /// Initial logical-to-physical map; identity when absent.
    #[serde(default)]
    pub layout: Option<Vec<usize>>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FidelityConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub j: f64,
    pub b: f64,
    #[serde(default)]
    pub boundary: Boundary,
    pub t: f64,
    #[serde(default = "one")]
    pub steps: usize,
    #[serde(default = "half_angle")]
    pub variant: SynthesisVariant,
    #[serde(default = "eagle")]
    pub graph: GraphRef,
    pub calibration: CalibrationRef,
    #[serde(default)]
    pub seed: Option<u64>,
}

fn one() -> usize {
    1
}

fn half_angle() -> SynthesisVariant {
    SynthesisVariant::HalfAngle
}

fn eagle() -> GraphRef {
    GraphRef::Eagle127
}

/// Idle times listed explicitly or as `count` evenly spaced points on `[0, max]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum IdleTimes {
    List(Vec<f64>),
    Grid { max: f64, count: usize },
}

impl IdleTimes {
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        match self {
            IdleTimes::List(v) => Ok(v.clone()),
            IdleTimes::Grid { max, count } if *count >= 2 && *max > 0.0 => {
                Ok((0..*count).map(|k| max * k as f64 / (*count - 1) as f64).collect())
            }
            IdleTimes::Grid { .. } => Err(CliError::Config("idle_times.grid needs count ≥ 2 and max > 0".into())),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LifetimeConfig {
    pub n: usize,
    /// One shared T1 or one per qubit (system first, then garbage).
    pub t1: Vec<f64>,
    pub idle_times: IdleTimes,
}
