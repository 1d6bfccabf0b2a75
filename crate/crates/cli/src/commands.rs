//! One runner per subcommand. Each writes its artifacts under `out` and
//! returns the paths it wrote.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use tracespec::circuit::{Circuit, GateKind};
use tracespec::operator::{build_heisenberg, diagonalize, Hamiltonian};
use tracespec::protocol::{
    mms_lifetime_experiment, run_hadamard_series, run_stochastic_series, uniform_grid, HadamardTest, Measurement,
    StochasticBasis, TimeSeries,
};
use tracespec::spectral::{dft, find_peaks, interpolate_quadratic, DftOptions};
use tracespec::synthesis::{
    controlled_trotter_step, protocol_fidelity, protocol_placement, route, ProtocolLayout, RzSite,
};

use crate::config::{
    load, BasisRef, FidelityConfig, LifetimeConfig, RouteConfig, SeriesConfig, SpectrumConfig, StochasticConfig,
    SynthCountConfig,
};
use crate::error::CliError;

/// Shared `--seed` and `--out` flags.
pub struct Common {
    pub seed: Option<u64>,
    pub out: PathBuf,
}

impl Common {
    /// Command-line seed, then config seed, then zero.
    fn seed(&self, from_config: Option<u64>) -> u64 {
        self.seed.or(from_config).unwrap_or(0)
    }

    fn write(&self, name: &str, contents: &str) -> Result<PathBuf, CliError> {
        fs::create_dir_all(&self.out)?;
        let path = self.out.join(name);
        fs::write(&path, contents)?;
        Ok(path)
    }

    fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<PathBuf, CliError> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Numerical(e.to_string()))?;
        text.push('\n');
        self.write(name, &text)
    }
}

fn read_hamiltonian(path: &Path) -> Result<Hamiltonian, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    text.parse().map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Eigenvalue table of a Hamiltonian term file, printed and written as CSV.
pub fn diagonalize_file(file: &Path, common: &Common) -> Result<Vec<PathBuf>, CliError> {
    let h = read_hamiltonian(file)?;
    let spec = diagonalize(&h)?;
    let mut csv = String::from("eigenvalue,multiplicity\n");
    for (e, m) in spec.eigenvalues.iter().zip(&spec.multiplicities) {
        println!("{e:>14.9} {m:>4}");
        writeln!(csv, "{e:?},{m}").expect("write to string");
    }
    Ok(vec![common.write("eigenvalues.csv", &csv)?])
}

/// Hadamard-test time series.
pub fn series(config: &Path, common: &Common) -> Result<Vec<PathBuf>, CliError> {
    let (cfg, base): (SeriesConfig, _) = load(config)?;
    let h = cfg.hamiltonian.resolve(&base)?;
    let seed = common.seed(cfg.seed);
    let measurement = match cfg.shots {
        Some(shots) => Measurement::Shots { shots, seed },
        None => Measurement::Exact,
    };
    let test = HadamardTest { measurement, evolution: cfg.evolution, realization: cfg.realization, noise: cfg.noise };
    let s = run_hadamard_series(&h, cfg.t_max, cfg.dt, &test)?;
    Ok(vec![common.write("series.csv", &s.to_csv())?, common.write_json("series.json", &s.meta)?])
}

#[derive(Serialize)]
struct StochasticSummary<'a> {
    meta: &'a tracespec::protocol::SeriesMeta,
    norm_drift: Option<f64>,
    warnings: &'a [String],
}

/// Averaged random-phase autocorrelation series.
pub fn stochastic(config: &Path, common: &Common) -> Result<Vec<PathBuf>, CliError> {
    let (cfg, base): (StochasticConfig, _) = load(config)?;
    let h = cfg.hamiltonian.resolve(&base)?;
    let basis = match &cfg.basis {
        BasisRef::Computational => StochasticBasis::Computational,
        BasisRef::EigenbasisOf(aux) => StochasticBasis::EigenbasisOf(aux.resolve(&base)?),
    };
    let seed = common.seed(cfg.seed);
    let run = run_stochastic_series(&h, cfg.samples, cfg.t_max, cfg.dt, cfg.propagator, &basis, seed)?;
    for w in &run.warnings {
        eprintln!("warning: {w}");
    }
    let summary = StochasticSummary { meta: &run.mean.meta, norm_drift: run.norm_drift, warnings: &run.warnings };
    Ok(vec![common.write("stochastic.csv", &run.mean.to_csv())?, common.write_json("stochastic.json", &summary)?])
}

/// Power spectrum and peaks of a series CSV.
pub fn spectrum(config: &Path, common: &Common) -> Result<Vec<PathBuf>, CliError> {
    let (cfg, base): (SpectrumConfig, _) = load(config)?;
    let input = base.join(&cfg.input);
    let text =
        fs::read_to_string(&input).map_err(|e| CliError::Config(format!("cannot read {}: {e}", input.display())))?;
    let mut s = TimeSeries::from_csv(&text).map_err(|e| CliError::Config(format!("{}: {e}", input.display())))?;
    if let Some(dt) = cfg.interpolate_dt {
        let grid: Vec<f64> =
            uniform_grid(s.times()[s.len() - 1] - s.start(), dt)?.into_iter().map(|t| t + s.start()).collect();
        s = interpolate_quadratic(&s, &grid)?;
    }
    let spec = dft(&s, DftOptions { window: cfg.window, normalize: cfg.normalize })?;
    let peaks = find_peaks(&spec, cfg.threshold)?;
    Ok(vec![common.write("spectrum.csv", &spec.to_csv())?, common.write("peaks.csv", &peaks.to_csv())?])
}

fn single_qubit_count(c: &Circuit) -> usize {
    c.gates().iter().filter(|g| !g.is_two_qubit()).count()
}

/// Gate counts of one controlled Trotter step per synthesis variant.
pub fn synth_count(config: &Path, common: &Common) -> Result<Vec<PathBuf>, CliError> {
    let (cfg, base): (SynthCountConfig, _) = load(config)?;
    let h = cfg.hamiltonian.resolve(&base)?;
    let n = h.num_qubits();
    let graph = cfg.graph.as_ref().map(|g| g.resolve(&base)).transpose()?;
    let seed = common.seed(cfg.seed);
    let mut csv = String::from("variant,cx,rzz,effective_cx,single_qubit,gates");
    if graph.is_some() {
        csv.push_str(",mapped_swaps,mapped_effective_cx");
    }
    csv.push('\n');
    for &variant in &cfg.variants {
        let (c, placement) = match &graph {
            Some(g) => {
                let layout = ProtocolLayout { system: n, purified: false };
                let placement = protocol_placement(g, layout)?;
                let from_pointer = g.distances_from(placement[n]);
                let rz = RzSite::Nearest(placement[..n].iter().map(|&p| from_pointer[p]).collect());
                (controlled_trotter_step(&h, cfg.dt, variant, n, &rz)?, Some(placement))
            }
            None => (controlled_trotter_step(&h, cfg.dt, variant, n, &RzSite::Highest)?, None),
        };
        write!(
            csv,
            "{},{},{},{},{},{}",
            variant.label(),
            c.count(GateKind::CX),
            c.count(GateKind::RZZ),
            c.effective_cx_count(),
            single_qubit_count(&c),
            c.len()
        )
        .expect("write to string");
        if let (Some(g), Some(p)) = (&graph, placement) {
            let r = route(&c, g, &p, seed)?;
            write!(csv, ",{},{}", r.swap_count, r.effective_cx_count()).expect("write to string");
        }
        csv.push('\n');
    }
    Ok(vec![common.write("synth_count.csv", &csv)?])
}

#[derive(Serialize)]
struct RouteSummary {
    swap_count: usize,
    effective_cx: usize,
    initial_layout: Vec<usize>,
    final_layout: Vec<usize>,
}

/// Routes a circuit file onto a coupling graph.
pub fn route_circuit(config: &Path, common: &Common) -> Result<Vec<PathBuf>, CliError> {
    let (cfg, base): (RouteConfig, _) = load(config)?;
    let path = base.join(&cfg.circuit);
    let text =
        fs::read_to_string(&path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let c: Circuit = text.parse().map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let g = cfg.graph.resolve(&base)?;
    let layout = cfg.layout.unwrap_or_else(|| (0..c.width()).collect());
    let r = route(&c, &g, &layout, common.seed(cfg.seed))?;
    let summary = RouteSummary {
        swap_count: r.swap_count,
        effective_cx: r.effective_cx_count(),
        initial_layout: r.initial_layout.clone(),
        final_layout: r.final_layout.clone(),
    };
    Ok(vec![common.write("routed.txt", &r.circuit.to_string())?, common.write_json("route.json", &summary)?])
}

/// Estimated protocol fidelity over a range of chain lengths.
pub fn fidelity(config: &Path, common: &Common) -> Result<Vec<PathBuf>, CliError> {
    let (cfg, base): (FidelityConfig, _) = load(config)?;
    if cfg.n_min == 0 || cfg.n_min > cfg.n_max {
        return Err(CliError::Config(format!("chain range {}..={} is empty", cfg.n_min, cfg.n_max)));
    }
    let g = cfg.graph.resolve(&base)?;
    let cal = cfg.calibration.resolve(&base, &g)?;
    let seed = common.seed(cfg.seed);
    let mut csv = String::from("n,gates,cx,rzz,swaps,effective_cx,fidelity\n");
    for n in cfg.n_min..=cfg.n_max {
        let h = build_heisenberg(n, cfg.j, cfg.b, cfg.boundary)?;
        let (_, e) = protocol_fidelity(&h, cfg.t, cfg.steps, cfg.variant, &g, &cal, seed)?;
        writeln!(csv, "{},{},{},{},{},{},{:?}", e.sites, e.gates, e.cx, e.rzz, e.swaps, e.effective_cx, e.fidelity)
            .expect("write to string");
    }
    Ok(vec![common.write("fidelity.csv", &csv)?])
}

/// Decay of the mixed register under relaxation.
pub fn mms_lifetime(config: &Path, common: &Common) -> Result<Vec<PathBuf>, CliError> {
    let (cfg, _): (LifetimeConfig, _) = load(config)?;
    let points = mms_lifetime_experiment(cfg.n, &cfg.t1, &cfg.idle_times.values()?)?;
    let mut csv = String::from("t,fidelity,p_zero\n");
    for p in points {
        writeln!(csv, "{:?},{:?},{:?}", p.t, p.fidelity, p.p_zero).expect("write to string");
    }
    Ok(vec![common.write("lifetime.csv", &csv)?])
}
