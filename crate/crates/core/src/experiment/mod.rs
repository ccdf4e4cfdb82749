//! Reproducible experiment runs: configuration, random ensembles, and CSV
//! output with a JSON manifest.
//!
//! Every run writes one CSV per measure into the output directory, with
//! `time` as the first column, followed by `manifest.json` listing the full
//! configuration and a SHA-256 hash of each file. Numeric output depends
//! only on the configuration and seed.

mod config;
mod ensemble;
mod output;

use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use crate::circulant::{
    commensurability_check, find_classical_cycle, ring_eigensystem, ring_evolution,
    ring_time_average, DEFAULT_MAX_DENOMINATOR, DEFAULT_RATIO_TOL,
};
use crate::dynamics::{
    classical_trajectory, evolve_fock_rk4_with, stroboscopic_quantum, ClassicalTrajectory,
    Rk4Options,
};
use crate::error::{Error, Result};
use crate::hamiltonian::{build_hamiltonian, SectorHamiltonian};
use crate::lattice::{check_lattice_size, norm, SpinConfig, MAX_STATE_SITES};
use crate::network::network_summary;
use crate::observables::{
    alive_cluster_counts, dead_cluster_counts, discretize, local_population, summarize,
    DiscretizedProfile,
};
use crate::quantum_info::{
    average_concurrence, bond_entropy, mutual_information_matrix, single_site_entropies,
};

pub use config::{ExperimentKind, Measure, RunConfig, CLASSICAL_WINDOW, QUANTUM_WINDOW};
pub use ensemble::{
    classical_ensemble, classical_pattern_series, classical_steps_for, configs_with_alive_count,
    ensemble_initial_states, equilibrium_average, quantum_ensemble, quantum_pattern_series,
    sample_random_fock, sample_rng, Engine, EnsembleOptions, EnsembleResult, PatternSeries,
    SampleResult,
};
pub use output::{fmt_f64, sha256_hex, FileRecord, OutputDir, Table};

use output::numbered;

/// What a finished run produced.
#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub kind: ExperimentKind,
    pub out: PathBuf,
    pub manifest: PathBuf,
    pub files: Vec<FileRecord>,
    pub wall_time_seconds: f64,
    /// Kind-specific scalars, also stored in the manifest.
    pub details: serde_json::Value,
    #[serde(skip)]
    pub ensembles: Vec<EnsembleResult>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    program: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    wall_time_seconds: f64,
    files: &'a [FileRecord],
    details: &'a serde_json::Value,
}

/// Runs one experiment and writes its files under `config.out`.
pub fn run(config: &RunConfig) -> Result<RunSummary> {
    config.validate()?;
    let start = Instant::now();
    let mut out = OutputDir::create(&config.out)?;
    let mut ensembles = Vec::new();
    let details = match config.kind {
        ExperimentKind::Evolve => run_evolve(config, &mut out)?,
        ExperimentKind::Classical => run_classical(config, &mut out)?,
        ExperimentKind::Strobe => run_strobe(config, &mut out)?,
        ExperimentKind::Ensemble => run_ensemble(config, &mut out, &mut ensembles)?,
        ExperimentKind::Circulant => run_circulant(config, &mut out)?,
    };
    let wall_time_seconds = start.elapsed().as_secs_f64();
    let manifest = out.write_manifest(&Manifest {
        program: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        config,
        wall_time_seconds,
        files: out.files(),
        details: &details,
    })?;
    log::info!("{} run finished in {wall_time_seconds:.2} s", config.kind);
    Ok(RunSummary {
        kind: config.kind,
        out: config.out.clone(),
        manifest,
        files: out.files().to_vec(),
        wall_time_seconds,
        details,
        ensembles,
    })
}

/// The explicit initial state, or a random Fock state from sample stream 0.
fn initial_state(config: &RunConfig) -> Result<SpinConfig> {
    if let Some(c) = config.initial {
        return Ok(c);
    }
    let len = config.lattice_len()?;
    match (config.density, config.seed) {
        (Some(rho0), Some(seed)) => sample_random_fock(len, rho0, &mut sample_rng(seed, 0)),
        _ => Err(Error::Config("set initial, or density and seed".into())),
    }
}

fn f(x: f64) -> String {
    fmt_f64(x)
}

fn check_measures(config: &RunConfig, allowed: &[Measure]) -> Result<()> {
    match config.measures.iter().find(|m| !allowed.contains(m)) {
        Some(m) => Err(Error::Config(format!(
            "measure {} is not available for {}",
            m.name(),
            config.kind
        ))),
        None => Ok(()),
    }
}

/// Per-snapshot CSV rows for a quantum run.
struct Recorder<'h> {
    h: &'h SectorHamiltonian,
    len: usize,
    bonds: Vec<usize>,
    distances: Vec<usize>,
    diagnostics: Table,
    populations: Option<Table>,
    discretized: Option<(Table, Table)>,
    diversity: Option<Table>,
    entropies: Option<Table>,
    bond_table: Option<Table>,
    mi: Option<(Table, Table)>,
    concurrence: Option<Table>,
}

impl<'h> Recorder<'h> {
    fn new(h: &'h SectorHamiltonian, config: &RunConfig) -> Result<Self> {
        let len = h.len();
        let bonds = if config.bonds.is_empty() {
            (1..len).collect()
        } else {
            config.bonds.clone()
        };
        if let Some(&b) = bonds.iter().find(|&&b| b == 0 || b >= len) {
            return Err(Error::Config(format!("bond {b} outside 1..={}", len - 1)));
        }
        if let Some(&d) = config.distances.iter().find(|&&d| d == 0 || d >= len) {
            return Err(Error::Config(format!(
                "distance {d} outside 1..={}",
                len - 1
            )));
        }
        let has = |m: Measure| config.measures.contains(&m);
        let sites = 1..=len;
        Ok(Recorder {
            h,
            len,
            diagnostics: Table::new(["time", "norm", "energy"])?,
            populations: has(Measure::Populations)
                .then(|| Table::new(numbered("time", "n_", sites.clone())))
                .transpose()?,
            discretized: if has(Measure::Clusters) {
                let mut header = numbered("time", "C_", sites.clone());
                header.extend(sites.clone().map(|l| format!("Cdead_{l}")));
                Some((
                    Table::new(numbered("time", "D_", sites.clone()))?,
                    Table::new(header)?,
                ))
            } else {
                None
            },
            diversity: has(Measure::Diversity)
                .then(|| Table::new(["time", "density", "diversity", "improved_diversity"]))
                .transpose()?,
            entropies: has(Measure::Entropies)
                .then(|| Table::new(numbered("time", "S_", sites.clone())))
                .transpose()?,
            bond_table: has(Measure::Bonds)
                .then(|| Table::new(numbered("time", "bond_", bonds.iter().copied())))
                .transpose()?,
            mi: if has(Measure::Mi) {
                Some((
                    Table::new(["time", "i", "j", "value"])?,
                    Table::new(["time", "density", "disparity", "clustering"])?,
                ))
            } else {
                None
            },
            concurrence: has(Measure::Concurrence)
                .then(|| {
                    Table::new(numbered(
                        "time",
                        "distance_",
                        config.distances.iter().copied(),
                    ))
                })
                .transpose()?,
            bonds,
            distances: config.distances.clone(),
        })
    }

    fn record(&mut self, t: f64, psi: &[num_complex::Complex64]) -> Result<()> {
        let ts = f(t);
        let with_time = |values: &mut dyn Iterator<Item = String>| {
            std::iter::once(ts.clone())
                .chain(values)
                .collect::<Vec<_>>()
        };
        self.diagnostics.row([
            ts.clone(),
            f(norm(psi)),
            f(self.h.expectation(&self.h.restrict(psi)?)?),
        ])?;

        let needs_profile =
            self.populations.is_some() || self.discretized.is_some() || self.diversity.is_some();
        if needs_profile {
            let n = local_population(psi)?;
            let d = discretize(&n);
            if let Some(t) = &mut self.populations {
                t.row(with_time(&mut n.values().iter().map(|&x| f(x))))?;
            }
            if let Some((dt, ct)) = &mut self.discretized {
                dt.row(with_time(&mut d.values().iter().map(|v| v.to_string())))?;
                let counts = alive_cluster_counts(&d)
                    .into_iter()
                    .chain(dead_cluster_counts(&d));
                ct.row(with_time(&mut counts.map(|c| c.to_string())))?;
            }
            if let Some(t) = &mut self.diversity {
                let s = summarize(&d);
                t.row([
                    ts.clone(),
                    f(s.density),
                    f(s.diversity),
                    f(s.improved_diversity),
                ])?;
            }
        }
        if let Some(t) = &mut self.entropies {
            t.row(with_time(
                &mut single_site_entropies(psi)?.into_iter().map(f),
            ))?;
        }
        if let Some(t) = &mut self.bond_table {
            let values = self
                .bonds
                .iter()
                .map(|&b| bond_entropy(psi, b).map(f))
                .collect::<Result<Vec<_>>>()?;
            t.row(with_time(&mut values.into_iter()))?;
        }
        if let Some((long, net)) = &mut self.mi {
            let mi = mutual_information_matrix(psi)?;
            for i in 1..=self.len {
                for j in i + 1..=self.len {
                    long.row([ts.clone(), i.to_string(), j.to_string(), f(mi.get(i, j))])?;
                }
            }
            let s = network_summary(&mi);
            net.row([ts.clone(), f(s.density), f(s.disparity), f(s.clustering)])?;
        }
        if let Some(t) = &mut self.concurrence {
            let values = self
                .distances
                .iter()
                .map(|&d| average_concurrence(psi, d).map(f))
                .collect::<Result<Vec<_>>>()?;
            t.row(with_time(&mut values.into_iter()))?;
        }
        Ok(())
    }

    fn finish(self, out: &mut OutputDir) -> Result<()> {
        out.write_table("diagnostics.csv", self.diagnostics)?;
        if let Some(t) = self.populations {
            out.write_table("populations.csv", t)?;
        }
        if let Some((d, c)) = self.discretized {
            out.write_table("discretized.csv", d)?;
            out.write_table("clusters.csv", c)?;
        }
        if let Some(t) = self.diversity {
            out.write_table("diversity.csv", t)?;
        }
        if let Some(t) = self.entropies {
            out.write_table("entropies.csv", t)?;
        }
        if let Some(t) = self.bond_table {
            out.write_table("bonds.csv", t)?;
        }
        if let Some((long, net)) = self.mi {
            out.write_table("mi.csv", long)?;
            out.write_table("network.csv", net)?;
        }
        if let Some(t) = self.concurrence {
            out.write_table("concurrence.csv", t)?;
        }
        Ok(())
    }
}

fn run_evolve(config: &RunConfig, out: &mut OutputDir) -> Result<serde_json::Value> {
    let initial = initial_state(config)?;
    check_lattice_size(initial.len(), MAX_STATE_SITES)?;
    let sector = SectorHamiltonian::for_config(&initial)?;
    let mut recorder = Recorder::new(&sector, config)?;
    let options = Rk4Options::new(config.t_max, config.dt, config.sample_every);
    let traj = evolve_fock_rk4_with(&initial, &options, |t, psi| recorder.record(t, psi))?;
    recorder.finish(out)?;
    Ok(json!({
        "length": initial.len(),
        "initial": initial.to_string(),
        "snapshots": traj.times.len(),
        "norm_drift": traj.norm_drift,
    }))
}

/// Config table plus the classical-capable measures, shared by `classical`
/// and `strobe`.
fn write_orbit(
    config: &RunConfig,
    out: &mut OutputDir,
    name: &str,
    traj: &ClassicalTrajectory,
) -> Result<()> {
    let len = traj.steps[0].len();
    let sites = 1..=len;
    let mut header = vec!["time".to_string(), "step".into(), "config".into()];
    header.extend(sites.clone().map(|i| format!("n_{i}")));
    let mut table = Table::new(header)?;
    let has = |m: Measure| config.measures.contains(&m);
    let mut clusters = if has(Measure::Clusters) {
        let mut h = vec!["time".to_string(), "step".into()];
        h.extend(sites.clone().map(|l| format!("C_{l}")));
        h.extend(sites.clone().map(|l| format!("Cdead_{l}")));
        Some(Table::new(h)?)
    } else {
        None
    };
    let mut diversity = has(Measure::Diversity)
        .then(|| Table::new(["time", "step", "density", "diversity", "improved_diversity"]))
        .transpose()?;

    for (k, (t, c)) in traj.times().into_iter().zip(&traj.steps).enumerate() {
        let lead = [f(t), k.to_string()];
        let bits = c.to_bits();
        table.row(
            lead.iter()
                .cloned()
                .chain([c.to_string()])
                .chain(bits.iter().map(|b| b.to_string())),
        )?;
        let d = DiscretizedProfile::from(c);
        if let Some(tab) = &mut clusters {
            let counts = alive_cluster_counts(&d)
                .into_iter()
                .chain(dead_cluster_counts(&d));
            tab.row(lead.iter().cloned().chain(counts.map(|n| n.to_string())))?;
        }
        if let Some(tab) = &mut diversity {
            let s = summarize(&d);
            tab.row(lead.iter().cloned().chain([
                f(s.density),
                f(s.diversity),
                f(s.improved_diversity),
            ]))?;
        }
    }
    out.write_table(name, table)?;
    if let Some(t) = clusters {
        out.write_table("clusters.csv", t)?;
    }
    if let Some(t) = diversity {
        out.write_table("diversity.csv", t)?;
    }
    Ok(())
}

const ORBIT_MEASURES: [Measure; 3] = [Measure::Populations, Measure::Clusters, Measure::Diversity];

fn run_classical(config: &RunConfig, out: &mut OutputDir) -> Result<serde_json::Value> {
    check_measures(config, &ORBIT_MEASURES)?;
    let initial = initial_state(config)?;
    let traj = classical_trajectory(&initial, config.steps);
    write_orbit(config, out, "classical.csv", &traj)?;
    Ok(json!({
        "length": initial.len(),
        "initial": initial.to_string(),
        "steps": config.steps,
        "period": traj.period(),
    }))
}

fn run_strobe(config: &RunConfig, out: &mut OutputDir) -> Result<serde_json::Value> {
    check_measures(config, &ORBIT_MEASURES)?;
    let initial = initial_state(config)?;
    check_lattice_size(initial.len(), MAX_STATE_SITES)?;
    let h = build_hamiltonian(initial.len())?;
    let traj = stroboscopic_quantum(&h, &initial, config.steps)?;
    let matches = traj.steps == classical_trajectory(&initial, config.steps).steps;
    write_orbit(config, out, "strobe.csv", &traj)?;
    Ok(json!({
        "length": initial.len(),
        "initial": initial.to_string(),
        "steps": config.steps,
        "matches_classical": matches,
    }))
}

fn run_ensemble(
    config: &RunConfig,
    out: &mut OutputDir,
    results: &mut Vec<EnsembleResult>,
) -> Result<serde_json::Value> {
    let len = config.lattice_len()?;
    let rho0 = config
        .density
        .ok_or_else(|| Error::Config("ensemble needs density".into()))?;
    let seed = config
        .seed
        .ok_or_else(|| Error::Config("ensemble needs seed".into()))?;
    let options = EnsembleOptions {
        samples: config.samples,
        seed,
        rk4: Rk4Options::new(config.t_max, config.dt, config.sample_every),
        quantum_window: config.window.unwrap_or(QUANTUM_WINDOW),
        classical_window: config.classical_window.unwrap_or(CLASSICAL_WINDOW),
    };
    let quantum = quantum_ensemble(len, rho0, &options)?;
    let initial: Vec<SpinConfig> = quantum.samples.iter().map(|s| s.initial).collect();
    let classical = classical_ensemble(&initial, rho0, options.classical_window)?;

    let mut samples = Table::new([
        "engine",
        "sample",
        "initial",
        "density",
        "diversity",
        "improved_diversity",
    ])?;
    let mut summary = Table::new([
        "engine",
        "rho0",
        "window_start",
        "window_end",
        "samples",
        "density",
        "density_stderr",
        "diversity",
        "diversity_stderr",
        "improved_diversity",
        "improved_diversity_stderr",
    ])?;
    for r in [&quantum, &classical] {
        for s in &r.samples {
            let e = &s.equilibrium;
            samples.row([
                r.engine.name().to_string(),
                s.index.to_string(),
                s.initial.to_string(),
                f(e.density),
                f(e.diversity),
                f(e.improved_diversity),
            ])?;
        }
        summary.row([
            r.engine.name().to_string(),
            f(r.rho0),
            f(r.window.0),
            f(r.window.1),
            r.samples.len().to_string(),
            f(r.mean.density),
            f(r.stderr.density),
            f(r.mean.diversity),
            f(r.stderr.diversity),
            f(r.mean.improved_diversity),
            f(r.stderr.improved_diversity),
        ])?;
    }
    out.write_table("ensemble_samples.csv", samples)?;
    out.write_table("ensemble_summary.csv", summary)?;

    let mut q_series = Table::new(["time", "density", "diversity", "improved_diversity"])?;
    for (t, p) in quantum
        .mean_series
        .times
        .iter()
        .zip(&quantum.mean_series.values)
    {
        q_series.row([f(*t), f(p.density), f(p.diversity), f(p.improved_diversity)])?;
    }
    out.write_table("quantum_series.csv", q_series)?;
    let mut c_series = Table::new(["time", "step", "density", "diversity", "improved_diversity"])?;
    for (k, (t, p)) in classical
        .mean_series
        .times
        .iter()
        .zip(&classical.mean_series.values)
        .enumerate()
    {
        c_series.row([
            f(*t),
            k.to_string(),
            f(p.density),
            f(p.diversity),
            f(p.improved_diversity),
        ])?;
    }
    out.write_table("classical_series.csv", c_series)?;

    let details = json!({
        "length": len,
        "rho0": rho0,
        "samples": config.samples,
        "quantum": { "window": quantum.window, "mean": quantum.mean, "stderr": quantum.stderr },
        "classical": { "window": classical.window, "mean": classical.mean, "stderr": classical.stderr },
    });
    results.push(quantum);
    results.push(classical);
    Ok(details)
}

fn run_circulant(config: &RunConfig, out: &mut OutputDir) -> Result<serde_json::Value> {
    let (n, cycle) = match (config.period, config.initial) {
        (Some(n), _) => (n, None),
        (None, Some(c)) => {
            let cycle = find_classical_cycle(&c, config.steps).ok_or_else(|| {
                Error::Config(format!(
                    "no cycle within {} steps; raise steps",
                    config.steps
                ))
            })?;
            (cycle.period, Some(cycle))
        }
        (None, None) => return Err(Error::Config("circulant needs period or initial".into())),
    };
    let model = ring_eigensystem(n, config.hopping)?;
    let report = commensurability_check(n, DEFAULT_RATIO_TOL, DEFAULT_MAX_DENOMINATOR)?;

    if let Some(cycle) = &cycle {
        let mut t = Table::new(["index", "step", "config"])?;
        for (k, c) in cycle.configs.iter().enumerate() {
            t.row([k.to_string(), (cycle.offset + k).to_string(), c.to_string()])?;
        }
        out.write_table("cycle.csv", t)?;
    }
    let mut eig = Table::new(["m", "energy"])?;
    for (m, e) in model.eigenvalues.iter().enumerate() {
        eig.row([m.to_string(), f(*e)])?;
    }
    out.write_table("eigenvalues.csv", eig)?;

    let mut ratios = Table::new([
        "gap_a", "gap_b", "value_a", "value_b", "ratio", "p", "q", "rational",
    ])?;
    for r in &report.ratios {
        let (p, q) = r.rational.map_or((String::new(), String::new()), |(p, q)| {
            (p.to_string(), q.to_string())
        });
        ratios.row([
            r.numerator_gap.to_string(),
            r.denominator_gap.to_string(),
            f(report.gaps[r.numerator_gap]),
            f(report.gaps[r.denominator_gap]),
            f(r.ratio),
            p,
            q,
            r.rational.is_some().to_string(),
        ])?;
    }
    out.write_table("gap_ratios.csv", ratios)?;

    let mut evolution = Table::new(numbered("time", "p_", 0..n))?;
    let n_samples = crate::dynamics::steps_for(config.t_max, config.dt) / config.sample_every;
    for k in 0..=n_samples {
        let t = (k * config.sample_every) as f64 * config.dt;
        let probs = ring_evolution(&model, 0, t)?;
        evolution.row(std::iter::once(f(t)).chain(probs.into_iter().map(f)))?;
    }
    out.write_table("ring_evolution.csv", evolution)?;
    let mut average = Table::new(["k", "probability"])?;
    for (k, p) in ring_time_average(&model, 0, 1e-9)?.into_iter().enumerate() {
        average.row([k.to_string(), f(p)])?;
    }
    out.write_table("ring_average.csv", average)?;

    Ok(json!({
        "period": n,
        "hopping": config.hopping,
        "cycle_offset": cycle.as_ref().map(|c| c.offset),
        "max_residual": model.max_residual()?,
        "gaps": report.gaps,
        "commensurate": report.commensurate,
    }))
}
