use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::dynamics::DEFAULT_DT;
use crate::error::{Error, Result};
use crate::lattice::SpinConfig;

/// Quantum equilibrium window.
pub const QUANTUM_WINDOW: (f64, f64) = (25.0, 30.0);
/// Classical equilibrium window, in units of time (`t = k pi / 2`).
pub const CLASSICAL_WINDOW: (f64, f64) = (83.0, 100.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Evolve,
    Classical,
    Strobe,
    Ensemble,
    Circulant,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Evolve => "evolve",
            ExperimentKind::Classical => "classical",
            ExperimentKind::Strobe => "strobe",
            ExperimentKind::Ensemble => "ensemble",
            ExperimentKind::Circulant => "circulant",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "evolve" => ExperimentKind::Evolve,
            "classical" => ExperimentKind::Classical,
            "strobe" => ExperimentKind::Strobe,
            "ensemble" => ExperimentKind::Ensemble,
            "circulant" => ExperimentKind::Circulant,
            _ => return Err(Error::Config(format!("unknown experiment {s:?}"))),
        })
    }
}

/// Quantities written per snapshot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    /// `n_i` per site.
    Populations,
    /// Discretized profile, alive and dead cluster counts.
    Clusters,
    /// Density, diversity, improved diversity.
    Diversity,
    /// Single-site entropies.
    Entropies,
    /// Bond entropies.
    Bonds,
    /// Long-form mutual-information matrix plus network statistics.
    Mi,
    /// Average concurrence at the configured distances.
    Concurrence,
}

impl Measure {
    pub const ALL: [Measure; 7] = [
        Measure::Populations,
        Measure::Clusters,
        Measure::Diversity,
        Measure::Entropies,
        Measure::Bonds,
        Measure::Mi,
        Measure::Concurrence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Populations => "populations",
            Measure::Clusters => "clusters",
            Measure::Diversity => "diversity",
            Measure::Entropies => "entropies",
            Measure::Bonds => "bonds",
            Measure::Mi => "mi",
            Measure::Concurrence => "concurrence",
        }
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .or(match s {
                "network" | "mi-network" => Some(Measure::Mi),
                "entropy" => Some(Measure::Entropies),
                _ => None,
            })
            .ok_or_else(|| Error::Config(format!("unknown measure {s:?}")))
    }
}

/// Everything needed to reproduce one run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub kind: ExperimentKind,
    pub length: Option<usize>,
    pub initial: Option<SpinConfig>,
    /// Initial alive fraction for random Fock states.
    pub density: Option<f64>,
    pub t_max: f64,
    pub dt: f64,
    /// Integrator steps between snapshots.
    pub sample_every: usize,
    /// Classical or stroboscopic steps; orbit search depth for `circulant`.
    pub steps: usize,
    pub samples: usize,
    pub seed: Option<u64>,
    pub measures: Vec<Measure>,
    /// Bonds for the bond-entropy measure; all bonds when empty.
    pub bonds: Vec<usize>,
    /// Distances for the concurrence measure.
    pub distances: Vec<usize>,
    /// Quantum averaging window for ensembles.
    pub window: Option<(f64, f64)>,
    pub classical_window: Option<(f64, f64)>,
    /// Ring length for `circulant`; taken from the orbit of `initial` if unset.
    pub period: Option<usize>,
    pub hopping: f64,
    pub out: PathBuf,
}

impl RunConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        RunConfig {
            kind,
            length: None,
            initial: None,
            density: None,
            t_max: 30.0,
            dt: DEFAULT_DT,
            sample_every: 10,
            steps: 20,
            samples: 32,
            seed: None,
            measures: vec![Measure::Populations],
            bonds: Vec::new(),
            distances: vec![1, 2],
            window: None,
            classical_window: None,
            period: None,
            hopping: 1.0,
            out: PathBuf::from("out"),
        }
    }

    /// Reads `key = value` lines; `#` starts a comment.
    pub fn from_file(kind: ExperimentKind, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut config = RunConfig::new(kind);
        config.apply_text(&text)?;
        Ok(config)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value", lineno + 1))
            })?;
            self.set(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    /// Sets one option by its flag name (without the leading dashes).
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.replace('-', "_");
        match key.as_str() {
            "experiment" | "kind" => {
                let kind: ExperimentKind = value.parse()?;
                if kind != self.kind {
                    return Err(Error::Config(format!(
                        "file is for {kind}, not {}",
                        self.kind
                    )));
                }
            }
            "length" | "l" => self.length = Some(parse(&key, value)?),
            "initial" => self.initial = Some(value.parse()?),
            "density" | "rho0" => self.density = Some(parse(&key, value)?),
            "tmax" | "t_max" => self.t_max = parse(&key, value)?,
            "dt" => self.dt = parse(&key, value)?,
            "sample_every" => self.sample_every = parse(&key, value)?,
            "steps" => self.steps = parse(&key, value)?,
            "samples" => self.samples = parse(&key, value)?,
            "seed" => self.seed = Some(parse(&key, value)?),
            "measures" => {
                self.measures = list(value)?;
                self.measures.sort();
                self.measures.dedup();
            }
            "bonds" => self.bonds = list(value)?,
            "distances" => self.distances = list(value)?,
            "window" => self.window = Some(window(value)?),
            "classical_window" => self.classical_window = Some(window(value)?),
            "period" => self.period = Some(parse(&key, value)?),
            "hopping" | "j" => self.hopping = parse(&key, value)?,
            "out" => self.out = PathBuf::from(value),
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Checks the invariants that do not depend on the experiment kind.
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.t_max >= 0.0 && self.t_max.is_finite()) {
            return Err(Error::Config(format!(
                "tmax must be nonnegative, got {}",
                self.t_max
            )));
        }
        if self.sample_every == 0 {
            return Err(Error::Config("sample_every must be at least 1".into()));
        }
        if let Some(rho) = self.density {
            if !(0.0..=1.0).contains(&rho) {
                return Err(Error::Config(format!(
                    "density must lie in [0, 1], got {rho}"
                )));
            }
            if self.initial.is_none() && self.seed.is_none() {
                return Err(Error::Config("random initial states need a seed".into()));
            }
        }
        if let (Some(l), Some(c)) = (self.length, self.initial) {
            if c.len() != l {
                return Err(Error::BitstringLength {
                    expected: l,
                    found: c.len(),
                });
            }
        }
        for (a, b) in self.window.iter().chain(&self.classical_window) {
            if a > b || a.is_nan() || b.is_nan() {
                return Err(Error::Config(format!("window [{a}, {b}] is empty")));
            }
        }
        Ok(())
    }

    /// Lattice size from `length` or the initial bitstring.
    pub fn lattice_len(&self) -> Result<usize> {
        self.length
            .or(self.initial.map(|c| c.len()))
            .ok_or_else(|| Error::Config("set length or initial".into()))
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value
        .parse()
        .map_err(|e| Error::Config(format!("{key}: cannot parse {value:?}: {e}")))
}

fn list<T: FromStr>(value: &str) -> Result<Vec<T>>
where
    T::Err: fmt::Display,
{
    value
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| parse("list item", s))
        .collect()
}

fn window(value: &str) -> Result<(f64, f64)> {
    match list::<f64>(value)?[..] {
        [a, b] => Ok((a, b)),
        _ => Err(Error::Config(format!(
            "window needs two numbers, got {value:?}"
        ))),
    }
}
