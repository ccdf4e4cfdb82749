use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{classical_trajectory, evolve_fock_rk4_with, Rk4Options, STEP_DURATION};
use crate::error::{Error, Result};
use crate::lattice::{check_lattice_size, SpinConfig, MAX_STATE_SITES};
use crate::observables::{
    discretize, local_population, summarize, DiscretizedProfile, PatternSummary,
};

/// Slack for deciding whether a sample time lies inside a window.
const WINDOW_SLACK: f64 = 1e-9;

/// Fock state with exactly `round(rho0 * len)` alive sites, placed uniformly.
pub fn sample_random_fock<R: Rng + ?Sized>(
    len: usize,
    rho0: f64,
    rng: &mut R,
) -> Result<SpinConfig> {
    if !(0.0..=1.0).contains(&rho0) {
        return Err(Error::InvalidParameter(format!(
            "density {rho0} outside [0, 1]"
        )));
    }
    let mut bits = vec![0u8; len];
    let alive = (rho0 * len as f64).round() as usize;
    for site in index::sample(rng, len, alive) {
        bits[site] = 1;
    }
    SpinConfig::from_bits(&bits)
}

/// Independent stream for sample `index` under `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Mean of `values[k]` over the samples with `times[k]` in `[a, b]`.
pub fn equilibrium_average(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<f64> {
    if times.len() != values.len() {
        return Err(Error::DimensionMismatch {
            expected: times.len(),
            found: values.len(),
        });
    }
    let (a, b) = window;
    let (sum, count) = times
        .iter()
        .zip(values)
        .filter(|(&t, _)| t >= a - WINDOW_SLACK && t <= b + WINDOW_SLACK)
        .fold((0.0, 0usize), |(s, n), (_, &v)| (s + v, n + 1));
    if count == 0 {
        return Err(Error::EmptyWindow(a, b));
    }
    Ok(sum / count as f64)
}

/// Time series of pattern scalars.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct PatternSeries {
    pub times: Vec<f64>,
    pub values: Vec<PatternSummary>,
}

impl PatternSeries {
    fn column(&self, f: impl Fn(&PatternSummary) -> f64) -> Vec<f64> {
        self.values.iter().map(f).collect()
    }

    pub fn average(&self, window: (f64, f64)) -> Result<PatternSummary> {
        Ok(PatternSummary {
            density: equilibrium_average(&self.times, &self.column(|p| p.density), window)?,
            diversity: equilibrium_average(&self.times, &self.column(|p| p.diversity), window)?,
            improved_diversity: equilibrium_average(
                &self.times,
                &self.column(|p| p.improved_diversity),
                window,
            )?,
        })
    }
}

/// Discretized pattern scalars along a quantum trajectory.
pub fn quantum_pattern_series(initial: &SpinConfig, options: &Rk4Options) -> Result<PatternSeries> {
    let traj = evolve_fock_rk4_with(initial, options, |_, amps| {
        Ok(summarize(&discretize(&local_population(amps)?)))
    })?;
    Ok(PatternSeries {
        times: traj.times,
        values: traj.snapshots,
    })
}

/// Pattern scalars along the classical orbit, at `t = k pi / 2`.
pub fn classical_pattern_series(initial: &SpinConfig, n_steps: usize) -> PatternSeries {
    let traj = classical_trajectory(initial, n_steps);
    PatternSeries {
        times: traj.times(),
        values: traj
            .steps
            .iter()
            .map(|c| summarize(&DiscretizedProfile::from(c)))
            .collect(),
    }
}

/// Classical steps needed to reach time `t`.
pub fn classical_steps_for(t: f64) -> usize {
    (t / STEP_DURATION + WINDOW_SLACK).floor() as usize
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Quantum,
    Classical,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Quantum => "quantum",
            Engine::Classical => "classical",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleResult {
    pub index: usize,
    pub initial: SpinConfig,
    pub equilibrium: PatternSummary,
}

/// Equilibrium scalars of an ensemble of random Fock states.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnsembleResult {
    pub engine: Engine,
    pub len: usize,
    pub rho0: f64,
    pub window: (f64, f64),
    pub samples: Vec<SampleResult>,
    pub mean: PatternSummary,
    pub stderr: PatternSummary,
    /// Sample-averaged time series.
    #[serde(skip)]
    pub mean_series: PatternSeries,
}

impl EnsembleResult {
    fn collect(
        engine: Engine,
        len: usize,
        rho0: f64,
        window: (f64, f64),
        runs: Vec<(SampleResult, PatternSeries)>,
    ) -> Result<Self> {
        if runs.is_empty() {
            return Err(Error::InvalidParameter(
                "ensemble needs at least one sample".into(),
            ));
        }
        let n = runs.len() as f64;
        let stat = |f: &dyn Fn(&PatternSummary) -> f64| {
            let xs: Vec<f64> = runs.iter().map(|(s, _)| f(&s.equilibrium)).collect();
            let mean = xs.iter().sum::<f64>() / n;
            let err = if xs.len() > 1 {
                let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
                (var / n).sqrt()
            } else {
                0.0
            };
            (mean, err)
        };
        let (d, de) = stat(&|p| p.density);
        let (v, ve) = stat(&|p| p.diversity);
        let (w, we) = stat(&|p| p.improved_diversity);

        let first = &runs[0].1;
        let mut mean_series = PatternSeries {
            times: first.times.clone(),
            values: vec![PatternSummary::default(); first.times.len()],
        };
        for (_, series) in &runs {
            for (acc, p) in mean_series.values.iter_mut().zip(&series.values) {
                acc.density += p.density / n;
                acc.diversity += p.diversity / n;
                acc.improved_diversity += p.improved_diversity / n;
            }
        }
        Ok(EnsembleResult {
            engine,
            len,
            rho0,
            window,
            samples: runs.into_iter().map(|(s, _)| s).collect(),
            mean: PatternSummary {
                density: d,
                diversity: v,
                improved_diversity: w,
            },
            stderr: PatternSummary {
                density: de,
                diversity: ve,
                improved_diversity: we,
            },
            mean_series,
        })
    }
}

/// Parameters shared by the quantum and classical halves of an ensemble.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnsembleOptions {
    pub samples: usize,
    pub seed: u64,
    pub rk4: Rk4Options,
    pub quantum_window: (f64, f64),
    pub classical_window: (f64, f64),
}

/// The random initial states of an ensemble, one stream per sample.
pub fn ensemble_initial_states(
    len: usize,
    rho0: f64,
    samples: usize,
    seed: u64,
) -> Result<Vec<SpinConfig>> {
    (0..samples)
        .map(|k| sample_random_fock(len, rho0, &mut sample_rng(seed, k as u64)))
        .collect()
}

/// Quantum equilibrium averages over random Fock states. Samples run in
/// parallel; results do not depend on the number of workers.
pub fn quantum_ensemble(
    len: usize,
    rho0: f64,
    options: &EnsembleOptions,
) -> Result<EnsembleResult> {
    check_lattice_size(len, MAX_STATE_SITES)?;
    check_window(options.quantum_window, options.rk4.t_max)?;
    let initial = ensemble_initial_states(len, rho0, options.samples, options.seed)?;
    let runs = initial
        .par_iter()
        .enumerate()
        .map(|(index, config)| {
            let series = quantum_pattern_series(config, &options.rk4)?;
            let equilibrium = series.average(options.quantum_window)?;
            Ok((
                SampleResult {
                    index,
                    initial: *config,
                    equilibrium,
                },
                series,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    EnsembleResult::collect(Engine::Quantum, len, rho0, options.quantum_window, runs)
}

/// Classical equilibrium averages over the given initial states.
pub fn classical_ensemble(
    initial: &[SpinConfig],
    rho0: f64,
    window: (f64, f64),
) -> Result<EnsembleResult> {
    let len = initial.first().map_or(0, |c| c.len());
    let steps = classical_steps_for(window.1);
    let runs = initial
        .par_iter()
        .enumerate()
        .map(|(index, config)| {
            let series = classical_pattern_series(config, steps);
            let equilibrium = series.average(window)?;
            Ok((
                SampleResult {
                    index,
                    initial: *config,
                    equilibrium,
                },
                series,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    EnsembleResult::collect(Engine::Classical, len, rho0, window, runs)
}

/// Every configuration of `len` sites with exactly `alive` alive sites.
pub fn configs_with_alive_count(len: usize, alive: usize) -> Result<Vec<SpinConfig>> {
    check_lattice_size(len, MAX_STATE_SITES)?;
    (0..1u64 << len)
        .filter(|b| b.count_ones() as usize == alive)
        .map(|b| SpinConfig::from_index(len, b))
        .collect()
}

fn check_window(window: (f64, f64), t_max: f64) -> Result<()> {
    let (a, b) = window;
    if a < 0.0 || b > t_max + WINDOW_SLACK || a > b {
        return Err(Error::InvalidParameter(format!(
            "window [{a}, {b}] is not inside [0, {t_max}]"
        )));
    }
    Ok(())
}
