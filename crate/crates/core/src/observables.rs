//! Local observables: site populations, their discretization at 1/2, the
//! alive fraction, cluster-size counts, and diversity.
//!
//! The cluster functions treat the virtual sites 0 and L+1 as dead. Alive
//! runs touching the chain ends are therefore counted; dead runs touching
//! the ends are not, since they lack an alive delimiter.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::lattice::SpinConfig;

/// `n_i = <n_i>` for every site, site 1 first.
#[derive(Clone, Debug, PartialEq)]
pub struct PopulationProfile(Vec<f64>);

impl PopulationProfile {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !(-1e-9..=1.0 + 1e-9).contains(*v)) {
            return Err(Error::InvalidParameter(format!(
                "population {v} outside [0, 1]"
            )));
        }
        Ok(PopulationProfile(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Per-site 0/1 pattern.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiscretizedProfile(Vec<u8>);

impl DiscretizedProfile {
    pub fn new(values: Vec<u8>) -> Result<Self> {
        if values.iter().any(|&v| v > 1) {
            return Err(Error::InvalidParameter(
                "discretized values must be 0 or 1".into(),
            ));
        }
        Ok(DiscretizedProfile(values))
    }

    pub fn values(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<&SpinConfig> for DiscretizedProfile {
    fn from(c: &SpinConfig) -> Self {
        DiscretizedProfile(c.to_bits())
    }
}

impl std::str::FromStr for DiscretizedProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::InvalidBitstring(s.to_string())),
            })
            .collect::<Result<Vec<u8>>>()
            .map(DiscretizedProfile)
    }
}

/// Expectation of `n_i` on every site. Amplitudes are weighted by the
/// squared norm so that small integrator drift does not leak into the
/// observable.
pub fn local_population(amplitudes: &[C64]) -> Result<PopulationProfile> {
    let dim = amplitudes.len();
    if !dim.is_power_of_two() || dim < 2 {
        return Err(Error::InvalidParameter(format!(
            "dimension {dim} is not a power of two"
        )));
    }
    let len = dim.trailing_zeros() as usize;
    let mut acc = vec![0.0; len];
    let mut total = 0.0;
    for (idx, a) in amplitudes.iter().enumerate() {
        let w = a.norm_sqr();
        if w == 0.0 {
            continue;
        }
        total += w;
        let mut bits = idx;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            acc[b] += w;
            bits &= bits - 1;
        }
    }
    if total == 0.0 {
        return Err(Error::NotNormalized(0.0));
    }
    PopulationProfile::new(acc.into_iter().map(|v| (v / total).min(1.0)).collect())
}

/// `D_i = 1` iff `n_i > 0.5`.
pub fn discretize(profile: &PopulationProfile) -> DiscretizedProfile {
    DiscretizedProfile(profile.0.iter().map(|&n| u8::from(n > 0.5)).collect())
}

/// Fraction of alive sites.
pub fn density(d: &DiscretizedProfile) -> f64 {
    if d.0.is_empty() {
        return 0.0;
    }
    d.0.iter().map(|&v| v as f64).sum::<f64>() / d.0.len() as f64
}

/// Maximal runs of `value`: (start, length) pairs, 0-based start.
fn runs(d: &[u8], value: u8) -> impl Iterator<Item = (usize, usize)> + '_ {
    let mut i = 0;
    std::iter::from_fn(move || {
        while i < d.len() && d[i] != value {
            i += 1;
        }
        if i == d.len() {
            return None;
        }
        let start = i;
        while i < d.len() && d[i] == value {
            i += 1;
        }
        Some((start, i - start))
    })
}

fn check_size(d: &DiscretizedProfile, size: usize) -> Result<()> {
    if size == 0 || size > d.len() {
        return Err(Error::InvalidParameter(format!(
            "cluster size {size} outside 1..={}",
            d.len()
        )));
    }
    Ok(())
}

/// Histogram of alive run lengths: entry `l - 1` holds `C(l)`.
pub fn alive_cluster_counts(d: &DiscretizedProfile) -> Vec<usize> {
    let mut counts = vec![0; d.len()];
    for (_, len) in runs(&d.0, 1) {
        counts[len - 1] += 1;
    }
    counts
}

/// Histogram of dead run lengths bounded by alive sites on both sides.
pub fn dead_cluster_counts(d: &DiscretizedProfile) -> Vec<usize> {
    let mut counts = vec![0; d.len()];
    for (start, len) in runs(&d.0, 0) {
        if start > 0 && start + len < d.len() {
            counts[len - 1] += 1;
        }
    }
    counts
}

/// `C(l)`: number of maximal alive runs of length exactly `size`.
pub fn alive_cluster_function(d: &DiscretizedProfile, size: usize) -> Result<usize> {
    check_size(d, size)?;
    Ok(alive_cluster_counts(d)[size - 1])
}

/// `C-bar(l)`: number of maximal dead runs of length `size` with alive
/// sites on both sides.
pub fn dead_cluster_function(d: &DiscretizedProfile, size: usize) -> Result<usize> {
    check_size(d, size)?;
    Ok(dead_cluster_counts(d)[size - 1])
}

/// Number of distinct alive-cluster sizes present.
pub fn diversity(d: &DiscretizedProfile) -> usize {
    alive_cluster_counts(d).iter().filter(|&&c| c > 0).count()
}

/// Mean of the distinct alive and distinct bounded-dead cluster sizes.
pub fn improved_diversity(d: &DiscretizedProfile) -> f64 {
    let alive = diversity(d);
    let dead = dead_cluster_counts(d).iter().filter(|&&c| c > 0).count();
    0.5 * (alive + dead) as f64
}

/// Scalars tracked per snapshot in ensemble runs.
#[derive(Clone, Copy, Debug, Default, PartialEq, serde::Serialize)]
pub struct PatternSummary {
    pub density: f64,
    pub diversity: f64,
    pub improved_diversity: f64,
}

pub fn summarize(d: &DiscretizedProfile) -> PatternSummary {
    PatternSummary {
        density: density(d),
        diversity: diversity(d) as f64,
        improved_diversity: improved_diversity(d),
    }
}
