//! Ring model for classically recurrent configurations.
//!
//! A classical cycle `psi_0 -> psi_1 -> ... -> psi_{n-1} -> psi_0` is promoted
//! to a tight-binding ring with hopping `J` between consecutive
//! configurations. The Hamiltonian is circulant, so its eigenvectors are
//! discrete Fourier modes with energies `2 J cos(2 pi m / n)`.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::dynamics::classical_f12_step;
use crate::error::{Error, Result};
use crate::lattice::SpinConfig;

pub const DEFAULT_HOPPING: f64 = 1.0;
pub const DEFAULT_RATIO_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_DENOMINATOR: u64 = 1_000_000;

/// First repeat of a classical orbit: configurations `offset..offset+period`
/// form the cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalCycle {
    pub offset: usize,
    pub period: usize,
    pub configs: Vec<SpinConfig>,
}

/// Iterates the F12 rule for up to `max_steps` steps, returning the first
/// revisited configuration's cycle.
pub fn find_classical_cycle(config: &SpinConfig, max_steps: usize) -> Option<ClassicalCycle> {
    let mut seen: HashMap<SpinConfig, usize> = HashMap::new();
    let mut orbit = vec![*config];
    seen.insert(*config, 0);
    let mut current = *config;
    for step in 1..=max_steps {
        current = classical_f12_step(&current);
        if let Some(&first) = seen.get(&current) {
            return Some(ClassicalCycle {
                offset: first,
                period: step - first,
                configs: orbit[first..].to_vec(),
            });
        }
        seen.insert(current, step);
        orbit.push(current);
    }
    None
}

#[derive(Clone, Debug)]
pub struct RingModel {
    pub n: usize,
    pub hopping: f64,
    /// `E_m = 2 J cos(2 pi m / n)`.
    pub eigenvalues: Vec<f64>,
    /// Column `m` has components `exp(-2 pi i k m / n) / sqrt(n)`.
    pub eigenvectors: DMatrix<C64>,
}

/// Ring Hamiltonian `J sum_k |k><k+1| + h.c.` with `|n> = |0>`.
pub fn ring_hamiltonian(n: usize, hopping: f64) -> Result<DMatrix<f64>> {
    check_period(n)?;
    let mut h = DMatrix::zeros(n, n);
    for k in 0..n {
        h[(k, (k + 1) % n)] += hopping;
        h[((k + 1) % n, k)] += hopping;
    }
    Ok(h)
}

fn check_period(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "ring period must be at least 2, got {n}"
        )));
    }
    Ok(())
}

pub fn ring_eigensystem(n: usize, hopping: f64) -> Result<RingModel> {
    check_period(n)?;
    let eigenvalues = (0..n)
        .map(|m| 2.0 * hopping * (2.0 * PI * m as f64 / n as f64).cos())
        .collect();
    let norm = (n as f64).sqrt();
    let eigenvectors = DMatrix::from_fn(n, n, |k, m| {
        // reduce k*m mod n first so the phase stays accurate for large n
        let phase = -2.0 * PI * ((k * m) % n) as f64 / n as f64;
        C64::from_polar(1.0 / norm, phase)
    });
    Ok(RingModel {
        n,
        hopping,
        eigenvalues,
        eigenvectors,
    })
}

impl RingModel {
    /// Largest `|H v_m - E_m v_m|` over all modes.
    pub fn max_residual(&self) -> Result<f64> {
        let h = ring_hamiltonian(self.n, self.hopping)?.map(|x| C64::new(x, 0.0));
        let mut worst = 0.0f64;
        for (m, &e) in self.eigenvalues.iter().enumerate() {
            let v = self.eigenvectors.column(m);
            let r = &h * v - v * C64::new(e, 0.0);
            worst = worst.max(r.norm());
        }
        Ok(worst)
    }
}

/// `|<psi_k| exp(-i H t) |psi_{k0}>|^2` for every `k`, from the spectral
/// decomposition.
pub fn ring_evolution(model: &RingModel, k0: usize, t: f64) -> Result<Vec<f64>> {
    let n = model.n;
    if k0 >= n {
        return Err(Error::InvalidParameter(format!(
            "start index {k0} outside 0..{n}"
        )));
    }
    let v = &model.eigenvectors;
    let weights = DVector::from_fn(n, |m, _| {
        v[(k0, m)].conj() * C64::from_polar(1.0, -model.eigenvalues[m] * t)
    });
    let amplitudes = v * weights;
    Ok(amplitudes.iter().map(|a| a.norm_sqr()).collect())
}

/// Infinite-time average of [`ring_evolution`] with degenerate levels
/// grouped, i.e. the diagonal ensemble over energy eigenspaces.
pub fn ring_time_average(model: &RingModel, k0: usize, tol: f64) -> Result<Vec<f64>> {
    let n = model.n;
    if k0 >= n {
        return Err(Error::InvalidParameter(format!(
            "start index {k0} outside 0..{n}"
        )));
    }
    let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
    for (m, &e) in model.eigenvalues.iter().enumerate() {
        match groups.iter_mut().find(|(g, _)| (g - e).abs() <= tol) {
            Some((_, members)) => members.push(m),
            None => groups.push((e, vec![m])),
        }
    }
    let v = &model.eigenvectors;
    Ok((0..n)
        .map(|k| {
            groups
                .iter()
                .map(|(_, members)| {
                    members
                        .iter()
                        .map(|&m| v[(k, m)] * v[(k0, m)].conj())
                        .sum::<C64>()
                        .norm_sqr()
                })
                .sum()
        })
        .collect())
}

/// A ratio between two energy gaps and its rational approximation, if any.
#[derive(Clone, Debug, PartialEq)]
pub struct GapRatio {
    pub numerator_gap: usize,
    pub denominator_gap: usize,
    pub ratio: f64,
    pub rational: Option<(i64, u64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommensurabilityReport {
    pub n: usize,
    pub energies: Vec<f64>,
    /// Distinct positive gaps `E_a - E_b`.
    pub gaps: Vec<f64>,
    pub ratios: Vec<GapRatio>,
    /// `flags[a][b]`: gap `a` over gap `b` is rational.
    pub flags: Vec<Vec<bool>>,
    pub commensurate: bool,
}

/// Best rational approximation by continued-fraction convergents. A
/// convergent `p/q` is accepted when `|x - p/q| * q^2 <= tol`, i.e. when the
/// expansion effectively terminates; `None` if `q` exceeds `max_denominator`
/// first.
pub fn rational_approximation(x: f64, tol: f64, max_denominator: u64) -> Option<(i64, u64)> {
    if !x.is_finite() {
        return None;
    }
    let (mut p_prev, mut p) = (1i128, x.floor() as i128);
    let (mut q_prev, mut q) = (0i128, 1i128);
    let mut rem = x - x.floor();
    loop {
        let approx = p as f64 / q as f64;
        let qf = q as f64;
        if (x - approx).abs() * qf * qf <= tol {
            return Some((p as i64, q as u64));
        }
        if rem <= 0.0 {
            return Some((p as i64, q as u64));
        }
        let inv = 1.0 / rem;
        let a = inv.floor();
        rem = inv - a;
        let a = a as i128;
        let (pn, qn) = (a * p + p_prev, a * q + q_prev);
        if qn > max_denominator as i128 {
            return None;
        }
        (p_prev, p, q_prev, q) = (p, pn, q, qn);
    }
}

/// Tests every pair of distinct nonzero ring gaps for a rational ratio.
pub fn commensurability_check(
    n: usize,
    tolerance: f64,
    max_denominator: u64,
) -> Result<CommensurabilityReport> {
    let model = ring_eigensystem(n, DEFAULT_HOPPING)?;
    let energies = model.eigenvalues.clone();
    let mut gaps: Vec<f64> = Vec::new();
    for &ea in &energies {
        for &eb in &energies {
            let g = ea - eb;
            if g > 1e-9 && !gaps.iter().any(|&x| (x - g).abs() <= 1e-9) {
                gaps.push(g);
            }
        }
    }
    gaps.sort_by(|a, b| a.total_cmp(b));
    let k = gaps.len();
    let mut flags = vec![vec![true; k]; k];
    let mut ratios = Vec::new();
    for a in 0..k {
        for b in 0..k {
            if a == b {
                continue;
            }
            let ratio = gaps[a] / gaps[b];
            let rational = rational_approximation(ratio, tolerance, max_denominator);
            flags[a][b] = rational.is_some();
            ratios.push(GapRatio {
                numerator_gap: a,
                denominator_gap: b,
                ratio,
                rational,
            });
        }
    }
    let commensurate = flags.iter().flatten().all(|&f| f);
    Ok(CommensurabilityReport {
        n,
        energies,
        gaps,
        ratios,
        flags,
        commensurate,
    })
}
