//! Time evolution: the classical F12 automaton, fixed-step RK4 integration of
//! the Schrödinger equation, a dense exact propagator for small chains, and
//! the stroboscopic measure-and-rotate construction that recovers the
//! classical rule from the quantum model.

use std::f64::consts::FRAC_PI_2;

use log::warn;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hamiltonian::{
    flip_mask, Operator, SectorHamiltonian, SparseHamiltonian, MAX_DENSE_SITES,
};
use crate::lattice::{make_fock_state, norm, SpinConfig, StateVector};

/// Duration of one classical step on the shared time axis.
pub const STEP_DURATION: f64 = FRAC_PI_2;
/// Integration aborts once `|norm - 1|` exceeds this.
pub const NORM_ABORT: f64 = 1e-4;
/// Stored state snapshots must stay this close to unit norm.
pub const SNAPSHOT_NORM_TOL: f64 = 1e-6;
/// `dt * max_row_degree` above this triggers a stability warning.
pub const STABILITY_LIMIT: f64 = 0.5;
pub const DEFAULT_DT: f64 = 0.01;

/// One synchronous application of the F12 rule. Boundary sites `1, 2, L-1, L`
/// never change.
pub fn classical_f12_step(config: &SpinConfig) -> SpinConfig {
    let bits = config.fock_index();
    config.with_bits(bits ^ flip_mask(config.len(), bits))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalTrajectory {
    pub steps: Vec<SpinConfig>,
}

impl ClassicalTrajectory {
    /// `t_k = k * pi / 2`, for plotting against quantum runs.
    pub fn times(&self) -> Vec<f64> {
        (0..self.steps.len())
            .map(|k| k as f64 * STEP_DURATION)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Smallest `n > 0` with `steps[n] == steps[0]`, if recorded.
    pub fn period(&self) -> Option<usize> {
        let first = self.steps.first()?;
        self.steps[1..]
            .iter()
            .position(|c| c == first)
            .map(|p| p + 1)
    }
}

pub fn classical_trajectory(config: &SpinConfig, n_steps: usize) -> ClassicalTrajectory {
    let mut steps = Vec::with_capacity(n_steps + 1);
    steps.push(*config);
    for k in 0..n_steps {
        steps.push(classical_f12_step(&steps[k]));
    }
    ClassicalTrajectory { steps }
}

/// Sampled output of a quantum run.
#[derive(Clone, Debug)]
pub struct Trajectory<S> {
    pub times: Vec<f64>,
    pub snapshots: Vec<S>,
    pub dt: f64,
    /// Largest `|norm - 1|` seen at any sample.
    pub norm_drift: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rk4Options {
    pub t_max: f64,
    pub dt: f64,
    pub sample_every: usize,
}

impl Rk4Options {
    pub fn new(t_max: f64, dt: f64, sample_every: usize) -> Self {
        Rk4Options {
            t_max,
            dt,
            sample_every,
        }
    }

    fn validate(&self) -> Result<usize> {
        if self.dt <= 0.0 || !self.dt.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if self.t_max < 0.0 || !self.t_max.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "t_max must be nonnegative, got {}",
                self.t_max
            )));
        }
        if self.sample_every == 0 {
            return Err(Error::InvalidParameter(
                "sample_every must be at least 1".into(),
            ));
        }
        Ok(steps_for(self.t_max, self.dt))
    }
}

/// Number of steps of size `dt` that reach `t_max`, tolerating round-off.
pub fn steps_for(t_max: f64, dt: f64) -> usize {
    let n = t_max / dt;
    let rounded = n.round();
    if (n - rounded).abs() < 1e-9 * n.max(1.0) {
        rounded as usize
    } else {
        n.floor() as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `d psi/dt = -i H psi`
    Forward,
    /// `d psi/dt = +i H psi`
    Backward,
}

/// Classic fourth-order Runge-Kutta for `d psi/dt = -/+ i H psi`. No
/// renormalization: norm drift is left visible as an error signal.
pub struct Rk4Stepper<'h, H: Operator + ?Sized = SparseHamiltonian> {
    h: &'h H,
    dt: f64,
    factor: C64,
    k: Vec<C64>,
    acc: Vec<C64>,
    tmp: Vec<C64>,
}

impl<'h, H: Operator + ?Sized> Rk4Stepper<'h, H> {
    pub fn new(h: &'h H, dt: f64, direction: Direction) -> Self {
        let dim = h.dim();
        let factor = match direction {
            Direction::Forward => C64::new(0.0, -1.0),
            Direction::Backward => C64::new(0.0, 1.0),
        };
        let bound = dt * h.max_row_degree() as f64;
        if bound > STABILITY_LIMIT {
            warn!(
                "dt * max_row_degree = {bound:.3} exceeds {STABILITY_LIMIT}; RK4 may be inaccurate"
            );
        }
        Rk4Stepper {
            h,
            dt,
            factor,
            k: vec![C64::new(0.0, 0.0); dim],
            acc: vec![C64::new(0.0, 0.0); dim],
            tmp: vec![C64::new(0.0, 0.0); dim],
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn rhs(&mut self, from_tmp: bool, psi: &[C64]) -> Result<()> {
        let x = if from_tmp { &self.tmp } else { psi };
        self.h.apply_into(x, &mut self.k)?;
        let f = self.factor;
        self.k.iter_mut().for_each(|v| *v *= f);
        Ok(())
    }

    pub fn step(&mut self, psi: &mut [C64]) -> Result<()> {
        if psi.len() != self.k.len() {
            return Err(Error::DimensionMismatch {
                expected: self.k.len(),
                found: psi.len(),
            });
        }
        let half = 0.5 * self.dt;
        let dt = self.dt;

        self.rhs(false, psi)?;
        for ((a, t), (k, p)) in self
            .acc
            .iter_mut()
            .zip(&mut self.tmp)
            .zip(self.k.iter().zip(psi.iter()))
        {
            *a = *k;
            *t = p + k * half;
        }
        self.rhs(true, psi)?;
        for ((a, t), (k, p)) in self
            .acc
            .iter_mut()
            .zip(&mut self.tmp)
            .zip(self.k.iter().zip(psi.iter()))
        {
            *a += k * 2.0;
            *t = p + k * half;
        }
        self.rhs(true, psi)?;
        for ((a, t), (k, p)) in self
            .acc
            .iter_mut()
            .zip(&mut self.tmp)
            .zip(self.k.iter().zip(psi.iter()))
        {
            *a += k * 2.0;
            *t = p + k * dt;
        }
        self.rhs(true, psi)?;
        let w = dt / 6.0;
        for ((p, a), k) in psi.iter_mut().zip(&self.acc).zip(&self.k) {
            *p += (a + k) * w;
        }
        Ok(())
    }
}

/// Integrates from `initial`, calling `observe(t, psi)` at `t = 0` and every
/// `sample_every` steps.
pub fn evolve_rk4_with<S, F>(
    h: &SparseHamiltonian,
    initial: &StateVector,
    options: &Rk4Options,
    observe: F,
) -> Result<Trajectory<S>>
where
    F: FnMut(f64, &[C64]) -> Result<S>,
{
    if initial.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: initial.dim(),
        });
    }
    integrate(h, initial.amplitudes().to_vec(), options, observe)
}

/// Like [`evolve_rk4_with`] for a Fock initial state, but integrates only
/// inside its fixed-edge sector (dimension `2^(L-4)`), which the dynamics
/// never leaves. `observe` still receives full-chain amplitudes.
pub fn evolve_fock_rk4_with<S, F>(
    initial: &SpinConfig,
    options: &Rk4Options,
    mut observe: F,
) -> Result<Trajectory<S>>
where
    F: FnMut(f64, &[C64]) -> Result<S>,
{
    let sector = SectorHamiltonian::for_config(initial)?;
    let mut psi = vec![C64::new(0.0, 0.0); sector.dim()];
    psi[sector
        .index_of(initial)
        .expect("config lies in its own sector")] = C64::new(1.0, 0.0);
    let mut full = vec![C64::new(0.0, 0.0); 1 << initial.len()];
    integrate(&sector, psi, options, |t, reduced| {
        sector.embed_into(reduced, &mut full)?;
        observe(t, &full)
    })
}

fn integrate<H, S, F>(
    h: &H,
    mut psi: Vec<C64>,
    options: &Rk4Options,
    mut observe: F,
) -> Result<Trajectory<S>>
where
    H: Operator + ?Sized,
    F: FnMut(f64, &[C64]) -> Result<S>,
{
    let n_steps = options.validate()?;
    let mut stepper = Rk4Stepper::new(h, options.dt, Direction::Forward);
    let mut times = Vec::with_capacity(n_steps / options.sample_every + 1);
    let mut snapshots = Vec::with_capacity(times.capacity());
    let mut norm_drift = 0.0f64;

    for step in 0..=n_steps {
        if step > 0 {
            stepper.step(&mut psi)?;
        }
        if step % options.sample_every == 0 || step == n_steps {
            let t = step as f64 * options.dt;
            let drift = (norm(&psi) - 1.0).abs();
            norm_drift = norm_drift.max(drift);
            if drift > NORM_ABORT {
                return Err(Error::NormDrift {
                    drift,
                    time: t,
                    limit: NORM_ABORT,
                });
            }
            if step % options.sample_every == 0 {
                times.push(t);
                snapshots.push(observe(t, &psi)?);
            }
        }
    }
    Ok(Trajectory {
        times,
        snapshots,
        dt: options.dt,
        norm_drift,
    })
}

/// Integrates and stores full state vectors at every sample.
pub fn evolve_rk4(
    h: &SparseHamiltonian,
    initial: &StateVector,
    t_max: f64,
    dt: f64,
    sample_every: usize,
) -> Result<Trajectory<StateVector>> {
    let len = initial.len();
    evolve_rk4_with(
        h,
        initial,
        &Rk4Options::new(t_max, dt, sample_every),
        |t, psi| {
            StateVector::with_tolerance(len, psi.to_vec(), SNAPSHOT_NORM_TOL).map_err(|e| match e {
                Error::NotNormalized(n) => Error::NormDrift {
                    drift: (n - 1.0).abs(),
                    time: t,
                    limit: SNAPSHOT_NORM_TOL,
                },
                other => other,
            })
        },
    )
}

/// `exp(-i H t)` from a dense eigendecomposition; for `L <= 10`.
pub struct ExactPropagator {
    len: usize,
    energies: DVector<f64>,
    vectors: DMatrix<f64>,
}

impl ExactPropagator {
    pub fn new(h: &SparseHamiltonian) -> Result<Self> {
        let dense = h.to_dense()?;
        let eig = SymmetricEigen::new(dense);
        Ok(ExactPropagator {
            len: h.len(),
            energies: eig.eigenvalues,
            vectors: eig.eigenvectors,
        })
    }

    pub fn energies(&self) -> &DVector<f64> {
        &self.energies
    }

    pub fn evolve(&self, initial: &StateVector, t: f64) -> Result<StateVector> {
        let dim = self.energies.len();
        if initial.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: initial.dim(),
            });
        }
        let psi = DVector::from_column_slice(initial.amplitudes());
        let v = self.vectors.map(|x| C64::new(x, 0.0));
        let mut coeffs = v.tr_mul(&psi);
        for (c, &e) in coeffs.iter_mut().zip(self.energies.iter()) {
            *c *= C64::from_polar(1.0, -e * t);
        }
        let out = v * coeffs;
        StateVector::with_tolerance(self.len, out.as_slice().to_vec(), 1e-8)
    }
}

pub fn evolve_exact(h: &SparseHamiltonian, initial: &StateVector, t: f64) -> Result<StateVector> {
    if h.len() > MAX_DENSE_SITES {
        return Err(Error::LatticeTooLarge {
            size: h.len(),
            max: MAX_DENSE_SITES,
        });
    }
    ExactPropagator::new(h)?.evolve(initial, t)
}

/// `exp(-i theta S_site)` with `S = b + b^dagger`, applied in place.
fn rotate_site(psi: &mut [C64], site: usize, theta: f64) {
    let bit = 1usize << (site - 1);
    let (c, s) = (theta.cos(), theta.sin());
    let mis = C64::new(0.0, -s);
    for idx in 0..psi.len() {
        if idx & bit == 0 {
            let (a0, a1) = (psi[idx], psi[idx | bit]);
            psi[idx] = a0 * c + a1 * mis;
            psi[idx | bit] = a0 * mis + a1 * c;
        }
    }
}

/// Measures the flip projectors `N^(2) + N^(3)` on a Fock state, freezes the
/// outcome, rotates every flagged site for `pi/2`, and reads out the next
/// Fock configuration. Repeats `n_steps` times.
pub fn stroboscopic_quantum(
    h: &SparseHamiltonian,
    config: &SpinConfig,
    n_steps: usize,
) -> Result<ClassicalTrajectory> {
    let len = h.len();
    if config.len() != len {
        return Err(Error::BitstringLength {
            expected: len,
            found: config.len(),
        });
    }
    const OUTCOME_TOL: f64 = 1e-9;
    let masks = h.flip_masks();
    let mut steps = vec![*config];
    let mut current = *config;
    for _ in 0..n_steps {
        let mut psi = make_fock_state(&current)?.into_amplitudes();
        let mut flagged = Vec::new();
        for site in 3..=len - 2 {
            let bit = 1u32 << (site - 1);
            let p: f64 = psi
                .iter()
                .zip(masks)
                .filter(|(_, &m)| m & bit != 0)
                .map(|(a, _)| a.norm_sqr())
                .sum();
            if p > 1.0 - OUTCOME_TOL {
                flagged.push(site);
            } else if p > OUTCOME_TOL {
                return Err(Error::InvalidParameter(format!(
                    "projector outcome at site {site} is not sharp (p = {p})"
                )));
            }
        }
        for &site in &flagged {
            rotate_site(&mut psi, site, FRAC_PI_2);
        }
        let (index, weight) =
            psi.iter()
                .map(|a| a.norm_sqr())
                .enumerate()
                .fold(
                    (0, 0.0),
                    |best, (k, w)| if w > best.1 { (k, w) } else { best },
                );
        if (weight - 1.0).abs() > OUTCOME_TOL {
            return Err(Error::InvalidParameter(format!(
                "rotated state is not a Fock state (max weight {weight})"
            )));
        }
        current = SpinConfig::from_index(len, index as u64)?;
        steps.push(current);
    }
    Ok(ClassicalTrajectory { steps })
}
