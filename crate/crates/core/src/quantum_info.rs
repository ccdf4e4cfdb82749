//! Partial traces, von Neumann entropies (in bits), bond entropy, pairwise
//! mutual information and Wootters concurrence.
//!
//! Reduced matrices index retained sites in the order given, the first
//! listed site being the least significant bit of the reduced index.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Eigenvalues at or below this are dropped from entropies.
pub const ENTROPY_FLOOR: f64 = 1e-12;
const DM_TOL: f64 = 1e-10;
const CONCURRENCE_FLOOR: f64 = 1e-14;
/// Largest subsystem handed to [`reduced_density_matrix`].
pub const MAX_REDUCED_SITES: usize = 12;

fn chain_len(amplitudes: &[C64]) -> Result<usize> {
    let dim = amplitudes.len();
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "dimension {dim} is not a power of two"
        )));
    }
    Ok(dim.trailing_zeros() as usize)
}

#[derive(Clone, Debug)]
pub struct DensityMatrix {
    sites: Vec<usize>,
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity to `1e-10`.
    pub fn new(sites: Vec<usize>, matrix: DMatrix<C64>) -> Result<Self> {
        let dim = 1usize << sites.len();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::InvalidDensityMatrix(format!(
                "{} sites need a {dim}x{dim} matrix, got {}x{}",
                sites.len(),
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        check_hermitian_unit_trace(&matrix)?;
        let min = SymmetricEigen::new(matrix.clone()).eigenvalues.min();
        if min < -DM_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(DensityMatrix { sites, matrix })
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

fn check_hermitian_unit_trace(m: &DMatrix<C64>) -> Result<()> {
    let herm_err = (m - m.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if herm_err > DM_TOL {
        return Err(Error::InvalidDensityMatrix(format!(
            "not Hermitian (error {herm_err:e})"
        )));
    }
    let tr = m.trace();
    if (tr - C64::new(1.0, 0.0)).norm() > DM_TOL {
        return Err(Error::InvalidDensityMatrix(format!(
            "trace {tr} differs from 1"
        )));
    }
    Ok(())
}

/// Traces out every site not in `sites`. The result is divided by the
/// squared norm of `amplitudes`.
pub fn reduced_density_matrix(amplitudes: &[C64], sites: &[usize]) -> Result<DensityMatrix> {
    let len = chain_len(amplitudes)?;
    if sites.len() > MAX_REDUCED_SITES {
        return Err(Error::InvalidParameter(format!(
            "at most {MAX_REDUCED_SITES} sites may be retained, got {}",
            sites.len()
        )));
    }
    let mut mask = 0usize;
    for &s in sites {
        if s == 0 || s > len {
            return Err(Error::SiteOutOfRange {
                site: s,
                min: 1,
                max: len,
            });
        }
        let bit = 1 << (s - 1);
        if mask & bit != 0 {
            return Err(Error::DuplicateSite(s));
        }
        mask |= bit;
    }
    let k = sites.len();
    let rdim = 1usize << k;
    // scatter[a]: full-chain bits of reduced index a
    let scatter: Vec<usize> = (0..rdim)
        .map(|a| {
            sites
                .iter()
                .enumerate()
                .filter(|(q, _)| a >> q & 1 == 1)
                .map(|(_, &s)| 1usize << (s - 1))
                .sum()
        })
        .collect();

    let mut rho = DMatrix::<C64>::zeros(rdim, rdim);
    let mut local = vec![C64::new(0.0, 0.0); rdim];
    for base in (0..amplitudes.len()).filter(|x| x & mask == 0) {
        let mut any = false;
        for (slot, &sc) in local.iter_mut().zip(&scatter) {
            *slot = amplitudes[base | sc];
            any |= slot.norm_sqr() != 0.0;
        }
        if !any {
            continue;
        }
        for b in 0..rdim {
            let cb = local[b].conj();
            if cb.norm_sqr() == 0.0 {
                continue;
            }
            for a in 0..rdim {
                rho[(a, b)] += local[a] * cb;
            }
        }
    }
    let tr = rho.trace().re;
    if tr == 0.0 {
        return Err(Error::NotNormalized(0.0));
    }
    rho /= C64::new(tr, 0.0);
    Ok(DensityMatrix {
        sites: sites.to_vec(),
        matrix: rho,
    })
}

fn entropy_of_probabilities(p: impl IntoIterator<Item = f64>) -> f64 {
    let s: f64 = p
        .into_iter()
        .filter(|&x| x > ENTROPY_FLOOR)
        .map(|x| -x * x.log2())
        .sum();
    s.max(0.0)
}

/// `-Tr(rho log2 rho)`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    check_hermitian_unit_trace(&rho.matrix)?;
    let eig = SymmetricEigen::new(rho.matrix.clone());
    Ok(entropy_of_probabilities(eig.eigenvalues.iter().copied()))
}

/// `S_i` for every site, from the full 2x2 reduced matrices.
pub fn single_site_entropies(amplitudes: &[C64]) -> Result<Vec<f64>> {
    let len = chain_len(amplitudes)?;
    (1..=len)
        .map(|i| von_neumann_entropy(&reduced_density_matrix(amplitudes, &[i])?))
        .collect()
}

pub fn two_site_entropy(amplitudes: &[C64], i: usize, j: usize) -> Result<f64> {
    if i == j {
        return Err(Error::DuplicateSite(i));
    }
    von_neumann_entropy(&reduced_density_matrix(amplitudes, &[i, j])?)
}

/// Symmetric, zero-diagonal, nonnegative `L x L` weights.
#[derive(Clone, Debug, PartialEq)]
pub struct MIMatrix(DMatrix<f64>);

impl MIMatrix {
    /// Checks shape, symmetry and the zero diagonal; entries down to
    /// `-1e-10` are clamped to zero.
    pub fn new(mut m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidParameter(
                "mutual-information matrix must be square".into(),
            ));
        }
        let n = m.nrows();
        for i in 0..n {
            if m[(i, i)] != 0.0 {
                return Err(Error::InvalidParameter(format!("nonzero diagonal at {i}")));
            }
            for j in 0..n {
                if (m[(i, j)] - m[(j, i)]).abs() > DM_TOL {
                    return Err(Error::InvalidParameter(format!("asymmetric at ({i}, {j})")));
                }
                if m[(i, j)] < -DM_TOL {
                    return Err(Error::InvalidParameter(format!(
                        "negative entry {} at ({i}, {j})",
                        m[(i, j)]
                    )));
                }
            }
        }
        m.iter_mut().for_each(|v| *v = v.max(0.0));
        Ok(MIMatrix(m))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.0.nrows() == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i - 1, j - 1)]
    }
}

/// `I_ij = (S_i + S_j - S_ij) / 2`, with `I_ii = 0`.
pub fn mutual_information_matrix(amplitudes: &[C64]) -> Result<MIMatrix> {
    let len = chain_len(amplitudes)?;
    let single = single_site_entropies(amplitudes)?;
    let pairs: Vec<(usize, usize)> = (1..=len)
        .flat_map(|i| (i + 1..=len).map(move |j| (i, j)))
        .collect();
    let values = pairs
        .par_iter()
        .map(|&(i, j)| two_site_entropy(amplitudes, i, j))
        .collect::<Result<Vec<f64>>>()?;
    let mut m = DMatrix::zeros(len, len);
    for (&(i, j), s_ij) in pairs.iter().zip(values) {
        let v = (0.5 * (single[i - 1] + single[j - 1] - s_ij)).max(0.0);
        m[(i - 1, j - 1)] = v;
        m[(j - 1, i - 1)] = v;
    }
    Ok(MIMatrix(m))
}

/// Wootters concurrence of a two-site density matrix.
///
/// With `rho = W W^dagger` built from the eigen-decomposition, the values
/// `lambda` are the singular values of `W^T (sigma_y x sigma_y) W`, which
/// coincide with the square roots of the eigenvalues of `rho rho~`. This
/// form avoids taking square roots of round-off-sized eigenvalues.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::InvalidDensityMatrix(format!(
            "concurrence needs a 4x4 matrix, got {0}x{0}",
            rho.dim()
        )));
    }
    let eig = SymmetricEigen::new(rho.matrix().clone());
    if let Some(p) = eig.eigenvalues.iter().find(|&&p| p < -DM_TOL) {
        return Err(Error::InvalidDensityMatrix(format!(
            "negative eigenvalue {p:e}"
        )));
    }
    let columns: Vec<DVector<C64>> = eig
        .eigenvalues
        .iter()
        .zip(eig.eigenvectors.column_iter())
        .filter(|(&p, _)| p > CONCURRENCE_FLOOR)
        .map(|(&p, v)| v.clone_owned() * C64::new(p.sqrt(), 0.0))
        .collect();
    if columns.is_empty() {
        return Err(Error::InvalidDensityMatrix("zero matrix".into()));
    }
    let w = DMatrix::from_columns(&columns);
    let tau = w.transpose() * spin_flip() * &w;
    let mut lambdas: Vec<f64> = tau.singular_values().iter().copied().collect();
    lambdas.resize(4, 0.0);
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0))
}

/// `sigma_y (x) sigma_y` in the `|00>, |01>, |10>, |11>` basis.
fn spin_flip() -> DMatrix<C64> {
    let mut yy = DMatrix::<C64>::zeros(4, 4);
    for (r, c, v) in [(0, 3, -1.0), (1, 2, 1.0), (2, 1, 1.0), (3, 0, -1.0)] {
        yy[(r, c)] = C64::new(v, 0.0);
    }
    yy
}

/// Mean concurrence over the pairs `(i, i + distance)`, `i = 1..=L-distance`.
pub fn average_concurrence(amplitudes: &[C64], distance: usize) -> Result<f64> {
    let len = chain_len(amplitudes)?;
    if distance == 0 || distance >= len {
        return Err(Error::InvalidParameter(format!(
            "distance {distance} outside 1..={}",
            len - 1
        )));
    }
    let total = (1..=len - distance)
        .map(|i| concurrence(&reduced_density_matrix(amplitudes, &[i, i + distance])?))
        .sum::<Result<f64>>()?;
    Ok(total / (len - distance) as f64)
}

/// Entanglement entropy across the cut between sites `bond` and `bond + 1`,
/// from the singular values of the left/right amplitude reshaping.
pub fn bond_entropy(amplitudes: &[C64], bond: usize) -> Result<f64> {
    let len = chain_len(amplitudes)?;
    if bond == 0 || bond >= len {
        return Err(Error::InvalidParameter(format!(
            "bond {bond} outside 1..={}",
            len - 1
        )));
    }
    // column-major: row = left block (sites 1..=bond), column = right block.
    // All-zero rows and columns do not change the singular values, and
    // states confined to a sector have many of them.
    let rows = 1usize << bond;
    let mut live_rows = vec![false; rows];
    let mut live_cols = vec![false; amplitudes.len() / rows];
    for (idx, a) in amplitudes.iter().enumerate() {
        if *a != C64::new(0.0, 0.0) {
            live_rows[idx & (rows - 1)] = true;
            live_cols[idx >> bond] = true;
        }
    }
    let keep = |live: &[bool]| -> Vec<usize> { (0..live.len()).filter(|&k| live[k]).collect() };
    let (r, c) = (keep(&live_rows), keep(&live_cols));
    if r.is_empty() {
        return Err(Error::NotNormalized(0.0));
    }
    let m = DMatrix::from_fn(r.len(), c.len(), |i, j| amplitudes[r[i] | c[j] << bond]);
    let sv = SVD::new(m, false, false).singular_values;
    let total: f64 = sv.iter().map(|s| s * s).sum();
    if total == 0.0 {
        return Err(Error::NotNormalized(0.0));
    }
    Ok(entropy_of_probabilities(sv.iter().map(|s| s * s / total)))
}

/// Bond entropy at every bond `1..L`.
pub fn bond_entropy_profile(amplitudes: &[C64]) -> Result<Vec<f64>> {
    let len = chain_len(amplitudes)?;
    (1..len).map(|j| bond_entropy(amplitudes, j)).collect()
}
