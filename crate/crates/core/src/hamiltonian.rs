//! The F12-rule Hamiltonian with open boundaries.
//!
//! `H = sum_{i=3}^{L-2} S_i (N_i^(2) + N_i^(3))` where `S_i = b_i + b_i^dagger`
//! flips site `i` and the projectors select configurations in which exactly
//! two or three of the sites `i-2, i-1, i+1, i+2` are alive. All nonzero
//! matrix elements equal 1, so a row is fully described by the set of bulk
//! sites it may flip; that set is stored as a bitmask per basis state.

use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{check_lattice_size, SpinConfig, MAX_STATE_SITES};

/// Largest chain for which a dense matrix is assembled.
pub const MAX_DENSE_SITES: usize = 10;

const PAR_CHUNK: usize = 1 << 12;

/// Bitmask (0-based) of the four neighbors of bulk site `site` (1-indexed).
#[inline]
pub(crate) fn neighbor_mask(site: usize) -> u64 {
    0b11011u64 << (site - 3)
}

/// Number of alive sites among `i-2, i-1, i+1, i+2`; `i` must be a bulk site.
pub fn alive_neighbors(config: &SpinConfig, site: usize) -> Result<u32> {
    let len = config.len();
    if site < 3 || site + 2 > len {
        return Err(Error::SiteOutOfRange {
            site,
            min: 3,
            max: len - 2,
        });
    }
    Ok((config.fock_index() & neighbor_mask(site)).count_ones())
}

/// Sites (as a 0-based bitmask) that the F12 rule flips in `bits`.
#[inline]
pub(crate) fn flip_mask(len: usize, bits: u64) -> u64 {
    let mut mask = 0u64;
    for site in 3..=len - 2 {
        let count = (bits & neighbor_mask(site)).count_ones();
        if count == 2 || count == 3 {
            mask |= 1 << (site - 1);
        }
    }
    mask
}

#[derive(Clone, Debug)]
pub struct SparseHamiltonian {
    len: usize,
    // flips[r]: bulk sites coupled to row r; row r couples to r ^ (1 << b)
    // for each set bit b.
    flips: Vec<u32>,
}

/// Builds the Hamiltonian for an `len`-site chain by enumerating
/// (configuration, bulk site) pairs.
pub fn build_hamiltonian(len: usize) -> Result<SparseHamiltonian> {
    check_lattice_size(len, MAX_STATE_SITES)?;
    let flips = (0..1usize << len)
        .into_par_iter()
        .with_min_len(PAR_CHUNK)
        .map(|c| flip_mask(len, c as u64) as u32)
        .collect();
    Ok(SparseHamiltonian { len, flips })
}

impl SparseHamiltonian {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.flips.len()
    }

    /// Number of stored (row, col) couplings.
    pub fn nnz(&self) -> usize {
        self.flips.iter().map(|m| m.count_ones() as usize).sum()
    }

    /// Largest number of couplings in a row; bounds the spectral radius.
    pub fn max_row_degree(&self) -> u32 {
        self.flips.iter().map(|m| m.count_ones()).max().unwrap_or(0)
    }

    /// Bulk sites (1-indexed) that row `row` couples through.
    pub fn row_sites(&self, row: usize) -> impl Iterator<Item = usize> + '_ {
        let mask = self.flips[row];
        (0..32).filter(move |b| mask >> b & 1 == 1).map(|b| b + 1)
    }

    /// Columns of row `row`, in increasing order.
    pub fn row(&self, row: usize) -> Vec<usize> {
        let mut cols: Vec<usize> = self.row_sites(row).map(|s| row ^ (1 << (s - 1))).collect();
        cols.sort_unstable();
        cols
    }

    pub(crate) fn flip_masks(&self) -> &[u32] {
        &self.flips
    }

    /// All couplings `(row, col)` sorted by row, then column.
    pub fn couplings(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.dim()).flat_map(move |r| self.row(r).into_iter().map(move |c| (r, c)))
    }

    /// `y = H x` without allocating.
    pub fn apply_into(&self, x: &[C64], y: &mut [C64]) -> Result<()> {
        apply_flips(&self.flips, x, y)
    }

    /// `<x|H|x>`.
    pub fn expectation(&self, x: &[C64]) -> Result<f64> {
        let hx = apply_hamiltonian(self, x)?;
        Ok(x.iter().zip(&hx).map(|(a, b)| (a.conj() * b).re).sum())
    }

    /// Dense real matrix; only for `L <= 10`.
    pub fn to_dense(&self) -> Result<DMatrix<f64>> {
        if self.len > MAX_DENSE_SITES {
            return Err(Error::LatticeTooLarge {
                size: self.len,
                max: MAX_DENSE_SITES,
            });
        }
        let dim = self.dim();
        let mut m = DMatrix::zeros(dim, dim);
        for (r, c) in self.couplings() {
            m[(r, c)] = 1.0;
        }
        Ok(m)
    }

    /// Diagnostic dump of the coupling list as `row,col` CSV.
    pub fn write_couplings_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["row", "col"])?;
        for (r, c) in self.couplings() {
            w.write_record([r.to_string(), c.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `H x`, freshly allocated; not normalized.
/// `y[r] = sum over set bits b of flips[r] of x[r ^ (1 << b)]`.
fn apply_flips(flips: &[u32], x: &[C64], y: &mut [C64]) -> Result<()> {
    let dim = flips.len();
    for v in [x.len(), y.len()] {
        if v != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v,
            });
        }
    }
    y.par_chunks_mut(PAR_CHUNK)
        .zip(flips.par_chunks(PAR_CHUNK))
        .enumerate()
        .for_each(|(chunk, (ys, masks))| {
            let base = chunk * PAR_CHUNK;
            for (k, (yr, &mask)) in ys.iter_mut().zip(masks).enumerate() {
                let row = base + k;
                let mut acc = C64::new(0.0, 0.0);
                let mut m = mask;
                while m != 0 {
                    let b = m.trailing_zeros();
                    acc += x[row ^ (1 << b)];
                    m &= m - 1;
                }
                *yr = acc;
            }
        });
    Ok(())
}

/// A real symmetric operator the integrators can apply.
pub trait Operator: Sync {
    fn dim(&self) -> usize;
    /// Largest number of nonzeros in a row.
    fn max_row_degree(&self) -> u32;
    fn apply_into(&self, x: &[C64], y: &mut [C64]) -> Result<()>;
}

impl Operator for SparseHamiltonian {
    fn dim(&self) -> usize {
        SparseHamiltonian::dim(self)
    }

    fn max_row_degree(&self) -> u32 {
        SparseHamiltonian::max_row_degree(self)
    }

    fn apply_into(&self, x: &[C64], y: &mut [C64]) -> Result<()> {
        SparseHamiltonian::apply_into(self, x, y)
    }
}

/// The Hamiltonian restricted to fixed values of the four edge sites
/// `1, 2, L-1, L`, which it never flips. Basis states are indexed by the
/// bulk sites `3..=L-2`, site 3 being the least significant bit.
#[derive(Clone, Debug)]
pub struct SectorHamiltonian {
    len: usize,
    edges: u64,
    flips: Vec<u32>,
}

impl SectorHamiltonian {
    /// The sector containing `config`.
    pub fn for_config(config: &SpinConfig) -> Result<Self> {
        let len = config.len();
        check_lattice_size(len, MAX_STATE_SITES)?;
        let edges = config.fock_index() & !bulk_mask(len);
        let flips = (0..1usize << (len - 4))
            .into_par_iter()
            .with_min_len(PAR_CHUNK)
            .map(|r| (flip_mask(len, edges | (r as u64) << 2) >> 2) as u32)
            .collect();
        Ok(SectorHamiltonian { len, edges, flips })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.flips.len()
    }

    /// Sector index of `config`, if it lies in this sector.
    pub fn index_of(&self, config: &SpinConfig) -> Option<usize> {
        let bits = config.fock_index();
        (config.len() == self.len && bits & !bulk_mask(self.len) == self.edges)
            .then(|| (bits >> 2) as usize & (self.dim() - 1))
    }

    /// Full-chain index of sector index `r`.
    pub fn full_index(&self, r: usize) -> usize {
        (self.edges | (r as u64) << 2) as usize
    }

    /// Writes the full-chain amplitudes of a sector vector into `full`.
    pub fn embed_into(&self, reduced: &[C64], full: &mut [C64]) -> Result<()> {
        if reduced.len() != self.dim() || full.len() != 1 << self.len {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: reduced.len(),
            });
        }
        full.fill(C64::new(0.0, 0.0));
        for (r, a) in reduced.iter().enumerate() {
            full[self.full_index(r)] = *a;
        }
        Ok(())
    }

    pub fn embed(&self, reduced: &[C64]) -> Result<Vec<C64>> {
        let mut full = vec![C64::new(0.0, 0.0); 1 << self.len];
        self.embed_into(reduced, &mut full)?;
        Ok(full)
    }

    /// Sector components of a full-chain vector.
    pub fn restrict(&self, full: &[C64]) -> Result<Vec<C64>> {
        if full.len() != 1 << self.len {
            return Err(Error::DimensionMismatch {
                expected: 1 << self.len,
                found: full.len(),
            });
        }
        Ok((0..self.dim()).map(|r| full[self.full_index(r)]).collect())
    }

    pub fn max_row_degree(&self) -> u32 {
        self.flips.iter().map(|m| m.count_ones()).max().unwrap_or(0)
    }

    pub fn apply_into(&self, x: &[C64], y: &mut [C64]) -> Result<()> {
        apply_flips(&self.flips, x, y)
    }

    /// `<x|H|x>` for a sector vector.
    pub fn expectation(&self, x: &[C64]) -> Result<f64> {
        let mut hx = vec![C64::new(0.0, 0.0); self.dim()];
        self.apply_into(x, &mut hx)?;
        Ok(x.iter().zip(&hx).map(|(a, b)| (a.conj() * b).re).sum())
    }
}

impl Operator for SectorHamiltonian {
    fn dim(&self) -> usize {
        SectorHamiltonian::dim(self)
    }

    fn max_row_degree(&self) -> u32 {
        SectorHamiltonian::max_row_degree(self)
    }

    fn apply_into(&self, x: &[C64], y: &mut [C64]) -> Result<()> {
        SectorHamiltonian::apply_into(self, x, y)
    }
}

/// Bits of the bulk sites `3..=L-2`.
fn bulk_mask(len: usize) -> u64 {
    ((1u64 << (len - 4)) - 1) << 2
}

pub fn apply_hamiltonian(h: &SparseHamiltonian, x: &[C64]) -> Result<Vec<C64>> {
    let mut y = vec![C64::new(0.0, 0.0); h.dim()];
    h.apply_into(x, &mut y)?;
    Ok(y)
}
