//! Basis encoding of classical configurations and state vectors.
//!
//! Site `j` (1-indexed) of a configuration is bit `j - 1` of its Fock index,
//! so site 1 is the least significant bit. Every other module goes through
//! [`SpinConfig::fock_index`] / [`SpinConfig::from_index`] for this mapping.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Smallest chain with a non-empty bulk (sites `3..=L-2`).
pub const MIN_SITES: usize = 5;
/// Configurations are packed into a `u64`.
pub const MAX_CONFIG_SITES: usize = 64;
/// Largest chain for which a full state vector is allocated.
pub const MAX_STATE_SITES: usize = 24;

pub(crate) const STATE_NORM_TOL: f64 = 1e-9;

pub(crate) fn check_lattice_size(len: usize, max: usize) -> Result<()> {
    if len < MIN_SITES {
        return Err(Error::LatticeTooSmall(len));
    }
    if len > max {
        return Err(Error::LatticeTooLarge { size: len, max });
    }
    Ok(())
}

/// A classical dead/alive pattern on `len` sites.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinConfig {
    len: usize,
    bits: u64,
}

impl SpinConfig {
    /// Builds a configuration from per-site values, site 1 first.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        check_lattice_size(bits.len(), MAX_CONFIG_SITES)?;
        let mut packed = 0u64;
        for (j, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => packed |= 1 << j,
                _ => {
                    return Err(Error::InvalidBitstring(format!(
                        "site {} has value {b}",
                        j + 1
                    )))
                }
            }
        }
        Ok(SpinConfig {
            len: bits.len(),
            bits: packed,
        })
    }

    /// Decodes a Fock index back into a configuration.
    pub fn from_index(len: usize, index: u64) -> Result<Self> {
        check_lattice_size(len, MAX_CONFIG_SITES)?;
        if len < 64 && index >> len != 0 {
            return Err(Error::InvalidParameter(format!(
                "index {index} does not fit in {len} sites"
            )));
        }
        Ok(SpinConfig { len, bits: index })
    }

    pub fn dead(len: usize) -> Result<Self> {
        Self::from_index(len, 0)
    }

    pub fn alive(len: usize) -> Result<Self> {
        Self::from_index(len, full_mask(len))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Fock index: sum of `b_j * 2^(j-1)`.
    pub fn fock_index(&self) -> u64 {
        self.bits
    }

    /// Value of site `site` (1-indexed).
    pub fn get(&self, site: usize) -> u8 {
        assert!((1..=self.len).contains(&site), "site {site} out of range");
        ((self.bits >> (site - 1)) & 1) as u8
    }

    pub fn flipped(&self, site: usize) -> Self {
        assert!((1..=self.len).contains(&site), "site {site} out of range");
        SpinConfig {
            len: self.len,
            bits: self.bits ^ (1 << (site - 1)),
        }
    }

    pub(crate) fn with_bits(&self, bits: u64) -> Self {
        SpinConfig {
            len: self.len,
            bits,
        }
    }

    pub fn alive_count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (1..=self.len).map(|j| self.get(j)).collect()
    }

    /// Site-reversed configuration, `j -> L + 1 - j`.
    pub fn reversed(&self) -> Self {
        let bits = self.bits.reverse_bits() >> (64 - self.len);
        SpinConfig {
            len: self.len,
            bits,
        }
    }
}

pub(crate) fn full_mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl FromStr for SpinConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::InvalidBitstring(s.to_string())),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::from_bits(&bits)
    }
}

impl serde::Serialize for SpinConfig {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for SpinConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 1..=self.len {
            f.write_str(if self.get(j) == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for SpinConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpinConfig({self})")
    }
}

/// Free-function form of [`SpinConfig::fock_index`].
pub fn fock_index(config: &SpinConfig) -> u64 {
    config.fock_index()
}

/// Unit-norm amplitudes over the `2^L` product basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    len: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// Wraps amplitudes, checking dimension `2^L` and unit norm to `1e-9`.
    pub fn new(len: usize, amplitudes: Vec<C64>) -> Result<Self> {
        Self::with_tolerance(len, amplitudes, STATE_NORM_TOL)
    }

    pub(crate) fn with_tolerance(len: usize, amplitudes: Vec<C64>, tol: f64) -> Result<Self> {
        check_state_len(len)?;
        if amplitudes.len() != 1 << len {
            return Err(Error::DimensionMismatch {
                expected: 1 << len,
                found: amplitudes.len(),
            });
        }
        let n = norm(&amplitudes);
        if (n - 1.0).abs() > tol {
            return Err(Error::NotNormalized(n));
        }
        Ok(StateVector { len, amplitudes })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(len: usize, mut amplitudes: Vec<C64>) -> Result<Self> {
        let n = norm(&amplitudes);
        if n == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        amplitudes.iter_mut().for_each(|a| *a /= n);
        Self::new(len, amplitudes)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn amplitude(&self, config: &SpinConfig) -> C64 {
        self.amplitudes[config.fock_index() as usize]
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }

    pub fn overlap(&self, other: &StateVector) -> Result<C64> {
        overlap(&self.amplitudes, &other.amplitudes)
    }
}

fn check_state_len(len: usize) -> Result<()> {
    // Two-site states are allowed so small entangled test states can be built.
    if len == 0 {
        return Err(Error::LatticeTooSmall(len));
    }
    if len > MAX_STATE_SITES {
        return Err(Error::LatticeTooLarge {
            size: len,
            max: MAX_STATE_SITES,
        });
    }
    Ok(())
}

/// Basis state `|config>`.
pub fn make_fock_state(config: &SpinConfig) -> Result<StateVector> {
    check_state_len(config.len())?;
    let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << config.len()];
    amplitudes[config.fock_index() as usize] = C64::new(1.0, 0.0);
    Ok(StateVector {
        len: config.len(),
        amplitudes,
    })
}

/// Euclidean norm of an amplitude vector.
pub fn norm(amplitudes: &[C64]) -> f64 {
    amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// `<a|b>`, conjugating the first argument.
pub fn overlap(a: &[C64], b: &[C64]) -> Result<C64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(a.iter().zip(b).map(|(x, y)| x.conj() * y).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg(s: &str) -> SpinConfig {
        s.parse().unwrap()
    }

    #[test]
    fn fock_index_examples() {
        assert_eq!(cfg("00000").fock_index(), 0);
        assert_eq!(cfg("10000").fock_index(), 1);
        assert_eq!(cfg("00101").fock_index(), 20);
        assert_eq!(fock_index(&cfg("11111")), 31);
    }

    #[test]
    fn rejects_short_and_malformed() {
        assert!(matches!(
            "0101".parse::<SpinConfig>(),
            Err(Error::LatticeTooSmall(4))
        ));
        assert!(matches!(
            "01201".parse::<SpinConfig>(),
            Err(Error::InvalidBitstring(_))
        ));
        assert!(SpinConfig::from_bits(&[0, 1, 0, 2, 0]).is_err());
    }

    #[test]
    fn display_round_trip() {
        let c = cfg("0000101000011");
        assert_eq!(c.to_string(), "0000101000011");
        assert_eq!(c.get(5), 1);
        assert_eq!(c.reversed().to_string(), "1100001010000");
    }

    #[test]
    fn fock_states() {
        let s = make_fock_state(&cfg("00000")).unwrap();
        assert_eq!(s.amplitudes()[0], C64::new(1.0, 0.0));
        let s = make_fock_state(&cfg("11111")).unwrap();
        assert_eq!(s.amplitudes()[31], C64::new(1.0, 0.0));
        let s = make_fock_state(&cfg("00101")).unwrap();
        assert_eq!(s.amplitudes()[20], C64::new(1.0, 0.0));
        assert_eq!(s.norm(), 1.0);
    }

    #[test]
    fn norm_and_overlap() {
        assert_eq!(norm(&[C64::new(0.0, 0.0); 4]), 0.0);
        let a = make_fock_state(&cfg("01010")).unwrap();
        let b = make_fock_state(&cfg("01110")).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let sup: Vec<C64> = a
            .amplitudes()
            .iter()
            .zip(b.amplitudes())
            .map(|(x, y)| (x + y) * h)
            .collect();
        let sup = StateVector::new(5, sup).unwrap();
        assert!((sup.norm() - 1.0).abs() < 1e-15);
        assert_eq!(a.overlap(&a).unwrap(), C64::new(1.0, 0.0));
        assert_eq!(a.overlap(&b).unwrap(), C64::new(0.0, 0.0));
        assert!((a.overlap(&sup).unwrap() - C64::new(h, 0.0)).norm() < 1e-15);
        let short = vec![C64::new(1.0, 0.0); 2];
        assert!(matches!(
            overlap(a.amplitudes(), &short),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn state_vector_checks() {
        assert!(matches!(
            StateVector::new(5, vec![C64::new(1.0, 0.0); 32]),
            Err(Error::NotNormalized(_))
        ));
        assert!(matches!(
            StateVector::new(5, vec![C64::new(1.0, 0.0); 16]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            make_fock_state(&SpinConfig::dead(25).unwrap()),
            Err(Error::LatticeTooLarge { .. })
        ));
    }

    #[test]
    fn distinct_fock_states_are_orthonormal() {
        for i in 0..32u64 {
            let a = make_fock_state(&SpinConfig::from_index(5, i).unwrap()).unwrap();
            for j in 0..32u64 {
                let b = make_fock_state(&SpinConfig::from_index(5, j).unwrap()).unwrap();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert_eq!(a.overlap(&b).unwrap().re, expected);
            }
        }
    }

    proptest! {
        #[test]
        fn index_decoding_is_inverse(len in 5usize..=20, raw in any::<u64>()) {
            let index = raw & full_mask(len);
            let c = SpinConfig::from_index(len, index).unwrap();
            prop_assert_eq!(c.fock_index(), index);
            let bits = c.to_bits();
            let from_bits = SpinConfig::from_bits(&bits).unwrap();
            prop_assert_eq!(from_bits, c);
            let expanded: u64 = bits.iter().enumerate().map(|(j, &b)| (b as u64) << j).sum();
            prop_assert_eq!(expanded, index);
        }

        #[test]
        fn cauchy_schwarz(re in prop::collection::vec(-1.0f64..1.0, 64),
                          im in prop::collection::vec(-1.0f64..1.0, 64)) {
            let a: Vec<C64> = re[..32].iter().zip(&im[..32]).map(|(&r, &i)| C64::new(r, i)).collect();
            let b: Vec<C64> = re[32..].iter().zip(&im[32..]).map(|(&r, &i)| C64::new(r, i)).collect();
            let ov = overlap(&a, &b).unwrap().norm();
            prop_assert!(ov <= norm(&a) * norm(&b) + 1e-12);
        }
    }
}
