use alloc::vec;
use alloc::vec::Vec;

use super::BinMatrix;
use crate::{Error, Result};

/// A `b × b` binary circulant given by the support of its first row.
///
/// Row `i` is row 0 cyclically shifted right by `i`, so entry `(r, c)` is one
/// exactly when `(c - r) mod b` is in the support.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Circulant {
    size: usize,
    support: Vec<usize>,
}

impl Circulant {
    /// Support indices must be strictly increasing and below `size`.
    pub fn new(size: usize, support: Vec<usize>) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyMatrix);
        }
        if support.windows(2).any(|w| w[0] >= w[1]) || support.iter().any(|&s| s >= size) {
            return Err(Error::InvalidSupport);
        }
        Ok(Self { size, support })
    }

    pub fn identity(size: usize) -> Result<Self> {
        Self::new(size, vec![0])
    }

    /// The cyclic shift moving column `c` to `c + k`.
    pub fn shift(size: usize, k: usize) -> Result<Self> {
        Self::new(size, vec![k % size.max(1)])
    }

    fn from_first_row(size: usize, row: &[bool]) -> Self {
        let support = row.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect();
        Self { size, support }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn weight(&self) -> usize {
        self.support.len()
    }

    pub fn to_matrix(&self) -> BinMatrix {
        let b = self.size;
        let mut m = BinMatrix::zeros(b, b).expect("non-empty");
        for r in 0..b {
            for &s in &self.support {
                m.set(r, (s + r) % b, true);
            }
        }
        m
    }

    /// Product mod 2; circulants of equal size commute.
    pub fn mul(&self, other: &Circulant) -> Result<Circulant> {
        if self.size != other.size {
            return Err(Error::DimensionMismatch {
                expected: self.size,
                got: other.size,
            });
        }
        let b = self.size;
        let mut row = vec![false; b];
        for &s in &self.support {
            for &t in &other.support {
                row[(s + t) % b] ^= true;
            }
        }
        Ok(Self::from_first_row(b, &row))
    }

    pub fn transpose(&self) -> Circulant {
        let b = self.size;
        let mut support: Vec<usize> = self.support.iter().map(|&s| (b - s) % b).collect();
        support.sort_unstable();
        Self { size: b, support }
    }

    /// Inverse over GF(2); the inverse of a circulant is circulant, so only
    /// the first row of the dense inverse is kept.
    pub fn inverse(&self) -> Result<Circulant> {
        let inv = self
            .to_matrix()
            .inverse()
            .map_err(|_| Error::SingularCirculant)?;
        let row: Vec<bool> = (0..self.size).map(|c| inv.get(0, c)).collect();
        Ok(Self::from_first_row(self.size, &row))
    }
}
