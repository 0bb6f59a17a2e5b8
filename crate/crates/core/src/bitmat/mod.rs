//! Exact linear algebra over GF(2) and the integers.
//!
//! [`BinMatrix`] stores rows as packed `u64` words (row-major). Arithmetic is
//! mod 2 unless a method says otherwise: [`BinMatrix::int_vec_mul`] treats the
//! entries as 0/1 integers, and the [`exact`] solvers work over the rationals.

mod circulant;
mod companion;
pub mod exact;
mod poly;

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub use circulant::Circulant;
pub use companion::{companion_power_mod2, matrix_order, CompanionMatrix};
pub use exact::{exact_integer_inverse_apply, integer_determinant, TwoAdicSolver};
pub use poly::Gf2Poly;

use crate::{Error, Result};

pub(crate) const WORD: usize = 64;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// Iterate the indices of the set bits in a packed word slice.
pub(crate) fn set_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        core::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + tz)
            }
        })
    })
}

/// Pack a slice of 0/1 values into words.
pub fn pack_bits(bits: &[u8]) -> Vec<u64> {
    let mut out = vec![0u64; words_for(bits.len())];
    for (i, &b) in bits.iter().enumerate() {
        if b & 1 == 1 {
            out[i / WORD] |= 1 << (i % WORD);
        }
    }
    out
}

/// Unpack `len` bits from packed words into 0/1 values.
pub fn unpack_bits(words: &[u64], len: usize) -> Vec<u8> {
    (0..len).map(|i| ((words[i / WORD] >> (i % WORD)) & 1) as u8).collect()
}

/// A dense binary matrix with bit-packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BinMatrix {
    /// All-zero `rows × cols` matrix. Empty shapes are rejected.
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        let stride = words_for(cols);
        Ok(Self {
            rows,
            cols,
            stride,
            words: vec![0; rows * stride],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.set(i, i, true);
        }
        Ok(m)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let mut m = Self::zeros(rows, cols)?;
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        Ok(m)
    }

    /// Build from rows of 0/1 values; all rows must have the same length.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols)?;
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, v & 1 == 1);
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.words[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.words[r * self.stride + c / WORD];
        let mask = 1u64 << (c % WORD);
        if v {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u64] {
        &self.words[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub(crate) fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.words[r * self.stride..(r + 1) * self.stride]
    }

    /// Overwrite row `r` with packed words (extra high bits must be zero).
    pub fn set_row(&mut self, r: usize, words: &[u64]) {
        let stride = self.stride;
        self.row_mut(r).copy_from_slice(&words[..stride]);
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn col_weight(&self, c: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, c)).count()
    }

    /// Column indices of the ones in row `r`.
    pub fn row_support(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        set_bits(self.row(r))
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let s = self.stride;
        let (a, b) = if src < dst {
            let (lo, hi) = self.words.split_at_mut(dst * s);
            (&lo[src * s..(src + 1) * s], &mut hi[..s])
        } else {
            let (lo, hi) = self.words.split_at_mut(src * s);
            (&hi[..s], &mut lo[dst * s..(dst + 1) * s])
        };
        for (d, w) in b.iter_mut().zip(a) {
            *d ^= w;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        for i in 0..s {
            self.words.swap(a * s + i, b * s + i);
        }
    }

    /// Matrix product mod 2.
    pub fn mul(&self, other: &BinMatrix) -> Result<BinMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = BinMatrix::zeros(self.rows, other.cols)?;
        for r in 0..self.rows {
            let dst = r * out.stride;
            for k in set_bits(self.row(r)) {
                for (d, w) in out.words[dst..dst + out.stride].iter_mut().zip(other.row(k)) {
                    *d ^= w;
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix mod 2; `x` holds `rows` packed bits.
    pub fn vec_mul(&self, x: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.stride];
        for k in set_bits(x) {
            if k >= self.rows {
                break;
            }
            for (d, w) in out.iter_mut().zip(self.row(k)) {
                *d ^= w;
            }
        }
        out
    }

    /// Matrix times column vector mod 2 (the syndrome `M·x^T`); `x` holds
    /// `cols` packed bits. Returns `rows` packed bits.
    pub fn mul_vec(&self, x: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; words_for(self.rows)];
        for r in 0..self.rows {
            let parity = self
                .row(r)
                .iter()
                .zip(x)
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
                & 1;
            if parity == 1 {
                out[r / WORD] |= 1 << (r % WORD);
            }
        }
        out
    }

    /// Row vector times matrix over the integers, entries read as 0/1.
    pub fn int_vec_mul(&self, x: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.cols];
        for (r, &xr) in x.iter().enumerate().take(self.rows) {
            if xr == 0 {
                continue;
            }
            for c in set_bits(self.row(r)) {
                out[c] += xr;
            }
        }
        out
    }

    pub fn transpose(&self) -> BinMatrix {
        let mut t = BinMatrix::zeros(self.cols, self.rows).expect("non-empty");
        for r in 0..self.rows {
            for c in set_bits(self.row(r)) {
                t.set(c, r, true);
            }
        }
        t
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                self.row(r)
                    .iter()
                    .enumerate()
                    .all(|(wi, &w)| w == if wi == r / WORD { 1u64 << (r % WORD) } else { 0 })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Rank over GF(2).
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..m.rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.swap_rows(p, rank);
            for r in 0..m.rows {
                if r != rank && m.get(r, c) {
                    m.xor_row_into(rank, r);
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }

    /// Inverse over GF(2) by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<BinMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = BinMatrix::identity(n)?;
        for c in 0..n {
            let p = (c..n).find(|&r| a.get(r, c)).ok_or(Error::Singular)?;
            a.swap_rows(p, c);
            inv.swap_rows(p, c);
            for r in 0..n {
                if r != c && a.get(r, c) {
                    a.xor_row_into(c, r);
                    inv.xor_row_into(c, r);
                }
            }
        }
        Ok(inv)
    }

    /// `self^e` mod 2 by square-and-multiply.
    pub fn pow(&self, mut e: u128) -> Result<BinMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let mut result = BinMatrix::identity(self.rows)?;
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }
}

impl fmt::Debug for BinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows.min(32) {
            for c in 0..self.cols.min(64) {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> BinMatrix {
        BinMatrix::from_fn(r, c, |_, _| rng.random::<bool>()).unwrap()
    }

    fn naive_mul(a: &BinMatrix, b: &BinMatrix) -> BinMatrix {
        BinMatrix::from_fn(a.rows(), b.cols(), |i, j| {
            (0..a.cols()).filter(|&k| a.get(i, k) && b.get(k, j)).count() % 2 == 1
        })
        .unwrap()
    }

    #[test]
    fn empty_shapes_rejected() {
        assert_eq!(BinMatrix::zeros(0, 0), Err(Error::EmptyMatrix));
        assert_eq!(BinMatrix::zeros(3, 0), Err(Error::EmptyMatrix));
    }

    #[test]
    fn product_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for &(r, k, c) in &[(3, 5, 7), (64, 65, 70), (130, 20, 129)] {
            let a = random_matrix(&mut rng, r, k);
            let b = random_matrix(&mut rng, k, c);
            assert_eq!(a.mul(&b).unwrap(), naive_mul(&a, &b));
        }
    }

    #[test]
    fn inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut found = 0;
        while found < 10 {
            let a = random_matrix(&mut rng, 70, 70);
            match a.inverse() {
                Ok(inv) => {
                    assert!(a.mul(&inv).unwrap().is_identity());
                    assert!(inv.mul(&a).unwrap().is_identity());
                    assert_eq!(a.rank(), 70);
                    found += 1;
                }
                Err(e) => {
                    assert_eq!(e, Error::Singular);
                    assert!(a.rank() < 70);
                }
            }
        }
    }

    #[test]
    fn vector_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_matrix(&mut rng, 67, 90);
        let x: Vec<u8> = (0..67).map(|_| rng.random_range(0..2)).collect();
        let xm = unpack_bits(&m.vec_mul(&pack_bits(&x)), 90);
        let xi: Vec<i64> = x.iter().map(|&b| b as i64).collect();
        let int = m.int_vec_mul(&xi);
        for c in 0..90 {
            assert_eq!(xm[c] as i64, int[c] & 1);
        }
        let y: Vec<u8> = (0..90).map(|_| rng.random_range(0..2)).collect();
        let s = unpack_bits(&m.mul_vec(&pack_bits(&y)), 67);
        for r in 0..67 {
            let expect = (0..90).filter(|&c| m.get(r, c) && y[c] == 1).count() % 2;
            assert_eq!(s[r] as usize, expect);
        }
    }

    #[test]
    fn transpose_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let m = random_matrix(&mut rng, 33, 77);
        assert_eq!(m.transpose().transpose(), m);
        assert_eq!(m.transpose().get(5, 7), m.get(7, 5));
    }
}
