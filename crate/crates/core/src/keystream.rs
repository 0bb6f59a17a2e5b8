//! LFSR key-schedule material.
//!
//! LFSR states are polynomials of degree below `l` and a step multiplies by
//! `x` modulo the feedback polynomial, which makes jumping ahead a modular
//! exponentiation. The output bit of a step is the coefficient of `x^{l-1}`
//! before the step.
//!
//! [`ReseedingLfsr`] pairs a main register (polynomial `q`) with a reseed
//! register (polynomial `p`). Both start from the seed; after every
//! `2^l - 1` outputs the reseed register advances once and its state is
//! loaded into the main register, so the joint state runs through
//! `(2^l - 1)^2` values.

use alloc::vec;
use alloc::vec::Vec;

use crate::bitmat::{BinMatrix, Gf2Poly};
use crate::{Error, Result};

fn poly_from_bits(bits: &[u8]) -> Gf2Poly {
    Gf2Poly::from_coeffs(&bits.iter().map(|&b| b == 1).collect::<Vec<_>>())
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReseedingLfsr {
    len: usize,
    q: Gf2Poly,
    p: Gf2Poly,
    seed: Gf2Poly,
    main: Gf2Poly,
    reseed: Gf2Poly,
    offset: u128,
}

impl ReseedingLfsr {
    /// `seed` holds `l` bits, coefficient `i` first; it must not be all zero.
    pub fn new(q: Gf2Poly, p: Gf2Poly, seed: &[u8]) -> Result<Self> {
        let len = q.degree().ok_or(Error::InvalidPolynomial)?;
        if len == 0 || p.degree() != Some(len) || !q.coeff(0) || !p.coeff(0) {
            return Err(Error::InvalidPolynomial);
        }
        if seed.len() != len {
            return Err(Error::DimensionMismatch {
                expected: len,
                got: seed.len(),
            });
        }
        let seed = poly_from_bits(seed);
        if seed.is_zero() {
            return Err(Error::ZeroSeedSlice { index: 0 });
        }
        Ok(Self {
            len,
            q,
            p,
            main: seed.clone(),
            reseed: seed.clone(),
            seed,
            offset: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Outputs between reseeds, `2^l - 1`.
    pub fn epoch(&self) -> u128 {
        (1u128 << self.len) - 1
    }

    /// Period of the joint state, `(2^l - 1)^2` (saturating).
    pub fn period(&self) -> u128 {
        self.epoch().saturating_mul(self.epoch())
    }

    /// `(main, reseed, offset)`, for cycle detection.
    pub fn joint_state(&self) -> (Gf2Poly, Gf2Poly, u128) {
        (self.main.clone(), self.reseed.clone(), self.offset)
    }

    pub fn next_bit(&mut self) -> u8 {
        let out = self.main.coeff(self.len - 1) as u8;
        self.main = self.main.mul_x_mod(&self.q);
        self.offset += 1;
        if self.offset == self.epoch() {
            self.reseed = self.reseed.mul_x_mod(&self.p);
            self.main = self.reseed.clone();
            self.offset = 0;
        }
        out
    }

    pub fn next_bits(&mut self, n: usize) -> Vec<u8> {
        (0..n).map(|_| self.next_bit()).collect()
    }

    /// Put the generator where it would be after `pos` outputs from the seed.
    pub fn seek(&mut self, pos: u128) {
        let epoch = self.epoch();
        let (e, off) = (pos / epoch, pos % epoch);
        self.reseed = self.seed.mul_mod(&Gf2Poly::x_pow_mod(e, &self.p), &self.p);
        self.main = self.reseed.mul_mod(&Gf2Poly::x_pow_mod(off, &self.q), &self.q);
        self.offset = off;
    }

    /// The `n` bits starting at stream position `pos`.
    pub fn bits_at(&mut self, pos: u128, n: usize) -> Vec<u8> {
        self.seek(pos);
        self.next_bits(n)
    }
}

/// Bits needed to index `q` values, `⌈log2 q⌉`.
pub fn index_bits(q: usize) -> usize {
    if q <= 1 {
        0
    } else {
        (usize::BITS - (q - 1).leading_zeros()) as usize
    }
}

/// A permutation of `0..q` read off a `γ`-bit LFSR (`γ = ⌈log2 q⌉`) started
/// at `state`: each visited state `s` proposes `s - 1`, values `≥ q` are
/// skipped, and when `q = 2^γ` the value `q - 1` (never proposed) goes last.
pub fn lfsr_permutation(q: usize, poly: &Gf2Poly, state: u64) -> Result<Vec<usize>> {
    if q <= 1 {
        return Ok((0..q).collect());
    }
    let gamma = index_bits(q);
    if poly.degree() != Some(gamma) || gamma > 63 {
        return Err(Error::InvalidPolynomial);
    }
    if state == 0 || state >> gamma != 0 {
        return Err(Error::ZeroSeedSlice { index: 0 });
    }
    let mask = (1u64 << gamma) - 1;
    let feedback = poly.low_word() & mask;
    let mut seen = vec![false; q];
    let mut out = Vec::with_capacity(q);
    let mut s = state;
    for _ in 0..mask {
        let v = (s - 1) as usize;
        if v < q && !seen[v] {
            seen[v] = true;
            out.push(v);
        }
        let carry = (s >> (gamma - 1)) & 1;
        s = (s << 1) & mask;
        if carry == 1 {
            s ^= feedback;
        }
    }
    if out.len() + 1 == q && !seen[q - 1] {
        out.push(q - 1);
    }
    debug_assert_eq!(out.len(), q);
    Ok(out)
}

/// Block-diagonal permutation with `v` blocks of size `q`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BlockPermutation {
    q: usize,
    perms: Vec<Vec<usize>>,
}

impl BlockPermutation {
    /// Each block must be a bijection of `0..q`.
    pub fn from_perms(q: usize, perms: Vec<Vec<usize>>) -> Result<Self> {
        for p in &perms {
            let mut seen = vec![false; q];
            if p.len() != q || p.iter().any(|&i| i >= q || core::mem::replace(&mut seen[i], true)) {
                return Err(Error::InvalidParams("block is not a permutation"));
            }
        }
        Ok(Self { q, perms })
    }

    pub fn identity(q: usize, v: usize) -> Self {
        Self {
            q,
            perms: vec![(0..q).collect(); v],
        }
    }

    pub fn block_size(&self) -> usize {
        self.q
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.perms
    }

    pub fn len(&self) -> usize {
        self.q * self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got,
            });
        }
        Ok(())
    }

    /// `y = xP`: `y[b·q + j] = x[b·q + π_b(j)]`.
    pub fn apply<T: Copy>(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_len(x.len())?;
        let q = self.q;
        Ok(self
            .perms
            .iter()
            .enumerate()
            .flat_map(|(b, p)| p.iter().map(move |&j| x[b * q + j]))
            .collect())
    }

    /// `x = yP^T`, the inverse of [`apply`](Self::apply).
    pub fn apply_inverse<T: Copy>(&self, y: &[T]) -> Result<Vec<T>> {
        self.check_len(y.len())?;
        let q = self.q;
        let mut x = y.to_vec();
        for (b, p) in self.perms.iter().enumerate() {
            for (j, &src) in p.iter().enumerate() {
                x[b * q + src] = y[b * q + j];
            }
        }
        Ok(x)
    }

    /// The 0/1 matrix `P` with `xP = apply(x)`.
    pub fn to_matrix(&self) -> BinMatrix {
        let n = self.len();
        let mut m = BinMatrix::zeros(n.max(1), n.max(1)).expect("non-empty");
        for (b, p) in self.perms.iter().enumerate() {
            for (j, &src) in p.iter().enumerate() {
                m.set(b * self.q + src, b * self.q + j, true);
            }
        }
        m
    }
}

/// Split `t` into `v` little-endian slices of `⌈log2 q⌉` bits, rejecting
/// zero slices.
pub fn seed_slices(t: &[u8], q: usize, v: usize) -> Result<Vec<u64>> {
    let gamma = index_bits(q);
    if t.len() != v * gamma {
        return Err(Error::DimensionMismatch {
            expected: v * gamma,
            got: t.len(),
        });
    }
    if gamma == 0 {
        return Ok(vec![0; v]);
    }
    t.chunks(gamma)
        .enumerate()
        .map(|(index, chunk)| {
            let s = chunk.iter().rev().fold(0u64, |acc, &b| (acc << 1) | (b & 1) as u64);
            if s == 0 {
                Err(Error::ZeroSeedSlice { index })
            } else {
                Ok(s)
            }
        })
        .collect()
}

/// Permutation for frame `j`: block `i` starts its LFSR at `slice_i·x^j`.
pub fn build_block_permutation_at(t: &[u8], q: usize, v: usize, poly: &Gf2Poly, frame: u64) -> Result<BlockPermutation> {
    let slices = seed_slices(t, q, v)?;
    if q <= 1 {
        return Ok(BlockPermutation::identity(q, v));
    }
    let step = Gf2Poly::x_pow_mod(frame as u128, poly);
    let perms = slices
        .iter()
        .map(|&s| {
            let state = Gf2Poly::from_u64(s).mul_mod(&step, poly).low_word();
            lfsr_permutation(q, poly, state)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BlockPermutation { q, perms })
}

pub fn build_block_permutation(t: &[u8], q: usize, v: usize, poly: &Gf2Poly) -> Result<BlockPermutation> {
    build_block_permutation_at(t, q, v, poly, 0)
}
