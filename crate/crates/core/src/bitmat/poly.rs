use alloc::vec;
use alloc::vec::Vec;

use super::{set_bits, words_for, WORD};

/// A polynomial over GF(2), coefficient `i` stored as bit `i`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Gf2Poly {
    words: Vec<u64>,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Self { words: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    pub fn monomial(k: usize) -> Self {
        let mut words = vec![0u64; k / WORD + 1];
        words[k / WORD] = 1 << (k % WORD);
        Self { words }
    }

    pub fn from_u64(v: u64) -> Self {
        Self::from_words(vec![v])
    }

    pub fn from_words(words: Vec<u64>) -> Self {
        let mut p = Self { words };
        p.normalize();
        p
    }

    /// `x^degree + Σ x^t + 1` from the middle exponents `taps`.
    pub fn from_taps(degree: usize, taps: &[usize]) -> Self {
        let mut p = Self::monomial(degree);
        p.flip(0);
        for &t in taps {
            p.flip(t);
        }
        p
    }

    /// Build from coefficients `c_0, c_1, …`.
    pub fn from_coeffs(coeffs: &[bool]) -> Self {
        let mut words = vec![0u64; words_for(coeffs.len()).max(1)];
        for (i, &c) in coeffs.iter().enumerate() {
            if c {
                words[i / WORD] |= 1 << (i % WORD);
            }
        }
        Self::from_words(words)
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Low 64 coefficients packed into a word.
    pub fn low_word(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * WORD + (WORD - 1 - last.leading_zeros() as usize))
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / WORD)
            .is_some_and(|w| (w >> (i % WORD)) & 1 == 1)
    }

    pub fn flip(&mut self, i: usize) {
        if i / WORD >= self.words.len() {
            self.words.resize(i / WORD + 1, 0);
        }
        self.words[i / WORD] ^= 1 << (i % WORD);
        self.normalize();
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.words.len().max(other.words.len());
        let words = (0..n)
            .map(|i| self.words.get(i).unwrap_or(&0) ^ other.words.get(i).unwrap_or(&0))
            .collect();
        Self::from_words(words)
    }

    fn shl(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let (ws, bs) = (k / WORD, k % WORD);
        let mut words = vec![0u64; self.words.len() + ws + 1];
        for (i, &w) in self.words.iter().enumerate() {
            words[i + ws] |= w << bs;
            if bs != 0 {
                words[i + ws + 1] |= w >> (WORD - bs);
            }
        }
        Self::from_words(words)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let (a, b) = if self.weight() <= other.weight() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = vec![0u64; a.words.len() + b.words.len() + 1];
        for i in set_bits(&a.words) {
            let (ws, bs) = (i / WORD, i % WORD);
            for (j, &w) in b.words.iter().enumerate() {
                words[j + ws] ^= w << bs;
                if bs != 0 {
                    words[j + ws + 1] ^= w >> (WORD - bs);
                }
            }
        }
        Self::from_words(words)
    }

    /// Quotient and remainder of division by a nonzero `divisor`.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let shift = rd - dd;
            rem = rem.add(&divisor.shl(shift));
            quot.flip(shift);
        }
        (quot, rem)
    }

    pub fn rem(&self, modulus: &Self) -> Self {
        let dm = modulus.degree().expect("zero modulus");
        match self.degree() {
            Some(d) if d >= dm => self.div_rem(modulus).1,
            _ => self.clone(),
        }
    }

    pub fn mul_mod(&self, other: &Self, modulus: &Self) -> Self {
        self.mul(other).rem(modulus)
    }

    /// `self · x mod modulus`, for `deg self < deg modulus`.
    pub fn mul_x_mod(&self, modulus: &Self) -> Self {
        let n = modulus.degree().expect("zero modulus");
        let mut s = self.shl(1);
        if s.coeff(n) {
            s = s.add(modulus);
        }
        s
    }

    pub fn pow_mod(&self, mut e: u128, modulus: &Self) -> Self {
        let mut result = Self::one().rem(modulus);
        let mut base = self.rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_mod(&base, modulus);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(&base, modulus);
            }
        }
        result
    }

    /// `x^e mod modulus`.
    pub fn x_pow_mod(e: u128, modulus: &Self) -> Self {
        Self::monomial(1).pow_mod(e, modulus)
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// Multiplicative inverse modulo `modulus`, if it exists.
    pub fn inverse_mod(&self, modulus: &Self) -> Option<Self> {
        let (mut r0, mut r1) = (modulus.clone(), self.rem(modulus));
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let t = t0.add(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t;
        }
        (r0 == Self::one()).then(|| t0.rem(modulus))
    }
}
