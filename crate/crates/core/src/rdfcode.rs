//! Random-difference-family QC-LDPC codes.
//!
//! The parity-check matrix is a single row of `n0` circulant blocks
//! `H = [H_0 | H_1 | … | H_{n0-1}]`, each of size `b` and column weight `dv`.
//! Two columns of `H` share two rows exactly when some cyclic difference
//! `s - s' (mod b)` of the first-row supports repeats, so a family whose
//! differences are all distinct gives a Tanner graph without 4-cycles.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::binomial;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bitmat::{BinMatrix, Circulant, Gf2Poly};
use crate::{Error, Result};

/// A QC-LDPC code given by the first-row supports of its circulant blocks.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QcCode {
    b: usize,
    n0: usize,
    dv: usize,
    supports: Vec<Vec<usize>>,
}

impl QcCode {
    /// Check the shape of the supports: `n0` blocks of `dv` strictly
    /// increasing indices below `b`. Girth and invertibility are not checked.
    pub fn new(b: usize, n0: usize, dv: usize, supports: Vec<Vec<usize>>) -> Result<Self> {
        if b == 0 || n0 < 2 || dv == 0 || dv > b {
            return Err(Error::InvalidParams("need b >= 1, n0 >= 2 and 1 <= dv <= b"));
        }
        if supports.len() != n0 {
            return Err(Error::DimensionMismatch {
                expected: n0,
                got: supports.len(),
            });
        }
        for s in &supports {
            if s.len() != dv {
                return Err(Error::InvalidSupport);
            }
            Circulant::new(b, s.clone())?;
        }
        Ok(Self { b, n0, dv, supports })
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn dv(&self) -> usize {
        self.dv
    }

    pub fn supports(&self) -> &[Vec<usize>] {
        &self.supports
    }

    pub fn n(&self) -> usize {
        self.b * self.n0
    }

    pub fn k(&self) -> usize {
        self.b * (self.n0 - 1)
    }

    /// Row weight `d_c = n0·dv` of `H`.
    pub fn dc(&self) -> usize {
        self.n0 * self.dv
    }

    pub fn block(&self, i: usize) -> Circulant {
        Circulant::new(self.b, self.supports[i].clone()).expect("validated at construction")
    }

    /// The `b × n` matrix `H`.
    pub fn parity_check(&self) -> BinMatrix {
        let b = self.b;
        let mut h = BinMatrix::zeros(b, self.n()).expect("non-empty");
        for (i, support) in self.supports.iter().enumerate() {
            for r in 0..b {
                for &s in support {
                    h.set(r, i * b + (r + s) % b, true);
                }
            }
        }
        h
    }

    /// Column indices of each check (row of `H`).
    pub fn check_neighbors(&self) -> Vec<Vec<usize>> {
        let b = self.b;
        (0..b)
            .map(|r| {
                let mut cols: Vec<usize> = self
                    .supports
                    .iter()
                    .enumerate()
                    .flat_map(|(i, support)| support.iter().map(move |&s| i * b + (r + s) % b))
                    .collect();
                cols.sort_unstable();
                cols
            })
            .collect()
    }

    /// `H_{n0-1}` is invertible over GF(2) iff its polynomial is coprime to
    /// `x^b + 1`.
    pub fn last_block_invertible(&self) -> bool {
        circulant_invertible(self.b, &self.supports[self.n0 - 1])
    }
}

fn circulant_invertible(b: usize, support: &[usize]) -> bool {
    let mut p = Gf2Poly::zero();
    for &s in support {
        p.flip(s);
    }
    let mut modulus = Gf2Poly::monomial(b);
    modulus.flip(0);
    p.gcd(&modulus) == Gf2Poly::one()
}

/// True iff no two columns of `H` share two or more rows.
pub fn girth_ok(code: &QcCode) -> bool {
    let b = code.b;
    let mut seen = vec![false; b];
    for support in &code.supports {
        for &s in support {
            for &t in support {
                if s == t {
                    continue;
                }
                let d = (s + b - t) % b;
                if seen[d] {
                    return false;
                }
                seen[d] = true;
            }
        }
    }
    true
}

/// Budget for [`rdf_search_with`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SearchConfig {
    /// Attempts at one block before the whole family is restarted.
    pub block_tries: usize,
    pub restarts: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            block_tries: 200,
            restarts: 2000,
        }
    }
}

pub fn rdf_search(b: usize, n0: usize, dv: usize, seed: u64) -> Result<QcCode> {
    rdf_search_with(b, n0, dv, seed, SearchConfig::default())
}

/// Randomized greedy search for a difference family.
///
/// Each block is grown one element at a time from a shuffled candidate list,
/// keeping an element only if all differences it creates are unused. A block
/// that cannot be completed is retried, and the whole family is restarted
/// after `block_tries` failures or when the last block is singular.
pub fn rdf_search_with(
    b: usize,
    n0: usize,
    dv: usize,
    seed: u64,
    cfg: SearchConfig,
) -> Result<QcCode> {
    if dv % 2 == 0 {
        return Err(Error::InvalidParams("dv must be odd"));
    }
    if dv >= b || n0 < 2 {
        return Err(Error::InvalidParams("need dv < b and n0 >= 2"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates: Vec<usize> = (0..b).collect();
    for _ in 0..cfg.restarts {
        let mut used = vec![false; b];
        let mut supports = Vec::with_capacity(n0);
        for _ in 0..n0 {
            let block = (0..cfg.block_tries).find_map(|_| {
                candidates.shuffle(&mut rng);
                grow_block(&candidates, dv, b, &used)
            });
            match block {
                Some(block) => {
                    mark_differences(&block, b, &mut used);
                    supports.push(block);
                }
                None => break,
            }
        }
        if supports.len() == n0 && circulant_invertible(b, &supports[n0 - 1]) {
            return QcCode::new(b, n0, dv, supports);
        }
    }
    Err(Error::SearchExhausted {
        restarts: cfg.restarts,
    })
}

fn grow_block(candidates: &[usize], dv: usize, b: usize, used: &[bool]) -> Option<Vec<usize>> {
    let mut block: Vec<usize> = Vec::with_capacity(dv);
    let mut local = used.to_vec();
    let mut fresh = Vec::with_capacity(2 * dv);
    for &c in candidates {
        if block.len() == dv {
            break;
        }
        fresh.clear();
        let ok = block.iter().all(|&s| {
            let up = (c + b - s) % b;
            let down = (s + b - c) % b;
            if up == down || local[up] || local[down] || fresh.contains(&up) || fresh.contains(&down) {
                return false;
            }
            fresh.push(up);
            fresh.push(down);
            true
        });
        if ok {
            for &d in &fresh {
                local[d] = true;
            }
            block.push(c);
        }
    }
    (block.len() == dv).then(|| {
        block.sort_unstable();
        block
    })
}

fn mark_differences(block: &[usize], b: usize, used: &mut [bool]) {
    for &s in block {
        for &t in block {
            if s != t {
                used[(s + b - t) % b] = true;
            }
        }
    }
}

/// The systematic generator `G_C = [I_k | A]`, where block row `i` of `A` is
/// the circulant `(H_{n0-1}^{-1} H_i)^T`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SystematicGen {
    b: usize,
    blocks: Vec<Circulant>,
    a: BinMatrix,
}

impl SystematicGen {
    pub fn k(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        self.a.rows() + self.a.cols()
    }

    /// The `k × (n-k)` part `A`.
    pub fn a(&self) -> &BinMatrix {
        &self.a
    }

    pub fn a_blocks(&self) -> &[Circulant] {
        &self.blocks
    }

    pub fn to_matrix(&self) -> BinMatrix {
        let (k, n) = (self.k(), self.n());
        BinMatrix::from_fn(k, n, |r, c| if c < k { r == c } else { self.a.get(r, c - k) })
            .expect("non-empty")
    }

    pub fn circulant_size(&self) -> usize {
        self.b
    }
}

pub fn systematic_generator(code: &QcCode) -> Result<SystematicGen> {
    let b = code.b;
    let last = code.block(code.n0 - 1);
    let inv = last.inverse().map_err(|_| Error::SingularBlock)?;
    let blocks: Vec<Circulant> = (0..code.n0 - 1)
        .map(|i| inv.mul(&code.block(i)).map(|c| c.transpose()))
        .collect::<Result<_>>()?;
    let mut a = BinMatrix::zeros(code.k(), b)?;
    for (i, blk) in blocks.iter().enumerate() {
        for r in 0..b {
            for &s in blk.support() {
                a.set(i * b + r, (r + s) % b, true);
            }
        }
    }
    Ok(SystematicGen { b, blocks, a })
}

/// Lower bound on the number of random difference families with parameters
/// `(b, dv, n0)`, floored and clamped at zero:
///
/// `(1/b)·C(b,dv)^{n0}·Π_{l<n0} Π_{j=1}^{dv-1} (b − j(2 − (b mod 2) + (j²−1)/2 + l·dv(dv−1))) / (b − j)`.
///
/// For small `b` the bracketed factors can go negative, in which case the
/// bound carries no information and zero is returned.
pub fn count_rdf_lower_bound(b: usize, dv: usize, n0: usize) -> BigUint {
    if b == 0 || dv == 0 || dv > b {
        return BigUint::zero();
    }
    let big = |v: i128| BigInt::from(v);
    let mut num = BigInt::from(binomial(BigUint::from(b), BigUint::from(dv))).pow(n0 as u32);
    let mut den = big(b as i128);
    let (bi, dvi) = (b as i128, dv as i128);
    for l in 0..n0 as i128 {
        for j in 1..dvi {
            // factor = (2b − j(2(2 − b mod 2) + j² − 1 + 2l·dv(dv−1))) / (2(b − j))
            let inner = 2 * (2 - bi % 2) + j * j - 1 + 2 * l * dvi * (dvi - 1);
            num *= big(2 * bi - j * inner);
            den *= big(2 * (bi - j));
        }
    }
    if num.sign() == Sign::Minus || den.is_zero() {
        return BigUint::zero();
    }
    (num / den).to_biguint().unwrap_or_default()
}

/// `log2` of a big unsigned integer (`-inf` for zero).
pub fn log2_big(v: &BigUint) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.bits();
    let shift = bits.saturating_sub(53);
    let top = v >> shift;
    let mantissa = top
        .iter_u64_digits()
        .next()
        .unwrap_or(0) as f64;
    libm::log2(mantissa) + shift as f64
}

/// Exact number of ordered `n0`-tuples of `dv`-subsets of `Z_b` whose
/// differences are all distinct. Exponential; for tiny parameters only.
pub fn count_rdf_exact(b: usize, dv: usize, n0: usize) -> BigUint {
    let subsets: Vec<Vec<usize>> = subsets_with_distinct_differences(b, dv);
    let mut used = vec![false; b];
    let mut total = BigUint::zero();
    count_rec(&subsets, b, n0, &mut used, &mut total);
    total
}

fn subsets_with_distinct_differences(b: usize, dv: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(dv);
    fn rec(start: usize, b: usize, dv: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == dv {
            let mut seen = vec![false; b];
            let ok = cur.iter().all(|&s| {
                cur.iter().filter(|&&t| t != s).all(|&t| {
                    let d = (s + b - t) % b;
                    !core::mem::replace(&mut seen[d], true)
                })
            });
            if ok {
                out.push(cur.clone());
            }
            return;
        }
        for c in start..b {
            cur.push(c);
            rec(c + 1, b, dv, cur, out);
            cur.pop();
        }
    }
    rec(0, b, dv, &mut cur, &mut out);
    out
}

fn count_rec(subsets: &[Vec<usize>], b: usize, left: usize, used: &mut [bool], total: &mut BigUint) {
    if left == 0 {
        *total += BigUint::one();
        return;
    }
    for s in subsets {
        let diffs: Vec<usize> = s
            .iter()
            .flat_map(|&x| s.iter().filter(move |&&y| y != x).map(move |&y| (x + b - y) % b))
            .collect();
        if diffs.iter().any(|&d| used[d]) {
            continue;
        }
        for &d in &diffs {
            used[d] = true;
        }
        count_rec(subsets, b, left - 1, used, total);
        for &d in &diffs {
            used[d] = false;
        }
    }
}
