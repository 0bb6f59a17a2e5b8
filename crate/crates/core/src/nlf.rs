//! The multiplexed companion-power map `F(a, h) = a·U^α`, `α = Σ h_i 2^i`.
//!
//! `U^α` is the binary matrix whose row `i` is `x^{i+α} mod g`; it is applied
//! to integer vectors with 0/1 integer entries. The multiplexer is realized as
//! `d` stages holding `x^{2^i} mod g`, and a control vector selects which
//! stages are multiplied together. `F' = F mod 2` is the Boolean view used by
//! the algebraic-degree and derivative tooling.

use alloc::vec;
use alloc::vec::Vec;

use crate::bitmat::{pack_bits, set_bits, unpack_bits, BinMatrix, CompanionMatrix, Gf2Poly, TwoAdicSolver};
use crate::{Error, Result};

/// Largest `n + d` accepted by the exhaustive Boolean tooling.
pub const ANF_LIMIT: usize = 24;

/// The control line `h` of the multiplexer, least significant bit first.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ControlVector {
    bits: Vec<bool>,
}

impl ControlVector {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// The low `d` bits of `alpha`.
    pub fn from_alpha(alpha: u128, d: usize) -> Self {
        Self {
            bits: (0..d).map(|i| i < 128 && (alpha >> i) & 1 == 1).collect(),
        }
    }

    pub fn zero(d: usize) -> Self {
        Self::from_bits(vec![false; d])
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// `α = Σ h_i 2^i`; `None` when it does not fit in 128 bits.
    pub fn alpha(&self) -> Option<u128> {
        self.bits.iter().enumerate().try_fold(0u128, |acc, (i, &b)| {
            if !b {
                Some(acc)
            } else if i < 128 {
                Some(acc | 1 << i)
            } else {
                None
            }
        })
    }
}

#[derive(Clone, Debug)]
pub struct NlfContext {
    u: CompanionMatrix,
    d: usize,
    stages: Vec<Gf2Poly>,
}

impl NlfContext {
    pub fn new(u: CompanionMatrix, d: usize) -> Self {
        let g = u.poly().clone();
        let mut stages = Vec::with_capacity(d);
        let mut cur = Gf2Poly::monomial(1).rem(&g);
        for _ in 0..d {
            let next = cur.mul_mod(&cur, &g);
            stages.push(cur);
            cur = next;
        }
        Self { u, d, stages }
    }

    pub fn degree(&self) -> usize {
        self.u.degree()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn companion(&self) -> &CompanionMatrix {
        &self.u
    }

    /// Stage `i` as the matrix `U^{2^i}`.
    pub fn stage_matrix(&self, i: usize) -> BinMatrix {
        self.u.multiplication_matrix(&self.stages[i])
    }

    fn check_control(&self, h: &ControlVector) -> Result<()> {
        if h.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: h.len(),
            });
        }
        Ok(())
    }

    fn check_vector(&self, len: usize) -> Result<()> {
        if len != self.degree() {
            return Err(Error::DimensionMismatch {
                expected: self.degree(),
                got: len,
            });
        }
        Ok(())
    }

    /// `x^α mod g`, the product of the selected stages.
    pub fn power_poly(&self, h: &ControlVector) -> Result<Gf2Poly> {
        self.check_control(h)?;
        let g = self.u.poly();
        Ok(h.bits()
            .iter()
            .zip(&self.stages)
            .filter(|(&bit, _)| bit)
            .fold(Gf2Poly::one().rem(g), |acc, (_, s)| acc.mul_mod(s, g)))
    }

    /// The binary matrix `U^α`.
    pub fn power_matrix(&self, h: &ControlVector) -> Result<BinMatrix> {
        Ok(self.u.multiplication_matrix(&self.power_poly(h)?))
    }

    /// `F(a, h) = a·U^α` over the integers.
    pub fn apply_f(&self, a: &[i64], h: &ControlVector) -> Result<Vec<i64>> {
        self.check_vector(a.len())?;
        Ok(self.power_matrix(h)?.int_vec_mul(a))
    }

    /// `F'(a, h) = a·U^α mod 2` on bit vectors.
    pub fn apply_f_mod2(&self, a: &[u8], h: &ControlVector) -> Result<Vec<u8>> {
        self.check_vector(a.len())?;
        let m = self.power_matrix(h)?;
        Ok(unpack_bits(&m.vec_mul(&pack_bits(a)), self.degree()))
    }

    /// An exact solver for `v·U^α = x`, seeded with the GF(2) inverse
    /// `(x^α)^{-1} mod g`.
    pub fn inverter(&self, h: &ControlVector) -> Result<TwoAdicSolver> {
        let p = self.power_poly(h)?;
        let inv = p.inverse_mod(self.u.poly()).ok_or(Error::Singular)?;
        Ok(TwoAdicSolver::with_inverse(
            self.u.multiplication_matrix(&p),
            self.u.multiplication_matrix(&inv),
        ))
    }

    /// The integer `m'` with `F(m', h) = x`, or [`Error::NotInLattice`].
    pub fn invert_f(&self, x: &[i64], h: &ControlVector) -> Result<Vec<i64>> {
        self.check_vector(x.len())?;
        self.inverter(h)?.solve(x)
    }

    /// Output words of `F'` for every input `a | (h << n)`, bit `i` of each
    /// word being component `i`.
    fn truth_table(&self) -> Result<Vec<u64>> {
        let n = self.degree();
        if n + self.d > ANF_LIMIT {
            return Err(Error::TooLarge);
        }
        let mut table = vec![0u64; 1 << (n + self.d)];
        for hv in 0..1u128 << self.d {
            let m = self.power_matrix(&ControlVector::from_alpha(hv, self.d))?;
            let rows: Vec<u64> = (0..n).map(|r| m.row(r)[0]).collect();
            let base = (hv as usize) << n;
            for a in 0..1usize << n {
                table[base | a] = set_bits(&[a as u64]).fold(0, |acc, r| acc ^ rows[r]);
            }
        }
        Ok(table)
    }

    /// Algebraic degree of component `i` of `F'` as a function of `(a, h)`.
    pub fn component_anf_degree(&self, i: usize) -> Result<usize> {
        if i >= self.degree() {
            return Err(Error::DimensionMismatch {
                expected: self.degree(),
                got: i,
            });
        }
        self.combination_anf_degree(1 << i)
    }

    /// Algebraic degree of the XOR of the components selected by `mask`.
    pub fn combination_anf_degree(&self, mask: u64) -> Result<usize> {
        let table = self.truth_table()?;
        let f: Vec<u8> = table.iter().map(|&w| ((w & mask).count_ones() & 1) as u8).collect();
        Ok(anf_degree(&f))
    }

    /// `Σ_{c ∈ span(directions)} F'(base + c, h)` with the directions taken
    /// among the coordinates of `a`.
    pub fn higher_derivative(&self, directions: &[usize], base: &[u8], h: &ControlVector) -> Result<Vec<u8>> {
        self.check_vector(base.len())?;
        let n = self.degree();
        if directions.iter().any(|&d| d >= n) {
            return Err(Error::InvalidParams("direction outside the message coordinates"));
        }
        let mut joint = base.to_vec();
        joint.extend(h.bits().iter().map(|&b| b as u8));
        self.joint_derivative(directions, &joint)
    }

    /// Derivative of `F'` viewed as a function of the `n + d` joint input
    /// bits `(a, h)`; directions index that joint vector.
    pub fn joint_derivative(&self, directions: &[usize], base: &[u8]) -> Result<Vec<u8>> {
        let (n, d) = (self.degree(), self.d);
        if base.len() != n + d {
            return Err(Error::DimensionMismatch {
                expected: n + d,
                got: base.len(),
            });
        }
        if directions.len() >= 64 || directions.iter().any(|&x| x >= n + d) {
            return Err(Error::TooLarge);
        }
        let mut acc = vec![0u8; n];
        for subset in 0..1u64 << directions.len() {
            let mut point = base.to_vec();
            for (j, &dir) in directions.iter().enumerate() {
                if (subset >> j) & 1 == 1 {
                    point[dir] ^= 1;
                }
            }
            let h = ControlVector::from_bits(point[n..].iter().map(|&b| b == 1).collect());
            for (o, v) in acc.iter_mut().zip(self.apply_f_mod2(&point[..n], &h)?) {
                *o ^= v;
            }
        }
        Ok(acc)
    }
}

/// Algebraic degree of a Boolean function given by its truth table (length a
/// power of two), via the binary Möbius transform. The zero function has
/// degree zero.
pub fn anf_degree(truth_table: &[u8]) -> usize {
    let mut f = truth_table.to_vec();
    let len = f.len();
    debug_assert!(len.is_power_of_two());
    let mut step = 1;
    while step < len {
        for start in (0..len).step_by(2 * step) {
            for i in start..start + step {
                f[i + step] ^= f[i];
            }
        }
        step <<= 1;
    }
    f.iter()
        .enumerate()
        .filter(|(_, &c)| c == 1)
        .map(|(i, _)| i.count_ones() as usize)
        .max()
        .unwrap_or(0)
}
