//! Exact solves of `v·M = x` for 0/1 matrices `M` that are invertible over
//! the rationals.
//!
//! A binary matrix invertible over GF(2) has an odd integer determinant, so it
//! is also invertible over the 2-adic integers. [`exact_integer_inverse_apply`]
//! is the reference route (fraction-free Gauss-Jordan with big integers);
//! [`TwoAdicSolver`] is the fast route (Hensel lifting from the GF(2) inverse,
//! checked by multiplying back).

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{pack_bits, set_bits, BinMatrix};
use crate::{Error, Result};

/// Fraction-free Gauss-Jordan on `[A | b]`. Returns `(diagonal, rhs, swaps)`
/// where every diagonal entry equals `±det(A)` and `rhs = det·solution`.
fn bareiss(mut a: Vec<Vec<BigInt>>, cols: usize) -> Result<(BigInt, Vec<BigInt>, usize)> {
    let n = a.len();
    let mut prev = BigInt::one();
    let mut swaps = 0;
    for k in 0..n {
        let p = (k..n).find(|&r| !a[r][k].is_zero()).ok_or(Error::Singular)?;
        if p != k {
            a.swap(p, k);
            swaps += 1;
        }
        let pivot_row = a[k].clone();
        let pivot = pivot_row[k].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == k {
                continue;
            }
            let factor = row[k].clone();
            for j in (k + 1)..cols {
                let v = &pivot * &row[j] - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
            if i < k {
                row[i] = &pivot * &row[i] / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = pivot;
    }
    let rhs = if cols > n {
        a.iter().map(|row| row[n].clone()).collect()
    } else {
        Vec::new()
    };
    Ok((prev, rhs, swaps))
}

fn to_big_rows(m: &BinMatrix, transpose: bool) -> Vec<Vec<BigInt>> {
    let n = m.rows();
    (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let bit = if transpose { m.get(c, r) } else { m.get(r, c) };
                    BigInt::from(bit as u8)
                })
                .collect()
        })
        .collect()
}

/// Determinant of a square 0/1 matrix over the integers.
pub fn integer_determinant(m: &BinMatrix) -> BigInt {
    assert_eq!(m.rows(), m.cols(), "square matrix");
    match bareiss(to_big_rows(m, false), m.cols()) {
        Ok((det, _, swaps)) => {
            if swaps % 2 == 1 {
                -det
            } else {
                det
            }
        }
        Err(_) => BigInt::zero(),
    }
}

/// The unique integer `v` with `v·M = x`, by exact fraction-free elimination.
///
/// Fails with [`Error::NotInLattice`] when the rational solution is not
/// integral and [`Error::Singular`] when `M` is not invertible.
pub fn exact_integer_inverse_apply(m: &BinMatrix, x: &[i64]) -> Result<Vec<i64>> {
    let n = m.rows();
    if m.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: m.cols(),
        });
    }
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    // v·M = x  <=>  M^T v^T = x^T
    let mut rows = to_big_rows(m, true);
    for (row, &xi) in rows.iter_mut().zip(x) {
        row.push(BigInt::from(xi));
    }
    let (det, rhs, _) = bareiss(rows, n + 1)?;
    rhs.iter()
        .map(|r| {
            let (q, rem) = r.div_rem(&det);
            if !rem.is_zero() {
                return Err(Error::NotInLattice);
            }
            q.to_i64().ok_or(Error::Overflow)
        })
        .collect()
}

/// Fast exact solver for `v·M = x` with a GF(2)-invertible 0/1 matrix `M`.
#[derive(Clone, Debug)]
pub struct TwoAdicSolver {
    matrix: BinMatrix,
    inverse_mod2: BinMatrix,
}

impl TwoAdicSolver {
    pub fn new(matrix: BinMatrix) -> Result<Self> {
        let inverse_mod2 = matrix.inverse()?;
        Ok(Self::with_inverse(matrix, inverse_mod2))
    }

    /// Use a GF(2) inverse the caller already has.
    pub fn with_inverse(matrix: BinMatrix, inverse_mod2: BinMatrix) -> Self {
        Self {
            matrix,
            inverse_mod2,
        }
    }

    pub fn matrix(&self) -> &BinMatrix {
        &self.matrix
    }

    /// Lift the solution digit by digit modulo `2^64`, read it as signed and
    /// verify it. Solutions outside the `i64` range fall back to the exact
    /// big-integer route.
    pub fn solve(&self, x: &[i64]) -> Result<Vec<i64>> {
        let n = self.matrix.rows();
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x.len(),
            });
        }
        let mut residual: Vec<i64> = x.to_vec();
        let mut acc = vec![0u64; n];
        for bit in 0..64 {
            if residual.iter().all(|&r| r == 0) {
                break;
            }
            let parity: Vec<u8> = residual.iter().map(|&r| (r & 1) as u8).collect();
            let digit = self.inverse_mod2.vec_mul(&pack_bits(&parity));
            for i in set_bits(&digit) {
                acc[i] |= 1 << bit;
                for c in set_bits(self.matrix.row(i)) {
                    residual[c] -= 1;
                }
            }
            for r in residual.iter_mut() {
                debug_assert!(*r & 1 == 0);
                *r >>= 1;
            }
        }
        let candidate: Vec<i64> = acc.iter().map(|&w| w as i64).collect();
        if self.verify(&candidate, x) {
            Ok(candidate)
        } else {
            exact_integer_inverse_apply(&self.matrix, x)
        }
    }

    fn verify(&self, v: &[i64], x: &[i64]) -> bool {
        let mut out = vec![0i128; self.matrix.cols()];
        for (r, &vr) in v.iter().enumerate() {
            if vr != 0 {
                for c in set_bits(self.matrix.row(r)) {
                    out[c] += vr as i128;
                }
            }
        }
        out.iter().zip(x).all(|(&o, &xi)| o == xi as i128)
    }
}
