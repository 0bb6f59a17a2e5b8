use alloc::vec::Vec;

use super::{BinMatrix, Gf2Poly};
use crate::{Error, Result};

/// Companion matrix of a monic `g(x) = x^n + a_{n-1}x^{n-1} + … + a_0` over
/// GF(2) with `a_0 = 1`.
///
/// Rows `0..n-1` are the unit vectors `e_1..e_{n-1}` (ones on the
/// superdiagonal) and the last row is `(a_0, …, a_{n-1})`. With row vectors,
/// `v·U` is multiplication by `x` in `GF(2)[x]/g`, so row `i` of `U^α` holds
/// the coefficients of `x^{i+α} mod g`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CompanionMatrix {
    poly: Gf2Poly,
    degree: usize,
}

impl CompanionMatrix {
    /// From the low coefficients `a_0..a_{n-1}` (the leading one is implied).
    pub fn from_coeffs(low: &[bool]) -> Result<Self> {
        if low.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        let mut coeffs = low.to_vec();
        coeffs.push(true);
        Self::from_poly(Gf2Poly::from_coeffs(&coeffs))
    }

    pub fn from_poly(poly: Gf2Poly) -> Result<Self> {
        let degree = poly.degree().ok_or(Error::InvalidPolynomial)?;
        if degree == 0 {
            return Err(Error::EmptyMatrix);
        }
        if !poly.coeff(0) {
            return Err(Error::InvalidPolynomial);
        }
        Ok(Self { poly, degree })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn poly(&self) -> &Gf2Poly {
        &self.poly
    }

    /// Low coefficients `a_0..a_{n-1}`.
    pub fn coeffs(&self) -> Vec<bool> {
        (0..self.degree).map(|i| self.poly.coeff(i)).collect()
    }

    pub fn to_matrix(&self) -> BinMatrix {
        let n = self.degree;
        let mut m = BinMatrix::zeros(n, n).expect("degree >= 1");
        for r in 0..n - 1 {
            m.set(r, r + 1, true);
        }
        for c in 0..n {
            m.set(n - 1, c, self.poly.coeff(c));
        }
        m
    }

    /// The matrix of `v ↦ v·r(x) mod g`: row `i` is `x^i·r mod g`.
    pub fn multiplication_matrix(&self, r: &Gf2Poly) -> BinMatrix {
        let n = self.degree;
        let mut m = BinMatrix::zeros(n, n).expect("degree >= 1");
        let mut row = r.rem(&self.poly);
        for i in 0..n {
            let words = row.words();
            for (wi, slot) in m.row_mut(i).iter_mut().enumerate() {
                *slot = words.get(wi).copied().unwrap_or(0);
            }
            if i + 1 < n {
                row = row.mul_x_mod(&self.poly);
            }
        }
        m
    }
}

/// `U^alpha` over GF(2) by square-and-multiply on the dense matrix.
pub fn companion_power_mod2(u: &CompanionMatrix, alpha: u128) -> BinMatrix {
    u.to_matrix().pow(alpha).expect("square matrix")
}

/// Least `e ≤ max_order` with `U^e = I`, found by repeated multiplication.
pub fn matrix_order(u: &BinMatrix, max_order: u64) -> Result<Option<u64>> {
    if u.rows() != u.cols() {
        return Err(Error::DimensionMismatch {
            expected: u.rows(),
            got: u.cols(),
        });
    }
    if u.rank() < u.rows() {
        return Err(Error::Singular);
    }
    let mut power = u.clone();
    for e in 1..=max_order {
        if power.is_identity() {
            return Ok(Some(e));
        }
        power = power.mul(u)?;
    }
    Ok(None)
}
