//! Shipped primitive polynomials over GF(2).
//!
//! Each entry is `x^n + Σ x^t + 1` stored as its middle exponents `t`. Most
//! degrees carry two distinct polynomials so that a keystream can draw its
//! feedback and reseed polynomials from the same degree.

use crate::bitmat::Gf2Poly;
use crate::{Error, Result};

/// `(degree, [taps of each polynomial])`, sorted by degree.
const TABLE: &[(usize, &[&[usize]])] = &[
    (1, &[&[]]),
    (2, &[&[1]]),
    (3, &[&[1], &[2]]),
    (4, &[&[1], &[3]]),
    (5, &[&[2], &[3]]),
    (6, &[&[1], &[5]]),
    (7, &[&[1], &[3]]),
    (8, &[&[7, 2, 1], &[5, 3, 1]]),
    (9, &[&[4], &[5]]),
    (10, &[&[3], &[7]]),
    (11, &[&[2], &[9]]),
    (12, &[&[8, 2, 1], &[10, 2, 1]]),
    (13, &[&[5, 2, 1], &[11, 2, 1]]),
    (14, &[&[12, 2, 1], &[5, 3, 1]]),
    (15, &[&[1], &[4]]),
    (16, &[&[12, 3, 1], &[6, 4, 1]]),
    (17, &[&[3], &[5]]),
    (18, &[&[7], &[11]]),
    (19, &[&[5, 2, 1], &[6, 2, 1]]),
    (20, &[&[3], &[17]]),
    (21, &[&[2], &[19]]),
    (22, &[&[1], &[21]]),
    (23, &[&[5], &[9]]),
    (24, &[&[7, 2, 1], &[17, 2, 1]]),
    (25, &[&[3], &[7]]),
    (26, &[&[6, 2, 1], &[18, 2, 1]]),
    (27, &[&[5, 2, 1], &[10, 2, 1]]),
    (28, &[&[3], &[9]]),
    (29, &[&[2], &[27]]),
    (30, &[&[23, 2, 1], &[6, 4, 1]]),
    (31, &[&[3], &[6]]),
    (32, &[&[22, 2, 1], &[31, 3, 1]]),
    (33, &[&[13], &[20]]),
    (34, &[&[27, 2, 1], &[30, 2, 1]]),
    (35, &[&[2], &[33]]),
    (36, &[&[11], &[25]]),
    (37, &[&[9, 2, 1], &[18, 2, 1]]),
    (38, &[&[13, 3, 1], &[22, 3, 1]]),
    (39, &[&[4], &[8]]),
    (40, &[&[35, 2, 1], &[9, 3, 1]]),
    (41, &[&[3], &[20]]),
    (42, &[&[29, 2, 1], &[37, 2, 1]]),
    (43, &[&[12, 2, 1], &[26, 2, 1]]),
    (44, &[&[38, 3, 1], &[17, 4, 1]]),
    (45, &[&[4, 3, 1], &[22, 3, 1]]),
    (46, &[&[9, 3, 1], &[17, 3, 1]]),
    (47, &[&[5], &[14]]),
    (48, &[&[28, 3, 1], &[39, 3, 1]]),
    (49, &[&[9], &[12]]),
    (50, &[&[16, 2, 1], &[42, 2, 1]]),
    (51, &[&[28, 2, 1], &[44, 2, 1]]),
    (52, &[&[3], &[19]]),
    (53, &[&[6, 2, 1], &[12, 2, 1]]),
    (54, &[&[17, 2, 1], &[49, 3, 1]]),
    (55, &[&[24], &[31]]),
    (56, &[&[42, 2, 1], &[26, 3, 1]]),
    (57, &[&[7], &[22]]),
    (58, &[&[19], &[39]]),
    (59, &[&[24, 2, 1], &[34, 2, 1]]),
    (60, &[&[1], &[11]]),
    (61, &[&[5, 2, 1], &[29, 2, 1]]),
    (62, &[&[28, 3, 1], &[61, 3, 1]]),
    (63, &[&[1], &[5]]),
    (64, &[&[11, 2, 1], &[4, 3, 1]]),
    (256, &[&[16, 3, 1], &[24, 3, 1]]),
    (258, &[&[83], &[175]]),
];

/// Reference to a table entry.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PolyId {
    pub degree: usize,
    pub index: usize,
}

impl PolyId {
    pub const fn new(degree: usize, index: usize) -> Self {
        Self { degree, index }
    }

    pub fn taps(self) -> Result<&'static [usize]> {
        let entry = TABLE
            .binary_search_by_key(&self.degree, |&(d, _)| d)
            .map_err(|_| Error::UnsupportedDegree(self.degree))?;
        TABLE[entry]
            .1
            .get(self.index)
            .copied()
            .ok_or(Error::UnsupportedDegree(self.degree))
    }

    pub fn poly(self) -> Result<Gf2Poly> {
        Ok(Gf2Poly::from_taps(self.degree, self.taps()?))
    }
}

/// Number of shipped polynomials of a degree.
pub fn count(degree: usize) -> usize {
    TABLE
        .binary_search_by_key(&degree, |&(d, _)| d)
        .map_or(0, |i| TABLE[i].1.len())
}

pub fn primitive_poly(degree: usize, index: usize) -> Result<Gf2Poly> {
    PolyId::new(degree, index).poly()
}

/// All shipped entries in degree order.
pub fn entries() -> impl Iterator<Item = PolyId> {
    TABLE
        .iter()
        .flat_map(|&(d, polys)| (0..polys.len()).map(move |i| PolyId::new(d, i)))
}
