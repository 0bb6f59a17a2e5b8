use crate::keystream::index_bits;
use crate::polytable::PolyId;
use crate::{Error, Result};

/// Scheme parameters: code shape `(b, n0, dv)`, permutation block size `q`,
/// shaping limit `L` and control-line width `d`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct SchemeParams {
    pub b: usize,
    pub n0: usize,
    pub dv: usize,
    pub q: usize,
    pub l: u32,
    pub d: usize,
}

/// `⌈log2 x⌉` for `x ≥ 1`.
pub fn ceil_log2(x: u128) -> u32 {
    if x <= 1 {
        0
    } else {
        128 - (x - 1).leading_zeros()
    }
}

impl SchemeParams {
    /// The worked example: `b = q = 43`, `n0 = 6`, `dv = 3`, `L = 16`,
    /// `d = 61`.
    pub const REFERENCE: SchemeParams = SchemeParams {
        b: 43,
        n0: 6,
        dv: 3,
        q: 43,
        l: 16,
        d: 61,
    };

    pub fn n(&self) -> usize {
        self.b * self.n0
    }

    pub fn k(&self) -> usize {
        self.b * self.n0.saturating_sub(1)
    }

    /// Number of permutation blocks.
    pub fn v(&self) -> usize {
        if self.q == 0 {
            0
        } else {
            self.n() / self.q
        }
    }

    /// Error-vector LFSR length `⌈log2 n⌉`.
    pub fn l1(&self) -> usize {
        ceil_log2(self.n() as u128) as usize
    }

    /// Permutation LFSR length `⌈log2 q⌉`.
    pub fn gamma(&self) -> usize {
        index_bits(self.q)
    }

    /// Bits per message coordinate, `log2 L`.
    pub fn symbol_bits(&self) -> u32 {
        self.l.trailing_zeros()
    }

    /// Everything the cipher needs; see [`Error::InvalidParams`] messages.
    pub fn validate(&self) -> Result<()> {
        if self.dv % 2 == 0 {
            return Err(Error::InvalidParams("dv must be odd"));
        }
        if self.n0 < 2 || self.dv >= self.b {
            return Err(Error::InvalidParams("need n0 >= 2 and dv < b"));
        }
        if self.q != self.b {
            return Err(Error::InvalidParams("permutation blocks must match circulants (q = b)"));
        }
        if self.l < 2 || !self.l.is_power_of_two() {
            return Err(Error::InvalidParams("L must be a power of two, at least 2"));
        }
        if self.n() % 2 != 0 {
            return Err(Error::InvalidParams("n must be even"));
        }
        if self.l1() < 3 {
            return Err(Error::InvalidParams("n must be at least 5"));
        }
        if !(3..=64).contains(&self.d) {
            return Err(Error::InvalidParams("d must lie in 3..=64"));
        }
        if (self.n() as u64).saturating_mul(self.l as u64) > 1 << 40 {
            return Err(Error::InvalidParams("n·L too large"));
        }
        for id in KeyPolys::defaults(self).all() {
            id.taps()?;
        }
        Ok(())
    }
}

/// Table entries used by a key.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct KeyPolys {
    /// Defines the companion matrix `U` (degree `n`).
    pub u: PolyId,
    pub e_main: PolyId,
    pub e_reseed: PolyId,
    pub h_main: PolyId,
    pub h_reseed: PolyId,
    /// Permutation LFSR (degree `⌈log2 q⌉`).
    pub perm: PolyId,
}

impl KeyPolys {
    pub fn defaults(p: &SchemeParams) -> Self {
        let (l1, d, gamma) = (p.l1(), p.d, p.gamma().max(1));
        Self {
            u: PolyId::new(p.n(), 0),
            e_main: PolyId::new(l1, 0),
            e_reseed: PolyId::new(l1, 1),
            h_main: PolyId::new(d, 0),
            h_reseed: PolyId::new(d, 1),
            perm: PolyId::new(gamma, 0),
        }
    }

    pub fn all(&self) -> [PolyId; 6] {
        [self.u, self.e_main, self.e_reseed, self.h_main, self.h_reseed, self.perm]
    }

    /// Check degrees against the parameters and that every entry exists.
    pub fn validate(&self, p: &SchemeParams) -> Result<()> {
        let expect = Self::defaults(p);
        for (got, want) in self.all().iter().zip(expect.all()) {
            if got.degree != want.degree {
                return Err(Error::InvalidParams("polynomial degree does not match parameters"));
            }
            got.taps()?;
        }
        if self.e_main == self.e_reseed || self.h_main == self.h_reseed {
            return Err(Error::InvalidParams("main and reseed polynomials must differ"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_sizes() {
        let p = SchemeParams::REFERENCE;
        assert_eq!((p.n(), p.k(), p.v(), p.l1(), p.gamma(), p.symbol_bits()), (258, 215, 6, 9, 6, 4));
        assert!(p.validate().is_ok());
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(258), 9);
        assert_eq!(ceil_log2(256), 8);
    }

    #[test]
    fn invalid_parameters() {
        let p = SchemeParams::REFERENCE;
        assert!(SchemeParams { dv: 4, ..p }.validate().is_err());
        assert!(SchemeParams { q: 86, ..p }.validate().is_err());
        assert!(SchemeParams { l: 12, ..p }.validate().is_err());
        assert!(SchemeParams { l: 1, ..p }.validate().is_err());
        assert!(SchemeParams { d: 2, ..p }.validate().is_err());
        assert!(SchemeParams { d: 65, ..p }.validate().is_err());
        assert!(SchemeParams { b: 13, q: 13, n0: 3, ..p }.validate().is_err());
        // n = 1496 has no shipped companion polynomial
        let big = SchemeParams { b: 187, q: 187, n0: 8, dv: 5, ..p };
        assert_eq!(big.validate(), Err(Error::UnsupportedDegree(1496)));
    }
}
