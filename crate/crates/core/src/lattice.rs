//! Construction-A lattices over QC-LDPC codes.
//!
//! With `G_C = [I_k | A]` systematic, the lattice generator is
//!
//! ```text
//! G_Λ = | I_k   A        |
//!       | 0     2I_{n-k} |
//! ```
//!
//! so `λ = x·G_Λ` has `λ_i = x_i` on the first `k` coordinates and
//! `λ_i = 2x_i + Σ_j x_j a_{j,i-k}` on the rest. Points are sent as
//! `2λ - 1`, whose coordinates are `±1 (mod 4)` according to the code bits.

use alloc::vec::Vec;

use crate::decoder::TannerGraph;
use crate::rdfcode::{systematic_generator, QcCode, SystematicGen};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct LatticeCtx {
    code: QcCode,
    gen: SystematicGen,
    limits: Vec<i64>,
    tanner: TannerGraph,
}

/// A shaped information vector and its lattice point.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ShapedPoint {
    pub x_prime: Vec<i64>,
    pub lambda_prime: Vec<i64>,
    pub z: Vec<i64>,
}

/// `num / den` rounded to nearest, ties away from zero (`den > 0`).
pub fn round_div(num: i64, den: i64) -> i64 {
    debug_assert!(den > 0);
    if num >= 0 {
        (2 * num + den) / (2 * den)
    } else {
        -((-2 * num + den) / (2 * den))
    }
}

impl LatticeCtx {
    /// Per-coordinate shaping limits `L_1..L_n`, each at least one.
    pub fn new(code: QcCode, limits: Vec<i64>) -> Result<Self> {
        if limits.len() != code.n() {
            return Err(Error::DimensionMismatch {
                expected: code.n(),
                got: limits.len(),
            });
        }
        if limits.iter().any(|&l| l < 1) {
            return Err(Error::InvalidParams("shaping limits must be positive"));
        }
        let gen = systematic_generator(&code)?;
        let tanner = TannerGraph::new(&code);
        Ok(Self {
            code,
            gen,
            limits,
            tanner,
        })
    }

    pub fn uniform(code: QcCode, l: i64) -> Result<Self> {
        let n = code.n();
        Self::new(code, alloc::vec![l; n])
    }

    pub fn n(&self) -> usize {
        self.code.n()
    }

    pub fn k(&self) -> usize {
        self.code.k()
    }

    pub fn code(&self) -> &QcCode {
        &self.code
    }

    pub fn generator(&self) -> &SystematicGen {
        &self.gen
    }

    pub fn limits(&self) -> &[i64] {
        &self.limits
    }

    pub fn tanner(&self) -> &TannerGraph {
        &self.tanner
    }

    /// Shaping modulus `nL_i - 1`.
    pub fn modulus(&self, i: usize) -> i64 {
        self.n() as i64 * self.limits[i] - 1
    }

    /// Dense `G_Λ` with integer entries, for inspection and tests.
    pub fn generator_matrix(&self) -> Vec<Vec<i64>> {
        let (n, k) = (self.n(), self.k());
        let a = self.gen.a();
        (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| match (r < k, c < k) {
                        (true, true) => (r == c) as i64,
                        (true, false) => a.get(r, c - k) as i64,
                        (false, true) => 0,
                        (false, false) => 2 * (r == c) as i64,
                    })
                    .collect()
            })
            .collect()
    }

    fn check_len(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// The parity sums `Σ_j x_j a_{j,i}` for `i < n - k`.
    fn parity_sums(&self, x: &[i64]) -> Vec<i64> {
        self.gen.a().int_vec_mul(&x[..self.k()])
    }

    /// `x·G_Λ`.
    pub fn mul_generator(&self, x: &[i64]) -> Result<Vec<i64>> {
        self.check_len(x)?;
        let k = self.k();
        let sums = self.parity_sums(x);
        let mut out = x.to_vec();
        for (o, s) in out[k..].iter_mut().zip(sums) {
            *o = 2 * *o + s;
        }
        Ok(out)
    }

    /// `λ·G_Λ^{-1}`, failing with [`Error::NotLatticePoint`] when the result
    /// is not integral.
    pub fn solve_generator(&self, lambda: &[i64]) -> Result<Vec<i64>> {
        self.check_len(lambda)?;
        let k = self.k();
        let sums = self.parity_sums(lambda);
        let mut out = lambda.to_vec();
        for (o, s) in out[k..].iter_mut().zip(sums) {
            let twice = *o - s;
            if twice % 2 != 0 {
                return Err(Error::NotLatticePoint);
            }
            *o = twice / 2;
        }
        Ok(out)
    }

    /// `E(ξ) = 2ξ·G_Λ - 1`.
    pub fn encode(&self, xi: &[i64]) -> Result<Vec<i64>> {
        Ok(self.mul_generator(xi)?.into_iter().map(|v| 2 * v - 1).collect())
    }

    /// Hypercube shaping: `x'_i = x_i - z_i(nL_i - 1)` with `z_i = 0` on the
    /// systematic part and `z_i = round((2x_i + S_i) / (2(nL_i - 1)))` on the
    /// parity part, so that `|λ'_i| ≤ nL_i - 1` everywhere.
    ///
    /// Requires `|x_i| < nL_i/2` on every coordinate, the range in which the
    /// signed residue of [`mod_recover`](Self::mod_recover) is unambiguous.
    pub fn shape(&self, x: &[i64]) -> Result<ShapedPoint> {
        self.check_len(x)?;
        let (n, k) = (self.n() as i64, self.k());
        if let Some(index) = x
            .iter()
            .zip(&self.limits)
            .position(|(&xi, &l)| 2 * xi.abs() >= n * l)
        {
            return Err(Error::ShapingOverflow { index });
        }
        let sums = self.parity_sums(x);
        let mut x_prime = x.to_vec();
        let mut lambda_prime = x.to_vec();
        let mut z = alloc::vec![0i64; x.len()];
        for (j, s) in sums.into_iter().enumerate() {
            let i = k + j;
            let m = self.modulus(i);
            let zi = round_div(2 * x[i] + s, 2 * m);
            z[i] = zi;
            x_prime[i] = x[i] - zi * m;
            lambda_prime[i] = 2 * x_prime[i] + s;
        }
        Ok(ShapedPoint {
            x_prime,
            lambda_prime,
            z,
        })
    }

    /// Undo [`encode`](Self::encode) and [`shape`](Self::shape): from
    /// `λ̃' = 2x'G_Λ - 1` return the original `x`.
    pub fn mod_recover(&self, lambda_tilde_prime: &[i64]) -> Result<Vec<i64>> {
        self.check_len(lambda_tilde_prime)?;
        let n = self.n() as i64;
        let mut lambda = Vec::with_capacity(lambda_tilde_prime.len());
        for &v in lambda_tilde_prime {
            if v % 2 == 0 {
                return Err(Error::NotLatticePoint);
            }
            lambda.push((v + 1) / 2);
        }
        let mut x = self.solve_generator(&lambda)?;
        for i in self.k()..x.len() {
            let m = self.modulus(i);
            let r = x[i].rem_euclid(m);
            x[i] = if 2 * r < n * self.limits[i] { r } else { r - m };
        }
        Ok(x)
    }

    /// Noise standard deviation at a volume-to-noise ratio given in dB.
    pub fn vnr_sigma(&self, vnr_db: f64) -> f64 {
        vnr_sigma(self.n(), self.k(), vnr_db)
    }
}

/// `σ = sqrt(4^{(2n-k)/n} / (2πe·10^{vnr_db/10}))`.
pub fn vnr_sigma(n: usize, k: usize, vnr_db: f64) -> f64 {
    let volume = libm::pow(4.0, (2 * n - k) as f64 / n as f64);
    let vnr = libm::pow(10.0, vnr_db / 10.0);
    libm::sqrt(volume / (2.0 * core::f64::consts::PI * core::f64::consts::E * vnr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitmat::pack_bits;
    use crate::rdfcode::rdf_search;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn reference_ctx(seed: u64) -> LatticeCtx {
        LatticeCtx::uniform(rdf_search(43, 6, 3, seed).unwrap(), 16).unwrap()
    }

    fn toy4() -> LatticeCtx {
        let code = QcCode::new(2, 2, 1, vec![vec![1], vec![0]]).unwrap();
        LatticeCtx::uniform(code, 2).unwrap()
    }

    fn lifted_syndrome_zero(ctx: &LatticeCtx, y: &[i64]) -> bool {
        let bits: Vec<u8> = y.iter().map(|&v| ((v + 1) / 2).rem_euclid(2) as u8).collect();
        ctx.code().parity_check().mul_vec(&pack_bits(&bits)).iter().all(|&w| w == 0)
    }

    fn random_vec(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Vec<i64> {
        (0..n).map(|_| rng.random_range(-bound..=bound)).collect()
    }

    #[test]
    fn generator_matches_block_form() {
        let ctx = toy4();
        // A = H_1^{-1} H_0 transposed = shift by one
        assert_eq!(
            ctx.generator_matrix(),
            vec![vec![1, 0, 0, 1], vec![0, 1, 1, 0], vec![0, 0, 2, 0], vec![0, 0, 0, 2]]
        );
        let x = [3, -1, 2, 5];
        let dense: Vec<i64> = (0..4)
            .map(|c| (0..4).map(|r| x[r] * ctx.generator_matrix()[r][c]).sum())
            .collect();
        assert_eq!(ctx.mul_generator(&x).unwrap(), dense);
        assert_eq!(ctx.solve_generator(&dense).unwrap(), x);
    }

    #[test]
    fn encode_examples() {
        let ctx = reference_ctx(1);
        let n = ctx.n();
        assert_eq!(ctx.encode(&vec![0; n]).unwrap(), vec![-1; n]);
        let mut e1 = vec![0; n];
        e1[0] = 1;
        let row: Vec<i64> = ctx.generator_matrix()[0].iter().map(|&g| 2 * g - 1).collect();
        assert_eq!(ctx.encode(&e1).unwrap(), row);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let xi = random_vec(&mut rng, n, 1000);
            let y = ctx.encode(&xi).unwrap();
            assert!(y.iter().all(|v| v.rem_euclid(2) == 1));
            assert!(lifted_syndrome_zero(&ctx, &y));
        }
    }

    #[test]
    fn closure_under_addition() {
        let ctx = reference_ctx(2);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let a = ctx.encode(&random_vec(&mut rng, 258, 50)).unwrap();
            let b = ctx.encode(&random_vec(&mut rng, 258, 50)).unwrap();
            let sum: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y + 1).collect();
            assert!(lifted_syndrome_zero(&ctx, &sum));
        }
    }

    #[test]
    fn shaping_in_box_is_identity() {
        let ctx = reference_ctx(1);
        let mut x = vec![0i64; 258];
        x[0] = 5;
        x[250] = -7;
        let shaped = ctx.shape(&x).unwrap();
        assert!(shaped.z.iter().all(|&z| z == 0));
        assert_eq!(shaped.lambda_prime, ctx.mul_generator(&x).unwrap());
        let again = ctx.shape(&shaped.x_prime).unwrap();
        assert!(again.z.iter().all(|&z| z == 0));
    }

    #[test]
    fn shaping_overflow_rejected() {
        let ctx = toy4();
        // nL/2 = 4
        assert_eq!(ctx.shape(&[4, 0, 0, 0]), Err(Error::ShapingOverflow { index: 0 }));
        assert_eq!(ctx.shape(&[0, -4, 0, 0]), Err(Error::ShapingOverflow { index: 1 }));
        assert_eq!(ctx.shape(&[0, 0, 0, 9]), Err(Error::ShapingOverflow { index: 3 }));
        assert!(ctx.shape(&[3, -3, 3, -3]).is_ok());
    }

    #[test]
    fn toy_shaping_matches_exhaustive_z() {
        let ctx = toy4();
        let m = ctx.modulus(2);
        assert_eq!(m, 7);
        let range = -3..=3i64;
        for a in range.clone() {
            for b in range.clone() {
                for c in range.clone() {
                    for d in range.clone() {
                        let x = [a, b, c, d];
                        let shaped = ctx.shape(&x).unwrap();
                        let lam = ctx.mul_generator(&x).unwrap();
                        for i in 2..4 {
                            let best = (-4..=4)
                                .map(|z: i64| (lam[i] - 2 * z * m).abs())
                                .min()
                                .unwrap();
                            assert_eq!(shaped.lambda_prime[i].abs(), best);
                            assert!(best <= m);
                        }
                        let tilde: Vec<i64> = shaped.lambda_prime.iter().map(|v| 2 * v - 1).collect();
                        assert_eq!(ctx.mod_recover(&tilde).unwrap(), x);
                    }
                }
            }
        }
    }

    #[test]
    fn round_trip_reference_lattice() {
        let ctx = reference_ctx(5);
        let bound = 258 * 16 / 2 - 1;
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut wrapped = 0;
        for trial in 0..10_000 {
            let b = if trial % 2 == 0 { bound } else { 200 };
            let x = random_vec(&mut rng, 258, b);
            let shaped = ctx.shape(&x).unwrap();
            for (i, &l) in shaped.lambda_prime.iter().enumerate() {
                assert!(l.abs() <= ctx.modulus(i));
            }
            assert_eq!(&shaped.x_prime[..215], &x[..215]);
            wrapped += shaped.z.iter().filter(|&&z| z != 0).count();
            let tilde = ctx.encode(&shaped.x_prime).unwrap();
            assert_eq!(ctx.mod_recover(&tilde).unwrap(), x);
        }
        assert!(wrapped > 0);
        assert_eq!(ctx.mod_recover(&vec![-1; 258]).unwrap(), vec![0; 258]);
    }

    #[test]
    fn perturbation_changes_recovery() {
        let ctx = reference_ctx(5);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x = random_vec(&mut rng, 258, 100);
        let mut tilde = ctx.encode(&ctx.shape(&x).unwrap().x_prime).unwrap();
        tilde[250] += 2;
        // a +2 step on a parity coordinate moves λ by one, which is not in the
        // lattice; a +4 step is
        assert_eq!(ctx.mod_recover(&tilde), Err(Error::NotLatticePoint));
        tilde[250] += 2;
        let got = ctx.mod_recover(&tilde).unwrap();
        assert_ne!(got, x);
        let mut t2 = ctx.encode(&ctx.shape(&x).unwrap().x_prime).unwrap();
        t2[0] += 2;
        assert_ne!(ctx.mod_recover(&t2).ok(), Some(x.clone()));
        let mut odd = ctx.encode(&x).unwrap();
        odd[3] += 1;
        assert_eq!(ctx.mod_recover(&odd), Err(Error::NotLatticePoint));
    }

    #[test]
    fn sigma_formula() {
        let ctx = reference_ctx(1);
        let (n, k) = (258.0f64, 215.0f64);
        let unit_db = 10.0 * libm::log10(libm::pow(4.0, (2.0 * n - k) / n) / (2.0 * core::f64::consts::PI * core::f64::consts::E));
        assert!((ctx.vnr_sigma(unit_db) - 1.0).abs() < 1e-12);
        // sqrt(4^(301/258) / (2πe)) evaluated independently at 40 digits
        let reference = 0.543_205_910_149_321_3;
        assert!((ctx.vnr_sigma(0.0) - reference).abs() < 1e-9, "{}", ctx.vnr_sigma(0.0));
        let s: Vec<f64> = [0.0, 3.0, 6.0].iter().map(|&d| ctx.vnr_sigma(d)).collect();
        assert!(s[0] > s[1] && s[1] > s[2]);
    }

    #[test]
    fn rounding_ties_away_from_zero() {
        assert_eq!(round_div(5, 2), 3);
        assert_eq!(round_div(-5, 2), -3);
        assert_eq!(round_div(4, 3), 1);
        assert_eq!(round_div(-4, 3), -1);
        assert_eq!(round_div(0, 7), 0);
    }
}
