//! Sum-product decoding of noisy Construction-A lattice points.
//!
//! A transmitted coordinate is `c + 4z` with `c = ±1` (`+1` for code bit one).
//! Each observation is folded onto the two cosets to give a bit LLR, the bits
//! are decoded on the Tanner graph of `H` with a flooding tanh-rule schedule,
//! and the integer part is restored as `round((r - ĉ)/4)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::bitmat::pack_bits;
use crate::lattice::LatticeCtx;
use crate::rdfcode::QcCode;
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct DecoderConfig {
    pub max_iterations: usize,
    pub llr_clip: f64,
    /// Number of `4Z` translates folded on each side of the nearest one.
    pub coset_window: usize,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        Self {
            max_iterations: 50,
            llr_clip: 30.0,
            coset_window: 4,
        }
    }
}

impl DecoderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 || self.coset_window == 0 || !(self.llr_clip > 0.0) {
            return Err(Error::InvalidParams(
                "decoder needs at least one iteration, a window and a positive clip",
            ));
        }
        Ok(())
    }
}

/// Edge lists of the Tanner graph, grouped by check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TannerGraph {
    n: usize,
    check_start: Vec<usize>,
    edge_var: Vec<usize>,
    var_edges: Vec<Vec<usize>>,
}

impl TannerGraph {
    pub fn new(code: &QcCode) -> Self {
        let n = code.n();
        let mut check_start = vec![0];
        let mut edge_var = Vec::new();
        let mut var_edges = vec![Vec::new(); n];
        for cols in code.check_neighbors() {
            for v in cols {
                var_edges[v].push(edge_var.len());
                edge_var.push(v);
            }
            check_start.push(edge_var.len());
        }
        Self {
            n,
            check_start,
            edge_var,
            var_edges,
        }
    }

    pub fn checks(&self) -> usize {
        self.check_start.len() - 1
    }

    fn check_edges(&self, c: usize) -> core::ops::Range<usize> {
        self.check_start[c]..self.check_start[c + 1]
    }

    fn syndrome_zero(&self, bits: &[bool]) -> bool {
        (0..self.checks()).all(|c| {
            self.check_edges(c)
                .filter(|&e| bits[self.edge_var[e]])
                .count()
                % 2
                == 0
        })
    }
}

fn log_sum_exp(terms: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = terms.clone().fold(f64::NEG_INFINITY, f64::max);
    max + libm::log(terms.map(|t| libm::exp(t - max)).sum::<f64>())
}

/// `log P(c = +1 | r) / P(c = -1 | r)` over `2T + 1` translates centred on
/// the nearest multiple of four, clipped to `±clip`.
pub fn channel_llr(r: f64, sigma: f64, window: usize, clip: f64) -> f64 {
    let z0 = libm::round(r / 4.0);
    let t = window as f64;
    let inv = 1.0 / (2.0 * sigma * sigma);
    let zs = (0..=2 * window).map(move |i| z0 - t + i as f64);
    let plus = log_sum_exp(zs.clone().map(|z| {
        let d = r - (1.0 + 4.0 * z);
        -d * d * inv
    }));
    let minus = log_sum_exp(zs.map(|z| {
        let d = r - (-1.0 + 4.0 * z);
        -d * d * inv
    }));
    (plus - minus).clamp(-clip, clip)
}

/// Decode `r = 2x'G_Λ - 1 + noise` to the nearest lattice point found by SPA.
pub fn decode(ctx: &LatticeCtx, cfg: &DecoderConfig, r: &[f64], sigma: f64) -> Result<Vec<i64>> {
    cfg.validate()?;
    let n = ctx.n();
    if r.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: r.len(),
        });
    }
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParams("sigma must be positive and finite"));
    }
    let graph = ctx.tanner();
    debug_assert_eq!(graph.n, n);
    let clip = cfg.llr_clip;
    // log P(bit 0) / P(bit 1), bit one being the +1 coset
    let prior: Vec<f64> = r
        .iter()
        .map(|&ri| -channel_llr(ri, sigma, cfg.coset_window, clip))
        .collect();
    let mut bits: Vec<bool> = prior.iter().map(|&l| l < 0.0).collect();
    let mut var_to_check: Vec<f64> = graph.edge_var.iter().map(|&v| prior[v]).collect();
    let mut check_to_var = vec![0.0f64; var_to_check.len()];
    let mut tanh_buf = Vec::new();
    let mut converged = graph.syndrome_zero(&bits);
    let mut iteration = 0;
    while !converged && iteration < cfg.max_iterations {
        iteration += 1;
        for c in 0..graph.checks() {
            let edges = graph.check_edges(c);
            tanh_buf.clear();
            tanh_buf.extend(edges.clone().map(|e| libm::tanh(var_to_check[e] / 2.0)));
            for (slot, e) in edges.enumerate() {
                let prod: f64 = tanh_buf
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != slot)
                    .map(|(_, &t)| t)
                    .product();
                let prod = prod.clamp(-1.0 + 1e-15, 1.0 - 1e-15);
                check_to_var[e] = (2.0 * libm::atanh(prod)).clamp(-clip, clip);
            }
        }
        for (v, edges) in graph.var_edges.iter().enumerate() {
            let total = prior[v] + edges.iter().map(|&e| check_to_var[e]).sum::<f64>();
            bits[v] = total < 0.0;
            for &e in edges {
                var_to_check[e] = (total - check_to_var[e]).clamp(-clip, clip);
            }
        }
        converged = graph.syndrome_zero(&bits);
    }
    if !converged {
        return Err(Error::DecodeFailure {
            iterations: cfg.max_iterations,
        });
    }
    Ok(r.iter()
        .zip(&bits)
        .map(|(&ri, &bit)| {
            let c = if bit { 1.0 } else { -1.0 };
            c as i64 + 4 * libm::round((ri - c) / 4.0) as i64
        })
        .collect())
}

/// Code bits of an odd-integer lattice point (`+1 mod 4` is bit one).
pub fn lattice_bits(lambda: &[i64]) -> Vec<u8> {
    lambda.iter().map(|&v| (v.rem_euclid(4) == 1) as u8).collect()
}

/// Whether the lifted word of an odd-integer vector is a codeword.
pub fn syndrome_zero(ctx: &LatticeCtx, lambda: &[i64]) -> bool {
    let bits = pack_bits(&lattice_bits(lambda));
    ctx.code().parity_check().mul_vec(&bits).iter().all(|&w| w == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdfcode::rdf_search;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    fn llr(r: f64, sigma: f64) -> f64 {
        channel_llr(r, sigma, 4, 30.0)
    }

    #[test]
    fn llr_examples() {
        assert!(llr(1.0, 0.7) > 0.0);
        assert!(llr(1.0, 3.0) > 0.0);
        assert!(llr(0.0, 1.3).abs() < 1e-12);
        // references evaluated with 50-digit arithmetic
        assert!(llr(2.0, 0.5).abs() < 1e-12);
        assert!((llr(0.7, 1.0) - 1.137_931_314_931_986_6).abs() < 1e-12);
        assert_eq!(llr(1.0, 0.01), 30.0);
        assert_eq!(channel_llr(-1.0, 0.01, 4, 7.5), -7.5);
    }

    #[test]
    fn llr_is_odd() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let r = rng.random_range(-40.0..40.0);
            let s = rng.random_range(0.2..3.0);
            assert!((llr(r, s) + llr(-r, s)).abs() < 1e-9, "{r} {s}");
        }
    }

    fn noisy(ctx: &LatticeCtx, rng: &mut ChaCha8Rng, sigma: f64) -> (Vec<i64>, Vec<f64>) {
        let n = ctx.n();
        let x: Vec<i64> = (0..n).map(|_| rng.random_range(-20..=20)).collect();
        let point = ctx.encode(&x).unwrap();
        let noise = Normal::new(0.0, sigma).unwrap();
        let r = point.iter().map(|&p| p as f64 + noise.sample(rng)).collect();
        (point, r)
    }

    #[test]
    fn noiseless_input_is_returned() {
        let ctx = LatticeCtx::uniform(rdf_search(43, 6, 3, 1).unwrap(), 16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let (point, _) = noisy(&ctx, &mut rng, 1.0);
            let r: Vec<f64> = point.iter().map(|&p| p as f64).collect();
            for sigma in [0.1, 1.0, 5.0] {
                assert_eq!(decode(&ctx, &DecoderConfig::default(), &r, sigma).unwrap(), point);
            }
        }
    }

    #[test]
    fn outputs_are_lattice_points_and_deterministic() {
        let ctx = LatticeCtx::uniform(rdf_search(43, 6, 3, 1).unwrap(), 16).unwrap();
        let sigma = ctx.vnr_sigma(3.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cfg = DecoderConfig::default();
        let mut ok = 0;
        for _ in 0..200 {
            let (_, r) = noisy(&ctx, &mut rng, sigma);
            let first = decode(&ctx, &cfg, &r, sigma);
            assert_eq!(first, decode(&ctx, &cfg, &r, sigma));
            if let Ok(out) = first {
                ok += 1;
                assert!(out.iter().all(|v| v.rem_euclid(2) == 1));
                assert!(syndrome_zero(&ctx, &out));
            }
        }
        assert!(ok > 100);
    }

    #[test]
    fn config_and_input_checks() {
        let ctx = LatticeCtx::uniform(rdf_search(43, 6, 3, 1).unwrap(), 16).unwrap();
        let r = vec![1.0; 258];
        let bad = DecoderConfig {
            max_iterations: 0,
            ..DecoderConfig::default()
        };
        assert!(decode(&ctx, &bad, &r, 1.0).is_err());
        assert!(decode(&ctx, &DecoderConfig::default(), &r[..10], 1.0).is_err());
        assert!(decode(&ctx, &DecoderConfig::default(), &r, 0.0).is_err());
    }

    #[test]
    fn hopeless_noise_fails_cleanly() {
        let ctx = LatticeCtx::uniform(rdf_search(43, 6, 3, 1).unwrap(), 16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let cfg = DecoderConfig {
            max_iterations: 5,
            ..DecoderConfig::default()
        };
        let (_, r) = noisy(&ctx, &mut rng, 3.0);
        assert_eq!(
            decode(&ctx, &cfg, &r, 3.0),
            Err(Error::DecodeFailure { iterations: 5 })
        );
    }
}
