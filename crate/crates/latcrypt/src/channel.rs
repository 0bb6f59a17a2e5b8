//! AWGN channel and Monte-Carlo SER/FER sweeps over the full cipher.
//!
//! Every trial draws its message and noise from its own ChaCha stream keyed
//! by `(seed, point, trial)`, so results do not depend on how trials are
//! spread over threads.

use std::io::Write;

use latcrypt_core::cipher::CipherContext;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::{Error, Result};

/// `x + noise` with i.i.d. `N(0, σ²)` noise; `σ = 0` returns `x` exactly.
pub fn add_awgn<R: Rng + ?Sized>(x: &[i64], sigma: f64, rng: &mut R) -> Vec<f64> {
    if sigma == 0.0 {
        return x.iter().map(|&v| v as f64).collect();
    }
    let noise = Normal::new(0.0, sigma).expect("sigma must be finite and non-negative");
    x.iter().map(|&v| v as f64 + noise.sample(rng)).collect()
}

/// The generator for one trial of one sweep point.
pub fn trial_rng(seed: u64, point: u32, trial: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((point as u64) << 32 | trial as u64);
    rng
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct SweepSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    pub trials: u32,
    pub seed: u64,
}

impl SweepSpec {
    /// Parse `start:step:stop` (or a single value) for the VNR range.
    pub fn parse_range(range: &str, trials: u32, seed: u64) -> Result<Self> {
        let parts: Vec<f64> = range
            .split(':')
            .map(|s| s.trim().parse::<f64>().map_err(|_| Error::Sweep(format!("`{s}` is not a number"))))
            .collect::<Result<_>>()?;
        let (start, step, stop) = match parts.as_slice() {
            [v] => (*v, 1.0, *v),
            [a, s, b] => (*a, *s, *b),
            _ => return Err(Error::Sweep("expected start:step:stop".into())),
        };
        let spec = Self {
            start,
            stop,
            step,
            trials,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) || !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::Sweep("step must be positive and bounds finite".into()));
        }
        if self.stop < self.start {
            return Err(Error::Sweep("stop is below start".into()));
        }
        if self.trials == 0 {
            return Err(Error::Sweep("need at least one trial".into()));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.start + i as f64 * self.step).collect()
    }
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct SweepRow {
    pub vnr_db: f64,
    pub ser: f64,
    pub fer: f64,
    pub trials: u32,
    pub seed: u64,
    pub symbol_errors: u64,
    pub frame_errors: u64,
    pub symbols: u64,
}

/// Symbol errors of one frame; a failed decryption counts every symbol.
fn run_trial(ctx: &CipherContext, sigma: f64, seed: u64, point: u32, trial: u32) -> usize {
    let p = ctx.params();
    let n = p.n();
    let l = p.l as i64;
    let mut rng = trial_rng(seed, point, trial);
    let m: Vec<i64> = (0..n)
        .map(|i| if i % 2 == 0 { rng.random_range(0..l) } else { rng.random_range(-l..0) })
        .collect();
    let counter = trial as u64;
    let ct = match ctx.encrypt_joint_at(counter, &m) {
        Ok(ct) => ct,
        Err(_) => return n,
    };
    let r = add_awgn(&ct.y, sigma, &mut rng);
    match ctx.decrypt_joint_at(counter, &r, sigma) {
        Ok(out) => out.iter().zip(&m).filter(|(a, b)| a != b).count(),
        Err(_) => n,
    }
}

/// One sweep point, trials in parallel on the current rayon pool.
pub fn run_point(ctx: &CipherContext, vnr_db: f64, point: u32, trials: u32, seed: u64) -> SweepRow {
    let sigma = ctx.lattice().vnr_sigma(vnr_db);
    let errors: Vec<usize> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(ctx, sigma, seed, point, t))
        .collect();
    let n = ctx.params().n() as u64;
    let symbol_errors: u64 = errors.iter().map(|&e| e as u64).sum();
    let frame_errors = errors.iter().filter(|&&e| e > 0).count() as u64;
    let symbols = n * trials as u64;
    SweepRow {
        vnr_db,
        ser: symbol_errors as f64 / symbols as f64,
        fer: frame_errors as f64 / trials as f64,
        trials,
        seed,
        symbol_errors,
        frame_errors,
        symbols,
    }
}

/// Run every point of `spec`, calling `progress` after each one.
pub fn run_sweep_with(ctx: &CipherContext, spec: &SweepSpec, mut progress: impl FnMut(&SweepRow)) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    Ok(spec
        .points()
        .into_iter()
        .enumerate()
        .map(|(i, db)| {
            let row = run_point(ctx, db, i as u32, spec.trials, spec.seed);
            progress(&row);
            row
        })
        .collect())
}

pub fn run_sweep(ctx: &CipherContext, spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    run_sweep_with(ctx, spec, |_| {})
}

pub const CSV_HEADER: &str = "vnr_db,ser,fer,trials,seed";

pub fn write_csv<W: Write>(mut w: W, rows: &[SweepRow]) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(w, "{},{:e},{:e},{},{}", r.vnr_db, r.ser, r.fer, r.trials, r.seed)?;
    }
    Ok(())
}

/// Wilson score interval for `k` successes in `n` trials at normal quantile `z`.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_sigma_is_identity() {
        let mut rng = trial_rng(1, 0, 0);
        assert_eq!(add_awgn(&[3, -5, 7], 0.0, &mut rng), vec![3.0, -5.0, 7.0]);
    }

    #[test]
    fn noise_variance() {
        let mut rng = trial_rng(2, 0, 0);
        let r = add_awgn(&vec![0; 1_000_000], 1.0, &mut rng);
        let mean = r.iter().sum::<f64>() / r.len() as f64;
        let var = r.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (r.len() - 1) as f64;
        assert!((var - 1.0).abs() < 0.01, "{var}");
    }

    #[test]
    fn streams_are_keyed() {
        let draw = |s, p, t| trial_rng(s, p, t).random::<u64>();
        assert_eq!(draw(1, 2, 3), draw(1, 2, 3));
        assert_ne!(draw(1, 2, 3), draw(1, 2, 4));
        assert_ne!(draw(1, 2, 3), draw(1, 3, 3));
        assert_ne!(draw(1, 2, 3), draw(2, 2, 3));
    }

    #[test]
    fn sweep_points() {
        let spec = SweepSpec::parse_range("0:0.5:6", 10, 7).unwrap();
        let pts = spec.points();
        assert_eq!(pts.len(), 13);
        assert_eq!(pts[12], 6.0);
        assert_eq!(SweepSpec::parse_range("2.5", 1, 0).unwrap().points(), vec![2.5]);
        assert!(SweepSpec::parse_range("0:0:6", 1, 0).is_err());
        assert!(SweepSpec::parse_range("0:1:6", 0, 0).is_err());
        assert!(SweepSpec::parse_range("6:1:0", 1, 0).is_err());
        assert!(SweepSpec::parse_range("a:1:2", 1, 0).is_err());
    }

    #[test]
    fn wilson_reference() {
        // 10 of 100 at z = 1.96: (0.0552, 0.1744)
        let (lo, hi) = wilson_interval(10, 100, 1.96);
        assert!((lo - 0.05523).abs() < 1e-4 && (hi - 0.17437).abs() < 1e-4, "{lo} {hi}");
        let (lo, hi) = wilson_interval(0, 1000, 1.96);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.004);
    }
}
