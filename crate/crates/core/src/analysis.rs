//! Closed-form accounting: key size, message expansion, information rate and
//! the brute-force and differential attack costs.
//!
//! Attack costs follow the explicit expressions term by term; the headline
//! exponents they are usually quoted with hide constant factors, so a couple
//! of bits of difference is expected.

use crate::cipher::{ceil_log2, SchemeParams};
use crate::rdfcode::{count_rdf_lower_bound, log2_big};

/// `l1 + l2 + l3 + l4`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct KeySize {
    /// Error-vector seed, `⌈log2 n⌉`.
    pub l1: usize,
    /// Control-line seed, `d`.
    pub l2: usize,
    /// Circulant supports, `dv·⌈log2 b⌉·n0`.
    pub l3: usize,
    /// Permutation seeds, `v·⌈log2 q⌉`.
    pub l4: usize,
    /// `d` differs from the default `7⌈log2 n⌉`.
    pub l2_overridden: bool,
}

impl KeySize {
    pub fn total(&self) -> usize {
        self.l1 + self.l2 + self.l3 + self.l4
    }
}

/// Key size for raw parameters; `d = None` uses `l2 = 7⌈log2 n⌉`.
pub fn key_size(n: usize, b: usize, n0: usize, dv: usize, q: usize, d: Option<usize>) -> KeySize {
    let l1 = ceil_log2(n as u128) as usize;
    let default_l2 = 7 * l1;
    let l2 = d.unwrap_or(default_l2);
    let v = if q == 0 { 0 } else { n / q };
    KeySize {
        l1,
        l2,
        l3: dv * ceil_log2(b as u128) as usize * n0,
        l4: v * ceil_log2(q as u128) as usize,
        l2_overridden: l2 != default_l2,
    }
}

pub fn key_size_bits(p: &SchemeParams) -> KeySize {
    key_size(p.n(), p.b, p.n0, p.dv, p.q, Some(p.d))
}

/// Ciphertext-to-plaintext size ratio as an exact fraction `(num, den)`:
/// `((n-k)⌈log2(4nL-1)⌉ + k⌈log2(2nL+3)⌉) / (n⌈log2(2L)⌉)`.
pub fn message_expansion(n: u64, k: u64, l: u64) -> (u128, u128) {
    let (n, k, l) = (n as u128, k as u128, l as u128);
    let num = (n - k) * ceil_log2(4 * n * l - 1) as u128 + k * ceil_log2(2 * n * l + 3) as u128;
    let den = n * ceil_log2(2 * l) as u128;
    (num, den)
}

pub fn message_expansion_f64(n: u64, k: u64, l: u64) -> f64 {
    let (num, den) = message_expansion(n, k, l);
    num as f64 / den as f64
}

/// Information rate per coordinate as quoted for the scheme, `log2(2L)`.
pub fn rate_symbol(l: u32) -> f64 {
    libm::log2(2.0 * l as f64)
}

/// Payload bits per coordinate actually carried by the bit packing, `log2 L`.
pub fn rate_packed(l: u32) -> f64 {
    libm::log2(l as f64)
}

/// `log2` of the four key-space factors and their product.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct BruteForce {
    /// Lower bound on the number of difference families (zero when the bound
    /// is vacuous).
    pub rdf: f64,
    /// Reseeded LFSR state space, `(2^{l1} - 1)^2`.
    pub lfsr: f64,
    /// Control line, `2^{l2}`.
    pub control: f64,
    /// Permutation seeds, `(2^{⌈log2 q⌉})^v`.
    pub permutation: f64,
}

impl BruteForce {
    pub fn total(&self) -> f64 {
        self.rdf + self.lfsr + self.control + self.permutation
    }
}

pub fn bruteforce_cost_log2(p: &SchemeParams) -> BruteForce {
    let rdf = log2_big(&count_rdf_lower_bound(p.b, p.dv, p.n0)).max(0.0);
    let epoch = libm::exp2(p.l1() as f64) - 1.0;
    BruteForce {
        rdf,
        lfsr: 2.0 * libm::log2(epoch),
        control: p.d as f64,
        permutation: (p.v() * p.gamma()) as f64,
    }
}

/// Which count bounds the number of permutation rounds in the differential
/// attack.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RoundCount {
    /// All permutation seeds, `2^{v⌈log2 q⌉}`.
    PermutationSeeds,
    /// Period of one permutation LFSR, `2^{⌈log2 q⌉} - 1`.
    PermutationPeriod,
}

/// `log2` of the three stages of the differential attack and their sum.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Differential {
    /// Derivative collection, `k·2^{2d}`.
    pub first_stage: f64,
    /// Seed recovery, `2^{l1+l2+2}·2vq²`.
    pub recovery: f64,
    /// Repeated rounds, `N_p·k·2^{d+1}`.
    pub rounds: f64,
    pub log2_rounds_count: f64,
}

impl Differential {
    pub fn total(&self) -> f64 {
        log2_sum(&[self.first_stage, self.recovery, self.rounds])
    }
}

/// `log2(Σ 2^{t_i})` without overflow.
pub fn log2_sum(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + libm::log2(terms.iter().map(|&t| libm::exp2(t - max)).sum::<f64>())
}

pub fn differential_cost_log2(p: &SchemeParams, reading: RoundCount) -> Differential {
    let k = libm::log2(p.k() as f64);
    let d = p.d as f64;
    let gamma = p.gamma() as f64;
    let log2_rounds_count = match reading {
        RoundCount::PermutationSeeds => p.v() as f64 * gamma,
        RoundCount::PermutationPeriod => libm::log2(libm::exp2(gamma) - 1.0).max(0.0),
    };
    let (v, q) = (p.v() as f64, p.q as f64);
    Differential {
        first_stage: k + 2.0 * d,
        recovery: (p.l1() + p.d + 2) as f64 + libm::log2(2.0 * v * q * q),
        rounds: log2_rounds_count + k + d + 1.0,
        log2_rounds_count,
    }
}

/// Everything reported by `analyze`.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct SchemeReport {
    pub params: SchemeParams,
    pub n: usize,
    pub k: usize,
    pub key: KeySize,
    pub rate_symbol: f64,
    pub rate_packed: f64,
    pub expansion: (u128, u128),
    pub bruteforce: BruteForce,
    pub differential_seeds: Differential,
    pub differential_period: Differential,
}

impl SchemeReport {
    pub fn new(params: SchemeParams) -> Self {
        let (n, k) = (params.n(), params.k());
        Self {
            params,
            n,
            k,
            key: key_size_bits(&params),
            rate_symbol: rate_symbol(params.l),
            rate_packed: rate_packed(params.l),
            expansion: message_expansion(n as u64, k as u64, params.l as u64),
            bruteforce: bruteforce_cost_log2(&params),
            differential_seeds: differential_cost_log2(&params, RoundCount::PermutationSeeds),
            differential_period: differential_cost_log2(&params, RoundCount::PermutationPeriod),
        }
    }

    pub fn expansion_f64(&self) -> f64 {
        self.expansion.0 as f64 / self.expansion.1 as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const REFERENCE: SchemeParams = SchemeParams::REFERENCE;

    #[test]
    fn key_size_reference() {
        let k = key_size_bits(&REFERENCE);
        assert_eq!((k.l1, k.l2, k.l3, k.l4), (9, 61, 108, 36));
        assert_eq!(k.total(), 214);
        assert!(k.l2_overridden);
        assert!(!key_size(258, 43, 6, 3, 43, None).l2_overridden);
        assert_eq!(key_size(258, 43, 6, 3, 43, None).total(), 9 + 63 + 108 + 36);
    }

    #[test]
    fn key_size_other_sets() {
        // n = 2: ⌈log2 2⌉ = 1, l2 = 7, b = 1 contributes nothing, q = 2 gives one bit
        assert_eq!(key_size(2, 1, 2, 1, 2, None).total(), 1 + 7 + 0 + 1);
        // n = 1496: l1 = 11, l2 = 77, l3 = 5·8·8 = 320, l4 = 8·8 = 64
        let k = key_size(1496, 187, 8, 5, 187, None);
        assert_eq!((k.l1, k.l2, k.l3, k.l4), (11, 77, 320, 64));
        assert_eq!(k.total(), 472);
    }

    #[test]
    fn expansion_range() {
        for e in 1..=20 {
            let v = message_expansion_f64(258, 215, 1 << e);
            assert!((1.0..=5.6).contains(&v), "L = 2^{e}: {v}");
        }
        // L = 2: (43·⌈log2 2063⌉ + 215·⌈log2 1035⌉) / (258·2) = 2881/516
        assert_eq!(message_expansion(258, 215, 2), (2881, 516));
        assert!(message_expansion_f64(258, 215, 1 << 30) < 1.35);
        for (n, k) in [(8, 4), (258, 215), (256, 128), (1496, 1309)] {
            for e in 1..=24 {
                assert!(message_expansion_f64(n, k, 1 << e) >= 1.0);
            }
        }
    }

    #[test]
    fn rates() {
        assert_eq!(rate_symbol(16), 5.0);
        assert_eq!(rate_packed(16), 4.0);
    }

    #[test]
    fn bruteforce_reference() {
        let bf = bruteforce_cost_log2(&REFERENCE);
        assert_eq!(bf.control, 61.0);
        assert_eq!(bf.permutation, 36.0);
        assert!((bf.lfsr - 17.994).abs() < 1e-3);
        assert!((bf.total() - 176.0).abs() <= 1.0, "{}", bf.total());
    }

    #[test]
    fn differential_reference() {
        let dc = differential_cost_log2(&REFERENCE, RoundCount::PermutationSeeds);
        assert!((dc.first_stage - (libm::log2(215.0) + 122.0)).abs() < 1e-12);
        assert!((dc.total() - 129.0).abs() <= 2.0, "{}", dc.total());
        let alt = differential_cost_log2(&REFERENCE, RoundCount::PermutationPeriod);
        assert!(alt.total() <= dc.total());
        let degenerate = differential_cost_log2(&SchemeParams { d: 0, ..REFERENCE }, RoundCount::PermutationSeeds);
        assert!(degenerate.total().is_finite());
        assert!(degenerate.recovery >= degenerate.first_stage);
    }

    #[test]
    fn report_is_reproducible() {
        assert_eq!(SchemeReport::new(REFERENCE), SchemeReport::new(REFERENCE));
        // (43·15 + 215·14) / (258·5)
        assert_eq!(SchemeReport::new(REFERENCE).expansion, (3655, 1290));
    }

    #[test]
    fn log2_sum_values() {
        assert!((log2_sum(&[3.0, 3.0]) - 4.0).abs() < 1e-12);
        assert!((log2_sum(&[1000.0, 0.0]) - 1000.0).abs() < 1e-12);
    }
}
