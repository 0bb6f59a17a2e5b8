//! Key generation and the joint encrypt/decrypt pipelines.
//!
//! For frame `j` the key schedule yields an error vector `e_j` (`n` bits), a
//! control vector `h_j` (`d` bits) and a block permutation `P_j`. A message
//! `m` in the split constellation is carried as
//!
//! ```text
//! m' = m + (1 - e)        x = F(m', h)        x' = shape(x)
//! y  = (2x'G_Λ - 1 + 2e)·P
//! ```
//!
//! and the receiver undoes the permutation and the `2e` offset, decodes the
//! lattice point, reverses the shaping modulo `nL - 1` and inverts `F`.

mod params;
pub mod pack;

pub use params::{ceil_log2, KeyPolys, SchemeParams};

use alloc::vec::Vec;

use num_integer::Integer;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

use crate::bitmat::{CompanionMatrix, Gf2Poly};
use crate::decoder::{decode, DecoderConfig};
use crate::keystream::{build_block_permutation_at, seed_slices, BlockPermutation, ReseedingLfsr};
use crate::lattice::LatticeCtx;
use crate::nlf::{ControlVector, NlfContext};
use crate::rdfcode::{rdf_search, QcCode};
use crate::{Error, Result};

/// Everything a sender and receiver share.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SecretKey {
    pub params: SchemeParams,
    pub polys: KeyPolys,
    pub code: QcCode,
    /// Error-vector LFSR seed, `l1` bits.
    pub s: Vec<u8>,
    /// Control-line LFSR seed, `d` bits.
    pub h_seed: Vec<u8>,
    /// Permutation seeds, `v` slices of `⌈log2 q⌉` bits.
    pub t: Vec<u8>,
}

fn random_nonzero_bits(rng: &mut ChaCha20Rng, len: usize) -> Vec<u8> {
    loop {
        let bits: Vec<u8> = (0..len).map(|_| rng.random::<bool>() as u8).collect();
        if bits.contains(&1) {
            return bits;
        }
    }
}

impl SecretKey {
    pub fn new(params: SchemeParams, polys: KeyPolys, code: QcCode, s: Vec<u8>, h_seed: Vec<u8>, t: Vec<u8>) -> Result<Self> {
        let key = Self {
            params,
            polys,
            code,
            s,
            h_seed,
            t,
        };
        key.validate()?;
        Ok(key)
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.params;
        p.validate()?;
        self.polys.validate(p)?;
        if (self.code.b(), self.code.n0(), self.code.dv()) != (p.b, p.n0, p.dv) {
            return Err(Error::InvalidParams("code shape does not match parameters"));
        }
        if !self.code.last_block_invertible() {
            return Err(Error::SingularBlock);
        }
        for (bits, len) in [(&self.s, p.l1()), (&self.h_seed, p.d)] {
            if bits.len() != len {
                return Err(Error::DimensionMismatch {
                    expected: len,
                    got: bits.len(),
                });
            }
            if bits.iter().any(|&b| b > 1) || !bits.contains(&1) {
                return Err(Error::InvalidParams("LFSR seeds must be nonzero bit vectors"));
            }
        }
        if self.t.iter().any(|&b| b > 1) {
            return Err(Error::InvalidParams("permutation seeds must be bits"));
        }
        seed_slices(&self.t, p.q, p.v())?;
        Ok(())
    }

    /// Total secret bits `l1 + l2 + l3 + l4`.
    pub fn bit_len(&self) -> usize {
        crate::analysis::key_size_bits(&self.params).total()
    }
}

/// Draw a key from a 64-bit master seed.
pub fn keygen(params: SchemeParams, master_seed: u64) -> Result<SecretKey> {
    params.validate()?;
    let mut rng = ChaCha20Rng::seed_from_u64(master_seed);
    let code = rdf_search(params.b, params.n0, params.dv, rng.next_u64())?;
    let s = random_nonzero_bits(&mut rng, params.l1());
    let h_seed = random_nonzero_bits(&mut rng, params.d);
    let gamma = params.gamma();
    let mut t = Vec::with_capacity(params.v() * gamma);
    for _ in 0..params.v() {
        t.extend(random_nonzero_bits(&mut rng, gamma));
    }
    SecretKey::new(params, KeyPolys::defaults(&params), code, s, h_seed, t)
}

/// First eight bytes of SHA-256 over the parameters and polynomial ids.
pub fn params_digest(params: &SchemeParams, polys: &KeyPolys) -> [u8; 8] {
    let mut h = Sha256::new();
    for v in [params.b, params.n0, params.dv, params.q, params.l as usize, params.d] {
        h.update((v as u64).to_le_bytes());
    }
    for id in polys.all() {
        h.update((id.degree as u64).to_le_bytes());
        h.update((id.index as u64).to_le_bytes());
    }
    let out = h.finalize();
    let mut d = [0u8; 8];
    d.copy_from_slice(&out[..8]);
    d
}

/// One encrypted frame.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Ciphertext {
    pub y: Vec<i64>,
    pub counter: u64,
    pub digest: [u8; 8],
}

impl Ciphertext {
    /// Whether every coordinate lies in its admissible range: `|y_i| ≤ nL + 1`
    /// on the systematic blocks and `|y_i| ≤ 2nL - 1` on the parity block.
    pub fn within_bounds(&self, params: &SchemeParams) -> bool {
        let (n, k) = (params.n(), params.k());
        let nl = (n as i64) * params.l as i64;
        self.y.len() == n
            && self
                .y
                .iter()
                .enumerate()
                .all(|(i, &v)| v.abs() <= if i < k { nl + 1 } else { 2 * nl - 1 })
    }
}

/// Per-frame key-schedule output.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FrameMaterial {
    pub e: Vec<u8>,
    pub h: ControlVector,
    pub perm: BlockPermutation,
}

/// Expanded key: lattice, companion map, LFSRs and decoder settings.
#[derive(Clone, Debug)]
pub struct CipherContext {
    key: SecretKey,
    lattice: LatticeCtx,
    nlf: NlfContext,
    e_lfsr: ReseedingLfsr,
    h_lfsr: ReseedingLfsr,
    perm_poly: Gf2Poly,
    digest: [u8; 8],
    pub decoder: DecoderConfig,
}

fn bits_to_bools(bits: &[u8]) -> Vec<bool> {
    bits.iter().map(|&b| b == 1).collect()
}

fn check_len<T>(v: &[T], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: v.len(),
        });
    }
    Ok(())
}

impl CipherContext {
    pub fn new(key: SecretKey) -> Result<Self> {
        key.validate()?;
        let p = key.params;
        let polys = key.polys;
        let lattice = LatticeCtx::uniform(key.code.clone(), p.l as i64)?;
        let nlf = NlfContext::new(CompanionMatrix::from_poly(polys.u.poly()?)?, p.d);
        let e_lfsr = ReseedingLfsr::new(polys.e_main.poly()?, polys.e_reseed.poly()?, &key.s)?;
        let h_lfsr = ReseedingLfsr::new(polys.h_main.poly()?, polys.h_reseed.poly()?, &key.h_seed)?;
        let perm_poly = polys.perm.poly()?;
        let digest = params_digest(&p, &polys);
        Ok(Self {
            key,
            lattice,
            nlf,
            e_lfsr,
            h_lfsr,
            perm_poly,
            digest,
            decoder: DecoderConfig::default(),
        })
    }

    pub fn key(&self) -> &SecretKey {
        &self.key
    }

    pub fn params(&self) -> &SchemeParams {
        &self.key.params
    }

    pub fn lattice(&self) -> &LatticeCtx {
        &self.lattice
    }

    pub fn nlf(&self) -> &NlfContext {
        &self.nlf
    }

    pub fn digest(&self) -> [u8; 8] {
        self.digest
    }

    /// Frames before the error-vector schedule repeats,
    /// `N_e = P_e / gcd(P_e, n)` with `P_e = (2^{l1} - 1)^2`.
    pub fn error_reuse_frames(&self) -> u128 {
        let pe = self.e_lfsr.period();
        pe / pe.gcd(&(self.params().n() as u128))
    }

    /// Frames before the control schedule repeats, `P_h / gcd(P_h, d)`.
    pub fn control_reuse_frames(&self) -> u128 {
        let ph = self.h_lfsr.period();
        ph / ph.gcd(&(self.params().d as u128))
    }

    /// Frames before the permutation schedule repeats, `2^γ - 1`.
    pub fn permutation_reuse_frames(&self) -> u128 {
        let gamma = self.params().gamma();
        if gamma == 0 {
            1
        } else {
            (1u128 << gamma) - 1
        }
    }

    /// `(e_j, h_j, P_j)` for frame `j`.
    pub fn material(&self, j: u64) -> Result<FrameMaterial> {
        let p = self.params();
        let (n, d) = (p.n() as u128, p.d as u128);
        let mut e_lfsr = self.e_lfsr.clone();
        let e = e_lfsr.bits_at((j as u128 * n) % e_lfsr.period(), p.n());
        let mut h_lfsr = self.h_lfsr.clone();
        let period = h_lfsr.period();
        let pos = (j as u128 % period).wrapping_mul(d) % period;
        let h = ControlVector::from_bits(bits_to_bools(&h_lfsr.bits_at(pos, p.d)));
        let perm = build_block_permutation_at(&self.key.t, p.q, p.v(), &self.perm_poly, j)?;
        Ok(FrameMaterial { e, h, perm })
    }

    /// Check membership in the split constellation: even (0-based) positions
    /// take `0..L`, odd positions take `-L..0`.
    pub fn check_constellation(&self, m: &[i64]) -> Result<()> {
        check_len(m, self.params().n())?;
        let l = self.params().l as i64;
        match m.iter().enumerate().position(|(i, &v)| {
            if i % 2 == 0 {
                !(0..l).contains(&v)
            } else {
                !(-l..0).contains(&v)
            }
        }) {
            Some(index) => Err(Error::ConstellationViolation { index }),
            None => Ok(()),
        }
    }

    /// `m' = m + 1 - e`.
    fn offset_message(m: &[i64], e: &[u8]) -> Vec<i64> {
        m.iter().zip(e).map(|(&v, &b)| v + 1 - b as i64).collect()
    }

    /// Encrypt `m` as frame `j`.
    pub fn encrypt_joint_at(&self, j: u64, m: &[i64]) -> Result<Ciphertext> {
        self.check_constellation(m)?;
        let mat = self.material(j)?;
        let x = self.nlf.apply_f(&Self::offset_message(m, &mat.e), &mat.h)?;
        let shaped = self.lattice.shape(&x)?;
        let lambda = self.lattice.encode(&shaped.x_prime)?;
        let sent: Vec<i64> = lambda.iter().zip(&mat.e).map(|(&v, &b)| v + 2 * b as i64).collect();
        Ok(Ciphertext {
            y: mat.perm.apply(&sent)?,
            counter: j,
            digest: self.digest,
        })
    }

    fn finish_decrypt(&self, mat: &FrameMaterial, lambda_tilde: &[i64]) -> Result<Vec<i64>> {
        let x = self.lattice.mod_recover(lambda_tilde)?;
        let m_prime = self.nlf.invert_f(&x, &mat.h)?;
        Ok(m_prime.iter().zip(&mat.e).map(|(&v, &b)| v - 1 + b as i64).collect())
    }

    /// Decrypt a noisy observation of frame `j`. With `sigma == 0` the
    /// observation is rounded instead of decoded.
    pub fn decrypt_joint_at(&self, j: u64, r: &[f64], sigma: f64) -> Result<Vec<i64>> {
        check_len(r, self.params().n())?;
        let mat = self.material(j)?;
        let unpermuted = mat.perm.apply_inverse(r)?;
        let centred: Vec<f64> = unpermuted.iter().zip(&mat.e).map(|(&v, &b)| v - 2.0 * b as f64).collect();
        let lambda_tilde = if sigma == 0.0 {
            centred.iter().map(|&v| libm::round(v) as i64).collect()
        } else {
            decode(&self.lattice, &self.decoder, &centred, sigma)?
        };
        self.finish_decrypt(&mat, &lambda_tilde)
    }

    /// Decrypt a noiseless integer ciphertext of frame `j`.
    pub fn decrypt_joint_exact(&self, j: u64, y: &[i64]) -> Result<Vec<i64>> {
        check_len(y, self.params().n())?;
        let mat = self.material(j)?;
        let unpermuted = mat.perm.apply_inverse(y)?;
        let lambda_tilde: Vec<i64> = unpermuted.iter().zip(&mat.e).map(|(&v, &b)| v - 2 * b as i64).collect();
        self.finish_decrypt(&mat, &lambda_tilde)
    }

    /// Decrypt a ciphertext at its own counter, checking the digest.
    pub fn decrypt(&self, ct: &Ciphertext) -> Result<Vec<i64>> {
        if ct.digest != self.digest {
            return Err(Error::DigestMismatch);
        }
        self.decrypt_joint_exact(ct.counter, &ct.y)
    }

    /// Encryption without hypercube shaping; `m` may be any integer vector.
    pub fn encrypt_raw_at(&self, j: u64, m: &[i64]) -> Result<Vec<i64>> {
        check_len(m, self.params().n())?;
        let mat = self.material(j)?;
        let x = self.nlf.apply_f(&Self::offset_message(m, &mat.e), &mat.h)?;
        let lambda = self.lattice.encode(&x)?;
        let sent: Vec<i64> = lambda.iter().zip(&mat.e).map(|(&v, &b)| v + 2 * b as i64).collect();
        mat.perm.apply(&sent)
    }

    /// Inverse of [`encrypt_raw_at`](Self::encrypt_raw_at).
    pub fn decrypt_raw_at(&self, j: u64, y: &[i64]) -> Result<Vec<i64>> {
        check_len(y, self.params().n())?;
        let mat = self.material(j)?;
        let unpermuted = mat.perm.apply_inverse(y)?;
        let mut lambda = Vec::with_capacity(y.len());
        for (&v, &b) in unpermuted.iter().zip(&mat.e) {
            let t = v - 2 * b as i64;
            if t % 2 == 0 {
                return Err(Error::NotLatticePoint);
            }
            lambda.push((t + 1) / 2);
        }
        let x = self.lattice.solve_generator(&lambda)?;
        let m_prime = self.nlf.invert_f(&x, &mat.h)?;
        Ok(m_prime.iter().zip(&mat.e).map(|(&v, &b)| v - 1 + b as i64).collect())
    }

    pub fn session(&self) -> CipherSession<'_> {
        CipherSession::new(self, 0)
    }
}

/// A frame counter over a [`CipherContext`]. The counter advances on every
/// call, whether or not the frame succeeds.
#[derive(Clone, Debug)]
pub struct CipherSession<'a> {
    ctx: &'a CipherContext,
    counter: u64,
}

impl<'a> CipherSession<'a> {
    pub fn new(ctx: &'a CipherContext, counter: u64) -> Self {
        Self { ctx, counter }
    }

    pub fn counter(&self) -> u64 {
        self.counter
    }

    fn advance(&mut self) -> u64 {
        let j = self.counter;
        self.counter += 1;
        j
    }

    pub fn encrypt(&mut self, m: &[i64]) -> Result<Ciphertext> {
        let j = self.advance();
        self.ctx.encrypt_joint_at(j, m)
    }

    /// Decrypt the next frame using the session's own counter.
    pub fn decrypt_next(&mut self, r: &[f64], sigma: f64) -> Result<Vec<i64>> {
        let j = self.advance();
        self.ctx.decrypt_joint_at(j, r, sigma)
    }

    pub fn decrypt_next_exact(&mut self, y: &[i64]) -> Result<Vec<i64>> {
        let j = self.advance();
        self.ctx.decrypt_joint_exact(j, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand_chacha::ChaCha8Rng;

    /// A small but valid parameter set: n = 26.
    pub(crate) const SMALL: SchemeParams = SchemeParams {
        b: 13,
        n0: 2,
        dv: 3,
        q: 13,
        l: 4,
        d: 8,
    };

    fn message(ctx: &CipherContext, rng: &mut ChaCha8Rng) -> Vec<i64> {
        let l = ctx.params().l as i64;
        (0..ctx.params().n())
            .map(|i| if i % 2 == 0 { rng.random_range(0..l) } else { rng.random_range(-l..0) })
            .collect()
    }

    #[test]
    fn keygen_is_deterministic_and_valid() {
        let a = keygen(SchemeParams::REFERENCE, 7).unwrap();
        assert_eq!(a, keygen(SchemeParams::REFERENCE, 7).unwrap());
        assert_ne!(a, keygen(SchemeParams::REFERENCE, 8).unwrap());
        assert_eq!(a.bit_len(), 214);
        assert_eq!((a.s.len(), a.h_seed.len(), a.t.len()), (9, 61, 36));
    }

    #[test]
    fn exact_round_trip_reference() {
        let ctx = CipherContext::new(keygen(SchemeParams::REFERENCE, 1).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut session = ctx.session();
        for _ in 0..20 {
            let m = message(&ctx, &mut rng);
            let ct = session.encrypt(&m).unwrap();
            assert!(ct.within_bounds(ctx.params()));
            assert_eq!(ctx.decrypt(&ct).unwrap(), m);
            let r: Vec<f64> = ct.y.iter().map(|&v| v as f64).collect();
            assert_eq!(ctx.decrypt_joint_at(ct.counter, &r, 0.0).unwrap(), m);
        }
        assert_eq!(session.counter(), 20);
    }

    #[test]
    fn raw_round_trip() {
        let ctx = CipherContext::new(keygen(SMALL, 3).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for j in 0..50 {
            let m: Vec<i64> = (0..26).map(|_| rng.random_range(-100..100)).collect();
            let y = ctx.encrypt_raw_at(j, &m).unwrap();
            assert_eq!(ctx.decrypt_raw_at(j, &y).unwrap(), m);
        }
    }

    #[test]
    fn constellation_is_enforced() {
        let ctx = CipherContext::new(keygen(SMALL, 3).unwrap()).unwrap();
        let mut m = vec![0i64; 26];
        for i in (1..26).step_by(2) {
            m[i] = -1;
        }
        assert!(ctx.encrypt_joint_at(0, &m).is_ok());
        m[4] = 4;
        assert_eq!(ctx.encrypt_joint_at(0, &m), Err(Error::ConstellationViolation { index: 4 }));
        m[4] = 0;
        m[3] = 0;
        assert_eq!(ctx.encrypt_joint_at(0, &m), Err(Error::ConstellationViolation { index: 3 }));
    }

    #[test]
    fn wrong_counter_garbles() {
        let ctx = CipherContext::new(keygen(SchemeParams::REFERENCE, 5).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let m = message(&ctx, &mut rng);
        let ct = ctx.encrypt_joint_at(10, &m).unwrap();
        match ctx.decrypt_joint_exact(11, &ct.y) {
            Ok(out) => assert_ne!(out, m),
            Err(_) => {}
        }
    }

    #[test]
    fn digest_depends_on_params_only() {
        let a = keygen(SchemeParams::REFERENCE, 1).unwrap();
        let b = keygen(SchemeParams::REFERENCE, 2).unwrap();
        assert_eq!(params_digest(&a.params, &a.polys), params_digest(&b.params, &b.polys));
        let c = keygen(SchemeParams { l: 8, ..SchemeParams::REFERENCE }, 1).unwrap();
        assert_ne!(params_digest(&a.params, &a.polys), params_digest(&c.params, &c.polys));
    }

    #[test]
    fn reuse_periods() {
        let ctx = CipherContext::new(keygen(SchemeParams::REFERENCE, 1).unwrap()).unwrap();
        // P_e = 511^2 = 261121, gcd with 258 is 1
        assert_eq!(ctx.error_reuse_frames(), 261_121);
        assert_eq!(ctx.permutation_reuse_frames(), 63);
        let ph = ((1u128 << 61) - 1) * ((1u128 << 61) - 1);
        assert_eq!(ctx.control_reuse_frames(), ph / ph.gcd(&61));
    }

    #[test]
    fn invalid_keys_rejected() {
        let mut k = keygen(SMALL, 1).unwrap();
        k.s = vec![0; k.s.len()];
        assert!(CipherContext::new(k.clone()).is_err());
        let mut k = keygen(SMALL, 1).unwrap();
        k.t.truncate(1);
        assert!(k.validate().is_err());
    }
}
