//! Text key files.
//!
//! ```text
//! latcrypt-key v1
//! b 43
//! n0 6
//! dv 3
//! q 43
//! L 16
//! d 61
//! polys 258:0 9:0 9:1 61:0 61:1 6:0
//! supports 108 <hex>
//! s 9 <hex>
//! h_seed 61 <hex>
//! t 36 <hex>
//! digest <hex>
//! ```
//!
//! Secret fields carry their bit length followed by the bits packed least
//! significant first. Support indices are written in `⌈log2 b⌉` bits each,
//! block by block. The digest binds ciphertexts to the parameters.

use std::fs;
use std::path::Path;

use latcrypt_core::cipher::{ceil_log2, params_digest, KeyPolys, SchemeParams, SecretKey};
use latcrypt_core::polytable::PolyId;
use latcrypt_core::rdfcode::QcCode;

use crate::{Error, Result};

pub const HEADER: &str = "latcrypt-key v1";

const SECRET_FIELDS: [&str; 4] = ["supports", "s", "h_seed", "t"];

fn to_hex_bits(bits: &[u8]) -> String {
    let mut bytes = vec![0u8; bits.len().div_ceil(8)];
    for (i, &b) in bits.iter().enumerate() {
        bytes[i / 8] |= (b & 1) << (i % 8);
    }
    hex::encode(bytes)
}

fn from_hex_bits(text: &str, len: usize) -> Option<Vec<u8>> {
    let bytes = hex::decode(text).ok()?;
    if bytes.len() != len.div_ceil(8) {
        return None;
    }
    let bits: Vec<u8> = (0..len).map(|i| (bytes[i / 8] >> (i % 8)) & 1).collect();
    // padding bits must be clear
    let padding = (len..bytes.len() * 8).any(|i| (bytes[i / 8] >> (i % 8)) & 1 == 1);
    (!padding).then_some(bits)
}

fn support_width(b: usize) -> usize {
    ceil_log2(b as u128) as usize
}

fn support_bits(code: &QcCode) -> Vec<u8> {
    let w = support_width(code.b());
    code.supports()
        .iter()
        .flatten()
        .flat_map(|&s| (0..w).map(move |k| ((s >> k) & 1) as u8))
        .collect()
}

pub fn to_string(key: &SecretKey) -> String {
    let p = &key.params;
    let polys = key
        .polys
        .all()
        .iter()
        .map(|id| format!("{}:{}", id.degree, id.index))
        .collect::<Vec<_>>()
        .join(" ");
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for (name, v) in [("b", p.b), ("n0", p.n0), ("dv", p.dv), ("q", p.q), ("L", p.l as usize), ("d", p.d)] {
        out.push_str(&format!("{name} {v}\n"));
    }
    out.push_str(&format!("polys {polys}\n"));
    for (name, bits) in [
        ("supports", support_bits(&key.code)),
        ("s", key.s.clone()),
        ("h_seed", key.h_seed.clone()),
        ("t", key.t.clone()),
    ] {
        out.push_str(&format!("{name} {} {}\n", bits.len(), to_hex_bits(&bits)));
    }
    out.push_str(&format!("digest {}\n", hex::encode(params_digest(p, &key.polys))));
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn field(&mut self, name: &str) -> Result<(usize, Vec<&'a str>)> {
        let (i, line) = self.inner.next().ok_or_else(|| Error::KeyFormat {
            line: 0,
            reason: format!("missing field `{name}`"),
        })?;
        let mut parts = line.split_whitespace();
        if parts.next() != Some(name) {
            return Err(bad(i + 1, format!("expected field `{name}`")));
        }
        Ok((i + 1, parts.collect()))
    }

    fn number(&mut self, name: &str) -> Result<usize> {
        let (line, rest) = self.field(name)?;
        match rest.as_slice() {
            [v] => v.parse().map_err(|_| bad(line, format!("`{name}` is not a number"))),
            _ => Err(bad(line, format!("`{name}` takes one value"))),
        }
    }

    fn bits(&mut self, name: &str, expected: usize) -> Result<Vec<u8>> {
        let (line, rest) = self.field(name)?;
        let [len, data] = rest.as_slice() else {
            return Err(bad(line, format!("`{name}` takes a length and hex data")));
        };
        let len: usize = len.parse().map_err(|_| bad(line, "bad bit length".into()))?;
        if len != expected {
            return Err(bad(line, format!("`{name}` should hold {expected} bits, not {len}")));
        }
        from_hex_bits(data, len).ok_or_else(|| bad(line, format!("`{name}` hex does not match its length")))
    }
}

fn bad(line: usize, reason: String) -> Error {
    Error::KeyFormat { line, reason }
}

pub fn parse(text: &str) -> Result<SecretKey> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    match lines.inner.next() {
        Some((_, h)) if h == HEADER => {}
        _ => return Err(bad(1, format!("expected `{HEADER}`"))),
    }
    let b = lines.number("b")?;
    let n0 = lines.number("n0")?;
    let dv = lines.number("dv")?;
    let q = lines.number("q")?;
    let l = lines.number("L")?;
    let d = lines.number("d")?;
    let params = SchemeParams {
        b,
        n0,
        dv,
        q,
        l: u32::try_from(l).map_err(|_| bad(6, "L too large".into()))?,
        d,
    };
    params.validate()?;

    let (line, ids) = lines.field("polys")?;
    let ids = ids
        .iter()
        .map(|s| {
            let (deg, idx) = s.split_once(':')?;
            Some(PolyId::new(deg.parse().ok()?, idx.parse().ok()?))
        })
        .collect::<Option<Vec<_>>>()
        .filter(|v| v.len() == 6)
        .ok_or_else(|| bad(line, "`polys` takes six degree:index pairs".into()))?;
    let polys = KeyPolys {
        u: ids[0],
        e_main: ids[1],
        e_reseed: ids[2],
        h_main: ids[3],
        h_reseed: ids[4],
        perm: ids[5],
    };

    let w = support_width(b);
    let sup = lines.bits("supports", n0 * dv * w)?;
    let supports = sup
        .chunks(dv * w.max(1))
        .map(|block| {
            block
                .chunks(w.max(1))
                .map(|c| c.iter().rev().fold(0usize, |acc, &x| acc << 1 | x as usize))
                .collect()
        })
        .collect();
    let code = QcCode::new(b, n0, dv, supports)?;
    let s = lines.bits("s", params.l1())?;
    let h_seed = lines.bits("h_seed", d)?;
    let t = lines.bits("t", params.v() * params.gamma())?;

    let (line, digest) = lines.field("digest")?;
    let expected = hex::encode(params_digest(&params, &polys));
    if digest.as_slice() != [expected.as_str()] {
        return Err(bad(line, "digest does not match the parameters".into()));
    }
    Ok(SecretKey::new(params, polys, code, s, h_seed, t)?)
}

/// Sum of the declared bit lengths of the secret fields in a key file.
pub fn secret_bit_count(text: &str) -> usize {
    text.lines()
        .filter_map(|line| {
            let mut parts = line.split_whitespace();
            let name = parts.next()?;
            if !SECRET_FIELDS.contains(&name) {
                return None;
            }
            parts.next()?.parse::<usize>().ok()
        })
        .sum()
}

pub fn save(path: impl AsRef<Path>, key: &SecretKey) -> Result<()> {
    fs::write(path, to_string(key))?;
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<SecretKey> {
    parse(&fs::read_to_string(path)?)
}
