//! Byte streams to constellation frames and back.
//!
//! Each coordinate carries `log2 L` payload bits, least significant bit
//! first. A symbol `u` becomes `u` on even coordinates and `-1 - u` on odd
//! ones, which lands in `0..L` and `-L..0` respectively.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Whole payload bytes per frame, `⌊n·log2 L / 8⌋`.
pub fn bytes_per_frame(n: usize, l: u32) -> usize {
    n * l.trailing_zeros() as usize / 8
}

/// A frame of constellation symbols and the number of payload bytes it holds.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PlainFrame {
    pub symbols: Vec<i64>,
    pub payload_len: usize,
}

/// Pack at most [`bytes_per_frame`] bytes into `n` symbols, zero padded.
pub fn pack_frame(bytes: &[u8], n: usize, l: u32) -> Result<Vec<i64>> {
    if !l.is_power_of_two() || l < 2 {
        return Err(Error::InvalidParams("L must be a power of two, at least 2"));
    }
    if bytes.len() > bytes_per_frame(n, l) {
        return Err(Error::DimensionMismatch {
            expected: bytes_per_frame(n, l),
            got: bytes.len(),
        });
    }
    let w = l.trailing_zeros() as usize;
    let bit = |i: usize| bytes.get(i / 8).map_or(0, |&b| ((b >> (i % 8)) & 1) as i64);
    Ok((0..n)
        .map(|c| {
            let u = (0..w).fold(0i64, |acc, k| acc | bit(c * w + k) << k);
            if c % 2 == 0 {
                u
            } else {
                -1 - u
            }
        })
        .collect())
}

/// Read `payload_len` bytes back out of a frame. Symbols are masked to
/// `log2 L` bits, so garbled input still yields bytes.
pub fn unpack_frame(symbols: &[i64], l: u32, payload_len: usize) -> Result<Vec<u8>> {
    if payload_len > bytes_per_frame(symbols.len(), l) {
        return Err(Error::DimensionMismatch {
            expected: bytes_per_frame(symbols.len(), l),
            got: payload_len,
        });
    }
    let w = l.trailing_zeros() as usize;
    let mask = l as i64 - 1;
    let mut out = vec![0u8; payload_len];
    for (c, &s) in symbols.iter().enumerate() {
        let u = if c % 2 == 0 { s } else { -1 - s } & mask;
        for k in 0..w {
            let i = c * w + k;
            if i / 8 < payload_len && (u >> k) & 1 == 1 {
                out[i / 8] |= 1 << (i % 8);
            }
        }
    }
    Ok(out)
}

/// Split a byte stream into frames. Empty input gives one empty frame.
pub fn split(data: &[u8], n: usize, l: u32) -> Result<Vec<PlainFrame>> {
    let per = bytes_per_frame(n, l);
    if per == 0 {
        return Err(Error::InvalidParams("frame carries no whole byte"));
    }
    if data.is_empty() {
        return Ok(vec![PlainFrame {
            symbols: pack_frame(&[], n, l)?,
            payload_len: 0,
        }]);
    }
    data.chunks(per)
        .map(|chunk| {
            Ok(PlainFrame {
                symbols: pack_frame(chunk, n, l)?,
                payload_len: chunk.len(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sizes() {
        assert_eq!(bytes_per_frame(258, 16), 129);
        assert_eq!(bytes_per_frame(26, 4), 6);
        assert_eq!(bytes_per_frame(258, 2), 32);
    }

    #[test]
    fn known_layout() {
        // 0xA5 = 1010_0101: nibbles 5 then A
        let s = pack_frame(&[0xA5], 4, 16).unwrap();
        assert_eq!(s, vec![5, -11, 0, -1]);
    }

    #[test]
    fn empty_input() {
        let frames = split(&[], 258, 16).unwrap();
        assert_eq!(frames.len(), 1);
        assert_eq!(frames[0].payload_len, 0);
    }

    proptest! {
        #[test]
        fn round_trip(data in proptest::collection::vec(any::<u8>(), 0..600), e in 1u32..6) {
            let (n, l) = (258, 1u32 << e);
            let frames = split(&data, n, l).unwrap();
            let mut out = Vec::new();
            for f in &frames {
                for (i, &s) in f.symbols.iter().enumerate() {
                    let ok = if i % 2 == 0 { (0..l as i64).contains(&s) } else { (-(l as i64)..0).contains(&s) };
                    prop_assert!(ok);
                }
                out.extend(unpack_frame(&f.symbols, l, f.payload_len).unwrap());
            }
            prop_assert_eq!(out, data);
        }
    }
}
