//! Binary frame files.
//!
//! Header: 4-byte magic (`LCCT` for ciphertexts, `LCOB` for channel
//! observations), a version byte, the 8-byte parameter digest and `n` as a
//! little-endian `u32`. Each frame is then the counter (`u64`), the payload
//! length in bytes (`u32`) and `n` coordinates, `i32` for ciphertexts and
//! `f64` for observations, all little-endian.

use std::io::{self, Read, Write};

use crate::{Error, Result};

pub const CIPHER_MAGIC: [u8; 4] = *b"LCCT";
pub const OBSERVATION_MAGIC: [u8; 4] = *b"LCOB";
pub const VERSION: u8 = 1;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FrameKind {
    Cipher,
    Observation,
}

impl FrameKind {
    fn magic(self) -> [u8; 4] {
        match self {
            FrameKind::Cipher => CIPHER_MAGIC,
            FrameKind::Observation => OBSERVATION_MAGIC,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FileHeader {
    pub kind: FrameKind,
    pub digest: [u8; 8],
    pub n: u32,
}

#[derive(Clone, PartialEq, Debug)]
pub enum Coords {
    Exact(Vec<i64>),
    Observed(Vec<f64>),
}

#[derive(Clone, PartialEq, Debug)]
pub struct Frame {
    pub counter: u64,
    pub payload_len: u32,
    pub coords: Coords,
}

pub struct FrameWriter<W: Write> {
    inner: W,
    header: FileHeader,
}

impl<W: Write> FrameWriter<W> {
    pub fn new(mut inner: W, header: FileHeader) -> Result<Self> {
        inner.write_all(&header.kind.magic())?;
        inner.write_all(&[VERSION])?;
        inner.write_all(&header.digest)?;
        inner.write_all(&header.n.to_le_bytes())?;
        Ok(Self { inner, header })
    }

    fn frame_head(&mut self, counter: u64, payload_len: u32, len: usize) -> Result<()> {
        if len != self.header.n as usize {
            return Err(Error::FrameFormat(format!("frame has {len} coordinates, header says {}", self.header.n)));
        }
        self.inner.write_all(&counter.to_le_bytes())?;
        self.inner.write_all(&payload_len.to_le_bytes())?;
        Ok(())
    }

    pub fn write_exact(&mut self, counter: u64, payload_len: u32, y: &[i64]) -> Result<()> {
        if self.header.kind != FrameKind::Cipher {
            return Err(Error::FrameFormat("integer frame in an observation file".into()));
        }
        self.frame_head(counter, payload_len, y.len())?;
        for &v in y {
            let v = i32::try_from(v).map_err(|_| Error::FrameFormat(format!("coordinate {v} does not fit in 32 bits")))?;
            self.inner.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn write_observed(&mut self, counter: u64, payload_len: u32, r: &[f64]) -> Result<()> {
        if self.header.kind != FrameKind::Observation {
            return Err(Error::FrameFormat("real frame in a ciphertext file".into()));
        }
        self.frame_head(counter, payload_len, r.len())?;
        for &v in r {
            self.inner.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        self.inner.flush()?;
        Ok(self.inner)
    }
}

/// Fill `buf` completely; `Ok(false)` on a clean end of input before the
/// first byte.
fn read_full<R: Read>(r: &mut R, buf: &mut [u8]) -> Result<bool> {
    let mut filled = 0;
    while filled < buf.len() {
        match r.read(&mut buf[filled..]) {
            Ok(0) if filled == 0 => return Ok(false),
            Ok(0) => return Err(Error::FrameFormat("truncated frame".into())),
            Ok(k) => filled += k,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(true)
}

pub struct FrameReader<R: Read> {
    inner: R,
    header: FileHeader,
    buf: Vec<u8>,
}

impl<R: Read> FrameReader<R> {
    pub fn new(mut inner: R) -> Result<Self> {
        let mut head = [0u8; 17];
        if !read_full(&mut inner, &mut head)? {
            return Err(Error::FrameFormat("empty file".into()));
        }
        let kind = match head[..4].try_into().unwrap() {
            CIPHER_MAGIC => FrameKind::Cipher,
            OBSERVATION_MAGIC => FrameKind::Observation,
            _ => return Err(Error::FrameFormat("unknown magic".into())),
        };
        if head[4] != VERSION {
            return Err(Error::FrameFormat(format!("unsupported version {}", head[4])));
        }
        let header = FileHeader {
            kind,
            digest: head[5..13].try_into().unwrap(),
            n: u32::from_le_bytes(head[13..17].try_into().unwrap()),
        };
        Ok(Self {
            inner,
            header,
            buf: Vec::new(),
        })
    }

    pub fn header(&self) -> &FileHeader {
        &self.header
    }

    pub fn next_frame(&mut self) -> Result<Option<Frame>> {
        let mut head = [0u8; 12];
        if !read_full(&mut self.inner, &mut head)? {
            return Ok(None);
        }
        let counter = u64::from_le_bytes(head[..8].try_into().unwrap());
        let payload_len = u32::from_le_bytes(head[8..].try_into().unwrap());
        let n = self.header.n as usize;
        let width = match self.header.kind {
            FrameKind::Cipher => 4,
            FrameKind::Observation => 8,
        };
        self.buf.resize(n * width, 0);
        if !read_full(&mut self.inner, &mut self.buf)? && n > 0 {
            return Err(Error::FrameFormat("truncated frame".into()));
        }
        let coords = match self.header.kind {
            FrameKind::Cipher => Coords::Exact(
                self.buf
                    .chunks_exact(4)
                    .map(|c| i32::from_le_bytes(c.try_into().unwrap()) as i64)
                    .collect(),
            ),
            FrameKind::Observation => Coords::Observed(
                self.buf
                    .chunks_exact(8)
                    .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                    .collect(),
            ),
        };
        Ok(Some(Frame {
            counter,
            payload_len,
            coords,
        }))
    }
}

impl<R: Read> Iterator for FrameReader<R> {
    type Item = Result<Frame>;

    fn next(&mut self) -> Option<Self::Item> {
        self.next_frame().transpose()
    }
}
