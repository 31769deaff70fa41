//! Self-delimiting Fibonacci code streams.
//!
//! A codeword is the Zeckendorf digits of `n >= 1`, least significant
//! first, followed by one extra `1`. Zeckendorf digits never hold two
//! adjacent ones, so the first `11` in the stream always ends a codeword.
//!
//! File layout: magic `FIBC`, one version byte, the value count as a
//! big-endian `u64`, then the codewords packed most-significant-bit-first
//! into bytes, zero-padded to a byte boundary.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::convert::{binary_to_zeck, BitSeq};
use crate::error::{Result, ZeckError};
use crate::seq::ZeckSeq;

pub const MAGIC: [u8; 4] = *b"FIBC";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 13;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeStream {
    pub count: u64,
    pub payload: Vec<u8>,
}

impl CodeStream {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.payload.len());
        out.extend_from_slice(&MAGIC);
        out.push(VERSION);
        out.extend_from_slice(&self.count.to_be_bytes());
        out.extend_from_slice(&self.payload);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(corrupt(format!("{} bytes is shorter than the header", bytes.len())));
        }
        if bytes[..4] != MAGIC {
            return Err(corrupt("bad magic"));
        }
        if bytes[4] != VERSION {
            return Err(corrupt(format!("unsupported version {}", bytes[4])));
        }
        let count = u64::from_be_bytes(bytes[5..HEADER_LEN].try_into().expect("8 header bytes"));
        Ok(CodeStream { count, payload: bytes[HEADER_LEN..].to_vec() })
    }
}

fn corrupt(msg: impl Into<String>) -> ZeckError {
    ZeckError::Corrupt(msg.into())
}

/// Codeword bits for `n >= 1`.
pub fn codeword(n: &BigUint) -> Result<Vec<u8>> {
    if n.is_zero() {
        return Err(ZeckError::Domain("the Fibonacci code starts at 1; encode n + 1 to carry zeros".into()));
    }
    let z = binary_to_zeck(&BitSeq::from_biguint(n))?;
    let mut bits: Vec<u8> = z.digits().iter().rev().copied().collect();
    bits.push(1);
    Ok(bits)
}

/// Concatenated codewords before byte packing.
pub fn payload_bits(values: &[BigUint]) -> Result<Vec<u8>> {
    let mut bits = Vec::new();
    for v in values {
        bits.extend(codeword(v)?);
    }
    Ok(bits)
}

pub fn encode_stream(values: &[BigUint]) -> Result<CodeStream> {
    let bits = payload_bits(values)?;
    let mut payload = vec![0u8; bits.len().div_ceil(8)];
    for (i, &b) in bits.iter().enumerate() {
        payload[i / 8] |= b << (7 - i % 8);
    }
    Ok(CodeStream { count: values.len() as u64, payload })
}

pub fn decode_stream(c: &CodeStream) -> Result<Vec<BigUint>> {
    let total = c.payload.len() * 8;
    if c.count.saturating_mul(2) > total as u64 {
        return Err(corrupt(format!("{} codewords cannot fit in {total} payload bits", c.count)));
    }
    let bit = |i: usize| (c.payload[i / 8] >> (7 - i % 8)) & 1;
    let mut values = Vec::with_capacity(c.count as usize);
    let mut pos = 0;
    for k in 0..c.count {
        let start = pos;
        let mut prev = 0;
        loop {
            if pos == total {
                return Err(corrupt(format!("codeword {k} is truncated")));
            }
            let b = bit(pos);
            pos += 1;
            if prev == 1 && b == 1 {
                break;
            }
            prev = b;
        }
        let digits: Vec<u8> = (start..pos - 1).rev().map(bit).collect();
        let z = ZeckSeq::from_digits(digits).map_err(|_| corrupt(format!("codeword {k} is malformed")))?;
        values.push(z.to_biguint());
    }
    if total - pos >= 8 || (pos..total).any(|i| bit(i) != 0) {
        return Err(corrupt(format!("payload holds more than {} codewords", c.count)));
    }
    Ok(values)
}
