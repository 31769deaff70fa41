//! Binary <-> Zeckendorf conversion by balanced trees of additions.

use std::fmt;
use std::str::FromStr;
use std::sync::{LazyLock, RwLock};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::adder;
use crate::error::{contract, invariant, Result, ZeckError};
use crate::fib;
use crate::seq::{canonical_violation, greedy_zeckendorf, ZeckSeq};
use crate::tree::{self, TreeShape};

/// Binary digits, most-significant-first. Zero is the empty sequence and
/// prints as `0`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BitSeq(Vec<u8>);

impl BitSeq {
    pub fn zero() -> Self {
        BitSeq(Vec::new())
    }

    pub fn from_biguint(n: &BigUint) -> Self {
        if n.is_zero() {
            return BitSeq::zero();
        }
        let bits = n.bits();
        BitSeq((0..bits).rev().map(|i| n.bit(i) as u8).collect())
    }

    pub fn to_biguint(&self) -> BigUint {
        let mut n = BigUint::zero();
        let len = self.0.len() as u64;
        for (i, &b) in self.0.iter().enumerate() {
            if b == 1 {
                n.set_bit(len - 1 - i as u64, true);
            }
        }
        n
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for BitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for &b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for BitSeq {
    type Err = ZeckError;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(ZeckError::Parse { input: s.into(), reason: "empty binary string".into() });
        }
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(0),
                '1' => bits.push(1),
                _ => {
                    return Err(ZeckError::Parse { input: s.into(), reason: format!("unexpected character {c:?}") })
                }
            }
        }
        let lead = bits.iter().take_while(|&&b| b == 0).count();
        if lead > 0 && bits.len() > 1 {
            return Err(ZeckError::Parse { input: s.into(), reason: "leading zero".into() });
        }
        bits.drain(..lead);
        Ok(BitSeq(bits))
    }
}

static POW2: LazyLock<RwLock<Vec<ZeckSeq>>> = LazyLock::new(|| RwLock::new(vec![ZeckSeq::one()]));

/// Zeckendorf form of `2^i`, built by doubling with the adder and checked
/// against the greedy construction as each entry is added.
pub fn pow2_zeck(i: usize) -> Result<ZeckSeq> {
    if let Some(z) = POW2.read().expect("pow2 table poisoned").get(i) {
        return Ok(z.clone());
    }
    let mut table = POW2.write().expect("pow2 table poisoned");
    while table.len() <= i {
        let prev = table.last().expect("table starts with 2^0");
        let next = adder::add(prev, prev)?;
        let e = table.len();
        if next != greedy_zeckendorf(&(BigUint::from(1u8) << e)) {
            return Err(invariant(format!("doubling chain disagrees with greedy at 2^{e}")));
        }
        table.push(next);
    }
    Ok(table[i].clone())
}

/// Like [`binary_to_zeck_shaped`] but only the set bits enter the tree.
pub fn binary_to_zeck(b: &BitSeq) -> Result<ZeckSeq> {
    let n = b.len();
    let leaves = b
        .bits()
        .iter()
        .enumerate()
        .filter(|&(_, &bit)| bit == 1)
        .map(|(pos, _)| pow2_zeck(n - 1 - pos))
        .collect::<Result<Vec<_>>>()?;
    tree::reduce(leaves, ZeckSeq::zero(), adder::add).map(|(z, _)| z)
}

/// One operand per bit (`2^i` or zero), summed by a balanced tree of
/// Zeckendorf adders.
pub fn binary_to_zeck_shaped(b: &BitSeq) -> Result<(ZeckSeq, TreeShape)> {
    let n = b.len();
    let leaves = b
        .bits()
        .iter()
        .enumerate()
        .map(|(pos, &bit)| if bit == 1 { pow2_zeck(n - 1 - pos) } else { Ok(ZeckSeq::zero()) })
        .collect::<Result<Vec<_>>>()?;
    tree::reduce(leaves, ZeckSeq::zero(), adder::add)
}

pub fn zeck_to_binary(z: &ZeckSeq) -> Result<BitSeq> {
    zeck_to_binary_shaped(z).map(|(b, _)| b)
}

/// One binary operand per digit (`F_k` or zero), summed by a balanced tree
/// of exact binary additions.
pub fn zeck_to_binary_shaped(z: &ZeckSeq) -> Result<(BitSeq, TreeShape)> {
    if let Some(v) = canonical_violation(z.digits()) {
        return Err(contract(format!("Zeckendorf input is not canonical: {v}")));
    }
    let weights = fib::weights(z.len());
    let leaves: Vec<BigUint> = z
        .digits()
        .iter()
        .rev()
        .zip(weights.iter())
        .map(|(&d, w)| if d == 1 { (**w).clone() } else { BigUint::zero() })
        .collect();
    let (sum, shape) = tree::reduce(leaves, BigUint::zero(), |x, y| Ok(x + y))?;
    Ok((BitSeq::from_biguint(&sum), shape))
}

/// Decimal or binary text to Zeckendorf, via [`binary_to_zeck`].
pub fn natural_to_zeck(n: &BigUint) -> Result<ZeckSeq> {
    binary_to_zeck(&BitSeq::from_biguint(n))
}

pub fn zeck_to_natural(z: &ZeckSeq) -> Result<BigUint> {
    zeck_to_binary(z).map(|b| b.to_biguint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::greedy_u64;
    use crate::tree::ceil_log2;

    fn b(s: &str) -> BitSeq {
        s.parse().unwrap()
    }

    fn z(s: &str) -> ZeckSeq {
        s.parse().unwrap()
    }

    #[test]
    fn pow2_examples() {
        assert_eq!(pow2_zeck(0).unwrap(), z("1"));
        assert_eq!(pow2_zeck(2).unwrap(), z("101"));
        assert_eq!(pow2_zeck(3).unwrap(), z("10000"));
        assert_eq!(pow2_zeck(64).unwrap(), greedy_zeckendorf(&(BigUint::from(1u8) << 64)));
    }

    #[test]
    fn to_zeck_examples() {
        assert!(binary_to_zeck(&b("0")).unwrap().is_zero());
        assert_eq!(binary_to_zeck(&b("111")).unwrap(), z("1010"));
        assert_eq!(binary_to_zeck(&b("100000000")).unwrap(), greedy_u64(256));
    }

    #[test]
    fn to_binary_examples() {
        assert_eq!(zeck_to_binary(&z("0")).unwrap().to_string(), "0");
        assert_eq!(zeck_to_binary(&z("1010")).unwrap(), b("111"));
        assert_eq!(zeck_to_binary(&greedy_u64(24)).unwrap(), b("11000"));
    }

    #[test]
    fn bitseq_parsing() {
        assert!(b("0").is_zero());
        assert!("0101".parse::<BitSeq>().is_err());
        assert!("12".parse::<BitSeq>().is_err());
        assert_eq!(BitSeq::from_biguint(&BigUint::from(6u8)).to_string(), "110");
    }

    #[test]
    fn tree_heights() {
        for v in [1u64, 2, 3, 7, 8, 255, 256, 1 << 20, 123_456_789] {
            let bits = BitSeq::from_biguint(&BigUint::from(v));
            let (_, shape) = binary_to_zeck_shaped(&bits).unwrap();
            assert_eq!(shape.leaves, bits.len());
            assert_eq!(shape.height, ceil_log2(bits.len()));
            let zz = greedy_u64(v);
            let (_, shape) = zeck_to_binary_shaped(&zz).unwrap();
            assert_eq!(shape.height, ceil_log2(zz.len()));
        }
    }

    #[test]
    fn round_trip_small() {
        for v in 0..=5_000u64 {
            let bits = BitSeq::from_biguint(&BigUint::from(v));
            let zz = binary_to_zeck(&bits).unwrap();
            assert_eq!(zz, greedy_u64(v));
            assert_eq!(zeck_to_binary(&zz).unwrap(), bits);
        }
    }
}
