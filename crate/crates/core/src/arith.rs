//! Multiplication, division with remainder and square root with remainder.
//!
//! `mul_fenwick` stays in Zeckendorf form and uses only the adder. The other
//! operations convert to binary, work there with plain quadratic shift and
//! subtract loops, and convert back.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::adder;
use crate::convert::{binary_to_zeck, zeck_to_binary, BitSeq};
use crate::error::{Result, ZeckError};
use crate::seq::ZeckSeq;

/// Adder calls made by one multiplication.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MulStats {
    /// Additions building the partial products `X * F_k`.
    pub partial_products: usize,
    /// Additions accumulating the selected partial products.
    pub accumulations: usize,
}

impl MulStats {
    pub fn additions(&self) -> usize {
        self.partial_products + self.accumulations
    }
}

pub fn mul_fenwick(a: &ZeckSeq, b: &ZeckSeq) -> Result<ZeckSeq> {
    mul_fenwick_counted(a, b).map(|(p, _)| p)
}

/// `X * Y = sum over y_k = 1 of X * F_k`, where the partial products follow
/// the Fibonacci recurrence: `P_2 = X`, `P_3 = X + X`,
/// `P_{k+1} = P_k + P_{k-1}`.
pub fn mul_fenwick_counted(a: &ZeckSeq, b: &ZeckSeq) -> Result<(ZeckSeq, MulStats)> {
    let mut stats = MulStats::default();
    let mut acc = ZeckSeq::zero();
    if a.is_zero() || b.is_zero() {
        return Ok((acc, stats));
    }
    let top = b.len() + 1;
    let mut prev = a.clone(); // P_{k-1}
    let mut cur = a.clone(); // P_k
    for k in 2..=top {
        if k == 3 {
            cur = adder::add(a, a)?;
            stats.partial_products += 1;
        } else if k > 3 {
            let next = adder::add(&cur, &prev)?;
            stats.partial_products += 1;
            prev = std::mem::replace(&mut cur, next);
        }
        #[cfg(debug_assertions)]
        {
            use crate::seq::Valued;
            let f = crate::fib::fib_at(k)?;
            debug_assert_eq!(cur.value(), a.value() * num_bigint::BigInt::from((*f).clone()), "P_{k}");
        }
        if b.digit_at(k) == 1 {
            acc = if acc.is_zero() {
                cur.clone()
            } else {
                stats.accumulations += 1;
                adder::add(&acc, &cur)?
            };
        }
    }
    Ok((acc, stats))
}

/// Convert both operands, multiply in binary, convert the product back.
pub fn mul_binary(a: &ZeckSeq, b: &ZeckSeq) -> Result<ZeckSeq> {
    let x = zeck_to_binary(a)?;
    let y = zeck_to_binary(b)?;
    binary_to_zeck(&shift_add_mul(&x, &y))
}

pub fn divrem(x: &ZeckSeq, d: &ZeckSeq) -> Result<(ZeckSeq, ZeckSeq)> {
    let xb = zeck_to_binary(x)?;
    let db = zeck_to_binary(d)?;
    let (q, r) = restoring_divide(&xb, &db)?;
    Ok((binary_to_zeck(&q)?, binary_to_zeck(&r)?))
}

/// `(s, r)` with `s = floor(sqrt(x))` and `r = x - s^2`.
pub fn sqrt_rem(x: &ZeckSeq) -> Result<(ZeckSeq, ZeckSeq)> {
    let xb = zeck_to_binary(x)?;
    let (s, r) = restoring_sqrt(&xb);
    Ok((binary_to_zeck(&s)?, binary_to_zeck(&r)?))
}

/// Schoolbook product: one shifted addition per set bit of the shorter
/// operand.
pub fn shift_add_mul(x: &BitSeq, y: &BitSeq) -> BitSeq {
    let (long, short) = if x.len() >= y.len() { (x, y) } else { (y, x) };
    let base = long.to_biguint();
    let mut acc = BigUint::zero();
    let n = short.len();
    for (i, &bit) in short.bits().iter().enumerate() {
        if bit == 1 {
            acc += &base << (n - 1 - i);
        }
    }
    BitSeq::from_biguint(&acc)
}

/// Restoring long division, one quotient bit per dividend bit.
pub fn restoring_divide(x: &BitSeq, d: &BitSeq) -> Result<(BitSeq, BitSeq)> {
    if d.is_zero() {
        return Err(ZeckError::DivisionByZero);
    }
    let divisor = d.to_biguint();
    let mut rem = BigUint::zero();
    let mut quotient = Vec::with_capacity(x.len());
    for &bit in x.bits() {
        rem <<= 1u32;
        if bit == 1 {
            rem += 1u32;
        }
        if rem >= divisor {
            rem -= &divisor;
            quotient.push(1u8);
        } else {
            quotient.push(0u8);
        }
    }
    let q = bits_to_biguint(&quotient);
    Ok((BitSeq::from_biguint(&q), BitSeq::from_biguint(&rem)))
}

fn bits_to_biguint(bits: &[u8]) -> BigUint {
    bits.iter().fold(BigUint::zero(), |acc, &b| (acc << 1u32) + BigUint::from(b))
}

/// Digit-by-digit (base 4) restoring square root.
pub fn restoring_sqrt(x: &BitSeq) -> (BitSeq, BitSeq) {
    let mut num = x.to_biguint();
    if num.is_zero() {
        return (BitSeq::zero(), BitSeq::zero());
    }
    let top = (num.bits() - 1) & !1;
    let mut bit = BigUint::one() << top;
    let mut root = BigUint::zero();
    while !bit.is_zero() {
        let trial = &root + &bit;
        if num >= trial {
            num -= &trial;
            root = (root >> 1u32) + &bit;
        } else {
            root >>= 1u32;
        }
        bit >>= 2u32;
    }
    (BitSeq::from_biguint(&root), BitSeq::from_biguint(&num))
}
