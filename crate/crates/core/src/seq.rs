//! Digit-sequence types shared by every pass, exact valuation and the greedy
//! oracle.
//!
//! All sequences are stored most-significant-first. The last digit is the
//! coefficient of `F_2 = 1`, the one before it of `F_3 = 2`, and so on, so a
//! sequence's string form reads exactly like its storage.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::error::{Result, ZeckError};
use crate::fib;

/// Why a digit string is not a canonical Zeckendorf representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    DigitOutOfRange,
    AdjacentOnes,
    LeadingZero,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Violation::DigitOutOfRange => "digit out of range",
            Violation::AdjacentOnes => "adjacent ones",
            Violation::LeadingZero => "leading zero",
        })
    }
}

/// First reason `digits` fails to be canonical, if any. The single digit
/// `0` and the empty sequence are both the canonical zero.
pub fn canonical_violation(digits: &[u8]) -> Option<Violation> {
    if digits.iter().any(|&d| d > 1) {
        return Some(Violation::DigitOutOfRange);
    }
    if digits.windows(2).any(|w| w[0] == 1 && w[1] == 1) {
        return Some(Violation::AdjacentOnes);
    }
    if digits.len() > 1 && digits[0] == 0 {
        return Some(Violation::LeadingZero);
    }
    None
}

/// Whether a working sequence is already a canonical Zeckendorf string.
pub fn is_canonical(s: &WorkSeq) -> bool {
    canonical_violation(s.digits()).is_none()
}

/// Exact valuation `sum digit_k * F_k` of any digit sequence.
pub trait Valued {
    fn value(&self) -> BigInt;
}

/// Horner-style evaluation: with `S = sum d_k F_k` and `T = sum d_k F_{k-1}`
/// over the digits read so far, shifting every digit up one place maps
/// `(S, T)` to `(S + T, S)`, and a new last digit `d` adds `d * F_2` to `S`
/// and `d * F_1` to `T`.
pub(crate) fn value_of<D: Copy + Into<i64>>(digits: &[D]) -> BigInt {
    let mut s = BigInt::zero();
    let mut t = BigInt::zero();
    for &d in digits {
        let d: i64 = d.into();
        let shifted = &s + &t;
        t = std::mem::replace(&mut s, shifted);
        if d != 0 {
            s += d;
            t += d;
        }
    }
    s
}

fn strip_leading_zeros<D: Copy + PartialEq + Default>(digits: &mut Vec<D>) {
    let zero = D::default();
    let lead = digits.iter().take_while(|&&d| d == zero).count();
    digits.drain(..lead);
}

fn parse_digits(input: &str, allowed: &[(char, i8)]) -> Result<Vec<i8>> {
    if input.is_empty() {
        return Err(ZeckError::Parse { input: input.into(), reason: "empty digit string".into() });
    }
    input
        .chars()
        .map(|c| {
            allowed.iter().find(|(a, _)| *a == c).map(|&(_, d)| d).ok_or_else(|| ZeckError::Parse {
                input: input.into(),
                reason: format!("unexpected character {c:?}"),
            })
        })
        .collect()
}

fn write_digits(f: &mut fmt::Formatter<'_>, digits: impl Iterator<Item = char>) -> fmt::Result {
    let mut any = false;
    for c in digits {
        any = true;
        write!(f, "{c}")?;
    }
    if !any {
        f.write_str("0")?;
    }
    Ok(())
}

/// A canonical Zeckendorf representation: digits in `{0,1}`, no two adjacent
/// ones, no leading zeros. Zero is the empty sequence and prints as `0`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ZeckSeq(Vec<u8>);

impl ZeckSeq {
    pub fn zero() -> Self {
        ZeckSeq(Vec::new())
    }

    pub fn one() -> Self {
        ZeckSeq(vec![1])
    }

    /// Accepts any canonical digit vector; leading zeros are stripped first.
    pub fn from_digits(mut digits: Vec<u8>) -> Result<Self> {
        strip_leading_zeros(&mut digits);
        match canonical_violation(&digits) {
            None => Ok(ZeckSeq(digits)),
            Some(v) => Err(crate::error::contract(format!("non-canonical Zeckendorf digits: {v}"))),
        }
    }

    #[cfg(test)]
    pub(crate) fn raw(digits: Vec<u8>) -> Self {
        ZeckSeq(digits)
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn into_digits(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Same as [`ZeckSeq::is_zero`]: zero is the empty sequence.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Digit of `F_k` (`k >= 2`), zero beyond the top.
    pub fn digit_at(&self, k: usize) -> u8 {
        if k < 2 || k - 2 >= self.0.len() {
            0
        } else {
            self.0[self.0.len() - 1 - (k - 2)]
        }
    }

    /// Non-negative value; the canonical digits never produce a negative sum.
    pub fn to_biguint(&self) -> BigUint {
        self.value().to_biguint().expect("Zeckendorf value is non-negative")
    }

    pub fn to_work(&self) -> WorkSeq {
        WorkSeq(self.0.clone())
    }
}

impl Valued for ZeckSeq {
    fn value(&self) -> BigInt {
        value_of(&self.0)
    }
}

impl fmt::Display for ZeckSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_digits(f, self.0.iter().map(|&d| char::from(b'0' + d)))
    }
}

impl FromStr for ZeckSeq {
    type Err = ZeckError;

    fn from_str(s: &str) -> Result<Self> {
        let digits = parse_digits(s, &[('0', 0), ('1', 1)])?;
        let digits: Vec<u8> = digits.into_iter().map(|d| d as u8).collect();
        if digits == [0] {
            return Ok(ZeckSeq::zero());
        }
        match canonical_violation(&digits) {
            None => Ok(ZeckSeq(digits)),
            Some(v) => Err(ZeckError::Parse { input: s.into(), reason: format!("non-canonical: {v}") }),
        }
    }
}

/// Working sequence over `{0,1,2,3}` used inside the adder passes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct WorkSeq(Vec<u8>);

impl WorkSeq {
    pub fn new(digits: Vec<u8>) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d > 3) {
            return Err(crate::error::contract(format!("working digit {d} outside 0..=3")));
        }
        Ok(WorkSeq(digits))
    }

    pub(crate) fn from_vec(digits: Vec<u8>) -> Self {
        debug_assert!(digits.iter().all(|&d| d <= 3));
        WorkSeq(digits)
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub(crate) fn digits_mut(&mut self) -> &mut Vec<u8> {
        &mut self.0
    }

    pub fn into_digits(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Valued for WorkSeq {
    fn value(&self) -> BigInt {
        value_of(&self.0)
    }
}

impl fmt::Display for WorkSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // working sequences keep their padding
        for &d in &self.0 {
            write!(f, "{d}")?;
        }
        if self.0.is_empty() {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl FromStr for WorkSeq {
    type Err = ZeckError;

    fn from_str(s: &str) -> Result<Self> {
        let digits = parse_digits(s, &[('0', 0), ('1', 1), ('2', 2), ('3', 3)])?;
        Ok(WorkSeq(digits.into_iter().map(|d| d as u8).collect()))
    }
}

/// Signed-digit sequence over `{-1,0,+1}`. Prints `-1` as `N`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TernSeq(Vec<i8>);

impl TernSeq {
    pub fn new(digits: Vec<i8>) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| !(-1..=1).contains(&d)) {
            return Err(crate::error::contract(format!("signed digit {d} outside -1..=1")));
        }
        Ok(TernSeq(digits))
    }

    pub fn digits(&self) -> &[i8] {
        &self.0
    }

    pub fn into_digits(self) -> Vec<i8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Valued for TernSeq {
    fn value(&self) -> BigInt {
        value_of(&self.0)
    }
}

pub(crate) fn signed_digit_char(d: i8) -> char {
    match d {
        -1 => 'N',
        0..=9 => char::from(b'0' + d as u8),
        _ => '?',
    }
}

impl fmt::Display for TernSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &d in &self.0 {
            write!(f, "{}", signed_digit_char(d))?;
        }
        if self.0.is_empty() {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl FromStr for TernSeq {
    type Err = ZeckError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(TernSeq(parse_digits(s, &[('0', 0), ('1', 1), ('N', -1)])?))
    }
}

/// The greedy construction: repeatedly take the largest `F_k` not exceeding
/// what is left. Independent of every pass in this crate, so it serves as the
/// reference everything else is checked against.
pub fn greedy_zeckendorf(n: &BigUint) -> ZeckSeq {
    if n.is_zero() {
        return ZeckSeq::zero();
    }
    let mut top = 2;
    while *fib::fib_at(top + 1).expect("index >= 2") <= *n {
        top += 1;
    }
    let mut rest = n.clone();
    let mut digits = Vec::with_capacity(top - 1);
    let mut k = top;
    while k >= 2 {
        let f = fib::fib_at(k).expect("index >= 2");
        if *f <= rest {
            rest -= &*f;
            digits.push(1);
        } else {
            digits.push(0);
        }
        k -= 1;
    }
    debug_assert!(rest.is_zero());
    ZeckSeq(digits)
}

pub fn greedy_u64(n: u64) -> ZeckSeq {
    greedy_zeckendorf(&BigUint::from(n))
}
