//! Sign-magnitude Zeckendorf numbers. Opposite-sign addition combines the
//! magnitudes digit by digit over `{-1,0,+1}`, orients the result so the
//! leading nonzero digit is positive, then runs a width-3 pass that removes
//! every negative digit before handing over to the unsigned adder.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::{BigInt, Sign as BigSign};

use crate::adder::{self, check_stage1_input, padded_len};
use crate::error::{contract, invariant, Result, ZeckError};
use crate::rules::{prelim_boundary_rule, prelim_rule};
use crate::seq::{canonical_violation, greedy_zeckendorf, TernSeq, Valued, WorkSeq, ZeckSeq};
use crate::trace::{PassId, PassTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    NonNeg,
    NonPos,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::NonNeg => Sign::NonPos,
            Sign::NonPos => Sign::NonNeg,
        }
    }
}

/// Sign flag plus canonical magnitude. Zero always carries [`Sign::NonNeg`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedZeck {
    sign: Sign,
    magnitude: ZeckSeq,
}

impl SignedZeck {
    pub fn new(sign: Sign, magnitude: ZeckSeq) -> Self {
        let sign = if magnitude.is_zero() { Sign::NonNeg } else { sign };
        SignedZeck { sign, magnitude }
    }

    pub fn nonneg(magnitude: ZeckSeq) -> Self {
        SignedZeck::new(Sign::NonNeg, magnitude)
    }

    pub fn zero() -> Self {
        SignedZeck::nonneg(ZeckSeq::zero())
    }

    /// Greedy representation of an exact integer.
    pub fn from_bigint(v: &BigInt) -> Self {
        let sign = if v.sign() == BigSign::Minus { Sign::NonPos } else { Sign::NonNeg };
        SignedZeck::new(sign, greedy_zeckendorf(v.magnitude()))
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn magnitude(&self) -> &ZeckSeq {
        &self.magnitude
    }

    pub fn is_zero(&self) -> bool {
        self.magnitude.is_zero()
    }
}

impl Valued for SignedZeck {
    fn value(&self) -> BigInt {
        let v = self.magnitude.value();
        match self.sign {
            Sign::NonNeg => v,
            Sign::NonPos => -v,
        }
    }
}

impl Neg for SignedZeck {
    type Output = SignedZeck;

    fn neg(self) -> SignedZeck {
        SignedZeck::new(self.sign.flip(), self.magnitude)
    }
}

impl fmt::Display for SignedZeck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == Sign::NonPos {
            f.write_str("-")?;
        }
        write!(f, "{}", self.magnitude)
    }
}

impl FromStr for SignedZeck {
    type Err = ZeckError;

    fn from_str(s: &str) -> Result<Self> {
        let (sign, body) = match s.as_bytes().first() {
            Some(b'-') => (Sign::NonPos, &s[1..]),
            Some(b'+') => (Sign::NonNeg, &s[1..]),
            _ => (Sign::NonNeg, s),
        };
        let magnitude: ZeckSeq = body.parse().map_err(|e| match e {
            ZeckError::Parse { reason, .. } => ZeckError::Parse { input: s.into(), reason },
            other => other,
        })?;
        Ok(SignedZeck::new(sign, magnitude))
    }
}

/// Position-wise `a - b` over `{-1,0,+1}`, right-aligned, with three leading
/// zeros.
pub fn digitwise_diff(a: &ZeckSeq, b: &ZeckSeq) -> Result<TernSeq> {
    for (z, what) in [(a, "minuend"), (b, "subtrahend")] {
        if let Some(v) = canonical_violation(z.digits()) {
            return Err(contract(format!("{what} is not canonical: {v}")));
        }
    }
    let n = padded_len(a.len(), b.len());
    let mut out = vec![0i8; n];
    for (slot, &d) in out[n - a.len()..].iter_mut().zip(a.digits()) {
        *slot += d as i8;
    }
    for (slot, &d) in out[n - b.len()..].iter_mut().zip(b.digits()) {
        *slot -= d as i8;
    }
    TernSeq::new(out)
}

/// Sign of the first nonzero digit; negates every digit when that digit is
/// -1 so the returned sequence is non-negative.
pub fn detect_and_orient(t: TernSeq) -> (Sign, TernSeq) {
    match t.digits().iter().find(|&&d| d != 0) {
        Some(&-1) => {
            let flipped = t.into_digits().into_iter().map(|d| -d).collect();
            (Sign::NonPos, TernSeq::new(flipped).expect("negated signed digits stay in range"))
        }
        _ => (Sign::NonNeg, t),
    }
}

pub fn preliminary_pass(t: &TernSeq) -> Result<WorkSeq> {
    preliminary_pass_traced(t, false).map(|(w, _)| w)
}

/// Width-3 left-to-right pass eliminating every -1. Output digits are in
/// `{0,1,2}` with each 2 between zeros.
pub fn preliminary_pass_traced(t: &TernSeq, record: bool) -> Result<(WorkSeq, PassTrace)> {
    let mut d = t.digits().to_vec();
    let n = d.len();
    if n < 3 || d[..3].iter().any(|&x| x != 0) {
        return Err(contract("preliminary pass needs three leading zeros"));
    }
    if d.iter().find(|&&x| x != 0) == Some(&-1) {
        return Err(contract("preliminary pass input must lead with +1; orient it first"));
    }
    let mut trace = PassTrace::new(PassId::SignedPrelim, n, record);
    for i in 0..=n - 3 {
        trace.steps += 1;
        let mut w = [d[i], d[i + 1], d[i + 2]];
        if let Some(rule) = prelim_rule(&mut w) {
            trace.fire(i, rule, &d[i..i + 3], &w);
            d[i..i + 3].copy_from_slice(&w);
        }
        if d[i] < 0 {
            return Err(invariant(format!(
                "uncovered preliminary-pass window at offset {i}: -1 leaves the window unprocessed"
            )));
        }
    }
    let mut tail = [d[n - 2], d[n - 1]];
    if tail[1] < 0 {
        if let Some(rule) = prelim_boundary_rule(&mut tail) {
            trace.cleanup(n - 2, rule, &d[n - 2..], &tail);
            d[n - 2..].copy_from_slice(&tail);
        }
    }
    if let Some(i) = d.iter().position(|&x| !(0..=2).contains(&x)) {
        return Err(invariant(format!("uncovered preliminary-pass window: digit {} left at offset {i}", d[i])));
    }
    for (i, &x) in d.iter().enumerate() {
        if x == 2 && (d[i - 1] != 0 || d.get(i + 1).is_some_and(|&n| n != 0)) {
            return Err(invariant(format!("preliminary pass left an unflanked 2 at offset {i}")));
        }
    }
    Ok((WorkSeq::from_vec(d.into_iter().map(|x| x as u8).collect()), trace))
}

/// Restores the stage-1 entry conditions on a preliminary-pass output.
fn prepare_stage1(w: WorkSeq) -> Result<WorkSeq> {
    let mut d = w.into_digits();
    if d.first() != Some(&0) {
        d.insert(0, 0);
    }
    while d.len() < adder::MIN_WIDTH {
        d.insert(0, 0);
    }
    check_stage1_input(&d).map_err(|e| invariant(format!("preliminary pass output rejected by stage 1 ({e})")))?;
    Ok(WorkSeq::from_vec(d))
}

pub fn add_signed(a: &SignedZeck, b: &SignedZeck) -> Result<SignedZeck> {
    add_signed_traced(a, b, false).map(|(s, _)| s)
}

/// Signed sum plus the traces of every pass that ran, in order.
pub fn add_signed_traced(a: &SignedZeck, b: &SignedZeck, record: bool) -> Result<(SignedZeck, Vec<PassTrace>)> {
    if a.sign == b.sign {
        let (mag, traces) = adder::add_traced(&a.magnitude, &b.magnitude, record)?;
        return Ok((SignedZeck::new(a.sign, mag), traces));
    }
    let (pos, neg) = if a.sign == Sign::NonNeg { (a, b) } else { (b, a) };
    let diff = digitwise_diff(&pos.magnitude, &neg.magnitude)?;
    let (sign, oriented) = detect_and_orient(diff);
    let (work, prelim) = preliminary_pass_traced(&oriented, record)?;
    let mut traces = vec![prelim];
    let mag = adder::finish(prepare_stage1(work)?, record, &mut traces)?;
    Ok((SignedZeck::new(sign, mag), traces))
}

pub fn subtract(a: &SignedZeck, b: &SignedZeck) -> Result<SignedZeck> {
    add_signed(a, &-b.clone())
}

pub fn subtract_traced(a: &SignedZeck, b: &SignedZeck, record: bool) -> Result<(SignedZeck, Vec<PassTrace>)> {
    add_signed_traced(a, &-b.clone(), record)
}

impl PartialOrd for SignedZeck {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SignedZeck {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value().cmp(&other.value())
    }
}
