//! Random inputs that satisfy each pass's entry conditions, for property
//! tests and benchmarks.

use rand::Rng;

use crate::adder::{self, digitwise_sum};
use crate::seq::{WorkSeq, ZeckSeq};
use crate::signed::{detect_and_orient, digitwise_diff};
use crate::trace::PassId;

/// Uniform-ish canonical digits of exactly `len` digits (zero if `len == 0`).
pub fn canonical<R: Rng + ?Sized>(rng: &mut R, len: usize) -> ZeckSeq {
    let mut digits = Vec::with_capacity(len);
    for i in 0..len {
        let d = if i == 0 {
            1
        } else if digits[i - 1] == 1 {
            0
        } else {
            rng.gen_range(0..=1u8)
        };
        digits.push(d);
    }
    ZeckSeq::from_digits(digits).expect("generated digits are canonical")
}

fn operand_pair<R: Rng + ?Sized>(rng: &mut R, n: usize) -> (ZeckSeq, ZeckSeq) {
    let top = n.saturating_sub(adder::PAD).max(1);
    let other = rng.gen_range(0..=top);
    let (a, b) = (canonical(rng, top), canonical(rng, other));
    if rng.gen_bool(0.5) {
        (a, b)
    } else {
        (b, a)
    }
}

/// A digit sequence of length about `n` that `pass` accepts, in the form the
/// adder would hand it over.
pub fn pass_input<R: Rng + ?Sized>(rng: &mut R, pass: PassId, n: usize) -> Vec<i8> {
    let widen = |w: WorkSeq| w.into_digits().into_iter().map(|d| d as i8).collect::<Vec<i8>>();
    match pass {
        PassId::Stage1 => {
            let (a, b) = operand_pair(rng, n);
            widen(digitwise_sum(&a, &b).expect("canonical operands"))
        }
        PassId::Stage2Rl => stage2_bits(rng, n),
        PassId::Stage2Lr => {
            let bits = stage2_bits(rng, n);
            let work = WorkSeq::new(bits.into_iter().map(|d| d as u8).collect()).expect("binary digits");
            widen(adder::stage2_right_to_left(work).expect("stage 2 input"))
        }
        PassId::SignedPrelim => {
            let (a, b) = operand_pair(rng, n);
            let (_, oriented) = detect_and_orient(digitwise_diff(&a, &b).expect("canonical operands"));
            oriented.into_digits()
        }
    }
}

/// Random `{0,1}` digits behind a leading 0, `max(n, 3)` long.
pub fn stage2_bits<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<i8> {
    let n = n.max(3);
    let mut bits: Vec<i8> = (0..n).map(|_| rng.gen_range(0..=1)).collect();
    bits[0] = 0;
    bits
}
