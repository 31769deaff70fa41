//! Unsigned addition: digitwise sum, then a left-to-right width-4 pass that
//! removes every 2 and 3, then width-3 passes right-to-left and
//! left-to-right that remove adjacent ones.

use crate::error::{contract, invariant, Result};
use crate::rules::{stage1_cleanup, stage1_rule, stage2_rule};
use crate::seq::{canonical_violation, WorkSeq, ZeckSeq};
use crate::trace::{PassId, PassTrace};

/// Leading zeros in front of every digitwise sum or difference.
pub const PAD: usize = 3;

fn ensure_canonical(z: &ZeckSeq, what: &str) -> Result<()> {
    match canonical_violation(z.digits()) {
        None => Ok(()),
        Some(v) => Err(contract(format!("{what} is not canonical: {v}"))),
    }
}

/// Shortest working sequence; stage 1 needs one full window.
pub const MIN_WIDTH: usize = 4;

/// Length of a digitwise combination of operands of these lengths.
pub(crate) fn padded_len(a: usize, b: usize) -> usize {
    (a.max(b) + PAD).max(MIN_WIDTH)
}

/// Position-wise sum, right-aligned, with [`PAD`] leading zeros beyond the
/// longer operand (more when needed to reach [`MIN_WIDTH`]).
pub fn digitwise_sum(a: &ZeckSeq, b: &ZeckSeq) -> Result<WorkSeq> {
    ensure_canonical(a, "left operand")?;
    ensure_canonical(b, "right operand")?;
    let n = padded_len(a.len(), b.len());
    let mut out = vec![0u8; n];
    for (src, len) in [(a.digits(), a.len()), (b.digits(), b.len())] {
        for (slot, &d) in out[n - len..].iter_mut().zip(src) {
            *slot += d;
        }
    }
    Ok(WorkSeq::from_vec(out))
}

/// Stage-1 precondition: alphabet `{0,1,2}`, leading 0, length >= 4, and
/// every 2 preceded by a 0 and followed by a 0 or the right end.
pub(crate) fn check_stage1_input(d: &[u8]) -> Result<()> {
    if d.len() < 4 {
        return Err(contract(format!("stage 1 needs at least 4 digits, got {}", d.len())));
    }
    if d[0] != 0 {
        return Err(contract("stage 1 input must begin with 0"));
    }
    for (i, &x) in d.iter().enumerate() {
        match x {
            0 | 1 => {}
            2 => {
                if d[i - 1] != 0 || d.get(i + 1).is_some_and(|&n| n != 0) {
                    return Err(contract(format!("2 at offset {i} is not flanked by zeros")));
                }
            }
            _ => return Err(contract(format!("stage 1 input digit {x} at offset {i}"))),
        }
    }
    Ok(())
}

pub fn stage1_eliminate(s: WorkSeq) -> Result<WorkSeq> {
    stage1_eliminate_traced(s, false).map(|(w, _)| w)
}

/// Width-4 window sweeping left to right, one rule (or none) per placement,
/// then the cleanup of the final window. Output digits are all 0 or 1.
pub fn stage1_eliminate_traced(mut s: WorkSeq, record: bool) -> Result<(WorkSeq, PassTrace)> {
    check_stage1_input(s.digits())?;
    let d = s.digits_mut();
    let n = d.len();
    let mut trace = PassTrace::new(PassId::Stage1, n, record);
    for i in 0..=n - 4 {
        trace.steps += 1;
        let mut w = [d[i], d[i + 1], d[i + 2], d[i + 3]];
        let before = w;
        if let Some(rule) = stage1_rule(&mut w) {
            if w[3] != before[3] {
                // an incremented digit always sits right after a 0
                if w[2] != 0 || before[2] != 0 {
                    return Err(invariant(format!("increment at offset {} without a 0 to its left", i + 3)));
                }
                if w[3] > 3 {
                    return Err(invariant(format!("digit at offset {} incremented past 3", i + 3)));
                }
            }
            d[i..i + 4].copy_from_slice(&w);
            trace.fire(i, rule, &before, &w);
        }
    }
    let mut last = [d[n - 4], d[n - 3], d[n - 2], d[n - 1]];
    let steps = stage1_cleanup(&mut last).map_err(invariant)?;
    for step in steps {
        trace.cleanup(n - 4 + step.offset, cleanup_name(step.rule), &step.before, &step.after);
    }
    d[n - 4..].copy_from_slice(&last);
    if let Some(i) = d.iter().position(|&x| x > 1) {
        return Err(invariant(format!("digit {} survived stage 1 at offset {i}", d[i])));
    }
    Ok((s, trace))
}

fn cleanup_name(rule: &'static str) -> &'static str {
    match rule {
        "030" => "cleanup:030",
        "020" => "cleanup:020",
        "021" => "cleanup:021",
        "0120" => "cleanup:0120",
        "03" => "cleanup:03",
        "02" => "cleanup:02",
        "012" => "cleanup:012",
        other => other,
    }
}

fn check_binary(d: &[u8], pass: PassId) -> Result<()> {
    if d.len() < 3 {
        return Err(contract(format!("{pass} needs at least 3 digits, got {}", d.len())));
    }
    if let Some(i) = d.iter().position(|&x| x > 1) {
        return Err(contract(format!("{pass} input digit {} at offset {i}", d[i])));
    }
    Ok(())
}

pub(crate) fn contains_1011(d: &[u8]) -> Option<usize> {
    d.windows(4).position(|w| w == [1, 0, 1, 1])
}

pub fn stage2_right_to_left(s: WorkSeq) -> Result<WorkSeq> {
    stage2_right_to_left_traced(s, false).map(|(w, _)| w)
}

/// Width-3 window sweeping right to left applying `011 -> 100`. The result
/// never contains `1011`.
pub fn stage2_right_to_left_traced(mut s: WorkSeq, record: bool) -> Result<(WorkSeq, PassTrace)> {
    check_binary(s.digits(), PassId::Stage2Rl)?;
    let d = s.digits_mut();
    let n = d.len();
    let mut trace = PassTrace::new(PassId::Stage2Rl, n, record);
    for i in (0..=n - 3).rev() {
        trace.steps += 1;
        let mut w = [d[i], d[i + 1], d[i + 2]];
        if let Some(rule) = stage2_rule(&mut w) {
            trace.fire(i, rule, &d[i..i + 3], &w);
            d[i..i + 3].copy_from_slice(&w);
        }
    }
    if let Some(i) = contains_1011(d) {
        return Err(invariant(format!("1011 at offset {i} after the right-to-left pass")));
    }
    Ok((s, trace))
}

pub fn stage2_left_to_right(s: WorkSeq) -> Result<ZeckSeq> {
    stage2_left_to_right_traced(s, false).map(|(z, _)| z)
}

/// Width-3 window sweeping left to right with the same rule; the stripped
/// output is canonical.
pub fn stage2_left_to_right_traced(s: WorkSeq, record: bool) -> Result<(ZeckSeq, PassTrace)> {
    let (s, trace) = stage2_left_to_right_unstripped(s, record)?;
    let out = ZeckSeq::from_digits(s.into_digits())
        .map_err(|e| invariant(format!("left-to-right pass output not canonical ({e})")))?;
    Ok((out, trace))
}

/// The left-to-right sweep without the final strip and canonical check.
pub fn stage2_left_to_right_unstripped(mut s: WorkSeq, record: bool) -> Result<(WorkSeq, PassTrace)> {
    check_binary(s.digits(), PassId::Stage2Lr)?;
    if let Some(i) = contains_1011(s.digits()) {
        return Err(contract(format!("left-to-right pass input has 1011 at offset {i}")));
    }
    let d = s.digits_mut();
    let n = d.len();
    let mut trace = PassTrace::new(PassId::Stage2Lr, n, record);
    for i in 0..=n - 3 {
        trace.steps += 1;
        let mut w = [d[i], d[i + 1], d[i + 2]];
        if let Some(rule) = stage2_rule(&mut w) {
            trace.fire(i, rule, &d[i..i + 3], &w);
            d[i..i + 3].copy_from_slice(&w);
        }
    }
    Ok((s, trace))
}

/// Stage 1 onward, shared by unsigned and signed addition.
pub(crate) fn finish(work: WorkSeq, record: bool, traces: &mut Vec<PassTrace>) -> Result<ZeckSeq> {
    let (w, t1) = stage1_eliminate_traced(work, record)?;
    traces.push(t1);
    let (w, t2) = stage2_right_to_left_traced(w, record)?;
    traces.push(t2);
    let (z, t3) = stage2_left_to_right_traced(w, record)?;
    traces.push(t3);
    Ok(z)
}

pub fn add(a: &ZeckSeq, b: &ZeckSeq) -> Result<ZeckSeq> {
    add_traced(a, b, false).map(|(z, _)| z)
}

/// Sum plus the three pass traces in execution order.
pub fn add_traced(a: &ZeckSeq, b: &ZeckSeq, record: bool) -> Result<(ZeckSeq, Vec<PassTrace>)> {
    let work = digitwise_sum(a, b)?;
    let mut traces = Vec::with_capacity(3);
    let z = finish(work, record, &mut traces)?;
    Ok((z, traces))
}
