//! Local rewrite rules shared by the direct window passes and the compiled
//! transducers. Every rule preserves `sum digit_k * F_k` through
//! `F_{k+1} = F_k + F_{k-1}`.

/// Stands in for a window cell whose content is not known (used by the
/// transducer finalization, which no longer holds the oldest window cell).
pub(crate) const UNKNOWN: u8 = u8::MAX;

/// Width-4 stage-1 rule, keyed on the first three cells. `x` in the fourth
/// cell is incremented by the first two rules; the caller checks the result
/// stays inside the working alphabet.
pub(crate) fn stage1_rule(w: &mut [u8; 4]) -> Option<&'static str> {
    match (w[0], w[1], w[2]) {
        (0, 2, 0) => {
            *w = [1, 0, 0, w[3] + 1];
            Some("020x")
        }
        (0, 3, 0) => {
            *w = [1, 1, 0, w[3] + 1];
            Some("030x")
        }
        (0, 2, 1) => {
            *w = [1, 1, 0, w[3]];
            Some("021x")
        }
        (0, 1, 2) => {
            *w = [1, 0, 1, w[3]];
            Some("012x")
        }
        _ => None,
    }
}

/// One rewrite made by the stage-1 cleanup: offset of the first rewritten
/// cell within the final window, rule name, digits before and after.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct CleanupStep {
    pub offset: usize,
    pub rule: &'static str,
    pub before: Vec<u8>,
    pub after: Vec<u8>,
}

fn rewrite(w: &mut [u8; 4], offset: usize, rule: &'static str, after: &[u8], log: &mut Vec<CleanupStep>) {
    let before = w[offset..offset + after.len()].to_vec();
    w[offset..offset + after.len()].copy_from_slice(after);
    log.push(CleanupStep { offset, rule, before, after: after.to_vec() });
}

/// Clears any 2 or 3 left in the third or fourth cell of the final window.
/// Third cell first, then fourth. Returns the rewrites made, or a
/// description of the configuration no rule covers.
pub(crate) fn stage1_cleanup(w: &mut [u8; 4]) -> Result<Vec<CleanupStep>, String> {
    let mut log = Vec::new();
    let [a, b, c, d] = *w;
    match c {
        3 if b == 0 && d == 0 => rewrite(w, 1, "030", &[1, 1, 1], &mut log),
        2 if b == 0 && d == 0 => rewrite(w, 1, "020", &[1, 0, 1], &mut log),
        // a 2 created by incrementing a 1 may still be followed by a 1 here
        2 if b == 0 && d == 1 => rewrite(w, 1, "021", &[1, 1, 0], &mut log),
        2 if a == 0 && b == 1 && d == 0 => rewrite(w, 0, "0120", &[1, 0, 1, 0], &mut log),
        2 | 3 => return Err(format!("no cleanup rule for third cell in window {}", show(w))),
        _ => {}
    }
    let [_, b, c, d] = *w;
    match d {
        3 if c == 0 => rewrite(w, 2, "03", &[1, 1], &mut log),
        2 if c == 0 => rewrite(w, 2, "02", &[1, 0], &mut log),
        2 if b == 0 && c == 1 => rewrite(w, 1, "012", &[1, 0, 1], &mut log),
        2 | 3 => return Err(format!("no cleanup rule for fourth cell in window {}", show(w))),
        _ => {}
    }
    if w[1..].iter().any(|&x| x > 1) {
        return Err(format!("cleanup left a digit above 1 in window {}", show(w)));
    }
    Ok(log)
}

fn show(w: &[u8; 4]) -> String {
    w.iter().map(|&d| if d == UNKNOWN { '?' } else { char::from(b'0' + d) }).collect()
}

/// Width-3 stage-2 rule.
pub(crate) fn stage2_rule(w: &mut [u8; 3]) -> Option<&'static str> {
    if *w == [0, 1, 1] {
        *w = [1, 0, 0];
        Some("011")
    } else {
        None
    }
}

/// Width-3 rules of the signed preliminary pass; `N` is -1. Every rule
/// starts with a positive symbol that absorbs the negative one behind it.
pub(crate) fn prelim_rule(w: &mut [i8; 3]) -> Option<&'static str> {
    let (after, name): ([i8; 3], &'static str) = match *w {
        [1, 0, 0] => ([0, 1, 1], "100"),
        [1, -1, 0] => ([0, 0, 1], "1N0"),
        [1, -1, 1] => ([0, 0, 2], "1N1"),
        [1, 0, -1] => ([0, 1, 0], "10N"),
        [2, 0, 0] => ([1, 1, 1], "200"),
        [2, -1, 0] => ([1, 0, 1], "2N0"),
        [2, -1, 1] => ([1, 0, 2], "2N1"),
        [2, 0, -1] => ([1, 1, 0], "20N"),
        _ => return None,
    };
    *w = after;
    Some(name)
}

/// Right-boundary rewrites for the preliminary pass, applied to the last two
/// cells (weights `F_3 = 2`, `F_2 = 1`) when a -1 is still there after the
/// final placement: its positive partner sits one cell too far right for a
/// width-3 rule to reach it.
pub(crate) fn prelim_boundary_rule(w: &mut [i8; 2]) -> Option<&'static str> {
    let (after, name): ([i8; 2], &'static str) = match *w {
        [1, -1] => ([0, 1], "end:1N"),
        [2, -1] => ([1, 1], "end:2N"),
        _ => return None,
    };
    *w = after;
    Some(name)
}
