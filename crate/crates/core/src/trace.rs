//! Per-pass step accounting and optional firing snapshots.

use std::fmt;
use std::str::FromStr;

use crate::error::ZeckError;
use crate::seq::signed_digit_char;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PassId {
    Stage1,
    Stage2Rl,
    Stage2Lr,
    SignedPrelim,
}

impl PassId {
    pub const ALL: [PassId; 4] = [PassId::Stage1, PassId::Stage2Rl, PassId::Stage2Lr, PassId::SignedPrelim];

    pub fn as_str(self) -> &'static str {
        match self {
            PassId::Stage1 => "stage1",
            PassId::Stage2Rl => "stage2_rl",
            PassId::Stage2Lr => "stage2_lr",
            PassId::SignedPrelim => "signed_prelim",
        }
    }

    /// Window width of the pass.
    pub fn width(self) -> usize {
        match self {
            PassId::Stage1 => 4,
            _ => 3,
        }
    }
}

impl fmt::Display for PassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PassId {
    type Err = ZeckError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PassId::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| ZeckError::Parse { input: s.into(), reason: "unknown pass id".into() })
    }
}

/// One rule firing: window offset, rule name and the rewritten digits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub offset: usize,
    pub rule: &'static str,
    pub before: Vec<i8>,
    pub after: Vec<i8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PassTrace {
    pub pass: PassId,
    /// Length of the sequence the pass ran over.
    pub len: usize,
    /// Window placements.
    pub steps: usize,
    /// Window rule applications.
    pub firings: usize,
    /// Stage-1 cleanup rewrites of the final window.
    pub cleanups: usize,
    pub snapshots: Option<Vec<Snapshot>>,
}

impl PassTrace {
    pub(crate) fn new(pass: PassId, len: usize, record: bool) -> Self {
        PassTrace { pass, len, steps: 0, firings: 0, cleanups: 0, snapshots: record.then(Vec::new) }
    }

    pub(crate) fn fire<D: Copy + Into<i64>>(&mut self, offset: usize, rule: &'static str, before: &[D], after: &[D]) {
        self.firings += 1;
        self.snapshot(offset, rule, before, after);
    }

    pub(crate) fn cleanup<D: Copy + Into<i64>>(&mut self, offset: usize, rule: &'static str, before: &[D], after: &[D]) {
        self.cleanups += 1;
        self.snapshot(offset, rule, before, after);
    }

    fn snapshot<D: Copy + Into<i64>>(&mut self, offset: usize, rule: &'static str, before: &[D], after: &[D]) {
        if let Some(snaps) = self.snapshots.as_mut() {
            let conv = |v: &[D]| v.iter().map(|&d| Into::<i64>::into(d) as i8).collect();
            snaps.push(Snapshot { offset, rule, before: conv(before), after: conv(after) });
        }
    }

    /// Placements a width-`w` pass makes over `len` digits.
    pub fn expected_steps(pass: PassId, len: usize) -> usize {
        (len + 1).saturating_sub(pass.width())
    }

    /// Trace text, one line per recorded firing:
    /// `<pass_id> offset=<i> rule=<name> <before> -> <after>`.
    pub fn lines(&self) -> Vec<String> {
        let digits = |v: &[i8]| v.iter().map(|&d| signed_digit_char(d)).collect::<String>();
        self.snapshots
            .iter()
            .flatten()
            .map(|s| {
                format!("{} offset={} rule={} {} -> {}", self.pass, s.offset, s.rule, digits(&s.before), digits(&s.after))
            })
            .collect()
    }
}
