//! Balanced pairwise reduction with shape instrumentation.

use rayon::prelude::*;

use crate::error::Result;

/// Shape of a completed reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeShape {
    pub leaves: usize,
    /// Levels of pairwise combination, `ceil(log2 leaves)`.
    pub height: usize,
    /// Binary combinations performed, `leaves - 1`.
    pub combines: usize,
}

// below this many nodes a level is combined on the calling thread
const PAR_LEVEL: usize = 64;

/// Reduces `leaves` level by level, combining neighbours `(2j, 2j+1)` and
/// carrying an odd last node up unchanged. Every level may be evaluated in
/// parallel; the fixed pairing makes the result independent of scheduling.
pub(crate) fn reduce<T, F>(mut level: Vec<T>, empty: T, combine: F) -> Result<(T, TreeShape)>
where
    T: Clone + Send + Sync,
    F: Fn(&T, &T) -> Result<T> + Sync,
{
    if level.is_empty() {
        level.push(empty);
    }
    let leaves = level.len();
    let mut height = 0;
    let mut combines = 0;
    while level.len() > 1 {
        let pair = |p: &[T]| if p.len() == 2 { combine(&p[0], &p[1]) } else { Ok(p[0].clone()) };
        combines += level.len() / 2;
        level = if level.len() >= PAR_LEVEL {
            level.par_chunks(2).map(pair).collect::<Result<_>>()?
        } else {
            level.chunks(2).map(pair).collect::<Result<_>>()?
        };
        height += 1;
    }
    let root = level.pop().expect("one node left");
    Ok((root, TreeShape { leaves, height, combines }))
}

/// `ceil(log2 max(1, n))`.
pub fn ceil_log2(n: usize) -> usize {
    let n = n.max(1);
    (usize::BITS - (n - 1).leading_zeros()) as usize
}
