//! Fibonacci numbers indexed so that `F_2 = 1`, `F_3 = 2`.

use std::sync::{Arc, LazyLock, RwLock};

use num_bigint::BigUint;

use crate::error::{Result, ZeckError};

/// Index of a Fibonacci number usable as a Zeckendorf weight (`k >= 2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FibIndex(usize);

impl FibIndex {
    pub fn new(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(ZeckError::Domain(format!("Fibonacci index {k} is below 2")));
        }
        Ok(FibIndex(k))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

// slot i holds F_{i+2}
static TABLE: LazyLock<RwLock<Vec<Arc<BigUint>>>> =
    LazyLock::new(|| RwLock::new(vec![Arc::new(BigUint::from(1u8)), Arc::new(BigUint::from(2u8))]));

/// `F_k` for a validated index.
pub fn fib(k: FibIndex) -> Arc<BigUint> {
    let slot = k.0 - 2;
    {
        let table = TABLE.read().expect("fib table poisoned");
        if let Some(f) = table.get(slot) {
            return Arc::clone(f);
        }
    }
    let mut table = TABLE.write().expect("fib table poisoned");
    while table.len() <= slot {
        let n = table.len();
        let next = &*table[n - 1] + &*table[n - 2];
        table.push(Arc::new(next));
    }
    Arc::clone(&table[slot])
}

/// `F_k` from a raw index, rejecting `k < 2`.
pub fn fib_at(k: usize) -> Result<Arc<BigUint>> {
    Ok(fib(FibIndex::new(k)?))
}

/// Weights `F_2 ..= F_{len+1}` in least-significant-first order, i.e. the
/// weight of every position of a digit sequence of length `len`.
pub(crate) fn weights(len: usize) -> Vec<Arc<BigUint>> {
    if len == 0 {
        return Vec::new();
    }
    fib(FibIndex(len + 1));
    let table = TABLE.read().expect("fib table poisoned");
    table[..len].to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_cases() {
        assert_eq!(*fib_at(2).unwrap(), BigUint::from(1u8));
        assert_eq!(*fib_at(3).unwrap(), BigUint::from(2u8));
        assert_eq!(*fib_at(10).unwrap(), BigUint::from(55u8));
    }

    #[test]
    fn rejects_small_index() {
        assert!(matches!(fib_at(1), Err(ZeckError::Domain(_))));
        assert!(matches!(fib_at(0), Err(ZeckError::Domain(_))));
    }

    #[test]
    fn recurrence_up_to_500() {
        let (mut a, mut b) = (BigUint::from(1u8), BigUint::from(2u8));
        for k in 4..=500 {
            let c = &a + &b;
            assert_eq!(*fib_at(k).unwrap(), c, "F_{k}");
            a = b;
            b = c;
        }
    }

    #[test]
    fn concurrent_extension() {
        let handles: Vec<_> = (0..8)
            .map(|t| std::thread::spawn(move || fib_at(300 + 17 * t).unwrap()))
            .collect();
        for (t, h) in handles.into_iter().enumerate() {
            let f = h.join().unwrap();
            assert_eq!(f, fib_at(300 + 17 * t).unwrap());
        }
    }
}
