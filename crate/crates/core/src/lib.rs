//! Arbitrary-precision arithmetic on Zeckendorf (Fibonacci) representations.
//!
//! Addition runs as three linear window passes over a digitwise sum;
//! subtraction adds one left-to-right pass that removes negative digits.
//! Multiplication, division and square roots are built on top, and every
//! pass can also be compiled into a finite-state transducer and run either
//! as a sequential scan or as a parallel prefix composition.

pub mod adder;
pub mod arith;
pub mod automaton;
pub mod convert;
pub mod error;
pub mod fib;
pub mod fibcodec;
mod rules;
pub mod sample;
pub mod seq;
pub mod signed;
pub mod trace;
pub mod tree;

pub use adder::add;
pub use error::{Result, ZeckError};
pub use fib::{fib, fib_at, FibIndex};
pub use seq::{greedy_u64, greedy_zeckendorf, is_canonical, TernSeq, Valued, WorkSeq, ZeckSeq};
pub use trace::{PassId, PassTrace};
pub use signed::{add_signed, subtract, Sign, SignedZeck};
pub use convert::{binary_to_zeck, zeck_to_binary, BitSeq};
pub use arith::{divrem, mul_binary, mul_fenwick, sqrt_rem};
