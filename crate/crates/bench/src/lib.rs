//! Shared inputs for the criterion benchmarks.

use kabelian_core::{Word, WordStream};

/// Fibonacci prefix used by the word-level benchmarks.
pub fn fibonacci_prefix(len: usize) -> Word {
    WordStream::fibonacci().prefix(len)
}
