//! k-Abelian equivalence of finite words and the tooling built on it.
//!
//! * [`words`]: alphabets, words, factor extraction and counting.
//! * [`generators`]: Sturmian (mechanical), morphic and ultimately periodic
//!   infinite words.
//! * [`equivalence`]: decision procedures and canonical class signatures.
//! * [`flowgraph`]: factor-count flows on de Bruijn graphs, Eulerian
//!   realizability and the census of classes.
//! * [`complexity`]: k-Abelian complexity profiles and the periodicity alarm.
//! * [`sturmian`]: special factors, swap chains and the length-2k
//!   classification.
//! * [`repetitions`]: k-Abelian powers and (k, B)-balance.

pub mod complexity;
pub mod equivalence;
pub mod error;
pub mod flowgraph;
pub mod generators;
pub mod repetitions;
pub mod sturmian;
pub mod words;

pub use equivalence::{k_abelian_equivalent, signature, ClassSignature, K};
pub use error::{Error, Result};
pub use generators::{Morphism, WordStream};
pub use words::{Alphabet, Delimiter, Symbol, Word};
