//! Distances between word functions computed by finite-state transducers.
//!
//! The crate decides closeness and k-closeness of two functional transducers under several
//! word metrics, computes their exact distance, and computes diameters and indices of rational
//! relations.

pub mod automata;
pub mod delay;
pub mod error;
pub mod expr;
pub mod kapprox;
pub mod metric;
pub mod oracle;
pub mod pair;
pub mod relations;
pub mod substitution;
pub mod transducer;
pub mod verdict;
pub mod witness;
pub mod word;

pub use error::{Error, Result};
pub use metric::{word_distance, MetricId};
pub use word::{Alphabet, ExtendedNat, Letter, Word};
