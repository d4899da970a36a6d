//! Exact combinatorics for graded mutation of cluster-tilted algebras coming
//! from weighted projective lines.
//!
//! The crate is organised bottom-up:
//!
//! * [`graded`] holds graded quivers, Fomin-Zelevinsky mutation and the graded
//!   mutation rule at sinks and sources.
//! * [`ranks`] checks and solves rank additivity and infers sink/source tags.
//! * [`exseq`] is the signed-quiver calculus of exceptional sequences.
//! * [`recovery`] drives a tilting sequence to the squid and records the word.
//! * [`catalog`] generates canonical and squid quivers for a weight sequence.
//!
//! Vertices and positions are 0-based in the API. Error messages count from
//! 1, matching the numbering used in documents and on the command line.
//!
//! Everything is a pure function over owned values, so all types are `Send`
//! and `Sync` and can be shared freely between threads.

pub mod catalog;
pub mod exseq;
pub mod graded;
pub mod lattice;
pub mod linalg;
pub mod ranks;
pub mod recovery;
pub mod symbolic;
pub mod word;

pub use catalog::WeightSequence;
pub use exseq::{Classification, ExcSeqQuiver, MutKind, Side};
pub use graded::{GradedQuiver, Quiver, Tag};
pub use symbolic::SymbolicObject;
pub use word::{Move, MutationWord};
