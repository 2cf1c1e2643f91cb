//! Generalized metric spaces over monoids: final segments of the free monoid on
//! a signed alphabet, zigzag distances, hyperconvexity, congruence lattices and
//! congruence-preserving maps.

#![allow(clippy::needless_range_loop)]

pub mod automaton;
pub mod equiv;
pub mod error;
pub mod freemon;
pub mod gms;
pub mod segment;
pub mod semirigid;
pub mod word;
pub mod zcong;
pub mod zigzag;

pub use automaton::{Automaton, Side};
pub use equiv::Partition;
pub use error::{Error, Result};
pub use gms::{FiniteGms, MonoidTable};
pub use segment::{FinalSegment, MacNeille};
pub use word::{subword_leq, Alphabet, Letter, Word, MINUS, PLUS};
pub use zigzag::{DistanceMatrix, ReflexiveDigraph};
pub use zcong::IntPoly;
