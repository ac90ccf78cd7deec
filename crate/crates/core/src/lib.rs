//! Downward-closed sets over composable well-quasi-ordered data types,
//! represented as finite antichains of ideals, with decision procedures for
//! inclusion and membership, a generalized Karp-Miller procedure computing
//! covers of well-structured transition systems, and an exact backward
//! coverability check for Petri nets.
//!
//! The data-type grammar is naturals, finite quasi-ordered alphabets, finite
//! products and sums, finite words under embedding, and finite multisets
//! under injective domination. Every downward-closed subset of such a type
//! is a finite union of ideals, and the ideals themselves have finite
//! canonical presentations: omega-extended numbers, symbols, tuples, tagged
//! ideals, word products and multiset products. That finiteness is what the
//! cover procedure exploits.

pub mod downset;
pub mod engine;
pub mod error;
pub mod ideal;
pub mod json;
mod matching;
pub mod models;
pub mod order;
pub mod text;
pub mod types;
pub mod value;

pub use downset::DownSet;
pub use engine::{Budget, CoverResult, CoverStatus, Model, UpBasis, Verdict};
pub use error::{Error, Result};
pub use ideal::{Atom, Ideal, MSetIdeal, NatIdeal};
pub use models::{Flcs, ParsedModel, PetriNet};
pub use types::TypeExpr;
pub use value::Value;
