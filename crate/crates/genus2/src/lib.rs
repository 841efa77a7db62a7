//! Dehn twist word calculus for genus-2 Lefschetz fibration monodromies.
//!
//! Words of twists along registered curves are checked through their
//! symplectic action on homology, rewritten by validated moves, replayed
//! against recorded derivations, and summarized by fiber counts and the
//! resulting 4-manifold invariants.

pub mod corpus;
pub mod decompose;
pub mod dsl;
pub mod fibration;
pub mod homology;
pub mod moves;
pub mod pi1;
pub mod registry;
pub mod word;

pub use dsl::{parse_relator, parse_script, parse_word, MoveScript};
pub use fibration::{FiberSignature, InvariantSet};
pub use moves::{Engine, Move, MoveError, ReplayReport};
pub use registry::Registry;
pub use word::{CurveRef, Letter, PositiveRelator, Word};
