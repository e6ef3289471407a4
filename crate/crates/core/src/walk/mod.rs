//! Arrow-indexed steps and paths.
//!
//! The local basis has six states `x_{a,b}` with `a != b` in `{1,2,3}`;
//! `a < b` is an up step and `a > b` a down step. Consecutive steps are
//! connected when the second index of one equals the first index of the next.
//! This module holds the step alphabet, the path representation, exhaustive
//! enumerators used as counting oracles, and the local equivalence moves.

mod enumerate;
mod moves;
mod path;
mod step;

pub use enumerate::{
    all_connected, enumerate_walks, enumerate_walks_with, max_height, EnumerationLimits, Floor, WalkClass,
};
pub use moves::{
    equivalence_closure, equivalence_closure_with_cap, neighbours, partition_into_classes, LocalMove, MoveSet, MOVE_D,
    MOVE_U, MOVE_W1, MOVE_W2,
};
pub use path::{Connectivity, Path};
pub use step::{Direction, Step};
