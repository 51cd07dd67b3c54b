//! Permutation pattern constraint engine.
//!
//! Decides containment and avoidance of classic, vincular, bivincular, mesh,
//! boxed and consecutive patterns, evaluates structural properties and
//! statistics, and enumerates all permutations of a given length that
//! satisfy a conjunction of such constraints.

pub mod model;
pub mod oracle;
pub mod pattern;
pub mod perm;
pub mod properties;
pub mod solver;
pub mod statistics;

pub use model::{parse_model, serialize_model, Constraint, Model, ModelError};
pub use oracle::{brute_force_solve, OracleError};
pub use pattern::{avoids, contains, find_occurrences, to_mesh, Mode, PatternSpec, Variant};
pub use perm::{Occurrence, Permutation};
pub use properties::{check_property, PropertyKind};
pub use solver::{solve, Solution, SolveConfig, SolveError, SolveMode, SolveOutcome};
pub use statistics::{statistic, Comparator, StatisticKind, StatisticPredicate};
