//! Pareto-optimal assignment of players to fixed-capacity rooms.
//!
//! Players submit ordinal preference lists over the other players and are
//! partitioned into rooms whose capacities are fixed up front. A player
//! values her room by the rank of either her best or her worst roommate.
//! The crate provides:
//!
//! - the domain model: instances, assignments, coalition values, Pareto
//!   dominance ([`model`]);
//! - exhaustive and pruned search: feasibility, Pareto-optimality
//!   verification with a dominating witness, improvement chains,
//!   unanimous-best search ([`exact`]);
//! - serial dictatorship for the tractable cases ([`dictatorship`]);
//! - brute-force oracles for triangle cover, directed triangle cover,
//!   3-dimensional hypergraph matching and unary bin packing ([`covers`]);
//! - deterministic reduction constructions from those problems to room
//!   assignment instances ([`reductions`]);
//! - text formats and seeded instance generation ([`format`], [`generate`]).

pub mod covers;
pub mod dictatorship;
pub mod exact;
pub mod format;
pub mod generate;
pub mod model;
pub mod reductions;

pub use exact::{SearchBudget, SearchError, Verdict, VerifyMethod};
pub use model::{
    Assignment, Coalition, CoalitionValue, ComparisonMode, Instance, ModelError, PlayerId,
    PreferenceProfile, Rank, RoomSpec,
};
