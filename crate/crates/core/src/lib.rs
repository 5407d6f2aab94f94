//! Trajectory-level Pareto analysis of finite-horizon decision processes.
//!
//! Trajectories are compared by their accumulated cost vectors. The crate
//! enumerates trajectory spaces, computes exact Pareto fronts, detects Pareto
//! traps (regions an optimizer cannot leave without first getting worse, or
//! that a policy can never leave), labels them, and scores how hard they are
//! to escape.
//!
//! Everything numeric is generic over [`Scalar`]; `f64` is the default and
//! [`Rational`] gives exact results.
//!
//! ```
//! use ptl_core::{builtin_env, enumerate_trajectories, pareto_front, BuiltinEnv, EnvironmentSpec};
//!
//! let env: EnvironmentSpec = builtin_env(BuiltinEnv::A4DeterministicJump);
//! let space = enumerate_trajectories(&env, Some(4)).unwrap();
//! let front = pareto_front(&space).unwrap();
//! assert_eq!(front.len(), 2);
//! ```

pub mod dominance;
pub mod env;
pub mod error;
pub mod report;
pub mod scalar;
pub mod sim;
pub mod tedi;
pub mod trajspace;
pub mod traps;

pub use dominance::{
    compare, dominates, front_components, pareto_front, pareto_front_costs, plan_front, Dominance,
    FrontResult,
};
pub use env::{
    builtin_env, load_env, ActionSpec, BuiltinEnv, CostRule, EnvironmentSpec, TransitionRule,
};
pub use error::{Error, Result};
pub use scalar::{CompensatedSum, Rational, Scalar};
pub use sim::{
    compare_policies, run_batch, select_action, ActionRoles, BatchStats, ComparisonReport,
    PolicySpec, PreparedPolicy, RunRecord,
};
pub use tedi::{
    behavioral_inertia, escape_distance, structural_constraint, tedi, tedi_for_trap,
    EscapeCategory, TediReport, TediWeights,
};
pub use trajspace::{
    accumulate, enumerate_trajectories, enumerate_with, hamming, rollout, segment_cost, CostVector,
    EnumerateOptions, SpaceItem, Trajectory, TrajectorySpace, DEFAULT_ENUMERATION_CAP,
};
pub use traps::{
    ceiling, ceiling_gap, ceiling_gap_in, classify_trap, classify_trap_with,
    detect_trap_confinement, detect_traps_strict, detect_traps_strict_with,
    has_degradation_certificate, is_locally_pareto_optimal, Agent, Scalarization, TaxonomyConfig,
    TaxonomyLabel, Trap, TrapMode,
};

pub type CostVectorF32 = CostVector<f32>;
pub type CostVectorF64 = CostVector<f64>;
pub type ExactCostVector = CostVector<Rational>;

pub type EnvironmentSpecF32 = EnvironmentSpec<f32>;
pub type ExactEnvironmentSpec = EnvironmentSpec<Rational>;

pub type TrajectorySpaceF32 = TrajectorySpace<f32>;
pub type ExactTrajectorySpace = TrajectorySpace<Rational>;

pub type ExactScalarization = Scalarization<Rational>;
