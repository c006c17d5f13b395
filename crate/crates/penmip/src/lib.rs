//! Exact-penalty solver for mixed-binary optimization problems.
//!
//! Problems with a binary block `x ∈ {0,1}^n` and a continuous block
//! `y ∈ R^m` are reformulated as continuous problems by coupling `x` to an
//! auxiliary vector `a ∈ [0,1]^n` through the bilinear penalty
//!
//! ```text
//! phi_lambda(x, a) = lambda * (n - <x, a> - <1 - x, 1 - a>)
//! ```
//!
//! which vanishes exactly when `x = a` and both are binary. The solver
//! alternates convex block minimizations (continuous block, relaxed binary
//! block, closed-form auxiliary update) while growing `lambda`
//! geometrically, so no cross-validation of the penalty coefficient is
//! needed. Once `lambda` exceeds the objective's Lipschitz constant on the
//! binary block, the relaxed block solutions are binary and the iteration
//! count to reach a given binarity tolerance is bounded in closed form.
//!
//! Objectives that are not block-convex are handled by an outer
//! difference-of-convex loop ([`dc`]): the concave part is linearized at the
//! current iterate, non-convex inequality constraints are replaced by convex
//! majorants (which shrink the feasible set, never grow it), and the inner
//! convexified problem is solved with the same alternating scheme.
//!
//! The [`rat`] module builds the bundled benchmark family: user-to-station
//! assignment across two radio access technologies, with a change of
//! variables that exposes block multi-convex structure, an explicit
//! difference-of-convex split, seeded instance generation, and an exhaustive
//! search oracle for verification.

pub mod dc;
pub mod error;
pub mod objective;
pub mod penalty;
pub mod rat;
pub mod solver;
pub mod subsolver;
pub(crate) mod vecmath;

pub use error::{Error, Result};
pub use objective::Objective;
pub use penalty::{
    distance, hard_threshold, in_zero_penalty_set, optimal_aux, penalty, BinaryVector,
    PenaltyValue, RelaxedVector,
};
pub use solver::{
    iteration_bound, lambda_threshold, solve, solve_multiblock, IterationRecord, Iterate,
    MixedProblem, PenaltySchedule, SolveParams, SolveTrace,
};
pub use subsolver::{
    minimize, project, AffineRow, ConvexConstraint, FeasibleRegion, SubproblemResult,
    SubsolverParams,
};
