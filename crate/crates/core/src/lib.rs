//! Directional direct search for blackbox optimization.
//!
//! Three solvers share one framework:
//!
//! - **ADS** (adaptive direct search) accepts any strict decrease, but only for
//!   trial points lying in the *punctured space*: points at least `δ` away from
//!   everything evaluated so far.
//! - **MADS** (OrthoMADS 2n) restricts trial points to a mesh and accepts any
//!   strict decrease.
//! - **SDDS** places trial points freely but accepts only a sufficient decrease
//!   `f(y) < f(x) - ρ(δ)`.
//!
//! Constraints are handled with the extreme barrier: infeasible points, and
//! points where the blackbox fails, take the value `+∞`.
//!
//! The crate also ships benchmark problems, a quadratic-model search step, a
//! subprocess blackbox adapter and a data-profile harness.

pub mod benchmarks;
pub mod geometry;
pub mod harness;
pub mod model;
pub mod problem;
pub mod solvers;

pub use geometry::{MeshSpec, Norm, PollDirections, VisitedSet};
pub use harness::{ProfileCurve, Record, RunHistory};
pub use model::QuadraticModel;
pub use problem::{evaluate_barrier, Evaluation, Phase, Problem};
pub use solvers::{run, Algorithm, RunOptions, SearchKind, Tau};
