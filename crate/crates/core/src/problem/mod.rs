//! Problem definition and extreme-barrier evaluation.
//!
//! A [`Problem`] couples a [`Blackbox`] (objective plus constraints, evaluated
//! jointly) with bounds and a start point. Feasibility follows the `c(x) <= 0`
//! convention. [`evaluate_barrier`] never fails because of the blackbox: crashes,
//! timeouts and non-finite outputs all collapse to `+∞`.

mod subprocess;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use subprocess::SubprocessBlackbox;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProblemError {
    #[error("problem dimension must be at least 1")]
    ZeroDimension,
    #[error("expected a point of dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coordinate {index} is not finite ({value})")]
    NonFiniteCoordinate { index: usize, value: f64 },
    #[error("lower bound exceeds upper bound on coordinate {index} ({lower} > {upper})")]
    InvertedBounds {
        index: usize,
        lower: f64,
        upper: f64,
    },
    #[error("start point is infeasible for problem `{0}`")]
    InfeasibleStart(String),
    #[error("unknown problem `{name}`; registered problems: {}", .known.join(", "))]
    UnknownProblem { name: String, known: Vec<String> },
    #[error("blackbox executable `{0}` does not exist or is not a file")]
    MissingExecutable(String),
}

/// Reason a blackbox call produced no usable output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalFailure {
    Crashed(String),
    Timeout,
    BadOutput(String),
}

impl fmt::Display for EvalFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalFailure::Crashed(msg) => write!(f, "evaluation crashed: {msg}"),
            EvalFailure::Timeout => write!(f, "evaluation timed out"),
            EvalFailure::BadOutput(msg) => write!(f, "unparseable output: {msg}"),
        }
    }
}

/// Objective and constraint values returned by one blackbox call.
#[derive(Debug, Clone, PartialEq)]
pub struct BlackboxOutput {
    pub objective: f64,
    pub constraints: Vec<f64>,
}

pub trait Blackbox: Send + Sync {
    fn evaluate(&self, x: &[f64]) -> Result<BlackboxOutput, EvalFailure>;
}

type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Blackbox built from closed-form objective and constraint functions.
#[derive(Clone)]
pub struct Analytic {
    objective: ScalarFn,
    constraints: Vec<ScalarFn>,
}

impl Analytic {
    pub fn new(objective: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            objective: Arc::new(objective),
            constraints: Vec::new(),
        }
    }

    pub fn constraint(mut self, c: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        self.constraints.push(Arc::new(c));
        self
    }
}

impl Blackbox for Analytic {
    fn evaluate(&self, x: &[f64]) -> Result<BlackboxOutput, EvalFailure> {
        Ok(BlackboxOutput {
            objective: (self.objective)(x),
            constraints: self.constraints.iter().map(|c| c(x)).collect(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Phase {
    Initial,
    Search,
    Poll,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Initial => "initial",
            Phase::Search => "search",
            Phase::Poll => "poll",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "initial" => Some(Phase::Initial),
            "search" => Some(Phase::Search),
            "poll" => Some(Phase::Poll),
            _ => None,
        }
    }
}

/// One barrier evaluation. `value` is `+∞` exactly when `feasible` is false.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub point: Vec<f64>,
    pub value: f64,
    /// Objective reported by the blackbox, if it produced one.
    pub raw: Option<f64>,
    /// Constraint values reported by the blackbox (empty when unavailable).
    pub constraints: Vec<f64>,
    pub feasible: bool,
    pub phase: Phase,
    pub eval_index: usize,
    pub iteration: usize,
}

pub struct Problem {
    name: String,
    dimension: usize,
    num_constraints: usize,
    lower: Option<Vec<f64>>,
    upper: Option<Vec<f64>>,
    x0: Vec<f64>,
    blackbox: Arc<dyn Blackbox>,
}

impl Clone for Problem {
    fn clone(&self) -> Self {
        Self {
            name: self.name.clone(),
            dimension: self.dimension,
            num_constraints: self.num_constraints,
            lower: self.lower.clone(),
            upper: self.upper.clone(),
            x0: self.x0.clone(),
            blackbox: Arc::clone(&self.blackbox),
        }
    }
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("dimension", &self.dimension)
            .field("num_constraints", &self.num_constraints)
            .field("lower", &self.lower)
            .field("upper", &self.upper)
            .field("x0", &self.x0)
            .finish_non_exhaustive()
    }
}

impl Problem {
    /// Builds an unbounded problem; attach bounds with [`Problem::with_bounds`].
    ///
    /// `num_constraints` is the number of constraint values the blackbox is
    /// expected to return (used to size constraint models).
    pub fn new(
        name: impl Into<String>,
        x0: Vec<f64>,
        num_constraints: usize,
        blackbox: Arc<dyn Blackbox>,
    ) -> Result<Self, ProblemError> {
        if x0.is_empty() {
            return Err(ProblemError::ZeroDimension);
        }
        check_finite(&x0)?;
        Ok(Self {
            name: name.into(),
            dimension: x0.len(),
            num_constraints,
            lower: None,
            upper: None,
            x0,
            blackbox,
        })
    }

    /// Attaches bounds. Infinite entries leave that side of a coordinate open.
    pub fn with_bounds(
        mut self,
        lower: Option<Vec<f64>>,
        upper: Option<Vec<f64>>,
    ) -> Result<Self, ProblemError> {
        for b in [&lower, &upper].into_iter().flatten() {
            if b.len() != self.dimension {
                return Err(ProblemError::DimensionMismatch {
                    expected: self.dimension,
                    got: b.len(),
                });
            }
        }
        if let (Some(l), Some(u)) = (&lower, &upper) {
            for (index, (&lo, &up)) in l.iter().zip(u).enumerate() {
                if lo > up {
                    return Err(ProblemError::InvertedBounds {
                        index,
                        lower: lo,
                        upper: up,
                    });
                }
            }
        }
        self.lower = lower;
        self.upper = upper;
        Ok(self)
    }

    pub fn with_start(mut self, x0: Vec<f64>) -> Result<Self, ProblemError> {
        if x0.len() != self.dimension {
            return Err(ProblemError::DimensionMismatch {
                expected: self.dimension,
                got: x0.len(),
            });
        }
        check_finite(&x0)?;
        self.x0 = x0;
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn num_constraints(&self) -> usize {
        self.num_constraints
    }

    pub fn lower(&self) -> Option<&[f64]> {
        self.lower.as_deref()
    }

    pub fn upper(&self) -> Option<&[f64]> {
        self.upper.as_deref()
    }

    pub fn x0(&self) -> &[f64] {
        &self.x0
    }

    pub fn blackbox(&self) -> &Arc<dyn Blackbox> {
        &self.blackbox
    }

    pub fn within_bounds(&self, x: &[f64]) -> bool {
        let lo_ok = self
            .lower
            .as_ref()
            .is_none_or(|l| x.iter().zip(l).all(|(xi, li)| xi >= li));
        let up_ok = self
            .upper
            .as_ref()
            .is_none_or(|u| x.iter().zip(u).all(|(xi, ui)| xi <= ui));
        lo_ok && up_ok
    }

    /// Componentwise projection onto the bound box.
    pub fn clip_to_bounds(&self, x: &mut [f64]) {
        if let Some(l) = &self.lower {
            x.iter_mut().zip(l).for_each(|(xi, &li)| *xi = xi.max(li));
        }
        if let Some(u) = &self.upper {
            x.iter_mut().zip(u).for_each(|(xi, &ui)| *xi = xi.min(ui));
        }
    }

    /// True when every coordinate has finite lower and upper bounds.
    pub fn is_boxed(&self) -> bool {
        match (&self.lower, &self.upper) {
            (Some(l), Some(u)) => l.iter().chain(u).all(|b| b.is_finite()),
            _ => false,
        }
    }

    /// Evaluates the start point and fails unless it is feasible.
    pub fn check_start(&self) -> Result<Evaluation, ProblemError> {
        let e = evaluate_barrier(self, &self.x0, Phase::Initial, 1, 0)?;
        if e.feasible {
            Ok(e)
        } else {
            Err(ProblemError::InfeasibleStart(self.name.clone()))
        }
    }
}

fn check_finite(x: &[f64]) -> Result<(), ProblemError> {
    match x.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(ProblemError::NonFiniteCoordinate {
            index,
            value: x[index],
        }),
        None => Ok(()),
    }
}

/// Extreme-barrier evaluation of `problem` at `x`.
///
/// Out-of-bounds points are rejected without calling the blackbox. Any blackbox
/// failure, a non-finite output, or a positive constraint value yields `+∞`.
pub fn evaluate_barrier(
    problem: &Problem,
    x: &[f64],
    phase: Phase,
    eval_index: usize,
    iteration: usize,
) -> Result<Evaluation, ProblemError> {
    if x.len() != problem.dimension {
        return Err(ProblemError::DimensionMismatch {
            expected: problem.dimension,
            got: x.len(),
        });
    }
    check_finite(x)?;

    let mut eval = Evaluation {
        point: x.to_vec(),
        value: f64::INFINITY,
        raw: None,
        constraints: Vec::new(),
        feasible: false,
        phase,
        eval_index,
        iteration,
    };
    if !problem.within_bounds(x) {
        return Ok(eval);
    }
    let Ok(out) = problem.blackbox.evaluate(x) else {
        return Ok(eval);
    };
    if !out.objective.is_finite() || out.constraints.iter().any(|c| c.is_nan()) {
        return Ok(eval);
    }
    let feasible = out.constraints.iter().all(|&c| c <= 0.0);
    eval.raw = Some(out.objective);
    eval.constraints = out.constraints;
    if feasible {
        eval.value = out.objective;
        eval.feasible = true;
    }
    Ok(eval)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc() -> Problem {
        let bb = Analytic::new(|x| x[0] + x[1]).constraint(|x| x[0] * x[0] + x[1] * x[1] - 1.0);
        Problem::new("disc", vec![0.0, 0.0], 1, Arc::new(bb)).unwrap()
    }

    #[test]
    fn center_of_disc_is_feasible() {
        let e = evaluate_barrier(&disc(), &[0.0, 0.0], Phase::Poll, 1, 0).unwrap();
        assert!(e.feasible);
        assert_eq!(e.value, 0.0);
    }

    #[test]
    fn outside_disc_is_infinite() {
        let e = evaluate_barrier(&disc(), &[1.0, 1.0], Phase::Poll, 1, 0).unwrap();
        assert!(!e.feasible);
        assert_eq!(e.value, f64::INFINITY);
        assert_eq!(e.raw, Some(2.0));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let err = evaluate_barrier(&disc(), &[0.0], Phase::Poll, 1, 0).unwrap_err();
        assert_eq!(
            err,
            ProblemError::DimensionMismatch {
                expected: 2,
                got: 1
            }
        );
    }

    #[test]
    fn non_finite_input_is_an_error() {
        let err = evaluate_barrier(&disc(), &[f64::NAN, 0.0], Phase::Poll, 1, 0).unwrap_err();
        assert!(matches!(
            err,
            ProblemError::NonFiniteCoordinate { index: 0, .. }
        ));
    }

    #[test]
    fn nan_objective_maps_to_barrier() {
        let bb = Analytic::new(|_| f64::NAN);
        let p = Problem::new("nan", vec![0.0], 0, Arc::new(bb)).unwrap();
        let e = evaluate_barrier(&p, &[0.0], Phase::Poll, 1, 0).unwrap();
        assert!(!e.feasible && e.value.is_infinite() && e.raw.is_none());
    }

    #[test]
    fn bounds_are_checked_before_the_blackbox() {
        let bb = Analytic::new(|_| panic!("must not be called"));
        let p = Problem::new("b", vec![0.5], 0, Arc::new(bb))
            .unwrap()
            .with_bounds(Some(vec![0.0]), Some(vec![1.0]))
            .unwrap();
        let e = evaluate_barrier(&p, &[2.0], Phase::Poll, 1, 0).unwrap();
        assert!(!e.feasible);
    }

    #[test]
    fn inverted_bounds_rejected() {
        let err = disc()
            .with_bounds(Some(vec![0.0, 2.0]), Some(vec![1.0, 1.0]))
            .unwrap_err();
        assert!(matches!(err, ProblemError::InvertedBounds { index: 1, .. }));
    }

    #[test]
    fn empty_start_rejected() {
        let bb = Analytic::new(|_| 0.0);
        assert_eq!(
            Problem::new("e", vec![], 0, Arc::new(bb)).unwrap_err(),
            ProblemError::ZeroDimension
        );
    }

    #[test]
    fn infeasible_start_detected() {
        let p = disc().with_start(vec![2.0, 0.0]).unwrap();
        assert!(matches!(
            p.check_start(),
            Err(ProblemError::InfeasibleStart(_))
        ));
    }
}
