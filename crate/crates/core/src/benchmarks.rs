//! Built-in problems and benchmark suites.
//!
//! The registry holds the two one-dimensional counterexamples, a family of
//! least-squares test functions (each in a smooth `Σ rᵢ²` and a nonsmooth
//! `Σ |rᵢ|` form, the latter suffixed `_l1`) and small Hock–Schittkowski
//! problems rewritten in the `c(x) <= 0` convention.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::problem::{evaluate_barrier, Analytic, Phase, Problem, ProblemError};
use crate::solvers::{RunOptions, SearchKind};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BenchmarkError {
    #[error("unknown suite `{0}`; expected one of counterexamples, morewild_smooth, morewild_nonsmooth, constrained")]
    UnknownSuite(String),
    #[error("latin hypercube sampling needs finite bounds on every coordinate")]
    Unbounded,
    #[error("at least one {0} is required")]
    ZeroCount(&'static str),
    #[error("found only {found} feasible starts out of {wanted} after {batches} batches")]
    TooFewFeasible {
        found: usize,
        wanted: usize,
        batches: usize,
    },
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    Smooth,
    Nonsmooth,
    Constrained,
    /// Used as stated, no composition (the counterexamples).
    Raw,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Smooth => "smooth",
            Variant::Nonsmooth => "nonsmooth",
            Variant::Constrained => "constrained",
            Variant::Raw => "raw",
        }
    }
}

/// Coefficient of the first counterexample.
pub const F1_GAMMA: f64 = 1e-2;

pub fn f1(x: f64) -> f64 {
    F1_GAMMA * (x + 2.0) * x.powi(5)
}

pub fn f2(x: f64) -> f64 {
    (x - 1.0 / 3.0) * (x - 1.0 / 3.0)
}

type Residuals = fn(&[f64]) -> Vec<f64>;

struct LeastSquares {
    name: &'static str,
    x0: fn() -> Vec<f64>,
    residuals: Residuals,
}

fn linear_full(x: &[f64]) -> Vec<f64> {
    const M: usize = 6;
    let s: f64 = x.iter().sum();
    let c = 2.0 / M as f64 * s + 1.0;
    (0..M)
        .map(|i| if i < x.len() { x[i] - c } else { -c })
        .collect()
}

fn linear_rank1(x: &[f64]) -> Vec<f64> {
    let s: f64 = x.iter().enumerate().map(|(j, v)| (j + 1) as f64 * v).sum();
    (1..=6).map(|i| i as f64 * s - 1.0).collect()
}

fn rosenbrock(x: &[f64]) -> Vec<f64> {
    vec![10.0 * (x[1] - x[0] * x[0]), 1.0 - x[0]]
}

fn helical_valley(x: &[f64]) -> Vec<f64> {
    let theta = if x[0] > 0.0 {
        (x[1] / x[0]).atan() / (2.0 * PI)
    } else if x[0] < 0.0 {
        (x[1] / x[0]).atan() / (2.0 * PI) + 0.5
    } else {
        0.25 * x[1].signum()
    };
    vec![
        10.0 * (x[2] - 10.0 * theta),
        10.0 * ((x[0] * x[0] + x[1] * x[1]).sqrt() - 1.0),
        x[2],
    ]
}

fn powell_singular(x: &[f64]) -> Vec<f64> {
    vec![
        x[0] + 10.0 * x[1],
        5f64.sqrt() * (x[2] - x[3]),
        (x[1] - 2.0 * x[2]).powi(2),
        10f64.sqrt() * (x[0] - x[3]).powi(2),
    ]
}

fn freudenstein_roth(x: &[f64]) -> Vec<f64> {
    vec![
        -13.0 + x[0] + ((5.0 - x[1]) * x[1] - 2.0) * x[1],
        -29.0 + x[0] + ((x[1] + 1.0) * x[1] - 14.0) * x[1],
    ]
}

const BARD_Y: [f64; 15] = [
    0.14, 0.18, 0.22, 0.25, 0.29, 0.32, 0.35, 0.39, 0.37, 0.58, 0.73, 0.96, 1.34, 2.10, 4.39,
];

fn bard(x: &[f64]) -> Vec<f64> {
    (1..=15)
        .map(|i| {
            let u = i as f64;
            let v = (16 - i) as f64;
            let w = u.min(v);
            BARD_Y[i - 1] - (x[0] + u / (v * x[1] + w * x[2]))
        })
        .collect()
}

const KOWALIK_Y: [f64; 11] = [
    0.1957, 0.1947, 0.1735, 0.1600, 0.0844, 0.0627, 0.0456, 0.0342, 0.0323, 0.0235, 0.0246,
];
const KOWALIK_U: [f64; 11] = [
    4.0, 2.0, 1.0, 0.5, 0.25, 0.167, 0.125, 0.1, 0.0833, 0.0714, 0.0625,
];

fn kowalik_osborne(x: &[f64]) -> Vec<f64> {
    KOWALIK_Y
        .iter()
        .zip(KOWALIK_U)
        .map(|(y, u)| y - x[0] * (u * u + u * x[1]) / (u * u + u * x[2] + x[3]))
        .collect()
}

fn box3d(x: &[f64]) -> Vec<f64> {
    (1..=10)
        .map(|i| {
            let t = 0.1 * i as f64;
            (-t * x[0]).exp() - (-t * x[1]).exp() - x[2] * ((-t).exp() - (-10.0 * t).exp())
        })
        .collect()
}

fn jennrich_sampson(x: &[f64]) -> Vec<f64> {
    (1..=10)
        .map(|i| {
            let i = i as f64;
            2.0 + 2.0 * i - ((i * x[0]).exp() + (i * x[1]).exp())
        })
        .collect()
}

fn brown_dennis(x: &[f64]) -> Vec<f64> {
    (1..=20)
        .map(|i| {
            let t = i as f64 / 5.0;
            (x[0] + t * x[1] - t.exp()).powi(2) + (x[2] + x[3] * t.sin() - t.cos()).powi(2)
        })
        .collect()
}

fn brown_almost_linear(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let s: f64 = x.iter().sum();
    let mut r: Vec<f64> = x[..n - 1].iter().map(|v| v + s - (n + 1) as f64).collect();
    r.push(x.iter().product::<f64>() - 1.0);
    r
}

fn cube(x: &[f64]) -> Vec<f64> {
    let mut r = vec![x[0] - 1.0];
    r.extend(x.windows(2).map(|w| 10.0 * (w[1] - w[0].powi(3))));
    r
}

fn bdqrtic(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut r: Vec<f64> = (0..n - 4).map(|i| -4.0 * x[i] + 3.0).collect();
    r.extend((0..n - 4).map(|i| {
        x[i].powi(2)
            + 2.0 * x[i + 1].powi(2)
            + 3.0 * x[i + 2].powi(2)
            + 4.0 * x[i + 3].powi(2)
            + 5.0 * x[n - 1].powi(2)
    }));
    r
}

fn penalty1(x: &[f64]) -> Vec<f64> {
    let a = 1e-5f64.sqrt();
    let mut r: Vec<f64> = x.iter().map(|v| a * (v - 1.0)).collect();
    r.push(x.iter().map(|v| v * v).sum::<f64>() - 0.25);
    r
}

fn chebyquad(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut r = vec![0.0; n];
    for &xj in x {
        // Shifted Chebyshev recurrence on [0, 1].
        let t = 2.0 * xj - 1.0;
        let (mut prev, mut cur) = (1.0, t);
        for ri in r.iter_mut() {
            *ri += cur;
            let next = 2.0 * t * cur - prev;
            prev = cur;
            cur = next;
        }
    }
    for (i, ri) in r.iter_mut().enumerate() {
        *ri /= n as f64;
        let k = (i + 1) as f64;
        if (i + 1) % 2 == 0 {
            *ri += 1.0 / (k * k - 1.0);
        }
    }
    r
}

const LEAST_SQUARES: &[LeastSquares] = &[
    LeastSquares {
        name: "linear_full",
        x0: || vec![1.0; 4],
        residuals: linear_full,
    },
    LeastSquares {
        name: "linear_rank1",
        x0: || vec![1.0; 4],
        residuals: linear_rank1,
    },
    LeastSquares {
        name: "rosenbrock2d",
        x0: || vec![-1.2, 1.0],
        residuals: rosenbrock,
    },
    LeastSquares {
        name: "helical_valley",
        x0: || vec![-1.0, 0.0, 0.0],
        residuals: helical_valley,
    },
    LeastSquares {
        name: "powell_singular",
        x0: || vec![3.0, -1.0, 0.0, 1.0],
        residuals: powell_singular,
    },
    LeastSquares {
        name: "freudenstein_roth",
        x0: || vec![0.5, -2.0],
        residuals: freudenstein_roth,
    },
    LeastSquares {
        name: "bard",
        x0: || vec![1.0, 1.0, 1.0],
        residuals: bard,
    },
    LeastSquares {
        name: "kowalik_osborne",
        x0: || vec![0.25, 0.39, 0.415, 0.39],
        residuals: kowalik_osborne,
    },
    LeastSquares {
        name: "box3d",
        x0: || vec![0.0, 10.0, 20.0],
        residuals: box3d,
    },
    LeastSquares {
        name: "jennrich_sampson",
        x0: || vec![0.3, 0.4],
        residuals: jennrich_sampson,
    },
    LeastSquares {
        name: "brown_dennis",
        x0: || vec![25.0, 5.0, -5.0, -1.0],
        residuals: brown_dennis,
    },
    LeastSquares {
        name: "brown_almost_linear",
        x0: || vec![0.5; 5],
        residuals: brown_almost_linear,
    },
    LeastSquares {
        name: "cube",
        x0: || vec![0.5; 5],
        residuals: cube,
    },
    LeastSquares {
        name: "bdqrtic",
        x0: || vec![1.0; 10],
        residuals: bdqrtic,
    },
    LeastSquares {
        name: "penalty1",
        x0: || (1..=4).map(f64::from).collect(),
        residuals: penalty1,
    },
    LeastSquares {
        name: "chebyquad",
        x0: || (1..=6).map(|j| j as f64 / 7.0).collect(),
        residuals: chebyquad,
    },
];

type Scalar = fn(&[f64]) -> f64;

struct Constrained {
    name: &'static str,
    x0: &'static [f64],
    lower: Option<&'static [f64]>,
    upper: Option<&'static [f64]>,
    objective: Scalar,
    constraints: &'static [Scalar],
}

const INF: f64 = f64::INFINITY;

const CONSTRAINED: &[Constrained] = &[
    Constrained {
        name: "hs12",
        x0: &[0.0, 0.0],
        lower: None,
        upper: None,
        objective: |x| 0.5 * x[0] * x[0] + x[1] * x[1] - x[0] * x[1] - 7.0 * x[0] - 7.0 * x[1],
        constraints: &[|x| 4.0 * x[0] * x[0] + x[1] * x[1] - 25.0],
    },
    Constrained {
        name: "hs24",
        x0: &[1.0, 0.5],
        lower: Some(&[0.0, 0.0]),
        upper: None,
        objective: |x| ((x[0] - 3.0).powi(2) - 9.0) * x[1].powi(3) / (27.0 * 3f64.sqrt()),
        constraints: &[
            |x| x[1] - x[0] / 3f64.sqrt(),
            |x| -x[0] - 3f64.sqrt() * x[1],
            |x| x[0] + 3f64.sqrt() * x[1] - 6.0,
        ],
    },
    Constrained {
        name: "hs29",
        x0: &[1.0, 1.0, 1.0],
        lower: None,
        upper: None,
        objective: |x| -x[0] * x[1] * x[2],
        constraints: &[|x| x[0] * x[0] + 2.0 * x[1] * x[1] + 4.0 * x[2] * x[2] - 48.0],
    },
    Constrained {
        name: "hs30",
        x0: &[1.0, 1.0, 1.0],
        lower: Some(&[1.0, -10.0, -10.0]),
        upper: Some(&[10.0, 10.0, 10.0]),
        objective: |x| x.iter().map(|v| v * v).sum(),
        constraints: &[|x| 1.0 - x[0] * x[0] - x[1] * x[1]],
    },
    Constrained {
        name: "hs31",
        x0: &[1.0, 1.0, 1.0],
        lower: Some(&[-10.0, 1.0, -10.0]),
        upper: Some(&[10.0, 10.0, 1.0]),
        objective: |x| 9.0 * x[0] * x[0] + x[1] * x[1] + 9.0 * x[2] * x[2],
        constraints: &[|x| 1.0 - x[0] * x[1]],
    },
    Constrained {
        name: "hs33",
        x0: &[0.0, 0.0, 3.0],
        lower: Some(&[0.0, 0.0, 0.0]),
        upper: Some(&[INF, INF, 5.0]),
        objective: |x| (x[0] - 1.0) * (x[0] - 2.0) * (x[0] - 3.0) + x[2],
        constraints: &[
            |x| x[0] * x[0] + x[1] * x[1] - x[2] * x[2],
            |x| 4.0 - x[0] * x[0] - x[1] * x[1] - x[2] * x[2],
        ],
    },
    Constrained {
        name: "hs34",
        x0: &[0.0, 1.05, 2.9],
        lower: Some(&[0.0, 0.0, 0.0]),
        upper: Some(&[100.0, 100.0, 10.0]),
        objective: |x| -x[0],
        constraints: &[|x| x[0].exp() - x[1], |x| x[1].exp() - x[2]],
    },
    Constrained {
        name: "hs35",
        x0: &[0.5, 0.5, 0.5],
        lower: Some(&[0.0, 0.0, 0.0]),
        upper: None,
        objective: |x| {
            9.0 - 8.0 * x[0] - 6.0 * x[1] - 4.0 * x[2]
                + 2.0 * x[0] * x[0]
                + 2.0 * x[1] * x[1]
                + x[2] * x[2]
                + 2.0 * x[0] * x[1]
                + 2.0 * x[0] * x[2]
        },
        constraints: &[|x| x[0] + x[1] + 2.0 * x[2] - 3.0],
    },
    Constrained {
        name: "hs36",
        x0: &[10.0, 10.0, 10.0],
        lower: Some(&[0.0, 0.0, 0.0]),
        upper: Some(&[20.0, 11.0, 42.0]),
        objective: |x| -x[0] * x[1] * x[2],
        constraints: &[|x| x[0] + 2.0 * x[1] + 2.0 * x[2] - 72.0],
    },
    Constrained {
        name: "hs43",
        x0: &[0.0, 0.0, 0.0, 0.0],
        lower: None,
        upper: None,
        objective: |x| {
            x[0] * x[0] + x[1] * x[1] + 2.0 * x[2] * x[2] + x[3] * x[3]
                - 5.0 * x[0]
                - 5.0 * x[1]
                - 21.0 * x[2]
                + 7.0 * x[3]
        },
        constraints: &[
            |x| {
                x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3] + x[0] - x[1] + x[2]
                    - x[3]
                    - 8.0
            },
            |x| {
                x[0] * x[0] + 2.0 * x[1] * x[1] + x[2] * x[2] + 2.0 * x[3] * x[3]
                    - x[0]
                    - x[3]
                    - 10.0
            },
            |x| 2.0 * x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + 2.0 * x[0] - x[1] - x[3] - 5.0,
        ],
    },
    Constrained {
        name: "hs76",
        x0: &[0.5, 0.5, 0.5, 0.5],
        lower: Some(&[0.0, 0.0, 0.0, 0.0]),
        upper: None,
        objective: |x| {
            x[0] * x[0] + 0.5 * x[1] * x[1] + x[2] * x[2] + 0.5 * x[3] * x[3] - x[0] * x[2]
                + x[2] * x[3]
                - x[0]
                - 3.0 * x[1]
                + x[2]
                - x[3]
        },
        constraints: &[
            |x| x[0] + 2.0 * x[1] + x[2] + x[3] - 5.0,
            |x| 3.0 * x[0] + x[1] + 2.0 * x[2] - x[3] - 4.0,
            |x| 1.5 - x[1] - 4.0 * x[2],
        ],
    },
    Constrained {
        name: "hs100",
        x0: &[1.0, 2.0, 0.0, 4.0, 0.0, 1.0, 1.0],
        lower: None,
        upper: None,
        objective: |x| {
            (x[0] - 10.0).powi(2)
                + 5.0 * (x[1] - 12.0).powi(2)
                + x[2].powi(4)
                + 3.0 * (x[3] - 11.0).powi(2)
                + 10.0 * x[4].powi(6)
                + 7.0 * x[5] * x[5]
                + x[6].powi(4)
                - 4.0 * x[5] * x[6]
                - 10.0 * x[5]
                - 8.0 * x[6]
        },
        constraints: &[
            |x| {
                2.0 * x[0] * x[0] + 3.0 * x[1].powi(4) + x[2] + 4.0 * x[3] * x[3] + 5.0 * x[4]
                    - 127.0
            },
            |x| 7.0 * x[0] + 3.0 * x[1] + 10.0 * x[2] * x[2] + x[3] - x[4] - 282.0,
            |x| 23.0 * x[0] + x[1] * x[1] + 6.0 * x[5] * x[5] - 8.0 * x[6] - 196.0,
            |x| {
                4.0 * x[0] * x[0] + x[1] * x[1] - 3.0 * x[0] * x[1] + 2.0 * x[2] * x[2] + 5.0 * x[5]
                    - 11.0 * x[6]
            },
        ],
    },
];

fn least_squares_problem(ls: &LeastSquares, variant: Variant) -> Problem {
    let residuals = ls.residuals;
    let (name, bb) = match variant {
        Variant::Nonsmooth => (
            format!("{}_l1", ls.name),
            Analytic::new(move |x| residuals(x).iter().map(|r| r.abs()).sum()),
        ),
        _ => (
            ls.name.to_string(),
            Analytic::new(move |x| residuals(x).iter().map(|r| r * r).sum()),
        ),
    };
    Problem::new(name, (ls.x0)(), 0, Arc::new(bb)).expect("registry start points are valid")
}

fn constrained_problem(c: &Constrained) -> Problem {
    let mut bb = Analytic::new(c.objective);
    for &g in c.constraints {
        bb = bb.constraint(g);
    }
    Problem::new(c.name, c.x0.to_vec(), c.constraints.len(), Arc::new(bb))
        .and_then(|p| p.with_bounds(c.lower.map(<[f64]>::to_vec), c.upper.map(<[f64]>::to_vec)))
        .expect("registry problems are well formed")
}

fn counterexample(name: &str) -> Option<Problem> {
    let bb = match name {
        "f1" => Analytic::new(|x| f1(x[0])),
        "f2" => Analytic::new(|x| f2(x[0])),
        _ => return None,
    };
    Some(Problem::new(name, vec![1.0], 0, Arc::new(bb)).expect("valid start"))
}

/// Every registered name, counterexamples first.
pub fn registry_names() -> Vec<String> {
    let mut names = vec!["f1".to_string(), "f2".to_string()];
    names.extend(LEAST_SQUARES.iter().map(|ls| ls.name.to_string()));
    names.extend(LEAST_SQUARES.iter().map(|ls| format!("{}_l1", ls.name)));
    names.extend(CONSTRAINED.iter().map(|c| c.name.to_string()));
    names
}

pub fn least_squares_names() -> Vec<&'static str> {
    LEAST_SQUARES.iter().map(|ls| ls.name).collect()
}

pub fn constrained_names() -> Vec<&'static str> {
    CONSTRAINED.iter().map(|c| c.name).collect()
}

pub fn variant_of(name: &str) -> Option<Variant> {
    if name == "f1" || name == "f2" {
        Some(Variant::Raw)
    } else if CONSTRAINED.iter().any(|c| c.name == name) {
        Some(Variant::Constrained)
    } else if let Some(base) = name.strip_suffix("_l1") {
        LEAST_SQUARES
            .iter()
            .any(|ls| ls.name == base)
            .then_some(Variant::Nonsmooth)
    } else {
        LEAST_SQUARES
            .iter()
            .any(|ls| ls.name == name)
            .then_some(Variant::Smooth)
    }
}

/// Looks up a registered problem by name.
pub fn builtin_problem(name: &str) -> Result<Problem, ProblemError> {
    if let Some(p) = counterexample(name) {
        return Ok(p);
    }
    if let Some(c) = CONSTRAINED.iter().find(|c| c.name == name) {
        return Ok(constrained_problem(c));
    }
    let (base, variant) = match name.strip_suffix("_l1") {
        Some(base) => (base, Variant::Nonsmooth),
        None => (name, Variant::Smooth),
    };
    LEAST_SQUARES
        .iter()
        .find(|ls| ls.name == base)
        .map(|ls| least_squares_problem(ls, variant))
        .ok_or_else(|| ProblemError::UnknownProblem {
            name: name.to_string(),
            known: registry_names(),
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Suite {
    Counterexamples,
    MorewildSmooth,
    MorewildNonsmooth,
    Constrained,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::Counterexamples,
        Suite::MorewildSmooth,
        Suite::MorewildNonsmooth,
        Suite::Constrained,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Counterexamples => "counterexamples",
            Suite::MorewildSmooth => "morewild_smooth",
            Suite::MorewildNonsmooth => "morewild_nonsmooth",
            Suite::Constrained => "constrained",
        }
    }

    pub fn parse(s: &str) -> Result<Self, BenchmarkError> {
        Self::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| BenchmarkError::UnknownSuite(s.to_string()))
    }

    pub fn problem_names(self) -> Vec<String> {
        match self {
            Suite::Counterexamples => vec!["f1".into(), "f2".into()],
            Suite::MorewildSmooth => LEAST_SQUARES.iter().map(|l| l.name.to_string()).collect(),
            Suite::MorewildNonsmooth => LEAST_SQUARES
                .iter()
                .map(|l| format!("{}_l1", l.name))
                .collect(),
            Suite::Constrained => CONSTRAINED.iter().map(|c| c.name.to_string()).collect(),
        }
    }
}

/// One run to perform: a problem, a seed and any per-problem option overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub problem: String,
    pub seed: u64,
    pub variant: Variant,
    pub start: Vec<f64>,
    /// Overrides `Δ⁰ = δ⁰`.
    pub initial_size: Option<f64>,
    pub search: Option<SearchKind>,
}

impl Instance {
    pub fn new(problem: &str, seed: u64) -> Result<Self, ProblemError> {
        let p = builtin_problem(problem)?;
        let variant = variant_of(problem).expect("registered");
        let (initial_size, search) = match problem {
            "f1" => (Some(0.5), Some(SearchKind::None)),
            "f2" => (Some(1.0), Some(SearchKind::Quadratic)),
            _ => (None, None),
        };
        Ok(Self {
            problem: problem.to_string(),
            seed,
            variant,
            start: p.x0().to_vec(),
            initial_size,
            search,
        })
    }

    pub fn build_problem(&self) -> Result<Problem, ProblemError> {
        builtin_problem(&self.problem)?.with_start(self.start.clone())
    }

    pub fn options(&self, base: &RunOptions) -> RunOptions {
        let mut o = base.clone();
        if let Some(s) = self.initial_size {
            o = o.with_initial_size(s);
        }
        if let Some(s) = self.search {
            o.search = s;
        }
        o
    }

    /// Stable identifier used for file names.
    pub fn key(&self) -> String {
        format!("{}__s{}", self.problem, self.seed)
    }
}

/// Cross product of a suite's problems with seeds `0..seeds`. Constrained
/// instances are checked for a feasible start.
pub fn suite(which: Suite, seeds: u64) -> Result<Vec<Instance>, BenchmarkError> {
    if seeds == 0 {
        return Err(BenchmarkError::ZeroCount("seed"));
    }
    let mut out = Vec::new();
    for name in which.problem_names() {
        let template = Instance::new(&name, 0)?;
        if which == Suite::Constrained {
            template.build_problem()?.check_start()?;
        }
        for seed in 0..seeds {
            out.push(Instance {
                seed,
                ..template.clone()
            });
        }
    }
    Ok(out)
}

/// Latin hypercube design in the box: each coordinate hits every one of the
/// `count` equal-width strata exactly once.
pub fn latin_hypercube_starts(
    lower: &[f64],
    upper: &[f64],
    count: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>, BenchmarkError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    latin_hypercube_with(lower, upper, count, &mut rng)
}

fn latin_hypercube_with(
    lower: &[f64],
    upper: &[f64],
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec<f64>>, BenchmarkError> {
    if count == 0 {
        return Err(BenchmarkError::ZeroCount("point"));
    }
    if lower.len() != upper.len() || lower.iter().chain(upper).any(|b| !b.is_finite()) {
        return Err(BenchmarkError::Unbounded);
    }
    let n = lower.len();
    let mut points = vec![vec![0.0; n]; count];
    for j in 0..n {
        let mut strata: Vec<usize> = (0..count).collect();
        strata.shuffle(rng);
        let width = (upper[j] - lower[j]) / count as f64;
        for (i, &s) in strata.iter().enumerate() {
            let u: f64 = rng.random();
            points[i][j] = (lower[j] + (s as f64 + u) * width).min(upper[j]);
        }
    }
    Ok(points)
}

/// Feasible starts by rejection over successive LHS batches.
pub fn feasible_lhs_starts(
    problem: &Problem,
    count: usize,
    seed: u64,
    max_batches: usize,
) -> Result<Vec<Vec<f64>>, BenchmarkError> {
    let (Some(lower), Some(upper)) = (problem.lower(), problem.upper()) else {
        return Err(BenchmarkError::Unbounded);
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = Vec::new();
    for _ in 0..max_batches {
        for x in latin_hypercube_with(lower, upper, count, &mut rng)? {
            if evaluate_barrier(problem, &x, Phase::Initial, 1, 0)?.feasible {
                found.push(x);
                if found.len() == count {
                    return Ok(found);
                }
            }
        }
    }
    Err(BenchmarkError::TooFewFeasible {
        found: found.len(),
        wanted: count,
        batches: max_batches,
    })
}

fn bound_json(b: Option<&[f64]>) -> serde_json::Value {
    match b {
        None => serde_json::Value::Null,
        Some(v) => v
            .iter()
            .map(|x| {
                if x.is_finite() {
                    json!(x)
                } else {
                    json!(if *x > 0.0 { "inf" } else { "-inf" })
                }
            })
            .collect(),
    }
}

/// JSON manifest describing each instance.
pub fn manifest_json(instances: &[Instance]) -> Result<serde_json::Value, ProblemError> {
    let entries = instances
        .iter()
        .map(|inst| {
            let p = inst.build_problem()?;
            Ok(json!({
                "problem": inst.problem,
                "variant": inst.variant.as_str(),
                "seed": inst.seed,
                "n": p.dimension(),
                "m": p.num_constraints(),
                "bounds": {
                    "boxed": p.is_boxed(),
                    "lower": bound_json(p.lower()),
                    "upper": bound_json(p.upper()),
                },
                "x0": p.x0(),
            }))
        })
        .collect::<Result<Vec<_>, ProblemError>>()?;
    Ok(serde_json::Value::Array(entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn value(name: &str, x: &[f64]) -> f64 {
        let p = builtin_problem(name).unwrap();
        evaluate_barrier(&p, x, Phase::Poll, 1, 0).unwrap().value
    }

    #[test]
    fn counterexample_values() {
        assert_eq!(value("f1", &[0.0]), 0.0);
        assert!((value("f2", &[1.0]) - 4.0 / 9.0).abs() < 1e-15);
        // f1' = γ x⁴ (6x + 10) vanishes at -5/3.
        let x = -5.0 / 3.0;
        let oracle = F1_GAMMA * (x + 2.0) * x * x * x * x * x;
        assert!((value("f1", &[x]) - oracle).abs() < 1e-15);
        assert!((value("f1", &[x]) + 3125.0 * F1_GAMMA / 729.0).abs() < 1e-15);
        let h = 1e-6;
        assert!(value("f1", &[x + h]) > value("f1", &[x]));
        assert!(value("f1", &[x - h]) > value("f1", &[x]));
    }

    #[test]
    fn known_minima_of_least_squares_functions() {
        assert_eq!(value("rosenbrock2d", &[1.0, 1.0]), 0.0);
        assert_eq!(value("helical_valley", &[1.0, 0.0, 0.0]), 0.0);
        assert_eq!(value("powell_singular", &[0.0; 4]), 0.0);
        assert_eq!(value("freudenstein_roth", &[5.0, 4.0]), 0.0);
        assert!(value("box3d", &[1.0, 10.0, 1.0]).abs() < 1e-25);
        assert_eq!(value("cube", &[1.0; 5]), 0.0);
        assert_eq!(value("brown_almost_linear", &[1.0; 5]), 0.0);
        assert_eq!(value("rosenbrock2d_l1", &[1.0, 1.0]), 0.0);
        // Rank-1 linear: Σ j xⱼ = 3/(2m+1) attains m(m-1)/(2(2m+1)), m = 6.
        let s = 3.0 / 13.0;
        assert!((value("linear_rank1", &[s, 0.0, 0.0, 0.0]) - 15.0 / 13.0).abs() < 1e-12);
        // Linear full rank minimum m - n at x = -1.
        assert!((value("linear_full", &[-1.0; 4]) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn start_values_match_published_ones() {
        assert!((value("rosenbrock2d", &[-1.2, 1.0]) - 24.2).abs() < 1e-12);
        assert!((value("freudenstein_roth", &[0.5, -2.0]) - 400.5).abs() < 1e-9);
        assert!((value("powell_singular", &[3.0, -1.0, 0.0, 1.0]) - 215.0).abs() < 1e-9);
        assert!((value("helical_valley", &[-1.0, 0.0, 0.0]) - 2500.0).abs() < 1e-9);
    }

    #[test]
    fn chebyquad_matches_direct_polynomials() {
        let x = [0.1, 0.35, 0.6, 0.8, 0.9, 0.2];
        let r = chebyquad(&x);
        // T1(t) = t, T2(t) = 2t² - 1 on t = 2x - 1.
        let t: Vec<f64> = x.iter().map(|v| 2.0 * v - 1.0).collect();
        let r1 = t.iter().sum::<f64>() / 6.0;
        let r2 = t.iter().map(|v| 2.0 * v * v - 1.0).sum::<f64>() / 6.0 + 1.0 / 3.0;
        assert!((r[0] - r1).abs() < 1e-14);
        assert!((r[1] - r2).abs() < 1e-14);
    }

    #[test]
    fn l1_variant_sums_absolute_residuals() {
        let x = [0.3, -0.7];
        let r = rosenbrock(&x);
        assert!((value("rosenbrock2d_l1", &x) - (r[0].abs() + r[1].abs())).abs() < 1e-14);
        assert!((value("rosenbrock2d", &x) - (r[0] * r[0] + r[1] * r[1])).abs() < 1e-12);
    }

    #[test]
    fn registry_is_large_enough() {
        assert!(LEAST_SQUARES.len() >= 10);
        assert!(CONSTRAINED.len() >= 4);
        for name in registry_names() {
            let p = builtin_problem(&name).unwrap();
            assert_eq!(p.name(), name);
        }
    }

    #[test]
    fn unknown_problem_lists_registry() {
        match builtin_problem("nope") {
            Err(ProblemError::UnknownProblem { known, .. }) => {
                assert!(known.contains(&"f2".to_string()))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn constrained_starts_are_feasible() {
        for c in CONSTRAINED {
            assert!(constrained_problem(c).check_start().is_ok(), "{}", c.name);
        }
    }

    #[test]
    fn hs_known_optima() {
        // Published optimal points and values.
        let cases: [(&str, &[f64], f64); 4] = [
            ("hs29", &[4.0, 2.0 * 2f64.sqrt(), 2.0], -16.0 * 2f64.sqrt()),
            ("hs35", &[4.0 / 3.0, 7.0 / 9.0, 4.0 / 9.0], 1.0 / 9.0),
            ("hs36", &[20.0, 11.0, 15.0], -3300.0),
            ("hs43", &[0.0, 1.0, 2.0, -1.0], -44.0),
        ];
        for (name, x, f) in cases {
            let p = builtin_problem(name).unwrap();
            let e = evaluate_barrier(&p, x, Phase::Poll, 1, 0).unwrap();
            assert!(e.constraints.iter().all(|c| *c <= 1e-9), "{name}");
            assert!((e.raw.unwrap() - f).abs() < 1e-9, "{name}");
        }
    }

    #[test]
    fn suite_sizes() {
        assert_eq!(suite(Suite::Counterexamples, 1).unwrap().len(), 2);
        assert_eq!(
            suite(Suite::MorewildSmooth, 20).unwrap().len(),
            20 * LEAST_SQUARES.len()
        );
        assert_eq!(
            suite(Suite::Constrained, 3).unwrap().len(),
            3 * CONSTRAINED.len()
        );
        assert!(matches!(
            Suite::parse("bogus"),
            Err(BenchmarkError::UnknownSuite(_))
        ));
    }

    #[test]
    fn counterexample_setup() {
        let s = suite(Suite::Counterexamples, 1).unwrap();
        assert_eq!(s[0].problem, "f1");
        assert_eq!(s[0].start, vec![1.0]);
        assert_eq!(s[0].initial_size, Some(0.5));
        assert_eq!(s[0].search, Some(SearchKind::None));
        assert_eq!(s[1].problem, "f2");
        assert_eq!(s[1].search, Some(SearchKind::Quadratic));
    }

    #[test]
    fn lhs_one_point_per_stratum() {
        let pts = latin_hypercube_starts(&[0.0], &[10.0], 5, 4).unwrap();
        let mut strata: Vec<usize> = pts
            .iter()
            .map(|p| ((p[0] / 2.0).floor() as usize).min(4))
            .collect();
        strata.sort();
        assert_eq!(strata, vec![0, 1, 2, 3, 4]);
        assert_eq!(
            latin_hypercube_starts(&[0.0, -1.0], &[1.0, 1.0], 1, 0)
                .unwrap()
                .len(),
            1
        );
        assert_eq!(
            latin_hypercube_starts(&[0.0], &[1.0], 7, 9).unwrap(),
            latin_hypercube_starts(&[0.0], &[1.0], 7, 9).unwrap()
        );
        assert_eq!(
            latin_hypercube_starts(&[0.0], &[INF], 3, 0).unwrap_err(),
            BenchmarkError::Unbounded
        );
    }

    #[test]
    fn feasible_lhs_respects_constraints() {
        let p = builtin_problem("hs36").unwrap();
        let starts = feasible_lhs_starts(&p, 8, 1, 50).unwrap();
        assert_eq!(starts.len(), 8);
        for x in starts {
            assert!(
                evaluate_barrier(&p, &x, Phase::Initial, 1, 0)
                    .unwrap()
                    .feasible
            );
        }
        assert_eq!(
            feasible_lhs_starts(&builtin_problem("hs12").unwrap(), 2, 0, 1).unwrap_err(),
            BenchmarkError::Unbounded
        );
    }

    #[test]
    fn manifest_lists_dimensions() {
        let m = manifest_json(&suite(Suite::Counterexamples, 1).unwrap()).unwrap();
        assert_eq!(m[0]["n"], 1);
        assert_eq!(m[1]["x0"][0], 1.0);
        let c = manifest_json(&[Instance::new("hs33", 0).unwrap()]).unwrap();
        assert_eq!(c[0]["bounds"]["upper"][0], "inf");
    }

    proptest! {
        #[test]
        fn evaluation_is_deterministic(idx in 0usize..60, x in proptest::collection::vec(-3.0f64..3.0, 10)) {
            let names = registry_names();
            let p = builtin_problem(&names[idx % names.len()]).unwrap();
            let x = &x[..p.dimension()];
            let a = evaluate_barrier(&p, x, Phase::Poll, 1, 0).unwrap();
            let b = evaluate_barrier(&p, x, Phase::Poll, 1, 0).unwrap();
            prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
        }

        #[test]
        fn feasibility_matches_direct_check(idx in 0usize..12, x in proptest::collection::vec(-5.0f64..25.0, 7)) {
            let c = &CONSTRAINED[idx % CONSTRAINED.len()];
            let p = constrained_problem(c);
            let x = &x[..p.dimension()];
            let in_box = c.lower.is_none_or(|l| x.iter().zip(l).all(|(a, b)| a >= b))
                && c.upper.is_none_or(|u| x.iter().zip(u).all(|(a, b)| a <= b));
            let direct = in_box && c.constraints.iter().all(|g| g(x) <= 0.0);
            let e = evaluate_barrier(&p, x, Phase::Poll, 1, 0).unwrap();
            prop_assert_eq!(e.feasible, direct);
            prop_assert_eq!(e.value.is_infinite(), !direct);
        }
    }
}
