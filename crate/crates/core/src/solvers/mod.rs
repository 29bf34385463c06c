//! Iteration drivers for ADS, MADS (OrthoMADS 2n), SDDS and the ADS instance
//! of OrthoMADS, plus the top-level [`run`] loop.

mod rules;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    householder_directions, random_unit_vector, GeometryError, MeshSpec, Norm, VisitedSet,
};
use crate::harness::{Record, RunHistory, RunMeta};
use crate::model::{quadratic_search_with_budget, FitSample, DEFAULT_MODEL_BUDGET};
use crate::problem::{evaluate_barrier, Evaluation, Phase, Problem, ProblemError};

pub use rules::{
    ads_as_orthomads_update, compute_mu, sdds_accept, update_ads, update_mads, EquivalenceParams,
    ForcingFunction, RuleError, Tau, MAX_DENOMINATOR,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("evaluation budget must be at least 1")]
    ZeroBudget,
    #[error("invalid options: {0}")]
    InvalidOptions(String),
    #[error("incumbent is infeasible")]
    InfeasibleIncumbent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    Ads,
    Mads,
    Sdds,
    /// ADS configured with the step-size rules that make it reproduce OrthoMADS.
    AdsOrthomads,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Ads,
        Algorithm::Mads,
        Algorithm::Sdds,
        Algorithm::AdsOrthomads,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Ads => "ads",
            Algorithm::Mads => "mads",
            Algorithm::Sdds => "sdds",
            Algorithm::AdsOrthomads => "ads-orthomads",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.as_str() == s)
    }

    fn uses_mesh(self) -> bool {
        matches!(self, Algorithm::Mads | Algorithm::AdsOrthomads)
    }

    fn uses_punctured_space(self) -> bool {
        matches!(self, Algorithm::Ads | Algorithm::AdsOrthomads)
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SearchKind {
    None,
    Quadratic,
}

impl SearchKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchKind::None => "none",
            SearchKind::Quadratic => "quadratic",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "none" => Some(SearchKind::None),
            "quadratic" => Some(SearchKind::Quadratic),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    pub tau: Tau,
    /// `Δ⁰` (ADS/SDDS) or `Δ̄⁰` (MADS).
    pub initial_frame: f64,
    /// `δ⁰` (ADS/SDDS) or `δ̄⁰` (MADS). The ADS instance of OrthoMADS starts
    /// from `μ δ̄⁰` with this value as `δ̄⁰`.
    pub initial_excl: f64,
    pub search: SearchKind,
    pub opportunistic: bool,
    pub forcing: ForcingFunction,
    /// Stop once the exclusion size (mesh size for mesh-based runs) drops below this.
    pub delta_min: f64,
    /// Normalization of ADS/SDDS poll directions. Mesh-based runs use ℓ∞.
    pub poll_norm: Norm,
    pub exclusion_norm: Norm,
    pub equivalence: EquivalenceParams,
    pub model_budget: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            tau: Tau::HALF,
            initial_frame: 1.0,
            initial_excl: 1.0,
            search: SearchKind::Quadratic,
            opportunistic: true,
            forcing: ForcingFunction::default(),
            delta_min: 1e-12,
            poll_norm: Norm::L2,
            exclusion_norm: Norm::L2,
            equivalence: EquivalenceParams::default(),
            model_budget: DEFAULT_MODEL_BUDGET,
        }
    }
}

impl RunOptions {
    /// Sets `Δ⁰ = δ⁰ = size`.
    pub fn with_initial_size(mut self, size: f64) -> Self {
        self.initial_frame = size;
        self.initial_excl = size;
        self
    }

    pub fn with_search(mut self, search: SearchKind) -> Self {
        self.search = search;
        self
    }

    pub fn validate(&self, algorithm: Algorithm) -> Result<(), SolverError> {
        if !(self.initial_frame > 0.0 && self.initial_frame.is_finite()) {
            return Err(SolverError::InvalidOptions(
                "initial frame size must be positive".into(),
            ));
        }
        if !(self.initial_excl > 0.0 && self.initial_excl <= self.initial_frame) {
            return Err(SolverError::InvalidOptions(
                "initial exclusion size must be positive and at most the frame size".into(),
            ));
        }
        if !(self.delta_min >= 0.0) {
            return Err(SolverError::InvalidOptions(
                "delta_min must be nonnegative".into(),
            ));
        }
        match algorithm {
            Algorithm::Mads => {
                self.tau.require_rational()?;
            }
            Algorithm::AdsOrthomads => {
                self.tau.require_rational()?;
                let p = &self.equivalence;
                EquivalenceParams::new(p.p, p.q, p.z_check)?;
                if p.tau() != self.tau.value() {
                    return Err(SolverError::InvalidOptions(format!(
                        "equivalence ratio {}/{} does not match tau {}",
                        p.p, p.q, self.tau
                    )));
                }
            }
            Algorithm::Ads | Algorithm::Sdds => {}
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SolverState {
    pub incumbent: Vec<f64>,
    pub incumbent_value: f64,
    pub poll_center: Vec<f64>,
    /// `Δ^k`.
    pub frame: f64,
    /// `δ^k`; the mesh size `δ̄^k` for MADS.
    pub excl: f64,
    pub iteration: usize,
    pub unsuccessful: u64,
    pub visited: VisitedSet,
    pub initial_frame: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutcomeKind {
    SearchSuccess,
    PollSuccess,
    /// The search found a better point inside an exclusion ball; polling
    /// around it failed, and it becomes the next incumbent.
    ImprovingPollFail,
    Unsuccessful,
}

#[derive(Debug, Clone)]
pub struct IterationOutcome {
    pub kind: OutcomeKind,
    pub accepted: Option<Vec<f64>>,
    pub evaluations: Vec<Evaluation>,
    pub poll_evaluations: usize,
}

impl IterationOutcome {
    pub fn is_success(&self) -> bool {
        matches!(
            self.kind,
            OutcomeKind::SearchSuccess | OutcomeKind::PollSuccess
        )
    }
}

/// Step sizes at the start of one iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub iteration: usize,
    pub frame: f64,
    pub excl: f64,
    pub unsuccessful: u64,
    /// Mesh size used to build trial points (mesh-based runs only).
    pub mesh: Option<f64>,
}

enum Trial {
    Evaluated(Evaluation),
    Skipped,
    Exhausted,
}

// Relative slack absorbing rounding in distances that are exactly δ in exact
// arithmetic (e.g. p + δ·d measured back from p).
const BOUNDARY_SLACK: f64 = 4.0 * f64::EPSILON;

/// Owns everything one run mutates.
pub struct Solver<'a> {
    problem: &'a Problem,
    algorithm: Algorithm,
    options: RunOptions,
    budget: usize,
    rng: ChaCha8Rng,
    state: SolverState,
    samples: Vec<FitSample>,
    records: Vec<Record>,
    best: f64,
    trace: Vec<IterationTrace>,
    mu: f64,
    exhausted: bool,
}

impl<'a> Solver<'a> {
    /// Validates the configuration and evaluates the start point.
    pub fn new(
        algorithm: Algorithm,
        problem: &'a Problem,
        budget: usize,
        seed: u64,
        options: &RunOptions,
    ) -> Result<Self, SolverError> {
        if budget == 0 {
            return Err(SolverError::ZeroBudget);
        }
        options.validate(algorithm)?;
        let mu = options.equivalence.mu(options.initial_excl);
        let excl = match algorithm {
            Algorithm::AdsOrthomads => mu * options.initial_excl,
            _ => options.initial_excl,
        };
        let x0 = problem.x0().to_vec();
        let mut solver = Self {
            problem,
            algorithm,
            options: options.clone(),
            budget,
            rng: ChaCha8Rng::seed_from_u64(seed),
            state: SolverState {
                incumbent: x0.clone(),
                incumbent_value: f64::INFINITY,
                poll_center: x0.clone(),
                frame: options.initial_frame,
                excl,
                iteration: 0,
                unsuccessful: 0,
                visited: VisitedSet::with_norm(problem.dimension(), options.exclusion_norm),
                initial_frame: options.initial_frame,
            },
            samples: Vec::new(),
            records: Vec::new(),
            best: f64::INFINITY,
            trace: Vec::new(),
            mu,
            exhausted: false,
        };
        let Trial::Evaluated(e) = solver.try_eval(x0, Phase::Initial, None)? else {
            unreachable!("empty archive and budget >= 1");
        };
        if !e.feasible {
            return Err(ProblemError::InfeasibleStart(problem.name().to_string()).into());
        }
        solver.state.incumbent_value = e.value;
        Ok(solver)
    }

    pub fn state(&self) -> &SolverState {
        &self.state
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn trace(&self) -> &[IterationTrace] {
        &self.trace
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    /// Mesh size for mesh-based runs: `δ̄` itself for MADS, `(1/μ) q^{n_U} δ`
    /// for the ADS instance.
    pub fn mesh_size(&self) -> Option<f64> {
        match self.algorithm {
            Algorithm::Mads => Some(self.state.excl),
            Algorithm::AdsOrthomads => Some(self.options.equivalence.mesh_size(
                self.mu,
                self.state.unsuccessful,
                self.state.excl,
            )),
            Algorithm::Ads | Algorithm::Sdds => None,
        }
    }

    /// Size that drives the `delta_min` stopping test.
    pub fn stopping_size(&self) -> f64 {
        self.mesh_size().unwrap_or(self.state.excl)
    }

    pub fn should_stop(&self) -> bool {
        self.exhausted
            || self.records.len() >= self.budget
            || self.stopping_size() < self.options.delta_min
    }

    fn try_eval(
        &mut self,
        x: Vec<f64>,
        phase: Phase,
        punctured: Option<f64>,
    ) -> Result<Trial, SolverError> {
        if self.state.visited.find_duplicate(&x).is_some() {
            return Ok(Trial::Skipped);
        }
        if let Some(delta) = punctured {
            if !self
                .state
                .visited
                .in_punctured_space(delta * (1.0 - BOUNDARY_SLACK), &x)?
            {
                return Ok(Trial::Skipped);
            }
        }
        if self.records.len() >= self.budget {
            self.exhausted = true;
            return Ok(Trial::Exhausted);
        }
        let e = evaluate_barrier(
            self.problem,
            &x,
            phase,
            self.records.len() + 1,
            self.state.iteration,
        )?;
        self.state.visited.push(&x)?;
        if let Some(raw) = e.raw {
            if e.constraints.iter().all(|c| c.is_finite()) {
                self.samples.push(FitSample {
                    point: x,
                    objective: raw,
                    constraints: e.constraints.clone(),
                });
            }
        }
        self.best = self.best.min(e.value);
        self.records.push(Record {
            eval: e.eval_index,
            iter: e.iteration,
            phase,
            point: e.point.clone(),
            f_raw: e.raw,
            f_barrier: e.value,
            feasible: e.feasible,
            f_incumbent: self.best,
            delta_frame: self.state.frame,
            delta_excl: self.state.excl,
        });
        Ok(Trial::Evaluated(e))
    }

    fn search_candidates(&self) -> Vec<Vec<f64>> {
        match self.options.search {
            SearchKind::None => Vec::new(),
            SearchKind::Quadratic => quadratic_search_with_budget(
                &self.samples,
                &self.state.incumbent,
                self.state.frame,
                self.problem,
                self.options.model_budget,
            )
            .into_iter()
            .collect(),
        }
    }

    fn accepts(&self, value: f64, reference: f64) -> bool {
        match self.algorithm {
            Algorithm::Sdds => {
                sdds_accept(value, reference, self.state.excl, &self.options.forcing)
            }
            _ => value < reference,
        }
    }

    /// One iteration of the configured algorithm.
    pub fn iterate(&mut self) -> Result<IterationOutcome, SolverError> {
        if !self.state.incumbent_value.is_finite() {
            return Err(SolverError::InfeasibleIncumbent);
        }
        self.state.iteration += 1;
        let mesh = self.mesh_size();
        self.trace.push(IterationTrace {
            iteration: self.state.iteration,
            frame: self.state.frame,
            excl: self.state.excl,
            unsuccessful: self.state.unsuccessful,
            mesh,
        });

        let x = self.state.incumbent.clone();
        let fx = self.state.incumbent_value;
        let opportunistic = self.options.opportunistic;
        let punctured = self
            .algorithm
            .uses_punctured_space()
            .then_some(self.state.excl);
        let mut evaluations = Vec::new();
        let mut success: Option<(f64, Vec<f64>, OutcomeKind)> = None;
        let mut poll_center = (fx, x.clone());

        // Search.
        for mut y in self.search_candidates() {
            if let Some(m) = mesh {
                y = MeshSpec::new(x.clone(), m).project(&y);
            }
            let inside = match punctured {
                Some(d) => self
                    .state
                    .visited
                    .in_punctured_space(d * (1.0 - BOUNDARY_SLACK), &y)?,
                None => true,
            };
            let e = match self.try_eval(y, Phase::Search, None)? {
                Trial::Evaluated(e) => e,
                Trial::Skipped => continue,
                Trial::Exhausted => break,
            };
            let value = e.value;
            let point = e.point.clone();
            evaluations.push(e);
            if self.accepts(value, fx) {
                if inside {
                    if success.as_ref().is_none_or(|s| value < s.0) {
                        success = Some((value, point, OutcomeKind::SearchSuccess));
                    }
                    if opportunistic {
                        break;
                    }
                } else if value < poll_center.0 {
                    poll_center = (value, point);
                }
            }
        }
        if success.is_some() {
            // A successful search takes precedence over improving points.
            poll_center = (fx, x.clone());
        }

        // Poll.
        let mut poll_evaluations = 0;
        if success.is_none() && !self.exhausted {
            self.state.poll_center = poll_center.1.clone();
            let n = self.problem.dimension();
            let v = random_unit_vector(&mut self.rng, n);
            let norm = if self.algorithm.uses_mesh() {
                Norm::Linf
            } else {
                self.options.poll_norm
            };
            let dirs = householder_directions(&v, norm)?;
            let center = &poll_center.1;
            let frame = self.state.frame;
            let points: Vec<Vec<f64>> = match mesh {
                Some(m) => MeshSpec::new(center.clone(), m).frame_points(frame, &dirs),
                None => dirs
                    .directions
                    .iter()
                    .map(|d| center.iter().zip(d).map(|(c, di)| c + frame * di).collect())
                    .collect(),
            };
            // SDDS measures decrease from the incumbent; the others from the poll center.
            let reference = poll_center.0;
            for t in points {
                let e = match self.try_eval(t, Phase::Poll, punctured)? {
                    Trial::Evaluated(e) => e,
                    Trial::Skipped => continue,
                    Trial::Exhausted => break,
                };
                poll_evaluations += 1;
                let value = e.value;
                let point = e.point.clone();
                evaluations.push(e);
                if self.accepts(value, reference) {
                    if success.as_ref().is_none_or(|s| value < s.0) {
                        success = Some((value, point, OutcomeKind::PollSuccess));
                    }
                    if opportunistic {
                        break;
                    }
                }
            }
        } else {
            self.state.poll_center = x.clone();
        }

        // Update.
        let (kind, accepted) = match success {
            Some((value, point, kind)) => {
                self.state.incumbent = point.clone();
                self.state.incumbent_value = value;
                (kind, Some(point))
            }
            None => {
                let improved = poll_center.0 < fx;
                self.state.incumbent = poll_center.1.clone();
                self.state.incumbent_value = poll_center.0;
                if improved {
                    (OutcomeKind::ImprovingPollFail, Some(poll_center.1))
                } else {
                    (OutcomeKind::Unsuccessful, None)
                }
            }
        };
        let succeeded = matches!(kind, OutcomeKind::SearchSuccess | OutcomeKind::PollSuccess);
        let (frame, excl) = match self.algorithm {
            Algorithm::Ads | Algorithm::Sdds => update_ads(
                self.state.frame,
                self.state.excl,
                succeeded,
                self.options.tau.value(),
                self.state.initial_frame,
            )?,
            Algorithm::Mads => update_mads(
                self.state.frame,
                self.state.excl,
                succeeded,
                &self.options.tau,
            )?,
            Algorithm::AdsOrthomads => ads_as_orthomads_update(
                self.state.frame,
                self.state.excl,
                succeeded,
                &self.options.equivalence,
                self.mu,
                self.state.unsuccessful,
            ),
        };
        self.state.frame = frame;
        self.state.excl = excl;
        if !succeeded {
            self.state.unsuccessful += 1;
        }
        Ok(IterationOutcome {
            kind,
            accepted,
            evaluations,
            poll_evaluations,
        })
    }

    pub fn into_history(self, seed: u64) -> RunHistory {
        RunHistory {
            meta: RunMeta::new(
                self.algorithm,
                self.problem.name(),
                self.problem.dimension(),
                seed,
                self.budget,
                &self.options,
            ),
            records: self.records,
            trace: self.trace,
        }
    }
}

/// Runs `algorithm` until the budget is spent or the step size drops below
/// `delta_min`. Identical arguments give bit-identical histories.
pub fn run(
    algorithm: Algorithm,
    problem: &Problem,
    budget: usize,
    seed: u64,
    options: &RunOptions,
) -> Result<RunHistory, SolverError> {
    let mut solver = Solver::new(algorithm, problem, budget, seed, options)?;
    while !solver.should_stop() {
        solver.iterate()?;
    }
    Ok(solver.into_history(seed))
}

/// Side-by-side OrthoMADS and ADS-instance runs.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub mads: RunHistory,
    pub ads: RunHistory,
    /// Length of the common prefix of the two trial-point sequences.
    pub matching: usize,
    /// Largest relative gap between `δ̄^k` and `(1/μ) q^{n_U} δ^k`.
    pub mesh_gap: f64,
    /// Largest relative gap between `Δ̄^k` and `Δ^k`.
    pub frame_gap: f64,
}

impl EquivalenceReport {
    /// Same number of evaluations and bitwise-equal trial points.
    pub fn identical(&self) -> bool {
        self.matching == self.mads.records.len() && self.matching == self.ads.records.len()
    }
}

fn rel_gap(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Runs OrthoMADS and its ADS instance with shared seed and options and
/// compares the trial points and step sizes.
pub fn equivalence_check(
    problem: &Problem,
    budget: usize,
    seed: u64,
    options: &RunOptions,
) -> Result<EquivalenceReport, SolverError> {
    let mads = run(Algorithm::Mads, problem, budget, seed, options)?;
    let ads = run(Algorithm::AdsOrthomads, problem, budget, seed, options)?;
    let matching = mads
        .records
        .iter()
        .zip(&ads.records)
        .take_while(|(a, b)| {
            a.point
                .iter()
                .map(|v| v.to_bits())
                .eq(b.point.iter().map(|v| v.to_bits()))
        })
        .count();
    let mut mesh_gap = 0.0f64;
    let mut frame_gap = 0.0f64;
    if mads.trace.len() != ads.trace.len() {
        mesh_gap = f64::INFINITY;
        frame_gap = f64::INFINITY;
    }
    for (m, a) in mads.trace.iter().zip(&ads.trace) {
        let recon = options.equivalence.mesh_size(
            options.equivalence.mu(options.initial_excl),
            a.unsuccessful,
            a.excl,
        );
        mesh_gap = mesh_gap.max(rel_gap(m.excl, recon));
        frame_gap = frame_gap.max(rel_gap(m.frame, a.frame));
    }
    Ok(EquivalenceReport {
        mads,
        ads,
        matching,
        mesh_gap,
        frame_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::Analytic;
    use std::sync::Arc;

    fn f2() -> Problem {
        let bb = Analytic::new(|x| (x[0] - 1.0 / 3.0) * (x[0] - 1.0 / 3.0));
        Problem::new("f2", vec![1.0], 0, Arc::new(bb)).unwrap()
    }

    fn sphere() -> Problem {
        let bb = Analytic::new(|x| x.iter().map(|v| (v - 0.3) * (v - 0.3)).sum());
        Problem::new("sphere", vec![1.0, -1.0], 0, Arc::new(bb)).unwrap()
    }

    #[test]
    fn budget_one_is_just_the_start() {
        let h = run(Algorithm::Ads, &f2(), 1, 0, &RunOptions::default()).unwrap();
        assert_eq!(h.records.len(), 1);
        assert_eq!(h.records[0].phase, Phase::Initial);
    }

    #[test]
    fn zero_budget_rejected() {
        assert_eq!(
            run(Algorithm::Ads, &f2(), 0, 0, &RunOptions::default()).unwrap_err(),
            SolverError::ZeroBudget
        );
    }

    #[test]
    fn infeasible_start_rejected() {
        let bb = Analytic::new(|x| x[0]).constraint(|x| x[0] - 0.5);
        let p = Problem::new("c", vec![1.0], 1, Arc::new(bb)).unwrap();
        assert!(matches!(
            run(Algorithm::Sdds, &p, 10, 0, &RunOptions::default()),
            Err(SolverError::Problem(ProblemError::InfeasibleStart(_)))
        ));
    }

    #[test]
    fn ads_finds_f2_minimizer_with_quadratic_search() {
        let h = run(Algorithm::Ads, &f2(), 10, 0, &RunOptions::default()).unwrap();
        assert!(h
            .records
            .iter()
            .any(|r| (r.point[0] - 1.0 / 3.0).abs() < 1e-8));
    }

    #[test]
    fn mads_projects_search_candidate() {
        // From x = 0 with δ̄ = 0.25, the model minimizer 1/3 lands on 0.25.
        let mesh = MeshSpec::new(vec![0.0], 0.25);
        assert_eq!(mesh.project(&[1.0 / 3.0]), vec![0.25]);
    }

    #[test]
    fn unit_mads_frame() {
        let bb = Analytic::new(|x| x[0] * x[0] + x[1] * x[1]);
        let p = Problem::new("q", vec![0.0, 0.0], 0, Arc::new(bb)).unwrap();
        let opts = RunOptions::default().with_search(SearchKind::None);
        let mut s = Solver::new(Algorithm::Mads, &p, 100, 0, &opts).unwrap();
        let out = s.iterate().unwrap();
        assert_eq!(out.kind, OutcomeKind::Unsuccessful);
        let mut pts: Vec<Vec<f64>> = out.evaluations.iter().map(|e| e.point.clone()).collect();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for pt in &pts {
            assert_eq!(Norm::Linf.of(pt), 1.0);
            assert!(pt.iter().all(|v| v.fract() == 0.0));
        }
        // δ̄ halves; Δ̄ = max{√(1/2), 1/2}.
        assert_eq!(s.state().excl, 0.5);
        assert_eq!(s.state().frame, 0.5f64.sqrt());
    }

    #[test]
    fn unsuccessful_ads_iteration_halves_frame() {
        let bb = Analytic::new(|x| x[0] * x[0] + x[1] * x[1]);
        let p = Problem::new("q", vec![0.0, 0.0], 0, Arc::new(bb)).unwrap();
        let opts = RunOptions::default().with_search(SearchKind::None);
        let mut s = Solver::new(Algorithm::Ads, &p, 100, 0, &opts).unwrap();
        let out = s.iterate().unwrap();
        assert_eq!(out.kind, OutcomeKind::Unsuccessful);
        assert_eq!(s.state().incumbent, vec![0.0, 0.0]);
        assert_eq!(s.state().frame, 0.5);
        assert_eq!(s.state().unsuccessful, 1);
    }

    #[test]
    fn search_success_skips_poll() {
        // f = (x + 1)^2 from 1: poll succeeds at 0, then fails (-2 no better, 2
        // excluded by 1). The exact model over {1, 0, -2} predicts -1, exactly
        // δ = 1 away from both 0 and -2, so it is accepted without polling.
        let bb = Analytic::new(|x| (x[0] + 1.0) * (x[0] + 1.0));
        let p = Problem::new("shift", vec![1.0], 0, Arc::new(bb)).unwrap();
        let mut s = Solver::new(Algorithm::Ads, &p, 100, 0, &RunOptions::default()).unwrap();
        assert_eq!(s.iterate().unwrap().kind, OutcomeKind::PollSuccess);
        assert_eq!(s.iterate().unwrap().kind, OutcomeKind::Unsuccessful);
        let out = s.iterate().unwrap();
        assert_eq!(out.kind, OutcomeKind::SearchSuccess);
        assert_eq!(out.poll_evaluations, 0);
        assert_eq!(out.evaluations.len(), 1);
        assert_eq!(out.evaluations[0].phase, Phase::Search);
        assert!((s.state().incumbent[0] + 1.0).abs() < 1e-8);
        assert_eq!(s.state().frame, 2.0);
    }

    #[test]
    fn improving_search_inside_exclusion_ball_polls_around_it() {
        // f = (x - 1.5)^2 from 3: poll succeeds at 2, then fails (0 worse, 4
        // excluded by 3). The exact model over {3, 2, 0} predicts 1.5, which is
        // better but only 0.5 from 2, inside δ = 1. Both poll points around 1.5
        // fall in exclusion balls, so the poll fails and 1.5 is kept.
        let bb = Analytic::new(|x| (x[0] - 1.5) * (x[0] - 1.5));
        let p = Problem::new("shift", vec![3.0], 0, Arc::new(bb)).unwrap();
        let mut s = Solver::new(Algorithm::Ads, &p, 100, 0, &RunOptions::default()).unwrap();
        assert_eq!(s.iterate().unwrap().kind, OutcomeKind::PollSuccess);
        assert_eq!(s.iterate().unwrap().kind, OutcomeKind::Unsuccessful);
        assert_eq!(s.state().excl, 1.0);
        let out = s.iterate().unwrap();
        assert_eq!(out.kind, OutcomeKind::ImprovingPollFail);
        assert_eq!(out.poll_evaluations, 0);
        let y = out.accepted.unwrap();
        assert!((y[0] - 1.5).abs() < 1e-8);
        assert_eq!(s.state().incumbent, y);
        assert_eq!(s.state().frame, 0.5);
    }

    #[test]
    fn opportunistic_stops_at_first_success() {
        let opts = RunOptions::default().with_search(SearchKind::None);
        let h = run(Algorithm::Ads, &sphere(), 300, 3, &opts).unwrap();
        let mut reference = h.records[0].f_barrier;
        let mut i = 1;
        while i < h.records.len() {
            let iter = h.records[i].iter;
            let mut j = i;
            while j < h.records.len() && h.records[j].iter == iter {
                if h.records[j].f_barrier < reference {
                    assert!(
                        j + 1 == h.records.len() || h.records[j + 1].iter != iter,
                        "evaluations after a success in iteration {iter}"
                    );
                }
                j += 1;
            }
            reference = h.records[j - 1].f_incumbent;
            i = j;
        }
    }

    #[test]
    fn ads_excl_never_exceeds_frame_in_runs() {
        let h = run(Algorithm::Ads, &sphere(), 400, 1, &RunOptions::default()).unwrap();
        assert!(h.trace.iter().all(|t| t.excl <= t.frame));
    }

    #[test]
    fn mads_rejects_irrational_tau() {
        let opts = RunOptions {
            tau: Tau::real(0.3333333).unwrap(),
            ..RunOptions::default()
        };
        assert!(matches!(
            run(Algorithm::Mads, &f2(), 10, 0, &opts),
            Err(SolverError::Rule(RuleError::NotRational(_)))
        ));
        assert!(run(Algorithm::Ads, &f2(), 10, 0, &opts).is_ok());
    }
}
