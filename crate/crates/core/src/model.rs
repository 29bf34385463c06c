//! Quadratic models fit to cached evaluations, and the search step built on them.
//!
//! Models are fit on the monomial basis `{1, sᵢ, sᵢ²/2, sᵢsⱼ}` in the scaled
//! variable `s = (x - center) / radius`. A determined sample is interpolated,
//! a surplus is handled by least squares. The model subproblem is solved with a
//! spectral projected gradient method on an augmented Lagrangian of the
//! constraint models.

use nalgebra::{DMatrix, DVector};

use crate::geometry::Norm;
use crate::problem::Problem;

/// Fits whose scaled design matrix has a condition estimate above this are refused.
pub const MAX_CONDITION: f64 = 1e12;

/// Inner-solver cap on model gradient evaluations.
pub const DEFAULT_MODEL_BUDGET: usize = 5000;

/// Number of coefficients of a full quadratic in `n` variables.
pub fn n_coefficients(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticModel {
    pub constant: f64,
    pub gradient: Vec<f64>,
    /// Symmetric, row-major `n × n`.
    pub hessian: Vec<f64>,
    pub center: Vec<f64>,
    pub radius: f64,
}

impl QuadraticModel {
    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Model `c + gᵀs + ½ sᵀHs` with `s = x - center`; `hessian` is symmetrized.
    pub fn from_parts(
        constant: f64,
        gradient: Vec<f64>,
        hessian: Vec<f64>,
        center: Vec<f64>,
    ) -> Self {
        let n = center.len();
        assert_eq!(gradient.len(), n);
        assert_eq!(hessian.len(), n * n);
        let mut h = hessian;
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (h[i * n + j] + h[j * n + i]);
                h[i * n + j] = avg;
                h[j * n + i] = avg;
            }
        }
        Self {
            constant,
            gradient,
            hessian: h,
            center,
            radius: 1.0,
        }
    }

    pub fn hess(&self, i: usize, j: usize) -> f64 {
        self.hessian[i * self.dim() + j]
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let n = self.dim();
        let s: Vec<f64> = x.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        let mut quad = 0.0;
        for i in 0..n {
            let row: f64 = (0..n).map(|j| self.hessian[i * n + j] * s[j]).sum();
            quad += s[i] * row;
        }
        self.constant
            + self
                .gradient
                .iter()
                .zip(&s)
                .map(|(g, si)| g * si)
                .sum::<f64>()
            + 0.5 * quad
    }

    pub fn gradient_at(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let s: Vec<f64> = x.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        (0..n)
            .map(|i| self.gradient[i] + (0..n).map(|j| self.hessian[i * n + j] * s[j]).sum::<f64>())
            .collect()
    }
}

/// Indices of the points within ℓ∞ distance `2Δ` of `center`, widening to `4Δ`
/// then `8Δ` while fewer than `min_count` are found. The last selection is
/// returned even if it is still short.
pub fn select_fit_points<P: AsRef<[f64]>>(
    points: &[P],
    center: &[f64],
    frame: f64,
    min_count: usize,
) -> Vec<usize> {
    let dists: Vec<f64> = points
        .iter()
        .map(|p| Norm::Linf.distance(p.as_ref(), center))
        .collect();
    let mut selected = Vec::new();
    for factor in [2.0, 4.0, 8.0] {
        let r = factor * frame;
        selected = (0..points.len()).filter(|&i| dists[i] <= r).collect();
        if selected.len() >= min_count {
            break;
        }
    }
    selected
}

fn basis_row(s: &[f64], row: &mut [f64]) {
    let n = s.len();
    row[0] = 1.0;
    row[1..=n].copy_from_slice(s);
    let mut k = n + 1;
    for i in 0..n {
        row[k] = 0.5 * s[i] * s[i];
        k += 1;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            row[k] = s[i] * s[j];
            k += 1;
        }
    }
}

/// Interpolation (determined sample) or least-squares regression (surplus).
/// Returns `None` for a short sample, non-finite data or an ill-conditioned fit.
pub fn build_quadratic_model(
    points: &[&[f64]],
    values: &[f64],
    center: &[f64],
) -> Option<QuadraticModel> {
    let n = center.len();
    let k = n_coefficients(n);
    if points.len() < k || points.len() != values.len() || values.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let radius = points
        .iter()
        .map(|p| Norm::Linf.distance(p, center))
        .fold(0.0, f64::max);
    if !(radius > 0.0) {
        return None;
    }

    let mut a = DMatrix::<f64>::zeros(points.len(), k);
    let mut row = vec![0.0; k];
    for (r, p) in points.iter().enumerate() {
        let s: Vec<f64> = p
            .iter()
            .zip(center)
            .map(|(x, c)| (x - c) / radius)
            .collect();
        basis_row(&s, &mut row);
        for (c, v) in row.iter().enumerate() {
            a[(r, c)] = *v;
        }
    }
    let svd = a.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > 0.0) || smax / smin > MAX_CONDITION {
        return None;
    }
    let b = DVector::from_column_slice(values);
    let beta = svd.solve(&b, 0.0).ok()?;

    let r2 = radius * radius;
    let gradient = (0..n).map(|i| beta[1 + i] / radius).collect();
    let mut hessian = vec![0.0; n * n];
    let mut idx = n + 1;
    for i in 0..n {
        hessian[i * n + i] = beta[idx] / r2;
        idx += 1;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            hessian[i * n + j] = beta[idx] / r2;
            hessian[j * n + i] = beta[idx] / r2;
            idx += 1;
        }
    }
    Some(QuadraticModel {
        constant: beta[0],
        gradient,
        hessian,
        center: center.to_vec(),
        radius,
    })
}

/// Axis-aligned box for the model subproblem.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl ModelBox {
    /// ℓ∞ ball `{x : |x - center|∞ <= radius}`.
    pub fn ball(center: &[f64], radius: f64) -> Self {
        Self {
            lower: center.iter().map(|c| c - radius).collect(),
            upper: center.iter().map(|c| c + radius).collect(),
        }
    }

    /// Intersects with problem bounds. Coordinates whose intersection is empty
    /// collapse onto the nearest problem bound.
    pub fn intersect_bounds(mut self, lower: Option<&[f64]>, upper: Option<&[f64]>) -> Self {
        if let Some(l) = lower {
            for (lo, &b) in self.lower.iter_mut().zip(l) {
                *lo = lo.max(b);
            }
        }
        if let Some(u) = upper {
            for (up, &b) in self.upper.iter_mut().zip(u) {
                *up = up.min(b);
            }
        }
        for i in 0..self.lower.len() {
            if self.lower[i] > self.upper[i] {
                let v = if upper.is_some_and(|u| self.lower[i] > u[i]) {
                    self.upper[i]
                } else {
                    self.lower[i]
                };
                self.lower[i] = v;
                self.upper[i] = v;
            }
        }
        self
    }

    pub fn project(&self, x: &mut [f64]) {
        for ((xi, lo), up) in x.iter_mut().zip(&self.lower).zip(&self.upper) {
            *xi = xi.clamp(*lo, *up);
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(&self.lower)
            .zip(&self.upper)
            .all(|((xi, lo), up)| xi >= lo && xi <= up)
    }
}

struct Budget(usize);

impl Budget {
    fn take(&mut self) -> bool {
        if self.0 == 0 {
            false
        } else {
            self.0 -= 1;
            true
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Spectral projected gradient with a nonmonotone Armijo search.
fn spg<F>(mut f: F, x0: &[f64], bx: &ModelBox, budget: &mut Budget) -> Vec<f64>
where
    F: FnMut(&[f64]) -> (f64, Vec<f64>),
{
    const MEMORY: usize = 10;
    const ALPHA_MIN: f64 = 1e-30;
    const ALPHA_MAX: f64 = 1e30;

    let mut x = x0.to_vec();
    bx.project(&mut x);
    if !budget.take() {
        return x;
    }
    let (mut fx, mut g) = f(&x);
    let mut history = vec![fx];

    let projected_step = |x: &[f64], g: &[f64], alpha: f64| -> Vec<f64> {
        let mut y: Vec<f64> = x.iter().zip(g).map(|(xi, gi)| xi - alpha * gi).collect();
        bx.project(&mut y);
        y.iter().zip(x).map(|(yi, xi)| yi - xi).collect()
    };

    let pg0 = Norm::Linf.of(&projected_step(&x, &g, 1.0));
    let tol = 1e-14 * pg0.max(1.0);
    let mut alpha = if pg0 > 0.0 {
        (1.0 / pg0).clamp(ALPHA_MIN, ALPHA_MAX)
    } else {
        1.0
    };

    loop {
        if Norm::Linf.of(&projected_step(&x, &g, 1.0)) <= tol {
            break;
        }
        let d = projected_step(&x, &g, alpha);
        let gtd = dot(&g, &d);
        if !(gtd < 0.0) {
            break;
        }
        let fmax = history.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut lambda = 1.0;
        let mut accepted = None;
        while budget.take() {
            let xn: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + lambda * di).collect();
            let (fxn, gn) = f(&xn);
            if fxn <= fmax + 1e-4 * lambda * gtd {
                accepted = Some((xn, fxn, gn));
                break;
            }
            // Safeguarded quadratic interpolation of the step.
            let denom = 2.0 * (fxn - fx - lambda * gtd);
            let trial = if denom > 0.0 {
                -gtd * lambda * lambda / denom
            } else {
                0.5 * lambda
            };
            lambda = trial.clamp(0.1 * lambda, 0.5 * lambda);
            if lambda * Norm::Linf.of(&d) <= f64::EPSILON * Norm::Linf.of(&x).max(1.0) {
                break;
            }
        }
        let Some((xn, fxn, gn)) = accepted else {
            break;
        };
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sty = dot(&s, &y);
        alpha = if sty > 0.0 {
            (dot(&s, &s) / sty).clamp(ALPHA_MIN, ALPHA_MAX)
        } else {
            ALPHA_MAX
        };
        let moved = Norm::Linf.of(&s);
        x = xn;
        fx = fxn;
        g = gn;
        history.push(fx);
        if history.len() > MEMORY {
            history.remove(0);
        }
        if moved <= f64::EPSILON * Norm::Linf.of(&x).max(1.0) && sty <= 0.0 {
            break;
        }
    }
    x
}

fn violation(constraints: &[QuadraticModel], x: &[f64]) -> f64 {
    constraints
        .iter()
        .map(|c| c.value(x).max(0.0))
        .fold(0.0, f64::max)
}

/// Minimizes `objective` subject to the constraint models being `<= 0`, inside
/// `bx`, using at most `budget` model-gradient evaluations. The result is always
/// inside the box. If no iterate satisfies the constraint models, the
/// least-violation iterate is returned.
pub fn minimize_model(
    objective: &QuadraticModel,
    constraints: &[QuadraticModel],
    bx: &ModelBox,
    budget: usize,
) -> Vec<f64> {
    let mut budget = Budget(budget.max(1));
    let mut start = objective.center.clone();
    bx.project(&mut start);

    if constraints.is_empty() {
        let x = spg(
            |x| (objective.value(x), objective.gradient_at(x)),
            &start,
            bx,
            &mut budget,
        );
        return clipped(x, bx);
    }

    const FEAS_TOL: f64 = 1e-10;
    let m = constraints.len();
    let mut multipliers = vec![0.0; m];
    let mut weight = 10.0;
    let mut x = start;
    let mut prev_violation = f64::INFINITY;
    let mut best_feasible: Option<(f64, Vec<f64>)> = None;
    let start_violation = violation(constraints, &x);
    let mut least_violation = (start_violation, x.clone());
    if start_violation <= FEAS_TOL {
        best_feasible = Some((objective.value(&x), x.clone()));
    }

    for _ in 0..50 {
        if budget.0 == 0 {
            break;
        }
        let (w, lam) = (weight, multipliers.clone());
        x = spg(
            |y| {
                let mut val = objective.value(y);
                let mut grad = objective.gradient_at(y);
                for (c, &l) in constraints.iter().zip(&lam) {
                    let shifted = c.value(y) + l / w;
                    if shifted > 0.0 {
                        val += 0.5 * w * shifted * shifted;
                        for (gi, ci) in grad.iter_mut().zip(c.gradient_at(y)) {
                            *gi += w * shifted * ci;
                        }
                    }
                }
                (val, grad)
            },
            &x,
            bx,
            &mut budget,
        );
        let cvals: Vec<f64> = constraints.iter().map(|c| c.value(&x)).collect();
        let viol = cvals.iter().map(|c| c.max(0.0)).fold(0.0, f64::max);
        let fval = objective.value(&x);
        if viol <= FEAS_TOL {
            best_feasible = Some((fval, x.clone()));
        } else if viol < least_violation.0 {
            least_violation = (viol, x.clone());
        }
        let mut change = 0.0f64;
        for (l, c) in multipliers.iter_mut().zip(&cvals) {
            let next = (*l + weight * c).max(0.0);
            change = change.max((next - *l).abs());
            *l = next;
        }
        if viol <= FEAS_TOL && change <= 1e-12 * (1.0 + Norm::Linf.of(&multipliers)) {
            break;
        }
        if viol > 0.25 * prev_violation {
            weight = (weight * 10.0).min(1e12);
        }
        prev_violation = viol;
    }

    let x = match best_feasible {
        Some((_, xf)) => xf,
        None => least_violation.1,
    };
    clipped(x, bx)
}

fn clipped(mut x: Vec<f64>, bx: &ModelBox) -> Vec<f64> {
    bx.project(&mut x);
    x
}

/// Cached evaluation usable for model fitting.
#[derive(Debug, Clone, PartialEq)]
pub struct FitSample {
    pub point: Vec<f64>,
    pub objective: f64,
    pub constraints: Vec<f64>,
}

impl AsRef<[f64]> for FitSample {
    fn as_ref(&self) -> &[f64] {
        &self.point
    }
}

/// At most one search candidate: the minimizer of the quadratic model of the
/// objective (subject to quadratic models of the constraints) over the ℓ∞ box
/// spanned by the fit points, clipped to the problem bounds.
pub fn quadratic_search(
    samples: &[FitSample],
    poll_center: &[f64],
    frame: f64,
    problem: &Problem,
) -> Option<Vec<f64>> {
    quadratic_search_with_budget(samples, poll_center, frame, problem, DEFAULT_MODEL_BUDGET)
}

pub fn quadratic_search_with_budget(
    samples: &[FitSample],
    poll_center: &[f64],
    frame: f64,
    problem: &Problem,
    budget: usize,
) -> Option<Vec<f64>> {
    let n = problem.dimension();
    let m = problem.num_constraints();
    let usable: Vec<&FitSample> = samples
        .iter()
        .filter(|s| {
            s.objective.is_finite()
                && s.constraints.len() == m
                && s.constraints.iter().all(|c| c.is_finite())
        })
        .collect();
    let needed = n_coefficients(n);
    let chosen = select_fit_points(
        &usable.iter().map(|s| &s.point).collect::<Vec<_>>(),
        poll_center,
        frame,
        needed,
    );
    if chosen.len() < needed {
        return None;
    }
    let pts: Vec<&[f64]> = chosen.iter().map(|&i| usable[i].point.as_slice()).collect();
    let fvals: Vec<f64> = chosen.iter().map(|&i| usable[i].objective).collect();
    let objective = build_quadratic_model(&pts, &fvals, poll_center)?;
    let mut constraint_models = Vec::with_capacity(m);
    for j in 0..m {
        let cvals: Vec<f64> = chosen.iter().map(|&i| usable[i].constraints[j]).collect();
        constraint_models.push(build_quadratic_model(&pts, &cvals, poll_center)?);
    }

    let radius = pts
        .iter()
        .map(|p| Norm::Linf.distance(p, poll_center))
        .fold(0.0, f64::max);
    let bx = ModelBox::ball(poll_center, radius).intersect_bounds(problem.lower(), problem.upper());
    let mut x = minimize_model(&objective, &constraint_models, &bx, budget);
    problem.clip_to_bounds(&mut x);
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::Analytic;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn f2(x: f64) -> f64 {
        (x - 1.0 / 3.0) * (x - 1.0 / 3.0)
    }

    #[test]
    fn coefficient_count() {
        assert_eq!(n_coefficients(1), 3);
        assert_eq!(n_coefficients(2), 6);
        assert_eq!(n_coefficients(10), 66);
    }

    #[test]
    fn selection_widens_until_sufficient() {
        // 2 points within 2Δ, a third only within 4Δ.
        let pts = vec![vec![0.0], vec![1.5], vec![3.5], vec![20.0]];
        assert_eq!(select_fit_points(&pts, &[0.0], 1.0, 3), vec![0, 1, 2]);
    }

    #[test]
    fn selection_empty_when_everything_is_far() {
        let pts = vec![vec![100.0], vec![-50.0]];
        assert!(select_fit_points(&pts, &[0.0], 1.0, 3).is_empty());
    }

    #[test]
    fn selection_keeps_surplus() {
        let pts: Vec<Vec<f64>> = (0..10)
            .map(|i| vec![0.1 * i as f64, 0.05 * i as f64])
            .collect();
        assert_eq!(select_fit_points(&pts, &[0.0, 0.0], 1.0, 6).len(), 10);
    }

    #[test]
    fn interpolates_f2_from_three_points() {
        let pts: [&[f64]; 3] = [&[0.0], &[1.0], &[2.0]];
        let vals = [1.0 / 9.0, 4.0 / 9.0, 25.0 / 9.0];
        let m = build_quadratic_model(&pts, &vals, &[0.0]).unwrap();
        assert!((m.constant - 1.0 / 9.0).abs() < 1e-14);
        assert!((m.gradient[0] + 2.0 / 3.0).abs() < 1e-13);
        assert!((m.hessian[0] - 2.0).abs() < 1e-13);
        for (p, v) in pts.iter().zip(vals) {
            assert!((m.value(p) - v).abs() <= 1e-8 * v.abs().max(1.0));
        }
    }

    #[test]
    fn constant_data_gives_flat_model() {
        let pts: Vec<Vec<f64>> = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![-1.0, 0.0],
            vec![0.0, -1.0],
            vec![1.0, 1.0],
        ];
        let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
        let m = build_quadratic_model(&refs, &[5.0; 6], &[0.0, 0.0]).unwrap();
        assert!((m.constant - 5.0).abs() < 1e-12);
        assert!(m.gradient.iter().all(|g| g.abs() < 1e-12));
        assert!(m.hessian.iter().all(|h| h.abs() < 1e-12));
    }

    #[test]
    fn short_or_degenerate_samples_give_no_model() {
        let pts: [&[f64]; 2] = [&[0.0], &[1.0]];
        assert!(build_quadratic_model(&pts, &[0.0, 1.0], &[0.0]).is_none());
        // Collinear points in 2-D cannot determine the cross term.
        let line: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64, 2.0 * i as f64]).collect();
        let refs: Vec<&[f64]> = line.iter().map(|p| p.as_slice()).collect();
        assert!(build_quadratic_model(&refs, &[1.0; 6], &[0.0, 0.0]).is_none());
    }

    #[test]
    fn minimizes_f2_model_inside_box() {
        let m = QuadraticModel::from_parts(4.0 / 9.0, vec![4.0 / 3.0], vec![2.0], vec![1.0]);
        let bx = ModelBox {
            lower: vec![-8.0],
            upper: vec![9.0],
        };
        let x = minimize_model(&m, &[], &bx, 5000);
        assert!((x[0] - 1.0 / 3.0).abs() < 1e-8, "{x:?}");
    }

    #[test]
    fn linear_model_hits_the_boundary() {
        let m = QuadraticModel::from_parts(0.0, vec![1.0], vec![0.0], vec![0.0]);
        let x = minimize_model(&m, &[], &ModelBox::ball(&[0.0], 1.0), 5000);
        assert_eq!(x, vec![-1.0]);
    }

    #[test]
    fn toy_qcqp_kkt_point() {
        let obj = QuadraticModel::from_parts(
            0.0,
            vec![0.0, 0.0],
            vec![2.0, 0.0, 0.0, 2.0],
            vec![0.0, 0.0],
        );
        let con = QuadraticModel::from_parts(1.0, vec![-1.0, 0.0], vec![0.0; 4], vec![0.0, 0.0]);
        let x = minimize_model(&obj, &[con], &ModelBox::ball(&[0.0, 0.0], 10.0), 5000);
        assert!((x[0] - 1.0).abs() < 1e-8 && x[1].abs() < 1e-8, "{x:?}");
    }

    #[test]
    fn infeasible_constraint_models_return_least_violation() {
        // x <= -5 is unreachable inside [-1, 1].
        let obj = QuadraticModel::from_parts(0.0, vec![-1.0], vec![0.0], vec![0.0]);
        let con = QuadraticModel::from_parts(5.0, vec![1.0], vec![0.0], vec![0.0]);
        let x = minimize_model(&obj, &[con], &ModelBox::ball(&[0.0], 1.0), 5000);
        assert!((x[0] + 1.0).abs() < 1e-9, "{x:?}");
    }

    fn f2_problem() -> Problem {
        Problem::new("f2", vec![1.0], 0, Arc::new(Analytic::new(|x| f2(x[0])))).unwrap()
    }

    fn sample(x: f64) -> FitSample {
        FitSample {
            point: vec![x],
            objective: f2(x),
            constraints: vec![],
        }
    }

    #[test]
    fn search_on_f2_predicts_one_third() {
        let cache = vec![sample(1.0), sample(0.0), sample(2.0)];
        let x = quadratic_search(&cache, &[0.0], 1.0, &f2_problem()).unwrap();
        assert!((x[0] - 1.0 / 3.0).abs() < 1e-8);
    }

    #[test]
    fn search_without_enough_points_is_empty() {
        let cache = vec![sample(1.0), sample(0.0)];
        assert!(quadratic_search(&cache, &[0.0], 1.0, &f2_problem()).is_none());
    }

    #[test]
    fn search_candidate_clipped_to_bounds() {
        let p = f2_problem()
            .with_bounds(Some(vec![0.5]), Some(vec![3.0]))
            .unwrap();
        let cache = vec![sample(1.0), sample(0.5), sample(2.0)];
        let x = quadratic_search(&cache, &[1.0], 1.0, &p).unwrap();
        assert_eq!(x, vec![0.5]);
    }

    proptest! {
        #[test]
        fn gradient_matches_central_differences(
            coeffs in proptest::collection::vec(-3.0f64..3.0, 10),
            x in proptest::collection::vec(-2.0f64..2.0, 3),
        ) {
            let center = vec![0.3, -0.2, 0.1];
            let h = vec![coeffs[4], coeffs[5], coeffs[6], coeffs[5], coeffs[7], coeffs[8], coeffs[6], coeffs[8], coeffs[9]];
            let m = QuadraticModel::from_parts(coeffs[0], coeffs[1..4].to_vec(), h, center);
            let g = m.gradient_at(&x);
            for i in 0..3 {
                let step = 1e-5;
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[i] += step;
                xm[i] -= step;
                let fd = (m.value(&xp) - m.value(&xm)) / (2.0 * step);
                prop_assert!((fd - g[i]).abs() <= 1e-6 * g[i].abs().max(1.0));
            }
        }

        #[test]
        fn minimizer_stays_in_box(
            coeffs in proptest::collection::vec(-5.0f64..5.0, 6),
            radius in 0.01f64..10.0,
        ) {
            let m = QuadraticModel::from_parts(0.0, coeffs[0..2].to_vec(), vec![coeffs[2], coeffs[3], coeffs[3], coeffs[4]], vec![0.0, 0.0]);
            let con = QuadraticModel::from_parts(coeffs[5], vec![1.0, -1.0], vec![1.0, 0.0, 0.0, 1.0], vec![0.0, 0.0]);
            let bx = ModelBox::ball(&[0.0, 0.0], radius);
            prop_assert!(bx.contains(&minimize_model(&m, &[], &bx, 500)));
            prop_assert!(bx.contains(&minimize_model(&m, &[con], &bx, 500)));
        }
    }
}
