//! Visited-point archive, punctured-space tests, Householder poll directions
//! and mesh operations.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("the visited set is empty")]
    EmptyArchive,
    #[error("expected a vector of dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("householder seed vector is zero")]
    ZeroVector,
    #[error("householder seed vector must have unit norm (got {0})")]
    NotUnit(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Norm {
    L1,
    #[default]
    L2,
    Linf,
}

impl Norm {
    pub fn of(self, v: &[f64]) -> f64 {
        match self {
            Norm::L1 => v.iter().map(|x| x.abs()).sum(),
            Norm::L2 => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            Norm::Linf => v.iter().fold(0.0, |m, x| m.max(x.abs())),
        }
    }

    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Norm::L1 => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
            Norm::L2 => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
            Norm::Linf => a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs())),
        }
    }
}

/// Append-only archive of evaluated points, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct VisitedSet {
    dim: usize,
    coords: Vec<f64>,
    norm: Norm,
}

/// Relative tolerance under which two points are the same cache entry.
pub const DUPLICATE_RTOL: f64 = 1e-13;

impl VisitedSet {
    pub fn new(dim: usize) -> Self {
        Self::with_norm(dim, Norm::L2)
    }

    pub fn with_norm(dim: usize, norm: Norm) -> Self {
        Self {
            dim,
            coords: Vec::new(),
            norm,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn norm(&self) -> Norm {
        self.norm
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn push(&mut self, x: &[f64]) -> Result<(), GeometryError> {
        self.check_dim(x)?;
        self.coords.extend_from_slice(x);
        Ok(())
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    fn check_dim(&self, x: &[f64]) -> Result<(), GeometryError> {
        if x.len() != self.dim {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Exact minimum distance (in the archive norm) from `x` to any archived point.
    pub fn min_distance(&self, x: &[f64]) -> Result<f64, GeometryError> {
        self.check_dim(x)?;
        self.iter()
            .map(|y| self.norm.distance(x, y))
            .reduce(f64::min)
            .ok_or(GeometryError::EmptyArchive)
    }

    /// `x` lies in the punctured space of radius `delta`: no archived point is
    /// strictly closer than `delta`. An empty archive punctures nothing.
    pub fn in_punctured_space(&self, delta: f64, x: &[f64]) -> Result<bool, GeometryError> {
        self.check_dim(x)?;
        Ok(self.iter().all(|y| self.norm.distance(x, y) >= delta))
    }

    /// Index of an archived point equal to `x` up to `DUPLICATE_RTOL * max(1, |x|_inf)`.
    pub fn find_duplicate(&self, x: &[f64]) -> Option<usize> {
        let tol = DUPLICATE_RTOL * Norm::Linf.of(x).max(1.0);
        self.iter().position(|y| Norm::Linf.distance(x, y) <= tol)
    }
}

/// Poll directions, each of unit length in `norm`.
#[derive(Debug, Clone, PartialEq)]
pub struct PollDirections {
    pub directions: Vec<Vec<f64>>,
    pub norm: Norm,
}

/// Uniform draw on the Euclidean unit sphere of dimension `n`.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let len = Norm::L2.of(&v);
        if len > 1e-12 {
            return v.into_iter().map(|x| x / len).collect();
        }
    }
}

/// Columns of `I - 2 v vᵀ` and their negations, ordered `h1, -h1, h2, -h2, ...`,
/// each rescaled to unit length in `norm`.
pub fn householder_directions(v: &[f64], norm: Norm) -> Result<PollDirections, GeometryError> {
    let len = Norm::L2.of(v);
    if len == 0.0 {
        return Err(GeometryError::ZeroVector);
    }
    if (len - 1.0).abs() > 1e-12 {
        return Err(GeometryError::NotUnit(len));
    }
    let n = v.len();
    let mut directions = Vec::with_capacity(2 * n);
    for j in 0..n {
        let mut h: Vec<f64> = (0..n)
            .map(|i| {
                let id = if i == j { 1.0 } else { 0.0 };
                id - 2.0 * v[i] * v[j]
            })
            .collect();
        let s = norm.of(&h);
        h.iter_mut().for_each(|x| *x /= s);
        let neg = h.iter().map(|x| -x).collect();
        directions.push(h);
        directions.push(neg);
    }
    Ok(PollDirections { directions, norm })
}

/// Mesh `{center + size * z : z ∈ ℤⁿ}`, i.e. `G = I`, `D = [I -I]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshSpec {
    pub center: Vec<f64>,
    pub size: f64,
}

impl MeshSpec {
    pub fn new(center: Vec<f64>, size: f64) -> Self {
        debug_assert!(size > 0.0);
        Self { center, size }
    }

    /// Nearest mesh point. Half-integer ties round away from zero.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.center)
            .map(|(xi, ci)| ci + self.size * ((xi - ci) / self.size).round())
            .collect()
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.iter().zip(&self.center).all(|(xi, ci)| {
            let z = (xi - ci) / self.size;
            (z - z.round()).abs() <= tol
        })
    }

    /// OrthoMADS frame points: each direction is scaled to the frame size in
    /// the ℓ∞ norm and rounded to integer mesh steps.
    pub fn frame_points(&self, frame: f64, directions: &PollDirections) -> Vec<Vec<f64>> {
        let ratio = frame / self.size;
        directions
            .directions
            .iter()
            .map(|h| {
                let hinf = Norm::Linf.of(h);
                h.iter()
                    .zip(&self.center)
                    .map(|(hi, ci)| ci + self.size * (ratio * hi / hinf).round())
                    .collect()
            })
            .collect()
    }
}

pub fn mesh_project(mesh: &MeshSpec, x: &[f64]) -> Vec<f64> {
    mesh.project(x)
}

pub fn on_mesh(mesh: &MeshSpec, x: &[f64], tol: f64) -> bool {
    mesh.contains(x, tol)
}
