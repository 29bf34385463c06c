//! Step-size update rules, the forcing function and the equivalence
//! parameterization that turns ADS into an instance of OrthoMADS.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RuleError {
    #[error("tau must lie strictly between 0 and 1 (got {0})")]
    TauOutOfRange(f64),
    #[error("tau `{0}` is not a ratio p/q of integers with q <= 1000")]
    NotRational(String),
    #[error("cannot parse tau `{0}`")]
    Unparseable(String),
    #[error("equivalence parameters need integers p >= 1, q >= 2 with p < q (got p={p}, q={q})")]
    BadRatio { p: u64, q: u64 },
}

/// Largest denominator accepted when recognizing a decimal as a ratio.
pub const MAX_DENOMINATOR: u64 = 1000;

/// Step-size contraction factor. MADS needs the exact ratio `p/q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tau {
    value: f64,
    ratio: Option<(u64, u64)>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Tau {
    pub const HALF: Tau = Tau {
        value: 0.5,
        ratio: Some((1, 2)),
    };

    /// `p/q` in lowest terms.
    pub fn ratio(p: u64, q: u64) -> Result<Self, RuleError> {
        if p == 0 || q < 2 || p >= q {
            return Err(RuleError::BadRatio { p, q });
        }
        let g = gcd(p, q);
        Ok(Self {
            value: p as f64 / q as f64,
            ratio: Some((p / g, q / g)),
        })
    }

    /// A real factor; recognized as a ratio when some `p/q` with
    /// `q <= MAX_DENOMINATOR` evaluates to exactly this `f64`.
    pub fn real(value: f64) -> Result<Self, RuleError> {
        if !(value > 0.0 && value < 1.0) {
            return Err(RuleError::TauOutOfRange(value));
        }
        let ratio = (2..=MAX_DENOMINATOR).find_map(|q| {
            let p = (value * q as f64).round() as u64;
            (p >= 1 && p < q && p as f64 / q as f64 == value).then(|| {
                let g = gcd(p, q);
                (p / g, q / g)
            })
        });
        Ok(Self { value, ratio })
    }

    /// Accepts `p/q` or a decimal.
    pub fn parse(s: &str) -> Result<Self, RuleError> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| RuleError::Unparseable(s.into()))?;
            let q: u64 = q
                .trim()
                .parse()
                .map_err(|_| RuleError::Unparseable(s.into()))?;
            return Self::ratio(p, q);
        }
        let v: f64 = s.parse().map_err(|_| RuleError::Unparseable(s.into()))?;
        Self::real(v)
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// Lowest-terms `(p, q)` if the factor is rational.
    pub fn as_ratio(&self) -> Option<(u64, u64)> {
        self.ratio
    }

    pub fn require_rational(&self) -> Result<(u64, u64), RuleError> {
        self.ratio
            .ok_or_else(|| RuleError::NotRational(self.value.to_string()))
    }
}

impl Default for Tau {
    fn default() -> Self {
        Tau::HALF
    }
}

impl std::fmt::Display for Tau {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.ratio {
            Some((p, q)) => write!(f, "{p}/{q}"),
            None => write!(f, "{}", self.value),
        }
    }
}

fn check_tau(tau: f64) -> Result<(), RuleError> {
    if tau > 0.0 && tau < 1.0 {
        Ok(())
    } else {
        Err(RuleError::TauOutOfRange(tau))
    }
}

/// ADS/SDDS rule: the frame size scales by `τ` (failure) or `τ⁻¹` (success) and
/// the exclusion size follows as `min{Δ', Δ'²/Δ⁰}`.
pub fn update_ads(
    frame: f64,
    _excl: f64,
    success: bool,
    tau: f64,
    initial_frame: f64,
) -> Result<(f64, f64), RuleError> {
    check_tau(tau)?;
    let next = if success { frame / tau } else { tau * frame };
    Ok((next, next.min(next * next / initial_frame)))
}

/// OrthoMADS rule on `(Δ̄, δ̄)`: the mesh size scales by `τ` or `τ⁻¹` and the
/// frame size is `max{√δ̄', δ̄'}`.
pub fn update_mads(
    _frame: f64,
    mesh: f64,
    success: bool,
    tau: &Tau,
) -> Result<(f64, f64), RuleError> {
    tau.require_rational()?;
    check_tau(tau.value())?;
    let next = if success {
        mesh / tau.value()
    } else {
        tau.value() * mesh
    };
    Ok((next.sqrt().max(next), next))
}

/// `ρ(t) = γ t²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForcingFunction {
    pub gamma: f64,
}

impl Default for ForcingFunction {
    fn default() -> Self {
        Self { gamma: 1e-2 }
    }
}

impl ForcingFunction {
    pub fn rho(&self, t: f64) -> f64 {
        self.gamma * t * t
    }
}

/// Sufficient decrease test `f(y) < f(x) - ρ(δ)`.
pub fn sdds_accept(candidate: f64, incumbent: f64, excl: f64, rho: &ForcingFunction) -> bool {
    candidate < incumbent - rho.rho(excl)
}

/// `τ = p/q` written with a possibly unreduced pair, plus the exponent `ž`
/// entering `μ = p^ž δ̄⁰ / ‖G⁻¹‖`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceParams {
    pub p: u64,
    pub q: u64,
    pub z_check: i32,
}

impl Default for EquivalenceParams {
    // τ = 1/2 written as 2/4 so that a negative exponent makes μ small enough
    // for the exclusion balls to sit inside the finest mesh spacing; every
    // factor stays a power of two and the arithmetic is exact.
    fn default() -> Self {
        Self {
            p: 2,
            q: 4,
            z_check: -6,
        }
    }
}

impl EquivalenceParams {
    pub fn new(p: u64, q: u64, z_check: i32) -> Result<Self, RuleError> {
        if p == 0 || q < 2 || p >= q {
            return Err(RuleError::BadRatio { p, q });
        }
        Ok(Self { p, q, z_check })
    }

    pub fn tau(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    pub fn mu(&self, initial_mesh: f64) -> f64 {
        compute_mu(self.p, self.z_check, initial_mesh, 1.0)
    }

    /// Mesh size recovered from the ADS exclusion size: `δ̄ = (1/μ) q^{n_U} δ`.
    pub fn mesh_size(&self, mu: f64, unsuccessful: u64, excl: f64) -> f64 {
        (self.q as f64).powi(unsuccessful as i32) / mu * excl
    }
}

/// `μ = p^ž δ̄⁰ / ‖G⁻¹‖`.
pub fn compute_mu(p: u64, z_check: i32, initial_mesh: f64, g_inverse_norm: f64) -> f64 {
    (p as f64).powi(z_check) * initial_mesh / g_inverse_norm
}

/// Frame and exclusion update of the ADS instance of OrthoMADS.
///
/// Decrease: `(max{√((τ/μ)q^{n_U}δ), (τ/μ)q^{n_U}δ}, (τ/q)δ)`.
/// Increase: `(max{√((τ⁻¹/μ)q^{n_U}δ), (τ⁻¹/μ)q^{n_U}δ}, τ⁻¹δ)`.
/// `unsuccessful` is the count before this iteration.
pub fn ads_as_orthomads_update(
    _frame: f64,
    excl: f64,
    success: bool,
    params: &EquivalenceParams,
    mu: f64,
    unsuccessful: u64,
) -> (f64, f64) {
    let tau = params.tau();
    let qn = (params.q as f64).powi(unsuccessful as i32);
    if success {
        let m = (1.0 / tau) / mu * qn * excl;
        (m.sqrt().max(m), excl / tau)
    } else {
        let m = tau / mu * qn * excl;
        (m.sqrt().max(m), tau / params.q as f64 * excl)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ads_table() {
        assert_eq!(update_ads(1.0, 1.0, false, 0.5, 1.0).unwrap(), (0.5, 0.25));
        assert_eq!(update_ads(1.0, 1.0, true, 0.5, 1.0).unwrap(), (2.0, 2.0));
        assert_eq!(
            update_ads(0.5, 0.25, false, 0.5, 1.0).unwrap(),
            (0.25, 0.0625)
        );
    }

    #[test]
    fn ads_rejects_bad_tau() {
        assert!(update_ads(1.0, 1.0, false, 1.0, 1.0).is_err());
        assert!(update_ads(1.0, 1.0, false, 0.0, 1.0).is_err());
    }

    #[test]
    fn mads_table() {
        let (f, m) = update_mads(1.0, 1.0, false, &Tau::HALF).unwrap();
        assert_eq!(m, 0.5);
        assert!((f - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(update_mads(1.0, 1.0, true, &Tau::HALF).unwrap(), (2.0, 2.0));
        let (f, m) = update_mads(0.5, 0.25, false, &Tau::HALF).unwrap();
        assert_eq!(m, 0.125);
        assert!((f - 0.125f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn mads_requires_rational_tau() {
        let t = Tau::real(0.3333333).unwrap();
        assert!(t.as_ratio().is_none());
        assert!(update_mads(1.0, 1.0, false, &t).is_err());
    }

    #[test]
    fn tau_parsing() {
        assert_eq!(Tau::parse("1/2").unwrap(), Tau::HALF);
        assert_eq!(Tau::parse("0.5").unwrap(), Tau::HALF);
        assert_eq!(Tau::parse("2/4").unwrap().as_ratio(), Some((1, 2)));
        assert_eq!(Tau::parse("0.25").unwrap().as_ratio(), Some((1, 4)));
        assert!(Tau::parse("3/2").is_err());
        assert!(Tau::parse("abc").is_err());
        assert!(Tau::parse("1.5").is_err());
        assert!(Tau::parse("0.3333333").unwrap().as_ratio().is_none());
    }

    #[test]
    fn sdds_acceptance_examples() {
        let rho = ForcingFunction::default();
        assert!(sdds_accept(0.9998, 1.0, 0.1, &rho));
        assert!(!sdds_accept(0.9999, 1.0, 0.1, &rho));
        assert!(!sdds_accept(f64::INFINITY, 1.0, 0.1, &rho));
    }

    #[test]
    fn forcing_function_limit() {
        let rho = ForcingFunction::default();
        for t in [1e-7, 1e-8, 1e-12] {
            assert!(rho.rho(t) / t <= 1e-9);
            assert!(rho.rho(t) > 0.0);
        }
    }

    #[test]
    fn mu_examples() {
        assert_eq!(compute_mu(1, 5, 1.0, 1.0), 1.0);
        assert_eq!(compute_mu(2, -3, 1.0, 1.0), 0.125);
        assert_eq!(compute_mu(3, 0, 2.0, 4.0), 0.5);
    }

    #[test]
    fn equivalence_update_examples() {
        let params = EquivalenceParams::new(1, 2, 0).unwrap();
        let (f, e) = ads_as_orthomads_update(1.0, 1.0, false, &params, 1.0, 0);
        assert!((f - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(e, 0.25);
        assert_eq!(
            ads_as_orthomads_update(1.0, 1.0, true, &params, 1.0, 0),
            (2.0, 2.0)
        );
    }

    proptest! {
        #[test]
        fn ads_excl_never_exceeds_frame(steps in proptest::collection::vec(any::<bool>(), 1..200)) {
            let (mut f, mut e) = (1.0, 1.0);
            for s in steps {
                (f, e) = update_ads(f, e, s, 0.5, 1.0).unwrap();
                prop_assert!(e <= f);
            }
        }

        #[test]
        fn equivalence_rule_tracks_mads(steps in proptest::collection::vec(any::<bool>(), 1..60)) {
            let params = EquivalenceParams::default();
            let mu = params.mu(1.0);
            let (mut fa, mut ea, mut nu) = (1.0, mu, 0u64);
            let (mut fm, mut em) = (1.0, 1.0);
            for s in steps {
                (fa, ea) = ads_as_orthomads_update(fa, ea, s, &params, mu, nu);
                if !s { nu += 1; }
                (fm, em) = update_mads(fm, em, s, &Tau::HALF).unwrap();
                prop_assert_eq!(fa, fm);
                prop_assert_eq!(params.mesh_size(mu, nu, ea), em);
            }
        }

        #[test]
        fn forcing_function_monotone(a in 0.0f64..10.0, b in 0.0f64..10.0) {
            let rho = ForcingFunction::default();
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(rho.rho(lo) <= rho.rho(hi));
        }
    }
}
