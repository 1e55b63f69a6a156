//! The one-parameter family of 4-stars and its folding law.
//!
//! The star vectors are
//!
//! ```text
//! v1 = r1 ( cos α, 0,      sin α)
//! v2 = r2 (-cos α, 0,      sin α)
//! v3 = r3 ( 0,     cos β, -sin β)
//! v4 = r4 ( 0,    -cos β, -sin β)
//! ```
//!
//! with `sin α · sin β = λ` held fixed along a fold. Every admissible facet
//! then keeps its edge lengths and the dot product `-ri rj λ`, so it stays
//! congruent. At `α = π/2` everything lies in the plane `x = 0`; at
//! `α = arcsin λ` (where `β = π/2`) everything lies in `y = 0`.

use std::f64::consts::FRAC_PI_2;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Slack allowed when an angle is compared against the ends of the fold interval.
const ENDPOINT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StarError {
    #[error("star radius r{index} = {value} must be positive and finite")]
    BadRadius { index: usize, value: f64 },
    #[error("fold invariant lambda = {0} must lie in (0, 1)")]
    BadLambda(f64),
    #[error("fold angle alpha = {alpha} outside [{lo}, {hi}]")]
    AlphaOutOfRange { alpha: f64, lo: f64, hi: f64 },
    #[error("fold parameter t = {0} outside [0, 1]")]
    TOutOfRange(f64),
    #[error("star is degenerate at this fold state")]
    Degenerate,
}

/// Fixed data of a fold family: the four radii and the invariant `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarParams {
    r: [f64; 4],
    lambda: f64,
}

impl StarParams {
    pub fn new(r: [f64; 4], lambda: f64) -> Result<Self, StarError> {
        for (i, &ri) in r.iter().enumerate() {
            if !(ri.is_finite() && ri > 0.0) {
                return Err(StarError::BadRadius { index: i + 1, value: ri });
            }
        }
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(StarError::BadLambda(lambda));
        }
        Ok(Self { r, lambda })
    }

    /// Unit radii with `λ = 1/3`, the family through the tetrahedral star.
    pub fn tetrahedral() -> Self {
        Self { r: [1.0; 4], lambda: 1.0 / 3.0 }
    }

    pub fn r(&self) -> [f64; 4] {
        self.r
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Acute angle shared by every admissible facet.
    pub fn gamma(&self) -> f64 {
        facet_angle_gamma(self.lambda)
    }

    pub fn alpha_min(&self) -> f64 {
        self.lambda.asin()
    }

    /// State at chart parameter `t` (see [`alpha_of_t`]).
    pub fn state_at(&self, t: f64) -> Result<StarState, StarError> {
        StarState::new(*self, alpha_of_t(self.lambda, t)?)
    }
}

impl Default for StarParams {
    fn default() -> Self {
        Self::tetrahedral()
    }
}

/// A point of the fold family. `β` is always derived from `α` and `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarState {
    params: StarParams,
    alpha: f64,
}

impl StarState {
    pub fn new(params: StarParams, alpha: f64) -> Result<Self, StarError> {
        let lo = params.alpha_min();
        if !(alpha >= lo - ENDPOINT_SLACK && alpha <= FRAC_PI_2 + ENDPOINT_SLACK) {
            return Err(StarError::AlphaOutOfRange { alpha, lo, hi: FRAC_PI_2 });
        }
        Ok(Self { params, alpha: alpha.clamp(lo, FRAC_PI_2) })
    }

    pub fn params(&self) -> &StarParams {
        &self.params
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        // The constructor already clamped alpha into range.
        beta_unchecked(self.params.lambda, self.alpha)
    }

    /// True at either collapse endpoint.
    pub fn is_degenerate(&self) -> bool {
        (FRAC_PI_2 - self.alpha).abs() <= ENDPOINT_SLACK
            || (self.alpha - self.params.alpha_min()).abs() <= ENDPOINT_SLACK
    }

    pub fn require_nondegenerate(&self) -> Result<(), StarError> {
        if self.is_degenerate() {
            Err(StarError::Degenerate)
        } else {
            Ok(())
        }
    }

    pub fn vectors(&self) -> [Vector3<f64>; 4] {
        star_vectors(self)
    }
}

/// The four star vectors at a fold state.
pub fn star_vectors(state: &StarState) -> [Vector3<f64>; 4] {
    let [r1, r2, r3, r4] = state.params.r;
    let (sa, ca) = state.alpha.sin_cos();
    let (sb, cb) = state.beta().sin_cos();
    [
        Vector3::new(r1 * ca, 0.0, r1 * sa),
        Vector3::new(-r2 * ca, 0.0, r2 * sa),
        Vector3::new(0.0, r3 * cb, -r3 * sb),
        Vector3::new(0.0, -r4 * cb, -r4 * sb),
    ]
}

fn beta_unchecked(lambda: f64, alpha: f64) -> f64 {
    (lambda / alpha.sin()).min(1.0).asin()
}

/// `β = arcsin(λ / sin α)`, the partner angle that keeps facets congruent.
pub fn beta_of_alpha(lambda: f64, alpha: f64) -> Result<f64, StarError> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(StarError::BadLambda(lambda));
    }
    let lo = lambda.asin();
    if !(alpha >= lo - ENDPOINT_SLACK && alpha <= FRAC_PI_2 + ENDPOINT_SLACK) {
        return Err(StarError::AlphaOutOfRange { alpha, lo, hi: FRAC_PI_2 });
    }
    Ok(beta_unchecked(lambda, alpha.clamp(lo, FRAC_PI_2)))
}

/// Fold chart: linear in `α` from `arcsin λ` (`t = 0`, collapsed into `y = 0`)
/// to `π/2` (`t = 1`, collapsed into `x = 0`).
pub fn alpha_of_t(lambda: f64, t: f64) -> Result<f64, StarError> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(StarError::BadLambda(lambda));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(StarError::TOutOfRange(t));
    }
    let lo = lambda.asin();
    if t == 1.0 {
        return Ok(FRAC_PI_2);
    }
    Ok(lo + t * (FRAC_PI_2 - lo))
}

/// Inverse of [`alpha_of_t`].
pub fn t_of_alpha(lambda: f64, alpha: f64) -> Result<f64, StarError> {
    beta_of_alpha(lambda, alpha)?;
    let lo = lambda.asin();
    Ok(((alpha - lo) / (FRAC_PI_2 - lo)).clamp(0.0, 1.0))
}

/// Acute facet angle `γ = arccos λ`.
pub fn facet_angle_gamma(lambda: f64) -> f64 {
    lambda.acos()
}

/// Unit radii with `α = β = arccos √(2/3)`; congruent to the regular
/// tetrahedral star.
pub fn tetrahedral_star() -> StarState {
    let alpha = (2.0f64 / 3.0).sqrt().acos();
    let params = StarParams::new([1.0; 4], alpha.sin().powi(2)).expect("valid tetrahedral params");
    StarState::new(params, alpha).expect("tetrahedral alpha lies inside the fold interval")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn vectors_at_x_collapse() {
        let p = StarParams::new([1.0; 4], 1.0 / 3.0).unwrap();
        let s = StarState::new(p, FRAC_PI_2).unwrap();
        let v = s.vectors();
        let e = 1e-15;
        assert_relative_eq!(v[0], Vector3::new(0.0, 0.0, 1.0), epsilon = e);
        assert_relative_eq!(v[1], Vector3::new(0.0, 0.0, 1.0), epsilon = e);
        let c = 8f64.sqrt() / 3.0;
        assert_relative_eq!(v[2], Vector3::new(0.0, c, -1.0 / 3.0), epsilon = 1e-15);
        assert_relative_eq!(v[3], Vector3::new(0.0, -c, -1.0 / 3.0), epsilon = 1e-15);
        assert!(s.is_degenerate());
    }

    #[test]
    fn uneven_radii_norms() {
        let p = StarParams::new([2.0, 1.0, 1.0, 1.0], 0.5).unwrap();
        let s = StarState::new(p, std::f64::consts::FRAC_PI_3).unwrap();
        let v = s.vectors();
        assert_relative_eq!(v[0].norm(), 2.0, epsilon = 1e-14);
        for w in &v[1..] {
            assert_relative_eq!(w.norm(), 1.0, epsilon = 1e-14);
        }
        assert_relative_eq!(s.beta().sin(), 1.0 / 3f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn beta_endpoints() {
        let l = 1.0 / 3.0;
        assert_relative_eq!(beta_of_alpha(l, FRAC_PI_2).unwrap(), l.asin(), epsilon = 1e-15);
        assert_relative_eq!(beta_of_alpha(l, l.asin()).unwrap(), FRAC_PI_2, epsilon = 1e-7);
        let b = beta_of_alpha(l, 65f64.to_radians()).unwrap();
        assert!((b.to_degrees() - 21.58).abs() < 0.005, "{}", b.to_degrees());
    }

    #[test]
    fn beta_rejects_illegal_alpha() {
        assert!(matches!(beta_of_alpha(1.0 / 3.0, 0.1), Err(StarError::AlphaOutOfRange { .. })));
        assert!(matches!(beta_of_alpha(1.0 / 3.0, 1.6), Err(StarError::AlphaOutOfRange { .. })));
        assert!(matches!(beta_of_alpha(1.5, 1.0), Err(StarError::BadLambda(_))));
    }

    #[test]
    fn chart_endpoints_and_midpoint() {
        let l = 1.0 / 3.0;
        assert_eq!(alpha_of_t(l, 1.0).unwrap(), FRAC_PI_2);
        assert_eq!(alpha_of_t(l, 0.0).unwrap(), l.asin());
        let mid = alpha_of_t(l, 0.5).unwrap();
        assert_relative_eq!(mid, (l.asin() + FRAC_PI_2) / 2.0, epsilon = 1e-15);
        assert!((mid - 0.9553).abs() < 5e-5);
        assert!(alpha_of_t(l, 1.01).is_err());
        assert!(alpha_of_t(l, -0.01).is_err());
        assert_relative_eq!(t_of_alpha(l, mid).unwrap(), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn gamma_values() {
        assert_relative_eq!(facet_angle_gamma(1.0 / 3.0).to_degrees(), 70.52877936550931, epsilon = 1e-9);
        assert_relative_eq!(facet_angle_gamma(0.5), std::f64::consts::FRAC_PI_3, epsilon = 1e-15);
        assert!(facet_angle_gamma(1.0 - 1e-12) < 2e-6);
    }

    #[test]
    fn tetrahedral_star_dots() {
        let s = tetrahedral_star();
        assert_relative_eq!(s.params().lambda(), 1.0 / 3.0, epsilon = 1e-15);
        let v = s.vectors();
        for w in &v {
            assert_relative_eq!(w.norm(), 1.0, epsilon = 1e-15);
        }
        for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
            assert_relative_eq!(v[i].dot(&v[j]), -1.0 / 3.0, epsilon = 1e-15);
        }
        // forbidden pairs happen to share the same dot product here
        assert_relative_eq!(v[0].dot(&v[1]), -1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(v[2].dot(&v[3]), -1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn bad_params() {
        assert!(StarParams::new([1.0, 0.0, 1.0, 1.0], 0.3).is_err());
        assert!(StarParams::new([1.0; 4], 0.0).is_err());
        assert!(StarParams::new([1.0; 4], 1.0).is_err());
        assert!(StarParams::new([1.0, f64::NAN, 1.0, 1.0], 0.3).is_err());
    }
}
