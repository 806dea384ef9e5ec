//! Generalized trigonometric functions and model-space geometry.
//!
//! For a curvature parameter `k`, `cos_k` and `sin_k` solve `u'' + k u = 0`
//! with initial data `(1, 0)` and `(0, 1)`; they specialize to circular
//! functions for `k > 0`, hyperbolic ones for `k < 0`, and to `1` and the
//! identity at `k = 0`. The shifted solution `s_{k,λ} = cos_k - λ sin_k`
//! starts at `1` with slope `-λ` and vanishes for the first time at
//! [`max_domain`]. From these we build the boundary area and ball volume of
//! the simply connected model of constant sectional curvature, and the
//! one-sided tube Jacobian driven by a mean-curvature barrier under a Ricci
//! lower bound.
//!
//! Near `k = 0` the closed forms lose digits to cancellation, so every
//! evaluator switches to a truncated power series when `|k| r^2 < 1e-8`;
//! the switch is exact at `k = 0` and keeps relative error at the
//! `1e-16`-scale on both sides of the threshold.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::numerics::integrate;
use crate::{ensure_finite, Error, Result};

/// Below this value of `|k| r^2`, series evaluation replaces closed forms.
const SERIES_THRESHOLD: f64 = 1e-8;

pub(crate) fn cos_k_raw(k: f64, r: f64) -> f64 {
    let x = k * r * r;
    if x.abs() < SERIES_THRESHOLD {
        // 1 - x/2 + x^2/24 - x^3/720, nested.
        return 1.0 - x / 2.0 * (1.0 - x / 12.0 * (1.0 - x / 30.0));
    }
    if k > 0.0 {
        (k.sqrt() * r).cos()
    } else {
        ((-k).sqrt() * r).cosh()
    }
}

pub(crate) fn sin_k_raw(k: f64, r: f64) -> f64 {
    let x = k * r * r;
    if x.abs() < SERIES_THRESHOLD {
        // r (1 - x/6 + x^2/120 - x^3/5040), nested.
        return r * (1.0 - x / 6.0 * (1.0 - x / 20.0 * (1.0 - x / 42.0)));
    }
    if k > 0.0 {
        let s = k.sqrt();
        (s * r).sin() / s
    } else {
        let s = (-k).sqrt();
        (s * r).sinh() / s
    }
}

/// Solution of `u'' + k u = 0` with `u(0) = 1`, `u'(0) = 0`.
pub fn cos_k(k: f64, r: f64) -> Result<f64> {
    ensure_finite("k", k)?;
    ensure_finite("r", r)?;
    Ok(cos_k_raw(k, r))
}

/// Solution of `u'' + k u = 0` with `u(0) = 0`, `u'(0) = 1`.
pub fn sin_k(k: f64, r: f64) -> Result<f64> {
    ensure_finite("k", k)?;
    ensure_finite("r", r)?;
    Ok(sin_k_raw(k, r))
}

pub(crate) fn s_lambda_raw(k: f64, lambda: f64, r: f64) -> f64 {
    cos_k_raw(k, r) - lambda * sin_k_raw(k, r)
}

pub(crate) fn s_lambda_deriv_raw(k: f64, lambda: f64, r: f64) -> f64 {
    -k * sin_k_raw(k, r) - lambda * cos_k_raw(k, r)
}

/// `s_{k,λ}(r) = cos_k(r) - λ sin_k(r)`: the solution of `u'' + k u = 0`
/// with `u(0) = 1`, `u'(0) = -λ`.
pub fn s_lambda(k: f64, lambda: f64, r: f64) -> Result<f64> {
    ensure_finite("k", k)?;
    ensure_finite("lambda", lambda)?;
    ensure_finite("r", r)?;
    Ok(s_lambda_raw(k, lambda, r))
}

/// First positive zero of `s_{k,λ}`, or `+inf` when it stays positive.
///
/// Closed forms: for `k = 0` the zero is `1/λ` when `λ > 0`; for `k > 0`
/// it is `(π/2 - atan(λ/√k)) / √k`; for `k < 0` it is
/// `artanh(√-k / λ) / √-k` when `λ > √-k` and `+inf` otherwise.
pub fn max_domain(k: f64, lambda: f64) -> f64 {
    if k == 0.0 {
        if lambda > 0.0 {
            1.0 / lambda
        } else {
            f64::INFINITY
        }
    } else if k > 0.0 {
        let s = k.sqrt();
        (FRAC_PI_2 - (lambda / s).atan()) / s
    } else {
        let s = (-k).sqrt();
        if lambda > s {
            (s / lambda).atanh() / s
        } else {
            f64::INFINITY
        }
    }
}

/// A validated `s_{k,λ}` with its precomputed domain endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SLambda {
    k: f64,
    lambda: f64,
    max_domain_end: f64,
}

impl SLambda {
    pub fn new(k: f64, lambda: f64) -> Result<Self> {
        ensure_finite("k", k)?;
        ensure_finite("lambda", lambda)?;
        Ok(Self {
            k,
            lambda,
            max_domain_end: max_domain(k, lambda),
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// First positive zero of the function, `+inf` if none.
    pub fn max_domain_end(&self) -> f64 {
        self.max_domain_end
    }

    pub fn eval(&self, r: f64) -> f64 {
        s_lambda_raw(self.k, self.lambda, r)
    }

    pub fn deriv(&self, r: f64) -> f64 {
        s_lambda_deriv_raw(self.k, self.lambda, r)
    }
}

/// Warped-product radius factor of the model of constant sectional
/// curvature `k_sect`: `sin_{k_sect}` restricted to `r ≥ 0`.
pub fn sn(k_sect: f64, r: f64) -> Result<f64> {
    ensure_finite("k_sect", k_sect)?;
    ensure_finite("r", r)?;
    if r < 0.0 {
        return Err(Error::OutOfRange(format!("sn requires r >= 0, got {r}")));
    }
    Ok(sin_k_raw(k_sect, r))
}

/// Volume of the unit ball in dimension `dim` (real `dim > 0`):
/// `π^{dim/2} / Γ(dim/2 + 1)`.
pub fn unit_ball_volume(dim: f64) -> Result<f64> {
    ensure_finite("dim", dim)?;
    if !(dim > 0.0) {
        return Err(Error::InvalidParam(format!(
            "unit ball volume requires dim > 0, got {dim}"
        )));
    }
    Ok(PI.powf(dim / 2.0) / libm::tgamma(dim / 2.0 + 1.0))
}

/// Curvature-dimension data shared by the model-space evaluators: a Ricci
/// lower bound `ricci`, a real dimension `dim > 1`, the derived sectional
/// parameter `ricci / (dim - 1)`, and the unit ball volume of `dim`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonParams {
    ricci: f64,
    dim: f64,
    sectional: f64,
    omega_n: f64,
}

impl ComparisonParams {
    /// Build from a Ricci lower bound and a real dimension `dim > 1`.
    pub fn new(ricci: f64, dim: f64) -> Result<Self> {
        ensure_finite("ricci", ricci)?;
        ensure_finite("dim", dim)?;
        if !(dim > 1.0) {
            return Err(Error::InvalidParam(format!(
                "dimension must exceed 1, got {dim}"
            )));
        }
        Ok(Self {
            ricci,
            dim,
            sectional: ricci / (dim - 1.0),
            omega_n: unit_ball_volume(dim)?,
        })
    }

    /// Build from the sectional parameter directly (`ricci = k (dim-1)`).
    pub fn with_sectional(k_sect: f64, dim: f64) -> Result<Self> {
        ensure_finite("k_sect", k_sect)?;
        ensure_finite("dim", dim)?;
        if !(dim > 1.0) {
            return Err(Error::InvalidParam(format!(
                "dimension must exceed 1, got {dim}"
            )));
        }
        Self::new(k_sect * (dim - 1.0), dim)
    }

    pub fn ricci(&self) -> f64 {
        self.ricci
    }

    pub fn dim(&self) -> f64 {
        self.dim
    }

    /// Sectional parameter `ricci / (dim - 1)` of the model.
    pub fn sectional(&self) -> f64 {
        self.sectional
    }

    /// Unit ball volume of the (real) dimension.
    pub fn omega_n(&self) -> f64 {
        self.omega_n
    }

    /// Diameter of the model space, `+inf` for non-positive curvature.
    pub fn model_diameter(&self) -> f64 {
        if self.sectional > 0.0 {
            PI / self.sectional.sqrt()
        } else {
            f64::INFINITY
        }
    }

    fn check_radius(&self, r: f64) -> Result<()> {
        ensure_finite("r", r)?;
        if r < 0.0 {
            return Err(Error::OutOfRange(format!("radius must be >= 0, got {r}")));
        }
        let diam = self.model_diameter();
        if r > diam * (1.0 + 1e-12) {
            return Err(Error::OutOfRange(format!(
                "radius {r} exceeds the model diameter {diam}"
            )));
        }
        Ok(())
    }
}

/// Boundary area of the geodesic ball of radius `r` in the model of
/// constant sectional curvature: `dim · ω_dim · sn^{dim-1}(r)`.
pub fn model_area(params: &ComparisonParams, r: f64) -> Result<f64> {
    params.check_radius(r)?;
    let s = sin_k_raw(params.sectional, r).max(0.0);
    Ok(params.dim * params.omega_n * s.powf(params.dim - 1.0))
}

/// `(1 - cos_k(r)) / k`, continued through `k = 0` by series.
fn one_minus_cos_k_over_k(k: f64, r: f64) -> f64 {
    let x = k * r * r;
    if x.abs() < SERIES_THRESHOLD {
        // r^2/2 (1 - x/12 (1 - x/30))
        return r * r / 2.0 * (1.0 - x / 12.0 * (1.0 - x / 30.0));
    }
    (1.0 - cos_k_raw(k, r)) / k
}

/// `∫_0^r sin_k^2`, continued through `k = 0` by series.
fn int_sin_k_sq(k: f64, r: f64) -> f64 {
    let x = k * r * r;
    if x.abs() < SERIES_THRESHOLD {
        // r^3/3 (1 - x/5 + 2 x^2/105)
        return r * r * r / 3.0 * (1.0 - x / 5.0 * (1.0 - 2.0 * x / 21.0));
    }
    (r - sin_k_raw(k, r) * cos_k_raw(k, r)) / (2.0 * k)
}

/// Volume of the geodesic ball of radius `r` in the model: the integral of
/// [`model_area`] from `0` to `r`. Dimensions `2` and `3` use closed forms;
/// other dimensions fall back to adaptive quadrature.
pub fn model_volume(params: &ComparisonParams, r: f64) -> Result<f64> {
    params.check_radius(r)?;
    let k = params.sectional;
    let n = params.dim;
    if n == 2.0 {
        return Ok(2.0 * params.omega_n * one_minus_cos_k_over_k(k, r));
    }
    if n == 3.0 {
        return Ok(3.0 * params.omega_n * int_sin_k_sq(k, r));
    }
    let coeff = n * params.omega_n;
    let exponent = n - 1.0;
    integrate(
        &|t| coeff * sin_k_raw(k, t).max(0.0).powf(exponent),
        0.0,
        r,
    )
}

/// One-sided tube Jacobian at signed distance `t` from a hypersurface with
/// mean-curvature barrier `barrier`, under Ricci lower bound `ricci` in
/// dimension `dim`: the positive part of
/// `s_{ricci/(dim-1), -barrier/(dim-1)}(t)` raised to `dim - 1`, extended by
/// zero past the first zero on either side of `t = 0`.
pub fn jacobian(barrier: f64, ricci: f64, dim: f64, t: f64) -> f64 {
    debug_assert!(barrier.is_finite() && ricci.is_finite() && t.is_finite());
    debug_assert!(dim > 1.0);
    let k = ricci / (dim - 1.0);
    let lambda = -barrier / (dim - 1.0);
    // s_{k,λ}(-u) = s_{k,-λ}(u): evaluate on the positive axis with the
    // reflected slope so the first-zero cutoff applies on both sides.
    let (u, lam) = if t >= 0.0 { (t, lambda) } else { (-t, -lambda) };
    if u >= max_domain(k, lam) {
        return 0.0;
    }
    let s = s_lambda_raw(k, lam, u);
    if s <= 0.0 {
        0.0
    } else {
        s.powf(dim - 1.0)
    }
}
