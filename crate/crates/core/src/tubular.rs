//! Tube (collar) comparison bounds around a hypersurface with a mean
//! curvature barrier.
//!
//! All bounds are driven by the model Jacobian
//! `J(t) = s_{k,-c/(dim-1)}(t)_+^{dim-1}` with `k = ricci/(dim-1)`: the
//! perimeter of the equidistant at offset `t` is at most `per0 · J(t)`, the
//! tube volume is at most `per0 · ∫ J`, and the Laplacian of the distance
//! function is at most the logarithmic derivative of `J`. Offsets may be
//! taken on the [`Side::Exterior`] or [`Side::Interior`] of the
//! hypersurface; the interior side reflects the Jacobian. Past the focal
//! distance (the first zero of `s`) the perimeter and volume bounds
//! degenerate gracefully to zero growth, while the Laplacian bound ceases
//! to exist and is rejected.
//!
//! [`model_ball_tube_oracle`] instantiates the bounds on geodesic spheres
//! in the constant-curvature models, where they hold with equality; the
//! reported gap is a direct measure of implementation error.

use crate::model_space::{jacobian, max_domain, model_area, ComparisonParams, SLambda};
use crate::numerics::integrate;
use crate::{ensure_finite, Error, Result};

/// Which side of the hypersurface an offset is measured toward.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Along the direction the barrier bounds (positive offsets).
    Exterior,
    /// The reflected direction (the barrier flips sign).
    Interior,
}

fn check_tube_params(per0: f64, barrier: f64, ricci: f64, dim: f64) -> Result<()> {
    ensure_finite("per0", per0)?;
    ensure_finite("barrier", barrier)?;
    ensure_finite("ricci", ricci)?;
    ensure_finite("dim", dim)?;
    if !(per0 > 0.0) {
        return Err(Error::InvalidParam(format!(
            "initial perimeter must be > 0, got {per0}"
        )));
    }
    if !(dim > 1.0) {
        return Err(Error::InvalidParam(format!(
            "dimension must exceed 1, got {dim}"
        )));
    }
    Ok(())
}

/// Sharp upper bound for the Laplacian of the signed distance function at
/// signed distance `f` from a hypersurface with mean curvature at most
/// `barrier`: `(dim-1) s'(f)/s(f)` for `s = s_{k,-barrier/(dim-1)}`.
///
/// `Side::Exterior` requires `f ≥ 0`, `Side::Interior` requires `f ≤ 0`
/// (where the bound is the reflected `-(dim-1) s̃'(-f)/s̃(-f)` with
/// `s̃ = s_{k,barrier/(dim-1)}`). Distances at or beyond the focal
/// distance — the first zero of the model — are rejected rather than
/// clamped: no pointwise bound exists there.
pub fn laplacian_bound(f: f64, barrier: f64, ricci: f64, dim: f64, side: Side) -> Result<f64> {
    ensure_finite("f", f)?;
    check_tube_params(1.0, barrier, ricci, dim)?;
    let k = ricci / (dim - 1.0);
    let (u, lambda, sign) = match side {
        Side::Exterior => {
            if f < 0.0 {
                return Err(Error::OutOfRange(format!(
                    "exterior distances must be nonnegative, got {f}"
                )));
            }
            (f, -barrier / (dim - 1.0), 1.0)
        }
        Side::Interior => {
            if f > 0.0 {
                return Err(Error::OutOfRange(format!(
                    "interior distances must be nonpositive, got {f}"
                )));
            }
            (-f, barrier / (dim - 1.0), -1.0)
        }
    };
    let s = SLambda::new(k, lambda)?;
    if u >= s.max_domain_end() {
        return Err(Error::OutOfRange(format!(
            "distance {u} reaches the focal distance {}; no bound exists there",
            s.max_domain_end()
        )));
    }
    Ok(sign * (dim - 1.0) * s.deriv(u) / s.eval(u))
}

/// Upper bound for the perimeter of the equidistant hypersurface at offset
/// `t ≥ 0` on the given side: `per0 · J(±t)`. Zero past the focal distance.
pub fn tube_perimeter_bound(
    per0: f64,
    barrier: f64,
    ricci: f64,
    dim: f64,
    t: f64,
    side: Side,
) -> Result<f64> {
    check_tube_params(per0, barrier, ricci, dim)?;
    ensure_finite("t", t)?;
    if t < 0.0 {
        return Err(Error::OutOfRange(format!(
            "offsets are nonnegative (pick the side instead), got {t}"
        )));
    }
    let signed = match side {
        Side::Exterior => t,
        Side::Interior => -t,
    };
    Ok(per0 * jacobian(barrier, ricci, dim, signed))
}

/// Upper bound for the volume of the one-sided tube of depth `t ≥ 0`:
/// `per0 · ∫_0^t J`. The integral saturates at the focal distance, where
/// the model collar stops growing. Closed form when `ricci = 0`, adaptive
/// quadrature otherwise.
pub fn tube_volume_bound(
    per0: f64,
    barrier: f64,
    ricci: f64,
    dim: f64,
    t: f64,
    side: Side,
) -> Result<f64> {
    check_tube_params(per0, barrier, ricci, dim)?;
    ensure_finite("t", t)?;
    if t < 0.0 {
        return Err(Error::OutOfRange(format!(
            "tube depths are nonnegative (pick the side instead), got {t}"
        )));
    }
    let n1 = dim - 1.0;
    let k = ricci / n1;
    // Signed curvature seen along this side, and the matching support end.
    let (ceff, lambda) = match side {
        Side::Exterior => (barrier, -barrier / n1),
        Side::Interior => (-barrier, barrier / n1),
    };
    let support = max_domain(k, lambda);
    let cap = t.min(support);
    if cap == 0.0 {
        return Ok(0.0);
    }
    if ricci == 0.0 {
        // ∫ (1 + c u/(dim-1))^{dim-1} du in closed form.
        let integral = if ceff == 0.0 {
            cap
        } else {
            n1 / (ceff * dim) * ((1.0 + ceff * cap / n1).powf(dim) - 1.0)
        };
        return Ok(per0 * integral);
    }
    let signed = match side {
        Side::Exterior => 1.0,
        Side::Interior => -1.0,
    };
    let integral = integrate(&|u| jacobian(barrier, ricci, dim, signed * u), 0.0, cap)?;
    Ok(per0 * integral)
}

/// First and second derivatives of the model Jacobian at zero offset:
/// `J'(0) = barrier` and `J''(0) = -ricci + (dim-2)/(dim-1) · barrier²`.
pub fn jacobian_derivatives_at_zero(barrier: f64, ricci: f64, dim: f64) -> Result<(f64, f64)> {
    check_tube_params(1.0, barrier, ricci, dim)?;
    Ok((
        barrier,
        -ricci + (dim - 2.0) / (dim - 1.0) * barrier * barrier,
    ))
}

/// Tube bound evaluated where it should be an equality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TubeOracle {
    /// Exact model quantity (sphere area at radius `r + t`).
    pub lhs: f64,
    /// The tube perimeter bound fed with the sphere's own data at radius `r`.
    pub rhs: f64,
    /// `rhs - lhs`; vanishes up to rounding when the bound is sharp.
    pub gap: f64,
}

/// Evaluate the tube perimeter bound on a geodesic sphere of radius `r` in
/// the constant-curvature model `(ricci, dim)` at offset `t` (negative `t`
/// shrinks the sphere). The bound is sharp there, so `gap` is pure
/// numerical error.
pub fn model_ball_tube_oracle(ricci: f64, dim: f64, r: f64, t: f64) -> Result<TubeOracle> {
    let params = ComparisonParams::new(ricci, dim)?;
    ensure_finite("r", r)?;
    ensure_finite("t", t)?;
    if !(r > 0.0) {
        return Err(Error::OutOfRange(format!("sphere radius must be > 0, got {r}")));
    }
    if !(r + t > 0.0) {
        return Err(Error::OutOfRange(format!(
            "offset sphere radius r + t = {} must stay positive",
            r + t
        )));
    }
    let diam = params.model_diameter();
    if r + t > diam * (1.0 - 1e-9) || r > diam * (1.0 - 1e-9) {
        return Err(Error::OutOfRange(format!(
            "radii must stay strictly inside the model diameter {diam}"
        )));
    }
    let area_r = model_area(&params, r)?;
    let area_rt = model_area(&params, r + t)?;
    let k = params.sectional();
    let sn_r = crate::model_space::sin_k(k, r)?;
    let cs_r = crate::model_space::cos_k(k, r)?;
    let barrier = (dim - 1.0) * cs_r / sn_r;
    let rhs = area_r * jacobian(barrier, ricci, dim, t);
    Ok(TubeOracle {
        lhs: area_rt,
        rhs,
        gap: rhs - area_rt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    #[test]
    fn flat_exterior_bound_is_curvature_of_expanding_sphere() {
        // Unit circle in the plane, at distance 1/2 outward: 1/(1 + 1/2).
        let b = laplacian_bound(0.5, 1.0, 0.0, 2.0, Side::Exterior).unwrap();
        assert_relative_eq!(b, 2.0 / 3.0, max_relative = 1e-15);
        // At the hypersurface the bound is the barrier itself.
        let at0 = laplacian_bound(0.0, 1.0, 0.0, 2.0, Side::Exterior).unwrap();
        assert_relative_eq!(at0, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn flat_interior_bound_reflects() {
        // Inside the unit circle at depth 1/2 the bound is 1/(1 - 1/2) = 2.
        let b = laplacian_bound(-0.5, 1.0, 0.0, 2.0, Side::Interior).unwrap();
        assert_relative_eq!(b, 2.0, max_relative = 1e-15);
    }

    #[test]
    fn focal_distances_are_rejected_not_clamped() {
        // Interior focal point of the unit circle is the center (depth 1).
        assert!(laplacian_bound(-1.0, 1.0, 0.0, 2.0, Side::Interior).is_err());
        assert!(laplacian_bound(-0.999, 1.0, 0.0, 2.0, Side::Interior).is_ok());
        // Exterior focal distance with a negative barrier: 1/|c| · (dim-1).
        assert!(laplacian_bound(0.5, -2.0, 0.0, 2.0, Side::Exterior).is_err());
        assert!(laplacian_bound(0.49, -2.0, 0.0, 2.0, Side::Exterior).is_ok());
        // Sphere: focal distance of an equator is a quarter turn.
        assert!(laplacian_bound(FRAC_PI_4, 0.0, 1.0, 2.0, Side::Exterior).is_ok());
        assert!(laplacian_bound(1.6, 0.0, 1.0, 2.0, Side::Exterior).is_err());
    }

    #[test]
    fn sides_constrain_the_sign_of_the_distance() {
        assert!(laplacian_bound(-0.1, 1.0, 0.0, 2.0, Side::Exterior).is_err());
        assert!(laplacian_bound(0.1, 1.0, 0.0, 2.0, Side::Interior).is_err());
        // f = 0 is admissible from both sides and the bounds agree.
        let e = laplacian_bound(0.0, 1.5, -1.0, 3.0, Side::Exterior).unwrap();
        let i = laplacian_bound(0.0, 1.5, -1.0, 3.0, Side::Interior).unwrap();
        assert_relative_eq!(e, i, max_relative = 1e-15);
    }

    #[test]
    fn annulus_bounds_are_exact_for_the_unit_circle() {
        let per0 = 2.0 * PI;
        // Outward tube of depth 1: perimeter 4π, area 3π.
        let per = tube_perimeter_bound(per0, 1.0, 0.0, 2.0, 1.0, Side::Exterior).unwrap();
        assert_relative_eq!(per, 4.0 * PI, max_relative = 1e-12);
        let vol = tube_volume_bound(per0, 1.0, 0.0, 2.0, 1.0, Side::Exterior).unwrap();
        assert_relative_eq!(vol, 3.0 * PI, max_relative = 1e-12);
        // Inward tube of depth 1 fills the disk: area π.
        let vol_in = tube_volume_bound(per0, 1.0, 0.0, 2.0, 1.0, Side::Interior).unwrap();
        assert_relative_eq!(vol_in, PI, max_relative = 1e-12);
        // Deeper inward tubes saturate at the disk.
        let vol_sat = tube_volume_bound(per0, 1.0, 0.0, 2.0, 5.0, Side::Interior).unwrap();
        assert_relative_eq!(vol_sat, PI, max_relative = 1e-12);
    }

    #[test]
    fn interior_perimeter_vanishes_past_the_focal_distance() {
        let per = tube_perimeter_bound(2.0 * PI, 1.0, 0.0, 2.0, 1.5, Side::Interior).unwrap();
        assert_eq!(per, 0.0);
    }

    #[test]
    fn negative_depths_are_rejected() {
        assert!(tube_perimeter_bound(1.0, 0.0, 0.0, 2.0, -0.1, Side::Exterior).is_err());
        assert!(tube_volume_bound(1.0, 0.0, 0.0, 2.0, -0.1, Side::Exterior).is_err());
    }

    #[test]
    fn curved_volume_matches_quadrature_free_cases() {
        // Totally geodesic equator in the unit 2-sphere (barrier 0): the
        // offset circle at depth u has length 2π cos u, so the one-sided
        // tube of depth t has area 2π sin t.
        let vol = tube_volume_bound(2.0 * PI, 0.0, 1.0, 2.0, FRAC_PI_4, Side::Exterior).unwrap();
        assert_relative_eq!(vol, 2.0 * PI * FRAC_PI_4.sin(), max_relative = 1e-10);
        // Full half-sphere: depth π/2 saturates at area 2π.
        let half = tube_volume_bound(2.0 * PI, 0.0, 1.0, 2.0, 10.0, Side::Exterior).unwrap();
        assert_relative_eq!(half, 2.0 * PI, max_relative = 1e-10);
    }

    #[test]
    fn jacobian_derivatives_at_zero_examples() {
        let (d1, d2) = jacobian_derivatives_at_zero(1.0, 0.0, 2.0).unwrap();
        assert_eq!(d1, 1.0);
        assert_eq!(d2, 0.0, "flat two-dimensional jacobian 1 + t is affine");
        let (d1, d2) = jacobian_derivatives_at_zero(2.0, 0.0, 3.0).unwrap();
        assert_eq!(d1, 2.0);
        assert_relative_eq!(d2, 2.0, max_relative = 1e-15); // (1+t)^2 has J'' = 2
        let (_, d2) = jacobian_derivatives_at_zero(0.0, 3.0, 4.0).unwrap();
        assert_eq!(d2, -3.0);
    }

    #[test]
    fn jacobian_derivatives_match_central_differences() {
        let h = 1e-5;
        for &(c, ricci, dim) in &[
            (0.7, 1.0, 2.0),
            (-1.2, -2.0, 3.0),
            (2.0, 0.5, 4.5),
            (0.0, -1.0, 2.5),
        ] {
            let (d1, d2) = jacobian_derivatives_at_zero(c, ricci, dim).unwrap();
            let jm = jacobian(c, ricci, dim, -h);
            let j0 = jacobian(c, ricci, dim, 0.0);
            let jp = jacobian(c, ricci, dim, h);
            assert_abs_diff_eq!(d1, (jp - jm) / (2.0 * h), epsilon = 1e-7);
            assert_abs_diff_eq!(d2, (jp + jm - 2.0 * j0) / (h * h), epsilon = 1e-5);
        }
    }

    #[test]
    fn sphere_cap_oracle_gap_is_rounding_only() {
        let o = model_ball_tube_oracle(1.0, 2.0, FRAC_PI_4, FRAC_PI_4).unwrap();
        assert_relative_eq!(o.lhs, 2.0 * PI, max_relative = 1e-12); // equator length
        assert!(o.gap.abs() <= 1e-10 * o.rhs, "gap {} too large", o.gap);

        let o = model_ball_tube_oracle(0.0, 3.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(o.rhs / (o.rhs - o.gap), 1.0, max_relative = 1e-10);
        assert_relative_eq!(o.lhs, 16.0 * PI, max_relative = 1e-12); // area of radius-2 sphere
    }

    #[test]
    fn oracle_accepts_shrinking_offsets() {
        let o = model_ball_tube_oracle(-1.0, 2.0, 1.0, -0.5).unwrap();
        assert!(o.gap.abs() <= 1e-10 * o.rhs.abs());
    }

    #[test]
    fn oracle_rejects_degenerate_radii() {
        assert!(model_ball_tube_oracle(1.0, 2.0, 2.0, 2.0).is_err(), "beyond the pole");
        assert!(model_ball_tube_oracle(0.0, 2.0, 1.0, -1.0).is_err(), "collapses to a point");
        assert!(model_ball_tube_oracle(0.0, 2.0, 0.0, 1.0).is_err(), "needs r > 0");
    }

    #[test]
    fn volume_derivative_is_perimeter() {
        let h = 1e-6;
        for &side in &[Side::Exterior, Side::Interior] {
            for &(c, ricci, dim, t) in &[(1.0, 1.0, 3.0, 0.4), (-0.5, -1.0, 2.0, 0.8)] {
                let vp = tube_volume_bound(3.0, c, ricci, dim, t + h, side).unwrap();
                let vm = tube_volume_bound(3.0, c, ricci, dim, t - h, side).unwrap();
                let per = tube_perimeter_bound(3.0, c, ricci, dim, t, side).unwrap();
                assert_abs_diff_eq!((vp - vm) / (2.0 * h), per, epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn log_derivative_of_perimeter_is_the_laplacian_bound() {
        let h = 1e-6;
        for &(c, ricci, dim, f) in &[(1.0, 1.0, 3.0, 0.3), (0.5, -2.0, 2.5, 0.9)] {
            let pp = tube_perimeter_bound(1.0, c, ricci, dim, f + h, Side::Exterior).unwrap();
            let pm = tube_perimeter_bound(1.0, c, ricci, dim, f - h, Side::Exterior).unwrap();
            let lap = laplacian_bound(f, c, ricci, dim, Side::Exterior).unwrap();
            assert_abs_diff_eq!((pp.ln() - pm.ln()) / (2.0 * h), lap, epsilon = 1e-5);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Flowing for t1 and then restarting from the evolved barrier for
        /// t2 multiplies the Jacobians (the comparison flow is a semigroup).
        #[test]
        fn jacobian_semigroup(
            c in -1.5f64..1.5,
            ricci in -2.0f64..2.0,
            dim in 2.0f64..5.0,
            t1 in 0.01f64..0.4,
            t2 in 0.01f64..0.4,
        ) {
            let k = ricci / (dim - 1.0);
            let end = max_domain(k, -c / (dim - 1.0));
            prop_assume!(t1 + t2 < 0.9 * end);
            let evolved = laplacian_bound(t1, c, ricci, dim, Side::Exterior).unwrap();
            let lhs = jacobian(c, ricci, dim, t1 + t2);
            let rhs = jacobian(c, ricci, dim, t1) * jacobian(evolved, ricci, dim, t2);
            prop_assert!(
                (lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1e-300),
                "semigroup violated: {lhs} vs {rhs}"
            );
        }

        /// The ball oracle is exact across the admissible parameter box.
        #[test]
        fn ball_oracle_gap_vanishes(
            ricci in -1.0f64..1.0,
            dim in 2.0f64..4.0,
            r_frac in 0.1f64..0.6,
            t_frac in 0.0f64..0.35,
        ) {
            let params = ComparisonParams::new(ricci, dim).unwrap();
            let diam = params.model_diameter();
            let scale = if diam.is_finite() { diam } else { 4.0 };
            let o = model_ball_tube_oracle(ricci, dim, r_frac * scale, t_frac * scale).unwrap();
            prop_assert!(o.gap.abs() <= 1e-10 * o.rhs.abs().max(1e-12));
        }
    }
}
