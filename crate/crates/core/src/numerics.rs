//! Internal numeric helpers: deterministic adaptive quadrature, monotone
//! piecewise-cubic resampling, polynomial extrapolation to zero, and grid
//! utilities shared by the public modules.

use crate::{Error, Result};

const MAX_QUAD_DEPTH: u32 = 60;

fn simpson(fa: f64, fm: f64, fb: f64, len: f64) -> f64 {
    len / 6.0 * (fa + 4.0 * fm + fb)
}

/// Adaptive Simpson integration of a smooth function over `[a, b]`.
///
/// The subdivision order is fixed (left half before right half), so the
/// result is a deterministic function of the inputs. The absolute tolerance
/// is `1e-15 * (1 + |whole-interval estimate|)` — near machine precision,
/// so downstream consumers may difference the result without inheriting
/// visible quadrature noise. Exceeding the recursion depth before reaching
/// it is reported as [`Error::Quadrature`].
pub(crate) fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    if !(fa.is_finite() && fm.is_finite() && fb.is_finite()) {
        return Err(Error::Quadrature(format!(
            "integrand is not finite on [{a}, {b}]"
        )));
    }
    let whole = simpson(fa, fm, fb, b - a);
    let tol = 1e-15 * (1.0 + whole.abs());
    adapt(f, a, m, b, fa, fm, fb, whole, tol, 0)
}

#[allow(clippy::too_many_arguments)]
fn adapt(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    m: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth >= MAX_QUAD_DEPTH {
        return Err(Error::Quadrature(format!(
            "no convergence after depth {MAX_QUAD_DEPTH} near [{a}, {b}]"
        )));
    }
    let lv = adapt(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth + 1)?;
    let rv = adapt(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth + 1)?;
    Ok(lv + rv)
}

/// Step of an (approximately) uniform strictly increasing grid, or `None`.
///
/// Accepts deviations up to `1e-9 * step` from the exact arithmetic
/// progression through the endpoints, which tolerates accumulated rounding
/// in grids built by closed-form subdivision while rejecting geometric grids.
pub(crate) fn uniform_step(xs: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let n = xs.len();
    let h = (xs[n - 1] - xs[0]) / (n - 1) as f64;
    if !(h > 0.0) {
        return None;
    }
    for (i, &x) in xs.iter().enumerate() {
        if (x - (xs[0] + h * i as f64)).abs() > 1e-9 * h {
            return None;
        }
    }
    Some(h)
}

/// Fritsch–Carlson slopes for a monotonicity-preserving cubic interpolant.
fn pchip_slopes(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    assert!(n >= 2, "pchip needs at least two points");
    let mut h = vec![0.0; n - 1];
    let mut delta = vec![0.0; n - 1];
    for i in 0..n - 1 {
        h[i] = xs[i + 1] - xs[i];
        delta[i] = (ys[i + 1] - ys[i]) / h[i];
    }
    let mut d = vec![0.0; n];
    if n == 2 {
        d[0] = delta[0];
        d[1] = delta[0];
        return d;
    }
    for i in 1..n - 1 {
        if delta[i - 1] * delta[i] <= 0.0 {
            d[i] = 0.0;
        } else {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    d[0] = endpoint_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = endpoint_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

/// One-sided three-point endpoint slope with the standard shape clamps.
fn endpoint_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if s * d0 <= 0.0 {
        0.0
    } else if d0 * d1 < 0.0 && s.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        s
    }
}

/// Evaluate the shape-preserving cubic interpolant of `(xs, ys)` at `x`.
///
/// `x` must lie within `[xs[0], xs[n-1]]`; values are clamped to that range.
fn pchip_eval(xs: &[f64], ys: &[f64], d: &[f64], x: f64) -> f64 {
    let n = xs.len();
    let x = x.clamp(xs[0], xs[n - 1]);
    // Index of the interval [xs[i], xs[i+1]] containing x.
    let i = match xs.partition_point(|&p| p <= x) {
        0 => 0,
        k if k >= n => n - 2,
        k => k - 1,
    };
    let h = xs[i + 1] - xs[i];
    let t = (x - xs[i]) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    h00 * ys[i] + h10 * h * d[i] + h01 * ys[i + 1] + h11 * h * d[i + 1]
}

/// Resample `(xs, ys)` at `new_xs` with the monotone cubic interpolant.
pub(crate) fn pchip_resample(xs: &[f64], ys: &[f64], new_xs: &[f64]) -> Vec<f64> {
    let d = pchip_slopes(xs, ys);
    new_xs.iter().map(|&x| pchip_eval(xs, ys, &d, x)).collect()
}

/// Neville's algorithm: value at `x = 0` of the polynomial through the
/// given points. The nodes must be pairwise distinct.
pub(crate) fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len();
    assert!(n >= 1 && n == ys.len());
    let mut p = ys.to_vec();
    for level in 1..n {
        for i in 0..n - level {
            let xi = xs[i];
            let xj = xs[i + level];
            // P_{i..i+level}(0) from the two overlapping lower-order values.
            p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
        }
    }
    p[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn integrates_polynomials_exactly() {
        // Simpson is exact on cubics; the adaptive wrapper must preserve that.
        let v = integrate(&|x| x * x * x - 2.0 * x + 1.0, -1.0, 3.0).unwrap();
        assert_relative_eq!(v, 16.0, max_relative = 1e-14);
    }

    #[test]
    fn integrates_transcendental_to_tolerance() {
        let v = integrate(&|x| x.sin(), 0.0, std::f64::consts::PI).unwrap();
        assert_relative_eq!(v, 2.0, max_relative = 1e-12);
        let w = integrate(&|x| (-x).exp(), 0.0, 30.0).unwrap();
        assert_relative_eq!(w, 1.0 - (-30.0f64).exp(), max_relative = 1e-11);
    }

    #[test]
    fn integrate_empty_interval_is_zero() {
        assert_eq!(integrate(&|x| x, 2.0, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn integrate_is_deterministic() {
        let f = |x: f64| (x * x).sin() + 1.0;
        let a = integrate(&f, 0.0, 7.0).unwrap();
        let b = integrate(&f, 0.0, 7.0).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn uniform_step_detects_uniform_and_rejects_geometric() {
        let n = 1001usize;
        let xs: Vec<f64> = (0..n).map(|i| 0.5 + 1.5 * i as f64 / (n - 1) as f64).collect();
        let h = uniform_step(&xs).expect("uniform grid must be detected");
        assert_relative_eq!(h, 1.5 / 1000.0, max_relative = 1e-12);

        let gs: Vec<f64> = (0..n)
            .map(|i| 0.5 * (4.0f64).powf(i as f64 / (n - 1) as f64))
            .collect();
        assert!(uniform_step(&gs).is_none(), "geometric grid must be rejected");
    }

    #[test]
    fn pchip_reproduces_data_and_preserves_monotonicity() {
        let xs: Vec<f64> = (0..20).map(|i| (i as f64 / 19.0).powi(2) * 3.0 + 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| x.sqrt() + x).collect();
        let back = pchip_resample(&xs, &ys, &xs);
        for (a, b) in ys.iter().zip(back.iter()) {
            assert_relative_eq!(a, b, max_relative = 1e-13);
        }
        let fine: Vec<f64> = (0..400).map(|i| 0.1 + 3.0 * i as f64 / 399.0).collect();
        let vals = pchip_resample(&xs, &ys, &fine);
        for w in vals.windows(2) {
            assert!(w[1] >= w[0], "interpolant must stay monotone on monotone data");
        }
    }

    #[test]
    fn pchip_is_accurate_on_smooth_data() {
        let xs: Vec<f64> = (0..50).map(|i| 1.0 + i as f64 * 0.05).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| x.ln()).collect();
        let probe: Vec<f64> = (0..97).map(|i| 1.0 + 2.45 * i as f64 / 96.0).collect();
        let vals = pchip_resample(&xs, &ys, &probe);
        // Harmonic-mean slopes are second-order accurate, so the surface
        // error at h = 0.05 sits near 1e-5 — not the 1e-6 of a spline.
        for (&x, &v) in probe.iter().zip(vals.iter()) {
            assert!((v - x.ln()).abs() < 2e-5, "pchip off at x={x}: {v} vs {}", x.ln());
        }
    }

    #[test]
    fn extrapolation_recovers_polynomial_intercept() {
        // y = 7 - 3x + 2x^2 sampled at three nodes: exact intercept 7.
        let xs = [0.3, 0.2, 0.1];
        let ys: Vec<f64> = xs.iter().map(|&x| 7.0 - 3.0 * x + 2.0 * x * x).collect();
        assert_relative_eq!(extrapolate_to_zero(&xs, &ys), 7.0, max_relative = 1e-12);
    }
}
