//! Discrete checkers for the sharp differential inequalities satisfied by
//! isoperimetric profiles under a curvature-dimension lower bound.
//!
//! Each checker consumes a [`SampledProfile`], forms difference quotients on
//! a uniform volume grid (non-uniform grids are resampled first with a
//! monotone cubic interpolant, and the report records that), and emits a
//! [`CheckReport`]: one signed residual per interior grid point, oriented so
//! that **nonnegative residual means the inequality holds** at that point.
//! A point passes when its residual is at least `-tol`; the default
//! tolerance `max(1e-9, 10 h² max|f|)` absorbs the second-order truncation
//! error of the quotients, so exact model profiles pass while genuine
//! violations of size ≫ h² fail.
//!
//! Two discretizations of the second derivative are available: plain
//! central differences, and a touching-parabola mode that fits the maximal
//! quadratic lying below the samples in a five-point window — a discrete
//! analogue of testing the inequality against smooth barriers touching from
//! below, which is robust at corners where the profile is only
//! one-sidedly differentiable.
//!
//! The module also provides the algebraic side conditions that accompany
//! the differential inequalities: concavity of power transforms, two-sided
//! density ratio bounds, Lipschitz constants of profile powers, strict
//! subadditivity, and exact min-plus combination of several profiles.

use std::io::Write;

use crate::numerics::{pchip_resample, uniform_step};
use crate::profiles::{small_volume_density_limit, SampledProfile};
use crate::{ensure_finite, fmt_float, Error, Result};

/// Discretization used for first and second derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Central difference quotients on the uniform grid.
    #[default]
    CentralDifference,
    /// Maximal quadratic below the samples in a 5-point window.
    TouchingParabola,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::CentralDifference => "central-difference",
            Method::TouchingParabola => "touching-parabola",
        }
    }

    fn stencil_margin(&self) -> usize {
        match self {
            Method::CentralDifference => 1,
            Method::TouchingParabola => 2,
        }
    }
}

/// Residual of one checked grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckRecord {
    pub v: f64,
    pub residual: f64,
    pub pass: bool,
}

/// Outcome of a pointwise inequality check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub records: Vec<CheckRecord>,
    pub tolerance: f64,
    pub method: Method,
    /// Whether the input was resampled onto a uniform grid first.
    pub resampled: bool,
}

impl CheckReport {
    fn from_residuals(
        points: Vec<(f64, f64)>,
        tolerance: f64,
        method: Method,
        resampled: bool,
    ) -> Self {
        let records = points
            .into_iter()
            .map(|(v, residual)| CheckRecord {
                v,
                residual,
                pass: residual >= -tolerance,
            })
            .collect();
        Self {
            records,
            tolerance,
            method,
            resampled,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn pass_count(&self) -> usize {
        self.records.iter().filter(|r| r.pass).count()
    }

    pub fn fail_count(&self) -> usize {
        self.records.len() - self.pass_count()
    }

    /// Smallest residual and the volume where it occurs (first occurrence).
    pub fn min_residual(&self) -> (f64, f64) {
        let mut best = (f64::NAN, f64::NAN);
        for r in &self.records {
            if best.0.is_nan() || r.residual < best.0 {
                best = (r.residual, r.v);
            }
        }
        best
    }

    /// Tab-separated report: `v`, `residual`, `pass` columns followed by a
    /// `# summary:` trailer line.
    pub fn write_tsv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "v\tresidual\tpass")?;
        for r in &self.records {
            writeln!(w, "{}\t{}\t{}", fmt_float(r.v), fmt_float(r.residual), r.pass)?;
        }
        let (min_res, argmin) = self.min_residual();
        writeln!(
            w,
            "# summary: min_residual={} argmin_v={} pass={} fail={} tol={} method={} resampled={}",
            fmt_float(min_res),
            fmt_float(argmin),
            self.pass_count(),
            self.fail_count(),
            fmt_float(self.tolerance),
            self.method.label(),
            self.resampled
        )
    }

    pub fn to_tsv_string(&self) -> String {
        let mut out = Vec::new();
        self.write_tsv(&mut out).expect("writing to a Vec cannot fail");
        String::from_utf8(out).expect("tsv output is ascii")
    }
}

struct UniformView {
    vols: Vec<f64>,
    vals: Vec<f64>,
    h: f64,
    resampled: bool,
}

/// View the profile on a uniform grid, resampling monotonically if needed.
fn uniform_view(p: &SampledProfile) -> Result<UniformView> {
    let vols = p.volumes();
    if let Some(h) = uniform_step(vols) {
        return Ok(UniformView {
            vols: vols.to_vec(),
            vals: p.values().to_vec(),
            h,
            resampled: false,
        });
    }
    let n = vols.len();
    let v0 = vols[0];
    let v1 = vols[n - 1];
    let h = (v1 - v0) / (n - 1) as f64;
    let grid: Vec<f64> = (0..n)
        .map(|i| {
            if i == n - 1 {
                v1
            } else {
                v0 + h * i as f64
            }
        })
        .collect();
    let vals = pchip_resample(vols, p.values(), &grid);
    if vals.iter().any(|x| !x.is_finite() || *x <= 0.0) {
        return Err(Error::InvalidParam(
            "resampling produced a non-positive profile value".into(),
        ));
    }
    Ok(UniformView {
        vols: grid,
        vals,
        h,
        resampled: true,
    })
}

fn default_tol(h: f64, scale: f64) -> f64 {
    (10.0 * h * h * scale).max(1e-9)
}

fn max_abs(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
}

/// First and second derivative estimates at index `i` of a uniform sequence.
fn derivatives(values: &[f64], i: usize, h: f64, method: Method) -> (f64, f64) {
    match method {
        Method::CentralDifference => {
            let d1 = (values[i + 1] - values[i - 1]) / (2.0 * h);
            let d2 = (values[i + 1] + values[i - 1] - 2.0 * values[i]) / (h * h);
            (d1, d2)
        }
        Method::TouchingParabola => touching_parabola(values, i, h),
    }
}

/// Slope and curvature of the maximal quadratic through `(0, f_i)` lying
/// below the samples at offsets `±h`, `±2h`.
///
/// For each pair of one left and one right offset the curvature is capped by
/// the value at which the two support constraints cross; the least cap is
/// attained, and the crossing determines the slope. With the symmetric
/// nearest pair this reduces exactly to the central difference quotients.
fn touching_parabola(values: &[f64], i: usize, h: f64) -> (f64, f64) {
    let mut best_gamma = f64::INFINITY;
    let mut best_beta = 0.0;
    for l_off in [-1.0f64, -2.0] {
        for r_off in [1.0f64, 2.0] {
            let dl = l_off * h;
            let dr = r_off * h;
            let fl = values[(i as isize + l_off as isize) as usize] - values[i];
            let fr = values[(i as isize + r_off as isize) as usize] - values[i];
            let gamma = 2.0 * (fr * dl - fl * dr) / (dl * dr * (dr - dl));
            if gamma < best_gamma {
                best_gamma = gamma;
                best_beta = (fl - 0.5 * gamma * dl * dl) / dl;
            }
        }
    }
    (best_beta, best_gamma)
}

fn check_common(ricci: f64, dim: f64) -> Result<()> {
    ensure_finite("ricci", ricci)?;
    ensure_finite("dim", dim)?;
    if !(dim > 1.0) {
        return Err(Error::InvalidParam(format!(
            "dimension must exceed 1, got {dim}"
        )));
    }
    Ok(())
}

/// Check the sharp second-order profile inequality
/// `-I'' I ≥ ricci + (I')² / (dim - 1)` pointwise on the sampled profile,
/// with central differences.
pub fn check_bp(
    p: &SampledProfile,
    ricci: f64,
    dim: f64,
    tol: Option<f64>,
) -> Result<CheckReport> {
    check_bp_with(p, ricci, dim, tol, Method::CentralDifference)
}

/// [`check_bp`] with an explicit discretization method.
pub fn check_bp_with(
    p: &SampledProfile,
    ricci: f64,
    dim: f64,
    tol: Option<f64>,
    method: Method,
) -> Result<CheckReport> {
    check_common(ricci, dim)?;
    let view = uniform_view(p)?;
    let m = method.stencil_margin();
    let n = view.vals.len();
    if n < 2 * m + 1 {
        return Err(Error::Grid(format!(
            "profile too short for the {} stencil: {n} points",
            method.label()
        )));
    }
    let tol = tol.unwrap_or_else(|| default_tol(view.h, max_abs(&view.vals)));
    let mut points = Vec::with_capacity(n - 2 * m);
    for i in m..n - m {
        let (d1, d2) = derivatives(&view.vals, i, view.h, method);
        let residual = -d2 * view.vals[i] - ricci - d1 * d1 / (dim - 1.0);
        points.push((view.vols[i], residual));
    }
    Ok(CheckReport::from_residuals(points, tol, method, view.resampled))
}

/// Check the power-transform strengthening: with `ξ = I^{α/(α-1)}`,
/// `-ξ'' ≥ (α/(α-1)) ξ^{(2-α)/α} [ (1/(dim-1) - 1/(α-1)) (I')² + ricci ]`
/// for any exponent `α ≥ dim`. At `α = dim` the gradient term drops out.
pub fn check_bayle(
    p: &SampledProfile,
    ricci: f64,
    dim: f64,
    alpha: f64,
    tol: Option<f64>,
) -> Result<CheckReport> {
    check_bayle_with(p, ricci, dim, alpha, tol, Method::CentralDifference)
}

/// [`check_bayle`] with an explicit discretization method.
pub fn check_bayle_with(
    p: &SampledProfile,
    ricci: f64,
    dim: f64,
    alpha: f64,
    tol: Option<f64>,
    method: Method,
) -> Result<CheckReport> {
    check_common(ricci, dim)?;
    ensure_finite("alpha", alpha)?;
    if !(alpha >= dim) {
        return Err(Error::InvalidParam(format!(
            "exponent alpha must be at least the dimension: {alpha} < {dim}"
        )));
    }
    let view = uniform_view(p)?;
    let m = method.stencil_margin();
    let n = view.vals.len();
    if n < 2 * m + 1 {
        return Err(Error::Grid(format!(
            "profile too short for the {} stencil: {n} points",
            method.label()
        )));
    }
    let e = alpha / (alpha - 1.0);
    let xi: Vec<f64> = view.vals.iter().map(|&y| y.powf(e)).collect();
    let tol = tol.unwrap_or_else(|| default_tol(view.h, max_abs(&xi)));
    let grad_coeff = 1.0 / (dim - 1.0) - 1.0 / (alpha - 1.0);
    let mut points = Vec::with_capacity(n - 2 * m);
    for i in m..n - m {
        let (_, xi_dd) = derivatives(&xi, i, view.h, method);
        let (i_d, _) = derivatives(&view.vals, i, view.h, method);
        let weight = view.vals[i].powf((2.0 - alpha) / (alpha - 1.0));
        let residual = -xi_dd - e * weight * (grad_coeff * i_d * i_d + ricci);
        points.push((view.vols[i], residual));
    }
    Ok(CheckReport::from_residuals(points, tol, method, view.resampled))
}

/// Which power transform [`check_concavity_transform`] should test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConcavityVariant {
    /// `g = I^{dim/(dim-1)} - C v^{(2+dim)/dim}`.
    PowerTransform,
    /// `g = I - C v^{(1+dim)/dim}` (the small-volume variant).
    ShiftedProfile,
}

impl ConcavityVariant {
    pub fn label(&self) -> &'static str {
        match self {
            ConcavityVariant::PowerTransform => "eta",
            ConcavityVariant::ShiftedProfile => "eta-tilde",
        }
    }
}

/// Check concavity (`g'' ≤ 0` up to tolerance) of a corrected power
/// transform of the profile on volumes up to `v1`. Residuals are `-g''`,
/// so nonnegative residuals mean concavity holds.
pub fn check_concavity_transform(
    p: &SampledProfile,
    dim: f64,
    c_const: f64,
    variant: ConcavityVariant,
    v1: f64,
    tol: Option<f64>,
) -> Result<CheckReport> {
    ensure_finite("dim", dim)?;
    ensure_finite("c_const", c_const)?;
    ensure_finite("v1", v1)?;
    if !(dim > 1.0) {
        return Err(Error::InvalidParam(format!(
            "dimension must exceed 1, got {dim}"
        )));
    }
    if !(v1 > 0.0) {
        return Err(Error::OutOfRange(format!("v1 must be > 0, got {v1}")));
    }
    let view = uniform_view(p)?;
    let n = view.vals.len();
    let g: Vec<f64> = match variant {
        ConcavityVariant::PowerTransform => {
            let e = dim / (dim - 1.0);
            let ve = (2.0 + dim) / dim;
            view.vals
                .iter()
                .zip(view.vols.iter())
                .map(|(&y, &v)| y.powf(e) - c_const * v.powf(ve))
                .collect()
        }
        ConcavityVariant::ShiftedProfile => {
            let ve = (1.0 + dim) / dim;
            view.vals
                .iter()
                .zip(view.vols.iter())
                .map(|(&y, &v)| y - c_const * v.powf(ve))
                .collect()
        }
    };
    let tol = tol.unwrap_or_else(|| default_tol(view.h, max_abs(&g)));
    let mut points = Vec::new();
    for i in 1..n - 1 {
        if view.vols[i] > v1 * (1.0 + 1e-12) {
            break;
        }
        let g_dd = (g[i + 1] + g[i - 1] - 2.0 * g[i]) / (view.h * view.h);
        points.push((view.vols[i], -g_dd));
    }
    if points.is_empty() {
        return Err(Error::Grid(format!(
            "no interior grid points at or below v1 = {v1}"
        )));
    }
    Ok(CheckReport::from_residuals(
        points,
        tol,
        Method::CentralDifference,
        view.resampled,
    ))
}

/// The sharp correction constant making the power transform of a profile
/// concave near zero volume under a nonpositive lower bound `ricci`, given
/// a positive lower density bound `theta`. In dimension exactly two the
/// constant is `-ricci`; above two it is
/// `-ricci · dim³ · theta^{(2-dim)/(dim-1)} / (2 (dim-1) (dim+2))`.
pub fn choose_concavity_constant(ricci: f64, dim: f64, theta: f64) -> Result<f64> {
    ensure_finite("ricci", ricci)?;
    ensure_finite("dim", dim)?;
    ensure_finite("theta", theta)?;
    if ricci > 0.0 {
        return Err(Error::OutOfRange(format!(
            "only nonpositive lower bounds are supported, got {ricci}"
        )));
    }
    if !(theta > 0.0) {
        return Err(Error::InvalidParam(format!("theta must be > 0, got {theta}")));
    }
    if dim == 2.0 {
        return Ok(-ricci);
    }
    if !(dim > 2.0) {
        return Err(Error::InvalidParam(format!(
            "dimension must be 2 or larger than 2, got {dim}"
        )));
    }
    Ok(-ricci * dim.powi(3) * theta.powf((2.0 - dim) / (dim - 1.0))
        / (2.0 * (dim - 1.0) * (dim + 2.0)))
}

/// Largest slope of `I^power` between consecutive samples with both
/// endpoints inside `[lo, hi]`.
pub fn lipschitz_constant(p: &SampledProfile, power: f64, lo: f64, hi: f64) -> Result<f64> {
    ensure_finite("power", power)?;
    ensure_finite("lo", lo)?;
    ensure_finite("hi", hi)?;
    if !(power > 0.0) {
        return Err(Error::InvalidParam(format!("power must be > 0, got {power}")));
    }
    if !(lo < hi) {
        return Err(Error::OutOfRange(format!(
            "empty volume range [{lo}, {hi}]"
        )));
    }
    let vols = p.volumes();
    let vals = p.values();
    let mut best: Option<f64> = None;
    for i in 0..vols.len() - 1 {
        if vols[i] >= lo && vols[i + 1] <= hi {
            let slope = (vals[i + 1].powf(power) - vals[i].powf(power)).abs()
                / (vols[i + 1] - vols[i]);
            best = Some(best.map_or(slope, |b: f64| b.max(slope)));
        }
    }
    best.ok_or_else(|| {
        Error::OutOfRange(format!("no grid cells inside the volume range [{lo}, {hi}]"))
    })
}

/// Check the two-sided density bounds `theta ≤ I(v)/v^{(dim-1)/dim} ≤ c1`
/// on volumes up to `v1`. The residual at each point is the lesser of the
/// two one-sided margins.
pub fn check_ratio_bounds(
    p: &SampledProfile,
    dim: f64,
    theta: f64,
    c1: f64,
    v1: f64,
    tol: Option<f64>,
) -> Result<CheckReport> {
    ensure_finite("dim", dim)?;
    ensure_finite("theta", theta)?;
    ensure_finite("c1", c1)?;
    ensure_finite("v1", v1)?;
    if !(dim > 1.0) {
        return Err(Error::InvalidParam(format!(
            "dimension must exceed 1, got {dim}"
        )));
    }
    if !(theta > 0.0 && c1 > 0.0) {
        return Err(Error::InvalidParam(format!(
            "density bounds must be positive, got theta={theta}, c1={c1}"
        )));
    }
    if !(v1 > 0.0) {
        return Err(Error::OutOfRange(format!("v1 must be > 0, got {v1}")));
    }
    let tol = tol.unwrap_or_else(|| 1e-12 * theta.abs().max(c1.abs()).max(1.0));
    let exponent = (dim - 1.0) / dim;
    let mut points = Vec::new();
    for (&v, &y) in p.volumes().iter().zip(p.values().iter()) {
        if v > v1 * (1.0 + 1e-12) {
            break;
        }
        let ratio = y / v.powf(exponent);
        points.push((v, (ratio - theta).min(c1 - ratio)));
    }
    if points.is_empty() {
        return Err(Error::Grid(format!("no grid points at or below v1 = {v1}")));
    }
    Ok(CheckReport::from_residuals(
        points,
        tol,
        Method::CentralDifference,
        false,
    ))
}

/// Small-volume limits of the profile density and of the normalized
/// one-sided derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeAsymptotics {
    /// Extrapolated limit of `I(v) / v^{(dim-1)/dim}` at zero volume.
    pub theta_est: f64,
    /// Extrapolated limit of `I'(v) · v^{1/dim}` at zero volume.
    pub slope_limit_est: f64,
    /// `slope_limit_est / theta_est`; equals `(dim-1)/dim` for the model
    /// spaces with exact small-volume density `theta`.
    pub ratio_of_limits: f64,
}

/// Estimate the zero-volume limits of the density and the normalized slope
/// from the three smallest grid cells.
///
/// Slopes are normalized at the geometric midpoint of each cell, which
/// cancels the leading grid-anisotropy error on geometric grids; the three
/// normalized values are then extrapolated to zero in `x = v^{2/dim}`.
pub fn check_derivative_asymptotics(
    p: &SampledProfile,
    dim: f64,
) -> Result<DerivativeAsymptotics> {
    let density = small_volume_density_limit(p, dim)?;
    if p.len() < 4 {
        return Err(Error::Grid(format!(
            "need at least 4 samples for slope extrapolation, got {}",
            p.len()
        )));
    }
    let vols = p.volumes();
    let vals = p.values();
    let mut xs = [0.0f64; 3];
    let mut ys = [0.0f64; 3];
    for i in 0..3 {
        let mid = (vols[i] * vols[i + 1]).sqrt();
        let slope = (vals[i + 1] - vals[i]) / (vols[i + 1] - vols[i]);
        xs[i] = mid.powf(2.0 / dim);
        ys[i] = slope * mid.powf(1.0 / dim);
    }
    let slope_limit_est = crate::numerics::extrapolate_to_zero(&xs, &ys);
    Ok(DerivativeAsymptotics {
        theta_est: density.limit,
        slope_limit_est,
        ratio_of_limits: slope_limit_est / density.limit,
    })
}

/// One summand of a min-plus combination: which input profile it uses and
/// at which grid volume it is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinPlusPart {
    pub profile: usize,
    pub volume: f64,
}

/// Optimal split of a target volume across the input profiles.
#[derive(Debug, Clone, PartialEq)]
pub struct MinPlusCombination {
    pub value: f64,
    pub parts: Vec<MinPlusPart>,
}

struct CombineSetup {
    /// Pointwise-min envelope of the input profiles over the common grid.
    envelope: Vec<f64>,
    /// Which profile attains the envelope (lowest index wins ties).
    source: Vec<usize>,
    /// Common grid volumes.
    vols: Vec<f64>,
    /// Grid start expressed in whole grid steps.
    start_steps: usize,
}

fn combine_setup(profiles: &[&SampledProfile]) -> Result<CombineSetup> {
    if profiles.is_empty() {
        return Err(Error::InvalidParam("no profiles to combine".into()));
    }
    let first = profiles[0];
    let vols = first.volumes();
    for (pi, p) in profiles.iter().enumerate().skip(1) {
        if p.len() != first.len() {
            return Err(Error::Grid(format!(
                "profile {pi} has {} samples but the first has {}",
                p.len(),
                first.len()
            )));
        }
        for (a, b) in vols.iter().zip(p.volumes().iter()) {
            if (a - b).abs() > 1e-12 * a.abs().max(b.abs()) {
                return Err(Error::Grid(format!(
                    "profile {pi} is not on the common volume grid ({a} vs {b})"
                )));
            }
        }
    }
    let h = uniform_step(vols).ok_or_else(|| {
        Error::Grid("min-plus combination requires a uniform volume grid".into())
    })?;
    let steps = vols[0] / h;
    let rounded = steps.round();
    if (steps - rounded).abs() > 1e-6 * rounded.max(1.0) || rounded < 1.0 {
        return Err(Error::Grid(format!(
            "splitting needs the grid start to be a whole number of steps, got {steps} steps"
        )));
    }
    let n = vols.len();
    let mut envelope = vec![f64::INFINITY; n];
    let mut source = vec![0usize; n];
    for (pi, p) in profiles.iter().enumerate() {
        for (i, &y) in p.values().iter().enumerate() {
            if y < envelope[i] {
                envelope[i] = y;
                source[i] = pi;
            }
        }
    }
    Ok(CombineSetup {
        envelope,
        source,
        vols: vols.to_vec(),
        start_steps: rounded as usize,
    })
}

/// Exact min-plus combination at every grid volume simultaneously.
///
/// For each grid volume `v` this minimizes the sum of profile values over
/// all ways to write `v` as a sum of at most `max_parts` grid volumes (with
/// repetition, each part evaluated on whichever input profile is cheapest
/// there). Volume bookkeeping is index-exact: parts sum to the target in
/// whole grid steps, so no floating-point drift can occur. Ties within
/// `1e-12 · max(1, |value|)` are resolved toward fewer parts.
pub fn minplus_combine_all(
    profiles: &[&SampledProfile],
    max_parts: usize,
) -> Result<Vec<MinPlusCombination>> {
    if max_parts == 0 {
        return Err(Error::InvalidParam("max_parts must be at least 1".into()));
    }
    let setup = combine_setup(profiles)?;
    let n = setup.envelope.len();
    let a = setup.start_steps;
    // With t parts the index sums lie in [0, n-1] after subtracting the
    // (t-1)·a offset, so every DP layer has n entries.
    let t_max = max_parts.min(1 + (n - 1) / a);
    // layers[t-1][s] = least total value of t parts whose grid indices sum
    // to s; parents[t-1][s] = (last part index, its profile).
    let mut layers: Vec<Vec<f64>> = Vec::with_capacity(t_max);
    let mut parents: Vec<Vec<(u32, u32)>> = Vec::with_capacity(t_max);
    layers.push(setup.envelope.clone());
    parents.push(
        (0..n)
            .map(|i| (i as u32, setup.source[i] as u32))
            .collect(),
    );
    for t in 2..=t_max {
        let prev = &layers[t - 2];
        let mut layer = vec![f64::INFINITY; n];
        let mut parent = vec![(0u32, 0u32); n];
        // Largest useful sum: s = j - (t-1) a for some j ≤ n-1.
        let s_hi = n - 1 - (t - 1) * a;
        for (s, slot) in layer.iter_mut().enumerate().take(s_hi + 1) {
            for i in 0..=s.min(n - 1) {
                let cand = prev[s - i] + setup.envelope[i];
                if cand < *slot {
                    *slot = cand;
                    parent[s] = (i as u32, setup.source[i] as u32);
                }
            }
        }
        layers.push(layer);
        parents.push(parent);
    }
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let mut best_val = layers[0][j];
        let mut best_t = 1usize;
        for t in 2..=t_max {
            let Some(sigma) = j.checked_sub((t - 1) * a) else {
                break;
            };
            let cand = layers[t - 1][sigma];
            let tie = 1e-12 * best_val.abs().max(1.0);
            if cand < best_val - tie {
                best_val = cand;
                best_t = t;
            }
        }
        let mut parts = Vec::with_capacity(best_t);
        let mut sigma = j - (best_t - 1) * a;
        for t in (1..=best_t).rev() {
            let (idx, prof) = parents[t - 1][sigma];
            parts.push(MinPlusPart {
                profile: prof as usize,
                volume: setup.vols[idx as usize],
            });
            sigma -= idx as usize;
        }
        parts.sort_by(|x, y| {
            x.volume
                .total_cmp(&y.volume)
                .then(x.profile.cmp(&y.profile))
        });
        out.push(MinPlusCombination {
            value: best_val,
            parts,
        });
    }
    Ok(out)
}

/// Min-plus combination at a single grid volume `v` (which must coincide
/// with a point of the common grid to within `1e-9` relative error).
pub fn minplus_combine(
    profiles: &[&SampledProfile],
    v: f64,
    max_parts: usize,
) -> Result<MinPlusCombination> {
    ensure_finite("v", v)?;
    let all = minplus_combine_all(profiles, max_parts)?;
    let vols = profiles[0].volumes();
    let j = match vols.binary_search_by(|x| x.total_cmp(&v)) {
        Ok(j) => j,
        Err(ins) => {
            let candidates = [ins.checked_sub(1), (ins < vols.len()).then_some(ins)];
            let mut found = None;
            for j in candidates.into_iter().flatten() {
                if (vols[j] - v).abs() <= 1e-9 * v.abs().max(vols[j].abs()) {
                    found = Some(j);
                    break;
                }
            }
            found.ok_or_else(|| {
                Error::Grid(format!("target volume {v} is not a point of the grid"))
            })?
        }
    };
    Ok(all.into_iter().nth(j).expect("index in range"))
}

/// Outcome of the strict subadditivity scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubadditivityReport {
    /// Whether `I(a) + I(b) > I(a+b)` held strictly for every tested pair.
    pub strict: bool,
    /// First violating pair of volumes, if any.
    pub witness: Option<(f64, f64)>,
    /// Number of pairs examined.
    pub pairs_checked: usize,
}

/// Scan all grid pairs `a + b ≤ eps` for strict subadditivity
/// `I(a) + I(b) > I(a+b)`, with a relative strictness margin of `1e-9`.
/// Requires the same index-exact grid structure as the min-plus search so
/// `a + b` is itself a grid volume.
pub fn check_strict_subadditivity(p: &SampledProfile, eps: f64) -> Result<SubadditivityReport> {
    ensure_finite("eps", eps)?;
    if !(eps > 0.0) {
        return Err(Error::OutOfRange(format!("eps must be > 0, got {eps}")));
    }
    let setup = combine_setup(&[p])?;
    let n = setup.envelope.len();
    let a_steps = setup.start_steps;
    let vals = &setup.envelope;
    let mut pairs_checked = 0usize;
    for i in 0..n {
        if setup.vols[i] * 2.0 > eps {
            break;
        }
        for j in i..n {
            let sum_idx = a_steps + i + j;
            if sum_idx >= n || setup.vols[i] + setup.vols[j] > eps {
                break;
            }
            pairs_checked += 1;
            let lhs = vals[i] + vals[j];
            if !(lhs - vals[sum_idx] > 1e-9 * lhs) {
                return Ok(SubadditivityReport {
                    strict: false,
                    witness: Some((setup.vols[i], setup.vols[j])),
                    pairs_checked,
                });
            }
        }
    }
    if pairs_checked == 0 {
        return Err(Error::Grid(format!(
            "no grid pairs with combined volume at most {eps}"
        )));
    }
    Ok(SubadditivityReport {
        strict: true,
        witness: None,
        pairs_checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{ConeModel, GridSpec, ProfileMeta, SpaceForm};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn sphere_profile(n: usize) -> SampledProfile {
        SpaceForm::new(1.0, 2.0)
            .unwrap()
            .sample_profile(&GridSpec::Uniform {
                v0: 1.0,
                v1: 11.0,
                n,
            })
            .unwrap()
    }

    #[test]
    fn model_profiles_pass_the_sharp_inequality() {
        for &(ricci, dim) in &[(1.0, 2.0), (0.0, 3.0), (-1.0, 2.0), (-2.0, 3.5)] {
            let form = SpaceForm::new(ricci, dim).unwrap();
            let v1 = if form.total_volume().is_finite() {
                0.9 * form.total_volume()
            } else {
                8.0
            };
            let p = form
                .sample_profile(&GridSpec::Uniform {
                    v0: v1 / 100.0,
                    v1,
                    n: 301,
                })
                .unwrap();
            let report = check_bp(&p, ricci, dim, None).unwrap();
            assert!(
                report.all_pass(),
                "model profile must satisfy its own inequality: ricci={ricci} dim={dim}, \
                 min residual {:?}",
                report.min_residual()
            );
        }
    }

    #[test]
    fn deflated_profile_fails_the_inequality() {
        // Scaling a profile by a multiplies -I''I - I'^2 by a^2, so shrinking
        // a sharp positive-curvature profile by 5% drives the residual to
        // (0.95^2 - 1) * K < 0 and the checker must detect that.
        let p = sphere_profile(401);
        let deflated = SampledProfile::new(
            p.volumes().to_vec(),
            p.values().iter().map(|y| 0.95 * y).collect(),
            ProfileMeta::default(),
        )
        .unwrap();
        let report = check_bp(&deflated, 1.0, 2.0, None).unwrap();
        assert!(!report.all_pass(), "deflated profile must fail");
        assert!(report.fail_count() > 0);
    }

    #[test]
    fn residual_is_second_order_in_h() {
        // Central differencing has O(h^2) truncation; shrinking h by 10
        // must shrink the worst residual by roughly 100.
        let form = SpaceForm::new(1.0, 2.0).unwrap();
        let worst = |n: usize| {
            let p = form
                .sample_profile(&GridSpec::Uniform {
                    v0: 1.0,
                    v1: 11.0,
                    n,
                })
                .unwrap();
            let report = check_bp(&p, 1.0, 2.0, Some(1.0)).unwrap();
            report
                .records
                .iter()
                .fold(0.0f64, |m, r| m.max(r.residual.abs()))
        };
        let coarse = worst(101);
        let fine = worst(1001);
        assert!(
            coarse >= 50.0 * fine,
            "residual not O(h^2): coarse {coarse} vs fine {fine}"
        );
    }

    #[test]
    fn touching_parabola_matches_central_on_smooth_data() {
        let p = sphere_profile(201);
        let a = check_bp(&p, 1.0, 2.0, None).unwrap();
        let b = check_bp_with(&p, 1.0, 2.0, None, Method::TouchingParabola).unwrap();
        assert!(b.all_pass());
        // The extremal parabola favors an asymmetric window when the third
        // derivative is nonzero, so agreement with central quotients is
        // first order in the grid step (h = 0.05 here).
        let a_map: std::collections::BTreeMap<u64, f64> = a
            .records
            .iter()
            .map(|r| (r.v.to_bits(), r.residual))
            .collect();
        for r in &b.records {
            if let Some(res_a) = a_map.get(&r.v.to_bits()) {
                assert!(
                    (res_a - r.residual).abs() <= 0.15 * (1.0 + res_a.abs()),
                    "parabola and central disagree at v={}: {} vs {}",
                    r.v,
                    r.residual,
                    res_a
                );
            }
        }
    }

    #[test]
    fn touching_parabola_is_robust_at_corners() {
        // min of two shifted flat profiles has a concave corner; the
        // central second quotient blows up (+inf direction is fine) but the
        // touching parabola stays bounded below at the corner, so the
        // inequality still passes there for the flat bound ricci = 0.
        let plane = SpaceForm::new(0.0, 2.0).unwrap();
        let n = 201;
        let grid = GridSpec::Uniform {
            v0: 0.5,
            v1: 4.5,
            n,
        };
        let p = plane.sample_profile(&grid).unwrap();
        let shifted: Vec<f64> = p
            .volumes()
            .iter()
            .map(|&v| plane.profile(4.0 - 0.6 * (v - 0.5)).unwrap())
            .collect();
        let corner: Vec<f64> = p
            .values()
            .iter()
            .zip(shifted.iter())
            .map(|(&a, &b)| a.min(b))
            .collect();
        let q = SampledProfile::new(p.volumes().to_vec(), corner, ProfileMeta::default()).unwrap();
        let report = check_bp_with(&q, 0.0, 2.0, None, Method::TouchingParabola).unwrap();
        assert!(
            report.all_pass(),
            "corner minimum of flat profiles must pass with the parabola method: {:?}",
            report.min_residual()
        );
    }

    #[test]
    fn bayle_transform_equality_on_the_sphere() {
        // In dimension 2 with alpha = 2 the transform of the closed model's
        // profile is the quadratic 4 pi v - ricci v^2, so central second
        // differences are exact and the residual is pure rounding noise.
        let p = sphere_profile(501);
        let report = check_bayle(&p, 1.0, 2.0, 2.0, None).unwrap();
        assert!(report.all_pass());
        let worst = report
            .records
            .iter()
            .fold(0.0f64, |m, r| m.max(r.residual.abs()));
        assert!(worst <= 1e-6, "expected near-exact equality, got {worst}");
    }

    #[test]
    fn bayle_rejects_small_alpha() {
        let p = sphere_profile(31);
        assert!(check_bayle(&p, 1.0, 2.0, 1.5, None).is_err());
    }

    #[test]
    fn bayle_passes_for_larger_alpha_on_models() {
        let form = SpaceForm::new(-1.0, 3.0).unwrap();
        let p = form
            .sample_profile(&GridSpec::Uniform {
                v0: 0.5,
                v1: 20.5,
                n: 401,
            })
            .unwrap();
        for &alpha in &[3.0, 4.0, 7.5] {
            let report = check_bayle(&p, -1.0, 3.0, alpha, None).unwrap();
            assert!(
                report.all_pass(),
                "alpha={alpha}: min residual {:?}",
                report.min_residual()
            );
        }
    }

    #[test]
    fn concavity_constant_examples() {
        assert_relative_eq!(
            choose_concavity_constant(-1.0, 3.0, 1.0).unwrap(),
            1.35,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            choose_concavity_constant(-2.0, 2.0, 0.7).unwrap(),
            2.0,
            max_relative = 1e-15
        );
        assert_eq!(choose_concavity_constant(0.0, 5.0, 1.0).unwrap(), 0.0);
        assert!(choose_concavity_constant(1.0, 3.0, 1.0).is_err());
        assert!(choose_concavity_constant(-1.0, 1.5, 1.0).is_err());
        assert!(choose_concavity_constant(-1.0, 3.0, 0.0).is_err());
    }

    #[test]
    fn flat_profile_power_transform_is_concave() {
        // Flat plane: I^2 = 4 pi v is linear, hence concave with C = 0.
        let plane = SpaceForm::new(0.0, 2.0).unwrap();
        let p = plane
            .sample_profile(&GridSpec::Uniform {
                v0: 0.1,
                v1: 5.0,
                n: 200,
            })
            .unwrap();
        let report = check_concavity_transform(
            &p,
            2.0,
            0.0,
            ConcavityVariant::PowerTransform,
            5.0,
            None,
        )
        .unwrap();
        assert!(report.all_pass());
    }

    #[test]
    fn hyperbolic_profile_needs_the_correction_term() {
        // Without the correction the transform of the hyperbolic profile is
        // strictly convex near zero; with the chosen constant it passes.
        let hyp = SpaceForm::new(-1.0, 2.0).unwrap();
        let p = hyp
            .sample_profile(&GridSpec::Uniform {
                v0: 0.005,
                v1: 1.0,
                n: 400,
            })
            .unwrap();
        let bad = check_concavity_transform(
            &p,
            2.0,
            0.0,
            ConcavityVariant::PowerTransform,
            1.0,
            Some(1e-9),
        )
        .unwrap();
        assert!(!bad.all_pass(), "uncorrected transform must fail");
        let c = choose_concavity_constant(-1.0, 2.0, 1.0).unwrap();
        let good =
            check_concavity_transform(&p, 2.0, c, ConcavityVariant::PowerTransform, 1.0, None)
                .unwrap();
        assert!(
            good.all_pass(),
            "corrected transform must pass: {:?}",
            good.min_residual()
        );
    }

    #[test]
    fn ratio_bounds_on_the_flat_cone() {
        let cone = ConeModel::new(2.0, 1.0).unwrap();
        let p = cone
            .sample_profile(&GridSpec::Geometric {
                v0: 1e-6,
                v1: 1.0,
                n: 50,
            })
            .unwrap();
        let theta = cone.density_constant();
        let good = check_ratio_bounds(&p, 2.0, theta - 1e-9, theta + 1e-9, 1.0, None).unwrap();
        assert!(good.all_pass());
        let bad = check_ratio_bounds(&p, 2.0, 4.0, 5.0, 1.0, None).unwrap();
        assert!(!bad.all_pass(), "theta above the true density must fail");
    }

    #[test]
    fn lipschitz_constant_of_squared_flat_profile() {
        // (I^2)' = 4 pi exactly on the flat plane.
        let plane = SpaceForm::new(0.0, 2.0).unwrap();
        let p = plane
            .sample_profile(&GridSpec::Uniform {
                v0: 1.0,
                v1: 2.0,
                n: 101,
            })
            .unwrap();
        let l = lipschitz_constant(&p, 2.0, 1.0, 2.0).unwrap();
        assert_relative_eq!(l, 4.0 * PI, max_relative = 1e-9);
        assert!(lipschitz_constant(&p, 2.0, 5.0, 6.0).is_err());
    }

    #[test]
    fn derivative_asymptotics_recovers_cone_limits() {
        let cone = ConeModel::new(3.0, 0.4).unwrap();
        let p = cone
            .sample_profile(&GridSpec::Geometric {
                v0: 1e-9,
                v1: 1.0,
                n: 200,
            })
            .unwrap();
        let out = check_derivative_asymptotics(&p, 3.0).unwrap();
        assert_relative_eq!(out.theta_est, cone.density_constant(), max_relative = 1e-8);
        // The slope estimator carries an O((ratio-1)^2) grid bias; with
        // ratio ≈ 1.11 it sits well inside 1e-3.
        assert_relative_eq!(out.ratio_of_limits, 2.0 / 3.0, max_relative = 1e-3);
    }

    fn grid_profile(values: &[f64], v0: f64, h: f64) -> SampledProfile {
        let vols: Vec<f64> = (0..values.len()).map(|i| v0 + h * i as f64).collect();
        SampledProfile::new(vols, values.to_vec(), ProfileMeta::default()).unwrap()
    }

    #[test]
    fn minplus_single_part_on_strictly_subadditive_profile() {
        // Flat-plane profile is strictly subadditive, so one part is optimal.
        let plane = SpaceForm::new(0.0, 2.0).unwrap();
        let h = 0.125;
        let vals: Vec<f64> = (1..=40).map(|i| plane.profile(h * i as f64).unwrap()).collect();
        let p = grid_profile(&vals, h, h);
        let c = minplus_combine(&[&p], 3.0, 3).unwrap();
        assert_eq!(c.parts.len(), 1, "subadditive profile must not split: {c:?}");
        assert_relative_eq!(c.value, plane.profile(3.0).unwrap(), max_relative = 1e-13);
    }

    #[test]
    fn minplus_splits_a_superadditive_profile() {
        // I(v) = v^2 on {h, 2h, ...}: superadditive, so the best split uses
        // as many smallest parts as allowed.
        let h = 0.25;
        let vals: Vec<f64> = (1..=20).map(|i| (h * i as f64).powi(2)).collect();
        let p = grid_profile(&vals, h, h);
        let c = minplus_combine(&[&p], 1.0, 2).unwrap();
        // Split 1.0 = 0.5 + 0.5: value 2 * 0.25 = 0.5 < 1.0.
        assert_eq!(c.parts.len(), 2);
        assert_relative_eq!(c.value, 0.5, max_relative = 1e-13);
        for part in &c.parts {
            assert_relative_eq!(part.volume, 0.5, max_relative = 1e-13);
        }
        // With four parts allowed: 4 * (0.25)^2 = 0.25.
        let c4 = minplus_combine(&[&p], 1.0, 4).unwrap();
        assert_eq!(c4.parts.len(), 4);
        assert_relative_eq!(c4.value, 0.25, max_relative = 1e-13);
    }

    #[test]
    fn minplus_brute_force_cross_check() {
        // Deterministic pseudo-random values; brute force over all splits
        // into at most 3 parts must agree with the DP.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let n = 18usize;
        let h = 0.5;
        let vals: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..3.0)).collect();
        let p = grid_profile(&vals, h, h);
        let all = minplus_combine_all(&[&p], 3).unwrap();
        // Brute force in index space: target j uses parts i1 [+ i2 [+ i3]]
        // with (i1+1)+(i2+1)+... = j+1 in units of h.
        for j in 0..n {
            let mut best = vals[j];
            let m = j + 1; // mass in grid steps
            for i1 in 0..n {
                let m1 = i1 + 1;
                if m1 >= m {
                    continue;
                }
                let rest = m - m1;
                if rest >= 1 && rest <= n {
                    best = best.min(vals[i1] + vals[rest - 1]);
                }
                for i2 in 0..n {
                    let m2 = i2 + 1;
                    if m1 + m2 >= m {
                        continue;
                    }
                    let r3 = m - m1 - m2;
                    if r3 >= 1 && r3 <= n {
                        best = best.min(vals[i1] + vals[i2] + vals[r3 - 1]);
                    }
                }
            }
            assert_relative_eq!(all[j].value, best, max_relative = 1e-12);
        }
    }

    #[test]
    fn minplus_envelope_uses_cheapest_profile() {
        let h = 0.5;
        let a: Vec<f64> = (1..=10).map(|i| 1.0 + 0.1 * i as f64).collect();
        let b: Vec<f64> = (1..=10).map(|i| 2.0 - 0.05 * i as f64).collect();
        let pa = grid_profile(&a, h, h);
        let pb = grid_profile(&b, h, h);
        let c = minplus_combine(&[&pa, &pb], 0.5, 1).unwrap();
        assert_eq!(c.parts[0].profile, 0);
        assert_relative_eq!(c.value, 1.1, max_relative = 1e-13);
        let c_last = minplus_combine(&[&pa, &pb], 5.0, 1).unwrap();
        assert_eq!(c_last.parts[0].profile, 1, "second profile cheaper at the top");
    }

    #[test]
    fn minplus_rejects_bad_grids() {
        let vals = vec![1.0, 2.0, 3.0];
        let p = SampledProfile::new(vec![0.3, 0.5, 0.9], vals.clone(), ProfileMeta::default())
            .unwrap();
        assert!(matches!(
            minplus_combine(&[&p], 0.5, 2),
            Err(Error::Grid(_))
        ));
        // Uniform but the start is not a whole number of steps.
        let q = SampledProfile::new(vec![0.3, 0.5, 0.7], vals.clone(), ProfileMeta::default())
            .unwrap();
        assert!(matches!(
            minplus_combine(&[&q], 0.5, 2),
            Err(Error::Grid(_))
        ));
        // Off-grid target volume.
        let r = SampledProfile::new(vec![0.5, 1.0, 1.5], vals, ProfileMeta::default()).unwrap();
        assert!(matches!(
            minplus_combine(&[&r], 0.75, 2),
            Err(Error::Grid(_))
        ));
    }

    #[test]
    fn subadditivity_of_flat_profile_and_its_failure() {
        let plane = SpaceForm::new(0.0, 2.0).unwrap();
        let h = 0.1;
        let vals: Vec<f64> = (1..=50).map(|i| plane.profile(h * i as f64).unwrap()).collect();
        let p = grid_profile(&vals, h, h);
        let report = check_strict_subadditivity(&p, 5.0).unwrap();
        assert!(report.strict);
        assert!(report.witness.is_none());
        assert!(report.pairs_checked > 100);

        // v^2 is superadditive: the very first pair violates.
        let sq: Vec<f64> = (1..=50).map(|i| (h * i as f64).powi(2)).collect();
        let q = grid_profile(&sq, h, h);
        let bad = check_strict_subadditivity(&q, 5.0).unwrap();
        assert!(!bad.strict);
        assert_eq!(bad.witness, Some((0.1, 0.1)));
    }

    #[test]
    fn subadditivity_needs_reachable_pairs() {
        let p = grid_profile(&[1.0, 1.4, 1.7], 1.0, 1.0);
        assert!(matches!(
            check_strict_subadditivity(&p, 1.5),
            Err(Error::Grid(_))
        ));
    }

    #[test]
    fn tsv_report_shape() {
        let p = sphere_profile(11);
        let report = check_bp(&p, 1.0, 2.0, None).unwrap();
        let text = report.to_tsv_string();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("v\tresidual\tpass"));
        let body: Vec<&str> = text.lines().skip(1).collect();
        assert_eq!(body.len(), report.records.len() + 1);
        let summary = body.last().unwrap();
        assert!(summary.starts_with("# summary: min_residual="));
        assert!(summary.contains(" tol="));
        assert!(summary.contains(" method=central-difference"));
        assert!(summary.contains(" resampled=false"));
        for row in &body[..body.len() - 1] {
            let fields: Vec<&str> = row.split('\t').collect();
            assert_eq!(fields.len(), 3);
            fields[0].parse::<f64>().unwrap();
            fields[1].parse::<f64>().unwrap();
            assert!(fields[2] == "true" || fields[2] == "false");
        }
    }

    #[test]
    fn geometric_grids_are_resampled() {
        let plane = SpaceForm::new(0.0, 2.0).unwrap();
        let p = plane
            .sample_profile(&GridSpec::Geometric {
                v0: 1.0,
                v1: 4.0,
                n: 101,
            })
            .unwrap();
        let report = check_bp(&p, 0.0, 2.0, None).unwrap();
        assert!(report.resampled);
        assert!(
            report.all_pass(),
            "resampled flat profile passes: {:?}",
            report.min_residual()
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        /// The min-plus value never exceeds the single-part value and is
        /// monotone nonincreasing in max_parts.
        #[test]
        fn minplus_value_monotone_in_parts(seed in 0u64..1000) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = 12usize;
            let h = 0.25;
            let vals: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..2.0)).collect();
            let p = grid_profile(&vals, h, h);
            let one = minplus_combine_all(&[&p], 1).unwrap();
            let two = minplus_combine_all(&[&p], 2).unwrap();
            let four = minplus_combine_all(&[&p], 4).unwrap();
            for j in 0..n {
                prop_assert!(one[j].value >= two[j].value - 1e-12);
                prop_assert!(two[j].value >= four[j].value - 1e-12);
                prop_assert!((one[j].value - vals[j]).abs() <= 1e-12);
                // Parts always sum to the target volume exactly in index space.
                for c in [&two[j], &four[j]] {
                    let sum: f64 = c.parts.iter().map(|pt| pt.volume).sum();
                    prop_assert!((sum - p.volumes()[j]).abs() <= 1e-9 * sum.abs());
                }
            }
        }

        /// Strict subadditivity implies the min-plus search never splits.
        #[test]
        fn subadditive_implies_no_split(scale in 0.5f64..3.0) {
            let plane = SpaceForm::new(0.0, 2.0).unwrap();
            let h = 0.2;
            let vals: Vec<f64> = (1..=25)
                .map(|i| scale * plane.profile(h * i as f64).unwrap())
                .collect();
            let p = grid_profile(&vals, h, h);
            let report = check_strict_subadditivity(&p, 5.0).unwrap();
            prop_assert!(report.strict);
            let all = minplus_combine_all(&[&p], 3).unwrap();
            for c in &all {
                prop_assert_eq!(c.parts.len(), 1);
            }
        }
    }
}
