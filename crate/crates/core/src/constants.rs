//! Explicit constants from the quantitative consequences of profile
//! concavity: diameter bounds for isoperimetric regions, their
//! asymptotic-volume-ratio version, and the component-count bound for
//! decompositions.
//!
//! The three ingredients ϑ, v₁, C₁ — a small-volume lower bound
//! `I(v) ≥ ϑ v^{(N-1)/N}`, its validity threshold, and the matching ratio
//! ceiling `I(v)/v^{(N-1)/N} ≤ C₁` — are user inputs; exact presets are
//! provided for cone models (including Euclidean space), where the density
//! constant is the ratio at every volume. The bound functions return the
//! assembled constants verbatim, without sharpening.

use crate::model_space::unit_ball_volume;
use crate::{ensure_finite, Error, Result};

/// Small-volume profile constants: `I(v) ≥ theta·v^{(dim-1)/dim}` and
/// `I(v)/v^{(dim-1)/dim} ≤ c1` for `v ≤ v1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallVolumeConstants {
    theta: f64,
    v1: f64,
    c1: f64,
}

impl SmallVolumeConstants {
    pub fn new(theta: f64, v1: f64, c1: f64) -> Result<Self> {
        ensure_finite("theta", theta)?;
        ensure_finite("v1", v1)?;
        ensure_finite("c1", c1)?;
        for (name, x) in [("theta", theta), ("v1", v1), ("c1", c1)] {
            if !(x > 0.0) {
                return Err(Error::InvalidParam(format!("{name} must be > 0, got {x}")));
            }
        }
        if theta > c1 {
            return Err(Error::InvalidParam(format!(
                "the lower density constant theta = {theta} cannot exceed the ratio \
                 ceiling c1 = {c1}"
            )));
        }
        Ok(Self { theta, v1, c1 })
    }

    /// Exact constants of a cone model with the given volume ratio: the
    /// profile is `theta·v^{(dim-1)/dim}` at every volume, so `theta = c1`
    /// and any positive `v1` is admissible. `avr = 1` is Euclidean space.
    pub fn cone(dim: f64, avr: f64, v1: f64) -> Result<Self> {
        ensure_finite("dim", dim)?;
        ensure_finite("avr", avr)?;
        if !(avr > 0.0 && avr <= 1.0) {
            return Err(Error::OutOfRange(format!(
                "volume ratio must lie in (0, 1], got {avr}"
            )));
        }
        let omega = unit_ball_volume(dim)?;
        let density = dim * (omega * avr).powf(1.0 / dim);
        Self::new(density, v1, density)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn v1(&self) -> f64 {
        self.v1
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }
}

/// Which argument of the min defining the covering radius was active.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinBranch {
    /// `v1^{1/dim}`: the validity threshold caps the radius.
    VolumeCap,
    /// `theta·v_E/(4·I_vE)`: the profile value at `v_E` caps it.
    ProfileRatio,
    /// `theta/(4·c1·v_E^{1/dim})`: the ratio ceiling caps it.
    RatioCeiling,
}

impl MinBranch {
    pub fn label(&self) -> &'static str {
        match self {
            MinBranch::VolumeCap => "volume-cap",
            MinBranch::ProfileRatio => "profile-ratio",
            MinBranch::RatioCeiling => "ratio-ceiling",
        }
    }
}

/// Assembled diameter bound for an isoperimetric region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiameterBound {
    /// `4·(8·dim)^dim·v_E/(theta^dim·r0^{dim-1})`.
    pub bound: f64,
    /// Covering radius `r0` used by the ball-packing argument.
    pub r0: f64,
    /// Which argument of the min determined `r0` (ties go to the earliest).
    pub active_branch: MinBranch,
    /// The simplified form `C·v_E^{1/dim}` with
    /// `C = 4·(8·dim)^dim·4^{dim-1}·omega^{(dim-1)/dim}·c1^{dim-1}/theta^{2·dim-1}`,
    /// reported when the profile-ratio branch is active. It equals `bound`
    /// when `I_vE` sits exactly on the ratio ceiling, and exceeds it when
    /// `I_vE` is below the ceiling.
    pub small_volume_form: Option<f64>,
}

/// Diameter bound for an isoperimetric region of volume `v_E ≤ v1` whose
/// profile value is `i_ve`, from a ball-packing count at the covering
/// radius `r0 = omega^{-1/dim}·min{v1^{1/dim}, theta·v_E/(4·i_ve),
/// theta/(4·c1·v_E^{1/dim})}`.
pub fn diameter_bound(
    dim: f64,
    consts: &SmallVolumeConstants,
    v_e: f64,
    i_ve: f64,
) -> Result<DiameterBound> {
    ensure_finite("dim", dim)?;
    ensure_finite("v_e", v_e)?;
    ensure_finite("i_ve", i_ve)?;
    if !(dim >= 2.0) {
        return Err(Error::InvalidParam(format!(
            "the diameter bound needs dimension at least 2, got {dim}"
        )));
    }
    if !(v_e > 0.0) {
        return Err(Error::InvalidParam(format!("v_e must be > 0, got {v_e}")));
    }
    if !(i_ve > 0.0) {
        return Err(Error::InvalidParam(format!("i_ve must be > 0, got {i_ve}")));
    }
    if v_e > consts.v1 {
        return Err(Error::OutOfRange(format!(
            "the small-volume constants only hold up to v1 = {}, got v_e = {v_e}",
            consts.v1
        )));
    }
    let omega = unit_ball_volume(dim)?;
    let theta = consts.theta;
    let branches = [
        (MinBranch::VolumeCap, consts.v1.powf(1.0 / dim)),
        (MinBranch::ProfileRatio, theta * v_e / (4.0 * i_ve)),
        (
            MinBranch::RatioCeiling,
            theta / (4.0 * consts.c1 * v_e.powf(1.0 / dim)),
        ),
    ];
    let (active_branch, min_val) = branches
        .iter()
        .fold(None::<(MinBranch, f64)>, |acc, &(b, x)| match acc {
            Some((_, best)) if x >= best => acc,
            _ => Some((b, x)),
        })
        .expect("three branches");
    let r0 = omega.powf(-1.0 / dim) * min_val;
    let bound = 4.0 * (8.0 * dim).powf(dim) * v_e / (theta.powf(dim) * r0.powf(dim - 1.0));
    let small_volume_form = if active_branch == MinBranch::ProfileRatio {
        let c_prime = 4.0 * (8.0 * dim).powf(dim) * 4.0f64.powf(dim - 1.0)
            * omega.powf((dim - 1.0) / dim)
            / theta.powf(2.0 * dim - 1.0);
        Some(c_prime * consts.c1.powf(dim - 1.0) * v_e.powf(1.0 / dim))
    } else {
        None
    };
    Ok(DiameterBound {
        bound,
        r0,
        active_branch,
        small_volume_form,
    })
}

/// Volume-ratio diameter bound `C̃·v_E^{1/dim}`, valid for isoperimetric
/// regions of every volume in a nonnegatively curved space whose balls
/// carry at least the fraction `avr` of the Euclidean volume.
///
/// The constant is assembled by rescaling to a reference volume: the
/// space's rescaled unit balls keep measure at least `avr·omega`, whose
/// exact cone constants (`theta = dim·(omega·avr)^{1/dim}`,
/// `c1 = dim·omega^{1/dim}`, renormalized threshold `v1 = 1`) feed
/// [`diameter_bound`] at the small-volume threshold
/// `min{v1, (theta/c1)^{dim/2}} = sqrt(avr)` with the profile taken on the
/// ratio ceiling.
pub fn avr_diameter_bound(dim: f64, avr: f64, v_e: f64) -> Result<f64> {
    ensure_finite("dim", dim)?;
    ensure_finite("avr", avr)?;
    ensure_finite("v_e", v_e)?;
    if !(avr > 0.0 && avr <= 1.0) {
        return Err(Error::OutOfRange(format!(
            "volume ratio must lie in (0, 1], got {avr}"
        )));
    }
    if !(v_e > 0.0) {
        return Err(Error::InvalidParam(format!("v_e must be > 0, got {v_e}")));
    }
    let omega = unit_ball_volume(dim)?;
    let theta = dim * (omega * avr).powf(1.0 / dim);
    let c1 = dim * omega.powf(1.0 / dim);
    let consts = SmallVolumeConstants::new(theta, 1.0, c1)?;
    let v_eval = avr.sqrt();
    let i_eval = c1 * v_eval.powf((dim - 1.0) / dim);
    let d = diameter_bound(dim, &consts, v_eval, i_eval)?;
    let c_tilde = d.bound / v_eval.powf(1.0 / dim);
    Ok(c_tilde * v_e.powf(1.0 / dim))
}

/// How many isoperimetric components a decomposition can have when each
/// carries measure at least `eps` out of `total`: `floor(1 + total/eps)`.
pub fn decomposition_count_bound(total: f64, eps: f64) -> Result<u64> {
    ensure_finite("total", total)?;
    ensure_finite("eps", eps)?;
    if !(total > 0.0) || !(eps > 0.0) {
        return Err(Error::InvalidParam(format!(
            "total and eps must be > 0, got {total} and {eps}"
        )));
    }
    let raw = (1.0 + total / eps).floor();
    if raw >= u64::MAX as f64 {
        return Err(Error::OutOfRange(format!(
            "component count {raw} overflows a 64-bit integer"
        )));
    }
    Ok(raw as u64)
}
