//! Isoperimetric profiles of model spaces and sampled profile data.
//!
//! [`SpaceForm`] evaluates the exact profile of the simply connected model
//! of constant curvature by inverting the ball-volume function; for a Ricci
//! lower bound `K` and dimension `N` the sectional parameter of the model is
//! `K/(N-1)`. [`ConeModel`] evaluates the profile of a cone normalized by
//! its asymptotic volume ratio, which is exactly homogeneous in the volume.
//! Both sample onto [`GridSpec`] volume grids, producing a
//! [`SampledProfile`]: strictly increasing positive volumes paired with
//! positive profile values, plus optional provenance metadata. Sampled
//! profiles round-trip through a two-column CSV format (`v,I`, one header
//! line, 17-significant-digit floats) and support one-sided derivative
//! brackets and small-volume extrapolation of the profile density.

use std::io::{BufRead, Write};

use crate::model_space::{model_area, model_volume, sin_k_raw, ComparisonParams};
use crate::numerics::extrapolate_to_zero;
use crate::{ensure_finite, fmt_float, Error, Result};

/// Relative margin below the total volume of a closed model within which
/// `radius_for_volume` refuses to invert (the profile degenerates there).
const VOLUME_CAP_MARGIN: f64 = 1e-9;

/// The simply connected model space of a curvature-dimension pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceForm {
    params: ComparisonParams,
    total_volume: f64,
}

impl SpaceForm {
    /// Model space for Ricci lower bound `ricci` in real dimension `dim > 1`.
    pub fn new(ricci: f64, dim: f64) -> Result<Self> {
        let params = ComparisonParams::new(ricci, dim)?;
        let total_volume = if params.sectional() > 0.0 {
            model_volume(&params, params.model_diameter())?
        } else {
            f64::INFINITY
        };
        Ok(Self {
            params,
            total_volume,
        })
    }

    pub fn params(&self) -> &ComparisonParams {
        &self.params
    }

    /// Total volume of the model; `+inf` for non-positive curvature.
    pub fn total_volume(&self) -> f64 {
        self.total_volume
    }

    fn check_volume(&self, v: f64) -> Result<()> {
        ensure_finite("v", v)?;
        if !(v > 0.0) {
            return Err(Error::OutOfRange(format!("volume must be > 0, got {v}")));
        }
        if self.total_volume.is_finite() && v > self.total_volume * (1.0 - VOLUME_CAP_MARGIN) {
            return Err(Error::OutOfRange(format!(
                "volume {v} is not below the total model volume {}",
                self.total_volume
            )));
        }
        Ok(())
    }

    /// Radius of the geodesic ball with volume `v`, solved to roughly
    /// machine precision in the volume (far tighter than `1e-12 · v`).
    pub fn radius_for_volume(&self, v: f64) -> Result<f64> {
        self.check_volume(v)?;
        let p = &self.params;
        let diam = p.model_diameter();
        // Bracket the root: volume is strictly increasing in the radius.
        let mut hi = if diam.is_finite() {
            diam
        } else {
            let mut guess = (v / p.omega_n()).powf(1.0 / p.dim()).max(1.0);
            let mut tries = 0;
            while model_volume(p, guess)? < v {
                guess *= 2.0;
                tries += 1;
                if tries > 200 {
                    return Err(Error::OutOfRange(format!(
                        "failed to bracket the radius for volume {v}"
                    )));
                }
            }
            guess
        };
        let mut lo = 0.0f64;
        // Euclidean initial guess, clamped inside the bracket.
        let mut r = (v / p.omega_n())
            .powf(1.0 / p.dim())
            .clamp(hi * 1e-12, hi * (1.0 - 1e-12));
        let mut best_r = r;
        let mut best_err = f64::INFINITY;
        for _ in 0..200 {
            let f = model_volume(p, r)? - v;
            if f.abs() < best_err {
                best_err = f.abs();
                best_r = r;
            }
            // The volume itself carries ~1e-15 relative evaluation noise, so
            // asking for less than a few epsilon would spin forever.
            if f.abs() <= 8.0 * f64::EPSILON * (1.0 + v) {
                break;
            }
            if f > 0.0 {
                hi = r;
            } else {
                lo = r;
            }
            if hi - lo <= f64::EPSILON * hi {
                break;
            }
            let area = model_area(p, r)?;
            let mut next = if area > 0.0 { r - f / area } else { f64::NAN };
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - r).abs() <= f64::EPSILON * r.abs() {
                break;
            }
            r = next;
        }
        Ok(best_r)
    }

    /// Isoperimetric profile of the model: boundary area of the ball with
    /// the given volume.
    pub fn profile(&self, v: f64) -> Result<f64> {
        let r = self.radius_for_volume(v)?;
        model_area(&self.params, r)
    }

    /// Generalized mean curvature of the ball with volume `v`:
    /// `(dim - 1) cos_k(r) / sin_k(r)` at the matching radius, with
    /// `k = ricci/(dim-1)`. Negative beyond the equator of a closed model.
    pub fn barrier(&self, v: f64) -> Result<f64> {
        let r = self.radius_for_volume(v)?;
        let k = self.params.sectional();
        let s = sin_k_raw(k, r);
        if s <= 0.0 {
            return Err(Error::OutOfRange(format!(
                "no mean-curvature barrier at radius {r}"
            )));
        }
        Ok((self.params.dim() - 1.0) * crate::model_space::cos_k_raw(k, r) / s)
    }

    /// Sample the profile on a volume grid.
    pub fn sample_profile(&self, grid: &GridSpec) -> Result<SampledProfile> {
        let volumes = grid.points()?;
        let mut values = Vec::with_capacity(volumes.len());
        for &v in &volumes {
            values.push(self.profile(v)?);
        }
        SampledProfile::new(
            volumes,
            values,
            ProfileMeta {
                ricci: Some(self.params.ricci()),
                dim: Some(self.params.dim()),
                total_volume: self.total_volume.is_finite().then_some(self.total_volume),
                ..ProfileMeta::default()
            },
        )
    }
}

/// A Euclidean metric cone normalized by its asymptotic volume ratio
/// `avr ∈ (0, 1]`; `avr = 1` recovers flat space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeModel {
    dim: f64,
    avr: f64,
    omega_n: f64,
}

impl ConeModel {
    pub fn new(dim: f64, avr: f64) -> Result<Self> {
        ensure_finite("dim", dim)?;
        ensure_finite("avr", avr)?;
        if !(dim > 1.0) {
            return Err(Error::InvalidParam(format!(
                "dimension must exceed 1, got {dim}"
            )));
        }
        if !(avr > 0.0 && avr <= 1.0) {
            return Err(Error::InvalidParam(format!(
                "asymptotic volume ratio must lie in (0, 1], got {avr}"
            )));
        }
        Ok(Self {
            dim,
            avr,
            omega_n: crate::model_space::unit_ball_volume(dim)?,
        })
    }

    pub fn dim(&self) -> f64 {
        self.dim
    }

    pub fn avr(&self) -> f64 {
        self.avr
    }

    /// The sharp density constant `dim · (ω_dim · avr)^{1/dim}`: the profile
    /// equals this constant times `v^{(dim-1)/dim}`.
    pub fn density_constant(&self) -> f64 {
        self.dim * (self.omega_n * self.avr).powf(1.0 / self.dim)
    }

    /// Exact cone profile at volume `v > 0`.
    pub fn profile(&self, v: f64) -> Result<f64> {
        ensure_finite("v", v)?;
        if !(v > 0.0) {
            return Err(Error::OutOfRange(format!("volume must be > 0, got {v}")));
        }
        Ok(self.density_constant() * v.powf((self.dim - 1.0) / self.dim))
    }

    /// Sample the cone profile on a volume grid.
    pub fn sample_profile(&self, grid: &GridSpec) -> Result<SampledProfile> {
        let volumes = grid.points()?;
        let mut values = Vec::with_capacity(volumes.len());
        for &v in &volumes {
            values.push(self.profile(v)?);
        }
        SampledProfile::new(
            volumes,
            values,
            ProfileMeta {
                dim: Some(self.dim),
                ball_volume_bound: Some(self.avr * self.omega_n),
                ..ProfileMeta::default()
            },
        )
    }
}

/// A strictly increasing volume grid, described by its endpoints and count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridSpec {
    /// Arithmetic progression from `v0` to `v1` with `n` points.
    Uniform { v0: f64, v1: f64, n: usize },
    /// Geometric progression from `v0` to `v1` with `n` points.
    Geometric { v0: f64, v1: f64, n: usize },
}

impl GridSpec {
    /// Parse `"uniform:v0:v1:n"` or `"geometric:v0:v1:n"`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(Error::Grid(format!(
                "grid argument must have 4 colon-separated fields, got {:?}",
                s
            )));
        }
        let v0: f64 = parts[1]
            .parse()
            .map_err(|_| Error::Grid(format!("bad grid start {:?}", parts[1])))?;
        let v1: f64 = parts[2]
            .parse()
            .map_err(|_| Error::Grid(format!("bad grid end {:?}", parts[2])))?;
        let n: usize = parts[3]
            .parse()
            .map_err(|_| Error::Grid(format!("bad grid count {:?}", parts[3])))?;
        let grid = match parts[0] {
            "uniform" => GridSpec::Uniform { v0, v1, n },
            "geometric" => GridSpec::Geometric { v0, v1, n },
            other => {
                return Err(Error::Grid(format!(
                    "unknown grid kind {other:?} (expected uniform or geometric)"
                )))
            }
        };
        grid.validate()?;
        Ok(grid)
    }

    fn fields(&self) -> (f64, f64, usize) {
        match *self {
            GridSpec::Uniform { v0, v1, n } | GridSpec::Geometric { v0, v1, n } => (v0, v1, n),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (v0, v1, n) = self.fields();
        ensure_finite("v0", v0)?;
        ensure_finite("v1", v1)?;
        if !(v0 > 0.0) {
            return Err(Error::Grid(format!("grid start must be > 0, got {v0}")));
        }
        if !(v1 > v0) {
            return Err(Error::Grid(format!(
                "grid end must exceed the start, got [{v0}, {v1}]"
            )));
        }
        if n < 3 {
            return Err(Error::Grid(format!("grid needs at least 3 points, got {n}")));
        }
        Ok(())
    }

    /// Materialize the grid points; both endpoints are hit exactly.
    pub fn points(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let (v0, v1, n) = self.fields();
        let last = n - 1;
        let pts: Vec<f64> = match *self {
            GridSpec::Uniform { .. } => (0..n)
                .map(|i| {
                    if i == 0 {
                        v0
                    } else if i == last {
                        v1
                    } else {
                        v0 + (v1 - v0) * (i as f64 / last as f64)
                    }
                })
                .collect(),
            GridSpec::Geometric { .. } => {
                let log_ratio = (v1 / v0).ln();
                (0..n)
                    .map(|i| {
                        if i == 0 {
                            v0
                        } else if i == last {
                            v1
                        } else {
                            v0 * (log_ratio * (i as f64 / last as f64)).exp()
                        }
                    })
                    .collect()
            }
        };
        for w in pts.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::Grid(format!(
                    "grid too dense: consecutive points {} and {} collide",
                    w[0], w[1]
                )));
            }
        }
        Ok(pts)
    }
}

/// Optional provenance carried by a sampled profile.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ProfileMeta {
    /// Ricci lower bound of the source, when known.
    pub ricci: Option<f64>,
    /// Dimension of the source, when known.
    pub dim: Option<f64>,
    /// Lower bound on unit-ball volumes of the source, when known.
    pub ball_volume_bound: Option<f64>,
    /// Total volume of the source space, when finite and known.
    pub total_volume: Option<f64>,
}

/// A profile sampled on a strictly increasing positive volume grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledProfile {
    volumes: Vec<f64>,
    values: Vec<f64>,
    meta: ProfileMeta,
}

impl SampledProfile {
    /// Validate and build: at least 3 samples, volumes strictly increasing
    /// and positive, values positive and finite.
    pub fn new(volumes: Vec<f64>, values: Vec<f64>, meta: ProfileMeta) -> Result<Self> {
        if volumes.len() != values.len() {
            return Err(Error::InvalidParam(format!(
                "volume and value counts differ: {} vs {}",
                volumes.len(),
                values.len()
            )));
        }
        if volumes.len() < 3 {
            return Err(Error::Grid(format!(
                "a sampled profile needs at least 3 points, got {}",
                volumes.len()
            )));
        }
        for (i, &v) in volumes.iter().enumerate() {
            if !v.is_finite() || !(v > 0.0) {
                return Err(Error::InvalidParam(format!(
                    "volume at row {} must be a positive finite number, got {v}",
                    i + 1
                )));
            }
            if i > 0 && !(v > volumes[i - 1]) {
                return Err(Error::InvalidParam(format!(
                    "volumes must be strictly increasing: row {} has {v} after {}",
                    i + 1,
                    volumes[i - 1]
                )));
            }
        }
        for (i, &y) in values.iter().enumerate() {
            if !y.is_finite() || !(y > 0.0) {
                return Err(Error::InvalidParam(format!(
                    "profile value at row {} must be a positive finite number, got {y}",
                    i + 1
                )));
            }
        }
        Ok(Self {
            volumes,
            values,
            meta,
        })
    }

    pub fn volumes(&self) -> &[f64] {
        &self.volumes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn meta(&self) -> &ProfileMeta {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.volumes.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least 3 samples
    }

    /// One-sided difference quotients at an interior index: returns
    /// `(right, left)`, the forward and backward slopes. For profiles of
    /// the supported spaces these bracket every supporting slope at that
    /// volume (right ≤ left up to discretization error).
    pub fn derivative_bracket(&self, index: usize) -> Result<(f64, f64)> {
        if index == 0 || index + 1 >= self.len() {
            return Err(Error::OutOfRange(format!(
                "derivative bracket needs an interior index, got {index} of {}",
                self.len()
            )));
        }
        let right = (self.values[index + 1] - self.values[index])
            / (self.volumes[index + 1] - self.volumes[index]);
        let left = (self.values[index] - self.values[index - 1])
            / (self.volumes[index] - self.volumes[index - 1]);
        Ok((right, left))
    }

    /// Write the two-column CSV representation (`v,I` header, one row per
    /// sample, 17-significant-digit floats, `\n` line endings).
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "v,I")?;
        for (v, y) in self.volumes.iter().zip(self.values.iter()) {
            writeln!(w, "{},{}", fmt_float(*v), fmt_float(*y))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = Vec::new();
        self.write_csv(&mut out).expect("writing to a Vec cannot fail");
        String::from_utf8(out).expect("csv output is ascii")
    }

    /// Parse the two-column CSV representation. Parse failures report
    /// 1-based line and column positions; structural failures (too few
    /// rows, non-increasing volumes, non-positive values) are reported as
    /// grid or parameter errors.
    pub fn read_csv<R: BufRead>(reader: R) -> Result<Self> {
        let mut volumes = Vec::new();
        let mut values = Vec::new();
        let mut lines = reader.lines().enumerate();
        let header = match lines.next() {
            Some((_, Ok(h))) => h,
            Some((_, Err(e))) => {
                return Err(Error::CsvParse {
                    line: 1,
                    column: 1,
                    msg: format!("unreadable header: {e}"),
                })
            }
            None => {
                return Err(Error::CsvParse {
                    line: 1,
                    column: 1,
                    msg: "empty input, expected a `v,I` header".into(),
                })
            }
        };
        if header.trim_end_matches('\r') != "v,I" {
            return Err(Error::CsvParse {
                line: 1,
                column: 1,
                msg: format!("expected header `v,I`, got {header:?}"),
            });
        }
        for (idx, line) in lines {
            let line_no = idx + 1;
            let line = line.map_err(|e| Error::CsvParse {
                line: line_no,
                column: 1,
                msg: format!("unreadable line: {e}"),
            })?;
            let line = line.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            let Some(comma) = line.find(',') else {
                return Err(Error::CsvParse {
                    line: line_no,
                    column: line.len() + 1,
                    msg: "expected two comma-separated fields".into(),
                });
            };
            let (v_str, rest) = line.split_at(comma);
            let i_str = &rest[1..];
            if i_str.contains(',') {
                return Err(Error::CsvParse {
                    line: line_no,
                    column: comma + 2 + i_str.find(',').unwrap(),
                    msg: "expected exactly two fields".into(),
                });
            }
            let v: f64 = v_str.trim().parse().map_err(|_| Error::CsvParse {
                line: line_no,
                column: 1,
                msg: format!("bad volume field {v_str:?}"),
            })?;
            let y: f64 = i_str.trim().parse().map_err(|_| Error::CsvParse {
                line: line_no,
                column: comma + 2,
                msg: format!("bad profile field {i_str:?}"),
            })?;
            volumes.push(v);
            values.push(y);
        }
        Self::new(volumes, values, ProfileMeta::default())
    }

    pub fn from_csv_str(s: &str) -> Result<Self> {
        Self::read_csv(s.as_bytes())
    }
}

/// Result of extrapolating the profile density `I(v) / v^{(N-1)/N}` to
/// vanishing volume.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityLimit {
    /// Extrapolated limit of the density at `v = 0`.
    pub limit: f64,
    /// Raw density at the smallest sampled volume, for comparison.
    pub raw_ratio: f64,
}

/// Extrapolate the profile density to zero volume through the three
/// smallest samples, using the variable `x = v^{2/N}` in which the density
/// of the supported model spaces is smooth at `0`.
///
/// Requires at least three samples below `max volume / 100`; a grid that
/// does not reach small volumes is rejected as too coarse.
pub fn small_volume_density_limit(p: &SampledProfile, dim: f64) -> Result<DensityLimit> {
    ensure_finite("dim", dim)?;
    if !(dim > 1.0) {
        return Err(Error::InvalidParam(format!(
            "dimension must exceed 1, got {dim}"
        )));
    }
    let vols = p.volumes();
    let vmax = *vols.last().expect("profiles are non-empty");
    let small = vols.iter().take_while(|&&v| v < vmax / 100.0).count();
    if small < 3 {
        return Err(Error::Grid(format!(
            "grid too coarse for extrapolation: only {small} samples below {}",
            vmax / 100.0
        )));
    }
    let density = |i: usize| p.values()[i] / vols[i].powf((dim - 1.0) / dim);
    let xs: Vec<f64> = (0..3).map(|i| vols[i].powf(2.0 / dim)).collect();
    let ys: Vec<f64> = (0..3).map(density).collect();
    Ok(DensityLimit {
        limit: extrapolate_to_zero(&xs, &ys),
        raw_ratio: ys[0],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    // Frozen oracles.
    const SQRT_2PI: f64 = 2.506_628_274_631_000_2; // sqrt(2 pi)
    const CONE_3_QUARTER: f64 = 3.046_473_892_689_778; // 3 (pi/3)^(1/3)

    #[test]
    fn flat_plane_profile_is_circumference() {
        let plane = SpaceForm::new(0.0, 2.0).unwrap();
        // Ball of area pi r^2 = v has circumference 2 sqrt(pi v).
        assert_relative_eq!(
            plane.profile(PI).unwrap(),
            2.0 * PI,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            plane.profile(1.0).unwrap(),
            2.0 * PI.sqrt(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn sphere_profile_peaks_at_half_volume() {
        let sphere = SpaceForm::new(1.0, 2.0).unwrap();
        assert_relative_eq!(sphere.total_volume(), 4.0 * PI, max_relative = 1e-13);
        // Hemisphere: the equator has length 2 pi.
        assert_relative_eq!(
            sphere.profile(2.0 * PI).unwrap(),
            2.0 * PI,
            max_relative = 1e-12
        );
        // Symmetry: I(v) = I(total - v).
        for &v in &[0.5, 2.0, 5.0] {
            let a = sphere.profile(v).unwrap();
            let b = sphere.profile(4.0 * PI - v).unwrap();
            assert_relative_eq!(a, b, max_relative = 1e-10);
        }
    }

    #[test]
    fn sphere_rejects_volume_at_or_above_total() {
        let sphere = SpaceForm::new(1.0, 2.0).unwrap();
        assert!(sphere.profile(4.0 * PI).is_err());
        assert!(sphere.profile(4.0 * PI * (1.0 - 1e-12)).is_err());
        assert!(sphere.profile(4.0 * PI * (1.0 - 1e-6)).is_ok());
        assert!(sphere.profile(0.0).is_err());
        assert!(sphere.profile(-1.0).is_err());
    }

    #[test]
    fn radius_for_volume_inverts_to_machine_precision() {
        let hyp = SpaceForm::new(-2.0, 3.0).unwrap();
        for &v in &[1e-6, 0.37, 12.0, 4000.0] {
            let r = hyp.radius_for_volume(v).unwrap();
            let back = model_volume(hyp.params(), r).unwrap();
            assert_relative_eq!(back, v, max_relative = 1e-13);
        }
    }

    #[test]
    fn barrier_examples() {
        // Flat disk of radius 1: curvature barrier (N-1)/r = 1.
        let plane = SpaceForm::new(0.0, 2.0).unwrap();
        assert_relative_eq!(plane.barrier(PI).unwrap(), 1.0, max_relative = 1e-12);
        // Hemisphere barrier vanishes; beyond it the barrier is negative.
        let sphere = SpaceForm::new(1.0, 2.0).unwrap();
        assert_abs_diff_eq!(sphere.barrier(2.0 * PI).unwrap(), 0.0, epsilon = 1e-10);
        assert!(sphere.barrier(3.0 * PI).unwrap() < 0.0);
    }

    #[test]
    fn cone_profile_examples() {
        let half_plane = ConeModel::new(2.0, 0.5).unwrap();
        assert_relative_eq!(
            half_plane.profile(1.0).unwrap(),
            SQRT_2PI,
            max_relative = 1e-14
        );
        let quarter_space = ConeModel::new(3.0, 0.25).unwrap();
        assert_relative_eq!(
            quarter_space.profile(1.0).unwrap(),
            CONE_3_QUARTER,
            max_relative = 1e-14
        );
        // avr = 1 recovers the flat profile.
        let flat = ConeModel::new(2.0, 1.0).unwrap();
        let plane = SpaceForm::new(0.0, 2.0).unwrap();
        assert_relative_eq!(
            flat.profile(2.5).unwrap(),
            plane.profile(2.5).unwrap(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn cone_parameter_validation() {
        assert!(ConeModel::new(2.0, 0.0).is_err());
        assert!(ConeModel::new(2.0, 1.5).is_err());
        assert!(ConeModel::new(1.0, 0.5).is_err());
        assert!(ConeModel::new(2.0, f64::NAN).is_err());
    }

    #[test]
    fn grid_spec_parsing_and_points() {
        let g = GridSpec::parse("uniform:0.5:2.0:4").unwrap();
        assert_eq!(
            g.points().unwrap(),
            vec![0.5, 1.0, 1.5, 2.0],
            "uniform grid points"
        );
        let geo = GridSpec::parse("geometric:1:8:4").unwrap();
        let pts = geo.points().unwrap();
        assert_eq!(pts.len(), 4);
        assert_eq!(pts[0], 1.0);
        assert_eq!(pts[3], 8.0);
        assert_relative_eq!(pts[1], 2.0, max_relative = 1e-13);
        assert_relative_eq!(pts[2], 4.0, max_relative = 1e-13);

        assert!(GridSpec::parse("uniform:0:1:5").is_err(), "v0 must be > 0");
        assert!(GridSpec::parse("uniform:2:1:5").is_err(), "v1 must exceed v0");
        assert!(GridSpec::parse("uniform:1:2:2").is_err(), "n >= 3");
        assert!(GridSpec::parse("log:1:2:5").is_err(), "unknown kind");
        assert!(GridSpec::parse("uniform:1:2").is_err(), "wrong arity");
        assert!(GridSpec::parse("uniform:a:2:5").is_err(), "non-numeric field");
    }

    #[test]
    fn sampled_profile_validation() {
        let meta = ProfileMeta::default();
        assert!(SampledProfile::new(vec![1.0, 2.0], vec![1.0, 1.0], meta).is_err());
        assert!(
            SampledProfile::new(vec![1.0, 2.0, 2.0], vec![1.0, 1.0, 1.0], meta).is_err(),
            "non-increasing volumes must be rejected"
        );
        assert!(
            SampledProfile::new(vec![1.0, 2.0, 3.0], vec![1.0, -1.0, 1.0], meta).is_err(),
            "non-positive values must be rejected"
        );
        assert!(
            SampledProfile::new(vec![-1.0, 2.0, 3.0], vec![1.0, 1.0, 1.0], meta).is_err(),
            "non-positive volumes must be rejected"
        );
        assert!(SampledProfile::new(vec![1.0, 2.0, 3.0], vec![1.0, 1.0], meta).is_err());
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let plane = SpaceForm::new(0.0, 2.0).unwrap();
        let grid = GridSpec::Geometric {
            v0: 1e-4,
            v1: 10.0,
            n: 37,
        };
        let p = plane.sample_profile(&grid).unwrap();
        let text = p.to_csv_string();
        let q = SampledProfile::from_csv_str(&text).unwrap();
        assert_eq!(p.volumes(), q.volumes(), "volumes must round-trip bit-exactly");
        assert_eq!(p.values(), q.values(), "values must round-trip bit-exactly");
        assert_eq!(text, q.to_csv_string(), "second serialization must be identical");
    }

    #[test]
    fn csv_parse_errors_carry_positions() {
        let err = SampledProfile::from_csv_str("v,I\n1.0,2.0\nxx,3.0\n").unwrap_err();
        match err {
            Error::CsvParse { line, column, .. } => {
                assert_eq!(line, 3);
                assert_eq!(column, 1);
            }
            other => panic!("expected CsvParse, got {other:?}"),
        }
        let err = SampledProfile::from_csv_str("v,I\n1.0,zz\n2.0,1.0\n3.0,1.0\n").unwrap_err();
        match err {
            Error::CsvParse { line, column, .. } => {
                assert_eq!(line, 2);
                assert_eq!(column, 5);
            }
            other => panic!("expected CsvParse, got {other:?}"),
        }
        assert!(SampledProfile::from_csv_str("x,y\n1,2\n").is_err(), "bad header");
        // Non-monotone volumes parse but fail validation with a row number.
        let err = SampledProfile::from_csv_str("v,I\n2.0,1.0\n1.0,1.0\n3.0,1.0\n").unwrap_err();
        assert!(matches!(err, Error::InvalidParam(_)), "got {err:?}");
    }

    #[test]
    fn derivative_bracket_on_model_profile() {
        let sphere = SpaceForm::new(1.0, 2.0).unwrap();
        let grid = GridSpec::Uniform {
            v0: 1.0,
            v1: 11.0,
            n: 201,
        };
        let p = sphere.sample_profile(&grid).unwrap();
        for &i in &[1usize, 50, 100, 150, 199] {
            let (right, left) = p.derivative_bracket(i).unwrap();
            // Concave profile: forward slope below backward slope.
            assert!(
                right <= left + 1e-12,
                "bracket out of order at i={i}: {right} > {left}"
            );
            // Both approximate I'(v) = cos(r(v)) ... compare to the barrier.
            let c = sphere.barrier(p.volumes()[i]).unwrap();
            assert!(right - 1e-3 <= c && c <= left + 1e-3, "barrier outside bracket");
        }
        assert!(p.derivative_bracket(0).is_err());
        assert!(p.derivative_bracket(200).is_err());
    }

    #[test]
    fn density_limit_recovers_cone_constant() {
        let cone = ConeModel::new(3.0, 0.3).unwrap();
        let grid = GridSpec::Geometric {
            v0: 1e-8,
            v1: 1.0,
            n: 40,
        };
        let p = cone.sample_profile(&grid).unwrap();
        let d = small_volume_density_limit(&p, 3.0).unwrap();
        assert_relative_eq!(d.limit, cone.density_constant(), max_relative = 1e-10);
        assert_relative_eq!(d.raw_ratio, cone.density_constant(), max_relative = 1e-10);
    }

    #[test]
    fn density_limit_rejects_coarse_grids() {
        let plane = SpaceForm::new(0.0, 2.0).unwrap();
        let grid = GridSpec::Uniform {
            v0: 0.5,
            v1: 1.0,
            n: 20,
        };
        let p = plane.sample_profile(&grid).unwrap();
        assert!(matches!(
            small_volume_density_limit(&p, 2.0),
            Err(Error::Grid(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Cone profiles are exactly homogeneous: I(t v) = t^{(N-1)/N} I(v).
        #[test]
        fn cone_homogeneity(
            dim in 2.0f64..6.0,
            avr in 0.05f64..1.0,
            v in 0.01f64..100.0,
            t in 0.01f64..100.0,
        ) {
            let cone = ConeModel::new(dim, avr).unwrap();
            let lhs = cone.profile(t * v).unwrap();
            let rhs = t.powf((dim - 1.0) / dim) * cone.profile(v).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (lhs.abs() + rhs.abs()));
        }

        /// Inverting volumes then evaluating area reproduces the profile of
        /// balls directly computed from a radius sweep.
        #[test]
        fn profile_consistent_with_radius_sweep(
            ricci in -2.0f64..2.0,
            dim in 2.0f64..4.0,
            r in 0.05f64..1.4,
        ) {
            let form = SpaceForm::new(ricci, dim).unwrap();
            let r = r.min(0.45 * form.params().model_diameter());
            let v = model_volume(form.params(), r).unwrap();
            let direct = model_area(form.params(), r).unwrap();
            let via_profile = form.profile(v).unwrap();
            prop_assert!((direct - via_profile).abs() <= 1e-11 * (1.0 + direct.abs()));
        }

        /// Space-form profiles dominate nothing below and are positive.
        #[test]
        fn sampled_profiles_are_positive(
            ricci in -1.0f64..1.0,
            dim in 2.0f64..4.0,
        ) {
            let form = SpaceForm::new(ricci, dim).unwrap();
            let v1 = if form.total_volume().is_finite() {
                0.5 * form.total_volume()
            } else {
                5.0
            };
            let grid = GridSpec::Geometric { v0: v1 * 1e-4, v1, n: 24 };
            let p = form.sample_profile(&grid).unwrap();
            prop_assert!(p.values().iter().all(|&x| x > 0.0));
        }
    }
}
