//! Numerical comparison geometry for isoperimetric profiles.
//!
//! This crate computes isoperimetric profiles of constant-curvature model
//! spaces and of cones with a prescribed asymptotic volume ratio, evaluates
//! the comparison functions that control geodesic tubes and distance
//! Laplacians under a Ricci lower bound, and checks — on sampled profile
//! data — the sharp differential inequalities that such profiles satisfy.
//! A one-dimensional weighted oracle ([`needle`]) provides brute-force
//! ground truth for the profile of model densities, and [`constants`]
//! assembles the explicit diameter and decomposition bounds that follow
//! from small-volume control of a profile.
//!
//! The modules are organized by subject:
//!
//! * [`model_space`] — generalized trigonometric functions `cos_k`/`sin_k`,
//!   the shifted solution `s_{k,λ}`, model sphere areas and ball volumes,
//!   and the one-sided Jacobian controlled by a mean-curvature barrier.
//! * [`profiles`] — exact profiles of space forms and cones, sampling onto
//!   volume grids, derivative brackets, CSV round-tripping, and
//!   small-volume extrapolation of the profile density.
//! * [`inequality_checks`] — discrete checkers for the sharp second-order
//!   profile inequalities, concavity of power transforms, two-sided ratio
//!   bounds, strict subadditivity, and min-plus combination of profiles.
//! * [`needle`] — weighted one-dimensional densities and an exact
//!   discretized minimizer search over unions of intervals.
//! * [`tubular`] — perimeter and volume bounds for one-sided tubes and the
//!   sharp distance-function Laplacian bounds.
//! * [`constants`] — explicit diameter bounds and the piece-count bound for
//!   decompositions into bounded-volume sets.
//!
//! Floating-point text output is centralized in [`fmt_float`] so that every
//! emitted number round-trips through `f64` parsing and is byte-identical
//! across runs.

pub mod constants;
pub mod inequality_checks;
pub mod model_space;
pub mod needle;
pub(crate) mod numerics;
pub mod profiles;
pub mod tubular;

/// Error type for every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An input that must be finite was NaN or infinite.
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
    /// A parameter violated a structural requirement (dimension, sign, shape).
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    /// A numeric argument fell outside the admissible domain of an operation.
    #[error("out of range: {0}")]
    OutOfRange(String),
    /// A volume grid or sample grid was malformed for the requested operation.
    #[error("grid error: {0}")]
    Grid(String),
    /// Adaptive quadrature failed to reach its tolerance.
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    /// A CSV input could not be parsed; positions are 1-based.
    #[error("csv parse error at line {line}, column {column}: {msg}")]
    CsvParse {
        line: usize,
        column: usize,
        msg: String,
    },
    /// Sampled data failed a hypothesis of the requested comparison.
    #[error("precondition violated ({kind:?}): {msg}")]
    Precondition { kind: PreconditionKind, msg: String },
}

/// Which hypothesis of a sampled-data comparison failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreconditionKind {
    /// The sample did not start at the required initial value.
    InitialValue,
    /// The initial slope exceeded the stated bound.
    InitialSlope,
    /// The sample is not a subsolution of the governing equation.
    NotSubsolution,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &'static str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(name))
    }
}

/// Format a float with 17 significant digits so the text round-trips to the
/// same `f64`. Negative zero is normalized to `0.0` first, and the output is
/// byte-stable across runs and platforms.
pub fn fmt_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt_float_round_trips() {
        for &x in &[
            0.0,
            1.0,
            -1.0,
            0.1,
            std::f64::consts::PI,
            1.0 / 3.0,
            1e-300,
            -2.5e300,
            f64::MIN_POSITIVE,
        ] {
            let s = fmt_float(x);
            let back: f64 = s.parse().expect("formatted float must parse");
            assert_eq!(back.to_bits(), x.to_bits(), "round trip failed for {s}");
        }
    }

    #[test]
    fn fmt_float_normalizes_negative_zero() {
        assert_eq!(fmt_float(-0.0), fmt_float(0.0));
        assert!(!fmt_float(-0.0).starts_with('-'));
    }

    #[test]
    fn fmt_float_is_17_significant_digits() {
        assert_eq!(fmt_float(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_float(0.5), "5.0000000000000000e-1");
    }
}
