//! Deterministic command-line front end for the `isoprofile` library:
//! model isoperimetric profiles as CSV, pointwise inequality reports as
//! TSV, tube-bound sweeps, a brute-force one-dimensional needle oracle,
//! min-plus combination of profiles, and the explicit covering constants.
//!
//! Exit codes: `0` — the run succeeded and every checked point passed;
//! `1` — the computation ran but found a mathematical violation;
//! `2` — usage or input errors of any kind (bad flags, malformed CSV,
//! parameters outside an operation's domain). Numeric output always goes
//! through a fixed 17-significant-digit formatter, so identical
//! invocations produce byte-identical output on every platform.

mod config;
mod output;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use config::KvConfig;
use isoprofile::constants::{
    avr_diameter_bound, decomposition_count_bound, diameter_bound, SmallVolumeConstants,
};
use isoprofile::fmt_float;
use isoprofile::inequality_checks::{
    check_bayle_with, check_bp_with, check_concavity_transform, check_derivative_asymptotics,
    check_ratio_bounds, check_strict_subadditivity, choose_concavity_constant,
    minplus_combine_all, CheckReport, ConcavityVariant, Method,
};
use isoprofile::needle::{needle_isoperimetric, needle_profile, NeedleDensity};
use isoprofile::profiles::{ConeModel, GridSpec, SampledProfile, SpaceForm};
use isoprofile::tubular::{
    model_ball_tube_oracle, tube_perimeter_bound, tube_volume_bound, Side,
};
use output::{plot_data, residual_report, write_out, FormatArg, Series};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Numerical comparison geometry for isoperimetric profiles: model
/// profiles, sharp differential-inequality checks, tube bounds, a needle
/// oracle, min-plus combination, and explicit constants.
#[derive(Parser)]
#[command(name = "isoprofile", version, propagate_version = true, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a model profile (space form or cone) onto a volume grid as CSV.
    ModelProfile(ModelProfileArgs),
    /// Check a sharp inequality on a sampled profile and report residuals.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Sweep tube perimeter/volume bounds, or run the model-ball equality oracle.
    Tube(TubeArgs),
    /// Minimize perimeter over interval unions for a weighted density on a segment.
    Needle(NeedleArgs),
    /// Min-plus combination of sampled profiles over a common volume grid.
    Combine(CombineArgs),
    /// Print explicit constants: concavity correction, diameter bounds, piece counts.
    #[command(subcommand)]
    Constants(ConstantsCommand),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::ModelProfile(args) => cmd_model_profile(args),
        Command::Check(args) => cmd_check(args),
        Command::Tube(args) => cmd_tube(args),
        Command::Needle(args) => cmd_needle(args),
        Command::Combine(args) => cmd_combine(args),
        Command::Constants(args) => cmd_constants(args),
    }
}

fn read_profile(path: &Path) -> Result<SampledProfile> {
    let file = std::fs::File::open(path)
        .with_context(|| format!("cannot open {}", path.display()))?;
    SampledProfile::read_csv(std::io::BufReader::new(file))
        .map_err(|e| anyhow!("{}: {e}", path.display()))
}

// ---------------------------------------------------------------------------
// model-profile

#[derive(Args)]
struct ModelProfileArgs {
    /// Curvature parameter K: sample the simply connected space form of
    /// dimension N with Ricci curvature exactly K (sphere for K > 0, flat
    /// space for K = 0, hyperbolic space for K < 0).
    #[arg(long = "K", allow_negative_numbers = true, conflicts_with = "avr")]
    ricci: Option<f64>,
    /// Asymptotic volume ratio in (0, 1]: sample the flat cone whose balls
    /// carry that fraction of the Euclidean volume. Its profile is the
    /// power law N·(omega·avr)^{1/N}·(v/N)^{(N-1)/N} ... exclusive with --K.
    #[arg(long)]
    avr: Option<f64>,
    /// Dimension N (real, > 1).
    #[arg(long = "N")]
    dim: f64,
    /// Volume grid: `uniform:v0:v1:n` or `geometric:v0:v1:n` with v0 > 0.
    #[arg(long)]
    grid: String,
    /// Output path (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

fn cmd_model_profile(args: ModelProfileArgs) -> Result<ExitCode> {
    let grid = GridSpec::parse(&args.grid)?;
    let profile = match (args.ricci, args.avr) {
        (Some(ricci), None) => SpaceForm::new(ricci, args.dim)?.sample_profile(&grid)?,
        (None, Some(avr)) => ConeModel::new(args.dim, avr)?.sample_profile(&grid)?,
        (None, None) => bail!("one of --K or --avr is required"),
        (Some(_), Some(_)) => unreachable!("clap rejects the conflict"),
    };
    write_out(args.output.as_deref(), &profile.to_csv_string())?;
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// check

#[derive(Subcommand)]
enum CheckCommand {
    /// Sharp second-order inequality -I''·I >= K + (I')^2/(N-1),
    /// which the profile of every space with Ricci >= K and dimension <= N
    /// satisfies; equality characterizes the model spaces.
    Bp(BpArgs),
    /// Power-transform strengthening: with xi = I^{a/(a-1)} for an
    /// exponent a >= N, check -xi'' >= (a/(a-1))·xi^{(2-a)/(a-1)-...}
    /// reduced to -xi'' - (a/(a-1))·I^{(2-a)/(a-1)}·[(1/(N-1)-1/(a-1))(I')^2 + K] >= 0.
    Bayle(BayleArgs),
    /// Concavity of a corrected transform on volumes up to --v1:
    /// eta = I^{N/(N-1)} - C·v^{(2+N)/N} (variant `eta`) or
    /// eta-tilde = I - C·v^{(1+N)/N} (variant `eta-tilde`); residuals are -g''.
    Concavity(ConcavityArgs),
    /// Two-sided density bounds theta <= I(v)/v^{(N-1)/N} <= C1 on volumes up to --v1.
    Ratio(RatioArgs),
    /// Strict subadditivity I(a) + I(b) > I(a+b) over all grid pairs with a+b <= --eps.
    Subadd(SubaddArgs),
    /// Small-volume limits: extrapolate I(v)/v^{(N-1)/N} and I'(v)·v^{1/N}
    /// to v = 0 and report both limits and their ratio ((N-1)/N on models).
    Asymptotics(AsymptoticsArgs),
}

/// Second-derivative discretization used by a pointwise check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    /// Central second differences (second-order accurate on smooth data).
    Central,
    /// Extremal parabola touching the samples from below (robust at corners).
    Parabola,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Central => Method::CentralDifference,
            MethodArg::Parabola => Method::TouchingParabola,
        }
    }
}

/// Which corrected transform the concavity check uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    /// g = I^{N/(N-1)} - C·v^{(2+N)/N}.
    Eta,
    /// g = I - C·v^{(1+N)/N}.
    EtaTilde,
}

#[derive(Args)]
struct ReportIo {
    /// Profile CSV to check (`v,I` header, increasing volumes).
    #[arg(long)]
    input: PathBuf,
    /// Report layout.
    #[arg(long, value_enum, default_value_t = FormatArg::Tsv)]
    format: FormatArg,
    /// Output path (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BpArgs {
    #[command(flatten)]
    io: ReportIo,
    /// Curvature parameter K of the comparison condition.
    #[arg(long = "K", allow_negative_numbers = true)]
    ricci: f64,
    /// Dimension upper bound N (> 1).
    #[arg(long = "N")]
    dim: f64,
    /// Residual tolerance (default scales with the squared grid step).
    #[arg(long)]
    tol: Option<f64>,
    /// Second-derivative discretization.
    #[arg(long, value_enum, default_value_t = MethodArg::Central)]
    method: MethodArg,
}

#[derive(Args)]
struct BayleArgs {
    #[command(flatten)]
    io: ReportIo,
    /// Curvature parameter K of the comparison condition.
    #[arg(long = "K", allow_negative_numbers = true)]
    ricci: f64,
    /// Dimension upper bound N (> 1).
    #[arg(long = "N")]
    dim: f64,
    /// Transform exponent (must be at least N; the gradient term drops at alpha = N).
    #[arg(long)]
    alpha: f64,
    /// Residual tolerance (default scales with the squared grid step).
    #[arg(long)]
    tol: Option<f64>,
    /// Second-derivative discretization.
    #[arg(long, value_enum, default_value_t = MethodArg::Central)]
    method: MethodArg,
}

#[derive(Args)]
struct ConcavityArgs {
    #[command(flatten)]
    io: ReportIo,
    /// Dimension N (> 1).
    #[arg(long = "N")]
    dim: f64,
    /// Correction constant C. When omitted it is chosen from --K and
    /// --theta as the sharp constant making the transform concave.
    #[arg(long = "C", allow_negative_numbers = true)]
    c_const: Option<f64>,
    /// Curvature parameter for choosing C (only read when --C is omitted;
    /// must be nonpositive).
    #[arg(long = "K", allow_negative_numbers = true)]
    ricci: Option<f64>,
    /// Density lower bound for choosing C (only read when --C is omitted;
    /// irrelevant at N = 2 where C = -K).
    #[arg(long)]
    theta: Option<f64>,
    /// Which transform to test.
    #[arg(long, value_enum, default_value_t = VariantArg::Eta)]
    variant: VariantArg,
    /// Top of the checked volume range.
    #[arg(long)]
    v1: f64,
    /// Residual tolerance (default scales with the squared grid step).
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct RatioArgs {
    #[command(flatten)]
    io: ReportIo,
    /// Dimension N (> 1).
    #[arg(long = "N")]
    dim: f64,
    /// Lower density bound theta.
    #[arg(long)]
    theta: f64,
    /// Upper density bound C1 (defaults to theta, the equality case).
    #[arg(long = "C1")]
    c1: Option<f64>,
    /// Top of the checked volume range.
    #[arg(long)]
    v1: f64,
    /// Slack allowed on both bounds (default is rounding-level).
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct SubaddArgs {
    /// Profile CSV to scan (`v,I` header, uniform grid starting on a step multiple).
    #[arg(long)]
    input: PathBuf,
    /// Scan all grid pairs with combined volume at most this.
    #[arg(long)]
    eps: f64,
    /// Output path (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AsymptoticsArgs {
    /// Profile CSV reaching down to small volumes (`v,I` header).
    #[arg(long)]
    input: PathBuf,
    /// Dimension N (> 1).
    #[arg(long = "N")]
    dim: f64,
    /// Output path (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

fn finish_report(report: &CheckReport, io: &ReportIo) -> Result<ExitCode> {
    let text = residual_report(report, io.format);
    write_out(io.output.as_deref(), &text)?;
    Ok(if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_check(command: CheckCommand) -> Result<ExitCode> {
    match command {
        CheckCommand::Bp(args) => {
            let p = read_profile(&args.io.input)?;
            let report = check_bp_with(&p, args.ricci, args.dim, args.tol, args.method.into())?;
            finish_report(&report, &args.io)
        }
        CheckCommand::Bayle(args) => {
            let p = read_profile(&args.io.input)?;
            let report = check_bayle_with(
                &p,
                args.ricci,
                args.dim,
                args.alpha,
                args.tol,
                args.method.into(),
            )?;
            finish_report(&report, &args.io)
        }
        CheckCommand::Concavity(args) => {
            let p = read_profile(&args.io.input)?;
            let c_const = match args.c_const {
                Some(c) => c,
                None => {
                    let ricci = args
                        .ricci
                        .ok_or_else(|| anyhow!("either --C or both --K and --theta are required"))?;
                    let theta = match (args.theta, args.dim == 2.0) {
                        (Some(theta), _) => theta,
                        // At N = 2 the chosen constant is -K for any density.
                        (None, true) => 1.0,
                        (None, false) => bail!("--theta is required to choose C when N > 2"),
                    };
                    choose_concavity_constant(ricci, args.dim, theta)?
                }
            };
            let variant = match args.variant {
                VariantArg::Eta => ConcavityVariant::PowerTransform,
                VariantArg::EtaTilde => ConcavityVariant::ShiftedProfile,
            };
            let report =
                check_concavity_transform(&p, args.dim, c_const, variant, args.v1, args.tol)?;
            finish_report(&report, &args.io)
        }
        CheckCommand::Ratio(args) => {
            let p = read_profile(&args.io.input)?;
            let c1 = args.c1.unwrap_or(args.theta);
            let report = check_ratio_bounds(&p, args.dim, args.theta, c1, args.v1, args.tol)?;
            finish_report(&report, &args.io)
        }
        CheckCommand::Subadd(args) => {
            let p = read_profile(&args.input)?;
            let rep = check_strict_subadditivity(&p, args.eps)?;
            let mut text = format!("strict\t{}\n", rep.strict);
            if let Some((a, b)) = rep.witness {
                writeln!(text, "witness_a\t{}", fmt_float(a))?;
                writeln!(text, "witness_b\t{}", fmt_float(b))?;
            }
            writeln!(text, "pairs_checked\t{}", rep.pairs_checked)?;
            write_out(args.output.as_deref(), &text)?;
            Ok(if rep.strict {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        CheckCommand::Asymptotics(args) => {
            let p = read_profile(&args.input)?;
            let est = check_derivative_asymptotics(&p, args.dim)?;
            let text = format!(
                "theta_est\t{}\nslope_limit_est\t{}\nratio_of_limits\t{}\n",
                fmt_float(est.theta_est),
                fmt_float(est.slope_limit_est),
                fmt_float(est.ratio_of_limits)
            );
            write_out(args.output.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

// ---------------------------------------------------------------------------
// tube

/// Which side of the starting hypersurface the tube grows into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    /// Outward: distance increases, mean-curvature barrier c bounds from above.
    Exterior,
    /// Inward: the mirrored bound with the sign of c reversed.
    Interior,
}

#[derive(Args)]
struct TubeArgs {
    /// Perimeter of the starting hypersurface (sweep mode).
    #[arg(long)]
    per0: Option<f64>,
    /// Mean-curvature barrier c of the starting hypersurface (sweep mode).
    #[arg(long = "c", allow_negative_numbers = true)]
    barrier: Option<f64>,
    /// Curvature parameter K.
    #[arg(long = "K", allow_negative_numbers = true)]
    ricci: f64,
    /// Dimension N (> 1).
    #[arg(long = "N")]
    dim: f64,
    /// Tube depths: a single nonnegative value or a grid `start:end:count`.
    #[arg(long = "t", allow_negative_numbers = true)]
    depths: String,
    /// Side the tube grows into (sweep mode).
    #[arg(long, value_enum, default_value_t = SideArg::Exterior)]
    side: SideArg,
    /// Run the model-ball equality oracle instead of a sweep: compare the
    /// exact sphere area at radius r+t against the tube bound seeded at
    /// radius --r, reporting the gap (zero up to rounding).
    #[arg(long)]
    oracle: bool,
    /// Model ball radius (oracle mode).
    #[arg(long = "r")]
    radius: Option<f64>,
    /// Sweep layout (the oracle row is always TSV).
    #[arg(long, value_enum, default_value_t = FormatArg::Tsv)]
    format: FormatArg,
    /// Output path (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Parse `--t`: either one nonnegative float or `start:end:count`.
fn parse_depths(s: &str) -> Result<Vec<f64>> {
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            bail!("depth grid must be start:end:count, got {s:?}");
        }
        let start: f64 = parts[0]
            .parse()
            .map_err(|_| anyhow!("bad depth start {:?}", parts[0]))?;
        let end: f64 = parts[1]
            .parse()
            .map_err(|_| anyhow!("bad depth end {:?}", parts[1]))?;
        let count: usize = parts[2]
            .parse()
            .map_err(|_| anyhow!("bad depth count {:?}", parts[2]))?;
        if !start.is_finite() || !end.is_finite() {
            bail!("depth grid endpoints must be finite");
        }
        if start < 0.0 {
            bail!("tube depths must be nonnegative, got start {start}");
        }
        if !(end > start) {
            bail!("depth grid end must exceed the start, got [{start}, {end}]");
        }
        if count < 2 {
            bail!("depth grid needs at least 2 points, got {count}");
        }
        let last = count - 1;
        Ok((0..count)
            .map(|i| {
                if i == last {
                    end
                } else {
                    start + (end - start) * i as f64 / last as f64
                }
            })
            .collect())
    } else {
        let t: f64 = s.parse().map_err(|_| anyhow!("bad depth {s:?}"))?;
        if !(t >= 0.0) {
            bail!("tube depth must be nonnegative, got {t}");
        }
        Ok(vec![t])
    }
}

fn cmd_tube(args: TubeArgs) -> Result<ExitCode> {
    let ts = parse_depths(&args.depths)?;
    if args.oracle {
        if args.per0.is_some() || args.barrier.is_some() {
            bail!("--per0 and --c do not apply to --oracle: the model ball fixes both");
        }
        let r = args.radius.ok_or_else(|| anyhow!("--oracle requires --r"))?;
        let mut text = String::from("K\tN\tr\tt\tlhs\trhs\tgap\n");
        for &t in &ts {
            let o = model_ball_tube_oracle(args.ricci, args.dim, r, t)?;
            writeln!(
                text,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                fmt_float(args.ricci),
                fmt_float(args.dim),
                fmt_float(r),
                fmt_float(t),
                fmt_float(o.lhs),
                fmt_float(o.rhs),
                fmt_float(o.gap)
            )?;
        }
        write_out(args.output.as_deref(), &text)?;
        return Ok(ExitCode::SUCCESS);
    }
    if args.radius.is_some() {
        bail!("--r applies only to --oracle");
    }
    let per0 = args.per0.ok_or_else(|| anyhow!("--per0 is required for a sweep"))?;
    let barrier = args.barrier.ok_or_else(|| anyhow!("--c is required for a sweep"))?;
    let side = match args.side {
        SideArg::Exterior => Side::Exterior,
        SideArg::Interior => Side::Interior,
    };
    let mut rows = Vec::with_capacity(ts.len());
    for &t in &ts {
        let per = tube_perimeter_bound(per0, barrier, args.ricci, args.dim, t, side)?;
        let vol = tube_volume_bound(per0, barrier, args.ricci, args.dim, t, side)?;
        rows.push((t, per, vol));
    }
    let text = match args.format {
        FormatArg::Tsv => {
            let mut text = String::from("t\tperimeter\tvolume\n");
            for &(t, per, vol) in &rows {
                writeln!(text, "{}\t{}\t{}", fmt_float(t), fmt_float(per), fmt_float(vol))?;
            }
            text
        }
        FormatArg::PlotData => plot_data(&[
            Series {
                name: "perimeter",
                rows: rows.iter().map(|&(t, per, _)| (t, per)).collect(),
            },
            Series {
                name: "volume",
                rows: rows.iter().map(|&(t, _, vol)| (t, vol)).collect(),
            },
        ]),
    };
    write_out(args.output.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// needle

/// Closed-form density family on the segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    /// scale · s_{k,lambda}(t-a)^{N-1}, where s_{k,lambda} solves
    /// u'' + k·u = 0 with u(0) = 1, u'(0) = -lambda; positive on the interval.
    #[value(name = "s_lambda")]
    SLambda,
    /// sin_k(t-a)^{N-1}, vanishing at the left endpoint.
    #[value(name = "sin_k")]
    SinK,
}

#[derive(Args)]
struct NeedleArgs {
    /// Key=value file supplying any of this command's flags (explicit flags win).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Closed-form density family (exclusive with --density).
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    /// One-dimensional model curvature k; the density satisfies the
    /// curvature-dimension condition with curvature k·(N-1).
    #[arg(long = "k", allow_negative_numbers = true)]
    k: Option<f64>,
    /// Initial logarithmic-slope parameter of the s_lambda family.
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// Effective dimension N (> 1): the density carries the power N-1.
    #[arg(long = "N")]
    dim: Option<f64>,
    /// Left endpoint of the segment.
    #[arg(long = "a", allow_negative_numbers = true)]
    a: Option<f64>,
    /// Right endpoint of the segment.
    #[arg(long = "b", allow_negative_numbers = true)]
    b: Option<f64>,
    /// Multiplicative scale of the s_lambda density (default 1).
    #[arg(long)]
    scale: Option<f64>,
    /// Sampled density CSV with a `t,h` header (exclusive with --family).
    #[arg(long)]
    density: Option<PathBuf>,
    /// Single target measure: report the minimizer at this volume.
    #[arg(long = "v", allow_negative_numbers = true)]
    target: Option<f64>,
    /// Sweep a whole profile over --grid and emit it as CSV.
    #[arg(long)]
    profile: bool,
    /// Measure grid for --profile: `uniform:v0:v1:n` or `geometric:v0:v1:n`.
    #[arg(long)]
    grid: Option<String>,
    /// Discretization cells (default 2000).
    #[arg(long)]
    cells: Option<usize>,
    /// Largest number of intervals searched, 1 or 2 (default 2).
    #[arg(long = "m")]
    max_intervals: Option<usize>,
    /// Output path (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

fn cmd_needle(args: NeedleArgs) -> Result<ExitCode> {
    let cfg = match &args.config {
        Some(path) => KvConfig::load(path)?,
        None => KvConfig::empty(),
    };
    cfg.ensure_known(&[
        "family", "k", "lambda", "N", "a", "b", "scale", "density", "v", "profile", "grid",
        "cells", "m",
    ])?;
    let family = match (args.family, cfg.string("family")) {
        (Some(f), _) => Some(f),
        (None, Some(raw)) => Some(
            <FamilyArg as ValueEnum>::from_str(&raw, false)
                .map_err(|e| anyhow!("config key family: {e}"))?,
        ),
        (None, None) => None,
    };
    let k = args.k.or(cfg.f64("k")?);
    let lambda = args.lambda.or(cfg.f64("lambda")?);
    let dim = args.dim.or(cfg.f64("N")?);
    let a = args.a.or(cfg.f64("a")?);
    let b = args.b.or(cfg.f64("b")?);
    let scale = args.scale.or(cfg.f64("scale")?);
    let density_path = args.density.or_else(|| cfg.string("density").map(PathBuf::from));
    let target = args.target.or(cfg.f64("v")?);
    let profile = args.profile || cfg.bool("profile")?.unwrap_or(false);
    let grid = args.grid.or_else(|| cfg.string("grid"));
    let cells = args.cells.or(cfg.usize("cells")?).unwrap_or(2000);
    let max_intervals = args.max_intervals.or(cfg.usize("m")?).unwrap_or(2);

    let dim = dim.ok_or_else(|| anyhow!("--N is required"))?;
    let density = match (family, density_path) {
        (Some(_), Some(_)) => bail!("--family and --density are mutually exclusive"),
        (None, None) => bail!("one of --family or --density is required"),
        (Some(fam), None) => {
            let k = k.ok_or_else(|| anyhow!("--k is required for a closed-form family"))?;
            let a = a.ok_or_else(|| anyhow!("--a is required for a closed-form family"))?;
            let b = b.ok_or_else(|| anyhow!("--b is required for a closed-form family"))?;
            match fam {
                FamilyArg::SLambda => {
                    let lambda = lambda
                        .ok_or_else(|| anyhow!("--lambda is required for the s_lambda family"))?;
                    NeedleDensity::s_lambda_power(a, b, k, lambda, dim, scale.unwrap_or(1.0))?
                }
                FamilyArg::SinK => {
                    if lambda.is_some() {
                        bail!("--lambda does not apply to the sin_k family");
                    }
                    if scale.is_some() {
                        bail!("--scale does not apply to the sin_k family");
                    }
                    NeedleDensity::sin_power(a, b, k, dim)?
                }
            }
        }
        (None, Some(path)) => {
            if a.is_some() || b.is_some() || lambda.is_some() || scale.is_some() {
                bail!("--a/--b/--lambda/--scale do not apply to a sampled density");
            }
            let k = k.ok_or_else(|| {
                anyhow!("--k is required to state the sampled density's comparison curvature")
            })?;
            let file = std::fs::File::open(&path)
                .with_context(|| format!("cannot open {}", path.display()))?;
            NeedleDensity::read_csv(std::io::BufReader::new(file), dim, k * (dim - 1.0))
                .map_err(|e| anyhow!("{}: {e}", path.display()))?
        }
    };

    match (target, profile) {
        (Some(_), true) => bail!("--v and --profile are mutually exclusive"),
        (None, false) => bail!("one of --v or --profile is required"),
        (Some(v), false) => {
            if grid.is_some() {
                bail!("--grid applies only to --profile");
            }
            let min = needle_isoperimetric(&density, v, cells, max_intervals)?;
            let intervals = min
                .intervals
                .iter()
                .map(|&(l, r)| format!("{}:{}", fmt_float(l), fmt_float(r)))
                .collect::<Vec<_>>()
                .join(" ");
            let text = format!(
                "perimeter\t{}\nmass\t{}\nslack\t{}\nintervals\t{}\nsearched_intervals\t{}\ntruncated\t{}\n",
                fmt_float(min.perimeter),
                fmt_float(min.mass),
                fmt_float(min.slack),
                intervals,
                min.searched_intervals,
                min.truncated
            );
            write_out(args.output.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        (None, true) => {
            let grid = grid.ok_or_else(|| anyhow!("--profile requires --grid"))?;
            let grid = GridSpec::parse(&grid)?;
            let prof = needle_profile(&density, &grid, cells, max_intervals)?;
            write_out(args.output.as_deref(), &prof.to_csv_string())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

// ---------------------------------------------------------------------------
// combine

#[derive(Args)]
struct CombineArgs {
    /// Profile CSVs on a common uniform volume grid whose start is a whole
    /// number of grid steps (so part volumes always land on the grid).
    #[arg(long, num_args = 1.., required = true)]
    inputs: Vec<PathBuf>,
    /// Largest number of parts a volume may be split into.
    #[arg(long, default_value_t = 2)]
    max_parts: usize,
    /// Report layout.
    #[arg(long, value_enum, default_value_t = FormatArg::Tsv)]
    format: FormatArg,
    /// Output path (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

fn cmd_combine(args: CombineArgs) -> Result<ExitCode> {
    let profiles: Vec<SampledProfile> = args
        .inputs
        .iter()
        .map(|p| read_profile(p))
        .collect::<Result<_>>()?;
    let refs: Vec<&SampledProfile> = profiles.iter().collect();
    let combos = minplus_combine_all(&refs, args.max_parts)?;
    let vols = profiles[0].volumes();
    let text = match args.format {
        FormatArg::Tsv => {
            let mut text = String::from("v\tvalue\tsplit\n");
            for (v, combo) in vols.iter().zip(combos.iter()) {
                let split = combo
                    .parts
                    .iter()
                    .map(|part| format!("{}:{}", part.profile, fmt_float(part.volume)))
                    .collect::<Vec<_>>()
                    .join(";");
                writeln!(text, "{}\t{}\t{}", fmt_float(*v), fmt_float(combo.value), split)?;
            }
            text
        }
        FormatArg::PlotData => plot_data(&[Series {
            name: "combined",
            rows: vols
                .iter()
                .zip(combos.iter())
                .map(|(&v, combo)| (v, combo.value))
                .collect(),
        }]),
    };
    write_out(args.output.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// constants

#[derive(Subcommand)]
enum ConstantsCommand {
    /// Sharp correction constant for the concavity transforms: C = -K at
    /// N = 2, else -K·N^3·theta^{(2-N)/(N-1)}/(2·(N-1)·(N+2)); needs K <= 0.
    Concavity(ConstConcavityArgs),
    /// Diameter bound for an isoperimetric region of volume vE with profile
    /// value IvE, from a ball-packing count at the covering radius
    /// r0 = omega^{-1/N}·min{v1^{1/N}, theta·vE/(4·IvE), theta/(4·C1·vE^{1/N})}.
    Diameter(ConstDiameterArgs),
    /// Diameter bound C·vE^{1/N} valid for isoperimetric regions of every
    /// volume in a nonnegatively curved space with asymptotic volume ratio avr.
    Avr(ConstAvrArgs),
    /// Largest number of parts when decomposing total measure V into parts
    /// of measure at least eps: floor(1 + V/eps).
    Nbar(ConstNbarArgs),
}

#[derive(Args)]
struct ConstConcavityArgs {
    /// Key=value file supplying any of this command's flags (explicit flags win).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Curvature parameter K (nonpositive).
    #[arg(long = "K", allow_negative_numbers = true)]
    ricci: Option<f64>,
    /// Dimension N (2 or larger).
    #[arg(long = "N")]
    dim: Option<f64>,
    /// Density lower bound theta (required when N > 2).
    #[arg(long)]
    theta: Option<f64>,
    /// Output path (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ConstDiameterArgs {
    /// Key=value file supplying any of this command's flags (explicit flags win).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Dimension N (at least 2).
    #[arg(long = "N")]
    dim: Option<f64>,
    /// Density lower bound theta.
    #[arg(long)]
    theta: Option<f64>,
    /// Volume threshold below which the density bounds hold.
    #[arg(long)]
    v1: Option<f64>,
    /// Density upper bound C1 (defaults to theta).
    #[arg(long = "C1")]
    c1: Option<f64>,
    /// Volume of the isoperimetric region.
    #[arg(long = "vE")]
    v_e: Option<f64>,
    /// Profile value at that volume.
    #[arg(long = "IvE")]
    i_ve: Option<f64>,
    /// Output path (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ConstAvrArgs {
    /// Key=value file supplying any of this command's flags (explicit flags win).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Dimension N (at least 2).
    #[arg(long = "N")]
    dim: Option<f64>,
    /// Asymptotic volume ratio in (0, 1].
    #[arg(long)]
    avr: Option<f64>,
    /// Volume of the isoperimetric region.
    #[arg(long = "vE")]
    v_e: Option<f64>,
    /// Output path (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ConstNbarArgs {
    /// Key=value file supplying any of this command's flags (explicit flags win).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Total measure to decompose.
    #[arg(long = "V")]
    total: Option<f64>,
    /// Smallest allowed part measure.
    #[arg(long)]
    eps: Option<f64>,
    /// Output path (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

fn require(name: &str, value: Option<f64>) -> Result<f64> {
    value.ok_or_else(|| anyhow!("{name} is required"))
}

fn cmd_constants(command: ConstantsCommand) -> Result<ExitCode> {
    match command {
        ConstantsCommand::Concavity(args) => {
            let cfg = match &args.config {
                Some(path) => KvConfig::load(path)?,
                None => KvConfig::empty(),
            };
            cfg.ensure_known(&["K", "N", "theta"])?;
            let ricci = require("--K", args.ricci.or(cfg.f64("K")?))?;
            let dim = require("--N", args.dim.or(cfg.f64("N")?))?;
            let theta = args.theta.or(cfg.f64("theta")?);
            let c = match (theta, dim == 2.0) {
                (Some(theta), _) => choose_concavity_constant(ricci, dim, theta)?,
                // At N = 2 the constant is -K whatever the density bound.
                (None, true) => choose_concavity_constant(ricci, dim, 1.0)?,
                (None, false) => bail!("--theta is required when N > 2"),
            };
            let mut text = format!("K={}\nN={}\n", fmt_float(ricci), fmt_float(dim));
            if let Some(theta) = theta {
                writeln!(text, "theta={}", fmt_float(theta))?;
            }
            writeln!(text, "C={}", fmt_float(c))?;
            write_out(args.output.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        ConstantsCommand::Diameter(args) => {
            let cfg = match &args.config {
                Some(path) => KvConfig::load(path)?,
                None => KvConfig::empty(),
            };
            cfg.ensure_known(&["N", "theta", "v1", "C1", "vE", "IvE"])?;
            let dim = require("--N", args.dim.or(cfg.f64("N")?))?;
            let theta = require("--theta", args.theta.or(cfg.f64("theta")?))?;
            let v1 = require("--v1", args.v1.or(cfg.f64("v1")?))?;
            let c1 = args.c1.or(cfg.f64("C1")?).unwrap_or(theta);
            let v_e = require("--vE", args.v_e.or(cfg.f64("vE")?))?;
            let i_ve = require("--IvE", args.i_ve.or(cfg.f64("IvE")?))?;
            let consts = SmallVolumeConstants::new(theta, v1, c1)?;
            let d = diameter_bound(dim, &consts, v_e, i_ve)?;
            let mut text = format!(
                "N={}\ntheta={}\nv1={}\nC1={}\nvE={}\nIvE={}\nr0={}\nbranch={}\nbound={}\n",
                fmt_float(dim),
                fmt_float(theta),
                fmt_float(v1),
                fmt_float(c1),
                fmt_float(v_e),
                fmt_float(i_ve),
                fmt_float(d.r0),
                d.active_branch.label(),
                fmt_float(d.bound)
            );
            if let Some(form) = d.small_volume_form {
                writeln!(text, "small_volume_form={}", fmt_float(form))?;
            }
            write_out(args.output.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        ConstantsCommand::Avr(args) => {
            let cfg = match &args.config {
                Some(path) => KvConfig::load(path)?,
                None => KvConfig::empty(),
            };
            cfg.ensure_known(&["N", "avr", "vE"])?;
            let dim = require("--N", args.dim.or(cfg.f64("N")?))?;
            let avr = require("--avr", args.avr.or(cfg.f64("avr")?))?;
            let v_e = require("--vE", args.v_e.or(cfg.f64("vE")?))?;
            let bound = avr_diameter_bound(dim, avr, v_e)?;
            let text = format!(
                "N={}\navr={}\nvE={}\nbound={}\n",
                fmt_float(dim),
                fmt_float(avr),
                fmt_float(v_e),
                fmt_float(bound)
            );
            write_out(args.output.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        ConstantsCommand::Nbar(args) => {
            let cfg = match &args.config {
                Some(path) => KvConfig::load(path)?,
                None => KvConfig::empty(),
            };
            cfg.ensure_known(&["V", "eps"])?;
            let total = require("--V", args.total.or(cfg.f64("V")?))?;
            let eps = require("--eps", args.eps.or(cfg.f64("eps")?))?;
            let nbar = decomposition_count_bound(total, eps)?;
            let text = format!(
                "V={}\neps={}\nnbar={nbar}\n",
                fmt_float(total),
                fmt_float(eps)
            );
            write_out(args.output.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
