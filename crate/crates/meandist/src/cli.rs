//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use meandist_core::bodies::BodyKind;
use meandist_core::extremal::bound_constants;
use meandist_core::intrinsic::{delta_estimate, ratio, v1_estimate, DeltaMethod, SphereQuadrature};
use meandist_core::meandist::{catalog_shape, exact_mean_distance, sylvester_p4};
use meandist_core::profiles::{
    functional_i, maximize_i, minimize_i, profile_from_body, rearrange, ExtractOptions, Profile,
};
use meandist_core::{ConvexBody, Estimate};

use crate::error::CliError;
use crate::exec::{resolve_threads, RayonExecutor};
use crate::report::{fmt_sig, round_sig, row_json, write_csv};
use crate::spec::{parse_body_spec, parse_profile_spec, ProfileSpec};
use crate::suites::{run_suite, Suite, VerifyConfig};

#[derive(Debug, Parser)]
#[command(name = "meandist", version, about = "Mean distance, first intrinsic volume and section profiles of convex bodies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; also the number of random streams.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = Output::Human)]
    pub output: Output,
    /// Shorthand for `--output json`.
    #[arg(long, conflicts_with_all = ["output", "csv"])]
    pub json: bool,
    /// Shorthand for `--output csv`.
    #[arg(long, conflicts_with = "output")]
    pub csv: bool,
}

impl Common {
    fn output(&self) -> Output {
        if self.json {
            Output::Json
        } else if self.csv {
            Output::Csv
        } else {
            self.output
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Mc,
    Chord,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProfileOp {
    Extract,
    #[value(name = "I")]
    I,
    Rearrange,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Max,
    Min,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mean distance of two uniform points.
    Delta {
        #[arg(long)]
        body: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Mc)]
        method: MethodArg,
        /// Point pairs for `mc`.
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// Directions for `chord`.
        #[arg(long, default_value_t = 10_000)]
        dirs: u64,
        /// Offsets per direction for `chord`.
        #[arg(long, default_value_t = 64)]
        offsets: u64,
        #[command(flatten)]
        common: Common,
    },
    /// First intrinsic volume.
    V1 {
        #[arg(long)]
        body: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        dirs: u64,
        /// Midpoint grid over angles instead of random directions (planar bodies).
        #[arg(long)]
        grid: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Ratio of mean distance to first intrinsic volume.
    Ratio {
        #[arg(long)]
        body: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Mc)]
        method: MethodArg,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 10_000)]
        dirs: u64,
        #[arg(long, default_value_t = 64)]
        offsets: u64,
        #[arg(long)]
        grid: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Probability that four uniform points in a planar body are in convex position.
    Sylvester {
        #[arg(long)]
        body: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Section profile of a body, its functional I, or its rearrangement.
    Profile {
        #[arg(long, required_unless_present = "profile", conflicts_with = "profile")]
        body: Option<PathBuf>,
        /// Profile JSON instead of a body.
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Comma-separated direction, normalized before use.
        #[arg(long, allow_hyphen_values = true)]
        direction: Option<String>,
        #[arg(long, value_enum, default_value_t = ProfileOp::Extract)]
        op: ProfileOp,
        #[arg(long, default_value_t = 129)]
        knots: usize,
        /// Points per section volume when d >= 3.
        #[arg(long, default_value_t = 20_000)]
        inner_samples: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Numerical extremes of I over piecewise-linear profiles.
    #[command(name = "optimize-I")]
    OptimizeI {
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, default_value_t = 9)]
        knots: usize,
        #[arg(long, default_value_t = 4000)]
        iters: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Run a verification suite; exits 1 if any check fails.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long = "d", value_delimiter = ',', default_value = "2,3")]
        dims: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.03,0.01,0.003,0.001")]
        deltas: Vec<f64>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 10_000)]
        dirs: u64,
        #[arg(long, default_value_t = 9)]
        knots: usize,
        #[arg(long, default_value_t = 4000)]
        iters: u64,
        /// Also write the report as CSV.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

/// Parses arguments, runs, and returns the process exit code:
/// 0 success, 1 verification failure, 2 input error.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.exit_code() == 0 {
                let _ = write!(out, "{}", e.render());
                return 0;
            }
            let _ = write!(err, "{}", e.render());
            return 2;
        }
    };
    match run(cli, out) {
        Ok(Outcome::Pass) => 0,
        Ok(Outcome::Fail) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn load_body(path: &Path) -> Result<ConvexBody, CliError> {
    parse_body_spec(&read(path)?)
}

struct Runtime {
    exec: RayonExecutor,
    threads: usize,
}

impl Runtime {
    fn new(flag: Option<usize>) -> Result<Self, CliError> {
        let threads = resolve_threads(flag).map_err(CliError::Usage)?;
        let exec = RayonExecutor::new(threads).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(Self { exec, threads })
    }
}

fn estimate_json(e: &Estimate) -> Value {
    json!({
        "value": round_sig(e.value),
        "std_error": round_sig(e.std_error),
        "n": e.n_samples,
        "method": e.method.as_str(),
        "seed": e.seed,
    })
}

fn emit_estimate(out: &mut dyn Write, format: Output, e: &Estimate, target: Option<f64>, config: Value) -> Result<(), CliError> {
    let io = |source| CliError::Io { path: "<stdout>".into(), source };
    match format {
        Output::Json => {
            let mut v = estimate_json(e);
            v["config"] = config;
            writeln!(out, "{v}").map_err(io)?;
        }
        Output::Csv => {
            writeln!(out, "value,std_error,n,method,seed").map_err(io)?;
            writeln!(out, "{},{},{},{},{}", fmt_sig(e.value), fmt_sig(e.std_error), e.n_samples, e.method, e.seed)
                .map_err(io)?;
        }
        Output::Human => {
            writeln!(out, "value      {}", fmt_sig(e.value)).map_err(io)?;
            writeln!(out, "std_error  {}", fmt_sig(e.std_error)).map_err(io)?;
            writeln!(out, "n          {}", e.n_samples).map_err(io)?;
            writeln!(out, "method     {}", e.method).map_err(io)?;
            writeln!(out, "seed       {}", e.seed).map_err(io)?;
            if let Some(t) = target {
                writeln!(out, "target     {}", fmt_sig(t)).map_err(io)?;
            }
        }
    }
    Ok(())
}

fn delta_method(method: MethodArg, samples: u64, dirs: u64, offsets: u64) -> DeltaMethod {
    match method {
        MethodArg::Mc => DeltaMethod::Mc { samples },
        MethodArg::Chord => DeltaMethod::Chord { n_dirs: dirs, n_offsets: offsets },
        MethodArg::Exact => DeltaMethod::Exact,
    }
}

fn quadrature(grid: bool, dirs: u64, seed: u64) -> SphereQuadrature {
    if grid {
        SphereQuadrature::Grid2d { n_angles: dirs }
    } else {
        SphereQuadrature::Mc { n_dirs: dirs, seed }
    }
}

fn delta_target(body: &ConvexBody) -> Option<f64> {
    catalog_shape(body).and_then(|s| exact_mean_distance(&s).ok())
}

/// Known four-point convex-position probabilities of planar bodies.
pub fn sylvester_target(body: &ConvexBody) -> Option<f64> {
    use std::f64::consts::PI;
    if body.dim() != 2 {
        return None;
    }
    match body.kind() {
        BodyKind::Simplex { .. } => Some(1.0 / 3.0),
        BodyKind::Box { .. } => Some(11.0 / 36.0),
        BodyKind::Ball { .. } | BodyKind::Ellipsoid { .. } => Some(35.0 / (12.0 * PI * PI)),
        BodyKind::RegularPolygon { n_sides, .. } => match n_sides {
            3 => Some(1.0 / 3.0),
            4 => Some(11.0 / 36.0),
            5 => Some((9.0 + 2.0 * 5f64.sqrt()) / 45.0),
            6 => Some(289.0 / 972.0),
            8 => Some((97.0 + 52.0 * 2f64.sqrt()) / 576.0),
            _ => None,
        },
        _ => None,
    }
}

fn parse_direction(text: &str, d: usize) -> Result<Vec<f64>, CliError> {
    let v: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad direction component {s:?}"))))
        .collect::<Result<_, _>>()?;
    if v.len() != d {
        return Err(CliError::Usage(format!("direction has {} components, body has dimension {d}", v.len())));
    }
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(n > 0.0 && n.is_finite()) {
        return Err(CliError::Usage("direction must be a nonzero finite vector".into()));
    }
    Ok(v.iter().map(|x| x / n).collect())
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let io = |source| CliError::Io { path: "<stdout>".into(), source };
    match cli.command {
        Command::Delta { body, method, samples, dirs, offsets, common } => {
            let rt = Runtime::new(common.threads)?;
            let k = load_body(&body)?;
            let e = delta_estimate(&k, delta_method(method, samples, dirs, offsets), common.seed, rt.threads, &rt.exec)?;
            let config = json!({
                "subcommand": "delta", "body": body, "method": e.method.as_str(), "samples": samples,
                "dirs": dirs, "offsets": offsets, "seed": common.seed, "threads": rt.threads,
            });
            emit_estimate(out, common.output(), &e, delta_target(&k), config)?;
        }
        Command::V1 { body, dirs, grid, common } => {
            let rt = Runtime::new(common.threads)?;
            let k = load_body(&body)?;
            let e = v1_estimate(&k, quadrature(grid, dirs, common.seed), rt.threads, &rt.exec)?;
            let target = k.perimeter().map(|p| p / 2.0);
            let config = json!({
                "subcommand": "v1", "body": body, "dirs": dirs, "grid": grid,
                "seed": common.seed, "threads": rt.threads,
            });
            let e = Estimate { seed: if grid { 0 } else { common.seed }, ..e };
            emit_estimate(out, common.output(), &e, target, config)?;
        }
        Command::Ratio { body, method, samples, dirs, offsets, grid, common } => {
            let rt = Runtime::new(common.threads)?;
            let k = load_body(&body)?;
            let r = ratio(
                &k,
                delta_method(method, samples, dirs, offsets),
                quadrature(grid, dirs, common.seed),
                common.seed,
                rt.threads,
                &rt.exec,
            )?;
            let b = bound_constants(k.dim().max(2))?;
            let config = json!({
                "subcommand": "ratio", "body": body, "method": r.delta.method.as_str(), "samples": samples,
                "dirs": dirs, "offsets": offsets, "grid": grid, "seed": common.seed, "threads": rt.threads,
            });
            match common.output() {
                Output::Json => {
                    let v = json!({
                        "value": round_sig(r.value),
                        "std_error": round_sig(r.std_error),
                        "delta": estimate_json(&r.delta),
                        "v1": estimate_json(&r.v1),
                        "lower": round_sig(b.lower),
                        "upper": round_sig(b.upper),
                        "config": config,
                    });
                    writeln!(out, "{v}").map_err(io)?;
                }
                Output::Csv => {
                    writeln!(out, "value,std_error,delta,delta_std_error,v1,v1_std_error,lower,upper").map_err(io)?;
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{},{}",
                        fmt_sig(r.value),
                        fmt_sig(r.std_error),
                        fmt_sig(r.delta.value),
                        fmt_sig(r.delta.std_error),
                        fmt_sig(r.v1.value),
                        fmt_sig(r.v1.std_error),
                        fmt_sig(b.lower),
                        fmt_sig(b.upper)
                    )
                    .map_err(io)?;
                }
                Output::Human => {
                    writeln!(out, "ratio      {} ± {}", fmt_sig(r.value), fmt_sig(r.std_error)).map_err(io)?;
                    writeln!(out, "delta      {} ± {}", fmt_sig(r.delta.value), fmt_sig(r.delta.std_error)).map_err(io)?;
                    writeln!(out, "v1         {} ± {}", fmt_sig(r.v1.value), fmt_sig(r.v1.std_error)).map_err(io)?;
                    writeln!(out, "bounds     ({}, {})", fmt_sig(b.lower), fmt_sig(b.upper)).map_err(io)?;
                }
            }
        }
        Command::Sylvester { body, samples, common } => {
            let rt = Runtime::new(common.threads)?;
            let k = load_body(&body)?;
            let e = sylvester_p4(&k, samples, common.seed, rt.threads, &rt.exec)?;
            let config = json!({
                "subcommand": "sylvester", "body": body, "samples": samples,
                "seed": common.seed, "threads": rt.threads,
            });
            emit_estimate(out, common.output(), &e, sylvester_target(&k), config)?;
        }
        Command::Profile { body, profile, direction, op, knots, inner_samples, common } => {
            let source = match (&body, &profile) {
                (Some(path), _) => {
                    let k = load_body(path)?;
                    let dir = direction
                        .as_deref()
                        .ok_or_else(|| CliError::Usage("--direction is required with --body".into()))?;
                    let u = parse_direction(dir, k.dim())?;
                    let opts = ExtractOptions { inner_samples, seed: common.seed };
                    profile_from_body(&k, &u, knots, &opts)?
                }
                (None, Some(path)) => {
                    if op == ProfileOp::Extract {
                        return Err(CliError::Usage("--op extract needs --body".into()));
                    }
                    parse_profile_spec(&read(path)?)?
                }
                (None, None) => return Err(CliError::Usage("give --body or --profile".into())),
            };
            let result: Profile = match op {
                ProfileOp::Rearrange => rearrange(&source)?,
                _ => source,
            };
            let value = functional_i(&result)?;
            let op_name = match op {
                ProfileOp::Extract => "extract",
                ProfileOp::I => "I",
                ProfileOp::Rearrange => "rearrange",
            };
            let config = json!({
                "subcommand": "profile", "body": body, "profile": profile, "direction": direction, "op": op_name,
                "knots": knots, "inner_samples": inner_samples, "seed": common.seed,
            });
            emit_profile(out, common.output(), op_name, &result, value, None, config)?;
        }
        Command::OptimizeI { d, mode, knots, iters, common } => {
            let (res, target, name) = match mode {
                Mode::Max => (maximize_i(d, knots, iters, common.seed)?, 1.0 / 3.0, "max"),
                Mode::Min => (minimize_i(d, knots, iters, common.seed)?, bound_constants(d)?.lower, "min"),
            };
            let config = json!({
                "subcommand": "optimize-I", "d": d, "mode": name, "knots": knots, "iters": iters, "seed": common.seed,
            });
            match common.output() {
                Output::Json => {
                    let v = json!({
                        "mode": name,
                        "value": round_sig(res.value),
                        "target": round_sig(target),
                        "accepted_moves": res.accepted_moves,
                        "iterations": res.iterations,
                        "profile": profile_json(&res.profile),
                        "config": config,
                    });
                    writeln!(out, "{v}").map_err(io)?;
                }
                format => {
                    let extra = Some((target, res.accepted_moves, res.iterations));
                    emit_profile(out, format, name, &res.profile, res.value, extra, config)?;
                }
            }
        }
        Command::Verify { suite, dims, deltas, samples, dirs, knots, iters, report, common } => {
            let rt = Runtime::new(common.threads)?;
            let cfg = VerifyConfig {
                suite,
                dims: dims.clone(),
                deltas: deltas.clone(),
                samples,
                dirs,
                knots,
                iters,
                seed: common.seed,
                streams: rt.threads,
            };
            let rows = run_suite(&cfg, &rt.exec)?;
            let passed = rows.iter().all(|r| r.pass);
            if let Some(path) = &report {
                let file = std::fs::File::create(path)
                    .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
                write_csv(&rows, file)?;
            }
            match common.output() {
                Output::Json => {
                    let v = json!({
                        "suite": suite.name(),
                        "passed": passed,
                        "rows": rows.iter().map(row_json).collect::<Vec<_>>(),
                        "config": {
                            "subcommand": "verify", "suite": suite.name(), "d": dims, "deltas": deltas,
                            "samples": samples, "dirs": dirs, "knots": knots, "iters": iters,
                            "seed": common.seed, "threads": rt.threads, "report": report,
                        },
                    });
                    writeln!(out, "{v}").map_err(io)?;
                }
                Output::Csv => write_csv(&rows, &mut *out)?,
                Output::Human => {
                    for r in &rows {
                        let delta = r.delta.map(|x| format!(" delta={}", fmt_sig(x))).unwrap_or_default();
                        writeln!(
                            out,
                            "{} {} d={}{} {} = {} ± {} (target {})",
                            if r.pass { "PASS" } else { "FAIL" },
                            r.suite,
                            r.d,
                            delta,
                            r.quantity,
                            fmt_sig(r.estimate),
                            fmt_sig(r.std_error),
                            fmt_sig(r.target)
                        )
                        .map_err(io)?;
                    }
                    let failed = rows.iter().filter(|r| !r.pass).count();
                    writeln!(out, "{} checks, {} failed", rows.len(), failed).map_err(io)?;
                }
            }
            return Ok(if passed { Outcome::Pass } else { Outcome::Fail });
        }
    }
    Ok(Outcome::Pass)
}

fn profile_json(p: &Profile) -> Value {
    let spec = ProfileSpec::from_profile(p);
    json!({
        "d": spec.d,
        "knots": spec.knots.iter().map(|x| round_sig(*x)).collect::<Vec<_>>(),
        "f": spec.f.iter().map(|x| round_sig(*x)).collect::<Vec<_>>(),
    })
}

fn emit_profile(
    out: &mut dyn Write,
    format: Output,
    op: &str,
    p: &Profile,
    value: f64,
    optimize: Option<(f64, u64, u64)>,
    config: Value,
) -> Result<(), CliError> {
    let io = |source| CliError::Io { path: "<stdout>".into(), source };
    match format {
        Output::Json => {
            let v = json!({ "op": op, "profile": profile_json(p), "value": round_sig(value), "config": config });
            writeln!(out, "{v}").map_err(io)?;
        }
        Output::Csv => {
            writeln!(out, "t,f,h").map_err(io)?;
            for (t, f) in p.knots().iter().zip(p.f_values()) {
                writeln!(out, "{},{},{}", fmt_sig(*t), fmt_sig(*f), fmt_sig(p.h_at(*t))).map_err(io)?;
            }
        }
        Output::Human => {
            writeln!(out, "{op}: I = {}", fmt_sig(value)).map_err(io)?;
            if let Some((target, accepted, iters)) = optimize {
                writeln!(out, "target {}  accepted moves {accepted} of {iters}", fmt_sig(target)).map_err(io)?;
            }
            writeln!(out, "{:>16} {:>16} {:>16}", "t", "f", "h").map_err(io)?;
            for (t, f) in p.knots().iter().zip(p.f_values()) {
                writeln!(out, "{:>16} {:>16} {:>16}", fmt_sig(*t), fmt_sig(*f), fmt_sig(p.h_at(*t))).map_err(io)?;
            }
        }
    }
    Ok(())
}
