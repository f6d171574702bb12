//! The `engel` command line: geodesics, cut times, stratum labels, minimizers
//! and boundary curves of the Engel group problem.
//!
//! Exit codes: 0 on success, 1 when a computation fails, 2 on bad usage or
//! configuration. Output depends only on the arguments and the configuration;
//! selftest timings go to stderr.

pub mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use engel_geodesics::cutlocus::{classify_point_with, k0, sample_curve, t_cut_with, CurveKind};
use engel_geodesics::expmap::{classify_with, trajectory, Covector, TrajectorySample};
use engel_geodesics::group::Point;
use engel_geodesics::selftest;
use engel_geodesics::synthesis::minimizers_with;
use serde::Serialize;

use config::{Config, Format, CONFIG_ENV};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(#[from] engel_geodesics::Error),
    #[error("{0}")]
    Failed(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "engel",
    version,
    about = "Sub-Riemannian geodesics on the Engel group"
)]
struct Cli {
    /// TOML config file; defaults to $ENGEL_CONFIG when set.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    format: Option<Format>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    eps_class: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    eps_strat: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    eps_zero: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct CovectorArgs {
    #[arg(long, allow_negative_numbers = true)]
    theta: f64,
    #[arg(long, allow_negative_numbers = true)]
    c: f64,
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
}

impl CovectorArgs {
    fn covector(&self) -> Covector {
        Covector::new(self.theta, self.c, self.alpha)
    }
}

/// A terminal point, by flags or as four positional numbers.
#[derive(Debug, Args)]
struct PointArgs {
    #[arg(num_args = 4, value_names = ["X", "Y", "Z", "W"], allow_negative_numbers = true,
          conflicts_with_all = ["x", "y", "z", "w"])]
    coords: Vec<f64>,
    #[arg(long, allow_negative_numbers = true)]
    x: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    y: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    z: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    w: Option<f64>,
}

impl PointArgs {
    fn point(&self) -> Result<Point, CliError> {
        if let [x, y, z, w] = self.coords[..] {
            return Ok(Point::new(x, y, z, w));
        }
        match (self.x, self.y, self.z, self.w) {
            (Some(x), Some(y), Some(z), Some(w)) => Ok(Point::new(x, y, z, w)),
            _ => Err(CliError::Usage(
                "a point needs --x --y --z --w, or four positional numbers".into(),
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Which {
    W1,
    W21,
    W22,
    Fix3,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sampled trajectory Exp(λ, s), s ∈ [0, t], with its (x, y) and (z, w) projections.
    Geodesic {
        #[command(flatten)]
        covector: CovectorArgs,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Cut time and covector class.
    CutTime {
        #[command(flatten)]
        covector: CovectorArgs,
    },
    /// Stratum label and number of minimizers.
    Classify {
        #[command(flatten)]
        point: PointArgs,
    },
    /// Every minimizer to a terminal point, as JSON.
    Synthesize {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, allow_negative_numbers = true)]
        tol: Option<f64>,
        #[arg(long)]
        family_samples: Option<usize>,
    },
    /// Boundary curve sampled on its parameter grid.
    Curves {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// The modulus k₀, root of 2E(k) = K(k), to 12 digits.
    K0,
    /// Runs the acceptance criteria; exits 1 if any fails.
    Selftest {
        /// Only these criteria (1..=12).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

/// Parses `args` (program name first), runs the command, and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn load_config(cli: &Cli) -> Result<Config, CliError> {
    let path = cli
        .config
        .clone()
        .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    let mut cfg = match path {
        Some(p) => Config::from_file(&p)?,
        None => Config::default(),
    };
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    let overrides = [
        (&mut cfg.eps_class, cli.eps_class),
        (&mut cfg.eps_strat, cli.eps_strat),
        (&mut cfg.eps_zero, cli.eps_zero),
    ];
    for (slot, v) in overrides {
        if let Some(v) = v {
            *slot = v;
        }
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    match &cli.command {
        Command::Geodesic {
            samples: Some(n), ..
        } => cfg.geodesic_samples = *n,
        Command::Curves { grid: Some(n), .. } => cfg.curve_grid = *n,
        Command::Synthesize {
            tol,
            family_samples,
            ..
        } => {
            cfg.tol = tol.unwrap_or(cfg.tol);
            cfg.family_samples = family_samples.unwrap_or(cfg.family_samples);
        }
        _ => {}
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, CliError> {
    let cfg = load_config(&cli)?;
    match cli.command {
        Command::Geodesic { covector, t, .. } => geodesic(&cfg, covector.covector(), t, out)?,
        Command::CutTime { covector } => cut_time(&cfg, covector.covector(), out)?,
        Command::Classify { point } => {
            let s = classify_point_with(point.point()?, cfg.classify_options())?;
            match cfg.format {
                Format::Csv => writeln!(out, "{} {}", s, s.multiplicity())?,
                Format::Json => json_line(
                    out,
                    &serde_json::json!({ "stratum": s, "label": s.label(), "multiplicity": s.multiplicity() }),
                )?,
            }
        }
        Command::Synthesize { point, .. } => {
            let res = minimizers_with(point.point()?, &cfg.synthesis_options())?;
            json_line(out, &res)?;
        }
        Command::Curves { which, .. } => curves(&cfg, which, out)?,
        Command::K0 => match cfg.format {
            Format::Csv => writeln!(out, "{:.12}", k0())?,
            Format::Json => json_line(out, &serde_json::json!({ "k0": k0() }))?,
        },
        Command::Selftest { only } => return run_selftest(&cfg, &only, out, err),
    }
    Ok(0)
}

fn json_line<T: Serialize>(out: &mut dyn Write, v: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, v).map_err(|e| CliError::Failed(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn geodesic(cfg: &Config, l: Covector, t: f64, out: &mut dyn Write) -> Result<(), CliError> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(CliError::Usage(format!(
            "--t must be finite and non-negative, got {t}"
        )));
    }
    let samples = trajectory(&l, t, cfg.geodesic_samples)?;
    match cfg.format {
        // the projections are column pairs (x, y) and (z, w)
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for s in &samples {
                w.serialize(s)
                    .map_err(|e| CliError::Failed(e.to_string()))?;
            }
            w.flush()?;
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Geodesic<'a> {
                covector: Covector,
                t: f64,
                samples: &'a [TrajectorySample],
                xy: Vec<[f64; 2]>,
                zw: Vec<[f64; 2]>,
            }
            json_line(
                out,
                &Geodesic {
                    covector: l,
                    t,
                    samples: &samples,
                    xy: samples.iter().map(|s| [s.x, s.y]).collect(),
                    zw: samples.iter().map(|s| [s.z, s.w]).collect(),
                },
            )?;
        }
    }
    Ok(())
}

fn cut_time(cfg: &Config, l: Covector, out: &mut dyn Write) -> Result<(), CliError> {
    let tc = t_cut_with(&l, cfg.eps_class)?;
    let class = classify_with(&l, cfg.eps_class);
    match cfg.format {
        Format::Csv => {
            write!(out, "{tc} {:?}", class.kind)?;
            if let Some(k) = class.k {
                write!(out, " k={k}")?;
            }
            writeln!(out)?;
        }
        // JSON has no infinity; an infinite cut time is null
        Format::Json => json_line(
            out,
            &serde_json::json!({
                "t_cut": tc.is_finite().then_some(tc),
                "class": class.kind,
                "k": class.k,
                "energy": class.energy,
            }),
        )?,
    }
    Ok(())
}

fn curves(cfg: &Config, which: Which, out: &mut dyn Write) -> Result<(), CliError> {
    let kind = match which {
        Which::W1 => CurveKind::W1,
        Which::W21 => CurveKind::W21,
        Which::W22 => CurveKind::W22,
        Which::Fix3 => CurveKind::Fix3,
    };
    let param = if matches!(which, Which::Fix3) {
        "p"
    } else {
        "k"
    };
    let rows: Vec<[f64; 3]> = sample_curve(kind, cfg.curve_grid)?
        .into_iter()
        .map(|s| [s.param, s.y, s.w])
        .collect();
    match cfg.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([param, "Y", "W"])
                .map_err(|e| CliError::Failed(e.to_string()))?;
            for r in &rows {
                w.serialize(r)
                    .map_err(|e| CliError::Failed(e.to_string()))?;
            }
            w.flush()?;
        }
        Format::Json => json_line(
            out,
            &serde_json::json!({ "curve": format!("{which:?}").to_lowercase(), "param": param, "rows": rows }),
        )?,
    }
    Ok(())
}

fn run_selftest(
    cfg: &Config,
    only: &[u8],
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<u8, CliError> {
    if let Some(bad) = only.iter().find(|id| !(1..=12).contains(*id)) {
        return Err(CliError::Usage(format!(
            "no criterion {bad}; ids run 1 to 12"
        )));
    }
    let ids: Vec<u8> = if only.is_empty() {
        selftest::CRITERIA.iter().map(|c| c.0).collect()
    } else {
        only.to_vec()
    };
    let opt = cfg.selftest_options();
    if cfg.format == Format::Csv {
        writeln!(out, "# configuration")?;
        for line in cfg.to_toml().lines() {
            writeln!(out, "# {line}")?;
        }
    }
    let mut reports = Vec::new();
    for id in ids {
        let r = selftest::run_one(id, &opt);
        writeln!(err, "criterion {id} took {:.2?}", r.elapsed)?;
        if cfg.format == Format::Csv {
            let tag = if r.passed { "PASS" } else { "FAIL" };
            writeln!(out, "criterion {:>2} {tag} {}: {}", r.id, r.name, r.detail)?;
        }
        reports.push(r);
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    match cfg.format {
        Format::Csv => writeln!(
            out,
            "{} of {} criteria passed",
            reports.len() - failed,
            reports.len()
        )?,
        Format::Json => {
            let rows: Vec<_> = reports
                .iter()
                .map(|r| serde_json::json!({ "id": r.id, "name": r.name, "passed": r.passed, "detail": r.detail }))
                .collect();
            json_line(out, &serde_json::json!({ "config": cfg, "criteria": rows }))?;
        }
    }
    Ok(u8::from(failed > 0))
}
