//! Command-line front end. `run` parses arguments, writes all output to the
//! given writer and returns the process exit code; errors carry the violated
//! precondition.

mod reproduce;
mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bounds::{
    chernoff_upper_bound, error_lower_bound, evaluate_combination, harrow_ansatz_coefficients, kraus_product_span,
    search_positive_combination, CombinationSearchConfig, PositiveCombination, SearchOutcome,
};
use crate::channels::{harrow_channels, harrow_depolarized_channels, KrausChannel};
use crate::error::{Error, Result};
use crate::exponents::{
    chernoff_curve, chernoff_exponent, depolarizing_power, depolarizing_renyi, format_g12, hoeffding_curve,
    hoeffding_exponent, renyi_sup, ChannelSearch, ExponentSource, SearchConfig, Witness,
};
use crate::io::{load_channel, load_classical_pair, matrix_to_json};
use crate::linalg::DensityMatrix;
use crate::strategies::{
    classical_adaptive_optimum, classical_parallel_optimum, harrow_adaptive_script, nonadaptive_floor_check,
    run_adaptive_script,
};

pub use reproduce::EXAMPLE_IDS;
pub use verify::SUITES;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "QCHD_THREADS";

#[derive(Parser, Debug, Clone)]
#[command(
    name = "qchd",
    version,
    about = "Error exponents for discriminating two quantum channels"
)]
pub struct RunConfig {
    /// Master seed for every randomized search and sampler.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CurveKind {
    Hoeffding,
    Chernoff,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Hoeffding or Chernoff exponent curves, one CSV per parameter value.
    Curve(CurveArgs),
    /// Recompute a worked example and compare with the expected value.
    Reproduce {
        /// harrow-lambda | harrow-bound | harrow-adaptive | pure-chernoff | depolarizing-fig | amplitude-fig
        id: String,
        /// Also write the underlying data as CSV here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Run a property suite; nonzero exit if any property fails.
    Verify {
        /// nussbaum-szkola | exponent-identities | prop1-floor | classical-dp
        suite: String,
    },
    /// Search for a positive definite Kraus-product combination.
    Bound(BoundArgs),
    /// Adaptive protocol versus the non-adaptive floor for the Harrow channels.
    SeparateHarrow(SeparateArgs),
    /// Exact adaptive and parallel optima for a classical channel pair.
    ClassicalDp(DpArgs),
    /// Discrimination power of a channel: exponents optimized over input pairs.
    Power(PowerArgs),
}

#[derive(Args, Debug, Clone)]
pub struct ChannelArgs {
    /// depolarizing | pauli | amplitude-damping, or a channel JSON file
    #[arg(long)]
    pub channel: String,
    /// Parameter values (q, or gamma for amplitude damping), comma separated.
    #[arg(
        long = "q",
        visible_alias = "gamma",
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    pub params: Vec<f64>,
    /// Compare against this channel over product inputs ("name:param" or a file)
    /// instead of optimizing over input pairs of one channel.
    #[arg(long)]
    pub versus: Option<String>,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    #[arg(long, default_value_t = 64)]
    pub theta_points: usize,
    #[arg(long, default_value_t = 128)]
    pub phi_points: usize,
    #[arg(long, default_value_t = 16)]
    pub pair_theta_points: usize,
    #[arg(long, default_value_t = 32)]
    pub pair_phi_points: usize,
    /// Random starting inputs beyond qubits.
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
}

impl GridArgs {
    fn config(&self, seed: u64) -> SearchConfig {
        SearchConfig {
            theta_points: self.theta_points,
            phi_points: self.phi_points,
            pair_theta_points: self.pair_theta_points,
            pair_phi_points: self.pair_phi_points,
            restarts: self.restarts,
            seed,
            ..SearchConfig::default()
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct CurveArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, value_enum, default_value_t = CurveKind::Hoeffding)]
    pub kind: CurveKind,
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    /// Right end of the r grid (default: the Stein exponent).
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Fixed b for Chernoff curves.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct BoundArgs {
    /// Channel file; defaults to the Harrow pair.
    #[arg(long, requires = "versus")]
    pub channel: Option<PathBuf>,
    #[arg(long)]
    pub versus: Option<PathBuf>,
    /// Mix the Harrow pair with the completely depolarizing channel.
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
    /// Evaluate the hand-built Harrow combination instead of searching.
    #[arg(long)]
    pub ansatz: bool,
    #[arg(long, default_value_t = crate::bounds::DEFAULT_RESTARTS)]
    pub restarts: usize,
}

#[derive(Args, Debug, Clone)]
pub struct SeparateArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 500)]
    pub samples: usize,
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
}

#[derive(Args, Debug, Clone)]
pub struct DpArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub b: f64,
    /// JSON file {"W": [[...]], "Wbar": [[...]]}
    #[arg(long)]
    pub pair: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct PowerArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// Orders for sup D_alpha.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.25, 0.5, 0.75])]
    pub alpha: Vec<f64>,
    /// Also report B(r).
    #[arg(long)]
    pub r: Option<f64>,
    /// Also report C(a, b) (needs both).
    #[arg(long, requires = "cb", allow_negative_numbers = true)]
    pub ca: Option<f64>,
    #[arg(long, requires = "ca", allow_negative_numbers = true)]
    pub cb: Option<f64>,
}

/// Applies QCHD_THREADS to the global pool; unset means rayon's default.
pub fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Usage(format!("{THREADS_ENV} must be a positive integer, got '{raw}'")))?;
    // a second initialization (tests) keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<i32>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            write!(out, "{e}")?;
            return Ok(0);
        }
        Err(e) => return Err(Error::Usage(e.to_string().trim_end().to_string())),
    };
    execute(&cfg, out)
}

pub fn execute(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    match &cfg.command {
        Command::Curve(a) => cmd_curve(cfg, a, out),
        Command::Reproduce { id, out_dir } => reproduce::run(id, out_dir.as_deref(), cfg, out),
        Command::Verify { suite } => verify::run(suite, cfg, out),
        Command::Bound(a) => cmd_bound(cfg, a, out),
        Command::SeparateHarrow(a) => cmd_separate(cfg, a, out),
        Command::ClassicalDp(a) => cmd_classical_dp(cfg, a, out),
        Command::Power(a) => cmd_power(cfg, a, out),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Family {
    Depolarizing,
    Pauli,
    AmplitudeDamping,
}

impl Family {
    fn parse(name: &str) -> Option<Self> {
        match name {
            "depolarizing" => Some(Self::Depolarizing),
            "pauli" => Some(Self::Pauli),
            "amplitude-damping" => Some(Self::AmplitudeDamping),
            _ => None,
        }
    }

    fn build(self, p: f64) -> Result<KrausChannel> {
        match self {
            Self::Depolarizing => KrausChannel::depolarizing(p),
            Self::Pauli => KrausChannel::pauli([1.0 - 0.75 * p, 0.25 * p, 0.25 * p, 0.25 * p]),
            Self::AmplitudeDamping => KrausChannel::amplitude_damping(p),
        }
    }
}

/// Resolves a channel argument into (label, channel) per parameter value.
fn resolve_channels(args: &ChannelArgs) -> Result<Vec<(String, Option<f64>, KrausChannel)>> {
    if let Some(fam) = Family::parse(&args.channel) {
        if args.params.is_empty() {
            return Err(Error::Usage(format!(
                "--channel {} needs at least one parameter value, e.g. --q 0.2,0.5",
                args.channel
            )));
        }
        return args
            .params
            .iter()
            .map(|&p| Ok((format!("{}_{}", args.channel, format_g12(p)), Some(p), fam.build(p)?)))
            .collect();
    }
    let path = Path::new(&args.channel);
    if !path.exists() {
        return Err(Error::Usage(format!(
            "--channel '{}' is neither depolarizing, pauli, amplitude-damping nor an existing file",
            args.channel
        )));
    }
    if !args.params.is_empty() {
        return Err(Error::Usage(
            "parameter values only apply to built-in channel families".into(),
        ));
    }
    let stem = path
        .file_stem()
        .map_or("channel".into(), |s| s.to_string_lossy().into_owned());
    Ok(vec![(stem, None, load_channel(path)?)])
}

fn resolve_single(spec: &str) -> Result<KrausChannel> {
    if let Some((name, p)) = spec.split_once(':') {
        if let Some(fam) = Family::parse(name) {
            let p: f64 = p
                .parse()
                .map_err(|_| Error::Usage(format!("bad parameter in channel spec '{spec}'")))?;
            return fam.build(p);
        }
    }
    let path = Path::new(spec);
    if path.exists() {
        return load_channel(path);
    }
    Err(Error::Usage(format!(
        "channel spec '{spec}' is neither name:param (e.g. depolarizing:0.3) nor an existing file"
    )))
}

fn source_for(args: &ChannelArgs, ch: &KrausChannel, seed: u64) -> Result<ChannelSearch> {
    let cfg = args.grid.config(seed);
    match &args.versus {
        Some(spec) => ChannelSearch::inputs(ch, &resolve_single(spec)?, &cfg),
        None => ChannelSearch::pairs(ch, &cfg),
    }
}

pub(crate) fn witness_json(w: &Witness) -> Value {
    let state = |rho: &DensityMatrix| match rho.bloch_vector() {
        Ok(b) => json!({ "bloch": b }),
        Err(_) => json!({ "matrix": matrix_to_json(rho.matrix()) }),
    };
    match w {
        Witness::FixedPair => json!("fixed pair"),
        Witness::Letter { index, label } => json!({ "letter": index, "label": label }),
        Witness::Input(rho) => json!({ "input": state(rho) }),
        Witness::Pair(a, b) => json!({ "pair": [state(a), state(b)] }),
    }
}

pub(crate) fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(format_g12(x))
    }
}

fn write_json(out: &mut dyn Write, v: &Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v)?)?;
    Ok(())
}

fn cmd_curve(cfg: &RunConfig, a: &CurveArgs, out: &mut dyn Write) -> Result<i32> {
    if a.points == 0 {
        return Err(Error::Usage("--points must be at least 1".into()));
    }
    let channels = resolve_channels(&a.channel)?;
    std::fs::create_dir_all(&a.out_dir).map_err(|e| Error::Io(format!("{}: {e}", a.out_dir.display())))?;
    let kind = match a.kind {
        CurveKind::Hoeffding => "hoeffding",
        CurveKind::Chernoff => "chernoff",
    };
    let mut entries = Vec::new();
    for (label, param, ch) in &channels {
        let src = source_for(&a.channel, ch, cfg.seed)?;
        let (stein, reverse) = (src.stein(), src.reverse_stein());
        let (csv, extra) = match a.kind {
            CurveKind::Hoeffding => {
                let curve = hoeffding_curve(&src, a.r_max, a.points)?;
                let first = curve.samples.first().map(|s| s.b);
                let last = curve.samples.last().map(|s| (s.r, s.b));
                let extra = json!({
                    "B_at_0": first.map(num),
                    "r_last": last.map(|l| num(l.0)),
                    "B_at_r_last": last.map(|l| num(l.1)),
                    "shape_violations": curve.shape_violations(),
                });
                (curve.to_csv(), extra)
            }
            CurveKind::Chernoff => {
                let curve = chernoff_curve(&src, a.b, a.points)?;
                (curve.to_csv(), json!({ "b": a.b }))
            }
        };
        let file = format!("{label}_{kind}.csv");
        let path = a.out_dir.join(&file);
        std::fs::write(&path, csv).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        entries.push(json!({
            "channel": label,
            "param": param,
            "csv": file,
            "stein": num(stein.value),
            "reverse_stein": num(reverse.value),
            "stein_witness": witness_json(&stein.witness),
            "stein_grid_value": num(stein.grid_value),
            "search_method": stein.search_method,
            "candidates": src.candidate_count(),
            "curve": extra,
        }));
        if cfg.format == Format::Text {
            writeln!(
                out,
                "{label}: D = {}, reverse D = {} -> {}",
                format_g12(stein.value),
                format_g12(reverse.value),
                path.display()
            )?;
        }
    }
    let summary = json!({ "kind": kind, "points": a.points, "seed": cfg.seed, "curves": entries });
    let stem = match Family::parse(&a.channel.channel) {
        Some(_) => a.channel.channel.clone(),
        None => Path::new(&a.channel.channel)
            .file_stem()
            .map_or("channel".into(), |s| s.to_string_lossy().into_owned()),
    };
    let name = format!("{stem}_{kind}_summary.json");
    let spath = a.out_dir.join(name);
    let mut text = serde_json::to_string_pretty(&summary)?;
    text.push('\n');
    std::fs::write(&spath, text).map_err(|e| Error::Io(format!("{}: {e}", spath.display())))?;
    match cfg.format {
        Format::Text => writeln!(out, "summary -> {}", spath.display())?,
        Format::Json => write_json(out, &summary)?,
    }
    Ok(0)
}

fn cmd_power(cfg: &RunConfig, a: &PowerArgs, out: &mut dyn Write) -> Result<i32> {
    if let Some(&bad) = a.alpha.iter().find(|x| !(**x > 0.0 && **x < 1.0)) {
        return Err(Error::AlphaOutOfRange(bad));
    }
    let fam = Family::parse(&a.channel.channel);
    let mut rows = Vec::new();
    for (label, param, ch) in resolve_channels(&a.channel)? {
        let src = source_for(&a.channel, &ch, cfg.seed)?;
        let stein = src.stein();
        let mut renyi = Vec::new();
        for &alpha in &a.alpha {
            let opt = renyi_sup(&src, alpha)?;
            let closed = match (fam, param, &a.channel.versus) {
                (Some(Family::Depolarizing | Family::Pauli), Some(q), None) => Some(depolarizing_renyi(q, alpha)?),
                _ => None,
            };
            renyi.push(json!({
                "alpha": alpha,
                "value": num(opt.value),
                "grid_value": num(opt.grid_value),
                "closed_form": closed,
                "witness": witness_json(&opt.witness),
            }));
        }
        let closed_d = match (fam, param, &a.channel.versus) {
            (Some(Family::Depolarizing | Family::Pauli), Some(q), None) => Some(depolarizing_power(q)?),
            _ => None,
        };
        let mut row = json!({
            "channel": label,
            "D": num(stein.value),
            "D_closed_form": closed_d,
            "D_witness": witness_json(&stein.witness),
            "search_method": stein.search_method,
            "renyi": renyi,
        });
        if let Some(r) = a.r {
            let o = hoeffding_exponent(&src, r)?;
            row["hoeffding"] = json!({ "r": r, "B": num(o.value), "alpha_star": o.alpha_star });
        }
        if let (Some(ca), Some(cb)) = (a.ca, a.cb) {
            let o = chernoff_exponent(&src, ca, cb)?;
            row["chernoff"] = json!({ "a": ca, "b": cb, "C": num(o.value), "alpha_star": o.alpha_star });
        }
        rows.push(row);
    }
    match cfg.format {
        Format::Json => write_json(out, &json!(rows))?,
        Format::Text => {
            let g = |v: &Value| {
                v.as_f64()
                    .map_or_else(|| v.as_str().unwrap_or("-").to_string(), format_g12)
            };
            for row in &rows {
                writeln!(out, "{}", row["channel"].as_str().unwrap_or_default())?;
                let mut lines = vec![("D(M)".to_string(), g(&row["D"]), g(&row["D_closed_form"]))];
                for r in row["renyi"].as_array().into_iter().flatten() {
                    lines.push((
                        format!("sup D_{}", g(&r["alpha"])),
                        g(&r["value"]),
                        g(&r["closed_form"]),
                    ));
                }
                if let Some(h) = row.get("hoeffding") {
                    lines.push((format!("B({})", g(&h["r"])), g(&h["B"]), "-".into()));
                }
                if let Some(c) = row.get("chernoff") {
                    lines.push((format!("C({}, {})", g(&c["a"]), g(&c["b"])), g(&c["C"]), "-".into()));
                }
                writeln!(out, "  {:<14} {:<20} closed form", "", "search")?;
                for (name, v, closed) in lines {
                    writeln!(out, "  {name:<14} {v:<20} {closed}")?;
                }
            }
        }
    }
    Ok(0)
}

fn bound_channels(a: &BoundArgs) -> Result<(KrausChannel, KrausChannel, &'static str)> {
    match (&a.channel, &a.versus) {
        (Some(c), Some(v)) => Ok((load_channel(c)?, load_channel(v)?, "files")),
        (None, None) if a.eps == 0.0 => {
            let (m, mb) = harrow_channels();
            Ok((m, mb, "harrow"))
        }
        (None, None) => {
            let (m, mb) = harrow_depolarized_channels(a.eps)?;
            Ok((m, mb, "harrow-depolarized"))
        }
        _ => Err(Error::Usage("--channel and --versus go together".into())),
    }
}

fn combination_json(pc: &PositiveCombination) -> Result<Value> {
    Ok(json!({
        "lambda_min": pc.lambda_min,
        "hermiticity_residual": pc.hermiticity_residual,
        "coefficients": pc.coefficients.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>(),
        "error_floor_n1": error_lower_bound(pc, 1)?,
        "chernoff_upper_bound": chernoff_upper_bound(pc)?,
    }))
}

fn cmd_bound(cfg: &RunConfig, a: &BoundArgs, out: &mut dyn Write) -> Result<i32> {
    let (m, mb, which) = bound_channels(a)?;
    let span = kraus_product_span(&m, &mb)?;
    let outcome = if a.ansatz {
        if which != "harrow" {
            return Err(Error::Usage(
                "--ansatz applies to the undepolarized Harrow pair only".into(),
            ));
        }
        match evaluate_combination(&span, &harrow_ansatz_coefficients()) {
            Ok(pc) => SearchOutcome::Found(pc),
            Err(Error::NotPositive { lambda_min }) => SearchOutcome::NotFound {
                best_lambda_min: lambda_min,
            },
            Err(e) => return Err(e),
        }
    } else {
        search_positive_combination(
            &span,
            &CombinationSearchConfig {
                restarts: a.restarts,
                seed: cfg.seed,
            },
        )
    };
    let report = match &outcome {
        SearchOutcome::Found(pc) => {
            let mut v = combination_json(pc)?;
            v["found"] = json!(true);
            v
        }
        SearchOutcome::NotFound { best_lambda_min } => {
            json!({ "found": false, "best_lambda_min": num(*best_lambda_min) })
        }
    };
    let mut report = report;
    report["channels"] = json!(which);
    report["products"] = json!(span.len());
    match cfg.format {
        Format::Json => write_json(out, &report)?,
        Format::Text => match &outcome {
            SearchOutcome::Found(pc) => {
                writeln!(out, "products in span      : {}", span.len())?;
                writeln!(out, "lambda_min(P)         : {}", format_g12(pc.lambda_min))?;
                writeln!(out, "error floor (n = 1)   : {}", format_g12(error_lower_bound(pc, 1)?))?;
                writeln!(out, "Chernoff upper bound  : {}", format_g12(chernoff_upper_bound(pc)?))?;
                writeln!(out, "coefficients (i, j, re, im), |c| > 1e-6:")?;
                let cols = span.shape.1;
                for (k, c) in pc.coefficients.iter().enumerate() {
                    if c.norm() > 1e-6 {
                        writeln!(
                            out,
                            "  {} {} {} {}",
                            k / cols + 1,
                            k % cols + 1,
                            format_g12(c.re),
                            format_g12(c.im)
                        )?;
                    }
                }
            }
            SearchOutcome::NotFound { best_lambda_min } => {
                writeln!(
                    out,
                    "no positive definite combination found (best lambda_min {})",
                    format_g12(*best_lambda_min)
                )?;
            }
        },
    }
    Ok(if outcome.found().is_some() { 0 } else { 1 })
}

fn cmd_separate(cfg: &RunConfig, a: &SeparateArgs, out: &mut dyn Write) -> Result<i32> {
    let (m, mb) = harrow_depolarized_channels(a.eps)?;
    let span = kraus_product_span(&m, &mb)?;
    let pc = if a.eps == 0.0 {
        evaluate_combination(&span, &harrow_ansatz_coefficients())?
    } else {
        match search_positive_combination(
            &span,
            &CombinationSearchConfig {
                seed: cfg.seed,
                ..Default::default()
            },
        ) {
            SearchOutcome::Found(pc) => pc,
            SearchOutcome::NotFound { best_lambda_min } => {
                return Err(Error::NotPositive {
                    lambda_min: best_lambda_min,
                })
            }
        }
    };
    let adaptive = run_adaptive_script(&m, &mb, &harrow_adaptive_script())?;
    let floor = nonadaptive_floor_check(&m, &mb, &pc, a.n, a.samples, cfg.seed)?;
    let separated = floor.holds() && adaptive.bayes < floor.floor;
    let report = json!({
        "eps": a.eps,
        "adaptive_error_n2": adaptive.bayes,
        "lambda_min": pc.lambda_min,
        "n": a.n,
        "samples": a.samples,
        "floor": floor.floor,
        "min_sampled_parallel_error": floor.min_error,
        "floor_violations": floor.violations,
        "separated": separated,
    });
    match cfg.format {
        Format::Json => write_json(out, &report)?,
        Format::Text => {
            writeln!(out, "adaptive two-use protocol error : {}", format_g12(adaptive.bayes))?;
            writeln!(out, "lambda_min(P)                   : {}", format_g12(pc.lambda_min))?;
            writeln!(
                out,
                "parallel floor (n = {})          : {}",
                a.n,
                format_g12(floor.floor)
            )?;
            writeln!(
                out,
                "min sampled parallel error      : {} over {} inputs ({} below floor)",
                format_g12(floor.min_error),
                a.samples,
                floor.violations
            )?;
            writeln!(
                out,
                "verdict: {}",
                if separated {
                    "SEPARATED (adaptive beats every parallel strategy)"
                } else {
                    "NOT SEPARATED at this n"
                }
            )?;
        }
    }
    Ok(if floor.holds() { 0 } else { 1 })
}

fn cmd_classical_dp(cfg: &RunConfig, a: &DpArgs, out: &mut dyn Write) -> Result<i32> {
    let pair = load_classical_pair(&a.pair)?;
    let ad = classical_adaptive_optimum(&pair, a.n, a.a, a.b)?;
    let par = classical_parallel_optimum(&pair, a.n, a.a, a.b)?;
    let nf = a.n as f64;
    let report = json!({
        "n": a.n,
        "a": a.a,
        "b": a.b,
        "adaptive": ad,
        "parallel": par,
        "adaptive_rate": num(-ad.log2() / nf),
        "parallel_rate": num(-par.log2() / nf),
        "chernoff_exponent": num(pair.chernoff_exponent()),
        "convention": "objective 2^(an) type1 + 2^(bn) type2; a = b = 0 gives twice the Bayes error",
    });
    match cfg.format {
        Format::Json => write_json(out, &report)?,
        Format::Text => {
            writeln!(
                out,
                "adaptive optimum : {}  (-(1/n) log2 = {})",
                format_g12(ad),
                format_g12(-ad.log2() / nf)
            )?;
            writeln!(
                out,
                "parallel optimum : {}  (-(1/n) log2 = {})",
                format_g12(par),
                format_g12(-par.log2() / nf)
            )?;
            writeln!(
                out,
                "single-letter Chernoff exponent : {}",
                format_g12(pair.chernoff_exponent())
            )?;
            writeln!(
                out,
                "objective: 2^(an) type1 + 2^(bn) type2 (twice the Bayes error at a = b = 0)"
            )?;
        }
    }
    Ok(0)
}

/// One checked quantity, printed as a PASS/FAIL line.
#[derive(Clone, Debug)]
pub(crate) struct Check {
    pub name: String,
    pub detail: String,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            detail: detail.into(),
            pass,
        }
    }
}

pub(crate) fn report_checks(checks: &[Check], format: Format, out: &mut dyn Write) -> Result<i32> {
    let ok = checks.iter().all(|c| c.pass);
    match format {
        Format::Text => {
            for c in checks {
                writeln!(out, "{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail)?;
            }
            writeln!(out, "{}", if ok { "all checks passed" } else { "some checks FAILED" })?;
        }
        Format::Json => {
            let v: Vec<Value> = checks
                .iter()
                .map(|c| json!({ "name": c.name, "pass": c.pass, "detail": c.detail }))
                .collect();
            write_json(out, &json!({ "pass": ok, "checks": v }))?;
        }
    }
    Ok(if ok { 0 } else { 1 })
}

#[cfg(test)]
mod tests;
