//! `cantorval` — certified classification of self-similar sets K = Σ + qK.
//!
//! Exit codes: 0 success, 2 invalid input, 3 inconclusive (a requested
//! certificate could not be decided within the depth or memory budget),
//! 1 failed verification.

use cantorval::bounds::{alpha_lower, alpha_lower_via_star};
use cantorval::classify::{classify, sweep, ClassifyOptions, SearchStatus};
use cantorval::nullseq::{qn_root, qn_sequence};
use cantorval::rational::{parse_rational, rational_string, Rational};
use cantorval::ratio::RatioValue;
use cantorval::render::{diagram_from_sweep, render_svg};
use cantorval::report::*;
use cantorval::sigma::{FiniteSigma, MultigeometricSpec};
use cantorval::sumsets::{cover_length, null_certificate, t12_check, SumsetBudget, T12Outcome};
use cantorval::verify::verify_str;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

/// Environment variable overriding the per-level sumset element cap.
const MEMORY_CAP_ENV: &str = "CANTORVAL_MAX_SUMSET_ELEMENTS";

#[derive(Parser)]
#[command(
    name = "cantorval",
    version,
    about = "Certified classification of self-similar sets K(Σ;q) and achievement sets"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify K(Σ;q): certified facts plus the trichotomy label.
    Classify(ClassifyArgs),
    /// Partition (0,1) into classified q-regions.
    Sweep(SweepArgs),
    /// Search for a zero-measure certificate |Σₙ|·qⁿ < 1.
    Nullcert(NullcertArgs),
    /// The Solomyak lower bound α̲(d).
    Bounds(BoundsArgs),
    /// Exact length of the depth-n interval cover (an upper bound for λ(K)).
    Cover(CoverArgs),
    /// Zero-measure certificates along the root sequence qₙ ↘ 1/|Σ|.
    Qnseq(QnseqArgs),
    /// Rational-ratio measure check at q = 1/(k+1) for integer Σ.
    T12(T12Args),
    /// Render the q-axis structure diagram as SVG with a JSON sidecar.
    Render(RenderArgs),
    /// Replay the certificates inside previously emitted JSON artifacts.
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct SigmaSource {
    /// Digit set as a comma-separated list of rationals, e.g. `0,2,3,5`.
    #[arg(long, group = "source")]
    sigma: Option<String>,
    /// Multigeometric coefficients `k0,k1,...,km` (optionally `;q`).
    #[arg(long, group = "source")]
    multigeometric: Option<String>,
    /// JSON file holding an array of rational strings.
    #[arg(long, group = "source")]
    sigma_json: Option<PathBuf>,
}

struct LoadedSigma {
    sigma: FiniteSigma,
    /// Σ came from a multigeometric sumset, so the trichotomy applies.
    known_achievement: bool,
    /// Ratio embedded in the multigeometric spec, if any.
    embedded_q: Option<RatioValue>,
}

#[derive(Args)]
struct OutputArgs {
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    source: SigmaSource,
    /// Ratio: a rational like `17/100`, or `qn:s,n` for the algebraic root.
    #[arg(long)]
    q: Option<String>,
    /// Maximum sumset depth for the zero-measure search.
    #[arg(long, default_value_t = 8)]
    depth: u32,
    /// Enclosure tolerance.
    #[arg(long, default_value = "1e-12")]
    tol: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    source: SigmaSource,
    /// Uniform grid denominator added to the exact critical points.
    #[arg(long, default_value_t = 210)]
    resolution: u32,
    #[arg(long, default_value_t = 3)]
    depth: u32,
    #[arg(long, default_value = "1e-12")]
    tol: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct NullcertArgs {
    #[command(flatten)]
    source: SigmaSource,
    /// Exact rational ratio.
    #[arg(long)]
    q: Option<String>,
    #[arg(long, default_value_t = 8)]
    max_depth: u32,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct BoundsArgs {
    /// Gap ratio d = δ(Σ)/diam(Σ), in (0, 1/2].
    #[arg(long)]
    d: String,
    #[arg(long, default_value = "1e-12")]
    tol: String,
    /// Also run the independent (*)-function oracle and report its enclosure.
    #[arg(long)]
    via_star: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CoverArgs {
    #[command(flatten)]
    source: SigmaSource,
    #[arg(long)]
    q: Option<String>,
    /// Cover depth n.
    #[arg(long)]
    depth: u32,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct QnseqArgs {
    #[command(flatten)]
    source: SigmaSource,
    /// Number of certificates to produce.
    #[arg(long, default_value_t = 3)]
    count: usize,
    #[arg(long, default_value = "1e-12")]
    tol: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct T12Args {
    #[command(flatten)]
    source: SigmaSource,
    /// Ratio of the form 1/(k+1); defaults to 1/|Σ|.
    #[arg(long)]
    q: Option<String>,
    #[arg(long, default_value_t = 10)]
    max_depth: u32,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    source: SigmaSource,
    /// Render a previously saved sweep artifact instead of sweeping.
    #[arg(long, group = "source")]
    from_sweep: Option<PathBuf>,
    #[arg(long, default_value_t = 210)]
    resolution: u32,
    #[arg(long, default_value_t = 3)]
    depth: u32,
    #[arg(long, default_value = "1e-12")]
    tol: String,
    /// SVG output path; the JSON sidecar lands next to it.
    #[arg(long, default_value = "diagram.svg")]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Artifact files to replay; `-` reads stdin.
    #[arg(required = true)]
    files: Vec<String>,
}

enum CliError {
    /// Bad input: exit 2.
    Invalid(String),
    /// A requested certificate is undecided within budget: exit 3.
    Inconclusive(String),
    /// Certificate replay failed: exit 1.
    VerificationFailed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Inconclusive(_) => 3,
            CliError::VerificationFailed(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Invalid(m) | CliError::Inconclusive(m) | CliError::VerificationFailed(m) => m,
        }
    }
}

fn invalid<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Invalid(e.to_string())
}

type CliResult = Result<(), CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Classify(a) => cmd_classify(a),
        Cmd::Sweep(a) => cmd_sweep(a),
        Cmd::Nullcert(a) => cmd_nullcert(a),
        Cmd::Bounds(a) => cmd_bounds(a),
        Cmd::Cover(a) => cmd_cover(a),
        Cmd::Qnseq(a) => cmd_qnseq(a),
        Cmd::T12(a) => cmd_t12(a),
        Cmd::Render(a) => cmd_render(a),
        Cmd::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cantorval: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

impl SigmaSource {
    fn load(&self) -> Result<LoadedSigma, CliError> {
        if let Some(list) = &self.sigma {
            return Ok(LoadedSigma {
                sigma: FiniteSigma::parse(list).map_err(invalid)?,
                known_achievement: false,
                embedded_q: None,
            });
        }
        if let Some(spec) = &self.multigeometric {
            let (sigma, embedded_q) = if spec.contains(';') {
                let mg = MultigeometricSpec::parse(spec).map_err(invalid)?;
                (mg.sumset().map_err(invalid)?, Some(mg.ratio))
            } else {
                let coeffs = spec
                    .split(',')
                    .map(parse_rational)
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(invalid)?;
                (
                    cantorval::sigma::sumset_of_multigeometric(&coeffs).map_err(invalid)?,
                    None,
                )
            };
            return Ok(LoadedSigma {
                sigma,
                known_achievement: true,
                embedded_q,
            });
        }
        if let Some(path) = &self.sigma_json {
            let text = std::fs::read_to_string(path).map_err(invalid)?;
            let sigma: FiniteSigma = serde_json::from_str(&text).map_err(invalid)?;
            return Ok(LoadedSigma {
                sigma,
                known_achievement: false,
                embedded_q: None,
            });
        }
        Err(CliError::Invalid(
            "one of --sigma, --multigeometric, --sigma-json is required".into(),
        ))
    }
}

fn parse_tol(s: &str) -> Result<Rational, CliError> {
    let tol = parse_rational(s).map_err(invalid)?;
    if tol <= Rational::from_integer(0.into()) {
        return Err(CliError::Invalid(format!("tolerance {s} must be positive")));
    }
    Ok(tol)
}

/// Parse `--q`: a rational string, or `qn:s,n` for the certified enclosure
/// of the root of x + … + x^{n−1} = 1/(s−1).
fn parse_q(raw: &str, tol: &Rational) -> Result<RatioValue, CliError> {
    if let Some(spec) = raw.strip_prefix("qn:") {
        let (s, n) = spec
            .split_once(',')
            .ok_or_else(|| CliError::Invalid(format!("expected qn:s,n, got `{raw}`")))?;
        let s: usize = s.trim().parse().map_err(invalid)?;
        let n: u32 = n.trim().parse().map_err(invalid)?;
        return qn_root(s, n, tol).map_err(invalid);
    }
    let q = parse_rational(raw).map_err(invalid)?;
    RatioValue::exact(q).map_err(invalid)
}

fn exact_q(raw: &str) -> Result<Rational, CliError> {
    let q = parse_rational(raw).map_err(invalid)?;
    RatioValue::exact(q.clone()).map_err(invalid)?;
    Ok(q)
}

fn require_q(q: &Option<String>) -> Result<&str, CliError> {
    q.as_deref()
        .ok_or_else(|| CliError::Invalid("--q is required".into()))
}

fn budget_from_env() -> Result<SumsetBudget, CliError> {
    match std::env::var(MEMORY_CAP_ENV) {
        Ok(v) => {
            let max_elements: u64 = v.parse().map_err(|_| {
                CliError::Invalid(format!("{MEMORY_CAP_ENV} must be an integer, got `{v}`"))
            })?;
            Ok(SumsetBudget { max_elements })
        }
        Err(_) => Ok(SumsetBudget::default()),
    }
}

fn emit<T: serde::Serialize>(value: &T, output: &OutputArgs) -> CliResult {
    if output.format != Format::Json {
        return Err(CliError::Invalid(
            "this subcommand only supports --format json".into(),
        ));
    }
    let text = serde_json::to_string_pretty(value).map_err(invalid)?;
    write_text(&format!("{text}\n"), output.out.as_deref())
}

fn write_text(text: &str, out: Option<&std::path::Path>) -> CliResult {
    match out {
        Some(path) => std::fs::write(path, text).map_err(invalid),
        None => {
            use std::io::Write;
            match std::io::stdout().write_all(text.as_bytes()) {
                Ok(()) => Ok(()),
                // closed pipe (e.g. `cantorval ... | head`) is not an error
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                Err(e) => Err(invalid(e)),
            }
        }
    }
}

fn cmd_classify(args: ClassifyArgs) -> CliResult {
    let loaded = args.source.load()?;
    let tol = parse_tol(&args.tol)?;
    let q = match &args.q {
        Some(raw) => parse_q(raw, &tol)?,
        None => loaded
            .embedded_q
            .clone()
            .ok_or_else(|| CliError::Invalid("--q is required".into()))?,
    };
    let opts = ClassifyOptions {
        depth_budget: args.depth,
        tol,
        budget: budget_from_env()?,
        known_achievement: loaded.known_achievement,
        ..ClassifyOptions::default()
    };
    let outcome = classify(&loaded.sigma, &q, &opts).map_err(invalid)?;
    let inconclusive = matches!(outcome.null_search, SearchStatus::BudgetExceeded { .. })
        || outcome.verdict.facts.is_empty();
    let report = VerdictReport::new(loaded.sigma, q, outcome);
    emit(&report, &args.output)?;
    if inconclusive {
        return Err(CliError::Inconclusive(
            "no fact decidable within the given budget".into(),
        ));
    }
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> CliResult {
    let loaded = args.source.load()?;
    let opts = ClassifyOptions {
        depth_budget: args.depth,
        tol: parse_tol(&args.tol)?,
        budget: budget_from_env()?,
        known_achievement: loaded.known_achievement,
        ..ClassifyOptions::default()
    };
    let result = sweep(&loaded.sigma, args.resolution, &opts).map_err(invalid)?;
    match args.output.format {
        Format::Json => {
            let report = SweepReport::new(loaded.sigma, args.resolution, args.depth, result);
            emit(&report, &args.output)
        }
        Format::Csv => {
            let spec = diagram_from_sweep(&result).map_err(invalid)?;
            let mut text = String::from("lo,hi,label\n");
            for seg in &spec.segments {
                text.push_str(&format!(
                    "{},{},{:?}\n",
                    rational_string(&seg.lo),
                    rational_string(&seg.hi),
                    seg.label
                ));
            }
            write_text(&text, args.output.out.as_deref())
        }
        Format::Svg => Err(CliError::Invalid(
            "use the render subcommand for SVG output".into(),
        )),
    }
}

fn cmd_nullcert(args: NullcertArgs) -> CliResult {
    let loaded = args.source.load()?;
    let q = exact_q(require_q(&args.q)?)?;
    let budget = budget_from_env()?;
    let cert = match null_certificate(&loaded.sigma, &q, args.max_depth, budget) {
        Ok(c) => c,
        Err(cantorval::sumsets::SumsetError::BudgetExceeded { depth_reached }) => {
            return Err(CliError::Inconclusive(format!(
                "memory budget exhausted at depth {depth_reached}; raise {MEMORY_CAP_ENV}"
            )));
        }
        Err(e) => return Err(invalid(e)),
    };
    let found = cert.is_some();
    let report = NullCertReport::new(loaded.sigma, q, args.max_depth, cert);
    emit(&report, &args.output)?;
    if !found {
        return Err(CliError::Inconclusive(format!(
            "no zero-measure certificate up to depth {}",
            args.max_depth
        )));
    }
    Ok(())
}

fn cmd_bounds(args: BoundsArgs) -> CliResult {
    let d = parse_rational(&args.d).map_err(invalid)?;
    let tol = parse_tol(&args.tol)?;
    let bound = alpha_lower(&d, &tol).map_err(invalid)?;
    let via_star = if args.via_star {
        Some(alpha_lower_via_star(&d, &tol).map_err(invalid)?)
    } else {
        None
    };
    emit(&AlphaReport::new(bound, via_star), &args.output)
}

fn cmd_cover(args: CoverArgs) -> CliResult {
    let loaded = args.source.load()?;
    let q = exact_q(require_q(&args.q)?)?;
    let budget = budget_from_env()?;
    let report = cover_length(&loaded.sigma, &q, args.depth, budget).map_err(invalid)?;
    match args.output.format {
        Format::Csv => {
            let mut text = String::from("lo,hi\n");
            for (lo, hi) in &report.intervals {
                text.push_str(&format!("{},{}\n", rational_string(lo), rational_string(hi)));
            }
            write_text(&text, args.output.out.as_deref())
        }
        Format::Json => emit(&CoverEnvelope::new(loaded.sigma, q, report), &args.output),
        Format::Svg => Err(CliError::Invalid("cover has no SVG form".into())),
    }
}

fn cmd_qnseq(args: QnseqArgs) -> CliResult {
    let loaded = args.source.load()?;
    let tol = parse_tol(&args.tol)?;
    let certs = qn_sequence(&loaded.sigma, args.count, &tol).map_err(invalid)?;
    emit(&QnSeqReport::new(loaded.sigma, certs), &args.output)
}

fn cmd_t12(args: T12Args) -> CliResult {
    let loaded = args.source.load()?;
    let q = match &args.q {
        Some(raw) => exact_q(raw)?,
        None => Rational::new(1.into(), (loaded.sigma.len() as i64).into()),
    };
    let budget = budget_from_env()?;
    let outcome = match t12_check(&loaded.sigma, &q, args.max_depth, budget) {
        Ok(o) => o,
        Err(cantorval::sumsets::SumsetError::BudgetExceeded { depth_reached }) => {
            return Err(CliError::Inconclusive(format!(
                "memory budget exhausted at depth {depth_reached}; raise {MEMORY_CAP_ENV}"
            )));
        }
        Err(e) => return Err(invalid(e)),
    };
    let inconclusive = matches!(outcome, T12Outcome::NoViolationUpTo { .. });
    let report = T12Report::new(loaded.sigma, q, args.max_depth, outcome);
    emit(&report, &args.output)?;
    if inconclusive {
        return Err(CliError::Inconclusive(format!(
            "no violation up to depth {}; positive measure not refuted",
            args.max_depth
        )));
    }
    Ok(())
}

fn cmd_render(args: RenderArgs) -> CliResult {
    let result = if let Some(path) = &args.from_sweep {
        let text = std::fs::read_to_string(path).map_err(invalid)?;
        let report: SweepReport = serde_json::from_str(&text).map_err(invalid)?;
        report.sweep
    } else {
        let loaded = args.source.load()?;
        let opts = ClassifyOptions {
            depth_budget: args.depth,
            tol: parse_tol(&args.tol)?,
            budget: budget_from_env()?,
            known_achievement: loaded.known_achievement,
            ..ClassifyOptions::default()
        };
        sweep(&loaded.sigma, args.resolution, &opts).map_err(invalid)?
    };
    let spec = diagram_from_sweep(&result).map_err(invalid)?;
    render_svg(&spec, &args.out).map_err(invalid)
}

fn cmd_verify(args: VerifyArgs) -> CliResult {
    let mut total: u64 = 0;
    let mut all_failures: Vec<String> = Vec::new();
    for file in &args.files {
        let text = if file == "-" {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf).map_err(invalid)?;
            buf
        } else {
            std::fs::read_to_string(file).map_err(invalid)?
        };
        let report = verify_str(&text).map_err(invalid)?;
        println!(
            "{file}: {} [{}] {} certificate(s)",
            if report.ok() { "ok" } else { "FAILED" },
            report.schema,
            report.certificates_checked
        );
        total += report.certificates_checked;
        all_failures.extend(report.failures.into_iter().map(|f| format!("{file}: {f}")));
    }
    if all_failures.is_empty() {
        println!(
            "verified {total}/{total} certificate(s) across {} artifact(s) (100%)",
            args.files.len()
        );
        Ok(())
    } else {
        for f in &all_failures {
            eprintln!("replay failure: {f}");
        }
        Err(CliError::VerificationFailed(format!(
            "{} certificate(s) failed replay",
            all_failures.len()
        )))
    }
}
