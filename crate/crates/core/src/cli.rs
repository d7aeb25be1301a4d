//! The `vdc` command line.
//!
//! Every subcommand writes to standard output or `--out PATH`. Exit codes:
//! 0 on success, 1 when a verification fails, 2 on usage errors.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::json;

use crate::fluctuation::{self, CauchyEnvelope, FluctuationSample};
use crate::irregularity::{self, LogMode, Method, Threshold};
use crate::numerics::{bit_len, fmt_f64, Dyadic, Rational};
use crate::vdc;
use crate::verify::{self, Fault, Limits, Suite, VerifyConfig};

#[derive(Debug, Parser)]
#[command(
    name = "vdc",
    version,
    about = "Exact discrepancy of the binary Van der Corput sequence"
)]
pub struct Cli {
    /// Worker threads for the exhaustive sweeps (output does not depend on it).
    #[arg(long, global = true, value_name = "J")]
    pub jobs: Option<usize>,

    /// Write the result here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print d_N exactly and as a 17-digit decimal.
    D {
        /// Any nonnegative integer (arbitrary size with the explicit method).
        n: String,
        #[arg(long, value_enum, default_value_t = DMethod::Explicit)]
        method: DMethod,
    },
    /// Emit d_n for FROM <= n < TO.
    Table {
        from: u64,
        to: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Brute-force D_N and D*_N from the sorted points, scaled by N.
    Oracle { n: u64 },
    /// Run a verification suite and print its JSON report.
    Verify(VerifyArgs),
    /// Count n < LIMIT with d_n below a threshold.
    Census(CensusArgs),
    /// Samples of the fluctuation psi_k on its grid, sorted by frac.
    Psi {
        #[arg(long)]
        level: u32,
        /// Evaluate at this point of [0, 1] only ("p/q" or decimal).
        #[arg(long)]
        x: Option<String>,
        /// Last level used to calibrate the envelope constant.
        #[arg(long, default_value_t = 20)]
        calibrate: u32,
    },
    /// Samples of the diatomic fluctuation S'(N)/N^log2(3), sorted by frac.
    Stern {
        #[arg(long)]
        level: u32,
    },
    /// Empirical CDF of the normalized discrepancy against the normal law.
    Clt {
        #[arg(long, default_value_t = 1 << 16)]
        limit: u64,
        #[arg(long, default_value_t = 64)]
        bins: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DMethod {
    Explicit,
    Recurrence,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all", value_parser = clap::builder::PossibleValuesParser::new(Suite::NAMES))]
    pub suite: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Override every exhaustive index range of the suite.
    #[arg(long)]
    pub limit: Option<u64>,
    /// Record wall time per check (makes the report nondeterministic).
    #[arg(long)]
    pub timings: bool,
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

#[derive(Debug, Args)]
pub struct CensusArgs {
    #[arg(long)]
    pub limit: u64,
    /// Absolute threshold t ("p/q").
    #[arg(long, conflicts_with_all = ["epsilon", "mode"], required_unless_present = "epsilon")]
    pub threshold: Option<String>,
    /// Logarithmic threshold epsilon * ln(.) ("p/q" or decimal).
    #[arg(long)]
    pub epsilon: Option<String>,
    #[arg(long, value_parser = ["index", "window"], default_value = "index")]
    pub mode: String,
    #[arg(long, value_parser = ["direct", "pruned"], default_value = "pruned")]
    pub method: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Verification,
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("i/o error: {e}"))
    }
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(format!("csv error: {e}"))
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Parses the process arguments and runs the command.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
            .map_err(|e| Failure::Usage(format!("--jobs: {e}")))?;
    }
    let mut out: Box<dyn Write> = match &cli.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let result = dispatch(&cli.command, &mut out);
    out.flush()?;
    result
}

fn dispatch(cmd: &Command, out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::D { n, method } => cmd_d(n, *method, out),
        Command::Table { from, to, format } => cmd_table(*from, *to, *format, out),
        Command::Oracle { n } => cmd_oracle(*n, out),
        Command::Verify(args) => cmd_verify(args, out),
        Command::Census(args) => cmd_census(args, out),
        Command::Psi { level, x, calibrate } => cmd_psi(*level, x.as_deref(), *calibrate, out),
        Command::Stern { level } => cmd_stern(*level, out),
        Command::Clt { limit, bins, format } => cmd_clt(*limit, *bins, *format, out),
    }
}

fn parse_rational(s: &str) -> Result<Rational, Failure> {
    s.parse::<Rational>()
        .or_else(|_| Rational::parse_decimal(s))
        .map_err(|_| Failure::Usage(format!("not a rational number: {s:?}")))
}

fn cmd_d(n: &str, method: DMethod, out: &mut dyn Write) -> Outcome {
    let big: BigUint = n
        .parse()
        .map_err(|_| Failure::Usage(format!("not a nonnegative integer: {n:?}")))?;
    let small =
        || u64::try_from(&big).map_err(|_| Failure::Usage(format!("{n} exceeds 2^64 - 1; use --method explicit")));
    let d = match method {
        DMethod::Explicit => vdc::d_explicit_big(&big),
        DMethod::Recurrence => vdc::d_recurrence(small()?),
        DMethod::Oracle => {
            let (ext, _) = vdc::discrepancy_oracle(small()?)?;
            Dyadic::from_rational(&ext).expect("oracle values are dyadic")
        }
    };
    writeln!(out, "{d} {}", fmt_f64(d.to_f64()))?;
    Ok(())
}

#[derive(Serialize)]
struct DRow {
    n: u64,
    d_exact: String,
    d_float: String,
}

fn cmd_table(from: u64, to: u64, format: Format, out: &mut dyn Write) -> Outcome {
    if from >= to {
        return Err(Failure::Usage(format!("empty range {from}..{to}")));
    }
    let exp = bit_len(to).max(1);
    let rows = vdc::d_stream(from, to, exp).map(|(n, v)| {
        let d = Dyadic::from_scaled(v, exp);
        DRow {
            n,
            d_exact: d.to_string(),
            d_float: fmt_f64(d.to_f64()),
        }
    });
    match format {
        Format::Csv => write_csv(out, rows),
        Format::Json => write_json(out, &rows.collect::<Vec<_>>()),
    }
}

fn write_csv<T: Serialize>(out: &mut dyn Write, rows: impl IntoIterator<Item = T>) -> Outcome {
    let mut w = csv::Writer::from_writer(out);
    let mut any = false;
    for r in rows {
        w.serialize(r)?;
        any = true;
    }
    if !any {
        return Err(Failure::Usage("nothing to write".into()));
    }
    w.flush()?;
    Ok(())
}

fn write_json<T: Serialize + ?Sized>(out: &mut dyn Write, value: &T) -> Outcome {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| Failure::Usage(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn cmd_oracle(n: u64, out: &mut dyn Write) -> Outcome {
    let (ext, star) = vdc::discrepancy_oracle(n)?;
    writeln!(
        out,
        "n = {n}\nN*D_N = {ext} ({})\nN*D*_N = {star} ({})",
        fmt_f64(ext.to_f64()),
        fmt_f64(star.to_f64())
    )?;
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Outcome {
    let suite: Suite = args.suite.parse()?;
    let mut config = VerifyConfig::new(suite);
    config.seed = args.seed;
    config.timed = args.timings;
    if let Some(l) = args.limit {
        config.limits = Limits::default().with_index_limit(l);
    }
    if args.inject_fault {
        config.fault = Some(Fault::CorruptRecurrence);
    }
    let report = verify::run(&config);
    writeln!(out, "{}", report.to_json())?;
    for r in report.records.iter().filter(|r| !r.passed()) {
        let w = r.witness.as_ref().map(|w| w.to_string()).unwrap_or_default();
        eprintln!("FAIL {}: {w}", r.id);
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

#[derive(Serialize)]
struct CensusRow {
    n_limit: u64,
    threshold: String,
    count: u64,
    method: String,
}

fn cmd_census(args: &CensusArgs, out: &mut dyn Write) -> Outcome {
    if args.limit < 2 {
        return Err(Failure::Usage("--limit must be at least 2".into()));
    }
    let threshold = match (&args.threshold, &args.epsilon) {
        (Some(t), _) => Threshold::Absolute(parse_rational(t)?),
        (None, Some(e)) => {
            let epsilon = parse_rational(e)?;
            if epsilon.is_negative() || epsilon.is_zero() {
                return Err(Failure::Usage("--epsilon must be positive".into()));
            }
            Threshold::Log {
                epsilon,
                mode: args.mode.parse::<LogMode>()?,
            }
        }
        (None, None) => return Err(Failure::Usage("give --threshold or --epsilon".into())),
    };
    let method: Method = args.method.parse()?;
    let report = irregularity::census(args.limit, &threshold, method);
    match args.format {
        Format::Csv => write_csv(
            out,
            [CensusRow {
                n_limit: report.limit,
                threshold: report.threshold.to_string(),
                count: report.count,
                method: report.method.to_string(),
            }],
        ),
        Format::Json => write_json(
            out,
            &json!({
                "n_limit": report.limit,
                "threshold": report.threshold,
                "count": report.count,
                "method": report.method,
                "empirical_exponent": report.exponent_text(),
            }),
        ),
    }
}

#[derive(Serialize)]
struct PsiRow {
    frac: String,
    r_rational: String,
    psi_float: String,
    level: u32,
    error_radius: String,
}

impl PsiRow {
    fn of(s: &FluctuationSample, radius: f64) -> Self {
        PsiRow {
            frac: fmt_f64(s.frac),
            r_rational: s.r_rational.to_string(),
            psi_float: fmt_f64(s.psi_value),
            level: s.level,
            error_radius: fmt_f64(radius),
        }
    }
}

fn check_level(level: u32, min: u32, max: u32) -> Outcome {
    if (min..=max).contains(&level) {
        Ok(())
    } else {
        Err(crate::Error::Level { level, min, max }.into())
    }
}

fn cmd_psi(level: u32, x: Option<&str>, calibrate: u32, out: &mut dyn Write) -> Outcome {
    check_level(calibrate, 5, 32)?;
    let envelope = CauchyEnvelope::calibrate(5, calibrate);
    match x {
        Some(x) => {
            let x = parse_rational(x)?;
            let s = fluctuation::psi_eval(&x, level, &envelope)?;
            write_csv(out, [PsiRow::of(&s, s.error_radius)])
        }
        None => {
            check_level(level, 2, 28)?;
            let radius = 2.0 * envelope.tail(level);
            write_csv(
                out,
                fluctuation::psi_sample_level(level)
                    .iter()
                    .map(|s| PsiRow::of(s, radius)),
            )
        }
    }
}

fn cmd_stern(level: u32, out: &mut dyn Write) -> Outcome {
    check_level(level, 1, 24)?;
    let mut samples = fluctuation::stern_psi_sample(level);
    samples.sort_by(|a, b| a.frac.total_cmp(&b.frac));
    write_csv(
        out,
        samples.iter().map(|s| PsiRow {
            frac: fmt_f64(s.frac),
            r_rational: s.s_prime.to_rational().to_string(),
            psi_float: fmt_f64(s.value.mid_f64()),
            level,
            error_radius: fmt_f64(s.value.radius_f64()),
        }),
    )
}

#[derive(Serialize)]
struct HistogramCsvRow {
    bin_left: String,
    bin_right: String,
    empirical_cdf: String,
    normal_cdf: String,
}

fn cmd_clt(limit: u64, bins: usize, format: Format, out: &mut dyn Write) -> Outcome {
    if limit < 4 || bins < 10 {
        return Err(Failure::Usage("clt needs --limit >= 4 and --bins >= 10".into()));
    }
    let report = irregularity::clt_histogram(limit, bins);
    match format {
        Format::Json => write_json(out, &report),
        Format::Csv => {
            write_csv(
                out,
                report.rows.iter().map(|r| HistogramCsvRow {
                    bin_left: fmt_f64(r.bin_left),
                    bin_right: fmt_f64(r.bin_right),
                    empirical_cdf: fmt_f64(r.empirical_cdf),
                    normal_cdf: fmt_f64(r.normal_cdf),
                }),
            )?;
            eprintln!(
                "ks_distance = {} (samples: {})",
                fmt_f64(report.ks_distance),
                report.samples
            );
            Ok(())
        }
    }
}
