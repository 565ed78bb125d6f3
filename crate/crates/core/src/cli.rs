//! `trigzeta` command line: argument parsing, validation and execution.
//!
//! Parsing produces a fully validated [`CliConfig`]; nothing is computed
//! until [`execute`] runs it.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::convergence::{fmt_complex, run_sweep, QSchedule};
use crate::error::Error;
use crate::oracle::reference_zeta;
use crate::suites::{run_suite, Suite};
use crate::trig::{classical_form, finite_trig_sum, ClassicalForm, TrigKind, TrigSumSpec};
use crate::ComplexScalar;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "trigzeta",
    version,
    about = "Riemann zeta from cotangent/cosecant power-sum limits"
)]
struct RawArgs {
    #[command(subcommand)]
    command: RawCommand,
}

#[derive(Subcommand, Debug)]
enum RawCommand {
    /// Evaluate one finite sum at a given q
    Eval(EvalArgs),
    /// Sweep q along a geometric schedule and measure the error
    Converge(ConvergeArgs),
    /// Run a named verification suite
    Verify(VerifyArgs),
    /// Print the reference value of zeta(s)
    Oracle(OracleArgs),
}

#[derive(Args, Debug)]
struct RepArgs {
    /// Catalogue id (E10..E16, E28..E32)
    #[arg(long)]
    rep: Option<String>,
    /// Explicit kind: cot or csc
    #[arg(long)]
    kind: Option<String>,
    /// Prefactor shift m in pi/(2q+m)
    #[arg(long)]
    m: Option<u32>,
    /// Angle shift n in p pi/(2q+n)
    #[arg(long)]
    n: Option<u32>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// text, csv, json or kv (depending on the command)
    #[arg(long, default_value = "text")]
    output: String,
    /// Write the report here instead of stdout
    #[arg(long)]
    out_path: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Complex argument: RE, RE+IMi or RE-IMi
    #[arg(long, allow_hyphen_values = true)]
    s: String,
    #[command(flatten)]
    rep: RepArgs,
    #[arg(long)]
    q: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct ConvergeArgs {
    #[arg(long, allow_hyphen_values = true)]
    s: String,
    #[command(flatten)]
    rep: RepArgs,
    #[arg(long, default_value_t = 10)]
    q0: u64,
    #[arg(long, default_value_t = 2)]
    factor: u64,
    #[arg(long, default_value_t = 11)]
    steps: u32,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// bernoulli, cross, tannery or specializations
    #[arg(long)]
    suite: String,
    /// Only for the tannery suite: check this s instead of {1.5, 2, 3}
    #[arg(long, allow_hyphen_values = true)]
    s: Option<String>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long, allow_hyphen_values = true)]
    s: String,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
    /// `key=value` lines; `verify` only.
    Kv,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Eval {
        s: ComplexScalar,
        spec: TrigSumSpec,
        catalog: Option<ClassicalForm>,
        q: u64,
    },
    Converge {
        s: ComplexScalar,
        spec: TrigSumSpec,
        catalog: Option<ClassicalForm>,
        schedule: QSchedule,
    },
    Verify {
        suite: Suite,
        s: Option<ComplexScalar>,
    },
    Oracle {
        s: ComplexScalar,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub command: Command,
    pub output: OutputFormat,
    pub out_path: Option<PathBuf>,
}

/// Why parsing stopped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseOutcome {
    /// `--help` / `--version`: print to stdout and exit 0.
    Info(String),
    /// Invalid arguments; the message names the offending flag.
    Usage(String),
}

fn usage(flag: &str, msg: impl std::fmt::Display) -> ParseOutcome {
    ParseOutcome::Usage(format!("{flag}: {msg}"))
}

/// Parses `RE`, `RE+IMi` or `RE-IMi` (no spaces).
pub fn parse_complex(text: &str) -> Result<ComplexScalar, Error> {
    let bad = || {
        Error::Parse(format!(
            "`{text}` is not a complex literal (RE, RE+IMi or RE-IMi)"
        ))
    };
    if text.is_empty() || text.chars().any(char::is_whitespace) {
        return Err(bad());
    }
    let Some(body) = text.strip_suffix('i') else {
        let re: f64 = text.parse().map_err(|_| bad())?;
        return if re.is_finite() {
            Ok(ComplexScalar::new(re, 0.0))
        } else {
            Err(bad())
        };
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
        .ok_or_else(bad)?;
    let re: f64 = body[..split].parse().map_err(|_| bad())?;
    let im_text = &body[split..];
    if im_text.len() == 1 {
        return Err(bad());
    }
    let im: f64 = im_text.parse().map_err(|_| bad())?;
    if !(re.is_finite() && im.is_finite()) {
        return Err(bad());
    }
    Ok(ComplexScalar::new(re, im))
}

fn parse_output(
    out: &OutputArgs,
    allowed: &[OutputFormat],
    command: &str,
) -> Result<OutputFormat, ParseOutcome> {
    let format = match out.output.as_str() {
        "text" => OutputFormat::Text,
        "csv" => OutputFormat::Csv,
        "json" => OutputFormat::Json,
        "kv" => OutputFormat::Kv,
        other => return Err(usage("--output", format!("unknown format `{other}`"))),
    };
    if !allowed.contains(&format) {
        return Err(usage(
            "--output",
            format!("`{}` is not available for `{command}`", out.output),
        ));
    }
    Ok(format)
}

fn parse_s(text: &str) -> Result<ComplexScalar, ParseOutcome> {
    parse_complex(text).map_err(|e| usage("--s", e))
}

fn parse_s_right_of_pole(text: &str) -> Result<ComplexScalar, ParseOutcome> {
    let s = parse_s(text)?;
    if s.re > 1.0 {
        Ok(s)
    } else {
        Err(usage("--s", format!("Re(s) > 1 required, got s = {text}")))
    }
}

fn parse_rep(rep: &RepArgs) -> Result<(TrigSumSpec, Option<ClassicalForm>), ParseOutcome> {
    match (&rep.rep, &rep.kind) {
        (Some(_), Some(_)) => Err(usage("--rep", "conflicts with --kind")),
        (Some(id), None) => {
            if rep.m.is_some() || rep.n.is_some() {
                return Err(usage(
                    if rep.m.is_some() { "--m" } else { "--n" },
                    "only valid with --kind",
                ));
            }
            let id: ClassicalForm = id.parse().map_err(|e| usage("--rep", e))?;
            Ok((classical_form(id), Some(id)))
        }
        (None, Some(kind)) => {
            let kind: TrigKind = kind.parse().map_err(|e| usage("--kind", e))?;
            Ok((
                TrigSumSpec::new(kind, rep.m.unwrap_or(0), rep.n.unwrap_or(0)),
                None,
            ))
        }
        (None, None) => Err(usage("--rep", "one of --rep or --kind is required")),
    }
}

/// Parses and validates a full argument vector (including the program name).
pub fn parse_args<I, T>(argv: I) -> Result<CliConfig, ParseOutcome>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let raw = RawArgs::try_parse_from(argv).map_err(|e| {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ParseOutcome::Info(e.to_string()),
            _ => {
                let text = e.to_string();
                let first = text.lines().next().unwrap_or("invalid arguments");
                ParseOutcome::Usage(first.trim_start_matches("error: ").to_string())
            }
        }
    })?;

    use OutputFormat::*;
    let (command, out) = match raw.command {
        RawCommand::Eval(a) => {
            let s = parse_s_right_of_pole(&a.s)?;
            let (spec, catalog) = parse_rep(&a.rep)?;
            if !spec.is_admissible(a.q) {
                return Err(usage(
                    "--q",
                    format!(
                        "q = {} is inadmissible for n = {} (need q >= {})",
                        a.q,
                        spec.n,
                        spec.min_q()
                    ),
                ));
            }
            let output = parse_output(&a.out, &[Text, Json], "eval")?;
            (
                Command::Eval {
                    s,
                    spec,
                    catalog,
                    q: a.q,
                },
                (output, a.out.out_path),
            )
        }
        RawCommand::Converge(a) => {
            let s = parse_s_right_of_pole(&a.s)?;
            let (spec, catalog) = parse_rep(&a.rep)?;
            let schedule = QSchedule::new(a.q0, a.factor, a.steps)
                .map_err(|e| usage("--q0/--factor/--steps", e))?;
            schedule.points_for(&spec).map_err(|e| usage("--q0", e))?;
            let output = parse_output(&a.out, &[Text, Csv, Json], "converge")?;
            (
                Command::Converge {
                    s,
                    spec,
                    catalog,
                    schedule,
                },
                (output, a.out.out_path),
            )
        }
        RawCommand::Verify(a) => {
            let suite = Suite::parse(&a.suite).ok_or_else(|| {
                usage(
                    "--suite",
                    format!(
                        "unknown suite `{}` (bernoulli, cross, tannery, specializations)",
                        a.suite
                    ),
                )
            })?;
            let s = match (&a.s, suite) {
                (None, _) => None,
                (Some(text), Suite::Tannery) => {
                    let s = parse_s(text)?;
                    if !(s.re > 0.0) {
                        return Err(usage(
                            "--s",
                            format!("Re(s) > 0 required for the tannery bounds, got {text}"),
                        ));
                    }
                    Some(s)
                }
                (Some(_), _) => return Err(usage("--s", "only the tannery suite takes --s")),
            };
            let output = parse_output(&a.out, &[Text, Kv], "verify")?;
            (Command::Verify { suite, s }, (output, a.out.out_path))
        }
        RawCommand::Oracle(a) => {
            let s = parse_s(&a.s)?;
            if !(s.re > 0.0) || s == ComplexScalar::new(1.0, 0.0) {
                return Err(usage(
                    "--s",
                    format!("need Re(s) > 0 and s != 1, got {}", a.s),
                ));
            }
            let output = parse_output(&a.out, &[Text, Json], "oracle")?;
            (Command::Oracle { s }, (output, a.out.out_path))
        }
    };
    Ok(CliConfig {
        command,
        output: out.0,
        out_path: out.1,
    })
}

/// Writes `contents` to `path` via a temporary file in the same directory.
pub fn write_atomically(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn json_number(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(x).map_or(serde_json::Value::Null, serde_json::Value::Number)
}

struct Report {
    body: String,
    /// Verification failure reason, if any.
    failure: Option<String>,
}

fn run_command(config: &CliConfig) -> Result<Report, Error> {
    match &config.command {
        Command::Eval {
            s,
            spec,
            catalog,
            q,
        } => {
            let eval = finite_trig_sum(*spec, *q, *s)?;
            let reference = reference_zeta(*s);
            let body = match config.output {
                OutputFormat::Json => {
                    let reference_json = match &reference {
                        Ok(r) => serde_json::json!({
                            "value_re": json_number(r.value.re),
                            "value_im": json_number(r.value.im),
                            "method": r.method,
                            "error_bound": json_number(r.error_bound),
                            "bound_kind": r.bound_kind,
                        }),
                        Err(_) => serde_json::Value::Null,
                    };
                    let doc = serde_json::json!({
                        "spec": spec,
                        "catalog_id": catalog.map(|c| c.to_string()),
                        "s_re": json_number(s.re),
                        "s_im": json_number(s.im),
                        "q": q,
                        "term_count": eval.term_count,
                        "value_re": json_number(eval.value.re),
                        "value_im": json_number(eval.value.im),
                        "compensation": json_number(eval.compensation),
                        "reference": reference_json,
                        "abs_error": reference.as_ref().ok().map(|r| json_number((eval.value - r.value).norm())),
                    });
                    serde_json::to_string_pretty(&doc).expect("json value") + "\n"
                }
                _ => {
                    let mut out = String::new();
                    let label = catalog.map(|c| format!(" [{c}]")).unwrap_or_default();
                    out += &format!("spec       {spec}{label}\n");
                    out += &format!("s          {}\n", fmt_complex(*s));
                    out += &format!("q          {q}\n");
                    out += &format!("terms      {}\n", eval.term_count);
                    out += &format!("value      {}\n", fmt_complex(eval.value));
                    match &reference {
                        Ok(r) => {
                            out += &format!(
                                "reference  {} ({}, bound {:.3e})\n",
                                fmt_complex(r.value),
                                r.method,
                                r.error_bound
                            );
                            out += &format!("abs_error  {:.6e}\n", (eval.value - r.value).norm());
                        }
                        Err(e) => out += &format!("reference  unavailable ({e})\n"),
                    }
                    out
                }
            };
            Ok(Report {
                body,
                failure: None,
            })
        }
        Command::Converge {
            s, spec, schedule, ..
        } => {
            let series = run_sweep(*spec, *s, schedule)?;
            let body = match config.output {
                OutputFormat::Csv => series.to_csv(),
                OutputFormat::Json => series.to_json(),
                _ => series.to_text(),
            };
            Ok(Report {
                body,
                failure: None,
            })
        }
        Command::Verify { suite, s } => {
            let report = run_suite(*suite, *s)?;
            let body = match config.output {
                OutputFormat::Kv => report.to_key_values(),
                _ => report.to_text(),
            };
            let failure = report.first_failure().map(|c| {
                format!(
                    "verification failed: suite {}: {}: {}",
                    suite.name(),
                    c.label,
                    c.detail
                )
            });
            Ok(Report { body, failure })
        }
        Command::Oracle { s } => {
            let r = reference_zeta(*s)?;
            let body = match config.output {
                OutputFormat::Json => {
                    let doc = serde_json::json!({
                        "s_re": json_number(s.re),
                        "s_im": json_number(s.im),
                        "value_re": json_number(r.value.re),
                        "value_im": json_number(r.value.im),
                        "method": r.method,
                        "error_bound": json_number(r.error_bound),
                        "bound_kind": r.bound_kind,
                    });
                    serde_json::to_string_pretty(&doc).expect("json value") + "\n"
                }
                _ => format!(
                    "s            {}\nzeta(s)      {}\nmethod       {}\nerror_bound  {:.3e} ({})\n",
                    fmt_complex(*s),
                    fmt_complex(r.value),
                    r.method,
                    r.error_bound,
                    r.bound_kind
                ),
            };
            Ok(Report {
                body,
                failure: None,
            })
        }
    }
}

fn one_line(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Runs a validated configuration; returns the process exit status.
pub fn execute(config: &CliConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let report = match run_command(config) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", one_line(&e.to_string()));
            return EXIT_USAGE;
        }
    };
    let written = match &config.out_path {
        Some(path) => write_atomically(path, &report.body),
        None => stdout.write_all(report.body.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: io: {}", one_line(&e.to_string()));
        return EXIT_USAGE;
    }
    match report.failure {
        Some(reason) => {
            let _ = writeln!(stderr, "error: {}", one_line(&reason));
            EXIT_VERIFY_FAILED
        }
        None => EXIT_OK,
    }
}

/// Parse, validate and execute.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match parse_args(argv) {
        Ok(config) => execute(&config, stdout, stderr),
        Err(ParseOutcome::Info(text)) => {
            let _ = stdout.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(ParseOutcome::Usage(msg)) => {
            let _ = writeln!(stderr, "error: usage: {}", one_line(&msg));
            EXIT_USAGE
        }
    }
}
