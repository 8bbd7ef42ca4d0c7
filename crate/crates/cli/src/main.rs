//! `ophh`: validate operads, compute Hochschild homology, run the BV
//! verification suites and evaluate expressions.
//!
//! Exit status: 0 on success, 1 on a mathematical failure (axiom, identity
//! or sizing), 2 on malformed input.

mod eval;
mod render;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ophh_core::defs::{builtin, parse_operad_file_with, ParseOptions};
use ophh_core::homology::verify_bv_on_homology_with;
use ophh_core::{
    compute_hh, verify_identity_suite, Error, Flavor, OperadSpec, Ring, ValidatedSpec, VerificationReport,
};

#[derive(Parser)]
#[command(name = "ophh", version, about = "Hochschild homology and BV structure of cyclic multiplicative operads")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the operad and cyclic axioms.
    Validate {
        /// Operad file; `-` reads standard input.
        file: Option<PathBuf>,
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        out: Output,
    },
    /// Compute the bigraded Hochschild homology table.
    Homology {
        file: Option<PathBuf>,
        #[command(flatten)]
        source: Source,
        /// Coefficients: Z (integers, with torsion) or Q (rationals).
        #[arg(long, default_value = "Z")]
        ring: String,
        /// Chain complex: full or normalized.
        #[arg(long, default_value = "full")]
        flavor: String,
        /// Print representative cycles.
        #[arg(long)]
        reps: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Run the chain-level identity suite and the homology-level BV checks.
    Bvcheck {
        file: Option<PathBuf>,
        #[command(flatten)]
        source: Source,
        /// Random chain pairs for the sampled identities.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Complex used for the homology-level checks.
        #[arg(long, default_value = "normalized")]
        flavor: String,
        #[command(flatten)]
        out: Output,
    },
    /// Evaluate an expression such as "bracket(a2, a1)" exactly.
    Eval {
        expression: String,
        file: Option<PathBuf>,
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct Source {
    /// Built-in operad: assoc, frobenius:<ground|dual1|ext2|cp2>, bv-lowarity.
    #[arg(long)]
    builtin: Option<String>,
    /// Arity cap (default: 5 for built-ins, the file's own cap for files).
    #[arg(long)]
    cap: Option<usize>,
    /// Ignore unknown top-level keys in operad files.
    #[arg(long)]
    lenient: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

const DEFAULT_BUILTIN_CAP: usize = 5;

/// Why a command stopped.
enum Failure {
    /// A report with failing checks; already written.
    Math,
    Error(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Math) => ExitCode::from(1),
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            if let Error::Truncation { cap, .. } = e {
                eprintln!("hint: the operad carries data up to arity {cap}; lower --cap or supply a larger operad");
            }
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Validate { file, source, out } => {
            let spec = load_raw(file.as_ref(), &source, 0)?;
            let (result, report) = ValidatedSpec::validate(spec);
            emit_report(&report, &out)?;
            result.map(|_| ()).map_err(|_| validation_failure(&report))
        }
        Command::Homology { file, source, ring, flavor, reps, out } => {
            let ring: Ring = ring.parse()?;
            let flavor: Flavor = flavor.parse()?;
            let spec = load(file.as_ref(), &source, 0, &out)?;
            let cap = effective_cap(&source, &spec)?;
            let table = compute_hh(&spec, cap, flavor, ring)?;
            let text = match out.format {
                Format::Text => render::homology_text(&table, reps),
                Format::Json => render::homology_json(&table),
            };
            write_out(&text, &out)
        }
        Command::Bvcheck { file, source, samples, seed, flavor, out } => {
            let flavor: Flavor = flavor.parse()?;
            // Built-ins carry one extra arity so no sampled identity is truncated.
            let spec = load(file.as_ref(), &source, 1, &out)?;
            let cap = effective_cap(&source, &spec)?;
            let mut report = verify_identity_suite(&spec, cap, samples, seed)?;
            let table = compute_hh(&spec, cap, flavor, Ring::Rationals)?;
            report.merge(verify_bv_on_homology_with(&table, ophh_core::homology::DEFAULT_PROBES, seed)?);
            report.suite = "BV verification".into();
            emit_report(&report, &out)?;
            if report.passed() {
                Ok(())
            } else {
                if let Some(first) = report.first_failure() {
                    eprintln!("first failing identity: {}", first.name);
                }
                Err(Failure::Math)
            }
        }
        Command::Eval { expression, file, source, out } => {
            let spec = load(file.as_ref(), &source, 0, &out)?;
            let value = eval::evaluate(&spec, &expression)?;
            let text = match out.format {
                Format::Text => render::element_text(&spec, &value),
                Format::Json => render::element_json(&spec, &expression, &value),
            };
            write_out(&text, &out)
        }
    }
}

fn read_input(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
    }
}

/// Parses the file or constructs the built-in, without validating.
///
/// Built-ins are constructed at `cap + extra`.
fn load_raw(file: Option<&PathBuf>, source: &Source, extra: usize) -> Result<OperadSpec, Failure> {
    match (file, &source.builtin) {
        (Some(_), Some(_)) => {
            Err(Error::InvalidInput("give either an operad file or --builtin, not both".into()).into())
        }
        (None, None) => Err(Error::InvalidInput("no operad given; pass a file, `-` or --builtin".into()).into()),
        (None, Some(name)) => {
            let cap = source.cap.unwrap_or(DEFAULT_BUILTIN_CAP) + extra;
            let spec = ophh_core::defs::builtin_unvalidated(name, cap)?;
            effective_cap(source, &spec)?;
            Ok(spec)
        }
        (Some(path), None) => {
            let text = read_input(path)?;
            let spec = parse_operad_file_with(&text, ParseOptions { lenient: source.lenient })?;
            if let Some(cap) = source.cap {
                if cap > spec.arity_cap() {
                    return Err(Error::Truncation { needed: cap, cap: spec.arity_cap() }.into());
                }
            }
            Ok(spec)
        }
    }
}

/// The arity cap a command works to: `--cap`, else the default for built-ins
/// or the file's own cap, never beyond the data.
fn effective_cap(source: &Source, spec: &OperadSpec) -> Result<usize, Failure> {
    match source.cap {
        Some(c) if c > spec.arity_cap() => Err(Error::Truncation { needed: c, cap: spec.arity_cap() }.into()),
        Some(c) => Ok(c),
        None if source.builtin.is_some() => Ok(DEFAULT_BUILTIN_CAP.min(spec.arity_cap())),
        None => Ok(spec.arity_cap()),
    }
}

/// Loads and validates; a failing validation report is written and ends the run.
fn load(file: Option<&PathBuf>, source: &Source, extra: usize, out: &Output) -> Result<OperadSpec, Failure> {
    if let (None, Some(name)) = (file, &source.builtin) {
        let cap = source.cap.unwrap_or(DEFAULT_BUILTIN_CAP) + extra;
        let spec = builtin(name, cap)?.into_inner();
        effective_cap(source, &spec)?;
        return Ok(spec);
    }
    let spec = load_raw(file, source, extra)?;
    match ValidatedSpec::validate(spec) {
        (Ok(v), _) => Ok(v.into_inner()),
        (Err(_), report) => {
            emit_report(&report, out)?;
            Err(validation_failure(&report))
        }
    }
}

fn validation_failure(report: &VerificationReport) -> Failure {
    if let Some(first) = report.first_failure() {
        eprintln!("first failing check: {}", first.name);
    }
    Failure::Math
}

fn emit_report(report: &VerificationReport, out: &Output) -> Result<(), Failure> {
    let text = match out.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    };
    write_out(&text, out)
}

fn write_out(text: &str, out: &Output) -> Result<(), Failure> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &out.output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}
