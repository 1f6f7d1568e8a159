//! Command-line front end. [`run`] takes argv and writers so tests can drive
//! it in-process; the binary only forwards to it.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 closed-form
//! mismatch (oracle disagreement or a derived system that does not match).

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::io::{analyze, parse_input, serialize_report, Format, Report, DEFAULT_PRECISION};
use crate::model::SystemKind;
use crate::oracle;
use crate::polytope::{
    closed_form_delta_system, derive_delta_system_from, enumerate_vertices, facet_enumeration,
    match_closed_form, SystemDescriptor,
};

#[derive(Debug, Parser)]
#[command(name = "contextuality", version, about = "Contextuality measures for signaling Bell and Leggett-Garg systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SystemArg {
    Bell,
    Lg,
}

impl From<SystemArg> for SystemKind {
    fn from(s: SystemArg) -> Self {
        match s {
            SystemArg::Bell => SystemKind::Bell,
            SystemArg::Lg => SystemKind::Lg,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum What {
    Facets,
    DeltaSystem,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form measures and the inequality table for an input document.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: usize,
    },
    /// Derive the compatibility facets or the Delta-system from the polytope.
    Derive {
        #[arg(long, value_enum)]
        system: SystemArg,
        #[arg(long, value_enum)]
        what: What,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Compare closed-form Delta_min with the LP oracle on seeded random systems.
    Verify {
        #[arg(long, value_enum)]
        system: SystemArg,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// LP Delta_min of an input document next to the closed form.
    Oracle {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: usize,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Mismatch(_) | Error::Degenerate(_) | Error::Infeasible { .. } | Error::Unbounded => 2,
        _ => 1,
    }
}

pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Analyze {
            input,
            format,
            precision,
        } => {
            let doc = parse_input(&read(&input)?)?;
            let report = analyze(&doc.observables()?);
            let format = match format {
                FormatArg::Json => Format::Json,
                FormatArg::Text => Format::Text,
            };
            write!(out, "{}", serialize_report(&report, format, precision))?;
            Ok(0)
        }
        Command::Derive {
            system,
            what,
            output,
        } => {
            let d = SystemDescriptor::new(system.into());
            let facets = facet_enumeration(&enumerate_vertices(&d))?;
            let partition = match_closed_form(&facets, &d)?;
            let (text, line) = match what {
                What::Facets => (
                    facets.to_text(),
                    format!(
                        "{} facets ({} compatibility + {} implicit)",
                        partition.total(),
                        partition.compatibility,
                        partition.implicit
                    ),
                ),
                What::DeltaSystem => {
                    let sys = derive_delta_system_from(&facets, &d)?;
                    if sys != closed_form_delta_system(d.kind) {
                        return Err(Error::Mismatch(
                            "derived Delta-system differs from the closed form".into(),
                        ));
                    }
                    let line = format!(
                        "{} inequalities over {} (matches closed form)",
                        sys.inequalities().len(),
                        sys.coords().join(" ")
                    );
                    (sys.to_text(), line)
                }
            };
            std::fs::write(&output, text)
                .map_err(|e| Error::Io(format!("{}: {e}", output.display())))?;
            writeln!(out, "{line}")?;
            Ok(0)
        }
        Command::Verify { system, n, seed } => {
            let report = oracle::verify_equivalence(system.into(), n, seed);
            writeln!(out, "{report}")?;
            Ok(if report.ok() { 0 } else { 2 })
        }
        Command::Oracle { input, precision } => {
            let doc = parse_input(&read(&input)?)?;
            let obs = doc.observables()?;
            let lp = oracle::min_delta_lp(&obs)?;
            let closed = match analyze(&obs) {
                Report::Bell(r) => r.delta_min,
                Report::Lg(r) => r.delta_min,
            };
            writeln!(out, "LP Delta_min: {} ({})", lp.to_decimal(precision), lp)?;
            writeln!(out, "closed form Delta_min: {} ({})", closed.to_decimal(precision), closed)?;
            if lp == closed {
                writeln!(out, "agree")?;
                Ok(0)
            } else {
                writeln!(out, "DISAGREE")?;
                Ok(2)
            }
        }
    }
}
