//! Command-line front end.

pub mod corpus;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

pub use corpus::{parse_corpus, Corpus, CorpusEntry, Validated};
pub use report::{build_report, render_text, Command, Report, RunConfig};

use crate::error::{Error, Result};

/// Built-in demo corpus.
pub const DEMO_CORPUS: &str = include_str!("demo.json");

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "delaycas",
    version,
    about = "Symbolic and numeric analysis of delay differential equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run the necessary-condition classifier on every entry.
    Classify(Opts),
    /// Run singularity cascades and confinement reports.
    Cascade(Opts),
    /// Check closed-form solution families numerically.
    Verify(Opts),
    /// Nevanlinna tables, growth estimates and ratio checks.
    Nev(Opts),
    /// Exact continuum limit to y''' = 12 y y' + 1.
    Limit(Opts),
    /// Print the built-in demo corpus.
    DemoCorpus,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

#[derive(clap::Args, Debug)]
struct Opts {
    /// Corpus file; the built-in demo corpus when omitted.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Restrict to one entry id.
    #[arg(long)]
    entry: Option<String>,
    /// Write the report here (atomically) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Series truncation for cascades; truncation in eps for `limit`.
    #[arg(long)]
    truncation: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

/// SHA-256 over the canonical corpus and every flag that affects results.
pub fn config_hash(corpus: &Corpus, cfg: &RunConfig) -> String {
    let mut h = Sha256::new();
    h.update(serde_json::to_vec(corpus).unwrap_or_default());
    h.update(format!("|{}|{}|{}|{:?}", cfg.command.name(), cfg.seed, cfg.truncation, cfg.entry).as_bytes());
    h.finalize().iter().map(|b| format!("{:02x}", b)).collect()
}

fn write_atomic(path: &Path, data: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(data.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

fn execute(command: Command, opts: &Opts) -> Result<(String, bool)> {
    let text = match &opts.corpus {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {}", p.display(), e)))?,
        None => DEMO_CORPUS.to_string(),
    };
    let validated = parse_corpus(&text)?;
    let cfg = RunConfig {
        command,
        seed: opts.seed,
        truncation: opts.truncation.unwrap_or(command.default_truncation()),
        entry: opts.entry.clone(),
    };
    let hash = config_hash(&validated.corpus, &cfg);
    let report = build_report(&validated, &cfg, hash)?;
    let out = match opts.format {
        Format::Json => serde_json::to_string_pretty(&report).map_err(|e| Error::Io(e.to_string()))? + "\n",
        Format::Text => render_text(&report),
    };
    Ok((out, report.pass))
}

/// Runs the command line and returns the process exit code:
/// 0 on success, 1 if any analysis failed, 2 on usage, schema or parse errors.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let (command, opts) = match cli.command {
        Cmd::Classify(o) => (Command::Classify, o),
        Cmd::Cascade(o) => (Command::Cascade, o),
        Cmd::Verify(o) => (Command::Verify, o),
        Cmd::Nev(o) => (Command::Nev, o),
        Cmd::Limit(o) => (Command::Limit, o),
        Cmd::DemoCorpus => {
            print!("{}", DEMO_CORPUS);
            return EXIT_OK;
        }
    };
    match execute(command, &opts) {
        Ok((out, pass)) => {
            let written = match &opts.out {
                Some(p) => write_atomic(p, &out),
                None => {
                    print!("{}", out);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {}", e);
                return EXIT_USAGE;
            }
            if pass {
                EXIT_OK
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("error: {}", e);
            EXIT_USAGE
        }
    }
}
