use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use linf_cli::commands::{execute, Command, Format, Outcome, Overrides, RunError};
use linf_cli::config::parse_config;
use linf_core::cochain::ArityWindow;

const EXIT_ENGINE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_TRUNCATED: u8 = 4;

/// Exact computations with L∞ structures.
#[derive(Debug, Parser)]
#[command(name = "linf", version)]
struct Cli {
    /// What to compute.
    #[arg(value_enum)]
    command: Command,
    /// TOML job description.
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum, default_value = "plain")]
    format: Format,
    /// Arity window `A:B`, overriding the config.
    #[arg(long, value_parser = parse_window)]
    window: Option<ArityWindow>,
    /// Maximal deformation order, overriding the config.
    #[arg(long)]
    order: Option<u32>,
    /// Write the result here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_window(s: &str) -> Result<ArityWindow, String> {
    let (a, b) = s.split_once(':').ok_or("expected A:B")?;
    let a: u32 = a.trim().parse().map_err(|_| format!("bad lower arity `{a}`"))?;
    let b: u32 = b.trim().parse().map_err(|_| format!("bad upper arity `{b}`"))?;
    ArityWindow::new(a, b).map_err(|e| e.to_string())
}

fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let res = std::fs::write(&tmp, text).and_then(|()| std::fs::rename(&tmp, path));
    if res.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    res
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let path = cli.config.display().to_string();
    let text = match std::fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {path}: {e}");
            return ExitCode::from(EXIT_ENGINE);
        }
    };
    let cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(d) => {
            eprintln!("{path}:{d}");
            return ExitCode::from(EXIT_PARSE);
        }
    };
    let overrides = Overrides {
        window: cli.window,
        order: cli.order,
    };
    let out = match execute(cli.command, &cfg, &overrides, cli.format) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(match e {
                RunError::Precondition(_) => EXIT_PRECONDITION,
                RunError::Engine(_) => EXIT_ENGINE,
            });
        }
    };
    let written = match &cli.out {
        Some(p) => write_atomic(p, &out.text),
        None => std::io::stdout().write_all(out.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(EXIT_ENGINE);
    }
    match out.outcome {
        Outcome::Done => ExitCode::SUCCESS,
        Outcome::Truncated => {
            eprintln!("warning: stopped at the order limit before the deformation closed");
            ExitCode::from(EXIT_TRUNCATED)
        }
        Outcome::NotCodifferential => ExitCode::from(EXIT_PRECONDITION),
    }
}
