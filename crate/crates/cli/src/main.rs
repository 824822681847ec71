//! `cdglab`: batch driver for the DG Poisson experiments.

mod args;
mod commands;
mod pool;

use std::io::Write;
use std::process::ExitCode;

use cdg_core::analysis::ConvergenceReport;
use cdg_core::mesh::{four_triangle_mesh, BoundaryMarker, Mesh};
use clap::Parser;

use args::{Cli, Command, Format, OutputArgs};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] cdg_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("{0} report cells failed")]
    Failed(usize),
}

fn emit(text: &str, out: &Option<std::path::PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => commands::write_file(&path.display().to_string(), text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

fn emit_report(rep: &ConvergenceReport, out: &OutputArgs) -> Result<(), CliError> {
    let text = match out.format {
        Format::Csv => rep.to_csv(),
        Format::Json => rep.to_json()? + "\n",
    };
    emit(&text, &out.out)?;
    for r in rep.rows.iter().filter(|r| r.message.is_some()) {
        eprintln!(
            "failed: {} {} p={:?} n={:?} {}: {}",
            r.scheme,
            r.switch,
            r.p,
            r.n,
            r.metric,
            r.message.as_deref().unwrap_or_default()
        );
    }
    match rep.failures() {
        0 => Ok(()),
        k => Err(CliError::Failed(k)),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve(a) => emit_report(&commands::solve(&a)?, &a.output),
        Command::Convergence(a) => emit_report(&commands::convergence(&a)?, &a.output),
        Command::Nullspace(a) => emit_report(&commands::nullspace(&a)?, &a.output),
        Command::Spectrum(a) => emit_report(&commands::spectrum(&a)?, &a.output),
        Command::Memory(a) => emit_report(&commands::memory(&a)?, &a.output),
        Command::Sparsity(a) => emit_report(&commands::sparsity(&a)?, &a.output),
        Command::Mesh(a) => {
            let mesh = if a.four_triangle {
                four_triangle_mesh()
            } else {
                Mesh::structured(a.n, a.periodic, &BoundaryMarker::AllDirichlet)?
            };
            emit(&(mesh.to_json()? + "\n"), &a.out)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
