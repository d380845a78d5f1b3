use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use sta::{check, scenarios, Params, RunConfig, Scenario, ShellError};

/// Shortcuts to adiabaticity for a decaying two-level atom and an expanding
/// harmonic trap.
#[derive(Debug, Parser)]
#[command(name = "sta", version)]
struct Cli {
    scenario: Scenario,
    /// JSON parameter file; every key is optional
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV destination (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Time step: ns for atomic scenarios, ms for the oscillator
    #[arg(long)]
    dt: Option<f64>,
    /// Half-width of the atomic window in units of the pulse width
    #[arg(long)]
    window_factor: Option<f64>,
    /// Drop the real part of the counterdiabatic coupling (rap-cd)
    #[arg(long)]
    approx: bool,
}

fn run(cli: Cli) -> Result<(), ShellError> {
    let params = match &cli.config {
        Some(path) => Params::from_path(path)?,
        None => Params::default(),
    };
    let config = RunConfig::new(cli.scenario, params).with_overrides(
        cli.dt,
        cli.window_factor,
        cli.approx,
    )?;

    if config.scenario == Scenario::Check {
        let report = check::run(&config.params)?;
        emit(cli.out.as_ref(), |w| writeln!(w, "{report}"))?;
        report.into_result()?;
        return Ok(());
    }

    let output = scenarios::run(&config)?;
    for note in &output.notes {
        eprintln!("sta: {note}");
    }
    emit(cli.out.as_ref(), |w| output.table.write_to(w))
}

fn emit<F>(path: Option<&PathBuf>, body: F) -> Result<(), ShellError>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    let io_err = |name: String| move |source| ShellError::Io { path: name, source };
    match path {
        Some(p) => {
            let name = p.display().to_string();
            let file = File::create(p).map_err(io_err(name.clone()))?;
            let mut w = BufWriter::new(file);
            body(&mut w).and_then(|_| w.flush()).map_err(io_err(name))
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            match body(&mut w).and_then(|_| w.flush()) {
                // reader went away (e.g. `| head`); nothing left to report
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
                r => r.map_err(io_err("<stdout>".into())),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sta: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
