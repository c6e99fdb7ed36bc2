use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use qcx::{run, CliError, Command, Outcome, RunOptions, Scenario};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Check,
    Extend,
    Beltrami,
    Compose,
    FitSector,
}

/// Univalence criteria and quasiconformal extensions on sampled grids.
#[derive(Debug, Parser)]
#[command(name = "qcx", version)]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// Scenario file (JSON, "version": 1).
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long)]
    grid_radial: Option<usize>,
    #[arg(long)]
    grid_angular: Option<usize>,
    /// Output directory (overrides the scenario's output.dir).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG heat map (beltrami).
    #[arg(long)]
    svg: bool,
    /// compose: first dilatation.
    #[arg(long)]
    k1: Option<f64>,
    /// compose: second dilatation.
    #[arg(long)]
    k2: Option<f64>,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("QCX_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Input(format!("QCX_THREADS={v:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Input(format!("thread pool: {e}")))
}

fn write_outputs(o: &Outcome) -> Result<(), CliError> {
    if o.files.is_empty() {
        return Ok(());
    }
    std::fs::create_dir_all(&o.out_dir)?;
    for (name, contents) in &o.files {
        std::fs::write(o.out_dir.join(name), contents)?;
    }
    Ok(())
}

fn main_inner(args: Args) -> Result<Outcome, CliError> {
    configure_threads()?;
    let command = match args.command {
        Cmd::Check => Command::Check,
        Cmd::Extend => Command::Extend,
        Cmd::Beltrami => Command::Beltrami,
        Cmd::Compose => Command::Compose,
        Cmd::FitSector => Command::FitSector,
    };
    let scenario = args.scenario.as_deref().map(Scenario::load).transpose()?;
    let opts = RunOptions {
        grid_radial: args.grid_radial,
        grid_angular: args.grid_angular,
        out: args.out,
        svg: args.svg,
        k1: args.k1,
        k2: args.k2,
    };
    let outcome = run(command, scenario, &opts)?;
    write_outputs(&outcome)?;
    Ok(outcome)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match main_inner(args) {
        Ok(o) => {
            print!("{}", o.summary);
            for (name, _) in &o.files {
                println!("wrote={}", o.out_dir.join(name).display());
            }
            ExitCode::from(o.exit_code() as u8)
        }
        Err(e) => {
            println!("error={e}");
            eprintln!("qcx: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
