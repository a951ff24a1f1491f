use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use attnplan::shift::InfoAccounting;
use attnplan_cli::{exit_code, execute, resolve_config, Command, Manifest, RunParams, MANIFEST_FILE};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "attnplan", version, about = "Attention-shift planning for pursuit gridworlds")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve the attention-shift MDP and write values.json and policy.json.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Goal weight w1; the info weight is 1 - w1.
        #[arg(long, default_value_t = 0.7)]
        w1: f64,
    },
    /// Solve for T = 1..=T and write sweep_T.csv.
    #[command(name = "sweep-t")]
    SweepT {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.7)]
        w1: f64,
    },
    /// Solve once per goal weight and write pareto.csv.
    Pareto {
        #[command(flatten)]
        common: Common,
        /// Comma-separated goal weights, in output order.
        #[arg(long, value_delimiter = ',', default_value = "0.9,0.8,0.7,0.6,0.5,0.4,0.3,0.2,0.1")]
        weights: Vec<f64>,
    },
    /// Solve, then write one timeline and Monte-Carlo return estimates.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.7)]
        w1: f64,
        /// Number of rollouts for the return estimates.
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        /// Steps per rollout.
        #[arg(long = "horizon", default_value_t = 200)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Re-run the command recorded in a manifest.
    Replay {
        /// Path to a manifest.json written by an earlier run.
        manifest: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    /// Config file path or bundled config name (paper-world, mini-3x3, corridor).
    #[arg(long, default_value = "paper-world")]
    config: String,
    /// Sustain bound (largest duration per attention phase).
    #[arg(long = "T", default_value_t = 4)]
    horizon: usize,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Set every sensor cost to zero.
    #[arg(long)]
    costs_zero: bool,
    #[arg(long, value_enum, default_value_t = Accounting::EveryStep)]
    info_accounting: Accounting,
}

#[derive(Clone, Copy, ValueEnum)]
enum Accounting {
    /// Unattended sensors save their cost at every step of a phase.
    EveryStep,
    /// The first step of each phase is a full observation and saves nothing.
    FullObservationCharged,
}

impl From<Accounting> for InfoAccounting {
    fn from(a: Accounting) -> Self {
        match a {
            Accounting::EveryStep => InfoAccounting::EveryStep,
            Accounting::FullObservationCharged => InfoAccounting::FullObservationCharged,
        }
    }
}

struct Failure {
    code: u8,
    msg: String,
}

impl From<attnplan::Error> for Failure {
    fn from(e: attnplan::Error) -> Self {
        Failure {
            code: exit_code(&e) as u8,
            msg: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: 1,
        msg: format!("{}: {e}", path.display()),
    }
}

/// Write through a temporary file in the same directory, then rename.
fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), Failure> {
    let target = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp"));
    let mut f = std::fs::File::create(&tmp).map_err(|e| io_failure(&tmp, e))?;
    f.write_all(bytes).and_then(|_| f.sync_all()).map_err(|e| io_failure(&tmp, e))?;
    std::fs::rename(&tmp, &target).map_err(|e| io_failure(&target, e))
}

fn params(command: Command, common: &Common) -> Result<RunParams, Failure> {
    Ok(RunParams {
        command,
        config: resolve_config(&common.config)?,
        horizon: common.horizon,
        w1: 0.7,
        weights: Vec::new(),
        tol: common.tol,
        seed: 0,
        n: 0,
        sim_horizon: 0,
        costs_zero: common.costs_zero,
        info_accounting: common.info_accounting.into(),
    })
}

fn run(params: RunParams, out: &Path) -> Result<(), Failure> {
    let start = Instant::now();
    let outputs = execute(&params)?;
    std::fs::create_dir_all(out).map_err(|e| io_failure(out, e))?;
    let mut names = Vec::with_capacity(outputs.files.len());
    for (name, bytes) in &outputs.files {
        write_atomic(out, name, bytes)?;
        names.push(name.clone());
    }
    let manifest = Manifest::new(params, start.elapsed().as_secs_f64(), names.clone());
    write_atomic(out, MANIFEST_FILE, manifest.to_json().as_bytes())?;
    print!("{}", outputs.summary);
    println!("wrote {} and {MANIFEST_FILE} to {}", names.join(", "), out.display());
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Cmd::Solve { common, w1 } => {
            let p = RunParams {
                w1,
                ..params(Command::Solve, &common)?
            };
            run(p, &common.out)
        }
        Cmd::SweepT { common, w1 } => {
            let p = RunParams {
                w1,
                ..params(Command::SweepT, &common)?
            };
            run(p, &common.out)
        }
        Cmd::Pareto { common, weights } => {
            let p = RunParams {
                weights,
                ..params(Command::Pareto, &common)?
            };
            run(p, &common.out)
        }
        Cmd::Simulate {
            common,
            w1,
            n,
            steps,
            seed,
        } => {
            let p = RunParams {
                w1,
                n,
                sim_horizon: steps,
                seed,
                ..params(Command::Simulate, &common)?
            };
            run(p, &common.out)
        }
        Cmd::Replay { manifest, out } => {
            let text = std::fs::read_to_string(&manifest).map_err(|e| io_failure(&manifest, e))?;
            let m = Manifest::from_json(&text)?;
            run(m.params, &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
