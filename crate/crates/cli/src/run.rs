use std::fmt::Write as _;
use std::path::Path;

use attnplan::export;
use attnplan::pursuit::{bundled_config, compile, load_spec, CompiledWorld};
use attnplan::shift::{
    build_shift_mdp_with, pareto_sweep, solve_shift, sweep_sustain_bounds, InfoAccounting, Weights,
};
use attnplan::sim::{estimate_returns, rollout, DbnSampler};
use attnplan::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Solve,
    SweepT,
    Pareto,
    Simulate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::SweepT => "sweep-t",
            Command::Pareto => "pareto",
            Command::Simulate => "simulate",
        }
    }
}

/// Where a world config came from, with its full text so runs can be
/// replayed without the original file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigSource {
    /// File path or bundled config name as given on the command line.
    pub name: String,
    pub text: String,
}

/// Everything that determines a command's output bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunParams {
    pub command: Command,
    pub config: ConfigSource,
    #[serde(rename = "T")]
    pub horizon: usize,
    pub w1: f64,
    /// Goal weights for `pareto`.
    pub weights: Vec<f64>,
    pub tol: f64,
    pub seed: u64,
    pub n: usize,
    pub sim_horizon: usize,
    pub costs_zero: bool,
    pub info_accounting: InfoAccounting,
}

/// Files produced by a command, in write order, plus a human summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Outputs {
    pub files: Vec<(String, Vec<u8>)>,
    pub summary: String,
}

/// Read a config file, or fall back to a bundled config of that name.
pub fn resolve_config(name: &str) -> Result<ConfigSource> {
    let path = Path::new(name);
    let text = if path.is_file() {
        std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {name}: {e}")))?
    } else if let Some(text) = bundled_config(name) {
        text.to_string()
    } else {
        return Err(Error::InvalidInput(format!("no config file or bundled config named {name:?}")));
    };
    Ok(ConfigSource {
        name: name.to_string(),
        text,
    })
}

fn world(params: &RunParams) -> Result<CompiledWorld> {
    let mut spec = load_spec(&params.config.text)?;
    if params.costs_zero {
        spec = spec.without_costs();
    }
    compile(&spec)
}

fn pretty(v: &serde_json::Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s.into_bytes()
}

fn check(params: &RunParams) -> Result<()> {
    if params.horizon == 0 {
        return Err(Error::InvalidInput("--T must be at least 1".into()));
    }
    if params.tol.is_nan() || params.tol <= 0.0 {
        return Err(Error::InvalidInput("--tol must be positive".into()));
    }
    if params.command == Command::Simulate && (params.n == 0 || params.sim_horizon == 0) {
        return Err(Error::InvalidInput("--n and --horizon must be at least 1".into()));
    }
    Ok(())
}

/// Run one command.
pub fn execute(params: &RunParams) -> Result<Outputs> {
    check(params)?;
    match params.command {
        Command::Solve => solve(params),
        Command::SweepT => sweep(params),
        Command::Pareto => pareto(params),
        Command::Simulate => simulate(params),
    }
}

fn solve(params: &RunParams) -> Result<Outputs> {
    let w = Weights::from_goal(params.w1)?;
    let world = world(params)?;
    let modes = world.solve_modes(params.tol)?;
    let sm = build_shift_mdp_with(&world.mdp, &modes, params.horizon, params.info_accounting)?;
    let sol = solve_shift(&sm, w, params.tol)?;
    let x0 = world.mdp.initial_state();
    let summary = format!(
        "G(x0) = {:.2}\nI(x0) = {:.2}\nV(x0) = {:.2}\n",
        sol.goal[x0], sol.info[x0], sol.values[x0]
    );
    Ok(Outputs {
        files: vec![
            ("values.json".into(), pretty(&export::values_json(&world.mdp, &sol))),
            ("policy.json".into(), pretty(&export::policy_json(&world.mdp, &sm, &sol))),
        ],
        summary,
    })
}

fn sweep(params: &RunParams) -> Result<Outputs> {
    let w = Weights::from_goal(params.w1)?;
    let world = world(params)?;
    let modes = world.solve_modes(params.tol)?;
    let report = sweep_sustain_bounds(&world.mdp, &modes, w, params.horizon, params.tol, params.info_accounting)?;
    let x0 = world.mdp.initial_state();
    let mut summary = String::from("T     G0      I0      V0   max_t\n");
    for s in &report.solutions {
        let _ = writeln!(
            summary,
            "{:<3} {:>7.2} {:>7.2} {:>7.2} {:>5}",
            s.horizon,
            s.goal[x0],
            s.info[x0],
            s.values[x0],
            s.max_duration_used()
        );
    }
    let _ = writeln!(
        summary,
        "sustain bound: {}{}",
        report.bound,
        if report.reached { "" } else { " (not reached; lower bound)" }
    );
    Ok(Outputs {
        files: vec![("sweep_T.csv".into(), export::sweep_csv(&report, x0).into_bytes())],
        summary,
    })
}

fn pareto(params: &RunParams) -> Result<Outputs> {
    if params.weights.is_empty() {
        return Err(Error::InvalidInput("--weights needs at least one value".into()));
    }
    let weights = params
        .weights
        .iter()
        .map(|&w1| Weights::from_goal(w1))
        .collect::<Result<Vec<_>>>()?;
    let world = world(params)?;
    let modes = world.solve_modes(params.tol)?;
    let points = pareto_sweep(&world.mdp, &modes, params.horizon, &weights, params.tol, params.info_accounting)?;
    let mut summary = String::from("w1    w2       G0      I0\n");
    for p in &points {
        let _ = writeln!(
            summary,
            "{:.2}  {:.2}  {:>7.2} {:>7.2}",
            p.weights.goal, p.weights.info, p.goal0, p.info0
        );
    }
    Ok(Outputs {
        files: vec![("pareto.csv".into(), export::pareto_csv(&points).into_bytes())],
        summary,
    })
}

fn simulate(params: &RunParams) -> Result<Outputs> {
    let w = Weights::from_goal(params.w1)?;
    let world = world(params)?;
    let modes = world.solve_modes(params.tol)?;
    let sm = build_shift_mdp_with(&world.mdp, &modes, params.horizon, params.info_accounting)?;
    let sol = solve_shift(&sm, w, params.tol)?;
    let sampler = DbnSampler::new(&world.mdp, &world.dbn)?;
    let log = rollout(&world.mdp, &sm, &sol, &sampler, params.sim_horizon, params.seed);
    let est = estimate_returns(&world.mdp, &sm, &sol, &sampler, params.n, params.sim_horizon, params.seed);
    let x0 = world.mdp.initial_state();
    let returns = export::returns_json(&est, sol.goal[x0], sol.info[x0]);
    let summary = format!(
        "G_hat = {:.2} ± {:.2} (solver {:.2})\nI_hat = {:.2} ± {:.2} (solver {:.2})\n",
        est.goal.mean, est.goal.half_width, sol.goal[x0], est.info.mean, est.info.half_width, sol.info[x0]
    );
    Ok(Outputs {
        files: vec![
            ("timeline.csv".into(), export::timeline_csv(&log).into_bytes()),
            ("trajectory.jsonl".into(), export::trajectory_jsonl(&world.mdp, &log).into_bytes()),
            ("returns.json".into(), pretty(&returns)),
        ],
        summary,
    })
}
