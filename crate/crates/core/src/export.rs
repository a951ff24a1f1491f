//! Stable text formats for solutions, sweeps and trajectories.
//!
//! CSV numbers use 17 significant digits so files round-trip bit-exactly.

use serde_json::{json, Value};

use crate::mdp::FactoredMdp;
use crate::shift::{AttentionShiftMdp, ParetoPoint, ShiftSolution, SustainBoundReport};
use crate::sim::{ReturnEstimate, TrajectoryLog};

/// Format a float for CSV output.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn labels(mdp: &FactoredMdp, s: usize) -> Value {
    json!(mdp.state_labels(s))
}

/// Per-state values: `{state, mode, duration, v, g, i}`.
pub fn values_json(mdp: &FactoredMdp, solution: &ShiftSolution) -> Value {
    let states: Vec<Value> = (0..mdp.num_states())
        .map(|s| {
            let a = solution.policy[s];
            json!({
                "state": labels(mdp, s),
                "mode": a.mode,
                "duration": a.duration,
                "v": solution.values[s],
                "g": solution.goal[s],
                "i": solution.info[s],
            })
        })
        .collect();
    let x0 = mdp.initial_state();
    json!({
        "variables": mdp.variables().iter().map(|v| v.name.clone()).collect::<Vec<_>>(),
        "T": solution.horizon,
        "weights": [solution.weights.goal, solution.weights.info],
        "sweeps": solution.sweeps,
        "residual": solution.residual,
        "initial": {
            "state": labels(mdp, x0),
            "v": solution.values[x0],
            "g": solution.goal[x0],
            "i": solution.info[x0],
        },
        "states": states,
    })
}

/// Per-state shift policy with the first primitive action it takes.
pub fn policy_json(mdp: &FactoredMdp, shift: &AttentionShiftMdp, solution: &ShiftSolution) -> Value {
    let states: Vec<Value> = (0..mdp.num_states())
        .map(|s| {
            let a = solution.policy[s];
            let first = shift.lifted_policy(a.mode).action(s).map(|id| mdp.actions()[id].clone());
            json!({
                "state": labels(mdp, s),
                "mode": a.mode,
                "duration": a.duration,
                "action": first,
            })
        })
        .collect();
    json!({
        "variables": mdp.variables().iter().map(|v| v.name.clone()).collect::<Vec<_>>(),
        "modes": (1..=shift.num_modes()).map(|k| shift.mode(k).attended().to_vec()).collect::<Vec<_>>(),
        "states": states,
    })
}

/// `T,G0,I0,V0,max_t_used`, one row per solved `T`.
pub fn sweep_csv(report: &SustainBoundReport, x0: usize) -> String {
    let mut out = String::from("T,G0,I0,V0,max_t_used\n");
    for sol in &report.solutions {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            sol.horizon,
            num(sol.goal[x0]),
            num(sol.info[x0]),
            num(sol.values[x0]),
            sol.max_duration_used()
        ));
    }
    out
}

/// `w1,w2,G0,I0`, rows in sweep order.
pub fn pareto_csv(points: &[ParetoPoint]) -> String {
    let mut out = String::from("w1,w2,G0,I0\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{},{}\n",
            num(p.weights.goal),
            num(p.weights.info),
            num(p.goal0),
            num(p.info0)
        ));
    }
    out
}

/// `t,mode,j,full_obs,reward,info_reward`.
pub fn timeline_csv(log: &TrajectoryLog) -> String {
    let mut out = String::from("t,mode,j,full_obs,reward,info_reward\n");
    for r in &log.steps {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.time,
            r.mode,
            r.phase_step,
            u8::from(r.full_observation),
            num(r.reward),
            num(r.info_reward)
        ));
    }
    out
}

/// One JSON object per step.
pub fn trajectory_jsonl(mdp: &FactoredMdp, log: &TrajectoryLog) -> String {
    let mut out = String::new();
    for r in &log.steps {
        let line = json!({
            "t": r.time,
            "state": labels(mdp, r.state),
            "mode": r.mode,
            "j": r.phase_step,
            "action": mdp.actions()[r.action],
            "reward": r.reward,
            "info_reward": r.info_reward,
            "full_obs": r.full_observation,
        });
        out.push_str(&line.to_string());
        out.push('\n');
    }
    out
}

/// Monte-Carlo estimates next to the solver's values at `x_0`.
pub fn returns_json(estimate: &ReturnEstimate, goal0: f64, info0: f64) -> Value {
    json!({
        "rollouts": estimate.rollouts,
        "horizon": estimate.horizon,
        "seed": estimate.seed,
        "goal": {
            "mean": estimate.goal.mean,
            "std_err": estimate.goal.std_err,
            "tail": estimate.goal.tail,
            "half_width": estimate.goal.half_width,
            "solver": goal0,
            "agrees": estimate.goal.contains(goal0),
        },
        "info": {
            "mean": estimate.info.mean,
            "std_err": estimate.info.std_err,
            "tail": estimate.info.tail,
            "half_width": estimate.info.half_width,
            "solver": info0,
            "agrees": estimate.info.contains(info0),
        },
    })
}
