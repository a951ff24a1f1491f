use crate::error::{Error, Result};
use crate::mdp::{ValueFunction, DEFAULT_MAX_SWEEPS};

use super::{AttentionShiftMdp, SustainAction, Weights};

/// Optimal attention-shift value and policy, with the policy's value split
/// into its goal (`G`) and sensor-saving (`I`) components.
#[derive(Debug, Clone)]
pub struct ShiftSolution {
    pub horizon: usize,
    pub weights: Weights,
    pub values: ValueFunction,
    pub policy: Vec<SustainAction>,
    pub goal: ValueFunction,
    pub info: ValueFunction,
    /// Value-iteration sweeps used.
    pub sweeps: usize,
    /// Bellman residual of `values`.
    pub residual: f64,
}

impl ShiftSolution {
    /// Longest sustain duration chosen at any state.
    pub fn max_duration_used(&self) -> usize {
        self.policy.iter().map(|a| a.duration).max().unwrap_or(0)
    }
}

/// Visit `Q(x, (k, t))` for every action in mode-then-duration order.
fn for_each_q(sm: &AttentionShiftMdp, w: Weights, v: &[f64], mut visit: impl FnMut(usize, SustainAction, f64)) {
    let n = sm.num_states;
    let mut u = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    for (ki, mc) in sm.modes.iter().enumerate() {
        u.copy_from_slice(v);
        for t in 1..=sm.horizon {
            mc.chain.kernel.mul_vec_into(&u, &mut tmp);
            std::mem::swap(&mut u, &mut tmp);
            let g = &mc.goal[t - 1];
            let info = w.info * mc.info[t - 1];
            let disc = sm.discounts[t - 1];
            let action = SustainAction { mode: ki + 1, duration: t };
            for x in 0..n {
                visit(x, action, w.goal * g[x] + info + disc * u[x]);
            }
        }
    }
}

/// One application of the semi-MDP Bellman operator.
fn backup(sm: &AttentionShiftMdp, w: Weights, v: &[f64], out: &mut [f64]) {
    out.iter_mut().for_each(|o| *o = f64::NEG_INFINITY);
    for_each_q(sm, w, v, |x, _, q| {
        if q > out[x] {
            out[x] = q;
        }
    });
}

/// Greedy policy for `v`: the lowest mode, then shortest duration, whose
/// Q-value is within `slack` of the best. A `v` that is only `tol`-accurate
/// perturbs Q-values of exactly tied actions by less than `tol·(1−γ)`, which
/// is the slack used by the solver.
fn greedy(sm: &AttentionShiftMdp, w: Weights, v: &[f64], slack: f64) -> Vec<SustainAction> {
    let n = sm.num_states;
    let mut best = vec![0.0; n];
    backup(sm, w, v, &mut best);
    let mut policy: Vec<Option<SustainAction>> = vec![None; n];
    for_each_q(sm, w, v, |x, a, q| {
        if policy[x].is_none() && q >= best[x] - slack {
            policy[x] = Some(a);
        }
    });
    policy.into_iter().map(|a| a.expect("some action attains the maximum")).collect()
}

/// Solve the weighted attention-shift Bellman equation from `V = 0`.
pub fn solve_shift(sm: &AttentionShiftMdp, w: Weights, tol: f64) -> Result<ShiftSolution> {
    solve_shift_from(sm, w, tol, None)
}

/// Solve starting from `init` (e.g. the solution for a smaller `T`).
///
/// Sweeps stop once successive iterates differ by at most `tol·(1−γ)`; every
/// action discounts by at least `γ`, so the residual and the distance to the
/// fixed point are both below `tol`.
pub fn solve_shift_from(sm: &AttentionShiftMdp, w: Weights, tol: f64, init: Option<&[f64]>) -> Result<ShiftSolution> {
    Weights::new(w.goal, w.info)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let n = sm.num_states;
    let mut v = match init {
        Some(init) if init.len() == n => init.to_vec(),
        Some(_) => return Err(Error::invalid("warm-start vector has the wrong length")),
        None => vec![0.0; n],
    };
    let mut next = vec![0.0; n];
    let threshold = tol * (1.0 - sm.gamma);
    let mut delta = f64::INFINITY;
    let mut sweeps = 0;
    while sweeps < DEFAULT_MAX_SWEEPS {
        sweeps += 1;
        backup(sm, w, &v, &mut next);
        delta = v.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        std::mem::swap(&mut v, &mut next);
        if !delta.is_finite() || delta <= threshold {
            break;
        }
    }
    if delta.is_nan() || delta > threshold {
        return Err(Error::NonConvergence { iters: sweeps, residual: delta });
    }
    let policy = greedy(sm, w, &v, threshold);
    backup(sm, w, &v, &mut next);
    let residual = v.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let (goal, info) = evaluate_objectives(sm, &policy, tol)?;
    Ok(ShiftSolution {
        horizon: sm.horizon,
        weights: w,
        values: ValueFunction(v),
        policy,
        goal,
        info,
        sweeps,
        residual,
    })
}

/// Evaluate a shift policy on each objective separately:
/// `G = R^G∘π + γ^t P̂∘π G` and `I = R^I∘π + γ^t P̂∘π I`.
pub fn evaluate_objectives(
    sm: &AttentionShiftMdp,
    policy: &[SustainAction],
    tol: f64,
) -> Result<(ValueFunction, ValueFunction)> {
    let n = sm.num_states;
    if policy.len() != n {
        return Err(Error::invalid(format!("shift policy covers {} states, expected {n}", policy.len())));
    }
    for a in policy {
        sm.check(*a)?;
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::invalid("tolerance must be positive"));
    }
    // states grouped by chosen (mode, duration)
    let mut groups: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); sm.horizon]; sm.modes.len()];
    for (x, a) in policy.iter().enumerate() {
        groups[a.mode - 1][a.duration - 1].push(x);
    }
    let longest: Vec<usize> = groups
        .iter()
        .map(|g| g.iter().rposition(|s| !s.is_empty()).map_or(0, |i| i + 1))
        .collect();

    let mut goal = vec![0.0; n];
    let mut info = vec![0.0; n];
    let mut next_goal = vec![0.0; n];
    let mut next_info = vec![0.0; n];
    let (mut ug, mut ui) = (vec![0.0; n], vec![0.0; n]);
    let (mut tg, mut ti) = (vec![0.0; n], vec![0.0; n]);
    let threshold = tol * (1.0 - sm.gamma);
    for _ in 0..DEFAULT_MAX_SWEEPS {
        for (ki, mc) in sm.modes.iter().enumerate() {
            if longest[ki] == 0 {
                continue;
            }
            ug.copy_from_slice(&goal);
            ui.copy_from_slice(&info);
            for t in 1..=longest[ki] {
                mc.chain.kernel.mul_vec2_into(&ug, &ui, &mut tg, &mut ti);
                std::mem::swap(&mut ug, &mut tg);
                std::mem::swap(&mut ui, &mut ti);
                let disc = sm.discounts[t - 1];
                for &x in &groups[ki][t - 1] {
                    next_goal[x] = mc.goal[t - 1][x] + disc * ug[x];
                    next_info[x] = mc.info[t - 1] + disc * ui[x];
                }
            }
        }
        let delta = goal
            .iter()
            .zip(&next_goal)
            .chain(info.iter().zip(&next_info))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        std::mem::swap(&mut goal, &mut next_goal);
        std::mem::swap(&mut info, &mut next_info);
        if !delta.is_finite() {
            break;
        }
        if delta <= threshold {
            return Ok((ValueFunction(goal), ValueFunction(info)));
        }
    }
    Err(Error::NonConvergence {
        iters: DEFAULT_MAX_SWEEPS,
        residual: f64::NAN,
    })
}
