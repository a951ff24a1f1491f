use crate::error::{Error, Result};

use super::chain::induce_chain;
use super::{is_strictly_better, FactoredMdp, Policy, StateId, ValueFunction};

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_SWEEPS: usize = 100_000;

/// Result of a value-iteration run, including the sweep count.
#[derive(Debug, Clone)]
pub struct ValueIterationOutcome {
    pub values: ValueFunction,
    pub policy: Policy,
    pub sweeps: usize,
    /// Bellman residual `‖V − TV‖∞` of `values`.
    pub residual: f64,
}

/// Value iteration from `V = 0`.
///
/// Sweeps stop once successive iterates differ by at most `tol·(1−γ)`, which
/// bounds both the Bellman residual and the distance to `V*` by `tol`.
pub fn value_iteration(mdp: &FactoredMdp, tol: f64, max_iters: usize) -> Result<(ValueFunction, Policy)> {
    let out = value_iteration_from(mdp, None, tol, max_iters)?;
    Ok((out.values, out.policy))
}

pub fn value_iteration_from(
    mdp: &FactoredMdp,
    init: Option<&[f64]>,
    tol: f64,
    max_iters: usize,
) -> Result<ValueIterationOutcome> {
    let gamma = mdp.discount();
    check_solver_args(gamma, tol)?;
    let n = mdp.num_states();
    let mut v = match init {
        Some(init) if init.len() == n => init.to_vec(),
        Some(_) => return Err(Error::invalid("warm-start vector has the wrong length")),
        None => vec![0.0; n],
    };
    let mut next = vec![0.0; n];
    let mut q = vec![0.0; mdp.num_actions()];
    let threshold = tol * (1.0 - gamma);
    let mut delta = f64::INFINITY;
    for sweep in 1..=max_iters {
        delta = 0.0;
        for s in 0..n {
            mdp.q_values(s, &v, &mut q);
            let best = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            delta = f64::max(delta, (best - v[s]).abs());
            next[s] = best;
        }
        std::mem::swap(&mut v, &mut next);
        if !delta.is_finite() {
            break;
        }
        if delta <= threshold {
            let policy = greedy_policy(mdp, &v);
            let residual = bellman_residual(mdp, &v);
            return Ok(ValueIterationOutcome {
                values: ValueFunction(v),
                policy,
                sweeps: sweep,
                residual,
            });
        }
    }
    Err(Error::NonConvergence {
        iters: max_iters,
        residual: delta,
    })
}

/// Greedy deterministic policy; ties go to the lowest action index.
pub fn greedy_policy(mdp: &FactoredMdp, values: &[f64]) -> Policy {
    let mut q = vec![0.0; mdp.num_actions()];
    let actions = (0..mdp.num_states())
        .map(|s| {
            mdp.q_values(s, values, &mut q);
            argmax_lowest(&q)
        })
        .collect();
    Policy::deterministic(actions)
}

pub(crate) fn argmax_lowest(q: &[f64]) -> usize {
    let mut best = 0;
    for (a, &v) in q.iter().enumerate().skip(1) {
        if is_strictly_better(v, q[best]) {
            best = a;
        }
    }
    best
}

/// `‖V − TV‖∞` for the Bellman optimality operator `T`.
pub fn bellman_residual(mdp: &FactoredMdp, values: &[f64]) -> f64 {
    let mut q = vec![0.0; mdp.num_actions()];
    (0..mdp.num_states())
        .map(|s: StateId| {
            mdp.q_values(s, values, &mut q);
            let best = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (best - values[s]).abs()
        })
        .fold(0.0, f64::max)
}

/// Iterative policy evaluation of `V = r_π + γ P_π V`.
pub fn evaluate_policy(mdp: &FactoredMdp, pi: &Policy, tol: f64) -> Result<ValueFunction> {
    let gamma = mdp.discount();
    check_solver_args(gamma, tol)?;
    let chain = induce_chain(mdp, pi)?;
    chain.evaluate(gamma, tol, DEFAULT_MAX_SWEEPS)
}

pub(crate) fn check_solver_args(gamma: f64, tol: f64) -> Result<()> {
    if gamma >= 1.0 {
        return Err(Error::DiscountOne);
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}
