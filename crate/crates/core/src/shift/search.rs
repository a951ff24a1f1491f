use crate::attention::AttentionalMdp;
use crate::error::{Error, Result};
use crate::mdp::FactoredMdp;

use super::{build_shift_mdp_with, solve_shift, solve_shift_from, InfoAccounting, ShiftSolution, Weights};

/// Outcome of the incremental search for the optimal sustain bound.
#[derive(Debug, Clone)]
pub struct SustainBoundReport {
    /// Smallest `T` whose value matched `T + 1` within `10·tol`, or `T_max`
    /// when no such `T` was found.
    pub bound: usize,
    /// False when `T_max` was hit first; `bound` is then only a lower bound.
    pub reached: bool,
    /// Solutions for `T = 1, 2, ...` in order.
    pub solutions: Vec<ShiftSolution>,
}

/// Solve `M_1, M_2, ...`, warm-starting each solve from the previous value,
/// until consecutive values agree within `10·tol` or `T_max` is reached.
pub fn sustain_bound_search(
    mdp: &FactoredMdp,
    modes: &[AttentionalMdp],
    w: Weights,
    t_max: usize,
    tol: f64,
    accounting: InfoAccounting,
) -> Result<SustainBoundReport> {
    run_bounds(mdp, modes, w, t_max, tol, accounting, true)
}

/// Like [`sustain_bound_search`] but always solves every `T` up to `T_max`;
/// `bound` is still the first `T` whose successor matched it.
pub fn sweep_sustain_bounds(
    mdp: &FactoredMdp,
    modes: &[AttentionalMdp],
    w: Weights,
    t_max: usize,
    tol: f64,
    accounting: InfoAccounting,
) -> Result<SustainBoundReport> {
    run_bounds(mdp, modes, w, t_max, tol, accounting, false)
}

fn run_bounds(
    mdp: &FactoredMdp,
    modes: &[AttentionalMdp],
    w: Weights,
    t_max: usize,
    tol: f64,
    accounting: InfoAccounting,
    stop_at_bound: bool,
) -> Result<SustainBoundReport> {
    if t_max == 0 {
        return Err(Error::invalid("T_max must be at least 1"));
    }
    let mut sm = build_shift_mdp_with(mdp, modes, 1, accounting)?;
    let mut solutions: Vec<ShiftSolution> = vec![solve_shift(&sm, w, tol)?];
    let mut bound = None;
    for t in 2..=t_max {
        sm.extend_to(t);
        let prev = solutions.last().unwrap();
        let sol = solve_shift_from(&sm, w, tol, Some(&prev.values))?;
        let gap = sol.values.max_abs_diff(&prev.values);
        solutions.push(sol);
        if gap <= 10.0 * tol && bound.is_none() {
            bound = Some(t - 1);
            if stop_at_bound {
                break;
            }
        }
    }
    Ok(SustainBoundReport {
        bound: bound.unwrap_or(t_max),
        reached: bound.is_some(),
        solutions,
    })
}

/// One row of a weight sweep.
#[derive(Debug, Clone)]
pub struct ParetoPoint {
    pub weights: Weights,
    pub goal0: f64,
    pub info0: f64,
    pub solution: ShiftSolution,
}

/// Solve `M_T` once per weight, in the order given, and report `G(x_0)` and
/// `I(x_0)` for each.
pub fn pareto_sweep(
    mdp: &FactoredMdp,
    modes: &[AttentionalMdp],
    horizon: usize,
    weights: &[Weights],
    tol: f64,
    accounting: InfoAccounting,
) -> Result<Vec<ParetoPoint>> {
    let sm = build_shift_mdp_with(mdp, modes, horizon, accounting)?;
    let x0 = sm.initial_state();
    weights
        .iter()
        .map(|&w| {
            let solution = solve_shift(&sm, w, tol)?;
            Ok(ParetoPoint {
                weights: w,
                goal0: solution.goal[x0],
                info0: solution.info[x0],
                solution,
            })
        })
        .collect()
}
