use crate::dbn::Dbn;
use crate::error::{Error, Result};
use crate::mdp::{value_iteration, FactoredMdp, Policy, ValueFunction, DEFAULT_MAX_SWEEPS};

use super::{AttentionMode, Disaggregation, ObservedSpace};

/// The aggregated MDP `M_k` over observed tuples of one attention mode.
///
/// Its inner [`FactoredMdp`] has the attended variables as its variables,
/// the projection image as its states and `f_k(x_0)` as its initial state.
#[derive(Debug, Clone)]
pub struct AttentionalMdp {
    mode: AttentionMode,
    mdp: FactoredMdp,
    subpolicy: Option<Policy>,
    values: Option<ValueFunction>,
}

impl AttentionalMdp {
    pub fn mode(&self) -> &AttentionMode {
        &self.mode
    }

    pub fn mdp(&self) -> &FactoredMdp {
        &self.mdp
    }

    pub fn subpolicy(&self) -> Option<&Policy> {
        self.subpolicy.as_ref()
    }

    pub fn values(&self) -> Option<&ValueFunction> {
        self.values.as_ref()
    }

    pub fn is_solved(&self) -> bool {
        self.subpolicy.is_some()
    }
}

fn check_mode(mdp: &FactoredMdp, mode: &AttentionMode, d: &Disaggregation) -> Result<ObservedSpace> {
    if !d.matches(mode) {
        return Err(Error::invalid(format!(
            "disaggregation belongs to mode {}, not mode {}",
            d.mode_index(),
            mode.index()
        )));
    }
    ObservedSpace::new(mode, mdp)
}

fn reward_row(mdp: &FactoredMdp, d: &Disaggregation, y: &[usize], a: usize) -> Result<f64> {
    let dist = d.distribution(y).ok_or_else(|| Error::EmptyPreimage(y.to_vec()))?;
    Ok(dist.iter().map(|&(x, w)| w * mdp.reward(x, a)).sum())
}

fn assemble(
    mdp: &FactoredMdp,
    mode: &AttentionMode,
    space: &ObservedSpace,
    rows: Vec<Vec<(usize, f64)>>,
    reward: Vec<f64>,
) -> Result<AttentionalMdp> {
    let variables = mode.attended().iter().map(|&i| mdp.variables()[i].clone()).collect();
    let y0 = space.observe(mdp.initial_state());
    let inner = FactoredMdp::from_explicit(
        variables,
        space.tuples().to_vec(),
        mdp.actions().to_vec(),
        rows,
        reward,
        y0,
        mdp.discount(),
    )?;
    Ok(AttentionalMdp {
        mode: mode.clone(),
        mdp: inner,
        subpolicy: None,
        values: None,
    })
}

/// Aggregate by marginalization:
/// `P_k(y'|y,a) = Σ_{x∈f⁻¹(y)} D_k(x|y) Σ_{x'∈f⁻¹(y')} P(x'|x,a)` and
/// `r_k(y,a) = Σ_x D_k(x|y) R(x,a)`.
pub fn build_attentional_mdp(mdp: &FactoredMdp, mode: &AttentionMode, d: &Disaggregation) -> Result<AttentionalMdp> {
    let space = check_mode(mdp, mode, d)?;
    let na = mdp.num_actions();
    let mut rows = Vec::with_capacity(space.len() * na);
    let mut reward = Vec::with_capacity(space.len() * na);
    for y in 0..space.len() {
        let tuple = space.tuple(y);
        let dist = d.distribution(tuple).ok_or_else(|| Error::EmptyPreimage(tuple.to_vec()))?;
        for a in 0..na {
            let row: Vec<(usize, f64)> = dist
                .iter()
                .flat_map(|&(x, w)| mdp.transition(x, a).map(move |(next, p)| (next, w * p)))
                .map(|(next, p)| (space.observe(next), p))
                .collect();
            rows.push(row);
            reward.push(reward_row(mdp, d, tuple, a)?);
        }
    }
    assemble(mdp, mode, &space, rows, reward)
}

/// Aggregate a DBN-structured MDP directly from the attended variables'
/// tables: `P_k(y'|y,a) = Π_{i∈I_k} P(x_i'|z_i,a)`. The mode must be
/// parent-closed. Rewards are still marginalized through `d`.
pub fn build_attentional_mdp_factored(
    mdp: &FactoredMdp,
    dbn: &Dbn,
    mode: &AttentionMode,
    d: &Disaggregation,
) -> Result<AttentionalMdp> {
    if dbn.num_vars() != mdp.variables().len() || dbn.num_actions() != mdp.num_actions() {
        return Err(Error::invalid("DBN does not match the MDP's variables or actions"));
    }
    dbn.check_parent_closed(mode.attended())?;
    let space = check_mode(mdp, mode, d)?;
    let attended = mode.attended();
    let na = mdp.num_actions();
    let mut rows = Vec::with_capacity(space.len() * na);
    let mut reward = Vec::with_capacity(space.len() * na);
    for y in 0..space.len() {
        let tuple = space.tuple(y);
        let value_of = |var: usize| {
            let pos = attended.binary_search(&var).expect("parent-closed");
            tuple[pos]
        };
        for a in 0..na {
            let mut row = Vec::new();
            for (next, p) in dbn.marginal_successors(a, attended, value_of) {
                let id = space.id(&next).ok_or_else(|| {
                    Error::invalid(format!("factored transition reaches {next:?}, outside the observed space"))
                })?;
                row.push((id, p));
            }
            rows.push(row);
            reward.push(reward_row(mdp, d, tuple, a)?);
        }
    }
    assemble(mdp, mode, &space, rows, reward)
}

/// Solve `M_k` with value iteration and attach the greedy subpolicy `π_k`.
pub fn solve_mode(am: AttentionalMdp, tol: f64) -> Result<AttentionalMdp> {
    let (values, policy) = value_iteration(&am.mdp, tol, DEFAULT_MAX_SWEEPS)?;
    Ok(AttentionalMdp {
        subpolicy: Some(policy),
        values: Some(values),
        ..am
    })
}

/// Apply `π_k` to full states through the projection: `π(x) = π_k(f_k(x))`.
pub fn lift_policy(am: &AttentionalMdp, mdp: &FactoredMdp) -> Result<Policy> {
    let sub = am
        .subpolicy
        .as_ref()
        .ok_or_else(|| Error::invalid(format!("mode {} has not been solved", am.mode.index())))?;
    let space = ObservedSpace::new(&am.mode, mdp)?;
    let dists = (0..mdp.num_states())
        .map(|s| {
            let y = space.tuple(space.observe(s));
            let id = am
                .mdp
                .state_id(y)
                .ok_or_else(|| Error::invalid(format!("observed tuple {y:?} unknown to mode {}", am.mode.index())))?;
            Ok(sub.distribution(id).to_vec())
        })
        .collect::<Result<Vec<_>>>()?;
    Policy::from_distributions(dists)
}
