use std::fmt;

use serde::{Deserialize, Serialize};

use crate::attention::{lift_policy, AttentionMode, AttentionalMdp};
use crate::error::{Error, Result};
use crate::mdp::{induce_chain, t_step_kernel, truncated_discounted_return, FactoredMdp, InducedChain, Policy, ValueFunction};
use crate::sparse::CsrMatrix;

/// Run the subpolicy of `mode` for `duration` steps before re-observing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SustainAction {
    pub mode: usize,
    pub duration: usize,
}

impl fmt::Display for SustainAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(pi_{}, {})", self.mode, self.duration)
    }
}

/// Scalarization weights `[w1, w2]` for goal reward and sensor saving.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weights {
    pub goal: f64,
    pub info: f64,
}

impl Weights {
    pub fn new(goal: f64, info: f64) -> Result<Self> {
        if !(goal > 0.0 && info > 0.0) || (goal + info - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "weights must be positive and sum to 1, got [{goal}, {info}]"
            )));
        }
        Ok(Weights { goal, info })
    }

    /// `[w1, 1 − w1]`.
    pub fn from_goal(w1: f64) -> Result<Self> {
        Weights::new(w1, 1.0 - w1)
    }
}

/// How sensor-deactivation reward accrues within a sustain phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InfoAccounting {
    /// `C_k` at every step of the phase: `R^I(k,t) = C_k (1 − γ^t)/(1 − γ)`.
    #[default]
    EveryStep,
    /// The first step of each phase is a full observation and saves nothing:
    /// `R^I(k,t) = C_k (γ − γ^t)/(1 − γ)`.
    FullObservationCharged,
}

impl InfoAccounting {
    /// Saving credited at step `j` (1-based) of a phase.
    pub fn step_saving(self, deactivation_reward: f64, j: usize) -> f64 {
        match self {
            InfoAccounting::EveryStep => deactivation_reward,
            InfoAccounting::FullObservationCharged if j == 1 => 0.0,
            InfoAccounting::FullObservationCharged => deactivation_reward,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct ModeChain {
    pub mode: AttentionMode,
    pub lifted: Policy,
    pub chain: InducedChain,
    /// `R^G(·, (k, t))` for `t = 1..=T`.
    pub goal: Vec<ValueFunction>,
    /// `R^I(k, t)` for `t = 1..=T`.
    pub info: Vec<f64>,
}

/// `M_T`: states of the original MDP, actions `(π_k, t)` for modes `k ≥ 1`
/// and `t ≤ T`.
///
/// Only the one-step chains `P_{π_k}` are stored; the `t`-step kernels are
/// applied as repeated products.
#[derive(Debug, Clone)]
pub struct AttentionShiftMdp {
    pub(crate) modes: Vec<ModeChain>,
    pub(crate) horizon: usize,
    pub(crate) gamma: f64,
    pub(crate) discounts: Vec<f64>,
    pub(crate) num_states: usize,
    pub(crate) initial: usize,
    pub(crate) accounting: InfoAccounting,
}

pub fn build_shift_mdp(mdp: &FactoredMdp, modes: &[AttentionalMdp], horizon: usize) -> Result<AttentionShiftMdp> {
    build_shift_mdp_with(mdp, modes, horizon, InfoAccounting::EveryStep)
}

pub fn build_shift_mdp_with(
    mdp: &FactoredMdp,
    modes: &[AttentionalMdp],
    horizon: usize,
    accounting: InfoAccounting,
) -> Result<AttentionShiftMdp> {
    if horizon == 0 {
        return Err(Error::invalid("sustain bound T must be at least 1"));
    }
    if modes.is_empty() {
        return Err(Error::invalid("at least one attention mode is required"));
    }
    let gamma = mdp.discount();
    if gamma >= 1.0 {
        return Err(Error::DiscountOne);
    }
    let mut chains = Vec::with_capacity(modes.len());
    for (i, am) in modes.iter().enumerate() {
        if am.mode().index() != i + 1 {
            return Err(Error::invalid(format!(
                "modes must be numbered 1..=m in order; position {} holds mode {}",
                i + 1,
                am.mode().index()
            )));
        }
        let lifted = lift_policy(am, mdp)?;
        let chain = induce_chain(mdp, &lifted)?;
        chains.push(ModeChain {
            mode: am.mode().clone(),
            lifted,
            chain,
            goal: Vec::new(),
            info: Vec::new(),
        });
    }
    let mut sm = AttentionShiftMdp {
        modes: chains,
        horizon: 0,
        gamma,
        discounts: Vec::new(),
        num_states: mdp.num_states(),
        initial: mdp.initial_state(),
        accounting,
    };
    sm.extend_to(horizon);
    Ok(sm)
}

impl AttentionShiftMdp {
    /// Grow the action set to durations `1..=horizon`, reusing the rewards
    /// already computed.
    pub fn extend_to(&mut self, horizon: usize) {
        let gamma = self.gamma;
        for mc in &mut self.modes {
            let c = mc.mode.deactivation_reward();
            while mc.goal.len() < horizon {
                let t = mc.goal.len() + 1;
                let g = match mc.goal.last() {
                    None => ValueFunction(mc.chain.reward.clone()),
                    Some(prev) => {
                        let pg = mc.chain.kernel.mul_vec(prev);
                        ValueFunction(mc.chain.reward.iter().zip(pg).map(|(r, p)| r + gamma * p).collect())
                    }
                };
                mc.goal.push(g);
                mc.info.push(info_closed_form(self.accounting, c, gamma, t));
            }
            mc.goal.truncate(horizon);
            mc.info.truncate(horizon);
        }
        self.discounts = (1..=horizon as i32).map(|t| gamma.powi(t)).collect();
        self.horizon = horizon;
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn num_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn num_actions(&self) -> usize {
        self.modes.len() * self.horizon
    }

    pub fn initial_state(&self) -> usize {
        self.initial
    }

    pub fn discount(&self) -> f64 {
        self.gamma
    }

    pub fn accounting(&self) -> InfoAccounting {
        self.accounting
    }

    /// Actions ordered by mode, then duration.
    pub fn actions(&self) -> impl Iterator<Item = SustainAction> + '_ {
        (1..=self.modes.len()).flat_map(move |mode| (1..=self.horizon).map(move |duration| SustainAction { mode, duration }))
    }

    fn mode_chain(&self, mode: usize) -> &ModeChain {
        &self.modes[mode - 1]
    }

    pub fn mode(&self, mode: usize) -> &AttentionMode {
        &self.mode_chain(mode).mode
    }

    /// The subpolicy of `mode` applied to full states.
    pub fn lifted_policy(&self, mode: usize) -> &Policy {
        &self.mode_chain(mode).lifted
    }

    pub fn chain(&self, mode: usize) -> &InducedChain {
        &self.mode_chain(mode).chain
    }

    /// `P̂_T(·|·, (π_k, t))` materialized as a sparse matrix.
    pub fn kernel(&self, action: SustainAction) -> Result<CsrMatrix> {
        self.check(action)?;
        t_step_kernel(self.chain(action.mode), action.duration)
    }

    pub fn goal_reward(&self, action: SustainAction) -> &ValueFunction {
        &self.mode_chain(action.mode).goal[action.duration - 1]
    }

    pub fn info_reward(&self, action: SustainAction) -> f64 {
        self.mode_chain(action.mode).info[action.duration - 1]
    }

    /// Recompute `R^G` for one action from scratch, for cross-checks.
    pub fn goal_reward_direct(&self, action: SustainAction) -> Result<ValueFunction> {
        self.check(action)?;
        truncated_discounted_return(self.chain(action.mode), self.gamma, action.duration)
    }

    pub(crate) fn check(&self, action: SustainAction) -> Result<()> {
        if action.mode == 0 || action.mode > self.modes.len() || action.duration == 0 || action.duration > self.horizon {
            return Err(Error::invalid(format!("{action} is not an action of this attention-shift MDP")));
        }
        Ok(())
    }
}

fn info_closed_form(accounting: InfoAccounting, c: f64, gamma: f64, t: usize) -> f64 {
    let gt = gamma.powi(t as i32);
    match accounting {
        InfoAccounting::EveryStep => c * ((1.0 - gt) / (1.0 - gamma)),
        InfoAccounting::FullObservationCharged => c * ((gamma - gt) / (1.0 - gamma)),
    }
}
