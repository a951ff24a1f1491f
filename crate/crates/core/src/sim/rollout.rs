use serde::Serialize;

use crate::mdp::{ActionId, FactoredMdp, StateId};
use crate::shift::{AttentionShiftMdp, ShiftSolution, SustainAction};

use super::sampler::pick;
use super::{StepSampler, Substreams};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepRecord {
    pub time: usize,
    pub state: StateId,
    /// Active attention mode.
    pub mode: usize,
    /// 1-based step within the current sustain phase.
    pub phase_step: usize,
    pub action: ActionId,
    /// Expected one-step reward `R(x, a)`.
    pub reward: f64,
    /// Sensor-deactivation reward credited at this step.
    pub info_reward: f64,
    /// The full state was observed at this step (start of a phase).
    pub full_observation: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryLog {
    pub seed: u64,
    pub steps: Vec<StepRecord>,
    /// State after the last logged step.
    pub final_state: StateId,
}

/// Executes sustain phases of a solved attention-shift policy.
pub struct Executor<'a, S: StepSampler> {
    pub mdp: &'a FactoredMdp,
    pub shift: &'a AttentionShiftMdp,
    pub solution: &'a ShiftSolution,
    pub sampler: &'a S,
}

impl<'a, S: StepSampler> Executor<'a, S> {
    pub fn new(mdp: &'a FactoredMdp, shift: &'a AttentionShiftMdp, solution: &'a ShiftSolution, sampler: &'a S) -> Self {
        Executor {
            mdp,
            shift,
            solution,
            sampler,
        }
    }

    pub fn streams(&self, seed: u64) -> Substreams {
        let mut names = self.sampler.stream_names();
        names.push("policy".into());
        Substreams::new(seed, names)
    }

    fn choose(&self, mode: usize, x: StateId, streams: &mut Substreams) -> ActionId {
        let lifted = self.shift.lifted_policy(mode);
        match lifted.action(x) {
            Some(a) => a,
            None => {
                let policy_stream = streams.names().len() - 1;
                let u = streams.uniform(policy_stream);
                pick(lifted.distribution(x).iter().copied(), u)
            }
        }
    }

    /// Run `action` from `x` for its duration (or until `time` reaches
    /// `horizon`), appending one record per step. Returns the state reached.
    pub fn run_phase(
        &self,
        x: StateId,
        action: SustainAction,
        time: &mut usize,
        horizon: usize,
        streams: &mut Substreams,
        records: &mut Vec<StepRecord>,
    ) -> StateId {
        let accounting = self.shift.accounting();
        let c = self.shift.mode(action.mode).deactivation_reward();
        let mut x = x;
        for j in 1..=action.duration {
            if *time >= horizon {
                break;
            }
            let a = self.choose(action.mode, x, streams);
            records.push(StepRecord {
                time: *time,
                state: x,
                mode: action.mode,
                phase_step: j,
                action: a,
                reward: self.mdp.reward(x, a),
                info_reward: accounting.step_saving(c, j),
                full_observation: j == 1,
            });
            x = self.sampler.step(x, a, streams);
            *time += 1;
        }
        x
    }
}

/// Simulate the shift policy from the initial state for `horizon` steps.
pub fn rollout<S: StepSampler>(
    mdp: &FactoredMdp,
    shift: &AttentionShiftMdp,
    solution: &ShiftSolution,
    sampler: &S,
    horizon: usize,
    seed: u64,
) -> TrajectoryLog {
    rollout_from(mdp, shift, solution, sampler, mdp.initial_state(), horizon, seed)
}

/// Simulate from an arbitrary start state.
pub fn rollout_from<S: StepSampler>(
    mdp: &FactoredMdp,
    shift: &AttentionShiftMdp,
    solution: &ShiftSolution,
    sampler: &S,
    start: StateId,
    horizon: usize,
    seed: u64,
) -> TrajectoryLog {
    let exec = Executor::new(mdp, shift, solution, sampler);
    let mut streams = exec.streams(seed);
    let mut steps = Vec::with_capacity(horizon);
    let mut time = 0;
    let mut x = start;
    while time < horizon {
        let action = solution.policy[x];
        x = exec.run_phase(x, action, &mut time, horizon, &mut streams, &mut steps);
    }
    TrajectoryLog {
        seed,
        steps,
        final_state: x,
    }
}
