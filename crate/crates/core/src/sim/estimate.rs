use serde::Serialize;

use crate::mdp::FactoredMdp;
use crate::shift::{AttentionShiftMdp, ShiftSolution};

use super::rollout::Executor;
use super::StepSampler;

/// Sample mean with a `3σ + tail` confidence half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
    /// Bound on the discounted return lost by truncating at the horizon.
    pub tail: f64,
    pub half_width: f64,
}

impl Estimate {
    pub fn contains(&self, value: f64) -> bool {
        (self.mean - value).abs() <= self.half_width
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReturnEstimate {
    pub goal: Estimate,
    pub info: Estimate,
    pub rollouts: usize,
    pub horizon: usize,
    pub seed: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of rollout `i` under master seed `seed`.
pub fn rollout_seed(seed: u64, i: usize) -> u64 {
    splitmix64(seed ^ splitmix64(i as u64))
}

fn summarize(samples: &[f64], tail: f64) -> Estimate {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = if samples.len() > 1 {
        samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let std_err = (var / n).sqrt();
    Estimate {
        mean,
        std_err,
        tail,
        half_width: 3.0 * std_err + tail,
    }
}

/// Monte-Carlo estimates of `G(x_0)` and `I(x_0)`: discounted sums of
/// `R(x_t, a_t)` and of the per-step sensor saving over `horizon` steps.
pub fn estimate_returns<S: StepSampler>(
    mdp: &FactoredMdp,
    shift: &AttentionShiftMdp,
    solution: &ShiftSolution,
    sampler: &S,
    rollouts: usize,
    horizon: usize,
    seed: u64,
) -> ReturnEstimate {
    assert!(rollouts >= 1, "at least one rollout is required");
    let gamma = mdp.discount();
    let exec = Executor::new(mdp, shift, solution, sampler);
    let mut goals = Vec::with_capacity(rollouts);
    let mut infos = Vec::with_capacity(rollouts);
    let mut records = Vec::new();
    for i in 0..rollouts {
        let mut streams = exec.streams(rollout_seed(seed, i));
        let (mut time, mut x) = (0, mdp.initial_state());
        let (mut g, mut info) = (0.0, 0.0);
        let mut disc = 1.0;
        while time < horizon {
            records.clear();
            x = exec.run_phase(x, solution.policy[x], &mut time, horizon, &mut streams, &mut records);
            for r in &records {
                g += disc * r.reward;
                info += disc * r.info_reward;
                disc *= gamma;
            }
        }
        goals.push(g);
        infos.push(info);
    }
    let r_max = (0..mdp.num_states())
        .flat_map(|s| (0..mdp.num_actions()).map(move |a| (s, a)))
        .map(|(s, a)| mdp.reward(s, a).abs())
        .fold(0.0, f64::max);
    let c_max = (1..=shift.num_modes())
        .map(|k| shift.mode(k).deactivation_reward())
        .fold(0.0, f64::max);
    let scale = gamma.powi(horizon as i32) / (1.0 - gamma);
    ReturnEstimate {
        goal: summarize(&goals, scale * r_max),
        info: summarize(&infos, scale * c_max),
        rollouts,
        horizon,
        seed,
    }
}
