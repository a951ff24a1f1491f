use std::ops::{Deref, DerefMut};

use crate::error::{Error, Result};

use super::{ActionId, StateId, STOCHASTIC_TOL};

/// Markovian, possibly randomized policy. Deterministic policies are point
/// distributions.
#[derive(Debug, Clone, PartialEq)]
pub struct Policy {
    dists: Vec<Vec<(ActionId, f64)>>,
}

impl Policy {
    pub fn deterministic(actions: Vec<ActionId>) -> Self {
        Policy {
            dists: actions.into_iter().map(|a| vec![(a, 1.0)]).collect(),
        }
    }

    /// Randomized policy; every distribution must sum to one.
    pub fn from_distributions(dists: Vec<Vec<(ActionId, f64)>>) -> Result<Self> {
        for (s, d) in dists.iter().enumerate() {
            let sum: f64 = d.iter().map(|&(_, p)| p).sum();
            if d.iter().any(|&(_, p)| !(0.0..=1.0).contains(&p)) || (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::invalid(format!("policy distribution at state {s} is not stochastic")));
            }
        }
        Ok(Policy { dists })
    }

    /// Uniform distribution over `num_actions` at every state.
    pub fn uniform(num_states: usize, num_actions: usize) -> Self {
        let p = 1.0 / num_actions as f64;
        Policy {
            dists: vec![(0..num_actions).map(|a| (a, p)).collect(); num_states],
        }
    }

    pub fn len(&self) -> usize {
        self.dists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dists.is_empty()
    }

    pub fn distribution(&self, s: StateId) -> &[(ActionId, f64)] {
        &self.dists[s]
    }

    /// The action at `s` if the policy is deterministic there.
    pub fn action(&self, s: StateId) -> Option<ActionId> {
        match self.dists[s].as_slice() {
            [(a, p)] if *p == 1.0 => Some(*a),
            _ => None,
        }
    }

    pub fn is_deterministic(&self) -> bool {
        (0..self.dists.len()).all(|s| self.action(s).is_some())
    }

    pub(crate) fn check_actions(&self, num_states: usize, num_actions: usize) -> Result<()> {
        if self.dists.len() != num_states {
            return Err(Error::invalid(format!(
                "policy covers {} states, MDP has {num_states}",
                self.dists.len()
            )));
        }
        if let Some(s) = self.dists.iter().position(|d| d.iter().any(|&(a, _)| a >= num_actions)) {
            return Err(Error::invalid(format!("policy at state {s} uses an unknown action")));
        }
        Ok(())
    }
}

/// Dense value vector indexed by state id.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValueFunction(pub Vec<f64>);

impl ValueFunction {
    pub fn zeros(n: usize) -> Self {
        ValueFunction(vec![0.0; n])
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn max_abs_diff(&self, other: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Deref for ValueFunction {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for ValueFunction {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

impl From<Vec<f64>> for ValueFunction {
    fn from(v: Vec<f64>) -> Self {
        ValueFunction(v)
    }
}
