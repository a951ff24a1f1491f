use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::mdp::{FactoredMdp, StateId};

/// An attention mode `k`: the attended variable indices `I_k` together with
/// the shared per-variable sensor costs.
#[derive(Debug, Clone, PartialEq)]
pub struct AttentionMode {
    index: usize,
    attended: Vec<usize>,
    sensor_costs: Vec<f64>,
    deactivation_reward: f64,
}

impl AttentionMode {
    /// Mode `index` attending `attended` (sorted and deduplicated here).
    /// Mode 0 is reserved for null attention and must attend every variable.
    pub fn new(index: usize, attended: Vec<usize>, sensor_costs: Vec<f64>) -> Result<Self> {
        let n = sensor_costs.len();
        if let Some(c) = sensor_costs.iter().find(|c| !(c.is_finite() && **c >= 0.0)) {
            return Err(Error::invalid(format!("sensor cost {c} must be finite and nonnegative")));
        }
        let mut attended = attended;
        attended.sort_unstable();
        attended.dedup();
        if attended.is_empty() {
            return Err(Error::invalid(format!("mode {index} attends no variables")));
        }
        if let Some(&i) = attended.iter().find(|&&i| i >= n) {
            return Err(Error::invalid(format!("mode {index} attends unknown variable {i}")));
        }
        if index == 0 && attended.len() != n {
            return Err(Error::invalid("mode 0 is the null mode and must attend every variable"));
        }
        let deactivation_reward = (0..n)
            .filter(|j| attended.binary_search(j).is_err())
            .map(|j| sensor_costs[j])
            .sum();
        Ok(AttentionMode {
            index,
            attended,
            sensor_costs,
            deactivation_reward,
        })
    }

    pub fn null(sensor_costs: Vec<f64>) -> Result<Self> {
        let n = sensor_costs.len();
        AttentionMode::new(0, (0..n).collect(), sensor_costs)
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn attended(&self) -> &[usize] {
        &self.attended
    }

    pub fn is_attended(&self, var: usize) -> bool {
        self.attended.binary_search(&var).is_ok()
    }

    pub fn unattended(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.sensor_costs.len()).filter(|&j| !self.is_attended(j))
    }

    pub fn sensor_costs(&self) -> &[f64] {
        &self.sensor_costs
    }

    /// `C_k`: per-step cost saved by leaving the unattended sensors off.
    pub fn deactivation_reward(&self) -> f64 {
        self.deactivation_reward
    }

    /// Copy of this mode with all sensor costs set to zero.
    pub fn without_costs(&self) -> Self {
        AttentionMode::new(self.index, self.attended.clone(), vec![0.0; self.sensor_costs.len()])
            .expect("zero costs are valid")
    }

    pub fn num_vars(&self) -> usize {
        self.sensor_costs.len()
    }
}

/// `f_k(x) = [x_i]_{i ∈ I_k}`.
pub fn project(mode: &AttentionMode, x: &[usize]) -> Vec<usize> {
    mode.attended.iter().map(|&i| x[i]).collect()
}

/// `f_k^{-1}(y)` over the enumerated states of `mdp`.
pub fn preimage(mode: &AttentionMode, y: &[usize], mdp: &FactoredMdp) -> Result<Vec<StateId>> {
    let ids: Vec<StateId> = (0..mdp.num_states())
        .filter(|&s| {
            let x = mdp.state(s);
            mode.attended.iter().zip(y).all(|(&i, &v)| x[i] == v)
        })
        .collect();
    if ids.is_empty() || y.len() != mode.attended.len() {
        return Err(Error::EmptyPreimage(y.to_vec()));
    }
    Ok(ids)
}

/// The projection image of an MDP's state set under one mode, with the
/// preimage of every observed tuple. Observed ids follow lexicographic tuple
/// order.
#[derive(Debug, Clone)]
pub struct ObservedSpace {
    tuples: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    of_state: Vec<usize>,
    members: Vec<Vec<StateId>>,
}

impl ObservedSpace {
    pub fn new(mode: &AttentionMode, mdp: &FactoredMdp) -> Result<Self> {
        if mode.num_vars() != mdp.variables().len() {
            return Err(Error::invalid(format!(
                "mode has costs for {} variables, MDP has {}",
                mode.num_vars(),
                mdp.variables().len()
            )));
        }
        let projected: Vec<Vec<usize>> = mdp.states().iter().map(|x| project(mode, x)).collect();
        let mut tuples = projected.clone();
        tuples.sort();
        tuples.dedup();
        let index: HashMap<Vec<usize>, usize> = tuples.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let of_state: Vec<usize> = projected.iter().map(|y| index[y]).collect();
        let mut members = vec![Vec::new(); tuples.len()];
        for (s, &y) in of_state.iter().enumerate() {
            members[y].push(s);
        }
        Ok(ObservedSpace {
            tuples,
            index,
            of_state,
            members,
        })
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuple(&self, y: usize) -> &[usize] {
        &self.tuples[y]
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn id(&self, y: &[usize]) -> Option<usize> {
        self.index.get(y).copied()
    }

    /// Observed id of a full state.
    pub fn observe(&self, s: StateId) -> usize {
        self.of_state[s]
    }

    pub fn members(&self, y: usize) -> &[StateId] {
        &self.members[y]
    }
}
