use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

use super::STOCHASTIC_TOL;

pub type StateId = usize;
pub type ActionId = usize;

pub const DEFAULT_STATE_CAP: usize = 500_000;

/// A state variable with a finite, labelled value domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub labels: Vec<String>,
}

impl Variable {
    pub fn new(name: impl Into<String>, labels: Vec<String>) -> Self {
        Variable {
            name: name.into(),
            labels,
        }
    }

    /// Variable whose values are labelled `0..size`.
    pub fn indexed(name: impl Into<String>, size: usize) -> Self {
        Variable::new(name, (0..size).map(|v| v.to_string()).collect())
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }
}

/// Explicit finite MDP over tuples of variable values.
///
/// Transition rows are stored as one CSR row per `(state, action)` pair at
/// row index `state * num_actions + action`.
#[derive(Debug, Clone)]
pub struct FactoredMdp {
    variables: Vec<Variable>,
    states: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, StateId>,
    actions: Vec<String>,
    transitions: CsrMatrix,
    reward: Vec<f64>,
    initial: StateId,
    discount: f64,
}

impl FactoredMdp {
    /// Build from a fully explicit description.
    ///
    /// `rows[s * actions.len() + a]` is the sparse next-state distribution
    /// and `reward` uses the same layout.
    pub fn from_explicit(
        variables: Vec<Variable>,
        states: Vec<Vec<usize>>,
        actions: Vec<String>,
        rows: Vec<Vec<(StateId, f64)>>,
        reward: Vec<f64>,
        initial: StateId,
        discount: f64,
    ) -> Result<Self> {
        let n = states.len();
        let na = actions.len();
        if variables.is_empty() {
            return Err(Error::invalid("at least one variable is required"));
        }
        if let Some(v) = variables.iter().find(|v| v.size() == 0) {
            return Err(Error::invalid(format!("variable `{}` has an empty domain", v.name)));
        }
        if n == 0 || na == 0 {
            return Err(Error::invalid("state and action sets must be non-empty"));
        }
        if rows.len() != n * na || reward.len() != n * na {
            return Err(Error::invalid(format!(
                "expected {} transition rows and rewards, got {} and {}",
                n * na,
                rows.len(),
                reward.len()
            )));
        }
        if initial >= n {
            return Err(Error::invalid("initial state out of range"));
        }
        if !(discount > 0.0 && discount <= 1.0) {
            return Err(Error::invalid(format!("discount {discount} not in (0, 1]")));
        }
        let mut index = HashMap::with_capacity(n);
        for (id, tuple) in states.iter().enumerate() {
            if tuple.len() != variables.len() {
                return Err(Error::invalid(format!("state {id} has wrong arity")));
            }
            for (value, var) in tuple.iter().zip(&variables) {
                if *value >= var.size() {
                    return Err(Error::invalid(format!(
                        "state {id}: value {value} outside domain of `{}`",
                        var.name
                    )));
                }
            }
            if index.insert(tuple.clone(), id).is_some() {
                return Err(Error::invalid(format!("duplicate state tuple {tuple:?}")));
            }
        }
        for (r, row) in rows.iter().enumerate() {
            for &(next, p) in row {
                if next >= n {
                    return Err(Error::invalid(format!("row {r}: next state {next} out of range")));
                }
                if !(-STOCHASTIC_TOL..=1.0 + STOCHASTIC_TOL).contains(&p) {
                    return Err(Error::invalid(format!("row {r}: probability {p} not in [0, 1]")));
                }
            }
        }
        if let Some(r) = reward.iter().position(|r| !r.is_finite()) {
            return Err(Error::invalid(format!("reward {r} is not finite")));
        }
        let transitions = CsrMatrix::from_rows(n, rows);
        for r in 0..transitions.nrows() {
            let sum = transitions.row_sum(r);
            if (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::invalid(format!(
                    "transition row (state {}, action {}) sums to {sum}",
                    r / na,
                    r % na
                )));
            }
        }
        Ok(FactoredMdp {
            variables,
            states,
            index,
            actions,
            transitions,
            reward,
            initial,
            discount,
        })
    }

    /// Enumerate the states reachable from `initial` by breadth-first search.
    ///
    /// `step(tuple, action)` returns the next-tuple distribution and the
    /// expected one-step reward. The enumeration is sorted lexicographically
    /// by tuple, so state ids do not depend on the search order.
    pub fn enumerate<F>(
        variables: Vec<Variable>,
        actions: Vec<String>,
        initial: Vec<usize>,
        discount: f64,
        cap: usize,
        mut step: F,
    ) -> Result<Self>
    where
        F: FnMut(&[usize], ActionId) -> (Vec<(Vec<usize>, f64)>, f64),
    {
        let na = actions.len();
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut order: Vec<Vec<usize>> = Vec::new();
        let mut raw: Vec<Vec<(usize, f64)>> = Vec::new();
        let mut reward = Vec::new();
        let mut queue = VecDeque::new();
        seen.insert(initial.clone(), 0);
        order.push(initial.clone());
        queue.push_back(0usize);
        while let Some(id) = queue.pop_front() {
            let tuple = order[id].clone();
            for a in 0..na {
                let (dist, r) = step(&tuple, a);
                let mut row = Vec::with_capacity(dist.len());
                for (next, p) in dist {
                    if p == 0.0 {
                        continue;
                    }
                    let next_id = match seen.get(&next) {
                        Some(&i) => i,
                        None => {
                            let i = order.len();
                            if i >= cap {
                                return Err(Error::StateSpaceTooLarge {
                                    count: i + 1,
                                    cap,
                                });
                            }
                            seen.insert(next.clone(), i);
                            order.push(next);
                            queue.push_back(i);
                            i
                        }
                    };
                    row.push((next_id, p));
                }
                // rows are stored in discovery order and remapped below
                raw.push(row);
                reward.push(r);
            }
        }
        let mut sorted: Vec<usize> = (0..order.len()).collect();
        sorted.sort_by(|&a, &b| order[a].cmp(&order[b]));
        let mut remap = vec![0; order.len()];
        for (new, &old) in sorted.iter().enumerate() {
            remap[old] = new;
        }
        let mut rows = Vec::with_capacity(raw.len());
        let mut rewards = Vec::with_capacity(raw.len());
        for &old in &sorted {
            for a in 0..na {
                let row = &raw[old * na + a];
                rows.push(row.iter().map(|&(c, p)| (remap[c], p)).collect());
                rewards.push(reward[old * na + a]);
            }
        }
        let states = sorted.iter().map(|&old| order[old].clone()).collect();
        FactoredMdp::from_explicit(variables, states, actions, rows, rewards, remap[0], discount)
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn state(&self, id: StateId) -> &[usize] {
        &self.states[id]
    }

    pub fn states(&self) -> &[Vec<usize>] {
        &self.states
    }

    pub fn state_id(&self, tuple: &[usize]) -> Option<StateId> {
        self.index.get(tuple).copied()
    }

    pub fn initial_state(&self) -> StateId {
        self.initial
    }

    pub fn discount(&self) -> f64 {
        self.discount
    }

    /// Copy of this MDP with a different discount factor.
    pub fn with_discount(&self, discount: f64) -> Result<Self> {
        if !(discount > 0.0 && discount <= 1.0) {
            return Err(Error::invalid(format!("discount {discount} not in (0, 1]")));
        }
        let mut out = self.clone();
        out.discount = discount;
        Ok(out)
    }

    pub fn transition(&self, s: StateId, a: ActionId) -> impl Iterator<Item = (StateId, f64)> + '_ {
        self.transitions.row(s * self.actions.len() + a)
    }

    pub fn probability(&self, s: StateId, a: ActionId, next: StateId) -> f64 {
        self.transitions.get(s * self.actions.len() + a, next)
    }

    pub fn reward(&self, s: StateId, a: ActionId) -> f64 {
        self.reward[s * self.actions.len() + a]
    }

    /// Human-readable labels of a state tuple.
    pub fn state_labels(&self, id: StateId) -> Vec<String> {
        self.states[id]
            .iter()
            .zip(&self.variables)
            .map(|(&v, var)| var.labels[v].clone())
            .collect()
    }

    /// Q-values `R(s,a) + γ Σ P(s'|s,a) V(s')` for all actions of `s`.
    pub(crate) fn q_values(&self, s: StateId, values: &[f64], out: &mut [f64]) {
        for (a, q) in out.iter_mut().enumerate() {
            let cont: f64 = self.transition(s, a).map(|(n, p)| p * values[n]).sum();
            *q = self.reward(s, a) + self.discount * cont;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_state_rows() -> Vec<Vec<(StateId, f64)>> {
        vec![vec![(0, 0.5), (1, 0.5)], vec![(1, 1.0)]]
    }

    #[test]
    fn rejects_non_stochastic_row() {
        let err = FactoredMdp::from_explicit(
            vec![Variable::indexed("x", 2)],
            vec![vec![0], vec![1]],
            vec!["a".into()],
            vec![vec![(0, 0.5), (1, 0.4)], vec![(1, 1.0)]],
            vec![0.0, 0.0],
            0,
            0.9,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)), "{err}");
    }

    #[test]
    fn rejects_duplicate_tuples_and_bad_probabilities() {
        let dup = FactoredMdp::from_explicit(
            vec![Variable::indexed("x", 2)],
            vec![vec![0], vec![0]],
            vec!["a".into()],
            two_state_rows(),
            vec![0.0, 0.0],
            0,
            0.9,
        );
        assert!(dup.is_err());
        let neg = FactoredMdp::from_explicit(
            vec![Variable::indexed("x", 2)],
            vec![vec![0], vec![1]],
            vec!["a".into()],
            vec![vec![(0, 1.5), (1, -0.5)], vec![(1, 1.0)]],
            vec![0.0, 0.0],
            0,
            0.9,
        );
        assert!(neg.is_err());
    }

    #[test]
    fn enumeration_prunes_unreachable_and_sorts() {
        // Counter on 0..5 that only ever moves up by one from 2; 0 and 1 are unreachable.
        let mdp = FactoredMdp::enumerate(
            vec![Variable::indexed("c", 5)],
            vec!["up".into()],
            vec![2],
            0.9,
            DEFAULT_STATE_CAP,
            |x, _| (vec![(vec![(x[0] + 1).min(4)], 1.0)], 0.0),
        )
        .unwrap();
        assert_eq!(mdp.states(), &[vec![2], vec![3], vec![4]]);
        assert_eq!(mdp.initial_state(), 0);
        for (id, t) in mdp.states().iter().enumerate() {
            assert_eq!(mdp.state_id(t), Some(id));
        }
    }

    #[test]
    fn enumeration_respects_cap() {
        let err = FactoredMdp::enumerate(
            vec![Variable::indexed("c", 100)],
            vec!["up".into()],
            vec![0],
            0.9,
            10,
            |x, _| (vec![(vec![(x[0] + 1).min(99)], 1.0)], 0.0),
        )
        .unwrap_err();
        assert!(matches!(err, Error::StateSpaceTooLarge { cap: 10, .. }));
    }
}
