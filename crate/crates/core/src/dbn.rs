//! Dynamic Bayesian network transition models.
//!
//! Each next-step variable `X_i'` has a conditional probability table whose
//! parents are drawn from the previous slice (`X_j`) and, optionally, from
//! already-determined variables of the current slice (`X_j'`). Current-slice
//! arcs must be acyclic. The joint transition is the product of the tables.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parent {
    Previous(usize),
    Current(usize),
}

impl Parent {
    pub fn var(self) -> usize {
        match self {
            Parent::Previous(v) | Parent::Current(v) => v,
        }
    }
}

/// Conditional probability table for one variable under one action.
///
/// `table` is row-major: one row of length `domain` per parent configuration,
/// configurations enumerated in mixed radix with the first parent most
/// significant.
#[derive(Debug, Clone, PartialEq)]
pub struct Cpt {
    pub parents: Vec<Parent>,
    pub table: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Dbn {
    domains: Vec<usize>,
    num_actions: usize,
    /// `cpts[a][i]`
    cpts: Vec<Vec<Cpt>>,
    order: Vec<usize>,
}

impl Dbn {
    pub fn new(domains: Vec<usize>, cpts: Vec<Vec<Cpt>>) -> Result<Self> {
        let n = domains.len();
        if cpts.is_empty() {
            return Err(Error::invalid("DBN needs at least one action"));
        }
        for (a, per_action) in cpts.iter().enumerate() {
            if per_action.len() != n {
                return Err(Error::invalid(format!("action {a}: expected {n} tables")));
            }
            for (i, cpt) in per_action.iter().enumerate() {
                let mut configs = 1usize;
                for p in &cpt.parents {
                    if p.var() >= n {
                        return Err(Error::invalid(format!("action {a}, var {i}: parent out of range")));
                    }
                    configs *= domains[p.var()];
                }
                if cpt.table.len() != configs * domains[i] {
                    return Err(Error::invalid(format!(
                        "action {a}, var {i}: table has {} entries, expected {}",
                        cpt.table.len(),
                        configs * domains[i]
                    )));
                }
                for row in cpt.table.chunks(domains[i]) {
                    let sum: f64 = row.iter().sum();
                    if row.iter().any(|p| !(0.0..=1.0).contains(p)) || (sum - 1.0).abs() > 1e-9 {
                        return Err(Error::invalid(format!("action {a}, var {i}: row is not stochastic")));
                    }
                }
            }
        }
        let order = topological_order(n, &cpts)?;
        Ok(Dbn {
            domains,
            num_actions: cpts.len(),
            cpts,
            order,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.domains.len()
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn domains(&self) -> &[usize] {
        &self.domains
    }

    pub fn cpt(&self, action: usize, var: usize) -> &Cpt {
        &self.cpts[action][var]
    }

    /// Variables ordered so current-slice parents come first.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Distribution of `X_var'` given previous values and the current-slice
    /// values already fixed. Values are looked up through `value_of`.
    pub fn conditional<F>(&self, action: usize, var: usize, mut value_of: F) -> &[f64]
    where
        F: FnMut(Parent) -> usize,
    {
        let cpt = &self.cpts[action][var];
        let mut row = 0usize;
        for &p in &cpt.parents {
            row = row * self.domains[p.var()] + value_of(p);
        }
        let d = self.domains[var];
        &cpt.table[row * d..(row + 1) * d]
    }

    /// Product of the tables for a full transition `x -> next`.
    pub fn joint_probability(&self, action: usize, x: &[usize], next: &[usize]) -> f64 {
        (0..self.num_vars())
            .map(|i| {
                let row = self.conditional(action, i, |p| match p {
                    Parent::Previous(j) => x[j],
                    Parent::Current(j) => next[j],
                });
                row[next[i]]
            })
            .product()
    }

    /// Check that every parent of an attended variable is attended, for every
    /// action.
    pub fn check_parent_closed(&self, attended: &[usize]) -> Result<()> {
        let mut inside = vec![false; self.num_vars()];
        for &i in attended {
            inside[i] = true;
        }
        for per_action in &self.cpts {
            for &i in attended {
                if let Some(p) = per_action[i].parents.iter().find(|p| !inside[p.var()]) {
                    return Err(Error::ModeNotParentClosed { var: i, parent: p.var() });
                }
            }
        }
        Ok(())
    }

    /// Enumerate the joint distribution over next values of `vars` (which
    /// must be parent-closed), given previous values via `prev`. Returned
    /// tuples are ordered like `vars`.
    pub fn marginal_successors<F>(&self, action: usize, vars: &[usize], prev: F) -> Vec<(Vec<usize>, f64)>
    where
        F: Fn(usize) -> usize,
    {
        let pos: Vec<Option<usize>> = (0..self.num_vars())
            .map(|v| vars.iter().position(|&u| u == v))
            .collect();
        let seq: Vec<usize> = self.order.iter().copied().filter(|v| pos[*v].is_some()).collect();
        let mut out = Vec::new();
        let mut cur = vec![0usize; vars.len()];
        self.expand(action, &seq, 0, &pos, &prev, &mut cur, 1.0, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn expand<F>(
        &self,
        action: usize,
        seq: &[usize],
        depth: usize,
        pos: &[Option<usize>],
        prev: &F,
        cur: &mut Vec<usize>,
        prob: f64,
        out: &mut Vec<(Vec<usize>, f64)>,
    ) where
        F: Fn(usize) -> usize,
    {
        if depth == seq.len() {
            out.push((cur.clone(), prob));
            return;
        }
        let var = seq[depth];
        let row: Vec<f64> = self
            .conditional(action, var, |p| match p {
                Parent::Previous(j) => prev(j),
                Parent::Current(j) => cur[pos[j].expect("parent-closed")],
            })
            .to_vec();
        for (value, p) in row.into_iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            cur[pos[var].unwrap()] = value;
            self.expand(action, seq, depth + 1, pos, prev, cur, prob * p, out);
        }
    }
}

fn topological_order(n: usize, cpts: &[Vec<Cpt>]) -> Result<Vec<usize>> {
    // union of current-slice arcs over all actions
    let mut deps: Vec<Vec<usize>> = vec![Vec::new(); n];
    for per_action in cpts {
        for (i, cpt) in per_action.iter().enumerate() {
            for p in &cpt.parents {
                if let Parent::Current(j) = *p {
                    if j == i {
                        return Err(Error::invalid(format!("variable {i} depends on itself in the current slice")));
                    }
                    deps[i].push(j);
                }
            }
        }
    }
    let mut state = vec![0u8; n];
    let mut order = Vec::with_capacity(n);
    fn visit(v: usize, deps: &[Vec<usize>], state: &mut [u8], order: &mut Vec<usize>) -> bool {
        match state[v] {
            2 => return true,
            1 => return false,
            _ => {}
        }
        state[v] = 1;
        for &d in &deps[v] {
            if !visit(d, deps, state, order) {
                return false;
            }
        }
        state[v] = 2;
        order.push(v);
        true
    }
    for v in 0..n {
        if !visit(v, &deps, &mut state, &mut order) {
            return Err(Error::invalid("current-slice dependencies contain a cycle"));
        }
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two binary variables: X0 flips with prob 0.3, X1' copies X0'.
    fn copy_dbn() -> Dbn {
        let x0 = Cpt {
            parents: vec![Parent::Previous(0)],
            table: vec![0.7, 0.3, 0.3, 0.7],
        };
        let x1 = Cpt {
            parents: vec![Parent::Current(0)],
            table: vec![1.0, 0.0, 0.0, 1.0],
        };
        Dbn::new(vec![2, 2], vec![vec![x0, x1]]).unwrap()
    }

    #[test]
    fn current_slice_parents_are_ordered_first() {
        let dbn = copy_dbn();
        assert_eq!(dbn.order(), &[0, 1]);
        let succ = dbn.marginal_successors(0, &[0, 1], |_| 0);
        assert_eq!(succ, vec![(vec![0, 0], 0.7), (vec![1, 1], 0.3)]);
        assert_eq!(dbn.joint_probability(0, &[1, 0], &[1, 1]), 0.7);
    }

    #[test]
    fn parent_closure() {
        let dbn = copy_dbn();
        assert!(dbn.check_parent_closed(&[0]).is_ok());
        assert!(dbn.check_parent_closed(&[0, 1]).is_ok());
        assert!(matches!(
            dbn.check_parent_closed(&[1]),
            Err(Error::ModeNotParentClosed { var: 1, parent: 0 })
        ));
    }

    #[test]
    fn cycles_and_bad_rows_rejected() {
        let a = Cpt {
            parents: vec![Parent::Current(1)],
            table: vec![1.0, 0.0, 0.0, 1.0],
        };
        let b = Cpt {
            parents: vec![Parent::Current(0)],
            table: vec![1.0, 0.0, 0.0, 1.0],
        };
        assert!(Dbn::new(vec![2, 2], vec![vec![a, b]]).is_err());
        let bad = Cpt {
            parents: vec![],
            table: vec![0.5, 0.6],
        };
        assert!(Dbn::new(vec![2], vec![vec![bad]]).is_err());
    }
}
