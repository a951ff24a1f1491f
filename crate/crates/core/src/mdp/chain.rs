use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

use super::{FactoredMdp, Policy, ValueFunction};

/// Markov chain induced by a policy: `P_π` and the expected one-step reward
/// `r_π`.
#[derive(Debug, Clone)]
pub struct InducedChain {
    pub kernel: CsrMatrix,
    pub reward: Vec<f64>,
}

impl InducedChain {
    pub fn num_states(&self) -> usize {
        self.reward.len()
    }

    /// Solve `V = r + γ P V` by successive approximation.
    pub fn evaluate(&self, gamma: f64, tol: f64, max_iters: usize) -> Result<ValueFunction> {
        super::solve::check_solver_args(gamma, tol)?;
        let n = self.num_states();
        let mut v = vec![0.0; n];
        let mut pv = vec![0.0; n];
        let threshold = tol * (1.0 - gamma);
        let mut delta = f64::INFINITY;
        for _ in 0..max_iters {
            self.kernel.mul_vec_into(&v, &mut pv);
            delta = 0.0;
            for s in 0..n {
                let next = self.reward[s] + gamma * pv[s];
                delta = f64::max(delta, (next - v[s]).abs());
                v[s] = next;
            }
            if !delta.is_finite() {
                break;
            }
            if delta <= threshold {
                return Ok(ValueFunction(v));
            }
        }
        Err(Error::NonConvergence {
            iters: max_iters,
            residual: delta,
        })
    }
}

/// `P_π(x'|x) = Σ_a π(a|x) P(x'|x,a)` and `r_π(x) = Σ_a π(a|x) R(x,a)`.
pub fn induce_chain(mdp: &FactoredMdp, pi: &Policy) -> Result<InducedChain> {
    pi.check_actions(mdp.num_states(), mdp.num_actions())?;
    let n = mdp.num_states();
    let rows = (0..n).map(|s| {
        pi.distribution(s)
            .iter()
            .flat_map(move |&(a, w)| mdp.transition(s, a).map(move |(x, p)| (x, w * p)))
            .collect::<Vec<_>>()
    });
    let kernel = CsrMatrix::from_rows(n, rows);
    let reward = (0..n)
        .map(|s| pi.distribution(s).iter().map(|&(a, w)| w * mdp.reward(s, a)).sum())
        .collect();
    Ok(InducedChain { kernel, reward })
}

/// `P_π^t` built by repeated multiplication.
pub fn t_step_kernel(chain: &InducedChain, t: usize) -> Result<CsrMatrix> {
    if t == 0 {
        return Err(Error::invalid("t must be at least 1"));
    }
    let mut out = chain.kernel.clone();
    for _ in 1..t {
        out = out.matmul(&chain.kernel);
    }
    Ok(out)
}

/// Expected discounted reward over the first `t` steps:
/// `g_1 = r_π`, `g_j = r_π + γ P_π g_{j−1}`.
pub fn truncated_discounted_return(chain: &InducedChain, gamma: f64, t: usize) -> Result<ValueFunction> {
    if t == 0 {
        return Err(Error::invalid("t must be at least 1"));
    }
    let mut g = chain.reward.clone();
    let mut pg = vec![0.0; g.len()];
    for _ in 1..t {
        chain.kernel.mul_vec_into(&g, &mut pg);
        for (gs, (r, p)) in g.iter_mut().zip(chain.reward.iter().zip(&pg)) {
            *gs = r + gamma * p;
        }
    }
    Ok(ValueFunction(g))
}
