//! Independent oracles shared by the integration tests. Nothing in here
//! calls the solver code it is used to check.
#![allow(dead_code)]

use attnplan::mdp::{FactoredMdp, Variable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Dense Gaussian elimination with partial pivoting.
pub fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        let d = a[col][col];
        assert!(d.abs() > 1e-14, "singular system");
        for row in col + 1..n {
            let f = a[row][col] / d;
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// Exact value of a deterministic policy given as one action per state.
pub fn exact_policy_value(mdp: &FactoredMdp, actions: &[usize]) -> Vec<f64> {
    let n = mdp.num_states();
    let g = mdp.discount();
    let mut a = vec![vec![0.0; n]; n];
    let mut b = vec![0.0; n];
    for s in 0..n {
        a[s][s] += 1.0;
        for (x, p) in mdp.transition(s, actions[s]) {
            a[s][x] -= g * p;
        }
        b[s] = mdp.reward(s, actions[s]);
    }
    solve_linear(a, b)
}

/// Elementwise maximum over all deterministic policies, evaluated exactly.
pub fn enumerate_optimal(mdp: &FactoredMdp) -> Vec<f64> {
    let n = mdp.num_states();
    let na = mdp.num_actions();
    let total = na.pow(n as u32);
    let mut best = vec![f64::NEG_INFINITY; n];
    let mut actions = vec![0; n];
    for code in 0..total {
        let mut c = code;
        for a in actions.iter_mut() {
            *a = c % na;
            c /= na;
        }
        let v = exact_policy_value(mdp, &actions);
        for (b, x) in best.iter_mut().zip(v) {
            *b = b.max(x);
        }
    }
    best
}

/// Random MDP with a single variable; every row has 1..=3 successors.
pub fn random_mdp(seed: u64, n: usize, na: usize, gamma: f64) -> FactoredMdp {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut reward = Vec::new();
    for _ in 0..n * na {
        let k = rng.random_range(1..=3.min(n));
        let mut w: Vec<(usize, f64)> = (0..k).map(|_| (rng.random_range(0..n), rng.random::<f64>() + 0.05)).collect();
        let sum: f64 = w.iter().map(|x| x.1).sum();
        for e in w.iter_mut() {
            e.1 /= sum;
        }
        rows.push(w);
        reward.push(rng.random_range(-10.0..10.0));
    }
    FactoredMdp::from_explicit(
        vec![Variable::indexed("s", n)],
        (0..n).map(|s| vec![s]).collect(),
        (0..na).map(|a| format!("a{a}")).collect(),
        rows,
        reward,
        0,
        gamma,
    )
    .unwrap()
}

/// Deterministic corridor of three cells plus an absorbing terminal state.
/// Acting in the right-end cell pays 100 and ends the episode.
/// Actions: 0 = left, 1 = right. State 3 is the terminal.
pub fn corridor(gamma: f64) -> FactoredMdp {
    let mut rows = Vec::new();
    let mut reward = Vec::new();
    for s in 0..4usize {
        for a in 0..2 {
            let (next, r) = match s {
                2 => (3, 100.0),
                3 => (3, 0.0),
                _ if a == 0 => (s.saturating_sub(1), 0.0),
                _ => (s + 1, 0.0),
            };
            rows.push(vec![(next, 1.0)]);
            reward.push(r);
        }
    }
    FactoredMdp::from_explicit(
        vec![Variable::new("cell", vec!["0".into(), "1".into(), "2".into(), "end".into()])],
        (0..4).map(|s| vec![s]).collect(),
        vec!["left".into(), "right".into()],
        rows,
        reward,
        0,
        gamma,
    )
    .unwrap()
}

/// Sample an index from a discrete distribution.
pub fn sample(rng: &mut ChaCha8Rng, dist: &[(usize, f64)]) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for &(i, p) in dist {
        acc += p;
        if u < acc {
            return i;
        }
    }
    dist.last().unwrap().0
}
