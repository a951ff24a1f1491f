use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dbn::{Dbn, Parent};
use crate::error::{Error, Result};
use crate::mdp::{ActionId, FactoredMdp, StateId};

/// Independent named random streams derived from one seed.
///
/// Stream `i` is the ChaCha stream `i + 1` of the seeded generator, so each
/// stochastic element of the world draws from its own sequence.
#[derive(Debug, Clone)]
pub struct Substreams {
    names: Vec<String>,
    rngs: Vec<ChaCha8Rng>,
}

impl Substreams {
    pub fn new(seed: u64, names: Vec<String>) -> Self {
        let rngs = (0..names.len())
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64 + 1);
                rng
            })
            .collect();
        Substreams { names, rngs }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Next uniform draw in `[0, 1)` from stream `i`.
    pub fn uniform(&mut self, i: usize) -> f64 {
        self.rngs[i].random()
    }
}

/// Inverse-CDF draw from a dense distribution.
pub(crate) fn pick(dist: impl IntoIterator<Item = (usize, f64)>, u: f64) -> usize {
    let mut acc = 0.0;
    let mut last = 0;
    for (i, p) in dist {
        if p == 0.0 {
            continue;
        }
        acc += p;
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}

/// Draws successor states of an MDP.
pub trait StepSampler {
    /// Names of the random streams this sampler consumes, in stream order.
    fn stream_names(&self) -> Vec<String>;

    fn step(&self, x: StateId, a: ActionId, streams: &mut Substreams) -> StateId;
}

/// Samples the joint transition row with a single stream.
pub struct JointSampler<'a> {
    mdp: &'a FactoredMdp,
}

impl<'a> JointSampler<'a> {
    pub fn new(mdp: &'a FactoredMdp) -> Self {
        JointSampler { mdp }
    }
}

impl StepSampler for JointSampler<'_> {
    fn stream_names(&self) -> Vec<String> {
        vec!["joint".into()]
    }

    fn step(&self, x: StateId, a: ActionId, streams: &mut Substreams) -> StateId {
        let u = streams.uniform(0);
        pick(self.mdp.transition(x, a), u)
    }
}

/// Samples each variable from its DBN table with its own stream. Every step
/// draws exactly once from every stream, so runs that differ only in some
/// variables keep the remaining streams aligned.
pub struct DbnSampler<'a> {
    mdp: &'a FactoredMdp,
    dbn: &'a Dbn,
}

impl<'a> DbnSampler<'a> {
    pub fn new(mdp: &'a FactoredMdp, dbn: &'a Dbn) -> Result<Self> {
        let domains: Vec<usize> = mdp.variables().iter().map(|v| v.size()).collect();
        if domains != dbn.domains() || dbn.num_actions() != mdp.num_actions() {
            return Err(Error::invalid("DBN does not match the MDP"));
        }
        Ok(DbnSampler { mdp, dbn })
    }
}

impl StepSampler for DbnSampler<'_> {
    fn stream_names(&self) -> Vec<String> {
        self.mdp.variables().iter().map(|v| v.name.clone()).collect()
    }

    fn step(&self, x: StateId, a: ActionId, streams: &mut Substreams) -> StateId {
        let prev = self.mdp.state(x);
        let mut next = vec![0usize; prev.len()];
        for &var in self.dbn.order() {
            let u = streams.uniform(var);
            let row = self.dbn.conditional(a, var, |p| match p {
                Parent::Previous(j) => prev[j],
                Parent::Current(j) => next[j],
            });
            next[var] = pick(row.iter().copied().enumerate(), u);
        }
        self.mdp
            .state_id(&next)
            .expect("DBN successor outside the enumerated state space")
    }
}
