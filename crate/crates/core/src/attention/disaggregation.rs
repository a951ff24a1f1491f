use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::mdp::{FactoredMdp, StateId, STOCHASTIC_TOL};

use super::{project, AttentionMode, ObservedSpace};

/// `D_k(·|y)`: for every observed tuple, a distribution over the full states
/// that project onto it.
#[derive(Debug, Clone)]
pub struct Disaggregation {
    mode_index: usize,
    attended: Vec<usize>,
    weights: HashMap<Vec<usize>, Vec<(StateId, f64)>>,
}

impl Disaggregation {
    /// Validate and normalize an arbitrary disaggregation. Every observed
    /// tuple of the mode must be covered, every weight must sit on the
    /// tuple's preimage, and each distribution must sum to one.
    pub fn new(
        mode: &AttentionMode,
        mdp: &FactoredMdp,
        weights: HashMap<Vec<usize>, Vec<(StateId, f64)>>,
    ) -> Result<Self> {
        let space = ObservedSpace::new(mode, mdp)?;
        let mut out = HashMap::with_capacity(weights.len());
        for y in space.tuples() {
            let dist = weights.get(y).ok_or_else(|| Error::EmptyPreimage(y.clone()))?;
            let mut sum = 0.0;
            let mut cleaned = Vec::with_capacity(dist.len());
            for &(s, w) in dist {
                if s >= mdp.num_states() || !(0.0..=1.0).contains(&w) {
                    return Err(Error::invalid(format!("invalid disaggregation weight {w} on state {s}")));
                }
                if w > 0.0 && project(mode, mdp.state(s)) != *y {
                    return Err(Error::invalid(format!(
                        "disaggregation of {y:?} puts mass on state {s} outside the preimage"
                    )));
                }
                if w > 0.0 {
                    cleaned.push((s, w));
                    sum += w;
                }
            }
            if (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::invalid(format!("disaggregation of {y:?} sums to {sum}")));
            }
            for e in cleaned.iter_mut() {
                e.1 /= sum;
            }
            out.insert(y.clone(), cleaned);
        }
        if weights.len() != out.len() {
            return Err(Error::invalid("disaggregation has entries for tuples outside the observed space"));
        }
        Ok(Disaggregation {
            mode_index: mode.index(),
            attended: mode.attended().to_vec(),
            weights: out,
        })
    }

    pub fn mode_index(&self) -> usize {
        self.mode_index
    }

    pub fn distribution(&self, y: &[usize]) -> Option<&[(StateId, f64)]> {
        self.weights.get(y).map(Vec::as_slice)
    }

    pub fn probability(&self, x: StateId, y: &[usize]) -> f64 {
        self.distribution(y)
            .and_then(|d| d.iter().find(|e| e.0 == x))
            .map_or(0.0, |e| e.1)
    }

    pub(crate) fn matches(&self, mode: &AttentionMode) -> bool {
        self.mode_index == mode.index() && self.attended == mode.attended()
    }
}

/// Uniform weight `1/|f_k^{-1}(y)|` on each preimage.
pub fn uniform_disaggregation(mode: &AttentionMode, mdp: &FactoredMdp) -> Result<Disaggregation> {
    let space = ObservedSpace::new(mode, mdp)?;
    let weights = (0..space.len())
        .map(|y| {
            let members = space.members(y);
            if members.is_empty() {
                return Err(Error::EmptyPreimage(space.tuple(y).to_vec()));
            }
            let w = 1.0 / members.len() as f64;
            Ok((space.tuple(y).to_vec(), members.iter().map(|&s| (s, w)).collect()))
        })
        .collect::<Result<HashMap<_, _>>>()?;
    Ok(Disaggregation {
        mode_index: mode.index(),
        attended: mode.attended().to_vec(),
        weights,
    })
}
