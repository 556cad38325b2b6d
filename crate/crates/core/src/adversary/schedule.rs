use super::FailureModel;
use crate::error::Result;
use crate::graph::EdgeId;

/// Down links of F per step, as masks over F.
///
/// A schedule is a lasso: the prefix is played once, then the cycle
/// repeats forever. A plain sequence is a lasso whose cycle is its last
/// entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Schedule {
    /// Every link of F down at every step.
    AllDown,
    Lasso { prefix: Vec<u64>, cycle: Vec<u64> },
}

impl Schedule {
    pub fn constant(mask: u64) -> Self {
        Schedule::Lasso { prefix: Vec::new(), cycle: vec![mask] }
    }

    /// Steps in order; the last one repeats. An empty list means all up.
    pub fn sequence(mut steps: Vec<u64>) -> Self {
        let last = steps.pop().unwrap_or(0);
        Schedule::Lasso { prefix: steps, cycle: vec![last] }
    }

    pub fn periodic(prefix: Vec<u64>, cycle: Vec<u64>) -> Self {
        if cycle.is_empty() {
            return Self::sequence(prefix);
        }
        Schedule::Lasso { prefix, cycle }
    }

    /// Builds a lasso from per-step lists of down edges.
    pub fn from_edges(model: &FailureModel, prefix: &[Vec<EdgeId>], cycle: &[Vec<EdgeId>]) -> Result<Self> {
        let masks = |steps: &[Vec<EdgeId>]| -> Result<Vec<u64>> {
            steps.iter().map(|s| model.mask_of(s)).collect()
        };
        Ok(Self::periodic(masks(prefix)?, masks(cycle)?))
    }

    /// Down mask at `step`, given the mask of all of F.
    pub fn at(&self, step: usize, all: u64) -> u64 {
        match self {
            Schedule::AllDown => all,
            Schedule::Lasso { prefix, cycle } => {
                if step < prefix.len() {
                    prefix[step]
                } else {
                    cycle[(step - prefix.len()) % cycle.len()]
                }
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Schedule::AllDown => true,
            Schedule::Lasso { prefix, cycle } => {
                let first = prefix.first().or(cycle.first());
                prefix.iter().chain(cycle).all(|m| Some(m) == first)
            }
        }
    }

    /// Prefix and cycle with `AllDown` expanded.
    pub fn parts(&self, all: u64) -> (Vec<u64>, Vec<u64>) {
        match self {
            Schedule::AllDown => (Vec::new(), vec![all]),
            Schedule::Lasso { prefix, cycle } => (prefix.clone(), cycle.clone()),
        }
    }
}
