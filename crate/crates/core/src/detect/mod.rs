//! Non-termination witnesses: loops with respect to `ins` and `mg`, and
//! recurrent pairs, together with generators of their infinite chains.

pub mod embedding;
pub mod loops;
pub mod recurrent;

use std::time::{Duration, Instant};

use crate::error::{Error, Result};

pub use embedding::{find_embedding, Embedding, EmbeddingContext, EmbeddingKind};
pub use loops::{find_loop, infinite_chain_prefix, LoopRelation, LoopWitness};
pub use recurrent::{
    find_recurrent_pair, match_recurrent_pattern, witness_chain, RecurrentPair, RecurrentPattern, TChoice,
};

/// Search limits shared by the detection procedures.
#[derive(Debug, Clone)]
pub struct Budget {
    pub deadline: Option<Instant>,
    pub max_nodes: usize,
    spent: usize,
}

impl Budget {
    pub fn new(timeout: Option<Duration>, max_nodes: usize) -> Budget {
        Budget { deadline: timeout.map(|t| Instant::now() + t), max_nodes, spent: 0 }
    }

    pub fn unlimited() -> Budget {
        Budget::new(None, usize::MAX)
    }

    pub fn spent(&self) -> usize {
        self.spent
    }

    /// Records `n` units of work; fails once a limit is reached.
    pub fn spend(&mut self, n: usize) -> Result<()> {
        self.spent = self.spent.saturating_add(n);
        if self.spent > self.max_nodes {
            return Err(Error::Resource(format!("search explored more than {} nodes", self.max_nodes)));
        }
        if self.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(Error::Resource("search timed out".into()));
        }
        Ok(())
    }
}

impl Default for Budget {
    fn default() -> Budget {
        Budget::new(Some(Duration::from_secs(10)), 1_000_000)
    }
}
