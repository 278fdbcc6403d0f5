use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordered list of distinct terminals. The order is the processing
/// order π used by the engines.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TerminalSet(Vec<usize>);

impl TerminalSet {
    pub fn new(terminals: Vec<usize>, n: usize) -> Result<Self> {
        if terminals.is_empty() {
            return Err(Error::NoTerminals);
        }
        let set = TerminalSet(terminals);
        set.check_bounds(n)?;
        let mut seen = vec![false; n];
        for t in set.iter() {
            if std::mem::replace(&mut seen[t], true) {
                return Err(Error::DuplicateTerminal(t));
            }
        }
        Ok(set)
    }

    pub(crate) fn check_bounds(&self, n: usize) -> Result<()> {
        match self.0.iter().find(|&&t| t >= n) {
            Some(&t) => Err(Error::VertexOutOfRange { vertex: t, n }),
            None => Ok(()),
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn get(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }

    /// Same terminals, new order. `order` must be a permutation of `self`.
    pub(crate) fn reordered(order: Vec<usize>) -> Self {
        TerminalSet(order)
    }

    /// `index[v] = Some(i)` iff `v` is the i-th terminal.
    pub fn index_map(&self, n: usize) -> Vec<Option<usize>> {
        let mut index = vec![None; n];
        for (i, t) in self.iter().enumerate() {
            index[t] = Some(i);
        }
        index
    }

    /// True if both sets hold the same terminals, ignoring order.
    pub fn same_elements(&self, other: &TerminalSet) -> bool {
        let mut a = self.0.clone();
        let mut b = other.0.clone();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }
}

impl From<TerminalSet> for Vec<usize> {
    fn from(t: TerminalSet) -> Self {
        t.0
    }
}
