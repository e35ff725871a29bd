//! Partition of a corpus into imaginary-isogeny classes.
//!
//! Classes are merged only on certified `Yes` decisions, so the reported
//! partition always refines the true one; `Unknown` pairs are listed.

use petgraph::unionfind::UnionFind;

use crate::isogeny::{decide_imaginary_isogeny, Decision};
use crate::lattice::{check_compatible, LatticeError, RealLattice};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairDecision {
    pub left: usize,
    pub right: usize,
    pub decision: Decision,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    /// Each class lists corpus indices in increasing order; classes are
    /// ordered by their smallest member.
    pub classes: Vec<Vec<usize>>,
    /// One record per unordered pair `left < right`, in lexicographic order.
    pub decisions: Vec<PairDecision>,
}

impl Classification {
    pub fn unknown_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.decisions
            .iter()
            .filter(|d| matches!(d.decision, Decision::Unknown { .. }))
            .map(|d| (d.left, d.right))
    }

    pub fn class_of(&self, index: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(&index))
    }
}

pub fn classify_corpus(corpus: &[RealLattice], budget: u64) -> Result<Classification, LatticeError> {
    if let Some(first) = corpus.first() {
        for l in &corpus[1..] {
            check_compatible(first, l)?;
        }
    }
    let n = corpus.len();
    let mut sets = UnionFind::<usize>::new(n);
    let mut decisions = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let decision = decide_imaginary_isogeny(&corpus[i], &corpus[j], budget)?;
            if decision.is_yes() {
                sets.union(i, j);
            }
            decisions.push(PairDecision { left: i, right: j, decision });
        }
    }
    let labels = sets.into_labeling();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut seen: Vec<(usize, usize)> = Vec::new();
    for (i, root) in labels.iter().enumerate() {
        match seen.iter().find(|(r, _)| r == root) {
            Some(&(_, c)) => classes[c].push(i),
            None => {
                seen.push((*root, classes.len()));
                classes.push(vec![i]);
            }
        }
    }
    Ok(Classification { classes, decisions })
}
