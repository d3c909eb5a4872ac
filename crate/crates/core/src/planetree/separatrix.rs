use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::{enumerate_plane_trees, PlaneTree};
use crate::arccore::Partition;

/// Unordered pair of plane trees: the saddle-connection graph of a
/// one-cylinder surface, one tree on each boundary of the cylinder.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SeparatrixDiagram {
    first: PlaneTree,
    second: PlaneTree,
}

impl SeparatrixDiagram {
    pub fn new(a: PlaneTree, b: PlaneTree) -> Self {
        if a <= b {
            SeparatrixDiagram { first: a, second: b }
        } else {
            SeparatrixDiagram { first: b, second: a }
        }
    }

    pub fn trees(&self) -> (&PlaneTree, &PlaneTree) {
        (&self.first, &self.second)
    }

    /// `|Aut T| |Aut T'|`, doubled when the two trees coincide.
    pub fn aut_order(&self) -> u64 {
        let swap = if self.first == self.second { 2 } else { 1 };
        self.first.aut_order() * self.second.aut_order() * swap
    }

    /// Zero datum `nu = iota + (nu - iota)`.
    pub fn zeros(&self) -> Partition {
        self.first.profile() + self.second.profile()
    }

    pub fn poles(&self) -> usize {
        self.first.leaves() + self.second.leaves()
    }
}

impl fmt::Display for SeparatrixDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.first, self.second)
    }
}

impl fmt::Debug for SeparatrixDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Separatrix{{{:?}, {:?}}}", self.first, self.second)
    }
}

/// Every separatrix diagram with zero datum `nu`, sorted.
pub fn separatrix_diagrams(nu: &Partition) -> Vec<SeparatrixDiagram> {
    let mut trees: BTreeMap<Partition, Vec<PlaneTree>> = BTreeMap::new();
    for iota in nu.subpartitions() {
        trees.entry(iota.clone()).or_insert_with(|| enumerate_plane_trees(&iota));
    }
    let mut out = BTreeSet::new();
    for iota in nu.subpartitions() {
        let rest = nu - &iota;
        if iota > rest {
            continue;
        }
        for a in &trees[&iota] {
            for b in &trees[&rest] {
                out.insert(SeparatrixDiagram::new(a.clone(), b.clone()));
            }
        }
    }
    out.into_iter().collect()
}
