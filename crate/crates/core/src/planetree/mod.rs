//! Plane trees: canonical forms, automorphisms, enumeration by valence
//! profile, and the reduced dual trees of arc systems.
//!
//! Encoding grammar: a tree is written as the balanced-parentheses contour
//! word read around it from one corner, `(` when an edge is first crossed
//! and `)` on the way back. The canonical encoding is the least such word
//! over all `2E` corners, so `"()"` is the single edge, `"(()())"` the
//! 3-star and `"(()()())"` the 4-star.

mod ribbon;
mod separatrix;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::arccore::{pairing_of_word, ChordDiagram, DyckWords, Partition};
use crate::mvconst::factorial;
pub(crate) use ribbon::RibbonTree;
pub use ribbon::TreeError;
pub use separatrix::{separatrix_diagrams, SeparatrixDiagram};

/// A plane tree up to orientation-preserving isomorphism.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlaneTree {
    code: String,
    profile: Partition,
    aut_order: u64,
}

impl PlaneTree {
    /// Parses any contour word of the tree and canonicalizes it.
    pub fn from_code(word: &str) -> Result<PlaneTree, TreeError> {
        Ok(Self::from_ribbon(&RibbonTree::from_parens(word)?))
    }

    pub(crate) fn from_ribbon(t: &RibbonTree) -> PlaneTree {
        let (code, aut, _) = t.canonical();
        let profile = Partition::from_multiplicities(t.valence_profile());
        PlaneTree { code, profile, aut_order: aut as u64 }
    }

    /// The single-edge tree.
    pub fn edge() -> PlaneTree {
        Self::from_code("()").unwrap()
    }

    /// Star with `k` leaves (`k >= 3`), or the single edge for `k = 2`.
    pub fn star(k: usize) -> PlaneTree {
        assert!(k >= 2, "a star needs at least two leaves");
        if k == 2 {
            return Self::edge();
        }
        Self::from_code(&"()".repeat(k)).unwrap()
    }

    pub fn code(&self) -> &str {
        &self.code
    }

    /// `iota_d` = number of vertices of valence `d + 2`.
    pub fn profile(&self) -> &Partition {
        &self.profile
    }

    pub fn aut_order(&self) -> u64 {
        self.aut_order
    }

    pub fn edges(&self) -> usize {
        self.code.len() / 2
    }

    pub fn leaves(&self) -> usize {
        self.profile.weight() as usize + 2
    }

    /// Corners of the boundary, `2E`.
    pub fn corners(&self) -> usize {
        self.code.len()
    }

    /// The tree seen from the other side of the plane.
    pub fn mirror(&self) -> PlaneTree {
        Self::from_ribbon(&self.ribbon().mirrored())
    }

    pub(crate) fn ribbon(&self) -> RibbonTree {
        RibbonTree::from_parens(&self.code).expect("canonical code parses")
    }
}

impl fmt::Display for PlaneTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code)
    }
}

impl fmt::Debug for PlaneTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlaneTree({} {} aut={})", self.code, self.profile, self.aut_order)
    }
}

impl Serialize for PlaneTree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.code)
    }
}

/// All plane trees with internal profile `iota`, sorted by code.
///
/// Every tree has a leaf, so each one appears among the words `( w )` with
/// the root at a leaf; this scans `Catalan(E - 1)` words for `E` edges.
pub fn enumerate_plane_trees(iota: &Partition) -> Vec<PlaneTree> {
    let edges = (iota.weight() + iota.length() + 1) as usize;
    let mut want = vec![0usize; edges + 2];
    want[1] = iota.weight() as usize + 2;
    for (d, k) in iota.multiplicities() {
        want[d as usize + 2] += k as usize;
    }
    let mut out = std::collections::BTreeSet::new();
    let mut word = Vec::with_capacity(2 * edges);
    let inners: Box<dyn Iterator<Item = Vec<bool>>> =
        if edges == 1 { Box::new(std::iter::once(Vec::new())) } else { Box::new(DyckWords::new(edges - 1)) };
    for inner in inners {
        word.clear();
        word.push(true);
        word.extend_from_slice(&inner);
        word.push(false);
        let t = RibbonTree::from_bool_word(&word);
        let mut degs = vec![0usize; edges + 2];
        for v in 0..t.vertex_count() {
            degs[t.degree(v)] += 1;
        }
        if degs == want {
            out.insert(PlaneTree::from_ribbon(&t));
        }
    }
    out.into_iter().collect()
}

/// All plane trees with exactly `edges` edges and no restriction on profile.
pub fn enumerate_trees_with_edges(edges: usize) -> Vec<PlaneTree> {
    assert!(edges >= 1);
    let mut out = std::collections::BTreeSet::new();
    for w in DyckWords::new(edges) {
        out.insert(PlaneTree::from_ribbon(&RibbonTree::from_bool_word(&w)));
    }
    out.into_iter().collect()
}

/// `sum 1/|Aut T|` over the trees of profile `iota`, by enumeration.
pub fn weighted_tree_count(iota: &Partition) -> BigRational {
    enumerate_plane_trees(iota)
        .iter()
        .map(|t| BigRational::new(BigInt::one(), BigInt::from(t.aut_order())))
        .fold(BigRational::zero(), |a, b| a + b)
}

/// Closed form `(|iota| + l(iota))! / ((|iota| + 2)! prod iota_d!)`.
pub fn weighted_tree_count_formula(iota: &Partition) -> BigRational {
    let mut den = factorial(iota.weight() + 2);
    for (_, k) in iota.multiplicities() {
        den *= factorial(k as u64);
    }
    BigRational::new(factorial(iota.weight() + iota.length()), den)
}

fn disc_tree(d: &ChordDiagram) -> RibbonTree {
    let word: Vec<bool> = (0..d.points()).map(|i| i < d.partner(i)).collect();
    RibbonTree::from_bool_word(&word)
}

/// Dual tree of the arc system (faces as vertices, arcs as edges) with every
/// valence-2 vertex forgotten.
pub fn reduced_dual_tree(d: &ChordDiagram) -> PlaneTree {
    let (reduced, _, _) = disc_tree(d).suppress_valence_two();
    PlaneTree::from_ribbon(&reduced)
}

/// The unreduced dual tree.
pub fn dual_tree(d: &ChordDiagram) -> PlaneTree {
    PlaneTree::from_ribbon(&disc_tree(d))
}

/// Contour word of the reduced dual tree read from the corner at the cut
/// between points `2n-1` and `0`. `None` when the face at the cut has
/// valence two, since that corner then disappears in the reduction.
pub fn cut_rooted_code(d: &ChordDiagram) -> Option<String> {
    let t = disc_tree(d);
    if t.degree(0) == 2 {
        return None;
    }
    let (reduced, index, _) = t.suppress_valence_two();
    Some(reduced.code_from((index[0].expect("root kept"), 0)))
}

/// Arc systems with `n` arcs whose reduced dual tree, read from the cut, is
/// the canonical word of `tree`: each edge of `tree` is replaced by a band
/// of parallel arcs, with multiplicities running over the compositions of
/// `n` into `#edges` parts. Empty when `n < #edges` or when `tree` has
/// valence-2 vertices.
pub fn arc_systems_of_type(tree: &PlaneTree, n: usize) -> ArcSystems {
    let valid = tree.profile().multiplicity(0) == 0;
    let parts = Compositions::new(n, if valid { tree.edges() } else { n + 1 });
    ArcSystems { code: code_bits(tree), parts }
}

pub(crate) fn code_bits(tree: &PlaneTree) -> Vec<bool> {
    tree.code().bytes().map(|b| b == b'(').collect()
}

/// Iterator returned by [`arc_systems_of_type`].
pub struct ArcSystems {
    code: Vec<bool>,
    parts: Compositions,
}

impl Iterator for ArcSystems {
    type Item = ChordDiagram;

    fn next(&mut self) -> Option<ChordDiagram> {
        let parts = self.parts.next()?;
        Some(ChordDiagram::from_pairing_unchecked(pairing_of_word(&expand_word(&self.code, &parts))))
    }
}

/// Replaces the `k`-th edge (by its opening parenthesis) of a contour word
/// with `parts[k]` parallel copies.
pub(crate) fn expand_word(code: &[bool], parts: &[usize]) -> Vec<bool> {
    let mut word = Vec::with_capacity(2 * parts.iter().sum::<usize>());
    let mut stack = Vec::new();
    let mut next_edge = 0;
    for &open in code {
        let m = if open {
            let m = parts[next_edge];
            next_edge += 1;
            stack.push(m);
            m
        } else {
            stack.pop().expect("balanced code")
        };
        word.extend(std::iter::repeat(open).take(m));
    }
    word
}

/// Compositions of `n` into `k` positive parts in lexicographic order.
pub(crate) struct Compositions {
    parts: Vec<usize>,
    done: bool,
}

impl Compositions {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        let done = k == 0 || n < k;
        let mut parts = vec![1usize; k];
        if !done {
            parts[k - 1] = n - k + 1;
        }
        Compositions { parts, done }
    }
}

impl Iterator for Compositions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let current = self.parts.clone();
        // Grow the rightmost part whose tail still holds a spare unit, then
        // reset the tail.
        let e = self.parts.len();
        let mut tail = 0;
        self.done = true;
        for i in (0..e - 1).rev() {
            tail += self.parts[i + 1];
            if tail > e - 1 - i {
                self.parts[i] += 1;
                for p in &mut self.parts[i + 1..e - 1] {
                    *p = 1;
                }
                self.parts[e - 1] = tail - 1 - (e - 2 - i);
                self.done = false;
                break;
            }
        }
        Some(current)
    }
}

/// For each corner at which `tree` reads its canonical word, the edges in
/// the order their opening parentheses appear, as positions in the order
/// read from the first such corner. These are the automorphisms of `tree`
/// acting on edges.
pub(crate) fn automorphism_edge_orders(tree: &PlaneTree) -> Vec<Vec<usize>> {
    let t = tree.ribbon();
    let darts: Vec<_> = t.darts().filter(|&d| t.code_from(d) == tree.code()).collect();
    let orders: Vec<Vec<(usize, usize)>> = darts.iter().map(|&d| t.edge_order_from(d)).collect();
    let base = &orders[0];
    orders
        .iter()
        .map(|o| o.iter().map(|e| base.iter().position(|x| x == e).expect("same edge set")).collect())
        .collect()
}
