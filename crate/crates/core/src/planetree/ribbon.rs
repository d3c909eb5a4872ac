//! Trees with a cyclic order of neighbours at every vertex.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("tree encoding must be a nonempty balanced-parentheses word, got {0:?}")]
    Malformed(String),
}

/// A plane tree stored as neighbour lists in rotation order.
///
/// Trees are simple graphs, so a dart is identified by `(vertex, slot)` where
/// `adj[vertex][slot]` is the far end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct RibbonTree {
    pub adj: Vec<Vec<usize>>,
}

/// A dart `(vertex, slot)`.
pub(crate) type Dart = (usize, usize);

impl RibbonTree {
    /// Parses a balanced-parentheses word. The root vertex is the one the
    /// word starts at; its first dart leads into the first top-level group.
    pub fn from_parens(word: &str) -> Result<RibbonTree, TreeError> {
        let malformed = || TreeError::Malformed(word.to_string());
        if word.is_empty() {
            return Err(malformed());
        }
        let mut adj: Vec<Vec<usize>> = vec![Vec::new()];
        let mut stack = vec![0usize];
        for c in word.chars() {
            match c {
                '(' => {
                    let parent = *stack.last().unwrap();
                    let child = adj.len();
                    adj.push(vec![parent]);
                    adj[parent].push(child);
                    stack.push(child);
                }
                ')' => {
                    if stack.len() < 2 {
                        return Err(malformed());
                    }
                    stack.pop();
                }
                _ => return Err(malformed()),
            }
        }
        if stack.len() != 1 {
            return Err(malformed());
        }
        Ok(RibbonTree { adj })
    }

    pub fn from_bool_word(word: &[bool]) -> RibbonTree {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new()];
        let mut stack = vec![0usize];
        for &open in word {
            if open {
                let parent = *stack.last().unwrap();
                let child = adj.len();
                adj.push(vec![parent]);
                adj[parent].push(child);
                stack.push(child);
            } else {
                stack.pop();
            }
        }
        RibbonTree { adj }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.len() - 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn darts(&self) -> impl Iterator<Item = Dart> + '_ {
        (0..self.adj.len()).flat_map(move |v| (0..self.adj[v].len()).map(move |s| (v, s)))
    }

    fn slot_of(&self, v: usize, w: usize) -> usize {
        self.adj[v].iter().position(|&x| x == w).expect("adjacent vertices")
    }

    /// Contour word read from the corner just before dart `(v, slot)`: each
    /// edge contributes `(` when walked away from the start and `)` on return.
    pub fn code_from(&self, (v, slot): Dart) -> String {
        let mut out = String::with_capacity(2 * self.edge_count());
        let deg = self.adj[v].len();
        for k in 0..deg {
            let w = self.adj[v][(slot + k) % deg];
            out.push('(');
            self.subtree_code(w, v, &mut out);
            out.push(')');
        }
        out
    }

    fn subtree_code(&self, v: usize, parent: usize, out: &mut String) {
        let deg = self.adj[v].len();
        let back = self.slot_of(v, parent);
        for k in 1..deg {
            let w = self.adj[v][(back + k) % deg];
            out.push('(');
            self.subtree_code(w, v, out);
            out.push(')');
        }
    }

    /// Edges as sorted vertex pairs, in the order [`Self::code_from`] opens them.
    pub fn edge_order_from(&self, (v, slot): Dart) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        let deg = self.adj[v].len();
        for k in 0..deg {
            let w = self.adj[v][(slot + k) % deg];
            self.subtree_edges(w, v, &mut out);
        }
        out
    }

    fn subtree_edges(&self, v: usize, parent: usize, out: &mut Vec<(usize, usize)>) {
        out.push((v.min(parent), v.max(parent)));
        let deg = self.adj[v].len();
        let back = self.slot_of(v, parent);
        for k in 1..deg {
            let w = self.adj[v][(back + k) % deg];
            self.subtree_edges(w, v, out);
        }
    }

    /// Lexicographically least contour word over all starting corners,
    /// with the number of corners attaining it and one such dart.
    pub fn canonical(&self) -> (String, usize, Dart) {
        let mut best: Option<(String, usize, Dart)> = None;
        for d in self.darts() {
            let code = self.code_from(d);
            match &mut best {
                None => best = Some((code, 1, d)),
                Some((b, count, _)) if *b == code => *count += 1,
                Some((b, count, dart)) if code < *b => {
                    *b = code;
                    *count = 1;
                    *dart = d;
                }
                _ => {}
            }
        }
        best.expect("a tree has at least one edge")
    }

    /// Mirror image: every rotation reversed.
    pub fn mirrored(&self) -> RibbonTree {
        RibbonTree { adj: self.adj.iter().map(|a| a.iter().rev().copied().collect()).collect() }
    }

    /// Suppresses every vertex of valence two, merging the two edges through
    /// it. Returns the reduced tree, the old-to-new vertex map for surviving
    /// vertices and, for every reduced dart, the length of the chain it
    /// replaced.
    pub fn suppress_valence_two(&self) -> (RibbonTree, Vec<Option<usize>>, Vec<Vec<usize>>) {
        let mut index = vec![None; self.adj.len()];
        let mut kept = Vec::new();
        for v in 0..self.adj.len() {
            if self.degree(v) != 2 {
                index[v] = Some(kept.len());
                kept.push(v);
            }
        }
        let mut adj = Vec::with_capacity(kept.len());
        let mut lengths = Vec::with_capacity(kept.len());
        for &v in &kept {
            let mut row = Vec::with_capacity(self.degree(v));
            let mut lens = Vec::with_capacity(self.degree(v));
            for &w in &self.adj[v] {
                let (mut prev, mut cur, mut len) = (v, w, 1);
                while self.degree(cur) == 2 {
                    let next = if self.adj[cur][0] == prev { self.adj[cur][1] } else { self.adj[cur][0] };
                    prev = cur;
                    cur = next;
                    len += 1;
                }
                row.push(index[cur].expect("chains end at kept vertices"));
                lens.push(len);
            }
            adj.push(row);
            lengths.push(lens);
        }
        (RibbonTree { adj }, index, lengths)
    }

    /// `profile[d]` = number of vertices of valence `d + 2`; leaves are not
    /// recorded.
    pub fn valence_profile(&self) -> Vec<(u32, u32)> {
        let mut counts = std::collections::BTreeMap::new();
        for a in &self.adj {
            if a.len() >= 2 {
                *counts.entry((a.len() - 2) as u32).or_insert(0u32) += 1;
            }
        }
        counts.into_iter().collect()
    }
}
