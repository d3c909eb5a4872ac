//! Noncrossing chord diagrams (arc systems on a disc).
//!
//! Boundary points are numbered `0..2n` along the boundary circle. For a
//! plane meander they are the crossings read left to right; for a hemisphere
//! they are read counterclockwise along the equator seen from the north
//! pole. The cut between `2n - 1` and `0` plays the role of the point at
//! infinity.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Reasons a list of index pairs fails to describe an arc system.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("an arc system needs at least one arc")]
    Empty,
    #[error("point {point} is out of range for {points} boundary points")]
    OutOfRange { point: usize, points: usize },
    #[error("point {0} is joined to itself")]
    FixedPoint(usize),
    #[error("point {0} is an endpoint of more than one arc")]
    DoubleCovered(usize),
    #[error("point {0} is not an endpoint of any arc")]
    Uncovered(usize),
    #[error("arcs ({0}, {1}) and ({2}, {3}) cross")]
    Crossing(usize, usize, usize, usize),
    #[error("top has {top} arcs but bottom has {bottom}")]
    SizeMismatch { top: usize, bottom: usize },
    #[error("twist {twist} is out of range for {points} boundary points")]
    TwistOutOfRange { twist: usize, points: usize },
    #[error("malformed arc list: {0}")]
    Parse(String),
}

/// A noncrossing fixed-point-free involution on `0..2n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChordDiagram {
    pairing: Vec<u16>,
}

impl ChordDiagram {
    /// Validates a list of arcs given as endpoint pairs.
    pub fn from_pairs(pairs: &[(usize, usize)]) -> Result<Self, DiagramError> {
        if pairs.is_empty() {
            return Err(DiagramError::Empty);
        }
        let points = 2 * pairs.len();
        if points > u16::MAX as usize {
            return Err(DiagramError::OutOfRange { point: points - 1, points: u16::MAX as usize });
        }
        let mut pairing = vec![u16::MAX; points];
        for &(a, b) in pairs {
            for p in [a, b] {
                if p >= points {
                    return Err(DiagramError::OutOfRange { point: p, points });
                }
            }
            if a == b {
                return Err(DiagramError::FixedPoint(a));
            }
            for p in [a, b] {
                if pairing[p] != u16::MAX {
                    return Err(DiagramError::DoubleCovered(p));
                }
            }
            pairing[a] = b as u16;
            pairing[b] = a as u16;
        }
        if let Some(p) = pairing.iter().position(|&q| q == u16::MAX) {
            return Err(DiagramError::Uncovered(p));
        }
        check_noncrossing(&pairing)?;
        Ok(ChordDiagram { pairing })
    }

    /// Builds a diagram from a full pairing table, validating it.
    pub fn from_pairing(pairing: &[usize]) -> Result<Self, DiagramError> {
        let mut pairs = Vec::with_capacity(pairing.len() / 2);
        if pairing.len() % 2 == 1 {
            return Err(DiagramError::Uncovered(pairing.len() - 1));
        }
        for (i, &j) in pairing.iter().enumerate() {
            if j >= pairing.len() {
                return Err(DiagramError::OutOfRange { point: j, points: pairing.len() });
            }
            if j == i {
                return Err(DiagramError::FixedPoint(i));
            }
            if pairing[j] != i {
                return Err(DiagramError::DoubleCovered(j));
            }
            if i < j {
                pairs.push((i, j));
            }
        }
        Self::from_pairs(&pairs)
    }

    /// Parses a balanced-parentheses word: `(` opens an arc, `)` closes the
    /// most recent open one.
    pub fn from_dyck_word(word: &str) -> Result<Self, DiagramError> {
        let mut stack = Vec::new();
        let mut pairs = Vec::new();
        for (i, c) in word.chars().enumerate() {
            match c {
                '(' => stack.push(i),
                ')' => {
                    let j = stack
                        .pop()
                        .ok_or_else(|| DiagramError::Parse(format!("unmatched ')' at {i}")))?;
                    pairs.push((j, i));
                }
                other => return Err(DiagramError::Parse(format!("unexpected {other:?}"))),
            }
        }
        if !stack.is_empty() {
            return Err(DiagramError::Parse("unclosed '('".into()));
        }
        Self::from_pairs(&pairs)
    }

    pub(crate) fn from_pairing_unchecked(pairing: Vec<u16>) -> Self {
        debug_assert!(check_noncrossing(&pairing).is_ok());
        ChordDiagram { pairing }
    }

    /// Number of arcs.
    pub fn n(&self) -> usize {
        self.pairing.len() / 2
    }

    /// Number of boundary points, `2n`.
    pub fn points(&self) -> usize {
        self.pairing.len()
    }

    /// Partner of boundary point `i`.
    #[inline]
    pub fn partner(&self, i: usize) -> usize {
        self.pairing[i] as usize
    }

    pub fn pairing(&self) -> &[u16] {
        &self.pairing
    }

    /// Arcs as `(a, b)` with `a < b`, ordered by `a`.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.points())
            .filter_map(|i| {
                let j = self.partner(i);
                (i < j).then_some((i, j))
            })
            .collect()
    }

    /// Balanced-parentheses word of the diagram.
    pub fn dyck_word(&self) -> String {
        (0..self.points())
            .map(|i| if self.partner(i) > i { '(' } else { ')' })
            .collect()
    }

    /// Relabels every point `i` as `i + k mod 2n`.
    pub fn rotate(&self, k: usize) -> ChordDiagram {
        let m = self.points();
        let mut pairing = vec![0u16; m];
        for i in 0..m {
            pairing[(i + k) % m] = ((self.partner(i) + k) % m) as u16;
        }
        ChordDiagram { pairing }
    }

    /// Relabels every point `i` as `2n - 1 - i`.
    pub fn reflect(&self) -> ChordDiagram {
        let m = self.points();
        let mut pairing = vec![0u16; m];
        for i in 0..m {
            pairing[m - 1 - i] = (m - 1 - self.partner(i)) as u16;
        }
        ChordDiagram { pairing }
    }

    /// Number of arcs joining two neighbouring points `(i, i + 1)`.
    pub fn minimal_arc_count(&self) -> usize {
        (0..self.points() - 1).filter(|&i| self.partner(i) == i + 1).count()
    }

    /// Whether the first and last points are joined.
    pub fn has_outer_arc(&self) -> bool {
        self.partner(0) == self.points() - 1
    }
}

impl fmt::Debug for ChordDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChordDiagram({:?})", self.arcs())
    }
}

impl fmt::Display for ChordDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arcs: Vec<String> = self.arcs().iter().map(|(a, b)| format!("({a},{b})")).collect();
        write!(f, "[{}]", arcs.join(","))
    }
}

fn check_noncrossing(pairing: &[u16]) -> Result<(), DiagramError> {
    let mut open: Vec<usize> = Vec::new();
    for i in 0..pairing.len() {
        let j = pairing[i] as usize;
        if j > i {
            open.push(i);
        } else {
            let top = open.pop().expect("involution closes only opened arcs");
            if top != j {
                let (a, b) = (top, pairing[top] as usize);
                let (c, d) = (j, i);
                let (first, second) = if a < c { ((a, b), (c, d)) } else { ((c, d), (a, b)) };
                return Err(DiagramError::Crossing(first.0, first.1, second.0, second.1));
            }
        }
    }
    Ok(())
}

/// Number of arc systems with `n` arcs.
pub fn catalan(n: usize) -> u64 {
    let mut c: u64 = 1;
    for k in 0..n as u64 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c
}

/// Balanced-parentheses words of length `2n` in lexicographic order with
/// `(` before `)`. The first word is fully nested, the last is `()()...()`.
#[derive(Debug, Clone)]
pub struct DyckWords {
    word: Vec<bool>,
    done: bool,
}

impl DyckWords {
    pub fn new(n: usize) -> Self {
        let mut word = vec![true; n];
        word.extend(std::iter::repeat(false).take(n));
        DyckWords { word, done: n == 0 }
    }

    fn advance(&mut self) -> bool {
        let len = self.word.len();
        let n = len / 2;
        let mut depth_before: Vec<usize> = Vec::with_capacity(len);
        let mut opens_before: Vec<usize> = Vec::with_capacity(len);
        let (mut d, mut o) = (0usize, 0usize);
        for &open in &self.word {
            depth_before.push(d);
            opens_before.push(o);
            if open {
                d += 1;
                o += 1;
            } else {
                d -= 1;
            }
        }
        for i in (0..len).rev() {
            if self.word[i] && depth_before[i] >= 1 {
                self.word[i] = false;
                let remaining_opens = n - opens_before[i];
                for (k, slot) in self.word[i + 1..].iter_mut().enumerate() {
                    *slot = k < remaining_opens;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for DyckWords {
    type Item = Vec<bool>;

    fn next(&mut self) -> Option<Vec<bool>> {
        if self.done {
            return None;
        }
        let current = self.word.clone();
        if !self.advance() {
            self.done = true;
        }
        Some(current)
    }
}

pub(crate) fn pairing_of_word(word: &[bool]) -> Vec<u16> {
    let mut pairing = vec![0u16; word.len()];
    let mut stack = Vec::with_capacity(word.len() / 2);
    for (i, &open) in word.iter().enumerate() {
        if open {
            stack.push(i);
        } else {
            let j = stack.pop().expect("balanced word");
            pairing[i] = j as u16;
            pairing[j] = i as u16;
        }
    }
    pairing
}

/// Streams every arc system with `n` arcs exactly once, in lexicographic
/// order of the balanced-parentheses word (see [`DyckWords`]).
pub fn enumerate_chord_diagrams(n: usize) -> impl Iterator<Item = ChordDiagram> {
    DyckWords::new(n).map(|w| ChordDiagram::from_pairing_unchecked(pairing_of_word(&w)))
}
