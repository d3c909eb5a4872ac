//! Pairs of arc systems written as linear involutions: two rows of
//! intervals, twins on the same row, with half-integer lengths.
//!
//! Crossings sit at distance `1/2` along the line. Each maximal band of
//! parallel arcs becomes one label whose two intervals are the feet of the
//! band; its length is half the band width. The region containing the cut
//! at infinity is never treated as a band interior, so the two outermost
//! arcs of a side stay distinct labels even when they are parallel on the
//! sphere.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::arccore::{ChordDiagram, DiagramError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinvolError {
    #[error("label {label} occurs {count} times; each label needs exactly two intervals")]
    LabelCount { label: String, count: usize },
    #[error("label {0} has twins on different rows")]
    MixedRows(String),
    #[error("label {label} has length {length}, which is not a positive multiple of 1/2")]
    BadLength { label: String, length: String },
    #[error("rows have total lengths {top} and {bottom}")]
    Unbalanced { top: String, bottom: String },
    #[error("expected {expected} lengths, got {got}")]
    LengthCount { expected: usize, got: usize },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Two-row word with label ids `0..L` and lengths in units of `1/2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearInvolution {
    top: Vec<usize>,
    bottom: Vec<usize>,
    half_lengths: Vec<u32>,
}

/// Display name of label `i`: `A..Z`, then `AA, AB, ...`.
pub fn label_name(mut i: usize) -> String {
    let mut out = Vec::new();
    loop {
        out.push(b'A' + (i % 26) as u8);
        if i < 26 {
            break;
        }
        i = i / 26 - 1;
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}

/// Bands of one arc system: for each point, the outermost arc of its band
/// (by opener) and the band width.
fn bands(d: &ChordDiagram) -> (Vec<usize>, Vec<usize>) {
    let m = d.points();
    let mut outer = vec![0; m];
    let mut width = vec![0; m];
    for a in 0..m {
        let b = d.partner(a);
        if b < a {
            continue;
        }
        let mut o = a;
        while o >= 1 && d.partner(o - 1) == d.partner(o) + 1 {
            o -= 1;
        }
        outer[a] = o;
        outer[b] = o;
        width[o] += 1;
    }
    (outer, width)
}

/// Row word (band openers, in order) and the interval widths.
fn row(d: &ChordDiagram) -> Vec<(usize, usize)> {
    let (outer, width) = bands(d);
    let mut word = Vec::new();
    let mut x = 0;
    while x < d.points() {
        let o = outer[x];
        word.push((o, width[o]));
        x += width[o];
    }
    word
}

impl LinearInvolution {
    /// Validates label multiplicities, rows, lengths, balance and that twins
    /// are nested or disjoint. Label ids must be `0..half_lengths.len()`.
    pub fn new(top: Vec<usize>, bottom: Vec<usize>, half_lengths: Vec<u32>) -> Result<Self, LinvolError> {
        let labels = half_lengths.len();
        let mut seen = vec![(0usize, 0usize); labels];
        for &l in &top {
            if l >= labels {
                return Err(LinvolError::LengthCount { expected: l + 1, got: labels });
            }
            seen[l].0 += 1;
        }
        for &l in &bottom {
            if l >= labels {
                return Err(LinvolError::LengthCount { expected: l + 1, got: labels });
            }
            seen[l].1 += 1;
        }
        for (l, &(t, b)) in seen.iter().enumerate() {
            if t > 0 && b > 0 {
                return Err(LinvolError::MixedRows(label_name(l)));
            }
            if t + b != 2 {
                return Err(LinvolError::LabelCount { label: label_name(l), count: t + b });
            }
            if half_lengths[l] == 0 {
                return Err(LinvolError::BadLength { label: label_name(l), length: "0".into() });
            }
        }
        let sum = |w: &[usize]| w.iter().map(|&l| half_lengths[l] as u64).sum::<u64>();
        let (st, sb) = (sum(&top), sum(&bottom));
        if st != sb {
            return Err(LinvolError::Unbalanced { top: half(st), bottom: half(sb) });
        }
        let li = LinearInvolution { top, bottom, half_lengths };
        li.expand(&li.top)?;
        li.expand(&li.bottom)?;
        Ok(li)
    }

    /// As [`LinearInvolution::new`] with rational lengths, each of which must
    /// be a positive multiple of `1/2`.
    pub fn with_lengths(top: Vec<usize>, bottom: Vec<usize>, lengths: &[BigRational]) -> Result<Self, LinvolError> {
        let mut half_lengths = Vec::with_capacity(lengths.len());
        for (l, q) in lengths.iter().enumerate() {
            let doubled = q * BigRational::from_integer(BigInt::from(2));
            let ok = doubled.is_integer() && doubled > BigRational::zero();
            match doubled.to_integer().to_u32() {
                Some(h) if ok => half_lengths.push(h),
                _ => return Err(LinvolError::BadLength { label: label_name(l), length: q.to_string() }),
            }
        }
        Self::new(top, bottom, half_lengths)
    }

    /// Encodes a pair of arc systems with the same number of arcs.
    pub fn from_pair(top: &ChordDiagram, bottom: &ChordDiagram) -> Result<Self, LinvolError> {
        if top.n() != bottom.n() {
            return Err(DiagramError::SizeMismatch { top: top.n(), bottom: bottom.n() }.into());
        }
        let mut half_lengths = Vec::new();
        let mut encode = |d: &ChordDiagram| {
            let mut ids = std::collections::HashMap::new();
            row(d)
                .into_iter()
                .map(|(o, w)| {
                    *ids.entry(o).or_insert_with(|| {
                        half_lengths.push(w as u32);
                        half_lengths.len() - 1
                    })
                })
                .collect::<Vec<_>>()
        };
        let t = encode(top);
        let b = encode(bottom);
        Self::new(t, b, half_lengths)
    }

    /// Expands every label into its band of arcs.
    pub fn to_pair(&self) -> (ChordDiagram, ChordDiagram) {
        let valid = "validated on construction";
        (self.expand(&self.top).expect(valid), self.expand(&self.bottom).expect(valid))
    }

    fn expand(&self, word: &[usize]) -> Result<ChordDiagram, LinvolError> {
        let mut first: Vec<Option<usize>> = vec![None; self.half_lengths.len()];
        let mut pairs = Vec::new();
        let mut x = 0;
        for &l in word {
            let w = self.half_lengths[l] as usize;
            match first[l] {
                None => first[l] = Some(x),
                Some(start) => {
                    // Twins are nested: the first foot's left end meets the
                    // second foot's right end.
                    for k in 0..w {
                        pairs.push((start + k, x + w - 1 - k));
                    }
                }
            }
            x += w;
        }
        Ok(ChordDiagram::from_pairs(&pairs)?)
    }

    pub fn top(&self) -> &[usize] {
        &self.top
    }

    pub fn bottom(&self) -> &[usize] {
        &self.bottom
    }

    pub fn label_count(&self) -> usize {
        self.half_lengths.len()
    }

    /// Labels occurring on the top row.
    pub fn top_label_count(&self) -> usize {
        self.top.len() / 2
    }

    pub fn bottom_label_count(&self) -> usize {
        self.bottom.len() / 2
    }

    /// Length of label `l` in units of `1/2`.
    pub fn half_length(&self, l: usize) -> u32 {
        self.half_lengths[l]
    }

    pub fn length(&self, l: usize) -> BigRational {
        BigRational::new(self.half_lengths[l].into(), 2.into())
    }

    /// `|A|=1 |B|=1/2 ...` in label order.
    pub fn lengths_line(&self) -> String {
        (0..self.label_count())
            .map(|l| format!("|{}|={}", label_name(l), half(self.half_lengths[l] as u64)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn half(h: u64) -> String {
    if h % 2 == 0 {
        (h / 2).to_string()
    } else {
        format!("{h}/2")
    }
}

impl fmt::Display for LinearInvolution {
    /// Two rows of labels followed by the lengths.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |w: &[usize]| w.iter().map(|&l| label_name(l)).collect::<Vec<_>>().join(" ");
        writeln!(f, "{}", names(&self.top))?;
        writeln!(f, "{}", names(&self.bottom))?;
        write!(f, "{}", self.lengths_line())
    }
}
