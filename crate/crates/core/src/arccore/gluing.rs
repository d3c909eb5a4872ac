//! Gluing two arc systems along a common circle: connectivity of the
//! resulting multicurve, faces of the 4-valent graph it forms with the
//! circle, and the stratum those faces determine.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::diagram::{ChordDiagram, DiagramError};
use super::partition::{parse_power_token, Partition, PartitionError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GluingError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("face profile violates the balance {what}: {detail}")]
    Inconsistent { what: &'static str, detail: String },
}

/// Top and bottom arc systems identified along the equator after rotating
/// the bottom one by `twist` positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GluedPair {
    top: ChordDiagram,
    bottom: ChordDiagram,
    twist: usize,
}

impl GluedPair {
    pub fn new(top: ChordDiagram, bottom: ChordDiagram, twist: usize) -> Result<Self, DiagramError> {
        if top.n() != bottom.n() {
            return Err(DiagramError::SizeMismatch { top: top.n(), bottom: bottom.n() });
        }
        if twist >= top.points() {
            return Err(DiagramError::TwistOutOfRange { twist, points: top.points() });
        }
        Ok(GluedPair { top, bottom, twist })
    }

    pub fn top(&self) -> &ChordDiagram {
        &self.top
    }

    pub fn bottom(&self) -> &ChordDiagram {
        &self.bottom
    }

    pub fn twist(&self) -> usize {
        self.twist
    }

    pub fn n(&self) -> usize {
        self.top.n()
    }

    /// Bottom pairing after the twist: `(bottom((i - t) mod 2n) + t) mod 2n`.
    pub fn twisted_bottom(&self, i: usize) -> usize {
        let m = self.top.points();
        (self.bottom.partner((i + m - self.twist) % m) + self.twist) % m
    }

    /// Number of closed curves formed by the glued arcs.
    pub fn component_count(&self) -> usize {
        let m = self.top.points();
        let mut seen = vec![false; m];
        let mut cycles = 0;
        for start in 0..m {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.top.partner(self.twisted_bottom(x));
            }
        }
        // Each curve splits into the cycles through its even and odd steps.
        assert!(cycles % 2 == 0, "composition of two involutions gave {cycles} cycles");
        cycles / 2
    }

    pub fn is_meander(&self) -> bool {
        let m = self.top.points();
        let mut x = 0;
        let mut steps = 0;
        loop {
            x = self.top.partner(self.twisted_bottom(x));
            steps += 1;
            if x == 0 {
                break;
            }
        }
        steps == m / 2
    }

    /// Faces of the plane graph formed by the equator and the glued arcs,
    /// found by walking the rotation system.
    ///
    /// Every crossing `i` carries four darts in counterclockwise order:
    /// east along the equator towards `i + 1`, north along its top arc,
    /// west towards `i - 1`, south along its bottom arc.
    pub fn face_profile(&self) -> FaceProfile {
        const EAST: usize = 0;
        const NORTH: usize = 1;
        const WEST: usize = 2;
        const SOUTH: usize = 3;
        let m = self.top.points();
        let opposite = |dart: usize| -> usize {
            let (v, side) = (dart / 4, dart % 4);
            match side {
                EAST => 4 * ((v + 1) % m) + WEST,
                WEST => 4 * ((v + m - 1) % m) + EAST,
                NORTH => 4 * self.top.partner(v) + NORTH,
                _ => 4 * self.twisted_bottom(v) + SOUTH,
            }
        };
        let next_around = |dart: usize| -> usize { dart - dart % 4 + (dart % 4 + 1) % 4 };
        let mut seen = vec![false; 4 * m];
        let mut counts = BTreeMap::new();
        for start in 0..4 * m {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                len += 1;
                d = next_around(opposite(d));
            }
            debug_assert!(len % 2 == 0, "faces alternate equator and arc sides");
            *counts.entry(len / 2).or_insert(0) += 1;
        }
        FaceProfile { counts }
    }
}

/// Connected components of the curve glued from `top` and the twisted
/// `bottom`.
pub fn component_count(top: &ChordDiagram, bottom: &ChordDiagram, twist: usize) -> Result<usize, DiagramError> {
    Ok(GluedPair::new(top.clone(), bottom.clone(), twist)?.component_count())
}

pub fn is_meander(top: &ChordDiagram, bottom: &ChordDiagram, twist: usize) -> Result<bool, DiagramError> {
    Ok(GluedPair::new(top.clone(), bottom.clone(), twist)?.is_meander())
}

pub fn face_profile(top: &ChordDiagram, bottom: &ChordDiagram, twist: usize) -> Result<FaceProfile, DiagramError> {
    Ok(GluedPair::new(top.clone(), bottom.clone(), twist)?.face_profile())
}

/// Whether `top[bottom[x]]` returns to `0` after exactly `n` steps, i.e. the
/// untwisted gluing is a single curve. Hot loop of the census.
#[inline]
pub fn untwisted_is_connected(top: &[u8], bottom: &[u8]) -> bool {
    let half = top.len() / 2;
    let mut x = 0usize;
    let mut steps = 0usize;
    loop {
        x = top[bottom[x] as usize] as usize;
        steps += 1;
        if x == 0 {
            return steps == half;
        }
    }
}

/// Face sizes of the glued graph: `counts[k]` faces have `2k` sides.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FaceProfile {
    counts: BTreeMap<usize, usize>,
}

impl FaceProfile {
    pub fn from_counts<I: IntoIterator<Item = (usize, usize)>>(counts: I) -> Self {
        let counts = counts.into_iter().filter(|&(_, c)| c > 0).collect();
        FaceProfile { counts }
    }

    /// Regions cut out of the disc by a single arc system, recorded the same
    /// way: a region bounded by `k` arcs has `2k` sides once the boundary
    /// circle becomes part of the graph.
    pub fn of_disc(d: &ChordDiagram) -> Self {
        let mut counts = BTreeMap::new();
        for k in region_sizes(d) {
            *counts.entry(k).or_insert(0) += 1;
        }
        FaceProfile { counts }
    }

    /// Number of faces with `2k` sides.
    pub fn count(&self, k: usize) -> usize {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<usize, usize> {
        &self.counts
    }

    pub fn bigons(&self) -> usize {
        self.count(1)
    }

    pub fn squares(&self) -> usize {
        self.count(2)
    }

    pub fn total_faces(&self) -> usize {
        self.counts.values().sum()
    }

    /// Sum of `k * counts[k]`, i.e. half the total number of sides.
    pub fn half_sides(&self) -> usize {
        self.counts.iter().map(|(k, c)| k * c).sum()
    }

    pub fn merged(&self, other: &FaceProfile) -> FaceProfile {
        let mut counts = self.counts.clone();
        for (&k, &c) in &other.counts {
            *counts.entry(k).or_insert(0) += c;
        }
        FaceProfile { counts }
    }

    /// Zero orders `nu_d = counts[d + 2]`, with no marked points.
    pub fn zeros(&self) -> Partition {
        Partition::from_multiplicities(
            self.counts.iter().filter(|(&k, _)| k >= 3).map(|(&k, &c)| ((k - 2) as u32, c as u32)),
        )
    }
}

/// Number of arcs bounding each complementary region of the disc. Regions
/// are the cycles of `i -> partner(i + 1)` on boundary segments, segment `i`
/// running from point `i` to point `i + 1`.
pub fn region_sizes(d: &ChordDiagram) -> Vec<usize> {
    let m = d.points();
    let mut seen = vec![false; m];
    let mut sizes = Vec::with_capacity(d.n() + 1);
    for start in 0..m {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut s = start;
        while !seen[s] {
            seen[s] = true;
            len += 1;
            s = d.partner((s + 1) % m);
        }
        sizes.push(len);
    }
    sizes
}

/// The stratum `Q(nu, -1^p)` of a genus-zero pillowcase cover.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Stratum {
    pub zeros: Partition,
    pub poles: usize,
}

impl Stratum {
    /// Principal-style label such as `Q(1^2,-1^6)`.
    pub fn label(&self) -> String {
        let zeros = self.zeros.to_compact();
        if zeros.is_empty() {
            format!("Q(-1^{})", self.poles)
        } else {
            format!("Q({zeros},-1^{})", self.poles)
        }
    }
}

impl FromStr for Stratum {
    type Err = PartitionError;

    /// Accepts comma-separated `o^m` tokens such as `1^2,-1^6`, with `0^k`
    /// for marked points. If no `-1` token is given the pole count is
    /// inferred; otherwise it must equal `|nu| + 4`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.trim().trim_start_matches("Q(").trim_end_matches(')').trim();
        let mut zeros = Partition::empty();
        let mut poles = None;
        for token in body.split(',').filter(|t| !t.trim().is_empty()) {
            match parse_power_token(token)? {
                (-1, k) => *poles.get_or_insert(0) += k as u64,
                (o, _) if o < -1 => return Err(PartitionError::Order(o)),
                (o, k) => zeros.add_part(o as u32, k),
            }
        }
        let weight = zeros.weight();
        let poles = poles.unwrap_or(weight + 4);
        if poles != weight + 4 {
            return Err(PartitionError::Unbalanced { poles, weight });
        }
        Ok(Stratum { zeros, poles: poles as usize })
    }
}

/// Reads the stratum off a face profile of a connected gluing on the sphere,
/// checking the Euler, side and pole balances.
pub fn stratum_of(profile: &FaceProfile) -> Result<Stratum, GluingError> {
    let faces = profile.total_faces();
    let half_sides = profile.half_sides();
    if half_sides % 2 != 0 || faces != half_sides / 2 + 2 {
        return Err(GluingError::Inconsistent {
            what: "faces = 2n + 2",
            detail: format!("{faces} faces with {} sides", 2 * half_sides),
        });
    }
    let zeros = profile.zeros();
    let poles = profile.bigons();
    if poles as u64 != zeros.weight() + 4 {
        return Err(GluingError::Inconsistent {
            what: "poles = |nu| + 4",
            detail: format!("{poles} poles for zeros {zeros}"),
        });
    }
    Ok(Stratum { zeros, poles })
}

/// A plane meander candidate: two arc systems on the upper and lower half
/// planes sharing the points `0..2n` of the horizontal line.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlaneMeanderCandidate {
    pub top: ChordDiagram,
    pub bottom: ChordDiagram,
}

/// Minimal arcs (joining neighbouring crossings) and whether an arc joins
/// the leftmost and rightmost crossings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinimalArcs {
    pub pimples: usize,
    pub rainbow: bool,
}

impl PlaneMeanderCandidate {
    pub fn new(top: ChordDiagram, bottom: ChordDiagram) -> Result<Self, DiagramError> {
        if top.n() != bottom.n() {
            return Err(DiagramError::SizeMismatch { top: top.n(), bottom: bottom.n() });
        }
        Ok(PlaneMeanderCandidate { top, bottom })
    }

    pub fn n(&self) -> usize {
        self.top.n()
    }

    pub fn glued(&self) -> GluedPair {
        GluedPair { top: self.top.clone(), bottom: self.bottom.clone(), twist: 0 }
    }

    pub fn is_meander(&self) -> bool {
        self.glued().is_meander()
    }

    /// The circle crossing the line twice. It is counted in the per-size
    /// tables but carries no meaningful minimal/maximal arc data.
    pub fn is_trivial_circle(&self) -> bool {
        self.n() == 1
    }

    pub fn minimal_arcs(&self) -> MinimalArcs {
        MinimalArcs {
            pimples: self.top.minimal_arc_count() + self.bottom.minimal_arc_count(),
            rainbow: self.top.has_outer_arc() || self.bottom.has_outer_arc(),
        }
    }
}

/// See [`PlaneMeanderCandidate::minimal_arcs`].
pub fn minimal_arcs(candidate: &PlaneMeanderCandidate) -> MinimalArcs {
    candidate.minimal_arcs()
}

#[cfg(test)]
mod tests {
    use super::super::diagram::enumerate_chord_diagrams;
    use super::*;

    #[test]
    fn stratum_parsing() {
        let s: Stratum = "1^2,-1^6".parse().unwrap();
        assert_eq!(s, Stratum { zeros: Partition::power(1, 2), poles: 6 });
        assert_eq!(s.label(), "Q(1^2,-1^6)");
        assert_eq!("-1^4".parse::<Stratum>().unwrap().zeros, Partition::empty());
        assert_eq!("0^2,1".parse::<Stratum>().unwrap().poles, 5);
        assert!(matches!("1^2,-1^5".parse::<Stratum>(), Err(PartitionError::Unbalanced { .. })));
        assert!(matches!("-2,-1^4".parse::<Stratum>(), Err(PartitionError::Order(-2))));
        assert!("1^a".parse::<Stratum>().is_err());
    }

    fn cd(pairs: &[(usize, usize)]) -> ChordDiagram {
        ChordDiagram::from_pairs(pairs).unwrap()
    }

    /// Follows the curve arc by arc and labels every point with its
    /// component.
    fn traced_components(pair: &GluedPair) -> usize {
        let m = pair.top().points();
        let mut comp = vec![usize::MAX; m];
        let mut count = 0;
        for start in 0..m {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut x = start;
            let mut on_top = true;
            loop {
                comp[x] = count;
                x = if on_top { pair.top().partner(x) } else { pair.twisted_bottom(x) };
                comp[x] = count;
                on_top = !on_top;
                x = if on_top { pair.top().partner(x) } else { pair.twisted_bottom(x) };
                on_top = !on_top;
                if x == start {
                    break;
                }
            }
            count += 1;
        }
        count
    }

    #[test]
    fn component_examples() {
        let single = cd(&[(0, 1)]);
        assert_eq!(component_count(&single, &single, 0).unwrap(), 1);
        let side = cd(&[(0, 1), (2, 3)]);
        let nested = cd(&[(0, 3), (1, 2)]);
        assert_eq!(component_count(&side, &nested, 0).unwrap(), 1);
        assert_eq!(component_count(&side, &side, 0).unwrap(), 2);
        assert!(is_meander(&side, &nested, 0).unwrap());
        assert!(!is_meander(&side, &side, 0).unwrap());
        assert!(matches!(component_count(&single, &side, 0), Err(DiagramError::SizeMismatch { .. })));
    }

    #[test]
    fn composition_cycles_agree_with_tracing() {
        for n in 1..=4 {
            let diagrams: Vec<_> = enumerate_chord_diagrams(n).collect();
            for top in &diagrams {
                for bottom in &diagrams {
                    for t in 0..2 * n {
                        let pair = GluedPair::new(top.clone(), bottom.clone(), t).unwrap();
                        let c = pair.component_count();
                        assert!(c >= 1);
                        assert_eq!(c, traced_components(&pair));
                        assert_eq!(pair.is_meander(), c == 1);
                    }
                }
            }
        }
    }

    #[test]
    fn fast_connectivity_matches() {
        for n in 1..=5 {
            let diagrams: Vec<_> = enumerate_chord_diagrams(n).collect();
            for top in &diagrams {
                for bottom in &diagrams {
                    let t: Vec<u8> = top.pairing().iter().map(|&x| x as u8).collect();
                    let b: Vec<u8> = bottom.pairing().iter().map(|&x| x as u8).collect();
                    assert_eq!(untwisted_is_connected(&t, &b), is_meander(top, bottom, 0).unwrap());
                }
            }
        }
    }

    #[test]
    fn four_crossing_meander_faces() {
        let top = cd(&[(0, 1), (2, 3)]);
        let bottom = cd(&[(0, 3), (1, 2)]);
        let profile = face_profile(&top, &bottom, 0).unwrap();
        assert_eq!(profile, FaceProfile::from_counts([(1, 4), (2, 2)]));
        let stratum = stratum_of(&profile).unwrap();
        assert_eq!(stratum, Stratum { zeros: Partition::empty(), poles: 4 });
        assert_eq!(stratum.label(), "Q(-1^4)");
        let arcs = PlaneMeanderCandidate::new(top, bottom).unwrap().minimal_arcs();
        assert_eq!(arcs, MinimalArcs { pimples: 3, rainbow: true });
    }

    #[test]
    fn trivial_circle_has_four_bigons() {
        let single = cd(&[(0, 1)]);
        let profile = face_profile(&single, &single, 0).unwrap();
        assert_eq!(profile, FaceProfile::from_counts([(1, 4)]));
        let candidate = PlaneMeanderCandidate::new(single.clone(), single).unwrap();
        assert!(candidate.is_trivial_circle());
    }

    #[test]
    fn stratum_examples() {
        let s = stratum_of(&FaceProfile::from_counts([(1, 5), (2, 3), (3, 1)])).unwrap();
        assert_eq!(s, Stratum { zeros: Partition::from_parts([1]), poles: 5 });
        let s = stratum_of(&FaceProfile::from_counts([(1, 6), (2, 4), (4, 1)])).unwrap();
        assert_eq!(s, Stratum { zeros: Partition::from_parts([2]), poles: 6 });
        assert!(matches!(
            stratum_of(&FaceProfile::from_counts([(1, 3), (2, 2)])),
            Err(GluingError::Inconsistent { .. })
        ));
        assert!(matches!(
            stratum_of(&FaceProfile::from_counts([(1, 4), (3, 1), (2, 1)])),
            Err(GluingError::Inconsistent { .. })
        ));
    }

    #[test]
    fn traversal_matches_region_sizes() {
        for n in 1..=4 {
            let diagrams: Vec<_> = enumerate_chord_diagrams(n).collect();
            for top in &diagrams {
                for bottom in &diagrams {
                    for t in 0..2 * n {
                        let traversed = face_profile(top, bottom, t).unwrap();
                        let regions = FaceProfile::of_disc(top).merged(&FaceProfile::of_disc(bottom));
                        assert_eq!(traversed, regions);
                        assert_eq!(traversed.total_faces(), 2 * n + 2);
                        assert_eq!(traversed.half_sides(), 4 * n);
                    }
                }
            }
        }
    }

    #[test]
    fn twist_equivariance() {
        for n in 1..=4 {
            let diagrams: Vec<_> = enumerate_chord_diagrams(n).collect();
            for top in &diagrams {
                for bottom in &diagrams {
                    for t in 0..2 * n {
                        assert_eq!(
                            component_count(top, bottom, t).unwrap(),
                            component_count(&top.rotate(1), &bottom.rotate(1), t).unwrap()
                        );
                    }
                }
            }
        }
    }
}
