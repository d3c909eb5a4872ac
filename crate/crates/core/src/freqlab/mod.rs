//! Proportion of connected gluings among all triples
//! `(top arc system, bottom arc system, twist)` with prescribed reduced
//! dual trees, as the number of arcs grows.
//!
//! Counting uses two exact symmetries. Rooted systems related by an
//! automorphism of their tree are rotations of one another, so only one
//! composition per automorphism orbit is glued, weighted by the orbit size.
//! A system fixed by the rotation by `s` points makes connectivity periodic
//! in the twist with period `s`, so only `gcd` of the two periods many
//! twists are tried.
//!
//! The cost for a tree pair with `e` and `e'` edges grows like
//! `N^(e + e' + 1)`; see the README for measured timings.

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use num_integer::Integer;
use thiserror::Error;

use crate::arccore::{ChordDiagram, Partition};
use crate::mvconst::{p1, p1_diagram, PiExpression};
use crate::planetree::{
    automorphism_edge_orders, code_bits, enumerate_plane_trees, expand_word, reduced_dual_tree, Compositions,
    PlaneTree, SeparatrixDiagram,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreqError {
    #[error("tree {0} has valence-2 vertices and is not a reduced dual tree")]
    NotReduced(String),
    #[error("diagram {dstar} has zeros {got} but the trees give {want}")]
    TypeMismatch { dstar: String, got: String, want: String },
    #[error("total number of leaves must be at least 4, got {0}")]
    TooFewLeaves(usize),
    #[error("{0} arcs do not fit the 16-bit point tables")]
    TooLarge(usize),
}

/// Worker threads and an optional wall-clock limit. When the limit passes,
/// the series stops at the last row that finished in order.
#[derive(Debug, Clone)]
pub struct FreqConfig {
    pub jobs: usize,
    pub deadline: Option<Instant>,
}

impl Default for FreqConfig {
    fn default() -> Self {
        FreqConfig { jobs: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1), deadline: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyRow {
    pub n: usize,
    /// All triples of size `n`.
    pub total: u64,
    /// Triples counted in the numerator.
    pub connected: u64,
    /// Connected triples of any equator-dual diagram; equals `connected`
    /// except in diagram-constrained series.
    pub meanders: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencySeries {
    pub label: String,
    pub predicted: PiExpression,
    pub rows: Vec<FrequencyRow>,
    pub requested_n_max: usize,
    /// Whether the deadline cut the series short of `requested_n_max`.
    pub truncated: bool,
}

impl FrequencySeries {
    /// Last `n` reached.
    pub fn n_reached(&self) -> Option<usize> {
        self.rows.last().map(|r| r.n)
    }

    /// Cumulative `(n, sum connected, sum total)`.
    pub fn cumulative(&self) -> Vec<(usize, u128, u128)> {
        let (mut c, mut t) = (0u128, 0u128);
        self.rows
            .iter()
            .map(|r| {
                c += r.connected as u128;
                t += r.total as u128;
                (r.n, c, t)
            })
            .collect()
    }

    /// Cumulative fraction over all rows up to `n_max`.
    pub fn fraction_at(&self, n_max: usize) -> Option<f64> {
        self.cumulative().into_iter().filter(|&(n, _, t)| n <= n_max && t > 0).last().map(|(_, c, t)| c as f64 / t as f64)
    }

    pub fn final_fraction(&self) -> Option<f64> {
        self.fraction_at(usize::MAX)
    }

    /// `|fraction / predicted - 1|` at the last row.
    pub fn relative_error(&self) -> Option<f64> {
        let p = self.predicted.to_f64();
        self.final_fraction().map(|f| (f / p - 1.0).abs())
    }

    /// CSV with header `n,total,connected,cum_fraction,predicted,predicted_exact`.
    pub fn write_csv<W: Write>(&self, out: W, digits: usize) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["n", "total", "connected", "cum_fraction", "predicted", "predicted_exact"])?;
        let predicted = format_significant(self.predicted.to_f64(), digits);
        let exact = self.predicted.to_string();
        for (row, (_, c, t)) in self.rows.iter().zip(self.cumulative()) {
            let frac = if t == 0 { String::new() } else { format_significant(c as f64 / t as f64, digits) };
            w.write_record([
                row.n.to_string(),
                row.total.to_string(),
                row.connected.to_string(),
                frac,
                predicted.clone(),
                exact.clone(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Fixed-point decimal with `digits` significant digits.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

/// One rooted arc system per automorphism orbit.
struct Representative {
    pairing: Vec<u16>,
    weight: u64,
    /// Least `s` with the system invariant under rotation by `s` points.
    period: usize,
}

fn rotation_period(p: &[u16]) -> usize {
    let m = p.len();
    (1..=m)
        .filter(|s| m % s == 0)
        .find(|&s| (0..m).all(|i| (p[(i + m - s) % m] as usize + s) % m == p[i] as usize))
        .expect("rotation by m is the identity")
}

fn representatives(tree: &PlaneTree, n: usize) -> Vec<Representative> {
    let code = code_bits(tree);
    let perms = automorphism_edge_orders(tree);
    let mut out = Vec::new();
    for c in Compositions::new(n, tree.edges()) {
        let mut orbit: Vec<Vec<usize>> = perms.iter().map(|perm| perm.iter().map(|&j| c[j]).collect()).collect();
        orbit.sort();
        orbit.dedup();
        if orbit[0] != c {
            continue;
        }
        let word = expand_word(&code, &c);
        let pairing = crate::arccore::pairing_of_word(&word);
        let period = rotation_period(&pairing);
        out.push(Representative { pairing, weight: orbit.len() as u64, period });
    }
    out
}

/// Whether the gluing of `top` with the already twisted bottom `beta`
/// gives one curve.
#[inline]
fn connected(top: &[u16], beta: &[u16]) -> bool {
    let half = top.len() / 2;
    let mut x = 0usize;
    let mut steps = 0usize;
    loop {
        x = top[beta[x] as usize] as usize;
        steps += 1;
        if x == 0 {
            return steps == half;
        }
    }
}

/// Positions of the equator points along the curve, starting at point 0
/// and leaving it along the bottom arc; `None` for a multicurve.
fn curve_positions(top: &[u16], bottom: &[u16], t: usize) -> Option<Vec<u16>> {
    let m = top.len();
    let beta = |i: usize| (bottom[(i + m - t) % m] as usize + t) % m;
    let mut pos = vec![u16::MAX; m];
    let mut x = 0;
    let mut k = 0;
    loop {
        pos[x] = k;
        let y = beta(x);
        pos[y] = k + 1;
        k += 2;
        x = top[y] as usize;
        if x == 0 {
            break;
        }
    }
    (k as usize == m).then_some(pos)
}

fn dual_of_raw(top: &[u16], bottom: &[u16], t: usize) -> Option<SeparatrixDiagram> {
    let pos = curve_positions(top, bottom, t)?;
    let m = top.len();
    let mut a = vec![0u16; m];
    let mut b = vec![0u16; m];
    for i in 0..m {
        let (u, v) = (pos[i], pos[(i + 1) % m]);
        let side = if i % 2 == 0 { &mut a } else { &mut b };
        side[u as usize] = v;
        side[v as usize] = u;
    }
    let ta = reduced_dual_tree(&ChordDiagram::from_pairing_unchecked(a));
    let tb = reduced_dual_tree(&ChordDiagram::from_pairing_unchecked(b));
    Some(SeparatrixDiagram::new(ta, tb))
}

/// Separatrix diagram of the equator with respect to the meander: the
/// equator is cut by the curve into `2n` arcs, alternately on the two sides,
/// and each side gives an arc system on points numbered along the curve.
/// Both sides use the curve's order, just as top and bottom share the
/// equator's order. `None` unless the gluing is a single curve.
pub fn equator_dual(top: &ChordDiagram, bottom: &ChordDiagram, twist: usize) -> Option<SeparatrixDiagram> {
    assert_eq!(top.n(), bottom.n());
    dual_of_raw(top.pairing(), bottom.pairing(), twist % top.points())
}

/// The pairing of the equator arcs on each side of the curve, for tests
/// and inspection.
pub fn equator_arc_systems(top: &ChordDiagram, bottom: &ChordDiagram, twist: usize) -> Option<(ChordDiagram, ChordDiagram)> {
    let m = top.points();
    let pos = curve_positions(top.pairing(), bottom.pairing(), twist % m)?;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for i in 0..m {
        let pair = (pos[i] as usize, pos[(i + 1) % m] as usize);
        if i % 2 == 0 { a.push(pair) } else { b.push(pair) }
    }
    Some((ChordDiagram::from_pairs(&a).ok()?, ChordDiagram::from_pairs(&b).ok()?))
}

#[derive(Default)]
struct Tally {
    total: u64,
    meanders: u64,
    by_dual: BTreeMap<SeparatrixDiagram, u64>,
}

/// Every triple of size `n` for one ordered tree pair. Returns `None` if
/// the deadline passed mid-way.
fn tally_pair(
    top: &PlaneTree,
    bottom: &PlaneTree,
    n: usize,
    with_dual: bool,
    expired: &dyn Fn() -> bool,
) -> Option<Tally> {
    let mut tally = Tally::default();
    if n < top.edges() || n < bottom.edges() {
        return Some(tally);
    }
    let m = 2 * n;
    let tops = representatives(top, n);
    let bottoms = representatives(bottom, n);
    let top_weight: u64 = tops.iter().map(|r| r.weight).sum();
    let bottom_weight: u64 = bottoms.iter().map(|r| r.weight).sum();
    tally.total = top_weight * bottom_weight * m as u64;
    let mut beta = vec![0u16; m];
    for br in &bottoms {
        for t in 0..br.period {
            if expired() {
                return None;
            }
            for (i, b) in beta.iter_mut().enumerate() {
                *b = ((br.pairing[(i + m - t) % m] as usize + t) % m) as u16;
            }
            for tr in &tops {
                let g = tr.period.gcd(&br.period);
                if t >= g || !connected(&tr.pairing, &beta) {
                    continue;
                }
                let mult = tr.weight * br.weight * (m / g) as u64;
                tally.meanders += mult;
                if with_dual {
                    let d = dual_of_raw(&tr.pairing, &br.pairing, t).expect("connected");
                    *tally.by_dual.entry(d).or_insert(0) += mult;
                }
            }
        }
    }
    Some(tally)
}

/// Runs `row(n)` for `n` in `n_min..=n_max` on `cfg.jobs` threads, keeping
/// the rows that finished without a gap.
fn run_rows<F>(n_min: usize, n_max: usize, cfg: &FreqConfig, row: F) -> (Vec<FrequencyRow>, bool)
where
    F: Fn(usize, &dyn Fn() -> bool) -> Option<FrequencyRow> + Sync,
{
    if n_min > n_max {
        return (Vec::new(), false);
    }
    let next = AtomicUsize::new(n_min);
    let stop = AtomicBool::new(false);
    let done = Mutex::new(BTreeMap::new());
    let expired = || {
        if stop.load(Ordering::Relaxed) {
            return true;
        }
        if cfg.deadline.is_some_and(|d| Instant::now() >= d) {
            stop.store(true, Ordering::Relaxed);
            return true;
        }
        false
    };
    std::thread::scope(|scope| {
        for _ in 0..cfg.jobs.max(1) {
            scope.spawn(|| loop {
                let n = next.fetch_add(1, Ordering::Relaxed);
                if n > n_max || expired() {
                    break;
                }
                match row(n, &expired) {
                    Some(r) => {
                        done.lock().expect("row map").insert(n, r);
                    }
                    None => break,
                }
            });
        }
    });
    let done = done.into_inner().expect("row map");
    let rows: Vec<FrequencyRow> =
        (n_min..=n_max).map_while(|n| done.get(&n).cloned()).collect();
    let truncated = rows.last().map_or(true, |r| r.n < n_max);
    (rows, truncated)
}

fn check_reduced(t: &PlaneTree) -> Result<(), FreqError> {
    if t.profile().multiplicity(0) > 0 {
        return Err(FreqError::NotReduced(t.code().to_string()));
    }
    Ok(())
}

fn check_size(n_max: usize) -> Result<(), FreqError> {
    if 2 * n_max > u16::MAX as usize {
        return Err(FreqError::TooLarge(n_max));
    }
    Ok(())
}

/// Proportion of connected triples for a fixed pair of reduced trees. The
/// predicted limit is `P1` of the stratum with zeros `nu(T) + nu(T')`.
pub fn p_connected_series(
    top: &PlaneTree,
    bottom: &PlaneTree,
    n_max: usize,
    cfg: &FreqConfig,
) -> Result<FrequencySeries, FreqError> {
    check_reduced(top)?;
    check_reduced(bottom)?;
    check_size(n_max)?;
    let nu = top.profile() + bottom.profile();
    let n_min = top.edges().max(bottom.edges());
    let (rows, truncated) = run_rows(n_min, n_max, cfg, |n, expired| {
        let t = tally_pair(top, bottom, n, false, expired)?;
        Some(FrequencyRow { n, total: t.total, connected: t.meanders, meanders: t.meanders })
    });
    Ok(FrequencySeries {
        label: format!("P_connected({top}, {bottom})"),
        predicted: p1(&nu),
        rows,
        requested_n_max: n_max,
        truncated,
    })
}

/// Partitions of `k` into positive parts.
fn partitions(k: u32) -> Vec<Partition> {
    fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition::from_parts(cur.iter().copied()));
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, k, &mut Vec::new(), &mut out);
    out
}

/// Reduced plane trees with `leaves` leaves.
pub fn reduced_trees_with_leaves(leaves: usize) -> Vec<PlaneTree> {
    assert!(leaves >= 2);
    partitions(leaves as u32 - 2).iter().flat_map(enumerate_plane_trees).collect()
}

/// Ordered pairs of reduced trees with `p` leaves in total.
pub fn tree_pairs_with_leaves(p: usize) -> Vec<(PlaneTree, PlaneTree)> {
    let mut out = Vec::new();
    for k in 2..=p.saturating_sub(2) {
        let left = reduced_trees_with_leaves(k);
        let right = reduced_trees_with_leaves(p - k);
        for a in &left {
            for b in &right {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// Numerators and denominators summed over every ordered pair of reduced
/// trees with `p` leaves in total; the predicted limit is `P1([1^(p-4)])`.
pub fn p_connected_total(p: usize, n_max: usize, cfg: &FreqConfig) -> Result<FrequencySeries, FreqError> {
    if p < 4 {
        return Err(FreqError::TooFewLeaves(p));
    }
    check_size(n_max)?;
    let pairs = tree_pairs_with_leaves(p);
    let n_min = pairs.iter().map(|(a, b)| a.edges().max(b.edges())).min().expect("p >= 4 has pairs");
    let (rows, truncated) = run_rows(n_min, n_max, cfg, |n, expired| {
        let mut row = FrequencyRow { n, total: 0, connected: 0, meanders: 0 };
        for (a, b) in &pairs {
            let t = tally_pair(a, b, n, false, expired)?;
            row.total += t.total;
            row.connected += t.meanders;
        }
        row.meanders = row.connected;
        Some(row)
    });
    Ok(FrequencySeries {
        label: format!("P_connected(p = {p})"),
        predicted: p1(&Partition::power(1, p as u32 - 4)),
        rows,
        requested_n_max: n_max,
        truncated,
    })
}

/// As [`p_connected_series`], counting only meanders whose equator-dual
/// diagram is `dstar`; the predicted limit is `P1(dstar)`.
pub fn p_diagram_series(
    top: &PlaneTree,
    bottom: &PlaneTree,
    dstar: &SeparatrixDiagram,
    n_max: usize,
    cfg: &FreqConfig,
) -> Result<FrequencySeries, FreqError> {
    check_reduced(top)?;
    check_reduced(bottom)?;
    check_size(n_max)?;
    let nu = top.profile() + bottom.profile();
    if dstar.zeros() != nu {
        return Err(FreqError::TypeMismatch {
            dstar: dstar.to_string(),
            got: dstar.zeros().to_string(),
            want: nu.to_string(),
        });
    }
    let n_min = top.edges().max(bottom.edges());
    let (rows, truncated) = run_rows(n_min, n_max, cfg, |n, expired| {
        let t = tally_pair(top, bottom, n, true, expired)?;
        let hits = t.by_dual.get(dstar).copied().unwrap_or(0);
        Some(FrequencyRow { n, total: t.total, connected: hits, meanders: t.meanders })
    });
    Ok(FrequencySeries {
        label: format!("P_connected({top}, {bottom}; {dstar})"),
        predicted: p1_diagram(dstar),
        rows,
        requested_n_max: n_max,
        truncated,
    })
}

/// Meanders of size `n` for one tree pair, split by equator-dual diagram.
pub fn equator_dual_counts(top: &PlaneTree, bottom: &PlaneTree, n: usize) -> BTreeMap<SeparatrixDiagram, u64> {
    tally_pair(top, bottom, n, true, &|| false).expect("no deadline").by_dual
}

/// `(total, connected)` for one size, counted over every rooted system and
/// every twist with no symmetry reduction. Slow; used as an oracle.
pub fn brute_force_row(top: &PlaneTree, bottom: &PlaneTree, n: usize) -> (u64, u64) {
    let tops: Vec<_> = crate::planetree::arc_systems_of_type(top, n).collect();
    let bottoms: Vec<_> = crate::planetree::arc_systems_of_type(bottom, n).collect();
    let (mut total, mut hits) = (0, 0);
    for a in &tops {
        for b in &bottoms {
            for t in 0..2 * n {
                total += 1;
                if crate::arccore::is_meander(a, b, t).expect("same size") {
                    hits += 1;
                }
            }
        }
    }
    (total, hits)
}
