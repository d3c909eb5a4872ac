//! Exhaustive enumeration of plane meanders with `n` arcs above and below
//! the line, classified by the stratum of the associated pillowcase cover
//! and by minimal and maximal arcs.
//!
//! A plane meander is an ordered pair of arc systems glued without twist
//! that forms one curve. With no twist the faces of the glued graph are
//! exactly the regions of the two discs, so each arc system is reduced once
//! to a small signature and the pair loop only has to test connectivity.

mod serde_pairs;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arccore::{catalan, pairing_of_word, untwisted_is_connected, DyckWords, Partition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error("n = {n} exceeds the configured cap {cap}; raise the cap explicitly (run time grows like 14^n)")]
    CapExceeded { n: usize, cap: usize },
    #[error("n must be at least 1")]
    Empty,
    #[error("{what} is not available: {why}")]
    NotComputed { what: String, why: String },
    #[error("internal inconsistency at n = {n}: {detail}")]
    Inconsistent { n: usize, detail: String },
}

/// Largest `n` whose points fit the compact `u8` pairing tables.
pub const HARD_LIMIT: usize = 127;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusConfig {
    /// Refuse sizes above this.
    pub cap: usize,
    /// Worker threads.
    pub jobs: usize,
    /// Largest Catalan number for which all diagrams of a size are kept in
    /// memory; beyond it they are regenerated for every top diagram.
    pub budget: u64,
    /// Only pairs whose pole count lies in this set are examined.
    pub poles: Option<BTreeSet<usize>>,
}

impl Default for CensusConfig {
    fn default() -> Self {
        CensusConfig {
            cap: 11,
            jobs: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            budget: 5_000_000,
            poles: None,
        }
    }
}

impl CensusConfig {
    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_poles<I: IntoIterator<Item = usize>>(mut self, poles: I) -> Self {
        self.poles = Some(poles.into_iter().collect());
        self
    }

    fn admits(&self, poles: usize) -> bool {
        self.poles.as_ref().map_or(true, |s| s.contains(&poles))
    }
}

/// Meanders with `n` arcs on each side, classified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub n: usize,
    /// `p -> M_{n,p}`, the number of bigons being `p`.
    #[serde(with = "serde_pairs")]
    pub by_poles: BTreeMap<usize, u64>,
    /// Zero datum `nu -> count`.
    #[serde(with = "serde_pairs")]
    pub by_stratum: BTreeMap<Partition, u64>,
    /// `(nu, has maximal arc) -> count`; the trivial circle is left out.
    #[serde(with = "serde_pairs")]
    pub by_rainbow: BTreeMap<(Partition, bool), u64>,
    /// `(minimal arcs, has maximal arc) -> count`; the trivial circle is
    /// left out.
    #[serde(with = "serde_pairs")]
    pub by_pimples: BTreeMap<(usize, bool), u64>,
    /// Number of meanders examined, which is all of them unless
    /// `poles_filter` is set.
    pub total: u64,
    pub poles_filter: Option<Vec<usize>>,
}

impl CensusRow {
    pub fn is_complete(&self) -> bool {
        self.poles_filter.is_none()
    }

    pub fn covers_poles(&self, p: usize) -> bool {
        self.poles_filter.as_ref().map_or(true, |f| f.contains(&p))
    }

    /// `M_{n,p}`.
    pub fn poles(&self, p: usize) -> u64 {
        self.by_poles.get(&p).copied().unwrap_or(0)
    }
}

/// Per-diagram data that determines the classification of a pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Signature {
    leaves: u16,
    /// Orders `k - 2` of regions bounded by `k >= 3` arcs, sorted.
    zeros: Vec<u32>,
    pimples: u16,
    rainbow: bool,
}

fn signature(p: &[u8]) -> Signature {
    let m = p.len();
    let mut seen = vec![false; m];
    let mut leaves = 0;
    let mut zeros = Vec::new();
    for start in 0..m {
        if seen[start] {
            continue;
        }
        let mut len = 0u32;
        let mut s = start;
        while !seen[s] {
            seen[s] = true;
            len += 1;
            s = p[(s + 1) % m] as usize;
        }
        match len {
            1 => leaves += 1,
            2 => {}
            k => zeros.push(k - 2),
        }
    }
    zeros.sort_unstable();
    let pimples = (0..m - 1).filter(|&i| p[i] as usize == i + 1).count() as u16;
    Signature { leaves, zeros, pimples, rainbow: p[0] as usize == m - 1 }
}

fn pairing_u8(word: &[bool]) -> Vec<u8> {
    pairing_of_word(word).into_iter().map(|x| x as u8).collect()
}

type PairCounts = HashMap<(Signature, Signature), u64>;

/// Classifies every meander with `n` arcs.
pub fn census(n: usize, cfg: &CensusConfig) -> Result<CensusRow, CensusError> {
    if n == 0 {
        return Err(CensusError::Empty);
    }
    if n > cfg.cap || n > HARD_LIMIT {
        return Err(CensusError::CapExceeded { n, cap: cfg.cap.min(HARD_LIMIT) });
    }
    let counts = if catalan(n) <= cfg.budget { stored_pairs(n, cfg) } else { streamed_pairs(n, cfg) };
    build_row(n, cfg, counts)
}

/// All diagrams in memory, grouped by signature so that pole filtering
/// skips whole blocks.
fn stored_pairs(n: usize, cfg: &CensusConfig) -> PairCounts {
    let m = 2 * n;
    let mut classes: Vec<Signature> = Vec::new();
    let mut class_index: HashMap<Signature, usize> = HashMap::new();
    let mut members: Vec<Vec<u8>> = Vec::new();
    for w in DyckWords::new(n) {
        let p = pairing_u8(&w);
        let sig = signature(&p);
        let c = *class_index.entry(sig.clone()).or_insert_with(|| {
            classes.push(sig);
            members.push(Vec::new());
            classes.len() - 1
        });
        members[c].extend_from_slice(&p);
    }
    let k = classes.len();
    // Bottom classes compatible with each top class.
    let partners: Vec<Vec<usize>> = (0..k)
        .map(|a| (0..k).filter(|&b| cfg.admits((classes[a].leaves + classes[b].leaves) as usize)).collect())
        .collect();
    // Flat list of (class, offset) for tops, split evenly across workers.
    let tops: Vec<(usize, usize)> = (0..k)
        .filter(|&a| !partners[a].is_empty())
        .flat_map(|a| (0..members[a].len() / m).map(move |i| (a, i * m)))
        .collect();
    let jobs = cfg.jobs.max(1).min(tops.len().max(1));
    let chunk = tops.len().div_ceil(jobs).max(1);
    let matrix = std::thread::scope(|scope| {
        let handles: Vec<_> = tops
            .chunks(chunk)
            .map(|slice| {
                let (members, partners) = (&members, &partners);
                scope.spawn(move || {
                    let mut local = vec![0u64; k * k];
                    for &(a, off) in slice {
                        let top = &members[a][off..off + m];
                        for &b in &partners[a] {
                            let hits =
                                members[b].chunks_exact(m).filter(|bottom| untwisted_is_connected(top, bottom)).count();
                            local[a * k + b] += hits as u64;
                        }
                    }
                    local
                })
            })
            .collect();
        let mut total = vec![0u64; k * k];
        for h in handles {
            for (t, x) in total.iter_mut().zip(h.join().expect("census worker panicked")) {
                *t += x;
            }
        }
        total
    });
    let mut out = PairCounts::new();
    for a in 0..k {
        for b in 0..k {
            let c = matrix[a * k + b];
            if c > 0 {
                out.insert((classes[a].clone(), classes[b].clone()), c);
            }
        }
    }
    out
}

/// Constant-memory variant: diagrams are regenerated from their words.
fn streamed_pairs(n: usize, cfg: &CensusConfig) -> PairCounts {
    let jobs = cfg.jobs.max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|w| {
                scope.spawn(move || {
                    let mut local = PairCounts::new();
                    for (i, tw) in DyckWords::new(n).enumerate() {
                        if i % jobs != w {
                            continue;
                        }
                        let top = pairing_u8(&tw);
                        let st = signature(&top);
                        for bw in DyckWords::new(n) {
                            let bottom = pairing_u8(&bw);
                            let sb = signature(&bottom);
                            if cfg.admits((st.leaves + sb.leaves) as usize) && untwisted_is_connected(&top, &bottom) {
                                *local.entry((st.clone(), sb)).or_insert(0) += 1;
                            }
                        }
                    }
                    local
                })
            })
            .collect();
        let mut total = PairCounts::new();
        for h in handles {
            for (key, c) in h.join().expect("census worker panicked") {
                *total.entry(key).or_insert(0) += c;
            }
        }
        total
    })
}

fn build_row(n: usize, cfg: &CensusConfig, counts: PairCounts) -> Result<CensusRow, CensusError> {
    let mut row = CensusRow {
        n,
        by_poles: BTreeMap::new(),
        by_stratum: BTreeMap::new(),
        by_rainbow: BTreeMap::new(),
        by_pimples: BTreeMap::new(),
        total: 0,
        poles_filter: cfg.poles.as_ref().map(|s| s.iter().copied().collect()),
    };
    for ((a, b), c) in counts {
        let poles = (a.leaves + b.leaves) as usize;
        let nu = Partition::from_parts(a.zeros.iter().chain(&b.zeros).copied());
        if nu.weight() as usize + 4 != poles {
            return Err(CensusError::Inconsistent { n, detail: format!("{poles} bigons but zeros {nu}") });
        }
        *row.by_poles.entry(poles).or_insert(0) += c;
        *row.by_stratum.entry(nu.clone()).or_insert(0) += c;
        row.total += c;
        // The circle crossing the line twice has both arcs minimal and
        // maximal at once; it is kept in the table but not in the split.
        if n == 1 {
            continue;
        }
        let pimples = (a.pimples + b.pimples) as usize;
        let rainbow = a.rainbow || b.rainbow;
        if a.rainbow && b.rainbow {
            return Err(CensusError::Inconsistent { n, detail: "maximal arc on both sides".into() });
        }
        if pimples + rainbow as usize != poles {
            return Err(CensusError::Inconsistent {
                n,
                detail: format!("{poles} bigons but {pimples} minimal arcs, maximal arc {rainbow}"),
            });
        }
        *row.by_pimples.entry((pimples, rainbow)).or_insert(0) += c;
        *row.by_rainbow.entry((nu, rainbow)).or_insert(0) += c;
    }
    Ok(row)
}

/// Rows `1..=n_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusTable {
    pub rows: Vec<CensusRow>,
}

pub fn census_table(n_max: usize, cfg: &CensusConfig) -> Result<CensusTable, CensusError> {
    if n_max > cfg.cap {
        return Err(CensusError::CapExceeded { n: n_max, cap: cfg.cap });
    }
    let rows = (1..=n_max).map(|n| census(n, cfg)).collect::<Result<_, _>>()?;
    Ok(CensusTable { rows })
}

impl CensusTable {
    pub fn n_max(&self) -> usize {
        self.rows.len()
    }

    fn rows_upto(&self, n_max: usize, poles: usize, what: &str) -> Result<&[CensusRow], CensusError> {
        if n_max > self.rows.len() {
            return Err(CensusError::NotComputed {
                what: what.to_string(),
                why: format!("table holds n <= {}, asked for N = {n_max}", self.rows.len()),
            });
        }
        let rows = &self.rows[..n_max];
        if let Some(r) = rows.iter().find(|r| !r.covers_poles(poles)) {
            return Err(CensusError::NotComputed {
                what: what.to_string(),
                why: format!("row n = {} was computed for poles {:?} only", r.n, r.poles_filter),
            });
        }
        Ok(rows)
    }

    /// `sum_{n <= N} M_{n,p}`.
    pub fn cumulative_by_poles(&self, p: usize, n_max: usize) -> Result<u64, CensusError> {
        Ok(self.rows_upto(n_max, p, "cumulative_by_poles")?.iter().map(|r| r.poles(p)).sum())
    }

    fn by_pimples(&self, p: usize, rainbow: bool, n_max: usize) -> Result<u64, CensusError> {
        let poles = p + rainbow as usize;
        let rows = self.rows_upto(n_max, poles, if rainbow { "m_plus" } else { "m_minus" })?;
        Ok(rows.iter().map(|r| r.by_pimples.get(&(p, rainbow)).copied().unwrap_or(0)).sum())
    }

    /// Meanders with at most `2N` crossings, a maximal arc and `p` minimal arcs.
    pub fn m_plus(&self, p: usize, n_max: usize) -> Result<u64, CensusError> {
        self.by_pimples(p, true, n_max)
    }

    /// Meanders with at most `2N` crossings, no maximal arc and `p` minimal arcs.
    pub fn m_minus(&self, p: usize, n_max: usize) -> Result<u64, CensusError> {
        self.by_pimples(p, false, n_max)
    }

    fn by_nu(&self, nu: &Partition, rainbow: bool, n_max: usize) -> Result<u64, CensusError> {
        if nu.multiplicity(0) > 0 {
            return Err(CensusError::NotComputed {
                what: format!("stratum count for {nu}"),
                why: "meanders carry no marked points".into(),
            });
        }
        let rows = self.rows_upto(n_max, nu.weight() as usize + 4, "stratum count")?;
        let key = (nu.clone(), rainbow);
        Ok(rows.iter().map(|r| r.by_rainbow.get(&key).copied().unwrap_or(0)).sum())
    }

    pub fn m_plus_nu(&self, nu: &Partition, n_max: usize) -> Result<u64, CensusError> {
        self.by_nu(nu, true, n_max)
    }

    pub fn m_minus_nu(&self, nu: &Partition, n_max: usize) -> Result<u64, CensusError> {
        self.by_nu(nu, false, n_max)
    }
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    assert!(n >= 1);
    let (mut m, mut phi, mut d) = (n, n, 2);
    while d * d <= m {
        if m % d == 0 {
            while m % d == 0 {
                m /= d;
            }
            phi -= phi / d;
        }
        d += 1;
    }
    if m > 1 {
        phi -= phi / m;
    }
    phi
}
