//! Generalized integer partitions `[0^k0 1^k1 2^k2 ...]`.
//!
//! Used both as the zero datum of a stratum `Q(nu, -1^(|nu|+4))` and as the
//! valence profile of a plane tree (entry `d` counts vertices of valence
//! `d + 2`).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("malformed partition token {0:?}")]
    Malformed(String),
    #[error("negative entry {0} is not allowed here")]
    Negative(i64),
    #[error("order {0} is below -1")]
    Order(i64),
    #[error("{poles} simple poles do not balance zeros of total order {weight}; genus zero needs {weight} + 4")]
    Unbalanced { poles: u64, weight: u64 },
}

/// Finitely supported multiplicity map `d -> nu_d`. Zero multiplicities are
/// never stored, so structural equality is partition equality.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    mult: BTreeMap<u32, u32>,
}

impl Partition {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `[d^k]`.
    pub fn power(d: u32, k: u32) -> Self {
        let mut p = Self::empty();
        p.add_part(d, k);
        p
    }

    /// Builds a partition from its entries, e.g. `[1, 1, 2]`.
    pub fn from_parts<I: IntoIterator<Item = u32>>(parts: I) -> Self {
        let mut p = Self::empty();
        for d in parts {
            p.add_part(d, 1);
        }
        p
    }

    pub fn from_multiplicities<I: IntoIterator<Item = (u32, u32)>>(pairs: I) -> Self {
        let mut p = Self::empty();
        for (d, k) in pairs {
            p.add_part(d, k);
        }
        p
    }

    pub fn add_part(&mut self, d: u32, k: u32) {
        if k > 0 {
            *self.mult.entry(d).or_insert(0) += k;
        }
    }

    /// `nu_d`.
    pub fn multiplicity(&self, d: u32) -> u32 {
        self.mult.get(&d).copied().unwrap_or(0)
    }

    /// Nonzero `(d, nu_d)` pairs in increasing `d`.
    pub fn multiplicities(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.mult.iter().map(|(&d, &k)| (d, k))
    }

    /// Entries in nondecreasing order.
    pub fn parts(&self) -> Vec<u32> {
        self.mult
            .iter()
            .flat_map(|(&d, &k)| std::iter::repeat(d).take(k as usize))
            .collect()
    }

    /// `|nu| = sum d * nu_d`.
    pub fn weight(&self) -> u64 {
        self.mult.iter().map(|(&d, &k)| d as u64 * k as u64).sum()
    }

    /// `l(nu) = sum nu_d`, counting zero entries.
    pub fn length(&self) -> u64 {
        self.mult.values().map(|&k| k as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.mult.is_empty()
    }

    /// The same partition with every zero entry removed.
    pub fn without_zeros(&self) -> Self {
        let mut p = self.clone();
        p.mult.remove(&0);
        p
    }

    /// Every subpartition `iota` with `iota_d <= nu_d`, including the empty
    /// one and `nu` itself.
    pub fn subpartitions(&self) -> Vec<Partition> {
        let entries: Vec<(u32, u32)> = self.multiplicities().collect();
        let mut out = vec![Partition::empty()];
        for (d, k) in entries {
            let mut next = Vec::with_capacity(out.len() * (k as usize + 1));
            for base in &out {
                for i in 0..=k {
                    let mut p = base.clone();
                    p.add_part(d, i);
                    next.push(p);
                }
            }
            out = next;
        }
        out
    }

    /// Whether every `self_d <= other_d`.
    pub fn is_subpartition_of(&self, other: &Partition) -> bool {
        self.mult.iter().all(|(&d, &k)| other.multiplicity(d) >= k)
    }

    /// Compact notation `1^2,2` (empty partition renders as the empty string).
    pub fn to_compact(&self) -> String {
        let tokens: Vec<String> = self
            .mult
            .iter()
            .map(|(&d, &k)| if k == 1 { format!("{d}") } else { format!("{d}^{k}") })
            .collect();
        tokens.join(",")
    }
}

impl Add for &Partition {
    type Output = Partition;

    fn add(self, rhs: &Partition) -> Partition {
        let mut p = self.clone();
        for (d, k) in rhs.multiplicities() {
            p.add_part(d, k);
        }
        p
    }
}

impl Sub for &Partition {
    type Output = Partition;

    /// Panics unless `rhs` is a subpartition of `self`.
    fn sub(self, rhs: &Partition) -> Partition {
        assert!(rhs.is_subpartition_of(self), "{rhs} is not a subpartition of {self}");
        let mut p = Partition::empty();
        for (d, k) in self.multiplicities() {
            p.add_part(d, k - rhs.multiplicity(d));
        }
        p
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_compact())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition{self}")
    }
}

impl FromStr for Partition {
    type Err = PartitionError;

    /// Accepts `""`, `"[]"`, `"1^2,2"` or `"[1^2,2]"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.trim().trim_start_matches('[').trim_end_matches(']').trim();
        let mut p = Partition::empty();
        if body.is_empty() {
            return Ok(p);
        }
        for token in body.split(',') {
            let (d, k) = parse_power_token(token)?;
            if d < 0 {
                return Err(PartitionError::Negative(d));
            }
            p.add_part(d as u32, k);
        }
        Ok(p)
    }
}

/// Parses `"o^m"` or `"o"` into `(o, m)`; `o` may be negative.
pub fn parse_power_token(token: &str) -> Result<(i64, u32), PartitionError> {
    let token = token.trim();
    let malformed = || PartitionError::Malformed(token.to_string());
    let (base, exp) = match token.split_once('^') {
        Some((b, e)) => (b.trim(), e.trim().parse::<u32>().map_err(|_| malformed())?),
        None => (token, 1),
    };
    let base = base.parse::<i64>().map_err(|_| malformed())?;
    Ok((base, exp))
}
