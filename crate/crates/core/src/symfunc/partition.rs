use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num::BigInt;

use crate::error::{Error, Result};

/// Integer partition: weakly decreasing positive parts. The empty partition
/// is the unique partition of 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Sorts descending and drops zero parts.
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn single(part: u32) -> Self {
        if part == 0 {
            Self::empty()
        } else {
            Partition(vec![part])
        }
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    pub fn conjugate(&self) -> Partition {
        if self.0.is_empty() {
            return Partition::empty();
        }
        let max = self.0[0] as usize;
        let mut out = Vec::with_capacity(max);
        for c in 0..max {
            out.push(self.0.iter().filter(|&&p| p as usize > c).count() as u32);
        }
        Partition(out)
    }

    /// z_lambda = prod_i i^{m_i} m_i!, the Hall norm of p_lambda.
    pub fn z(&self) -> BigInt {
        let mut z = BigInt::from(1);
        let mut mult: HashMap<u32, u32> = HashMap::new();
        for &p in &self.0 {
            *mult.entry(p).or_insert(0) += 1;
        }
        for (part, m) in mult {
            for _ in 0..m {
                z *= BigInt::from(part);
            }
            for k in 1..=m {
                z *= BigInt::from(k);
            }
        }
        z
    }

    /// n(lambda) = sum_i (i-1) lambda_i = sum of row indices over cells.
    pub fn n_stat(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &p)| i as u64 * p as u64)
            .sum()
    }

    /// n'(lambda) = n(lambda'), the sum of column indices over cells.
    pub fn nprime_stat(&self) -> u64 {
        self.conjugate().n_stat()
    }

    /// Cells as (column, row), both 0-indexed.
    pub fn cells(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| (0..p).map(move |c| (c, r as u32)))
    }

    pub fn multiplicity(&self, part: u32) -> u32 {
        self.0.iter().filter(|&&p| p == part).count() as u32
    }

    /// Remove one copy of `part`; `None` if absent.
    pub fn remove_part(&self, part: u32) -> Option<Partition> {
        let idx = self.0.iter().position(|&p| p == part)?;
        let mut parts = self.0.clone();
        parts.remove(idx);
        Some(Partition(parts))
    }

    pub fn add_part(&self, part: u32) -> Partition {
        if part == 0 {
            return self.clone();
        }
        let mut parts = self.0.clone();
        let idx = parts.iter().position(|&p| p < part).unwrap_or(parts.len());
        parts.insert(idx, part);
        Partition(parts)
    }

    /// Multiset union (concatenate and resort); p_lambda * p_mu = p_{union}.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&other.0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("-");
        }
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        f.write_str(&s.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "-" || s.is_empty() {
            return Ok(Partition::empty());
        }
        let mut parts = Vec::new();
        for (i, tok) in s.split(',').enumerate() {
            let p: u32 = tok.trim().parse().map_err(|_| Error::Parse {
                pos: i,
                msg: format!("invalid partition part {:?}", tok),
            })?;
            if p == 0 {
                return Err(Error::Parse {
                    pos: i,
                    msg: "partition parts must be positive".to_string(),
                });
            }
            parts.push(p);
        }
        for w in parts.windows(2) {
            if w[0] < w[1] {
                return Err(Error::Parse {
                    pos: 0,
                    msg: "partition parts must be weakly decreasing".to_string(),
                });
            }
        }
        Ok(Partition(parts))
    }
}

/// Partition list of a fixed size plus an index for coordinate lookups.
pub struct PartitionTable {
    pub list: Vec<Partition>,
    pub index: HashMap<Partition, usize>,
}

fn enumerate(d: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if d == 0 {
        out.push(Partition(prefix.clone()));
        return;
    }
    let hi = d.min(max_part);
    for first in (1..=hi).rev() {
        prefix.push(first);
        enumerate(d - first, first, prefix, out);
        prefix.pop();
    }
}

fn table_cache() -> &'static Mutex<HashMap<usize, Arc<PartitionTable>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<PartitionTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// All partitions of `d` in the fixed global order: reverse lexicographic,
/// largest-first ([4], [3,1], [2,2], [2,1,1], [1,1,1,1]).
pub fn partitions_of(d: usize) -> Arc<PartitionTable> {
    let mut cache = table_cache().lock().unwrap();
    if let Some(t) = cache.get(&d) {
        return Arc::clone(t);
    }
    let mut list = Vec::new();
    let mut prefix = Vec::new();
    enumerate(d as u32, d as u32, &mut prefix, &mut list);
    if d == 0 {
        // enumerate() already pushed the empty partition exactly once
        debug_assert_eq!(list.len(), 1);
    }
    let index = list
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    let table = Arc::new(PartitionTable { list, index });
    cache.insert(d, Arc::clone(&table));
    table
}

/// Dominance partial order on partitions of equal size: true iff every
/// partial sum of `lhs` is at most the matching partial sum of `rhs`.
pub fn dominance_leq(lhs: &Partition, rhs: &Partition) -> Result<bool> {
    if lhs.size() != rhs.size() {
        return Err(Error::SizeMismatch {
            left: lhs.to_string(),
            left_size: lhs.size(),
            right: rhs.to_string(),
            right_size: rhs.size(),
        });
    }
    let k = lhs.len().max(rhs.len());
    let mut sum_l = 0u64;
    let mut sum_r = 0u64;
    for i in 0..k {
        sum_l += lhs.0.get(i).copied().unwrap_or(0) as u64;
        sum_r += rhs.0.get(i).copied().unwrap_or(0) as u64;
        if sum_l > sum_r {
            return Ok(false);
        }
    }
    Ok(true)
}
