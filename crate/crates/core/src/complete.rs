//! φ and ψ on the complete graph `K_n` through the staircase embedding into
//! `K_{n,n}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bipartite::{phi_kmn, psi_kmn, SortedBipartiteConfig};
use crate::error::{Result, SandpileError};
use crate::graph::Configuration;

/// A configuration on `K_n`; heights of `v_1..v_{n−1}`, the sink `v_n` excluded.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawComplete", into = "RawComplete")]
pub struct CompleteConfig {
    n: usize,
    heights: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct RawComplete {
    n: usize,
    heights: Vec<i64>,
}

impl TryFrom<RawComplete> for CompleteConfig {
    type Error = SandpileError;

    fn try_from(r: RawComplete) -> Result<Self> {
        CompleteConfig::new(r.n, r.heights)
    }
}

impl From<CompleteConfig> for RawComplete {
    fn from(c: CompleteConfig) -> Self {
        RawComplete {
            n: c.n,
            heights: c.heights,
        }
    }
}

impl CompleteConfig {
    pub fn new(n: usize, heights: Vec<i64>) -> Result<Self> {
        if n < 2 {
            return Err(SandpileError::InvalidGraph("K_n needs n ≥ 2".into()));
        }
        if heights.len() != n - 1 {
            return Err(SandpileError::LengthMismatch {
                expected: n - 1,
                found: heights.len(),
            });
        }
        Ok(CompleteConfig { n, heights })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn heights(&self) -> &[i64] {
        &self.heights
    }

    pub fn is_stable(&self) -> bool {
        let top = self.n as i64 - 1;
        self.heights.iter().all(|&h| (0..top).contains(&h))
    }

    /// Same multiset of heights, weakly increasing.
    pub fn sorted(&self) -> CompleteConfig {
        let mut heights = self.heights.clone();
        heights.sort_unstable();
        CompleteConfig { n: self.n, heights }
    }

    pub fn to_configuration(&self) -> Configuration {
        Configuration::new(self.heights.clone())
    }

    /// Every stable configuration with weakly increasing heights.
    pub fn all_sorted_stable(n: usize) -> Result<Vec<CompleteConfig>> {
        CompleteConfig::new(n, vec![0; n.saturating_sub(1)])?;
        let mut out = Vec::new();
        let mut cur = vec![0i64; n - 1];
        let top = n as i64 - 2;
        loop {
            out.push(CompleteConfig {
                n,
                heights: cur.clone(),
            });
            let Some(i) = cur.iter().rposition(|&h| h < top) else {
                return Ok(out);
            };
            cur[i] += 1;
            let v = cur[i];
            for h in &mut cur[i + 1..] {
                *h = v;
            }
        }
    }
}

impl fmt::Display for CompleteConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.heights.iter().map(i64::to_string).collect();
        write!(f, "({},*)", parts.join(","))
    }
}

/// `u = ((0, 1, …, n−1); sorted(v ⊕ 1))` on `K_{n,n}`.
pub fn embed_staircase(v: &CompleteConfig) -> Result<SortedBipartiteConfig> {
    if !v.is_stable() {
        return Err(SandpileError::NotStable);
    }
    let n = v.n;
    SortedBipartiteConfig::from_unsorted(
        n,
        n,
        (0..n as i64).collect(),
        v.heights.iter().map(|h| h + 1).collect(),
    )
}

/// Result of a `K_n` operator together with the number of `K_{n,n}` steps used;
/// zero steps means the input was a fixed point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnStep {
    pub config: CompleteConfig,
    pub steps: usize,
}

fn check_staircase(c: &SortedBipartiteConfig) -> Result<()> {
    let n = c.n() as i64;
    let mut seen = vec![false; c.n()];
    for &h in c.nonsink() {
        let r = h.rem_euclid(n) as usize;
        if std::mem::replace(&mut seen[r], true) {
            return Err(SandpileError::Internal(format!(
                "{c} lost the staircase property"
            )));
        }
    }
    Ok(())
}

fn reduce(
    v: &CompleteConfig,
    step: fn(&SortedBipartiteConfig) -> Result<SortedBipartiteConfig>,
) -> Result<KnStep> {
    let u = embed_staircase(v)?;
    let mut cur = u.clone();
    for k in 1..=v.n {
        let next = step(&cur)?;
        check_staircase(&next)?;
        if next == cur {
            return Ok(KnStep {
                config: v.sorted(),
                steps: 0,
            });
        }
        if next.is_zero_free() && next != u {
            let heights = next.sinkpart().iter().map(|h| h - 1).collect();
            return Ok(KnStep {
                config: CompleteConfig { n: v.n, heights },
                steps: k,
            });
        }
        cur = next;
    }
    Err(SandpileError::Internal(format!(
        "no 0-free iterate or fixed point within {} steps from {v}",
        v.n
    )))
}

/// φ on `K_n`: the first 0-free iterate `φ^k(u) ≠ u`, stripped to its sink part minus one.
pub fn phi_kn(v: &CompleteConfig) -> Result<KnStep> {
    reduce(v, phi_kmn)
}

/// ψ on `K_n`, mirroring [`phi_kn`].
pub fn psi_kn(v: &CompleteConfig) -> Result<KnStep> {
    reduce(v, psi_kmn)
}
