//! Sorted configurations on `K_{m,n}` and the closed-form operators on them.
//!
//! Vertices `v_1..v_n` form the non-sink component (degree `m`), vertices
//! `v_{n+1}..v_{n+m-1}` the sink component minus the sink (degree `n`). A
//! sorted configuration stores both parts weakly increasing; it represents
//! its orbit under permutations within each component.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SandpileError};
use crate::frames::{config_to_framed_pair, pos};
use crate::graph::Configuration;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawBipartite", into = "RawBipartite")]
pub struct SortedBipartiteConfig {
    m: usize,
    n: usize,
    nonsink: Vec<i64>,
    sinkpart: Vec<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawBipartite {
    m: usize,
    n: usize,
    nonsink: Vec<i64>,
    sinkpart: Vec<i64>,
}

impl TryFrom<RawBipartite> for SortedBipartiteConfig {
    type Error = SandpileError;

    fn try_from(r: RawBipartite) -> Result<Self> {
        SortedBipartiteConfig::new(r.m, r.n, r.nonsink, r.sinkpart)
    }
}

impl From<SortedBipartiteConfig> for RawBipartite {
    fn from(c: SortedBipartiteConfig) -> Self {
        RawBipartite {
            m: c.m,
            n: c.n,
            nonsink: c.nonsink,
            sinkpart: c.sinkpart,
        }
    }
}

fn is_sorted(v: &[i64]) -> bool {
    v.windows(2).all(|w| w[0] <= w[1])
}

fn spread(v: &[i64]) -> i64 {
    match (v.first(), v.last()) {
        (Some(a), Some(b)) => b - a,
        _ => 0,
    }
}

impl SortedBipartiteConfig {
    /// Validates `m ≥ 2`, `n ≥ 1`, the part lengths and sortedness.
    pub fn new(m: usize, n: usize, nonsink: Vec<i64>, sinkpart: Vec<i64>) -> Result<Self> {
        if m < 2 {
            return Err(SandpileError::InvalidBipartite(
                "m must be at least 2; use the general-graph operators for K_{1,n}".into(),
            ));
        }
        if n < 1 {
            return Err(SandpileError::InvalidBipartite(
                "n must be at least 1".into(),
            ));
        }
        if nonsink.len() != n {
            return Err(SandpileError::LengthMismatch {
                expected: n,
                found: nonsink.len(),
            });
        }
        if sinkpart.len() != m - 1 {
            return Err(SandpileError::LengthMismatch {
                expected: m - 1,
                found: sinkpart.len(),
            });
        }
        if !is_sorted(&nonsink) || !is_sorted(&sinkpart) {
            return Err(SandpileError::NotSorted);
        }
        Ok(SortedBipartiteConfig {
            m,
            n,
            nonsink,
            sinkpart,
        })
    }

    /// Sorts both parts before validating.
    pub fn from_unsorted(
        m: usize,
        n: usize,
        mut nonsink: Vec<i64>,
        mut sinkpart: Vec<i64>,
    ) -> Result<Self> {
        nonsink.sort_unstable();
        sinkpart.sort_unstable();
        SortedBipartiteConfig::new(m, n, nonsink, sinkpart)
    }

    /// Sorted representative of a general configuration on `K_{m,n}`.
    pub fn from_configuration(m: usize, n: usize, c: &Configuration) -> Result<Self> {
        if c.len() != n + m - 1 {
            return Err(SandpileError::LengthMismatch {
                expected: n + m - 1,
                found: c.len(),
            });
        }
        let (a, b) = c.heights.split_at(n);
        SortedBipartiteConfig::from_unsorted(m, n, a.to_vec(), b.to_vec())
    }

    /// The configuration `(c^{≤n}, c^{>n})` on the general graph `K_{m,n}`.
    pub fn to_configuration(&self) -> Configuration {
        let mut h = self.nonsink.clone();
        h.extend_from_slice(&self.sinkpart);
        Configuration::new(h)
    }

    pub fn zero(m: usize, n: usize) -> Result<Self> {
        SortedBipartiteConfig::new(m, n, vec![0; n], vec![0; m.saturating_sub(1)])
    }

    /// δ: every vertex one grain short of its degree.
    pub fn delta(m: usize, n: usize) -> Result<Self> {
        SortedBipartiteConfig::new(
            m,
            n,
            vec![m as i64 - 1; n],
            vec![n as i64 - 1; m.saturating_sub(1)],
        )
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nonsink(&self) -> &[i64] {
        &self.nonsink
    }

    pub fn sinkpart(&self) -> &[i64] {
        &self.sinkpart
    }

    /// `0 ⊴ c ⊴ δ`, read off the extreme entries of each sorted part.
    pub fn is_stable(&self) -> bool {
        self.nonsink[0] >= 0
            && self.nonsink[self.n - 1] < self.m as i64
            && self.sinkpart.first().is_none_or(|&x| x >= 0)
            && self.sinkpart.last().is_none_or(|&x| x < self.n as i64)
    }

    pub fn is_compact_range(&self) -> bool {
        spread(&self.nonsink) <= self.m as i64 && spread(&self.sinkpart) <= self.n as i64
    }

    /// Every sink-component entry is at least 1.
    pub fn is_zero_free(&self) -> bool {
        self.sinkpart.iter().all(|&x| x >= 1)
    }

    /// Total height `I₁`.
    pub fn total_height(&self) -> i64 {
        self.nonsink.iter().sum::<i64>() + self.sinkpart.iter().sum::<i64>()
    }

    /// Non-sink height `I₂`.
    pub fn nonsink_height(&self) -> i64 {
        self.nonsink.iter().sum()
    }

    fn require_stable(&self) -> Result<()> {
        if !self.is_stable() {
            return Err(SandpileError::NotStable);
        }
        Ok(())
    }

    fn require_compact(&self) -> Result<()> {
        if !self.is_compact_range() {
            return Err(SandpileError::CompactRange);
        }
        Ok(())
    }

    /// ρ·β: complement against δ and reverse both parts, which keeps them sorted.
    pub fn rho_beta(&self) -> SortedBipartiteConfig {
        let m = self.m as i64;
        let n = self.n as i64;
        SortedBipartiteConfig {
            m: self.m,
            n: self.n,
            nonsink: self.nonsink.iter().rev().map(|&x| m - 1 - x).collect(),
            sinkpart: self.sinkpart.iter().rev().map(|&x| n - 1 - x).collect(),
        }
    }

    /// Topple `v_n` then re-sort: `(c_n − m, c_1, …, c_{n−1}; 1 + c^{>n})`.
    pub fn t_nonsink(&self) -> Result<SortedBipartiteConfig> {
        self.require_compact()?;
        let mut nonsink = Vec::with_capacity(self.n);
        nonsink.push(self.nonsink[self.n - 1] - self.m as i64);
        nonsink.extend_from_slice(&self.nonsink[..self.n - 1]);
        Ok(SortedBipartiteConfig {
            m: self.m,
            n: self.n,
            nonsink,
            sinkpart: self.sinkpart.iter().map(|&x| x + 1).collect(),
        })
    }

    /// Topple `v_{n+m−1}` then re-sort: `(1 + c^{≤n}; c_{n+m−1} − n, c_{n+1}, …)`.
    pub fn t_sink(&self) -> Result<SortedBipartiteConfig> {
        self.require_compact()?;
        let k = self.m - 1;
        let mut sinkpart = Vec::with_capacity(k);
        sinkpart.push(self.sinkpart[k - 1] - self.n as i64);
        sinkpart.extend_from_slice(&self.sinkpart[..k - 1]);
        Ok(SortedBipartiteConfig {
            m: self.m,
            n: self.n,
            nonsink: self.nonsink.iter().map(|&x| x + 1).collect(),
            sinkpart,
        })
    }

    /// Inverse of [`t_nonsink`](Self::t_nonsink) on compact-range configurations.
    pub fn t_nonsink_inverse(&self) -> Result<SortedBipartiteConfig> {
        self.require_compact()?;
        let mut nonsink = self.nonsink[1..].to_vec();
        nonsink.push(self.nonsink[0] + self.m as i64);
        Ok(SortedBipartiteConfig {
            m: self.m,
            n: self.n,
            nonsink,
            sinkpart: self.sinkpart.iter().map(|&x| x - 1).collect(),
        })
    }

    /// Inverse of [`t_sink`](Self::t_sink) on compact-range configurations.
    pub fn t_sink_inverse(&self) -> Result<SortedBipartiteConfig> {
        self.require_compact()?;
        let mut sinkpart = self.sinkpart[1..].to_vec();
        sinkpart.push(self.sinkpart[0] + self.n as i64);
        Ok(SortedBipartiteConfig {
            m: self.m,
            n: self.n,
            nonsink: self.nonsink.iter().map(|&x| x - 1).collect(),
            sinkpart,
        })
    }

    fn nonsink_over_delta(&self) -> bool {
        self.nonsink[self.n - 1] > self.m as i64 - 1
    }

    fn nonsink_below_zero(&self) -> bool {
        self.nonsink[0] < 0
    }

    fn sink_over_delta(&self) -> bool {
        self.sinkpart[self.m - 2] > self.n as i64 - 1
    }

    fn sink_below_zero(&self) -> bool {
        self.sinkpart[0] < 0
    }

    /// Every sorted stable configuration of `K_{m,n}`, in lexicographic order.
    pub fn all_stable(m: usize, n: usize) -> Result<Vec<SortedBipartiteConfig>> {
        SortedBipartiteConfig::zero(m, n)?;
        let nonsinks = multisets(n, m as i64 - 1);
        let sinks = multisets(m - 1, n as i64 - 1);
        let mut out = Vec::with_capacity(nonsinks.len() * sinks.len());
        for a in &nonsinks {
            for b in &sinks {
                out.push(SortedBipartiteConfig {
                    m,
                    n,
                    nonsink: a.clone(),
                    sinkpart: b.clone(),
                });
            }
        }
        Ok(out)
    }
}

/// Weakly increasing sequences of length `len` with entries in `0..=max`.
fn multisets(len: usize, max: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; len];
    loop {
        out.push(cur.clone());
        let mut i = len;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < max {
                cur[i] += 1;
                let v = cur[i];
                for x in &mut cur[i + 1..] {
                    *x = v;
                }
                break;
            }
        }
    }
}

impl fmt::Display for SortedBipartiteConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.nonsink.iter().map(i64::to_string).collect();
        let b: Vec<String> = self.sinkpart.iter().map(i64::to_string).collect();
        write!(f, "{{{}; {}}}", a.join(","), b.join(","))
    }
}

/// φ on a sorted stable configuration by repeated frame moves: topple both
/// extreme vertices, then keep toppling whichever component is out of range
/// until the configuration is stable again. The loop guard `m + n` is what
/// detects parking inputs, which are returned unchanged.
pub fn phi_kmn(c: &SortedBipartiteConfig) -> Result<SortedBipartiteConfig> {
    c.require_stable()?;
    let mut cur = c.t_sink()?.t_nonsink()?;
    let mut nloops = 0;
    while !cur.is_stable() {
        if nloops >= c.m + c.n {
            return Ok(c.clone());
        }
        if cur.nonsink_over_delta() || cur.sink_below_zero() {
            cur = cur.t_nonsink()?;
        }
        if cur.sink_over_delta() || cur.nonsink_below_zero() {
            cur = cur.t_sink()?;
        }
        nloops += 1;
    }
    Ok(cur)
}

/// ψ = ρ·β·φ·ρ·β on sorted stable configurations.
pub fn psi_kmn(c: &SortedBipartiteConfig) -> Result<SortedBipartiteConfig> {
    c.require_stable()?;
    Ok(phi_kmn(&c.rho_beta())?.rho_beta())
}

/// Number of east steps `E_k`, `0 ≤ k < m`, of the pair anchored at the origin
/// whose relative position is at least 1. Ranges over `0..m`; the recurrent
/// configuration of a class has grade `m − 1` and the parking one grade 0.
pub fn grade_kmn(c: &SortedBipartiteConfig) -> Result<usize> {
    let pair = config_to_framed_pair(c)?;
    Ok((0..c.m as i64).filter(|&k| pos(&pair, k) >= 1).count())
}

/// Iterates ψ up to the recurrent configuration of the class.
pub fn recurrent_of(c: &SortedBipartiteConfig) -> Result<SortedBipartiteConfig> {
    let mut cur = c.clone();
    // a class holds exactly m sorted stable configurations
    for _ in 0..c.m {
        let next = psi_kmn(&cur)?;
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
    Err(SandpileError::Internal(
        "ψ did not reach a fixed point within m steps".into(),
    ))
}

/// Iterates φ down to the parking configuration of the class.
pub fn parking_of(c: &SortedBipartiteConfig) -> Result<SortedBipartiteConfig> {
    let mut cur = c.clone();
    for _ in 0..c.m {
        let next = phi_kmn(&cur)?;
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
    Err(SandpileError::Internal(
        "φ did not reach a fixed point within m steps".into(),
    ))
}

/// `[recurrent, φ(recurrent), …, φ^{m−1}(recurrent) = parking]`.
pub fn walk_class(c: &SortedBipartiteConfig) -> Result<Vec<SortedBipartiteConfig>> {
    let mut cur = recurrent_of(c)?;
    let mut out = Vec::with_capacity(c.m);
    out.push(cur.clone());
    for _ in 1..c.m {
        cur = phi_kmn(&cur)?;
        out.push(cur.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sc(m: usize, n: usize, a: &[i64], b: &[i64]) -> SortedBipartiteConfig {
        SortedBipartiteConfig::new(m, n, a.to_vec(), b.to_vec()).unwrap()
    }

    fn u() -> SortedBipartiteConfig {
        sc(4, 6, &[1, 2, 2, 3, 3, 3], &[0, 3, 5])
    }

    #[test]
    fn construction_checks() {
        assert!(matches!(
            SortedBipartiteConfig::new(1, 3, vec![0, 0, 0], vec![]),
            Err(SandpileError::InvalidBipartite(_))
        ));
        assert_eq!(
            SortedBipartiteConfig::new(2, 2, vec![1, 0], vec![0]),
            Err(SandpileError::NotSorted)
        );
        assert!(matches!(
            SortedBipartiteConfig::new(3, 2, vec![0, 0], vec![0]),
            Err(SandpileError::LengthMismatch {
                expected: 2,
                found: 1
            })
        ));
        let json = r#"{"m":4,"n":6,"nonsink":[1,2,2,3,3,3],"sinkpart":[0,3,5]}"#;
        let parsed: SortedBipartiteConfig = serde_json::from_str(json).unwrap();
        assert_eq!(parsed, u());
        assert_eq!(serde_json::to_string(&parsed).unwrap(), json);
        assert!(serde_json::from_str::<SortedBipartiteConfig>(
            r#"{"m":4,"n":6,"nonsink":[2,1,2,3,3,3],"sinkpart":[0,3,5]}"#
        )
        .is_err());
    }

    #[test]
    fn toppling_formulas() {
        assert_eq!(
            u().t_nonsink().unwrap(),
            sc(4, 6, &[-1, 1, 2, 2, 3, 3], &[1, 4, 6])
        );
        assert_eq!(
            u().t_sink().unwrap(),
            sc(4, 6, &[2, 3, 3, 4, 4, 4], &[-1, 0, 3])
        );
        let small = sc(2, 2, &[0, 1], &[1]);
        assert_eq!(small.t_nonsink().unwrap(), sc(2, 2, &[-1, 0], &[2]));
        assert_eq!(small.t_sink().unwrap(), sc(2, 2, &[1, 2], &[-1]));
        assert_eq!(u().t_nonsink().unwrap().t_nonsink_inverse().unwrap(), u());
        assert_eq!(u().t_sink().unwrap().t_sink_inverse().unwrap(), u());
        assert_eq!(
            u().t_sink().unwrap().t_nonsink().unwrap(),
            u().t_nonsink().unwrap().t_sink().unwrap()
        );
        let wide = sc(2, 2, &[0, 5], &[0]);
        assert_eq!(wide.t_nonsink(), Err(SandpileError::CompactRange));
    }

    #[test]
    fn phi_walk_of_running_example() {
        let p1 = phi_kmn(&u()).unwrap();
        assert_eq!(p1, sc(4, 6, &[0, 0, 1, 1, 1, 3], &[2, 4, 5]));
        let p2 = phi_kmn(&p1).unwrap();
        assert_eq!(p2, sc(4, 6, &[0, 1, 1, 2, 2, 2], &[0, 3, 5]));
        let p3 = phi_kmn(&p2).unwrap();
        assert_eq!(p3, sc(4, 6, &[0, 0, 0, 2, 3, 3], &[0, 2, 3]));
        assert_eq!(phi_kmn(&p3).unwrap(), p3);
    }

    #[test]
    fn psi_inverts_phi() {
        let p3 = sc(4, 6, &[0, 0, 0, 2, 3, 3], &[0, 2, 3]);
        assert_eq!(
            psi_kmn(&p3).unwrap(),
            sc(4, 6, &[0, 1, 1, 2, 2, 2], &[0, 3, 5])
        );
        assert_eq!(psi_kmn(&u()).unwrap(), u());
        for c in SortedBipartiteConfig::all_stable(3, 3).unwrap() {
            let up = psi_kmn(&c).unwrap();
            if up != c {
                assert_eq!(phi_kmn(&up).unwrap(), c);
            }
        }
    }

    #[test]
    fn grades_along_the_walk() {
        let walk = walk_class(&u()).unwrap();
        assert_eq!(walk.len(), 4);
        assert_eq!(walk[0], u());
        let grades: Vec<usize> = walk.iter().map(|c| grade_kmn(c).unwrap()).collect();
        assert_eq!(grades, vec![3, 2, 1, 0]);
        assert_eq!(walk_class(&walk[3]).unwrap(), walk);
        for c in SortedBipartiteConfig::all_stable(2, 3).unwrap() {
            assert!(grade_kmn(&c).unwrap() <= 1);
        }
    }

    #[test]
    fn rejects_unstable_inputs() {
        let bad = sc(2, 2, &[0, 2], &[0]);
        assert_eq!(phi_kmn(&bad), Err(SandpileError::NotStable));
        assert_eq!(psi_kmn(&bad), Err(SandpileError::NotStable));
        assert_eq!(grade_kmn(&bad), Err(SandpileError::NotStable));
        assert_eq!(walk_class(&bad), Err(SandpileError::NotStable));
    }

    #[test]
    fn enumerates_sorted_stable() {
        // C(m+n-1, n) * C(m+n-2, m-1)
        assert_eq!(
            SortedBipartiteConfig::all_stable(4, 6).unwrap().len(),
            84 * 56
        );
        assert_eq!(SortedBipartiteConfig::all_stable(2, 1).unwrap().len(), 2);
        assert!(SortedBipartiteConfig::all_stable(4, 4)
            .unwrap()
            .iter()
            .all(SortedBipartiteConfig::is_stable));
    }

    #[test]
    fn n_equal_one() {
        for c in SortedBipartiteConfig::all_stable(3, 1).unwrap() {
            let walk = walk_class(&c).unwrap();
            assert_eq!(walk.len(), 3);
            assert!(walk.contains(&c));
        }
    }
}
