//! The operators ψ, φ and β on stable configurations of an arbitrary graph.
//!
//! ψ adds and φ subtracts the cluster toppling `Δ_A` of the ≺-smallest
//! non-empty `A ⊆ {1..n}` keeping the configuration stable, where ≺ orders
//! subsets by size and then lexicographically. The scan is exponential in the
//! number of non-sink vertices and is capped by [`Limits::general_vertex_cap`].

use serde::{Deserialize, Serialize};

use crate::error::{Result, SandpileError};
use crate::graph::{is_stable, require_stable, Configuration, Graph};
use crate::limits::Limits;

/// Position in the ≺ enumeration of subsets of `{1, …, n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubsetCursor {
    pub universe: usize,
    /// Sorted 1-based members; empty before the first subset.
    pub current: Vec<usize>,
}

impl SubsetCursor {
    pub fn start(universe: usize) -> Self {
        SubsetCursor {
            universe,
            current: Vec::new(),
        }
    }

    /// The ≺-successor, or `None` once `{1, …, n}` has been passed.
    pub fn next_subset(&self) -> Option<SubsetCursor> {
        let mut cur = self.current.clone();
        if !advance_combination(&mut cur, self.universe, 1) {
            return None;
        }
        Some(SubsetCursor {
            universe: self.universe,
            current: cur,
        })
    }
}

/// Advances `cur` (sorted, values in `base..base+n`) to its ≺-successor.
fn advance_combination(cur: &mut Vec<usize>, n: usize, base: usize) -> bool {
    let k = cur.len();
    // rightmost position that can still be bumped
    let mut i = k;
    while i > 0 {
        i -= 1;
        if cur[i] < base + n - (k - i) {
            cur[i] += 1;
            for j in i + 1..k {
                cur[j] = cur[j - 1] + 1;
            }
            return true;
        }
    }
    if k == n {
        return false;
    }
    cur.clear();
    cur.extend(base..base + k + 1);
    true
}

/// Iterator over all non-empty subsets of `{0, …, n-1}` in ≺ order, as bitmasks.
pub(crate) struct PrecOrder {
    n: usize,
    cur: Vec<usize>,
    done: bool,
}

impl PrecOrder {
    pub(crate) fn new(n: usize) -> Self {
        PrecOrder {
            n,
            cur: Vec::new(),
            done: n == 0,
        }
    }
}

impl Iterator for PrecOrder {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.done {
            return None;
        }
        if !advance_combination(&mut self.cur, self.n, 0) {
            self.done = true;
            return None;
        }
        Some(self.cur.iter().fold(0u64, |m, &v| m | (1 << v)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Direction {
    Add,
    Subtract,
}

fn check_cap(g: &Graph, limits: &Limits) -> Result<()> {
    let n = g.non_sink_count();
    let cap = limits.general_vertex_cap.min(63);
    if n > cap {
        return Err(SandpileError::TooManyVertices { n, cap });
    }
    Ok(())
}

/// Finds the ≺-minimal `A` with `c ± Δ_A` stable.
fn minimal_subset(
    g: &Graph,
    c: &Configuration,
    dir: Direction,
    limits: &Limits,
) -> Result<Option<(u64, Configuration)>> {
    require_stable(g, c)?;
    check_cap(g, limits)?;
    let n = g.non_sink_count();
    let masks: Vec<u64> = (0..n).map(|v| g.mask(v).expect("capped graph")).collect();
    let degrees: Vec<i64> = (1..=n).map(|v| g.degree(v) as i64).collect();
    let sign = match dir {
        Direction::Add => 1,
        Direction::Subtract => -1,
    };
    'subsets: for a in PrecOrder::new(n) {
        for v in 0..n {
            let inside = (a >> v) & 1 == 1;
            let into_a = (masks[v] & a).count_ones() as i64;
            let delta = if inside { degrees[v] } else { 0 } - into_a;
            let h = c.heights[v] + sign * delta;
            if h < 0 || h >= degrees[v] {
                continue 'subsets;
            }
        }
        let heights = (0..n)
            .map(|v| {
                let inside = (a >> v) & 1 == 1;
                let delta =
                    if inside { degrees[v] } else { 0 } - (masks[v] & a).count_ones() as i64;
                c.heights[v] + sign * delta
            })
            .collect();
        return Ok(Some((a, Configuration::new(heights))));
    }
    Ok(None)
}

fn mask_to_indices(a: u64) -> Vec<usize> {
    (0..64)
        .filter(|&v| (a >> v) & 1 == 1)
        .map(|v| v + 1)
        .collect()
}

/// ψ together with the 1-based subset `A` it used, if any.
pub fn psi_with_subset(
    g: &Graph,
    c: &Configuration,
    limits: &Limits,
) -> Result<(Configuration, Option<Vec<usize>>)> {
    Ok(match minimal_subset(g, c, Direction::Add, limits)? {
        Some((a, out)) => (out, Some(mask_to_indices(a))),
        None => (c.clone(), None),
    })
}

/// φ together with the 1-based subset `A` it used, if any.
pub fn phi_with_subset(
    g: &Graph,
    c: &Configuration,
    limits: &Limits,
) -> Result<(Configuration, Option<Vec<usize>>)> {
    Ok(match minimal_subset(g, c, Direction::Subtract, limits)? {
        Some((a, out)) => (out, Some(mask_to_indices(a))),
        None => (c.clone(), None),
    })
}

/// `c + Δ_A` for the ≺-minimal non-empty `A` keeping `c` stable; fixes
/// exactly the recurrent configurations.
pub fn psi(g: &Graph, c: &Configuration) -> Result<Configuration> {
    Ok(psi_with_subset(g, c, &Limits::default())?.0)
}

/// `c − Δ_A` for the ≺-minimal non-empty `A` keeping `c` stable; fixes
/// exactly the G-parking configurations.
pub fn phi(g: &Graph, c: &Configuration) -> Result<Configuration> {
    Ok(phi_with_subset(g, c, &Limits::default())?.0)
}

/// `β(c)_i = (d_i − 1) − c_i`.
pub fn beta(g: &Graph, c: &Configuration) -> Result<Configuration> {
    g.check_config(c)?;
    Ok(Configuration::new(
        c.heights
            .iter()
            .enumerate()
            .map(|(v, &h)| g.degree(v + 1) as i64 - 1 - h)
            .collect(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Recurrent,
    Parking,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalized {
    pub fixed_point: Configuration,
    pub steps: usize,
    /// Every configuration visited, starting with the input, when requested.
    pub trajectory: Option<Vec<Configuration>>,
}

/// Iterates ψ (towards the recurrent configuration) or φ (towards the parking
/// one) until a fixed point; the class of `c` is preserved throughout.
pub fn normalize(
    g: &Graph,
    c: &Configuration,
    target: Target,
    record_trajectory: bool,
    limits: &Limits,
) -> Result<Normalized> {
    require_stable(g, c)?;
    // Each step strictly moves in the <₂ order, so the walk never exceeds the
    // number of stable configurations.
    let bound: usize = (1..=g.non_sink_count())
        .map(|v| g.degree(v))
        .try_fold(1usize, |acc, d| acc.checked_mul(d))
        .unwrap_or(usize::MAX);
    let mut cur = c.clone();
    let mut trajectory = record_trajectory.then(|| vec![c.clone()]);
    let mut steps = 0;
    loop {
        let (next, subset) = match target {
            Target::Recurrent => psi_with_subset(g, &cur, limits)?,
            Target::Parking => phi_with_subset(g, &cur, limits)?,
        };
        if subset.is_none() {
            return Ok(Normalized {
                fixed_point: cur,
                steps,
                trajectory,
            });
        }
        steps += 1;
        if steps > bound {
            return Err(SandpileError::Internal(format!(
                "normalization exceeded {bound} steps"
            )));
        }
        debug_assert!(is_stable(g, &next));
        if let Some(t) = trajectory.as_mut() {
            t.push(next.clone());
        }
        cur = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_parking, is_recurrent};

    fn example_graph() -> Graph {
        Graph::new(
            7,
            &[
                (1, 2),
                (1, 3),
                (2, 3),
                (3, 4),
                (4, 5),
                (4, 6),
                (5, 6),
                (5, 7),
                (6, 7),
            ],
        )
        .unwrap()
    }

    fn cfg(h: &[i64]) -> Configuration {
        Configuration::new(h.to_vec())
    }

    #[test]
    fn cursor_follows_prec_order() {
        let start = SubsetCursor::start(3);
        let mut seen = Vec::new();
        let mut cur = start.next_subset();
        while let Some(c) = cur {
            seen.push(c.current.clone());
            cur = c.next_subset();
        }
        assert_eq!(
            seen,
            vec![
                vec![1],
                vec![2],
                vec![3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3],
                vec![1, 2, 3]
            ]
        );
        let after3 = SubsetCursor {
            universe: 3,
            current: vec![3],
        };
        assert_eq!(after3.next_subset().unwrap().current, vec![1, 2]);
        let full = SubsetCursor {
            universe: 3,
            current: vec![1, 2, 3],
        };
        assert!(full.next_subset().is_none());
        assert!(SubsetCursor::start(0).next_subset().is_none());
    }

    #[test]
    fn prec_order_masks_match_cursor() {
        for n in 0..7 {
            let masks: Vec<u64> = PrecOrder::new(n).collect();
            assert_eq!(masks.len(), (1usize << n) - 1);
            let mut cur = SubsetCursor::start(n).next_subset();
            for m in masks {
                let c = cur.unwrap();
                assert_eq!(mask_to_indices(m), c.current);
                cur = c.next_subset();
            }
            assert!(cur.is_none());
        }
    }

    #[test]
    fn psi_worked_example() {
        let g = example_graph();
        let l = Limits::default();
        let (out, a) = psi_with_subset(&g, &cfg(&[0, 0, 2, 0, 2, 2]), &l).unwrap();
        assert_eq!(out, cfg(&[1, 1, 0, 0, 2, 2]));
        assert_eq!(a, Some(vec![1, 2]));
        let (out, a) = psi_with_subset(&g, &cfg(&[1, 1, 0, 2, 0, 0]), &l).unwrap();
        assert_eq!(out, cfg(&[1, 1, 0, 0, 2, 2]));
        assert_eq!(a, Some(vec![5, 6]));
    }

    #[test]
    fn fixed_points() {
        let g = example_graph();
        let rec = cfg(&[1, 1, 2, 2, 2, 2]);
        assert!(is_recurrent(&g, &rec).unwrap());
        assert_eq!(psi(&g, &rec).unwrap(), rec);
        let zero = Configuration::zero(6);
        assert!(is_parking(&g, &zero).unwrap());
        assert_eq!(phi(&g, &zero).unwrap(), zero);
        let k11 = Graph::new(2, &[(1, 2)]).unwrap();
        assert_eq!(phi(&k11, &cfg(&[0])).unwrap(), cfg(&[0]));
    }

    #[test]
    fn rejects_unstable_and_oversized() {
        let g = example_graph();
        assert_eq!(
            psi(&g, &cfg(&[2, 0, 0, 0, 0, 0])),
            Err(SandpileError::NotStable)
        );
        assert_eq!(
            phi(&g, &cfg(&[0, 0, 0, 0, 0, -1])),
            Err(SandpileError::NotStable)
        );
        let tight = Limits {
            general_vertex_cap: 3,
            ..Limits::default()
        };
        assert_eq!(
            psi_with_subset(&g, &Configuration::zero(6), &tight),
            Err(SandpileError::TooManyVertices { n: 6, cap: 3 })
        );
    }

    #[test]
    fn beta_is_an_involution() {
        let g = example_graph();
        let c = cfg(&[0, 0, 2, 0, 2, 2]);
        assert_eq!(beta(&g, &c).unwrap(), cfg(&[1, 1, 0, 2, 0, 0]));
        assert_eq!(beta(&g, &beta(&g, &c).unwrap()).unwrap(), c);
        let delta = cfg(&[1, 1, 2, 2, 2, 2]);
        assert_eq!(beta(&g, &delta).unwrap(), Configuration::zero(6));
    }

    #[test]
    fn normalize_example() {
        let g = example_graph();
        let l = Limits::default();
        let c = cfg(&[0, 0, 2, 0, 2, 2]);
        let r = normalize(&g, &c, Target::Recurrent, true, &l).unwrap();
        assert!(is_recurrent(&g, &r.fixed_point).unwrap());
        let traj = r.trajectory.unwrap();
        assert_eq!(traj.len(), r.steps + 1);
        assert_eq!(traj[0], c);
        assert_eq!(traj[1], cfg(&[1, 1, 0, 0, 2, 2]));
        assert!(r.steps >= 2, "(1,1,0,0,2,2) is not recurrent");

        let rec = r.fixed_point.clone();
        let again = normalize(&g, &rec, Target::Recurrent, false, &l).unwrap();
        assert_eq!((again.fixed_point, again.steps), (rec, 0));
        let zero = Configuration::zero(6);
        let p = normalize(&g, &zero, Target::Parking, false, &l).unwrap();
        assert_eq!((p.fixed_point, p.steps), (zero, 0));
    }
}
