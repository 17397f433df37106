//! Graphs with a sink, configurations, toppling, stability, recurrence,
//! G-parking and the distance-profile order `<₂`.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SandpileError};

/// Wire form of a graph: `{"vertices": 7, "edges": [[1,2],...], "sink": 7}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
    pub sink: usize,
}

/// Undirected, connected, simple graph whose sink is the last vertex.
///
/// Internally vertices are 0-based; vertex `i` in the public API is index
/// `i - 1` here, and the sink is index `vertex_count - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    neighbours: Vec<Vec<usize>>,
    // Bitmask adjacency, only populated when vertex_count <= 64.
    masks: Vec<u64>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph from 1-based edges. The sink is vertex `vertex_count`.
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if vertex_count < 2 {
            return Err(SandpileError::InvalidGraph(
                "at least two vertices are required".into(),
            ));
        }
        let mut neighbours = vec![Vec::new(); vertex_count];
        let mut seen = std::collections::BTreeSet::new();
        for &(a, b) in edges {
            for v in [a, b] {
                if v == 0 || v > vertex_count {
                    return Err(SandpileError::VertexOutOfRange {
                        index: v,
                        count: vertex_count,
                    });
                }
            }
            if a == b {
                return Err(SandpileError::InvalidGraph(format!("self-loop at v{a}")));
            }
            let key = (a.min(b), a.max(b));
            if !seen.insert(key) {
                return Err(SandpileError::InvalidGraph(format!(
                    "multi-edge between v{} and v{}",
                    key.0, key.1
                )));
            }
            neighbours[a - 1].push(b - 1);
            neighbours[b - 1].push(a - 1);
        }
        for list in &mut neighbours {
            list.sort_unstable();
        }
        let masks = if vertex_count <= 64 {
            neighbours
                .iter()
                .map(|l| l.iter().fold(0u64, |m, &j| m | (1 << j)))
                .collect()
        } else {
            Vec::new()
        };
        let g = Graph {
            vertex_count,
            neighbours,
            masks,
            edges: seen.into_iter().collect(),
        };
        if let Some(v) = (0..vertex_count).find(|&v| g.neighbours[v].is_empty()) {
            return Err(SandpileError::InvalidGraph(format!(
                "v{} is isolated",
                v + 1
            )));
        }
        if g.bfs_distances().iter().any(Option::is_none) {
            return Err(SandpileError::InvalidGraph("graph is not connected".into()));
        }
        Ok(g)
    }

    pub fn from_spec(spec: &GraphSpec) -> Result<Self> {
        if spec.sink != spec.vertices {
            return Err(SandpileError::InvalidGraph(format!(
                "sink must be the last vertex v{}, got v{}",
                spec.vertices, spec.sink
            )));
        }
        let edges: Vec<_> = spec.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::new(spec.vertices, &edges)
    }

    pub fn to_spec(&self) -> GraphSpec {
        GraphSpec {
            vertices: self.vertex_count,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            sink: self.vertex_count,
        }
    }

    /// Complete graph `K_n`; the sink is `v_n`.
    pub fn complete(n: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for a in 1..=n {
            for b in a + 1..=n {
                edges.push((a, b));
            }
        }
        Graph::new(n, &edges)
    }

    /// Complete bipartite `K_{m,n}` labelled as `v_1..v_n` (non-sink side,
    /// degree `m`) and `v_{n+1}..v_{n+m}` (sink side, degree `n`), sink `v_{n+m}`.
    pub fn complete_bipartite(m: usize, n: usize) -> Result<Self> {
        let mut edges = Vec::with_capacity(m * n);
        for a in 1..=n {
            for b in n + 1..=n + m {
                edges.push((a, b));
            }
        }
        Graph::new(n + m, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Number of non-sink vertices.
    pub fn non_sink_count(&self) -> usize {
        self.vertex_count - 1
    }

    /// 1-based index of the sink.
    pub fn sink(&self) -> usize {
        self.vertex_count
    }

    /// Degree of the 1-based vertex `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.neighbours[v - 1].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.neighbours.iter().map(Vec::len).collect()
    }

    /// 1-based neighbours of the 1-based vertex `v`.
    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.neighbours[v - 1].iter().map(|&j| j + 1)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.neighbours[a - 1].binary_search(&(b - 1)).is_ok()
    }

    /// 1-based edge list with `a < b`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub(crate) fn neighbour_indices(&self, v0: usize) -> &[usize] {
        &self.neighbours[v0]
    }

    pub(crate) fn mask(&self, v0: usize) -> Option<u64> {
        self.masks.get(v0).copied()
    }

    /// BFS distances from the sink, 0-based vertex indices.
    fn bfs_distances(&self) -> Vec<Option<usize>> {
        let sink = self.vertex_count - 1;
        let mut dist = vec![None; self.vertex_count];
        dist[sink] = Some(0);
        let mut queue = VecDeque::from([sink]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for &w in &self.neighbours[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Distances of `v_1..v_n` (sink excluded) from the sink.
    pub fn sink_distances(&self) -> Vec<usize> {
        self.bfs_distances()
            .into_iter()
            .take(self.vertex_count - 1)
            .map(|d| d.expect("graph is connected"))
            .collect()
    }

    pub(crate) fn check_config(&self, c: &Configuration) -> Result<()> {
        if c.len() != self.non_sink_count() {
            return Err(SandpileError::LengthMismatch {
                expected: self.non_sink_count(),
                found: c.len(),
            });
        }
        Ok(())
    }
}

/// Heights of the non-sink vertices `v_1..v_n`; the sink height is immaterial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Configuration {
    pub heights: Vec<i64>,
}

impl Configuration {
    pub fn new(heights: Vec<i64>) -> Self {
        Configuration { heights }
    }

    pub fn zero(n: usize) -> Self {
        Configuration {
            heights: vec![0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.heights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heights.is_empty()
    }

    /// Sum of the non-sink heights.
    pub fn height(&self) -> i64 {
        self.heights.iter().sum()
    }
}

impl From<Vec<i64>> for Configuration {
    fn from(heights: Vec<i64>) -> Self {
        Configuration { heights }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for h in &self.heights {
            write!(f, "{h},")?;
        }
        write!(f, "*)")
    }
}

/// Grains per distance shell `(d_1, d_2, …)`; `d_0` (the sink) is omitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceProfile {
    pub counts: Vec<i64>,
}

fn check_index(g: &Graph, i: usize) -> Result<()> {
    if i == 0 || i > g.vertex_count() {
        return Err(SandpileError::VertexOutOfRange {
            index: i,
            count: g.vertex_count(),
        });
    }
    Ok(())
}

fn apply_toppling(g: &Graph, c: &Configuration, i: usize, sign: i64) -> Result<Configuration> {
    g.check_config(c)?;
    check_index(g, i)?;
    let mut out = c.clone();
    let v = i - 1;
    if i != g.sink() {
        out.heights[v] -= sign * g.degree(i) as i64;
    }
    for &w in g.neighbour_indices(v) {
        if w + 1 != g.sink() {
            out.heights[w] += sign;
        }
    }
    Ok(out)
}

/// `c − Δ_i`: vertex `i` sends one grain along each incident edge.
/// Toppling the sink only feeds its neighbours.
pub fn topple(g: &Graph, c: &Configuration, i: usize) -> Result<Configuration> {
    apply_toppling(g, c, i, 1)
}

/// `c + Δ_i`, the inverse of [`topple`].
pub fn untopple(g: &Graph, c: &Configuration, i: usize) -> Result<Configuration> {
    apply_toppling(g, c, i, -1)
}

/// `0 ≤ c_i ≤ d_i − 1` on every non-sink vertex.
pub fn is_stable(g: &Graph, c: &Configuration) -> bool {
    c.len() == g.non_sink_count()
        && c.heights
            .iter()
            .enumerate()
            .all(|(v, &h)| h >= 0 && h < g.degree(v + 1) as i64)
}

pub(crate) fn require_stable(g: &Graph, c: &Configuration) -> Result<()> {
    g.check_config(c)?;
    if !is_stable(g, c) {
        return Err(SandpileError::NotStable);
    }
    Ok(())
}

/// Burning test: topple the sink, then greedily topple any non-sink vertex
/// holding at least its degree. By confluence the greedy order is as good as
/// any other, so `c` is recurrent iff every vertex gets toppled.
pub fn is_recurrent(g: &Graph, c: &Configuration) -> Result<bool> {
    require_stable(g, c)?;
    let n = g.non_sink_count();
    let mut h = topple(g, c, g.sink())?.heights;
    let mut burnt = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&v| h[v] >= g.degree(v + 1) as i64).collect();
    let mut count = 0;
    while let Some(v) = stack.pop() {
        if burnt[v] {
            continue;
        }
        burnt[v] = true;
        count += 1;
        h[v] -= g.degree(v + 1) as i64;
        for &w in g.neighbour_indices(v) {
            if w < n && !burnt[w] {
                h[w] += 1;
                if h[w] == g.degree(w + 1) as i64 {
                    stack.push(w);
                }
            }
        }
    }
    Ok(count == n)
}

/// G-parking test by pruning: starting from all non-sink vertices, repeatedly
/// drop a vertex whose height is below its number of edges leaving the
/// surviving set (sink included). The survivors form the largest `A` with
/// `c − Δ_A` non-negative, so `c` is parking iff nothing survives.
pub fn is_parking(g: &Graph, c: &Configuration) -> Result<bool> {
    require_stable(g, c)?;
    let n = g.non_sink_count();
    let mut alive = vec![true; n];
    // outside[v] = edges from v to the sink or to removed vertices
    let mut outside: Vec<i64> = (0..n)
        .map(|v| g.neighbour_indices(v).iter().filter(|&&w| w == n).count() as i64)
        .collect();
    let mut stack: Vec<usize> = (0..n).filter(|&v| c.heights[v] < outside[v]).collect();
    let mut removed = 0;
    while let Some(v) = stack.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        removed += 1;
        for &w in g.neighbour_indices(v) {
            if w < n && alive[w] {
                outside[w] += 1;
                if c.heights[w] < outside[w] {
                    stack.push(w);
                }
            }
        }
    }
    Ok(removed == n)
}

/// Sums heights per BFS shell around the sink.
pub fn distance_profile(g: &Graph, c: &Configuration) -> Result<DistanceProfile> {
    g.check_config(c)?;
    let dist = g.sink_distances();
    let ecc = dist.iter().copied().max().unwrap_or(0);
    let mut counts = vec![0i64; ecc];
    for (v, &d) in dist.iter().enumerate() {
        counts[d - 1] += c.heights[v];
    }
    Ok(DistanceProfile { counts })
}

/// The order `<₂`: lexicographic comparison of distance profiles.
pub fn compare_lt2(g: &Graph, c: &Configuration, other: &Configuration) -> Result<Ordering> {
    let a = distance_profile(g, c)?;
    let b = distance_profile(g, other)?;
    Ok(a.counts.cmp(&b.counts))
}

/// Every stable configuration of `g`, in lexicographic order of heights.
pub fn stable_configurations(g: &Graph) -> Vec<Configuration> {
    let degrees: Vec<i64> = g.degrees()[..g.non_sink_count()]
        .iter()
        .map(|&d| d as i64)
        .collect();
    let mut out = Vec::new();
    let mut cur = vec![0i64; degrees.len()];
    loop {
        out.push(Configuration::new(cur.clone()));
        let mut k = degrees.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] < degrees[k] {
                break;
            }
            cur[k] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn example_graph() -> Graph {
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
    fn rejects_malformed_graphs() {
        assert!(matches!(
            Graph::new(3, &[(1, 1), (1, 3)]),
            Err(SandpileError::InvalidGraph(_))
        ));
        assert!(matches!(
            Graph::new(3, &[(1, 2), (2, 1), (2, 3)]),
            Err(SandpileError::InvalidGraph(_))
        ));
        assert!(matches!(
            Graph::new(4, &[(1, 2), (3, 4)]),
            Err(SandpileError::InvalidGraph(_))
        ));
        assert!(matches!(
            Graph::new(3, &[(1, 4)]),
            Err(SandpileError::VertexOutOfRange { index: 4, count: 3 })
        ));
        let spec = GraphSpec {
            vertices: 3,
            edges: vec![[1, 2], [2, 3]],
            sink: 1,
        };
        assert!(Graph::from_spec(&spec).is_err());
    }

    #[test]
    fn example_degrees() {
        assert_eq!(example_graph().degrees(), vec![2, 2, 3, 3, 3, 3, 2]);
    }

    #[test]
    fn topple_example() {
        let g = example_graph();
        let c = cfg(&[0, 0, 2, 0, 2, 2]);
        assert_eq!(topple(&g, &c, 5).unwrap(), cfg(&[0, 0, 2, 1, -1, 3]));
        let back = untopple(&g, &topple(&g, &c, 7).unwrap(), 7).unwrap();
        assert_eq!(back, c);
        assert!(matches!(
            topple(&g, &c, 8),
            Err(SandpileError::VertexOutOfRange { .. })
        ));
        assert!(topple(&g, &c, 0).is_err());
    }

    #[test]
    fn sink_topple_single_edge() {
        let g = Graph::new(2, &[(1, 2)]).unwrap();
        assert_eq!(topple(&g, &cfg(&[0]), 2).unwrap(), cfg(&[1]));
    }

    #[test]
    fn stability() {
        let g = example_graph();
        assert!(is_stable(&g, &cfg(&[0, 0, 2, 0, 2, 2])));
        assert!(!is_stable(&g, &cfg(&[0, 0, 2, 1, -1, 3])));
        assert!(is_stable(&g, &Configuration::zero(6)));
        assert!(!is_stable(&g, &Configuration::zero(5)));
    }

    #[test]
    fn recurrence_and_parking_on_example() {
        let g = example_graph();
        // v4 only ever receives two grains from v5 and v6, short of its degree 3.
        assert!(!is_recurrent(&g, &cfg(&[1, 1, 0, 0, 2, 2])).unwrap());
        assert!(!is_recurrent(&g, &cfg(&[0, 0, 2, 0, 2, 2])).unwrap());
        assert!(is_recurrent(&g, &cfg(&[1, 1, 2, 2, 2, 2])).unwrap());
        assert!(is_parking(&g, &Configuration::zero(6)).unwrap());
        assert!(!is_parking(&g, &cfg(&[1, 1, 0, 0, 2, 2])).unwrap());
        assert_eq!(
            is_recurrent(&g, &cfg(&[3, 0, 0, 0, 0, 0])),
            Err(SandpileError::NotStable)
        );
        assert_eq!(
            is_parking(&g, &cfg(&[-1, 0, 0, 0, 0, 0])),
            Err(SandpileError::NotStable)
        );
    }

    #[test]
    fn tiny_graphs() {
        let k11 = Graph::new(2, &[(1, 2)]).unwrap();
        assert!(is_parking(&k11, &cfg(&[0])).unwrap());
        assert!(is_recurrent(&k11, &cfg(&[0])).unwrap());
        assert_eq!(distance_profile(&k11, &cfg(&[0])).unwrap().counts, vec![0]);
        let k22 = Graph::complete_bipartite(2, 2).unwrap();
        assert!(is_recurrent(&k22, &cfg(&[1, 1, 1])).unwrap());
    }

    #[test]
    fn distance_profiles() {
        let g = example_graph();
        assert_eq!(g.sink_distances(), vec![4, 4, 3, 2, 1, 1]);
        let a = cfg(&[0, 0, 2, 0, 2, 2]);
        let b = cfg(&[1, 1, 0, 0, 2, 2]);
        assert_eq!(distance_profile(&g, &a).unwrap().counts, vec![4, 0, 2, 0]);
        assert_eq!(distance_profile(&g, &b).unwrap().counts, vec![4, 0, 0, 2]);
        assert_eq!(compare_lt2(&g, &b, &a).unwrap(), Ordering::Less);
        assert_eq!(compare_lt2(&g, &a, &a).unwrap(), Ordering::Equal);
        assert!(distance_profile(&g, &Configuration::zero(6))
            .unwrap()
            .counts
            .iter()
            .all(|&d| d == 0));
    }

    #[test]
    fn counts_stable_configurations() {
        let g = example_graph();
        assert_eq!(stable_configurations(&g).len(), 2 * 2 * 3 * 3 * 3 * 3);
        assert!(stable_configurations(&g).iter().all(|c| is_stable(&g, c)));
    }

    #[test]
    fn display_marks_sink() {
        assert_eq!(cfg(&[0, 2]).to_string(), "(0,2,*)");
    }
}
