//! Slow, definition-level oracles and fixed graph families.
//!
//! Everything here is written straight from the definitions, without the
//! shortcuts used by the fast code paths, so the two can be compared.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bipartite::SortedBipartiteConfig;
use crate::error::Result;
use crate::graph::{is_stable, topple, untopple, Configuration, Graph};

/// Recurrence by trying every order of the non-sink vertices: after the sink
/// topples, some order must allow each vertex to topple once while holding at
/// least its degree.
pub fn recurrent_by_orders(g: &Graph, c: &Configuration) -> Result<bool> {
    let start = topple(g, c, g.sink())?;
    let n = g.non_sink_count();
    fn search(g: &Graph, c: &Configuration, used: &mut Vec<bool>, left: usize) -> Result<bool> {
        if left == 0 {
            return Ok(true);
        }
        for v in 0..used.len() {
            if !used[v] && c.heights[v] >= g.degree(v + 1) as i64 {
                used[v] = true;
                let next = topple(g, c, v + 1)?;
                if search(g, &next, used, left - 1)? {
                    return Ok(true);
                }
                used[v] = false;
            }
        }
        Ok(false)
    }
    search(g, &start, &mut vec![false; n], n)
}

/// All non-empty subsets of `{1..n}` in ≺ order: by size, then lexicographically.
pub fn subsets_in_order(n: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = (1u64..(1 << n))
        .map(|mask| (1..=n).filter(|v| mask >> (v - 1) & 1 == 1).collect())
        .collect();
    all.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    all
}

/// `c − Δ_A` (`sign = 1`) or `c + Δ_A` (`sign = −1`) by toppling each member.
pub fn cluster_topple(
    g: &Graph,
    c: &Configuration,
    a: &[usize],
    sign: i8,
) -> Result<Configuration> {
    let mut cur = c.clone();
    for &v in a {
        cur = if sign > 0 {
            topple(g, &cur, v)?
        } else {
            untopple(g, &cur, v)?
        };
    }
    Ok(cur)
}

/// G-parking by definition: every `c − Δ_A` has a negative entry.
pub fn parking_by_subsets(g: &Graph, c: &Configuration) -> Result<bool> {
    for a in subsets_in_order(g.non_sink_count()) {
        if cluster_topple(g, c, &a, 1)?.heights.iter().all(|&h| h >= 0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// ψ by a plain scan of the ≺ list; returns `c` when no subset works.
pub fn psi_by_scan(g: &Graph, c: &Configuration) -> Result<(Configuration, Option<Vec<usize>>)> {
    scan(g, c, -1)
}

/// φ by a plain scan of the ≺ list; returns `c` when no subset works.
pub fn phi_by_scan(g: &Graph, c: &Configuration) -> Result<(Configuration, Option<Vec<usize>>)> {
    scan(g, c, 1)
}

fn scan(g: &Graph, c: &Configuration, sign: i8) -> Result<(Configuration, Option<Vec<usize>>)> {
    for a in subsets_in_order(g.non_sink_count()) {
        let d = cluster_topple(g, c, &a, sign)?;
        if is_stable(g, &d) {
            return Ok((d, Some(a)));
        }
    }
    Ok((c.clone(), None))
}

/// The reduced Laplacian: rows and columns of the non-sink vertices.
#[allow(clippy::needless_range_loop)]
pub fn reduced_laplacian(g: &Graph) -> Vec<Vec<i64>> {
    let n = g.non_sink_count();
    let mut l = vec![vec![0i64; n]; n];
    for (i, row) in l.iter_mut().enumerate() {
        row[i] = g.degree(i + 1) as i64;
        for j in 0..n {
            if j != i && g.has_edge(i + 1, j + 1) {
                row[j] = -1;
            }
        }
    }
    l
}

/// Exact integer determinant by fraction-free (Bareiss) elimination.
pub fn determinant(matrix: &[Vec<i64>]) -> i64 {
    let n = matrix.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = matrix
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}

#[allow(clippy::needless_range_loop)]
fn adjugate(matrix: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = matrix.len();
    let mut adj = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i64>> = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| matrix[r][c]).collect())
                .collect();
            let cof = determinant(&minor) * if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[j][i] = cof;
        }
    }
    adj
}

/// Invariant of the toppling class: `adj(L)·c mod det(L)`.
///
/// Two configurations differ by an integer combination of Laplacian rows iff
/// `L⁻¹(c − c′)` is integral, i.e. iff their keys agree.
pub struct ClassKey {
    adj: Vec<Vec<i64>>,
    det: i64,
}

impl ClassKey {
    pub fn new(g: &Graph) -> ClassKey {
        let l = reduced_laplacian(g);
        ClassKey {
            det: determinant(&l),
            adj: adjugate(&l),
        }
    }

    /// Number of toppling classes, `det L`.
    pub fn class_count(&self) -> i64 {
        self.det
    }

    pub fn key(&self, c: &Configuration) -> Vec<i64> {
        self.adj
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&c.heights)
                    .map(|(a, h)| a * h)
                    .sum::<i64>()
                    .rem_euclid(self.det)
            })
            .collect()
    }
}

/// Topples one vertex of `K_{m,n}` on the general graph and sorts the result.
/// `sink_side = false` topples `v_n`, `true` topples `v_{n+m−1}`.
pub fn topple_and_sort(
    c: &SortedBipartiteConfig,
    sink_side: bool,
) -> Result<SortedBipartiteConfig> {
    let (m, n) = (c.m(), c.n());
    let g = Graph::complete_bipartite(m, n)?;
    let v = if sink_side { n + m - 1 } else { n };
    let out = topple(&g, &c.to_configuration(), v)?;
    SortedBipartiteConfig::from_configuration(m, n, &out)
}

/// All connected labelled graphs on `vertices` vertices, sink last.
pub fn connected_graphs(vertices: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (1..=vertices)
        .flat_map(|a| (a + 1..=vertices).map(move |b| (a, b)))
        .collect();
    (0u64..1 << pairs.len())
        .filter_map(|mask| {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            Graph::new(vertices, &edges).ok()
        })
        .collect()
}

/// The seven-vertex graph of the worked example.
pub fn example_graph() -> Graph {
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
    .expect("valid graph")
}

fn cycle(n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (1..=n).map(|i| (i, i % n + 1)).collect();
    Graph::new(n, &edges).expect("valid graph")
}

fn path(n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i, i + 1)).collect();
    Graph::new(n, &edges).expect("valid graph")
}

fn wheel(rim: usize) -> Graph {
    let hub = rim + 1;
    let mut edges: Vec<(usize, usize)> = (1..=rim).map(|i| (i, i % rim + 1)).collect();
    edges.extend((1..=rim).map(|i| (i, hub)));
    Graph::new(hub, &edges).expect("valid graph")
}

/// A connected graph on `vertices` vertices: a random spanning tree plus
/// extra edges, each kept with probability one half.
pub fn random_connected_graph(vertices: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for v in 2..=vertices {
        edges.push((rng.gen_range(1..v), v));
    }
    for a in 1..=vertices {
        for b in a + 1..=vertices {
            if !edges.contains(&(a, b)) && rng.gen_bool(0.5) {
                edges.push((a, b));
            }
        }
    }
    Graph::new(vertices, &edges).expect("spanning tree keeps the graph connected")
}

/// Named graphs on five and six vertices, sink last.
pub fn named_graphs() -> Vec<(&'static str, Graph)> {
    vec![
        ("K5", Graph::complete(5).expect("valid")),
        ("K6", Graph::complete(6).expect("valid")),
        ("C5", cycle(5)),
        ("C6", cycle(6)),
        ("P6", path(6)),
        ("W5", wheel(5)),
        ("K2,3", Graph::complete_bipartite(2, 3).expect("valid")),
        ("K3,3", Graph::complete_bipartite(3, 3).expect("valid")),
        ("K3,2", Graph::complete_bipartite(3, 2).expect("valid")),
    ]
}

/// Every connected graph on 2 to 4 vertices, the named graphs, and eight
/// seeded random graphs on 6 vertices: all have at most five non-sink vertices.
pub fn small_graph_family() -> Vec<Graph> {
    let mut out: Vec<Graph> = (2..=4).flat_map(connected_graphs).collect();
    out.extend(named_graphs().into_iter().map(|(_, g)| g));
    out.extend((0..8).map(|seed| random_connected_graph(6, seed)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_connected_graphs() {
        assert_eq!(connected_graphs(2).len(), 1);
        assert_eq!(connected_graphs(3).len(), 4);
        assert_eq!(connected_graphs(4).len(), 38);
        assert!(small_graph_family().iter().all(|g| g.non_sink_count() <= 5));
    }

    #[test]
    fn determinant_and_classes() {
        // spanning trees: K4 has 16, C5 has 5, K_{2,3} has 12
        assert_eq!(
            ClassKey::new(&Graph::complete(4).unwrap()).class_count(),
            16
        );
        assert_eq!(ClassKey::new(&cycle(5)).class_count(), 5);
        assert_eq!(
            ClassKey::new(&Graph::complete_bipartite(2, 3).unwrap()).class_count(),
            12
        );
        let g = example_graph();
        let keys = ClassKey::new(&g);
        let c = Configuration::new(vec![0, 0, 2, 0, 2, 2]);
        let toppled = topple(&g, &c, 3).unwrap();
        assert_eq!(keys.key(&c), keys.key(&toppled));
        let bumped = Configuration::new(vec![1, 0, 2, 0, 2, 2]);
        assert_ne!(keys.key(&c), keys.key(&bumped));
    }

    #[test]
    fn ordered_subsets() {
        let s = subsets_in_order(3);
        assert_eq!(s[0], vec![1]);
        assert_eq!(s[3], vec![1, 2]);
        assert_eq!(s[6], vec![1, 2, 3]);
        assert_eq!(s.len(), 7);
    }
}
