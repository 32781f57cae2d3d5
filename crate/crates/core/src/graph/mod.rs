//! Finite simple graphs with dense vertex ids, plus the distance, ball and
//! small-structure utilities the rest of the crate is built on.

mod io;
mod iso;

pub use io::{parse_edge_list, write_edge_list};
pub use iso::{isomorphic, match_rooted, rooted_isomorphic};

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite simple undirected graph in sorted adjacency-list form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            labels: None,
        }
    }

    /// Builds a graph from an edge list. Duplicate edges are merged; loops
    /// and out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Inserts `{u, v}`; returns `false` if the edge was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        let n = self.adj.len();
        if u >= n {
            return Err(Error::InvalidVertex(u, n));
        }
        if v >= n {
            return Err(Error::InvalidVertex(v, n));
        }
        if u == v {
            return Err(Error::Loop(u));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                Ok(true)
            }
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.adj.len(), "one label per vertex");
        self.labels = Some(labels);
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of `v`, falling back to the numeric id.
    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// The common degree if the graph is regular (`Some(0)` for the empty graph).
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first().map_or(0, Vec::len);
        self.adj.iter().all(|nb| nb.len() == d).then_some(d)
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.adj.len() {
            Ok(())
        } else {
            Err(Error::InvalidVertex(v, self.adj.len()))
        }
    }

    /// Sorted intersection of the neighbourhoods of `a` and `b`.
    pub fn common_neighbors(&self, a: usize, b: usize) -> Vec<usize> {
        self.common_neighbors_iter(a, b).collect()
    }

    pub fn common_neighbors_iter(&self, a: usize, b: usize) -> impl Iterator<Item = usize> + '_ {
        let (x, y) = (&self.adj[a], &self.adj[b]);
        let (mut i, mut j) = (0, 0);
        std::iter::from_fn(move || {
            while i < x.len() && j < y.len() {
                match x[i].cmp(&y[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        i += 1;
                        j += 1;
                        return Some(x[i - 1]);
                    }
                }
            }
            None
        })
    }

    /// BFS distances from `src`; `None` marks unreachable vertices.
    pub fn bfs_distances(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.adj.len()];
        let mut queue = VecDeque::new();
        dist[src] = Some(0);
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.adj.is_empty() || self.bfs_distances(0).iter().all(Option::is_some)
    }

    /// Diameter, or `None` if the graph is disconnected or empty.
    pub fn diameter(&self) -> Option<usize> {
        if self.adj.is_empty() {
            return None;
        }
        let mut best = 0;
        for v in 0..self.adj.len() {
            for d in self.bfs_distances(v) {
                best = best.max(d?);
            }
        }
        Some(best)
    }

    /// Subgraph induced by `verts` (new ids follow the order of `verts`).
    pub fn induced_subgraph(&self, verts: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.adj.len()];
        for (i, &v) in verts.iter().enumerate() {
            index[v] = i;
        }
        let mut g = Graph::empty(verts.len());
        for (i, &v) in verts.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = index[w];
                if j != usize::MAX && i < j {
                    g.adj[i].push(j);
                    g.adj[j].push(i);
                }
            }
        }
        for nb in &mut g.adj {
            nb.sort_unstable();
        }
        g
    }
}

/// Shortest-path length between `u` and `v`; `None` when they lie in
/// different components.
pub fn distance(g: &Graph, u: usize, v: usize) -> Result<Option<usize>> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    Ok(g.bfs_distances(u)[v])
}

/// Whether edges between two vertices at the maximal depth are kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BallMode {
    /// `Link_r`: the full induced subgraph on the ball.
    Full,
    /// `Link_r^-`: edges joining two radius-`r` vertices are dropped.
    Minus,
}

/// Radius-`r` ball around a root, re-indexed so that the root is vertex 0 and
/// vertices appear in BFS order.
#[derive(Clone, Debug)]
pub struct RootedBall {
    pub radius: usize,
    pub mode: BallMode,
    pub graph: Graph,
    pub depth: Vec<usize>,
    /// Ball vertex id -> vertex id in the source graph.
    pub origin: Vec<usize>,
}

impl RootedBall {
    pub const ROOT: usize = 0;

    pub fn root_in_source(&self) -> usize {
        self.origin[0]
    }

    /// Number of vertices at each depth `0..=radius`.
    pub fn layer_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.radius + 1];
        for &d in &self.depth {
            sizes[d] += 1;
        }
        sizes
    }
}

pub fn extract_ball(g: &Graph, v: usize, r: usize, mode: BallMode) -> Result<RootedBall> {
    g.check_vertex(v)?;
    let mut index = vec![usize::MAX; g.vertex_count()];
    let mut origin = vec![v];
    let mut depth = vec![0];
    index[v] = 0;
    let mut head = 0;
    while head < origin.len() {
        let u = origin[head];
        let du = depth[head];
        head += 1;
        if du == r {
            continue;
        }
        for &w in g.neighbors(u) {
            if index[w] == usize::MAX {
                index[w] = origin.len();
                origin.push(w);
                depth.push(du + 1);
            }
        }
    }
    let mut ball = Graph::empty(origin.len());
    for (i, &u) in origin.iter().enumerate() {
        for &w in g.neighbors(u) {
            let j = index[w];
            if j == usize::MAX || j <= i {
                continue;
            }
            if mode == BallMode::Minus && depth[i] == r && depth[j] == r {
                continue;
            }
            ball.adj[i].push(j);
            ball.adj[j].push(i);
        }
    }
    for nb in &mut ball.adj {
        nb.sort_unstable();
    }
    Ok(RootedBall {
        radius: r,
        mode,
        graph: ball,
        depth,
        origin,
    })
}

/// Outcome of a 2-colouring attempt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bipartition {
    /// `colour[v]` is `false` or `true`.
    Bipartite(Vec<bool>),
    /// An odd cycle, listed as consecutive vertices.
    OddCycle(Vec<usize>),
}

impl Bipartition {
    pub fn is_bipartite(&self) -> bool {
        matches!(self, Bipartition::Bipartite(_))
    }
}

pub fn is_bipartite(g: &Graph) -> Bipartition {
    let n = g.vertex_count();
    let mut parent = vec![usize::MAX; n];
    let mut dist = vec![usize::MAX; n];
    for s in 0..n {
        if dist[s] != usize::MAX {
            continue;
        }
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if dist[w] % 2 == dist[u] % 2 {
                    return Bipartition::OddCycle(tree_cycle(&parent, &dist, u, w));
                }
            }
        }
    }
    Bipartition::Bipartite(dist.iter().map(|d| d % 2 == 1).collect())
}

// Closes the BFS-tree paths from `u` and `w` at their lowest common ancestor.
fn tree_cycle(parent: &[usize], dist: &[usize], mut u: usize, mut w: usize) -> Vec<usize> {
    let mut left = vec![u];
    let mut right = vec![w];
    while dist[u] > dist[w] {
        u = parent[u];
        left.push(u);
    }
    while dist[w] > dist[u] {
        w = parent[w];
        right.push(w);
    }
    while u != w {
        u = parent[u];
        w = parent[w];
        left.push(u);
        right.push(w);
    }
    right.pop();
    left.extend(right.into_iter().rev());
    left
}

/// Length of a shortest cycle, `None` for forests.
pub fn girth(g: &Graph) -> Option<usize> {
    let n = g.vertex_count();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    for s in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if let Some(b) = best {
                if 2 * dist[u] >= b {
                    break;
                }
            }
            for &w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    let len = dist[u] + dist[w] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

/// All 4-cycles, each exactly once, as `[a, b, c, d]` with `a` the least
/// vertex and `b < d` (least rotation of the least orientation).
pub fn enumerate_4cycles(g: &Graph) -> Vec<[usize; 4]> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    for a in 0..n {
        for c in (a + 1)..n {
            let common: Vec<usize> = g
                .common_neighbors(a, c)
                .into_iter()
                .filter(|&x| x > a)
                .collect();
            for i in 0..common.len() {
                for j in (i + 1)..common.len() {
                    out.push([a, common[i], c, common[j]]);
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Canonical form of a 4-cycle given in any rotation or orientation.
pub fn canonical_4cycle(c: [usize; 4]) -> [usize; 4] {
    let k = (0..4).min_by_key(|&i| c[i]).unwrap();
    let a = c[k];
    let (p, q) = (c[(k + 1) % 4], c[(k + 3) % 4]);
    [a, p.min(q), c[(k + 2) % 4], p.max(q)]
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))).unwrap()
    }

    #[test]
    fn distance_basics() {
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(distance(&path, 0, 2).unwrap(), Some(2));
        assert_eq!(distance(&path, 1, 1).unwrap(), Some(0));
        let two = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(distance(&two, 0, 2).unwrap(), None);
        assert!(matches!(distance(&two, 0, 9), Err(Error::InvalidVertex(9, 4))));
    }

    #[test]
    fn rejects_loops_and_merges_duplicates() {
        assert!(matches!(Graph::from_edges(2, [(1, 1)]), Err(Error::Loop(1))));
        let g = Graph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn c5_balls() {
        let c5 = cycle(5);
        let full = extract_ball(&c5, 0, 2, BallMode::Full).unwrap();
        assert_eq!(full.graph.vertex_count(), 5);
        assert_eq!(full.graph.edge_count(), 5);
        let minus = extract_ball(&c5, 0, 2, BallMode::Minus).unwrap();
        assert_eq!(minus.graph.edge_count(), 4);
        assert_eq!(minus.graph.regular_degree(), None);
        // a path: two vertices of degree 1
        let leaves = (0..5).filter(|&v| minus.graph.degree(v) == 1).count();
        assert_eq!(leaves, 2);
        assert!(minus.graph.is_connected());
    }

    #[test]
    fn bipartite_and_witness() {
        assert!(is_bipartite(&cycle(4)).is_bipartite());
        match is_bipartite(&cycle(5)) {
            Bipartition::OddCycle(c) => {
                assert_eq!(c.len(), 5);
                let g = cycle(5);
                for i in 0..c.len() {
                    assert!(g.has_edge(c[i], c[(i + 1) % c.len()]));
                }
            }
            other => panic!("expected odd cycle, got {other:?}"),
        }
    }

    #[test]
    fn girth_small() {
        assert_eq!(girth(&cycle(7)), Some(7));
        assert_eq!(girth(&complete(4)), Some(3));
        assert_eq!(girth(&Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap()), None);
    }

    #[test]
    fn four_cycles_small() {
        assert_eq!(enumerate_4cycles(&cycle(4)), vec![[0, 1, 2, 3]]);
        assert_eq!(enumerate_4cycles(&complete(4)).len(), 3);
        assert_eq!(canonical_4cycle([2, 1, 0, 3]), [0, 1, 2, 3]);
        assert_eq!(canonical_4cycle([3, 0, 1, 2]), [0, 1, 2, 3]);
    }
}
