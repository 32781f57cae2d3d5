//! Local comparison with the lattice graph: opposite pairs, rooted-ball
//! checks for (weak) `r`-locality and the locally-grid condition.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{extract_ball, match_rooted, BallMode, Graph, RootedBall};
use crate::lattice::unit_steps;

/// Partition of the neighbourhood of `center` into `d` opposite pairs.
/// Pairs are sorted by their smaller vertex, which comes first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OppositePartition {
    pub center: usize,
    pub pairs: Vec<(usize, usize)>,
}

/// Opposite pairs are neighbours of `v` whose only common neighbour is `v`;
/// every cross pair must have exactly one further common neighbour, and all
/// those further neighbours must be distinct.
pub fn opposite_partition(g: &Graph, v: usize, d: usize) -> Result<Option<OppositePartition>> {
    g.check_vertex(v)?;
    if g.degree(v) != 2 * d {
        return Err(Error::DegreeMismatch {
            vertex: v,
            degree: g.degree(v),
            expected: 2 * d,
        });
    }
    let nb = g.neighbors(v);
    let n = nb.len();
    let mut partner = vec![usize::MAX; n];
    let mut extras = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let common = g.common_neighbors(nb[i], nb[j]);
            debug_assert!(common.contains(&v));
            match common.len() {
                1 => {
                    if partner[i] != usize::MAX || partner[j] != usize::MAX {
                        return Ok(None);
                    }
                    partner[i] = j;
                    partner[j] = i;
                }
                2 => extras.extend(common.into_iter().filter(|&c| c != v)),
                _ => return Ok(None),
            }
        }
    }
    if partner.contains(&usize::MAX) {
        return Ok(None);
    }
    let expected_extras = 4 * d * (d - 1) / 2;
    if extras.len() != expected_extras {
        return Ok(None);
    }
    extras.sort_unstable();
    if extras.windows(2).any(|w| w[0] == w[1]) {
        return Ok(None);
    }
    let pairs = (0..n)
        .filter(|&i| i < partner[i])
        .map(|i| (nb[i], nb[partner[i]]))
        .collect();
    Ok(Some(OppositePartition { center: v, pairs }))
}

/// The ball of radius `r` about the origin of `L^d`, in BFS order, together
/// with the lattice point of each ball vertex.
pub fn lattice_ball(d: usize, r: usize, mode: BallMode) -> (RootedBall, Vec<Vec<i64>>) {
    let steps = unit_steps(d);
    let mut points = vec![vec![0i64; d]];
    let mut depth = vec![0usize];
    let mut index: HashMap<Vec<i64>, usize> = HashMap::from([(vec![0; d], 0)]);
    let mut head = 0;
    while head < points.len() {
        let x = points[head].clone();
        let dx = depth[head];
        head += 1;
        if dx == r {
            continue;
        }
        for u in &steps {
            let y: Vec<i64> = x.iter().zip(u).map(|(a, b)| a + b).collect();
            if !index.contains_key(&y) {
                index.insert(y.clone(), points.len());
                points.push(y);
                depth.push(dx + 1);
            }
        }
    }
    let mut edges = Vec::new();
    for (i, x) in points.iter().enumerate() {
        for u in &steps {
            let y: Vec<i64> = x.iter().zip(u).map(|(a, b)| a + b).collect();
            if let Some(&j) = index.get(&y) {
                if i < j && !(mode == BallMode::Minus && depth[i] == r && depth[j] == r) {
                    edges.push((i, j));
                }
            }
        }
    }
    let n = points.len();
    let ball = RootedBall {
        radius: r,
        mode,
        graph: Graph::from_edges(n, edges).expect("lattice ball edges are valid"),
        depth,
        origin: (0..n).collect(),
    };
    (ball, points)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalityVerdict {
    pub holds: bool,
    /// Least vertex whose ball differs from the lattice ball.
    pub failing_vertex: Option<usize>,
}

/// Reference ball of `L^d` with the precomputed data used for pruning.
pub struct LatticeProbe {
    d: usize,
    r: usize,
    mode: BallMode,
    ball: RootedBall,
    layers: Vec<usize>,
    degree_profile: Vec<Vec<usize>>,
    /// Ball ids of `+e_i` and `-e_i`.
    axis: Vec<(usize, usize)>,
}

impl LatticeProbe {
    pub fn new(d: usize, r: usize, mode: BallMode) -> Self {
        let (ball, points) = lattice_ball(d, r, mode);
        let layers = ball.layer_sizes();
        let degree_profile = degree_profile(&ball);
        let axis = if r >= 1 {
            (0..d)
                .map(|i| {
                    let find = |s: i64| {
                        points
                            .iter()
                            .position(|p| p.iter().enumerate().all(|(k, &c)| c == if k == i { s } else { 0 }))
                            .unwrap()
                    };
                    (find(1), find(-1))
                })
                .collect()
        } else {
            Vec::new()
        };
        LatticeProbe {
            d,
            r,
            mode,
            ball,
            layers,
            degree_profile,
            axis,
        }
    }

    pub fn ball(&self) -> &RootedBall {
        &self.ball
    }

    /// Whether the ball of `g` at `v` is root-isomorphic to the lattice ball.
    pub fn matches(&self, g: &Graph, v: usize) -> bool {
        if g.degree(v) != 2 * self.d {
            return false;
        }
        let Ok(ball) = extract_ball(g, v, self.r, self.mode) else {
            return false;
        };
        if ball.layer_sizes() != self.layers
            || ball.graph.edge_count() != self.ball.graph.edge_count()
            || degree_profile(&ball) != self.degree_profile
        {
            return false;
        }
        let mut seed = vec![(RootedBall::ROOT, RootedBall::ROOT)];
        if self.r >= 2 {
            // B_d acts transitively on ordered, oriented pair assignments, so
            // the opposite pairs can be pinned to the axes.
            let Ok(Some(part)) = opposite_partition(g, v, self.d) else {
                return false;
            };
            let local: HashMap<usize, usize> =
                ball.origin.iter().enumerate().map(|(i, &o)| (o, i)).collect();
            for (&(plus, minus), &(a, b)) in self.axis.iter().zip(&part.pairs) {
                seed.push((plus, local[&a]));
                seed.push((minus, local[&b]));
            }
        }
        match_rooted(&self.ball.graph, &self.ball.depth, &ball.graph, &ball.depth, &seed).is_some()
    }

    pub fn check(&self, g: &Graph) -> LocalityVerdict {
        let failing = first_failing(g.vertex_count(), |v| !self.matches(g, v));
        LocalityVerdict {
            holds: failing.is_none(),
            failing_vertex: failing,
        }
    }
}

fn degree_profile(ball: &RootedBall) -> Vec<Vec<usize>> {
    let mut prof = vec![Vec::new(); ball.radius + 1];
    for (i, &dp) in ball.depth.iter().enumerate() {
        prof[dp].push(ball.graph.degree(i));
    }
    for p in &mut prof {
        p.sort_unstable();
    }
    prof
}

#[cfg(feature = "parallel")]
fn first_failing<F>(n: usize, fails: F) -> Option<usize>
where
    F: Fn(usize) -> bool + Sync,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().find_first(|&v| fails(v))
}

#[cfg(not(feature = "parallel"))]
fn first_failing<F>(n: usize, fails: F) -> Option<usize>
where
    F: Fn(usize) -> bool,
{
    (0..n).find(|&v| fails(v))
}

fn require_radius(r: usize) -> Result<()> {
    if r == 0 {
        return Err(Error::BadParameters("radius must be at least 1".into()));
    }
    Ok(())
}

/// Every `Link_r^-` is root-isomorphic to the one of `L^d`.
pub fn is_weakly_r_locally(g: &Graph, d: usize, r: usize) -> Result<LocalityVerdict> {
    require_radius(r)?;
    Ok(LatticeProbe::new(d, r, BallMode::Minus).check(g))
}

/// Every `Link_r` is root-isomorphic to the one of `L^d`.
pub fn is_r_locally(g: &Graph, d: usize, r: usize) -> Result<LocalityVerdict> {
    require_radius(r)?;
    Ok(LatticeProbe::new(d, r, BallMode::Full).check(g))
}

/// The locally-grid condition: 4-regular, and around each vertex the
/// neighbours can be cyclically ordered `w_1..w_4` so that consecutive ones
/// share exactly one further neighbour `z_i`, opposite ones share only the
/// centre, the nine vertices are distinct and span exactly the twelve edges of
/// the `3 x 3` grid.
pub fn is_locally_grid(g: &Graph) -> LocalityVerdict {
    let failing = first_failing(g.vertex_count(), |v| !locally_grid_at(g, v));
    LocalityVerdict {
        holds: failing.is_none(),
        failing_vertex: failing,
    }
}

fn locally_grid_at(g: &Graph, v: usize) -> bool {
    if g.degree(v) != 4 {
        return false;
    }
    let nb = g.neighbors(v);
    // the three cyclic orders of four items up to rotation and reflection
    let orders = [[0, 1, 2, 3], [0, 1, 3, 2], [0, 2, 1, 3]];
    'order: for ord in orders {
        let w: Vec<usize> = ord.iter().map(|&i| nb[i]).collect();
        let mut nine = vec![v];
        nine.extend(&w);
        for i in 0..4 {
            let opp = g.common_neighbors(w[i], w[(i + 2) % 4]);
            if opp != [v] {
                continue 'order;
            }
            let cons = g.common_neighbors(w[i], w[(i + 1) % 4]);
            if cons.len() != 2 {
                continue 'order;
            }
            let z = if cons[0] == v { cons[1] } else { cons[0] };
            nine.push(z);
        }
        let mut sorted = nine.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|p| p[0] == p[1]) {
            continue;
        }
        if g.induced_subgraph(&nine).edge_count() == 12 {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::rooted_isomorphic;

    fn torus(p: usize, q: usize) -> Graph {
        let id = |x: usize, y: usize| (x % p) + p * (y % q);
        let mut edges = Vec::new();
        for y in 0..q {
            for x in 0..p {
                edges.push((id(x, y), id(x + 1, y)));
                edges.push((id(x, y), id(x, y + 1)));
            }
        }
        Graph::from_edges(p * q, edges).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                edges.push((i, j));
            }
        }
        Graph::from_edges(n, edges).unwrap()
    }

    /// All perfect matchings of the neighbourhood satisfying the opposite
    /// conditions, by exhaustive enumeration.
    fn all_valid_partitions(g: &Graph, v: usize) -> Vec<Vec<(usize, usize)>> {
        fn rec(
            g: &Graph,
            v: usize,
            rest: Vec<usize>,
            acc: &mut Vec<(usize, usize)>,
            out: &mut Vec<Vec<(usize, usize)>>,
        ) {
            if rest.is_empty() {
                out.push(acc.clone());
                return;
            }
            let a = rest[0];
            for k in 1..rest.len() {
                let b = rest[k];
                if g.common_neighbors(a, b) != [v] {
                    continue;
                }
                let next: Vec<usize> = rest.iter().copied().filter(|&x| x != a && x != b).collect();
                acc.push((a, b));
                rec(g, v, next, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        let mut valid = Vec::new();
        rec(g, v, g.neighbors(v).to_vec(), &mut Vec::new(), &mut out);
        for m in out {
            let mut extras = Vec::new();
            let mut ok = true;
            for (i, &(a, b)) in m.iter().enumerate() {
                for &(c, e) in &m[i + 1..] {
                    for (x, y) in [(a, c), (a, e), (b, c), (b, e)] {
                        let cn = g.common_neighbors(x, y);
                        if cn.len() != 2 {
                            ok = false;
                        }
                        extras.extend(cn.into_iter().filter(|&z| z != v));
                    }
                }
            }
            extras.sort_unstable();
            if ok && extras.windows(2).all(|w| w[0] != w[1]) {
                valid.push(m);
            }
        }
        valid
    }

    #[test]
    fn torus_opposite_pairs() {
        let g = torus(8, 8);
        let p = opposite_partition(&g, 0, 2).unwrap().unwrap();
        // (1,0)=1, (7,0)=7, (0,1)=8, (0,7)=56
        assert_eq!(p.pairs, vec![(1, 7), (8, 56)]);
        assert_eq!(all_valid_partitions(&g, 0).len(), 1);
    }

    #[test]
    fn complete_graph_has_no_partition() {
        let g = complete(5);
        assert_eq!(opposite_partition(&g, 0, 2).unwrap(), None);
        assert!(all_valid_partitions(&g, 0).is_empty());
        assert!(matches!(opposite_partition(&g, 0, 3), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn lattice_ball_sizes() {
        let (b, _) = lattice_ball(2, 1, BallMode::Full);
        assert_eq!(b.graph.vertex_count(), 5);
        assert_eq!(b.graph.edge_count(), 4);
        let (b, _) = lattice_ball(3, 2, BallMode::Full);
        assert_eq!(b.layer_sizes(), vec![1, 6, 18]);
        let (m, _) = lattice_ball(3, 2, BallMode::Minus);
        assert_eq!(m.graph.edge_count(), b.graph.edge_count());
    }

    #[test]
    fn three_by_three_torus_is_not_weakly_two_local() {
        let g = torus(3, 3);
        let ball = extract_ball(&g, 0, 2, BallMode::Minus).unwrap();
        let (lat, _) = lattice_ball(2, 2, BallMode::Minus);
        assert_eq!(rooted_isomorphic(&ball, &lat).unwrap(), None);
        let v = is_weakly_r_locally(&g, 2, 2).unwrap();
        assert!(!v.holds);
        assert_eq!(v.failing_vertex, Some(0));
    }

    #[test]
    fn displacement_thresholds_on_square_tori() {
        // D = 8 and D = 7 for the square tori
        assert!(is_r_locally(&torus(8, 8), 2, 3).unwrap().holds);
        assert!(!is_r_locally(&torus(7, 7), 2, 3).unwrap().holds);
        assert!(is_weakly_r_locally(&torus(7, 7), 2, 3).unwrap().holds);
        let c5 = torus(5, 5);
        assert!(is_weakly_r_locally(&c5, 2, 2).unwrap().holds);
        assert!(!is_r_locally(&c5, 2, 2).unwrap().holds);
    }

    #[test]
    fn locally_grid_examples() {
        assert!(is_locally_grid(&torus(5, 5)).holds);
        assert!(is_locally_grid(&torus(6, 7)).holds);
        assert!(!is_locally_grid(&torus(4, 4)).holds);
        assert!(!is_locally_grid(&complete(5)).holds);
    }

    #[test]
    fn weak_two_without_grid() {
        let g = crate::families::build_gen_torus([3, 2], [0, 6]).unwrap();
        assert!(is_weakly_r_locally(&g, 2, 2).unwrap().holds);
        assert!(!is_locally_grid(&g).holds);
        assert!(!is_r_locally(&torus(5, 5), 2, 2).unwrap().holds);
    }

    #[test]
    fn radius_zero_is_rejected() {
        assert!(is_r_locally(&torus(4, 4), 2, 0).is_err());
    }
}
