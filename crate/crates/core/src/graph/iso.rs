//! Root-preserving isomorphism search by layered backtracking.

use super::{BallMode, Graph, RootedBall};
use crate::error::{Error, Result};

const UNSET: usize = usize::MAX;

/// Searches for an isomorphism `a -> b` that preserves the per-vertex
/// `level` labels and extends the forced pairs in `seed`.
///
/// Vertices of `a` are placed in an order that always prefers the vertex with
/// the most already-placed neighbours; candidates for each vertex are drawn
/// from the neighbourhood of an already-placed neighbour's image, filtered by
/// level, degree and adjacency to every placed neighbour's image.
pub fn match_rooted(
    a: &Graph,
    a_level: &[usize],
    b: &Graph,
    b_level: &[usize],
    seed: &[(usize, usize)],
) -> Option<Vec<usize>> {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.edge_count() != b.edge_count() {
        return None;
    }
    if !same_level_profile(a, a_level, b, b_level) {
        return None;
    }

    let mut fwd = vec![UNSET; n];
    let mut used = vec![false; n];
    for &(x, y) in seed {
        if a_level[x] != b_level[y] || a.degree(x) != b.degree(y) {
            return None;
        }
        if fwd[x] != UNSET {
            if fwd[x] != y {
                return None;
            }
            continue;
        }
        if used[y] {
            return None;
        }
        fwd[x] = y;
        used[y] = true;
    }
    for &(x, y) in seed {
        for &w in a.neighbors(x) {
            if fwd[w] != UNSET && !b.has_edge(y, fwd[w]) {
                return None;
            }
        }
        let placed_a = a.neighbors(x).iter().filter(|&&w| fwd[w] != UNSET).count();
        let placed_b = b.neighbors(y).iter().filter(|&&w| used[w]).count();
        if placed_a != placed_b {
            return None;
        }
    }

    let order = placement_order(a, a_level, &fwd);
    if order.is_empty() {
        return Some(fwd);
    }

    // Explicit stack: candidates[i] and cursor[i] belong to order[i].
    let mut candidates: Vec<Vec<usize>> = vec![Vec::new(); order.len()];
    let mut cursor = vec![0usize; order.len()];
    let mut level = 0usize;
    candidates[0] = candidates_for(a, a_level, b, b_level, &fwd, &used, order[0]);
    loop {
        let u = order[level];
        if fwd[u] != UNSET {
            used[fwd[u]] = false;
            fwd[u] = UNSET;
        }
        if cursor[level] < candidates[level].len() {
            let c = candidates[level][cursor[level]];
            cursor[level] += 1;
            fwd[u] = c;
            used[c] = true;
            if level + 1 == order.len() {
                return Some(fwd);
            }
            level += 1;
            candidates[level] = candidates_for(a, a_level, b, b_level, &fwd, &used, order[level]);
            cursor[level] = 0;
        } else {
            if level == 0 {
                return None;
            }
            level -= 1;
        }
    }
}

fn same_level_profile(a: &Graph, a_level: &[usize], b: &Graph, b_level: &[usize]) -> bool {
    let mut pa: Vec<(usize, usize)> = (0..a.vertex_count()).map(|v| (a_level[v], a.degree(v))).collect();
    let mut pb: Vec<(usize, usize)> = (0..b.vertex_count()).map(|v| (b_level[v], b.degree(v))).collect();
    pa.sort_unstable();
    pb.sort_unstable();
    pa == pb
}

fn placement_order(a: &Graph, a_level: &[usize], fwd: &[usize]) -> Vec<usize> {
    let n = a.vertex_count();
    let mut placed: Vec<bool> = fwd.iter().map(|&y| y != UNSET).collect();
    let mut weight: Vec<usize> = (0..n)
        .map(|v| a.neighbors(v).iter().filter(|&&w| placed[w]).count())
        .collect();
    let mut order = Vec::with_capacity(n);
    for _ in 0..placed.iter().filter(|&&p| !p).count() {
        // O(n^2) overall, fine at ball sizes.
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by(|&x, &y| {
                weight[x]
                    .cmp(&weight[y])
                    .then(a_level[y].cmp(&a_level[x]))
                    .then(a.degree(x).cmp(&a.degree(y)))
                    .then(y.cmp(&x))
            })
            .unwrap();
        placed[next] = true;
        order.push(next);
        for &w in a.neighbors(next) {
            weight[w] += 1;
        }
    }
    order
}

fn candidates_for(
    a: &Graph,
    a_level: &[usize],
    b: &Graph,
    b_level: &[usize],
    fwd: &[usize],
    used: &[bool],
    u: usize,
) -> Vec<usize> {
    let placed: Vec<usize> = a
        .neighbors(u)
        .iter()
        .filter(|&&w| fwd[w] != UNSET)
        .map(|&w| fwd[w])
        .collect();
    let pool: Vec<usize> = match placed.iter().min_by_key(|&&y| b.degree(y)) {
        Some(&anchor) => b.neighbors(anchor).to_vec(),
        None => (0..b.vertex_count()).collect(),
    };
    pool.into_iter()
        .filter(|&c| {
            !used[c]
                && b_level[c] == a_level[u]
                && b.degree(c) == a.degree(u)
                && placed.iter().all(|&y| b.has_edge(c, y))
                && b.neighbors(c).iter().filter(|&&w| used[w]).count() == placed.len()
        })
        .collect()
}

/// Root- and depth-preserving isomorphism between two balls, as a map from
/// ball-`a` ids to ball-`b` ids.
pub fn rooted_isomorphic(a: &RootedBall, b: &RootedBall) -> Result<Option<Vec<usize>>> {
    if a.mode != b.mode {
        return Err(Error::BadParameters(format!(
            "ball modes differ ({:?} vs {:?})",
            a.mode, b.mode
        )));
    }
    if a.radius != b.radius && a.mode == BallMode::Minus {
        // Minus-mode balls of different radius treat their outer layers differently.
        return Ok(None);
    }
    Ok(match_rooted(
        &a.graph,
        &a.depth,
        &b.graph,
        &b.depth,
        &[(RootedBall::ROOT, RootedBall::ROOT)],
    ))
}

/// General isomorphism for modest graphs: pins vertex 0 of `g` to each
/// compatible vertex of `h` in turn and runs the rooted search with BFS
/// distances as levels.
pub fn isomorphic(g: &Graph, h: &Graph) -> Option<Vec<usize>> {
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return None;
    }
    if g.vertex_count() == 0 {
        return Some(Vec::new());
    }
    let mut dg: Vec<usize> = (0..g.vertex_count()).map(|v| g.degree(v)).collect();
    let mut dh: Vec<usize> = (0..h.vertex_count()).map(|v| h.degree(v)).collect();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return None;
    }
    let level = |x: &Graph, v: usize| -> Vec<usize> {
        x.bfs_distances(v).into_iter().map(|d| d.unwrap_or(UNSET)).collect()
    };
    let g_level = level(g, 0);
    for root in 0..h.vertex_count() {
        if h.degree(root) != g.degree(0) {
            continue;
        }
        let h_level = level(h, root);
        if let Some(m) = match_rooted(g, &g_level, h, &h_level, &[(0, root)]) {
            return Some(m);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::extract_ball;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn grid(w: usize, h: usize) -> Graph {
        let id = |x: usize, y: usize| x + w * y;
        let mut g = Graph::empty(w * h);
        for y in 0..h {
            for x in 0..w {
                if x + 1 < w {
                    g.add_edge(id(x, y), id(x + 1, y)).unwrap();
                }
                if y + 1 < h {
                    g.add_edge(id(x, y), id(x, y + 1)).unwrap();
                }
            }
        }
        g
    }

    #[test]
    fn grid_balls_match_at_interior_points() {
        let g = grid(11, 11);
        let a = extract_ball(&g, 5 + 11 * 5, 2, BallMode::Full).unwrap();
        let b = extract_ball(&g, 4 + 11 * 6, 2, BallMode::Full).unwrap();
        assert!(rooted_isomorphic(&a, &b).unwrap().is_some());
        let corner = extract_ball(&g, 0, 2, BallMode::Full).unwrap();
        assert!(rooted_isomorphic(&a, &corner).unwrap().is_none());
    }

    #[test]
    fn cycle_ball_is_a_path() {
        let c6 = cycle(6);
        let line = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let a = extract_ball(&c6, 0, 1, BallMode::Full).unwrap();
        let b = extract_ball(&line, 2, 1, BallMode::Full).unwrap();
        let m = rooted_isomorphic(&a, &b).unwrap().unwrap();
        assert_eq!(m[0], 0);
    }

    #[test]
    fn mode_mismatch_is_an_error() {
        let c6 = cycle(6);
        let a = extract_ball(&c6, 0, 1, BallMode::Full).unwrap();
        let b = extract_ball(&c6, 0, 1, BallMode::Minus).unwrap();
        assert!(rooted_isomorphic(&a, &b).is_err());
    }

    #[test]
    fn relabelled_graphs_are_isomorphic() {
        let g = grid(4, 3);
        let perm: Vec<usize> = vec![7, 3, 11, 0, 5, 9, 1, 10, 2, 8, 4, 6];
        let h = Graph::from_edges(12, g.edges().map(|(u, v)| (perm[u], perm[v]))).unwrap();
        let m = isomorphic(&g, &h).unwrap();
        for (u, v) in g.edges() {
            assert!(h.has_edge(m[u], m[v]));
        }
        assert!(isomorphic(&cycle(6), &Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap()).is_none());
    }

    #[test]
    fn seeded_match_respects_seed() {
        let g = cycle(8);
        let lv = vec![0; 8];
        let m = match_rooted(&g, &lv, &g, &lv, &[(0, 3), (1, 2)]).unwrap();
        assert_eq!(m[0], 3);
        assert_eq!(m[1], 2);
        assert_eq!(m[2], 1);
        assert!(match_rooted(&g, &lv, &g, &lv, &[(0, 3), (1, 5)]).is_none());
    }
}
