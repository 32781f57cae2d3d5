use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{point_label, unit_steps, SubgroupSpec};
use crate::error::Result;
use crate::graph::Graph;

/// Quotient of the lattice graph by a cocompact subgroup. Loops and parallel
/// edges of the quotient multigraph are dropped from `graph` and recorded in
/// the flags.
#[derive(Clone, Debug)]
pub struct QuotientGraph {
    pub graph: Graph,
    /// Canonical lattice representative of each quotient vertex.
    pub reps: Vec<Vec<i64>>,
    pub loops_found: bool,
    pub multi_edges_found: bool,
    index: HashMap<Vec<i64>, usize>,
}

impl QuotientGraph {
    /// Quotient vertex of the orbit containing `x`.
    pub fn vertex_of(&self, spec: &SubgroupSpec, x: &[i64]) -> usize {
        self.index[&spec.canonical(x)]
    }
}

pub fn build_quotient(spec: &SubgroupSpec) -> Result<QuotientGraph> {
    let d = spec.dim();
    let residues = spec.residues()?;
    let canon: BTreeSet<Vec<i64>> = residues.iter().map(|x| spec.canonical(x)).collect();
    let reps: Vec<Vec<i64>> = canon.into_iter().collect();
    let index: HashMap<Vec<i64>, usize> =
        reps.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();

    let steps = unit_steps(d);
    // edge-orbit key -> endpoint pair
    let mut edge_orbits: BTreeMap<(Vec<i64>, Vec<i64>), (usize, usize)> = BTreeMap::new();
    let mut loops_found = false;
    for (a, x) in reps.iter().enumerate() {
        for u in &steps {
            let y: Vec<i64> = x.iter().zip(u).map(|(p, q)| p + q).collect();
            let b = index[&spec.canonical(&y)];
            if a == b {
                loops_found = true;
                continue;
            }
            let key = edge_key(spec, x, u);
            edge_orbits.entry(key).or_insert((a.min(b), a.max(b)));
        }
    }
    let mut per_pair: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &pair in edge_orbits.values() {
        *per_pair.entry(pair).or_insert(0) += 1;
    }
    let multi_edges_found = per_pair.values().any(|&c| c > 1);
    let mut graph = Graph::from_edges(reps.len(), per_pair.keys().copied())?;
    graph = graph.with_labels(reps.iter().map(|r| point_label(r)).collect());
    Ok(QuotientGraph {
        graph,
        reps,
        loops_found,
        multi_edges_found,
        index,
    })
}

/// Canonical label of the orbit of the lattice edge `{x, x+u}`.
fn edge_key(spec: &SubgroupSpec, x: &[i64], u: &[i64]) -> (Vec<i64>, Vec<i64>) {
    let y: Vec<i64> = x.iter().zip(u).map(|(p, q)| p + q).collect();
    let neg: Vec<i64> = u.iter().map(|v| -v).collect();
    let mut best: Option<(Vec<i64>, Vec<i64>)> = None;
    for rep in spec.coset_reps() {
        for (start, dir) in [(x, u), (&y[..], &neg[..])] {
            let a = spec.reduce(&rep.apply(start));
            let su = rep.sigma.apply(dir);
            let b: Vec<i64> = a.iter().zip(&su).map(|(p, q)| p + q).collect();
            let cand = (a, b);
            if best.as_ref().is_none_or(|bst| cand < *bst) {
                best = Some(cand);
            }
        }
    }
    best.unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::graph::isomorphic;
    use crate::lattice::{LatticeAut, SignedPerm};

    /// Orbits on a window by union-find over generator moves.
    fn brute_orbit_count(spec: &SubgroupSpec, half: i64) -> usize {
        let side = (2 * half + 1) as usize;
        let id = |x: &[i64]| -> Option<usize> {
            if x.iter().all(|v| v.abs() <= half) {
                Some(((x[0] + half) as usize) * side + (x[1] + half) as usize)
            } else {
                None
            }
        };
        let mut parent: Vec<usize> = (0..side * side).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for a in -half..=half {
            for b in -half..=half {
                for g in spec.generators() {
                    let y = g.apply(&[a, b]);
                    if let (Some(i), Some(j)) = (id(&[a, b]), id(&y)) {
                        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                        parent[ri] = rj;
                    }
                }
            }
        }
        (0..side * side)
            .filter(|&i| find(&mut parent, i) == i)
            .count()
    }

    #[test]
    fn three_by_three_torus() {
        let s = SubgroupSpec::translations(2, &[vec![3, 0], vec![0, 3]]).unwrap();
        let q = build_quotient(&s).unwrap();
        assert_eq!(q.graph.vertex_count(), 9);
        assert_eq!(q.graph.edge_count(), 18);
        assert_eq!(q.graph.regular_degree(), Some(4));
        assert!(!q.loops_found && !q.multi_edges_found);
        assert_eq!(brute_orbit_count(&s, 6), 9);
    }

    #[test]
    fn full_lattice_collapses_to_a_loop() {
        let s = SubgroupSpec::translations(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        let q = build_quotient(&s).unwrap();
        assert_eq!(q.graph.vertex_count(), 1);
        assert!(q.loops_found);
    }

    #[test]
    fn two_cycle_direction_gives_multi_edges() {
        let s = SubgroupSpec::translations(2, &[vec![2, 0], vec![0, 5]]).unwrap();
        let q = build_quotient(&s).unwrap();
        assert_eq!(q.graph.vertex_count(), 10);
        assert!(q.multi_edges_found);
        assert!(!q.loops_found);
    }

    #[test]
    fn glide_quotient_counts_match_window() {
        let g = LatticeAut::new(SignedPerm::new(vec![2, 1]).unwrap(), vec![5, 2]).unwrap();
        let s = SubgroupSpec::new(2, vec![g, LatticeAut::translation(&[5, -5])]).unwrap();
        let q = build_quotient(&s).unwrap();
        assert_eq!(q.graph.vertex_count(), 35);
        assert_eq!(brute_orbit_count(&s, 24), 35);
        assert_eq!(q.graph.regular_degree(), Some(4));
    }

    #[test]
    fn sheared_lattice_is_a_relabelled_torus() {
        let a = SubgroupSpec::translations(2, &[vec![6, 0], vec![2, 5]]).unwrap();
        let b = SubgroupSpec::translations(2, &[vec![6, 0], vec![-4, 5]]).unwrap();
        let qa = build_quotient(&a).unwrap();
        let qb = build_quotient(&b).unwrap();
        assert!(isomorphic(&qa.graph, &qb.graph).is_some());
    }

    #[test]
    fn non_cocompact_is_an_error() {
        let s = SubgroupSpec::translations(2, &[vec![4, 0]]).unwrap();
        assert!(matches!(build_quotient(&s), Err(Error::NonCocompact { .. })));
    }
}
