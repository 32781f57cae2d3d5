//! Named quotients of `L^2`: grids, tori, the three Klein bottle types, the
//! strange graphs, generalised tori and the two rectangle-gluing procedures.
//!
//! Vertex `(x, y)` of a `p x q` family graph has id `x + p * y`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lattice::{build_quotient, LatticeAut, SignedPerm, SubgroupSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FamilyKind {
    Grid,
    Torus,
    Klein0,
    Klein1,
    Klein2,
    Strange,
    GenTorus,
    ProcI,
    ProcII,
}

/// A family member. Parameters by kind:
/// `Grid (p,q)`, `Torus (p,q,δ)`, `Klein* (p,q)`, `Strange (p,q)`,
/// `GenTorus (x1,y1,x2,y2)`, `ProcI (k,l,s)`, `ProcII (k,l,c,rot)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyTag {
    pub kind: FamilyKind,
    pub params: Vec<i64>,
}

impl FamilyTag {
    pub fn new(kind: FamilyKind, params: &[i64]) -> Self {
        FamilyTag {
            kind,
            params: params.to_vec(),
        }
    }

    pub fn torus(p: i64, q: i64, delta: i64) -> Self {
        Self::new(FamilyKind::Torus, &[p, q, delta])
    }

    pub fn klein(p: i64, q: i64, t: u8) -> Self {
        let kind = match t {
            0 => FamilyKind::Klein0,
            1 => FamilyKind::Klein1,
            _ => FamilyKind::Klein2,
        };
        Self::new(kind, &[p, q])
    }

    pub fn strange(p: i64, q: i64) -> Self {
        Self::new(FamilyKind::Strange, &[p, q])
    }

    pub fn build(&self) -> Result<Graph> {
        let p = &self.params;
        let arity = match self.kind {
            FamilyKind::Grid | FamilyKind::Klein0 | FamilyKind::Klein1 | FamilyKind::Klein2 | FamilyKind::Strange => 2,
            FamilyKind::Torus | FamilyKind::ProcI => 3,
            FamilyKind::GenTorus | FamilyKind::ProcII => 4,
        };
        if p.len() != arity {
            return Err(Error::BadParameters(format!(
                "{:?} takes {arity} parameters, got {}",
                self.kind,
                p.len()
            )));
        }
        match self.kind {
            FamilyKind::Grid => build_grid(p[0], p[1]),
            FamilyKind::Torus => build_torus(p[0], p[1], p[2]),
            FamilyKind::Klein0 => build_klein(p[0], p[1], 0),
            FamilyKind::Klein1 => build_klein(p[0], p[1], 1),
            FamilyKind::Klein2 => build_klein(p[0], p[1], 2),
            FamilyKind::Strange => build_strange(p[0], p[1]),
            FamilyKind::GenTorus => build_gen_torus([p[0], p[1]], [p[2], p[3]]),
            FamilyKind::ProcI | FamilyKind::ProcII => Ok(build_quotient(&self.group()?)?.graph),
        }
    }

    /// Subgroup of `Aut(L^2)` whose quotient is this graph (not for grids).
    pub fn group(&self) -> Result<SubgroupSpec> {
        let p = &self.params;
        match self.kind {
            FamilyKind::Grid => Err(Error::BadParameters("grid graphs are not quotients".into())),
            FamilyKind::Torus => {
                check_torus(p[0], p[1], p[2])?;
                SubgroupSpec::translations(2, &[vec![p[0], 0], vec![p[2], p[1]]])
            }
            FamilyKind::Klein0 | FamilyKind::Klein1 => {
                check_klein(p[0], p[1], if self.kind == FamilyKind::Klein0 { 0 } else { 1 })?;
                procedure_i(p[0], p[1], -1)
            }
            FamilyKind::Klein2 => {
                check_klein(p[0], p[1], 2)?;
                procedure_i(p[0], p[1], 0)
            }
            FamilyKind::Strange => strange_group(p[0], p[1]),
            FamilyKind::GenTorus => gen_torus_group([p[0], p[1]], [p[2], p[3]]),
            FamilyKind::ProcI => procedure_i(p[0], p[1], p[2]),
            FamilyKind::ProcII => procedure_ii(p[0], p[1], p[2], p[3] != 0),
        }
    }
}

fn vid(p: i64, x: i64, y: i64) -> usize {
    (x + p * y) as usize
}

fn labelled(p: i64, q: i64, edges: Vec<(usize, usize)>) -> Result<Graph> {
    let g = Graph::from_edges((p * q) as usize, edges)?;
    let labels = (0..q)
        .flat_map(|y| (0..p).map(move |x| format!("({x},{y})")))
        .collect();
    Ok(g.with_labels(labels))
}

fn grid_edges(p: i64, q: i64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for y in 0..q {
        for x in 0..p {
            if x + 1 < p {
                edges.push((vid(p, x, y), vid(p, x + 1, y)));
            }
            if y + 1 < q {
                edges.push((vid(p, x, y), vid(p, x, y + 1)));
            }
        }
    }
    edges
}

pub fn build_grid(p: i64, q: i64) -> Result<Graph> {
    if p < 2 || q < 2 {
        return Err(Error::BadParameters(format!("grid needs p, q >= 2, got ({p}, {q})")));
    }
    labelled(p, q, grid_edges(p, q))
}

fn check_torus(p: i64, q: i64, delta: i64) -> Result<()> {
    if p < 3 || q < 2 || delta < 0 || delta > p / 2 {
        return Err(Error::BadParameters(format!(
            "torus needs p >= 3, q >= 2, 0 <= delta <= p/2, got ({p}, {q}, {delta})"
        )));
    }
    Ok(())
}

pub fn build_torus(p: i64, q: i64, delta: i64) -> Result<Graph> {
    check_torus(p, q, delta)?;
    let mut edges = grid_edges(p, q);
    for i in 0..p {
        edges.push((vid(p, i, 0), vid(p, (i + delta) % p, q - 1)));
    }
    for j in 0..q {
        edges.push((vid(p, 0, j), vid(p, p - 1, j)));
    }
    labelled(p, q, edges)
}

fn check_klein(p: i64, q: i64, t: u8) -> Result<()> {
    let parity_ok = match t {
        0 | 2 => p % 2 == 0,
        1 => p % 2 == 1,
        _ => return Err(Error::BadParameters(format!("Klein bottle type must be 0, 1 or 2, got {t}"))),
    };
    if p < 3 || q < 3 || !parity_ok {
        return Err(Error::BadParameters(format!(
            "Klein bottle type {t} needs p, q >= 3 and p {}, got ({p}, {q})",
            if t == 1 { "odd" } else { "even" }
        )));
    }
    Ok(())
}

pub fn build_klein(p: i64, q: i64, t: u8) -> Result<Graph> {
    check_klein(p, q, t)?;
    let mut edges = grid_edges(p, q);
    for j in 0..q {
        edges.push((vid(p, 0, j), vid(p, p - 1, j)));
    }
    for i in 0..p {
        let x = if t == 2 { (p - i) % p } else { p - i - 1 };
        edges.push((vid(p, i, 0), vid(p, x, q - 1)));
    }
    labelled(p, q, edges)
}

pub fn build_strange(p: i64, q: i64) -> Result<Graph> {
    if p < 3 || q < 3 {
        return Err(Error::BadParameters(format!("strange graph needs p, q >= 3, got ({p}, {q})")));
    }
    let mut edges = grid_edges(p, q);
    if p <= q {
        for i in 0..p {
            edges.push((vid(p, i, 0), vid(p, p - 1, q - p + i)));
        }
        for j in 0..p {
            edges.push((vid(p, 0, j), vid(p, j, q - 1)));
        }
        for j in p..q {
            edges.push((vid(p, 0, j), vid(p, p - 1, j - p)));
        }
    } else {
        for i in 0..q {
            edges.push((vid(p, i, 0), vid(p, 0, q - 1 - i)));
        }
        for i in 0..q {
            edges.push((vid(p, p - 1 - i, q - 1), vid(p, p - 1, i)));
        }
        for i in 0..(p - q) {
            edges.push((vid(p, i, q - 1), vid(p, i + q, 0)));
        }
    }
    labelled(p, q, edges)
}

pub fn strange_group(p: i64, q: i64) -> Result<SubgroupSpec> {
    if p < 3 || q < 3 {
        return Err(Error::BadParameters(format!("strange graph needs p, q >= 3, got ({p}, {q})")));
    }
    if p <= q {
        procedure_ii(q, p, p, false)
    } else {
        procedure_ii(q, p, -1, true)
    }
}

fn gen_torus_group(v1: [i64; 2], v2: [i64; 2]) -> Result<SubgroupSpec> {
    if v1[0] * v2[1] - v1[1] * v2[0] == 0 {
        return Err(Error::BadParameters(format!("{v1:?} and {v2:?} are linearly dependent")));
    }
    SubgroupSpec::translations(2, &[v1.to_vec(), v2.to_vec()])
}

pub fn build_gen_torus(v1: [i64; 2], v2: [i64; 2]) -> Result<Graph> {
    Ok(build_quotient(&gen_torus_group(v1, v2)?)?.graph)
}

/// Axis-parallel `k x l` rectangle with its left side at `x = s/2`: vertical
/// sides glued by `t_(k,0)`, horizontal sides glued with a flip by
/// `(x, y) -> (s + k - x, y + l)`.
pub fn procedure_i(k: i64, l: i64, s: i64) -> Result<SubgroupSpec> {
    if k < 1 || l < 1 {
        return Err(Error::BadParameters(format!("rectangle sides must be positive, got ({k}, {l})")));
    }
    let flip = SignedPerm::new(vec![-1, 2])?;
    SubgroupSpec::new(
        2,
        vec![
            LatticeAut::translation(&[k, 0]),
            LatticeAut::new(flip, vec![s + k, l])?,
        ],
    )
}

/// Diagonal rectangle: sides along `(l, -l)` glued by that translation, the
/// other pair glued by the glide `(x, y) -> (y + c, x + k - c)` whose square
/// is `t_(k,k)`. With `rotated`, the sides run along `(l, l)` and the glide is
/// `(x, y) -> (c - y, c + k - x)`, squaring to `t_(-k,k)`.
pub fn procedure_ii(k: i64, l: i64, c: i64, rotated: bool) -> Result<SubgroupSpec> {
    if k < 1 || l < 1 {
        return Err(Error::BadParameters(format!("rectangle sides must be positive, got ({k}, {l})")));
    }
    let (t, g) = if rotated {
        (
            LatticeAut::translation(&[l, l]),
            LatticeAut::new(SignedPerm::new(vec![-2, -1])?, vec![c, c + k])?,
        )
    } else {
        (
            LatticeAut::translation(&[l, -l]),
            LatticeAut::new(SignedPerm::new(vec![2, 1])?, vec![c, k - c])?,
        )
    };
    SubgroupSpec::new(2, vec![g, t])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_bipartite, isomorphic};

    #[test]
    fn grid_counts() {
        let g = build_grid(2, 2).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (4, 4));
        assert_eq!(g.regular_degree(), Some(2));
        for (p, q) in [(3, 3), (2, 5), (4, 7)] {
            let g = build_grid(p, q).unwrap();
            assert_eq!(g.edge_count() as i64, 2 * p * q - p - q);
        }
        assert_eq!(build_grid(2, 5).unwrap().edge_count(), 13);
        assert!(build_grid(1, 5).is_err());
    }

    #[test]
    fn torus_counts_and_labels() {
        let g = build_torus(8, 8, 0).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (64, 128));
        assert_eq!(g.regular_degree(), Some(4));
        assert_eq!(g.label(9), "(1,1)");
        assert!(build_torus(8, 8, 5).is_err());
        assert!(build_torus(2, 8, 0).is_err());
    }

    #[test]
    fn parity_constraints() {
        assert!(build_klein(5, 8, 0).is_err());
        assert!(build_klein(6, 8, 1).is_err());
        assert!(build_klein(5, 8, 2).is_err());
        assert!(build_klein(6, 8, 3).is_err());
        assert!(build_klein(6, 8, 0).is_ok());
        assert!(build_klein(5, 8, 1).is_ok());
        assert!(build_klein(6, 7, 2).is_ok());
    }

    #[test]
    fn every_family_matches_its_quotient() {
        for p in 3..=8 {
            for q in 3..=8 {
                let mut tags = vec![FamilyTag::strange(p, q)];
                for delta in 0..=p / 2 {
                    tags.push(FamilyTag::torus(p, q, delta));
                }
                tags.push(FamilyTag::klein(p, q, if p % 2 == 0 { 0 } else { 1 }));
                if p % 2 == 0 {
                    tags.push(FamilyTag::klein(p, q, 2));
                }
                for tag in tags {
                    let g = tag.build().unwrap();
                    let q = build_quotient(&tag.group().unwrap()).unwrap();
                    assert_eq!(g.regular_degree(), Some(4), "{tag:?}");
                    assert!(isomorphic(&g, &q.graph).is_some(), "{tag:?}");
                }
            }
        }
    }

    #[test]
    fn strange_57_group_is_the_stated_glide() {
        let s = strange_group(5, 7).unwrap();
        let g = &s.generators()[0];
        assert_eq!(g.apply(&[0, 0]), vec![5, 2]);
        assert_eq!(g.apply(&[1, 0]), vec![5, 3]);
        assert_eq!(s.generators()[1], LatticeAut::translation(&[5, -5]));
        let s = strange_group(7, 5).unwrap();
        // (x, y) -> (-y - 1, 4 - x)
        assert_eq!(s.generators()[0].apply(&[2, 3]), vec![-4, 2]);
        assert_eq!(s.generators()[1], LatticeAut::translation(&[7, 7]));
    }

    #[test]
    fn square_strange_branches_agree() {
        for p in 3..=8 {
            let a = build_quotient(&procedure_ii(p, p, p, false).unwrap()).unwrap();
            let b = build_quotient(&procedure_ii(p, p, -1, true).unwrap()).unwrap();
            assert!(isomorphic(&a.graph, &b.graph).is_some());
            assert!(isomorphic(&a.graph, &build_strange(p, p).unwrap()).is_some());
        }
    }

    #[test]
    fn generalised_torus() {
        let g = build_gen_torus([9, 3], [3, 6]).unwrap();
        assert_eq!(g.vertex_count(), 45);
        let axis = build_gen_torus([6, 0], [0, 5]).unwrap();
        assert!(isomorphic(&axis, &build_torus(6, 5, 0).unwrap()).is_some());
        let sheared = build_gen_torus([7, 0], [3, 5]).unwrap();
        assert!(isomorphic(&sheared, &build_torus(7, 5, 3).unwrap()).is_some());
        assert!(build_gen_torus([2, 4], [1, 2]).is_err());
    }

    #[test]
    fn bipartiteness_is_measured() {
        assert!(is_bipartite(&build_torus(8, 8, 0).unwrap()).is_bipartite());
        assert!(!is_bipartite(&build_torus(7, 8, 0).unwrap()).is_bipartite());
        assert!(!is_bipartite(&build_torus(8, 8, 1).unwrap()).is_bipartite());
    }

    #[test]
    fn arity_is_checked() {
        assert!(FamilyTag::new(FamilyKind::Torus, &[8, 8]).build().is_err());
        assert!(FamilyTag::new(FamilyKind::Grid, &[3, 3]).group().is_err());
    }
}
