//! The 4-cycle wheel property and the square-glued surface it defines.

use std::collections::HashMap;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cover::SurfaceKind;
use crate::error::{Error, Result};
use crate::graph::{enumerate_4cycles, Graph};

/// A family of 4-cycles, each listed in cyclic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WheelCertificate {
    pub family: Vec<[usize; 4]>,
    pub per_vertex_count: Vec<usize>,
    pub wheel_check: Vec<bool>,
}

impl WheelCertificate {
    /// Builds the counts and per-vertex checks for a family on `g`.
    pub fn new(g: &Graph, family: Vec<[usize; 4]>) -> Self {
        let at = faces_at(g.vertex_count(), &family);
        let per_vertex_count = at.iter().map(Vec::len).collect();
        let check = |v: usize| wheel_at(g, v, &family, &at[v]);
        #[cfg(feature = "parallel")]
        let wheel_check = (0..g.vertex_count()).into_par_iter().map(check).collect();
        #[cfg(not(feature = "parallel"))]
        let wheel_check = (0..g.vertex_count()).map(check).collect();
        WheelCertificate {
            family,
            per_vertex_count,
            wheel_check,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.per_vertex_count.iter().all(|&c| c == 4)
            && self.wheel_check.iter().all(|&b| b)
            && edge_incidence(&self.family).values().all(|&c| c == 2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WheelSearch {
    Found(WheelCertificate),
    NotWheel,
    /// The backtracking budget ran out.
    Indeterminate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SurfaceClass {
    Torus,
    KleinBottle,
    Other,
}

impl From<SurfaceKind> for SurfaceClass {
    fn from(k: SurfaceKind) -> Self {
        match k {
            SurfaceKind::Torus => SurfaceClass::Torus,
            SurfaceKind::KleinBottle => SurfaceClass::KleinBottle,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceReport {
    pub v: usize,
    pub e: usize,
    pub f: usize,
    pub euler: i64,
    pub orientable: bool,
    pub classification: SurfaceClass,
}

fn faces_at(n: usize, family: &[[usize; 4]]) -> Vec<Vec<usize>> {
    let mut at = vec![Vec::new(); n];
    for (i, c) in family.iter().enumerate() {
        for &v in c {
            if v < n {
                at[v].push(i);
            }
        }
    }
    at
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn edge_incidence(family: &[[usize; 4]]) -> HashMap<(usize, usize), usize> {
    let mut m = HashMap::new();
    for c in family {
        for k in 0..4 {
            *m.entry(edge_key(c[k], c[(k + 1) % 4])).or_insert(0) += 1;
        }
    }
    m
}

/// `(n, x, n')` for the cycle `v n x n'` through `v`.
fn corner(c: &[usize; 4], v: usize) -> Option<(usize, usize, usize)> {
    let k = c.iter().position(|&u| u == v)?;
    Some((c[(k + 1) % 4], c[(k + 2) % 4], c[(k + 3) % 4]))
}

/// The neighbour pairs of the faces at `v` close up into one 4-cycle on the
/// four neighbours.
fn rotation_at(g: &Graph, v: usize, family: &[[usize; 4]], faces: &[usize]) -> bool {
    let nb = g.neighbors(v);
    if faces.len() != 4 || nb.len() != 4 {
        return false;
    }
    let mut pairs = Vec::with_capacity(4);
    for &f in faces {
        let Some((a, _, b)) = corner(&family[f], v) else {
            return false;
        };
        if !nb.contains(&a) || !nb.contains(&b) || a == b {
            return false;
        }
        pairs.push((a, b));
    }
    // walk the pairs as a cycle starting from the first neighbour
    let mut used = [false; 4];
    let start = pairs[0].0;
    let mut cur = start;
    for _ in 0..4 {
        let Some(i) = (0..4).find(|&i| !used[i] && (pairs[i].0 == cur || pairs[i].1 == cur)) else {
            return false;
        };
        used[i] = true;
        cur = if pairs[i].0 == cur { pairs[i].1 } else { pairs[i].0 };
    }
    cur == start
}

fn wheel_at(g: &Graph, v: usize, family: &[[usize; 4]], faces: &[usize]) -> bool {
    if !rotation_at(g, v, family, faces) {
        return false;
    }
    let mut seen: Vec<usize> = g.neighbors(v).to_vec();
    seen.push(v);
    for &f in faces {
        let (_, x, _) = corner(&family[f], v).unwrap();
        if seen.contains(&x) {
            return false;
        }
        seen.push(x);
    }
    true
}

/// Checks that the four faces around every vertex form a single disc.
pub fn vertex_rotation_check(cert: &WheelCertificate, g: &Graph) -> bool {
    let at = faces_at(g.vertex_count(), &cert.family);
    (0..g.vertex_count()).all(|v| rotation_at(g, v, &cert.family, &at[v]))
}

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

pub fn find_wheel_family(g: &Graph) -> WheelSearch {
    find_wheel_family_with_budget(g, DEFAULT_NODE_BUDGET)
}

/// Tries the set of all 4-cycles first, then an exact search for a family
/// covering every edge exactly twice.
pub fn find_wheel_family_with_budget(g: &Graph, budget: u64) -> WheelSearch {
    if g.regular_degree() != Some(4) {
        return WheelSearch::NotWheel;
    }
    let cycles = enumerate_4cycles(g);
    let all = WheelCertificate::new(g, cycles.clone());
    if all.is_valid() {
        return WheelSearch::Found(all);
    }
    let mut edge_id = HashMap::new();
    for (u, w) in g.edges() {
        let k = edge_id.len();
        edge_id.insert((u, w), k);
    }
    let cycle_edges: Vec<[usize; 4]> = cycles
        .iter()
        .map(|c| std::array::from_fn(|k| edge_id[&edge_key(c[k], c[(k + 1) % 4])]))
        .collect();
    let mut by_edge = vec![Vec::new(); edge_id.len()];
    for (i, es) in cycle_edges.iter().enumerate() {
        for &e in es {
            by_edge[e].push(i);
        }
    }
    let mut s = Search {
        g,
        cycles: &cycles,
        cycle_edges: &cycle_edges,
        by_edge: &by_edge,
        count: vec![0; edge_id.len()],
        chosen: Vec::new(),
        banned: vec![false; cycles.len()],
        nodes: 0,
        budget,
    };
    match s.run() {
        Some(Some(family)) => WheelSearch::Found(WheelCertificate::new(g, family)),
        Some(None) => WheelSearch::NotWheel,
        None => WheelSearch::Indeterminate,
    }
}

struct Search<'a> {
    g: &'a Graph,
    cycles: &'a [[usize; 4]],
    cycle_edges: &'a [[usize; 4]],
    by_edge: &'a [Vec<usize>],
    count: Vec<u8>,
    chosen: Vec<usize>,
    banned: Vec<bool>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn fits(&self, c: usize) -> bool {
        !self.banned[c] && !self.chosen.contains(&c) && self.cycle_edges[c].iter().all(|&e| self.count[e] < 2)
    }

    /// `None` when the budget is exhausted.
    fn run(&mut self) -> Option<Option<Vec<[usize; 4]>>> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        // most constrained unfinished edge
        let mut best: Option<(usize, Vec<usize>)> = None;
        for e in 0..self.count.len() {
            if self.count[e] == 2 {
                continue;
            }
            let cands: Vec<usize> = self.by_edge[e].iter().copied().filter(|&c| self.fits(c)).collect();
            if cands.len() < (2 - self.count[e]) as usize {
                return Some(None);
            }
            if best.as_ref().is_none_or(|(_, b)| cands.len() < b.len()) {
                best = Some((e, cands));
            }
        }
        let Some((_, cands)) = best else {
            let family: Vec<[usize; 4]> = self.chosen.iter().map(|&c| self.cycles[c]).collect();
            let cert = WheelCertificate::new(self.g, family);
            return Some(cert.is_valid().then_some(cert.family));
        };
        let mut banned_here = Vec::new();
        let mut result = Some(None);
        for c in cands {
            self.chosen.push(c);
            for &e in &self.cycle_edges[c] {
                self.count[e] += 1;
            }
            let r = self.run();
            for &e in &self.cycle_edges[c] {
                self.count[e] -= 1;
            }
            self.chosen.pop();
            match r {
                Some(Some(f)) => {
                    result = Some(Some(f));
                    break;
                }
                None => {
                    result = None;
                    break;
                }
                Some(None) => {
                    self.banned[c] = true;
                    banned_here.push(c);
                }
            }
        }
        for c in banned_here {
            self.banned[c] = false;
        }
        result
    }
}

/// Glues the faces of a certificate along shared edges and classifies the
/// resulting closed surface.
pub fn glue_surface(cert: &WheelCertificate) -> Result<SurfaceReport> {
    let inc = edge_incidence(&cert.family);
    if let Some((e, c)) = inc.iter().find(|(_, &c)| c != 2) {
        return Err(Error::MalformedCertificate(format!(
            "edge ({}, {}) lies in {c} faces",
            e.0, e.1
        )));
    }
    let mut faces_of_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (i, c) in cert.family.iter().enumerate() {
        for k in 0..4 {
            faces_of_edge.entry(edge_key(c[k], c[(k + 1) % 4])).or_default().push(i);
        }
    }
    // +1 keeps the listed direction, -1 reverses it
    let traverses = |f: usize, s: i8, a: usize, b: usize| -> bool {
        let c = &cert.family[f];
        let fwd = (0..4).any(|k| c[k] == a && c[(k + 1) % 4] == b);
        fwd == (s == 1)
    };
    let mut orient = vec![0i8; cert.family.len()];
    let mut orientable = true;
    for root in 0..cert.family.len() {
        if orient[root] != 0 {
            continue;
        }
        orient[root] = 1;
        let mut stack = vec![root];
        while let Some(f) = stack.pop() {
            let c = cert.family[f];
            for k in 0..4 {
                let (a, b) = (c[k], c[(k + 1) % 4]);
                for &h in &faces_of_edge[&edge_key(a, b)] {
                    if h == f {
                        continue;
                    }
                    // a neighbouring face must run the shared edge the other way
                    let a_to_b = traverses(f, orient[f], a, b);
                    let want = if traverses(h, 1, a, b) == a_to_b { -1 } else { 1 };
                    if orient[h] == 0 {
                        orient[h] = want;
                        stack.push(h);
                    } else if orient[h] != want {
                        orientable = false;
                    }
                }
            }
        }
    }
    let v = cert.per_vertex_count.len();
    let e = inc.len();
    let f = cert.family.len();
    let euler = v as i64 - e as i64 + f as i64;
    let classification = match (euler, orientable) {
        (0, true) => SurfaceClass::Torus,
        (0, false) => SurfaceClass::KleinBottle,
        _ => SurfaceClass::Other,
    };
    Ok(SurfaceReport {
        v,
        e,
        f,
        euler,
        orientable,
        classification,
    })
}
