//! The affine group `F_2^4 ⋊ <M>` of order 112 with generators `a, b, c`, its
//! Cayley graph (2-locally `L^3` but not covered by `L^3`), and the product
//! extensions `Γ × Z_14^{d-3}`.
//!
//! Products in this module are written left to right: `a · b` means "apply
//! `a`, then `b`", so as maps `a · b = b ∘ a`. [`AffineF2::then`] is that
//! product; [`AffineF2::compose`] is ordinary composition.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::cover::{extend_cover, seed_map, CoverStatus, ObstructionTag};
use crate::error::{Error, Result};
use crate::graph::{girth, is_bipartite, Graph};
use crate::local::{is_r_locally, is_weakly_r_locally};

/// `x -> A x + v` on `F_2^4`. Row `r` of `A` is `rows[r]`, with bit `k` the
/// entry in column `k`; vectors store coordinate `k` in bit `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineF2 {
    pub rows: [u8; 4],
    pub vector: u8,
}

fn mat_vec(rows: &[u8; 4], x: u8) -> u8 {
    let mut y = 0;
    for (r, &row) in rows.iter().enumerate() {
        y |= (((row & x).count_ones() & 1) as u8) << r;
    }
    y
}

fn mat_mul(a: &[u8; 4], b: &[u8; 4]) -> [u8; 4] {
    let mut c = [0u8; 4];
    for r in 0..4 {
        for k in 0..4 {
            if a[r] >> k & 1 == 1 {
                c[r] ^= b[k];
            }
        }
    }
    c
}

const IDENTITY_ROWS: [u8; 4] = [0b0001, 0b0010, 0b0100, 0b1000];

/// Bit pattern of a row or vector written as `x_1 x_2 x_3 x_4`.
const fn bits(s: [u8; 4]) -> u8 {
    s[0] | s[1] << 1 | s[2] << 2 | s[3] << 3
}

impl AffineF2 {
    pub const IDENTITY: AffineF2 = AffineF2 {
        rows: IDENTITY_ROWS,
        vector: 0,
    };

    /// The matrix `M` of order 7.
    pub const M: [u8; 4] = [
        bits([0, 0, 1, 0]),
        bits([1, 1, 0, 0]),
        bits([0, 1, 1, 0]),
        bits([0, 0, 0, 1]),
    ];

    pub fn linear(rows: [u8; 4]) -> Self {
        AffineF2 { rows, vector: 0 }
    }

    pub fn apply(&self, x: u8) -> u8 {
        mat_vec(&self.rows, x) ^ self.vector
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineF2) -> AffineF2 {
        AffineF2 {
            rows: mat_mul(&self.rows, &other.rows),
            vector: self.apply(other.vector),
        }
    }

    /// Left-to-right product `self · next`: apply `self`, then `next`.
    pub fn then(&self, next: &AffineF2) -> AffineF2 {
        next.compose(self)
    }

    pub fn pow(&self, k: usize) -> AffineF2 {
        (0..k).fold(AffineF2::IDENTITY, |acc, _| acc.then(self))
    }

    pub fn is_identity(&self) -> bool {
        *self == AffineF2::IDENTITY
    }

    pub fn order(&self) -> usize {
        let mut p = *self;
        let mut k = 1;
        while !p.is_identity() {
            p = p.then(self);
            k += 1;
        }
        k
    }

    pub fn inverse(&self) -> AffineF2 {
        self.pow(self.order() - 1)
    }

    pub fn is_invertible(&self) -> bool {
        // the images of the basis vectors span F_2^4
        let mut span = vec![0u8];
        for k in 0..4 {
            let col = mat_vec(&self.rows, 1 << k);
            if span.contains(&col) {
                return false;
            }
            let new: Vec<u8> = span.iter().map(|s| s ^ col).collect();
            span.extend(new);
        }
        true
    }
}

/// `a = (M, 1001)`, `b = (M^2, 1011)`, `c = (M^4, 0101)`.
pub fn example_generators() -> [AffineF2; 3] {
    let m = AffineF2::linear(AffineF2::M);
    let with = |k: usize, v: u8| AffineF2 {
        rows: m.pow(k).rows,
        vector: v,
    };
    [
        with(1, bits([1, 0, 0, 1])),
        with(2, bits([1, 0, 1, 1])),
        with(4, bits([0, 1, 0, 1])),
    ]
}

/// Right Cayley graph `{g, g·s}` of a finite group.
#[derive(Clone, Debug)]
pub struct FiniteCayleyGraph {
    pub graph: Graph,
    pub identity: usize,
    pub generator_labels: Vec<String>,
    /// `mult[g][i]` is the vertex `g · s_i`.
    pub mult: Vec<Vec<usize>>,
}

impl FiniteCayleyGraph {
    pub fn order(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Vertex `Id · w` for a word of generator indices.
    pub fn evaluate(&self, word: &[usize]) -> usize {
        word.iter().fold(self.identity, |g, &s| self.mult[g][s])
    }
}

/// The 112-element group with its Cayley graph on `{a, b, c, a^-1, b^-1, c^-1}`.
#[derive(Clone, Debug)]
pub struct ExampleGroup {
    pub elements: Vec<AffineF2>,
    pub index: HashMap<AffineF2, usize>,
    pub generators: Vec<AffineF2>,
    pub cayley: FiniteCayleyGraph,
}

pub const LETTERS: [&str; 6] = ["a", "b", "c", "a^-1", "b^-1", "c^-1"];

/// Inverse letter of generator index `i`.
pub fn inverse_letter(i: usize) -> usize {
    (i + 3) % 6
}

pub fn build_example_group() -> ExampleGroup {
    let [a, b, c] = example_generators();
    let generators = vec![a, b, c, a.inverse(), b.inverse(), c.inverse()];
    let mut elements = vec![AffineF2::IDENTITY];
    let mut words = vec![Vec::<usize>::new()];
    let mut index = HashMap::from([(AffineF2::IDENTITY, 0)]);
    let mut mult: Vec<Vec<usize>> = Vec::new();
    let mut head = 0;
    while head < elements.len() {
        let g = elements[head];
        let mut row = Vec::with_capacity(6);
        for (i, s) in generators.iter().enumerate() {
            let h = g.then(s);
            let id = *index.entry(h).or_insert_with(|| {
                elements.push(h);
                let mut w = words[head].clone();
                w.push(i);
                words.push(w);
                elements.len() - 1
            });
            row.push(id);
        }
        mult.push(row);
        head += 1;
    }
    assert_eq!(elements.len(), 112, "closure of a, b, c has the wrong order");
    let mut edges = Vec::new();
    for (g, row) in mult.iter().enumerate() {
        for &h in row {
            if g < h {
                edges.push((g, h));
            }
        }
    }
    let labels = words
        .iter()
        .map(|w| {
            if w.is_empty() {
                "Id".to_string()
            } else {
                w.iter().map(|&i| LETTERS[i]).collect::<Vec<_>>().join(" ")
            }
        })
        .collect();
    let graph = Graph::from_edges(elements.len(), edges)
        .expect("Cayley graph edges are valid")
        .with_labels(labels);
    ExampleGroup {
        elements,
        index,
        generators,
        cayley: FiniteCayleyGraph {
            graph,
            identity: 0,
            generator_labels: LETTERS.iter().map(|s| s.to_string()).collect(),
            mult,
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relators {
    pub length: usize,
    /// Words (generator indices) that are the identity in the group but not
    /// in the free group.
    pub nontrivial: Vec<Vec<usize>>,
    pub trivial: usize,
}

/// Free reduction of a word.
pub fn freely_reduce(word: &[usize]) -> Vec<usize> {
    let mut stack: Vec<usize> = Vec::with_capacity(word.len());
    for &s in word {
        if stack.last() == Some(&inverse_letter(s)) {
            stack.pop();
        } else {
            stack.push(s);
        }
    }
    stack
}

/// All words of the given length over the six letters that evaluate to the
/// identity, by walking the Cayley graph.
pub fn enumerate_relators(cg: &FiniteCayleyGraph, length: usize) -> Result<Relators> {
    if length > 6 {
        return Err(Error::BadParameters(format!("relator length {length} exceeds 6")));
    }
    let k = cg.generator_labels.len();
    if k != LETTERS.len() {
        return Err(Error::BadParameters(format!("expected the six letters {LETTERS:?}")));
    }
    let mut out = Relators {
        length,
        nontrivial: Vec::new(),
        trivial: 0,
    };
    let mut word = vec![0usize; length];
    let total = k.pow(length as u32);
    for code in 0..total {
        let mut c = code;
        for slot in word.iter_mut().rev() {
            *slot = c % k;
            c /= k;
        }
        if cg.evaluate(&word) != cg.identity {
            continue;
        }
        if freely_reduce(&word).is_empty() {
            out.trivial += 1;
        } else {
            out.nontrivial.push(word.clone());
        }
    }
    Ok(out)
}

/// Subgroup generated by all commutators `g h g^-1 h^-1`.
pub fn commutator_subgroup(eg: &ExampleGroup) -> Vec<AffineF2> {
    let mut gens = Vec::new();
    for g in &eg.elements {
        for h in &eg.elements {
            gens.push(g.then(h).then(&g.inverse()).then(&h.inverse()));
        }
    }
    gens.sort();
    gens.dedup();
    let mut sub = vec![AffineF2::IDENTITY];
    let mut head = 0;
    while head < sub.len() {
        let x = sub[head];
        head += 1;
        for s in &gens {
            let y = x.then(s);
            if !sub.contains(&y) {
                sub.push(y);
            }
        }
    }
    sub.sort();
    sub
}

/// Order of `g` modulo a normal subgroup (given sorted).
pub fn order_modulo(g: &AffineF2, normal: &[AffineF2]) -> usize {
    let mut p = *g;
    let mut k = 1;
    while normal.binary_search(&p).is_err() {
        p = p.then(g);
        k += 1;
    }
    k
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub d: usize,
    pub vertices: usize,
    pub regular_degree: Option<usize>,
    pub bipartite: bool,
    pub girth: Option<usize>,
    pub two_locally: bool,
    pub weakly_three_locally: bool,
    pub cover_status: CoverStatus,
    pub obstruction: Option<ObstructionTag>,
}

/// Local and global checks on a Cayley graph that should be 2-locally `L^d`
/// without a covering map.
pub fn verify_counterexample(cg: &FiniteCayleyGraph, d: usize) -> Result<CounterexampleReport> {
    let g = &cg.graph;
    let seed = seed_map(g, cg.identity, d)?;
    let pc = extend_cover(g, &seed, 4)?;
    Ok(CounterexampleReport {
        d,
        vertices: g.vertex_count(),
        regular_degree: g.regular_degree(),
        bipartite: is_bipartite(g).is_bipartite(),
        girth: girth(g),
        two_locally: is_r_locally(g, d, 2)?.holds,
        weakly_three_locally: is_weakly_r_locally(g, d, 3)?.holds,
        cover_status: pc.status,
        obstruction: pc.obstruction.map(|o| o.tag),
    })
}

pub const DEFAULT_PRODUCT_CAP: usize = 5;

/// Cayley graph of `Γ × Z_14^{d-3}` on `S × {0} ∪ {(Id, ±f_i)}`.
pub fn build_product_extension(d: usize, cap: usize) -> Result<FiniteCayleyGraph> {
    if d < 4 {
        return Err(Error::UnsupportedDimension {
            requirement: ">= 4",
            got: d,
        });
    }
    if d > cap {
        return Err(Error::CapExceeded(format!("d = {d} above the cap {cap}")));
    }
    let base = build_example_group();
    let n0 = base.elements.len();
    let m = d - 3;
    let zsize = 14usize.pow(m as u32);
    let n = n0 * zsize;
    let mut labels: Vec<String> = LETTERS.iter().map(|s| s.to_string()).collect();
    for i in 1..=m {
        labels.push(format!("+f{i}"));
        labels.push(format!("-f{i}"));
    }
    let mut mult = Vec::with_capacity(n);
    for v in 0..n {
        let (g, z) = (v % n0, v / n0);
        let mut row: Vec<usize> = base.cayley.mult[g].iter().map(|&h| h + n0 * z).collect();
        let mut stride = 1;
        for _ in 0..m {
            let digit = (z / stride) % 14;
            for step in [1, 13] {
                let nd = (digit + step) % 14;
                let nz = z - digit * stride + nd * stride;
                row.push(g + n0 * nz);
            }
            stride *= 14;
        }
        mult.push(row);
    }
    let mut edges = Vec::new();
    for (v, row) in mult.iter().enumerate() {
        for &w in row {
            if v < w {
                edges.push((v, w));
            }
        }
    }
    Ok(FiniteCayleyGraph {
        graph: Graph::from_edges(n, edges)?,
        identity: 0,
        generator_labels: labels,
        mult,
    })
}
