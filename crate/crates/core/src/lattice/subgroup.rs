use std::collections::HashMap;

use super::hnf;
use super::{LatticeAut, SignedPerm};
use crate::error::{Error, Result};

/// Finitely generated subgroup of `Aut(L^d)` with its point group, one coset
/// representative per point-group element, and the translation lattice in HNF.
#[derive(Clone, Debug)]
pub struct SubgroupSpec {
    d: usize,
    generators: Vec<LatticeAut>,
    point_group: Vec<SignedPerm>,
    coset_reps: Vec<LatticeAut>,
    point_index: HashMap<SignedPerm, usize>,
    lattice: Vec<Vec<i64>>,
}

impl SubgroupSpec {
    /// Closes the point parts of `generators` in `B_d` and collects the
    /// Schreier generators of the kernel of the projection to the point group;
    /// their translation parts span the translation lattice.
    pub fn new(d: usize, generators: Vec<LatticeAut>) -> Result<Self> {
        for g in &generators {
            if g.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: g.dim(),
                });
            }
        }
        let mut point_group = vec![SignedPerm::identity(d)];
        let mut coset_reps = vec![LatticeAut::identity(d)];
        let mut point_index = HashMap::from([(SignedPerm::identity(d), 0)]);
        let mut translations: Vec<Vec<i64>> = Vec::new();
        let mut head = 0;
        while head < point_group.len() {
            let rep = coset_reps[head].clone();
            head += 1;
            for s in &generators {
                let prod = s.compose_unchecked(&rep);
                match point_index.get(&prod.sigma) {
                    Some(&q) => {
                        let t = coset_reps[q].inverse().compose_unchecked(&prod);
                        debug_assert!(t.is_translation());
                        if t.trans.iter().any(|&v| v != 0) {
                            translations.push(t.trans);
                        }
                    }
                    None => {
                        point_index.insert(prod.sigma.clone(), point_group.len());
                        point_group.push(prod.sigma.clone());
                        coset_reps.push(prod);
                    }
                }
            }
        }
        let lattice = hnf::hnf(&translations, d);
        Ok(SubgroupSpec {
            d,
            generators,
            point_group,
            coset_reps,
            point_index,
            lattice,
        })
    }

    pub fn translations(d: usize, vectors: &[Vec<i64>]) -> Result<Self> {
        Self::new(d, vectors.iter().map(|v| LatticeAut::translation(v)).collect())
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn generators(&self) -> &[LatticeAut] {
        &self.generators
    }

    /// Point group, identity first.
    pub fn point_group(&self) -> &[SignedPerm] {
        &self.point_group
    }

    /// `coset_reps()[k]` has point part `point_group()[k]`.
    pub fn coset_reps(&self) -> &[LatticeAut] {
        &self.coset_reps
    }

    /// Translation lattice basis in HNF.
    pub fn lattice_basis(&self) -> &[Vec<i64>] {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_cocompact(&self) -> bool {
        self.rank() == self.d
    }

    pub fn require_cocompact(&self) -> Result<()> {
        if self.is_cocompact() {
            Ok(())
        } else {
            Err(Error::NonCocompact {
                rank: self.rank(),
                dim: self.d,
            })
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.point_group.len() == 1 && self.lattice.is_empty()
    }

    /// Index of the translation lattice in `Z^d` (full rank only).
    pub fn lattice_index(&self) -> Result<u64> {
        self.require_cocompact()?;
        Ok(hnf::index(&self.lattice))
    }

    pub fn point_index_of(&self, sigma: &SignedPerm) -> Option<usize> {
        self.point_index.get(sigma).copied()
    }

    pub fn contains(&self, g: &LatticeAut) -> bool {
        let Some(k) = self.point_index_of(&g.sigma) else {
            return false;
        };
        let t = self.coset_reps[k].inverse().compose_unchecked(g);
        hnf::contains(&self.lattice, &t.trans)
    }

    /// Canonical residue of `x` modulo the translation lattice.
    pub fn reduce(&self, x: &[i64]) -> Vec<i64> {
        hnf::reduce(&self.lattice, x)
    }

    /// Canonical orbit representative of a lattice point: the lexicographic
    /// minimum over the point-group images of the reduced residues.
    pub fn canonical(&self, x: &[i64]) -> Vec<i64> {
        let mut best: Option<Vec<i64>> = None;
        let mut buf = vec![0; self.d];
        for rep in &self.coset_reps {
            rep.sigma.apply_into(x, &mut buf);
            for (b, t) in buf.iter_mut().zip(&rep.trans) {
                *b += t;
            }
            hnf::reduce_in_place(&self.lattice, &mut buf);
            if best.as_ref().is_none_or(|b| buf < *b) {
                best = Some(buf.clone());
            }
        }
        best.unwrap()
    }

    /// Every residue of `Z^d` modulo the translation lattice.
    pub fn residues(&self) -> Result<Vec<Vec<i64>>> {
        self.require_cocompact()?;
        let bounds: Vec<i64> = (0..self.d).map(|k| self.lattice[k][k]).collect();
        let total: u64 = bounds.iter().map(|&b| b as u64).product();
        let mut out = Vec::with_capacity(total as usize);
        let mut x = vec![0i64; self.d];
        loop {
            out.push(x.clone());
            let mut k = self.d;
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                x[k] += 1;
                if x[k] < bounds[k] {
                    break;
                }
                x[k] = 0;
            }
        }
    }

    /// Number of orbits of the group on `Z^d` (Burnside over the residues).
    pub fn orbit_count(&self) -> Result<u64> {
        let residues = self.residues()?;
        let mut fixed = 0u64;
        let mut buf = vec![0; self.d];
        for rep in &self.coset_reps {
            for x in &residues {
                rep.sigma.apply_into(x, &mut buf);
                for (b, t) in buf.iter_mut().zip(&rep.trans) {
                    *b += t;
                }
                hnf::reduce_in_place(&self.lattice, &mut buf);
                if buf == *x {
                    fixed += 1;
                }
            }
        }
        Ok(fixed / self.coset_reps.len() as u64)
    }
}

/// Closure of a set of signed permutations under composition.
pub fn point_group_closure(d: usize, gens: &[SignedPerm]) -> Vec<SignedPerm> {
    let mut group = vec![SignedPerm::identity(d)];
    let mut seen: HashMap<SignedPerm, ()> = HashMap::from([(SignedPerm::identity(d), ())]);
    let mut head = 0;
    while head < group.len() {
        let p = group[head].clone();
        head += 1;
        for s in gens {
            let q = s.compose(&p);
            if seen.insert(q.clone(), ()).is_none() {
                group.push(q);
            }
        }
    }
    group
}
