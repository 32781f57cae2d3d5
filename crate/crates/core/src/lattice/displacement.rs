use serde::{Deserialize, Serialize};

use super::{hnf, LatticeAut, SubgroupSpec};
use crate::error::Result;

/// Least `ℓ1` distance any non-identity element moves any lattice point, or
/// `None` for the trivial group.
///
/// For a point part `σ` with coset representative translation `v0`, the
/// displacements `σx + v0 + λ - x` range over the coset `v0 + M` with
/// `M = (σ - I)Z^d + L`, so each coset is a closest-vector problem in `ℓ1`.
pub fn min_displacement(spec: &SubgroupSpec) -> Result<Option<u64>> {
    if spec.is_trivial() {
        return Ok(None);
    }
    spec.require_cocompact()?;
    let d = spec.dim();
    let mut best: Option<u64> = None;
    for rep in spec.coset_reps() {
        let value = if rep.sigma.is_identity() {
            hnf::min_l1_in_coset(spec.lattice_basis(), &vec![0; d], true).map(|(n, _)| n)
        } else {
            let mut rows: Vec<Vec<i64>> = spec.lattice_basis().to_vec();
            for j in 0..d {
                let mut col = vec![0; d];
                col[j] = 1;
                let mut img = rep.sigma.apply(&col);
                img[j] -= 1;
                rows.push(img);
            }
            let m = hnf::hnf(&rows, d);
            hnf::min_l1_in_coset(&m, &rep.trans, false).map(|(n, _)| n)
        };
        if let Some(v) = value {
            best = Some(best.map_or(v, |b| b.min(v)));
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Torsion {
    pub torsion_free: bool,
    /// A non-identity element of finite order, with that order.
    pub witness: Option<(LatticeAut, usize)>,
}

/// An element `(σ, w)` satisfies `(σ, w)^k = t_{N w}` with `k = ord(σ)` and
/// `N = Σ_{i<k} σ^i`; it has finite order iff `N w = 0`. Each coset
/// `w ∈ v0 + L` is searched by solving `N λ = -N v0` over `L`.
pub fn is_torsion_free(spec: &SubgroupSpec) -> Result<Torsion> {
    spec.require_cocompact()?;
    let d = spec.dim();
    let basis = spec.lattice_basis();
    for rep in spec.coset_reps() {
        if rep.sigma.is_identity() {
            continue;
        }
        let k = rep.sigma.order();
        let apply_n = |x: &[i64]| -> Vec<i64> {
            let mut acc = vec![0; d];
            let mut cur = x.to_vec();
            for _ in 0..k {
                for (a, c) in acc.iter_mut().zip(&cur) {
                    *a += c;
                }
                cur = rep.sigma.apply(&cur);
            }
            acc
        };
        let images: Vec<Vec<i64>> = basis.iter().map(|b| apply_n(b)).collect();
        let target: Vec<i64> = apply_n(&rep.trans).into_iter().map(|x| -x).collect();
        let (h, u) = hnf::hnf_with_transform(&images, d);
        let Some(y) = hnf::solve(&h, &target) else {
            continue;
        };
        let mut lambda = vec![0i64; d];
        for (yk, uk) in y.iter().zip(&u) {
            for (ci, b) in uk.iter().zip(basis) {
                for (l, bv) in lambda.iter_mut().zip(b) {
                    *l += yk * ci * bv;
                }
            }
        }
        let trans: Vec<i64> = rep.trans.iter().zip(&lambda).map(|(a, b)| a + b).collect();
        let w = LatticeAut {
            sigma: rep.sigma.clone(),
            trans,
        };
        let order = w.order().expect("torsion witness has finite order");
        return Ok(Torsion {
            torsion_free: false,
            witness: Some((w, order)),
        });
    }
    Ok(Torsion {
        torsion_free: true,
        witness: None,
    })
}
