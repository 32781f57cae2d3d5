//! Automorphisms of the lattice graph on `Z^d` and their finitely generated
//! subgroups: translation lattices, displacement, torsion and quotients.

mod aut;
mod displacement;
pub mod hnf;
mod io;
mod perm;
mod quotient;
mod subgroup;

pub use aut::LatticeAut;
pub use displacement::{is_torsion_free, min_displacement, Torsion};
pub use io::{parse_group, write_group};
pub use perm::SignedPerm;
pub use quotient::{build_quotient, QuotientGraph};
pub use subgroup::{point_group_closure, SubgroupSpec};

/// The `2d` unit steps `+e_1, -e_1, ..., +e_d, -e_d`.
pub fn unit_steps(d: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::with_capacity(2 * d);
    for i in 0..d {
        for s in [1, -1] {
            let mut v = vec![0; d];
            v[i] = s;
            out.push(v);
        }
    }
    out
}

pub fn l1(v: &[i64]) -> u64 {
    v.iter().map(|x| x.unsigned_abs()).sum()
}

/// `"(x,y,...)"`.
pub fn point_label(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}
