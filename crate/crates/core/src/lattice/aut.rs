use std::fmt;

use serde::{Deserialize, Serialize};

use super::SignedPerm;
use crate::error::{Error, Result};

/// Automorphism `x -> sigma(x) + trans` of the lattice graph on `Z^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeAut {
    pub sigma: SignedPerm,
    pub trans: Vec<i64>,
}

impl LatticeAut {
    pub fn new(sigma: SignedPerm, trans: Vec<i64>) -> Result<Self> {
        if sigma.dim() != trans.len() {
            return Err(Error::DimensionMismatch {
                expected: sigma.dim(),
                got: trans.len(),
            });
        }
        Ok(LatticeAut { sigma, trans })
    }

    pub fn identity(d: usize) -> Self {
        LatticeAut {
            sigma: SignedPerm::identity(d),
            trans: vec![0; d],
        }
    }

    pub fn translation(v: &[i64]) -> Self {
        LatticeAut {
            sigma: SignedPerm::identity(v.len()),
            trans: v.to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.trans.len()
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        let mut y = self.sigma.apply(x);
        for (yi, ti) in y.iter_mut().zip(&self.trans) {
            *yi += ti;
        }
        y
    }

    /// `self ∘ other`: acts as `x -> self(other(x))`.
    pub fn compose(&self, other: &LatticeAut) -> Result<LatticeAut> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &LatticeAut) -> LatticeAut {
        LatticeAut {
            sigma: self.sigma.compose(&other.sigma),
            trans: self.apply(&other.trans),
        }
    }

    pub fn inverse(&self) -> LatticeAut {
        let inv = self.sigma.inverse();
        let trans = inv.apply(&self.trans).into_iter().map(|t| -t).collect();
        LatticeAut { sigma: inv, trans }
    }

    pub fn is_identity(&self) -> bool {
        self.sigma.is_identity() && self.trans.iter().all(|&t| t == 0)
    }

    pub fn is_translation(&self) -> bool {
        self.sigma.is_identity()
    }

    pub fn pow(&self, k: usize) -> LatticeAut {
        let mut acc = LatticeAut::identity(self.dim());
        for _ in 0..k {
            acc = self.compose_unchecked(&acc);
        }
        acc
    }

    /// Order of the element, or `None` if it has infinite order.
    pub fn order(&self) -> Option<usize> {
        let k = self.sigma.order();
        self.pow(k).is_identity().then(|| {
            (1..=k).find(|&m| self.pow(m).is_identity()).unwrap()
        })
    }
}

impl fmt::Display for LatticeAut {
    /// Same syntax as a generator line of a group file.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.trans.iter().map(|v| v.to_string()).collect();
        write!(f, "perm {} trans {}", self.sigma, t.join(" "))
    }
}
