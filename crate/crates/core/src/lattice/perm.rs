use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Element of the hyperoctahedral group `B_d`: `images[i] = ±(j+1)` means
/// the basis vector `e_i` is sent to `±e_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i32>", into = "Vec<i32>")]
pub struct SignedPerm {
    images: Vec<i32>,
}

impl SignedPerm {
    pub fn identity(d: usize) -> Self {
        SignedPerm {
            images: (1..=d as i32).collect(),
        }
    }

    /// Validates that `|images|` is a permutation of `1..=d`.
    pub fn new(images: Vec<i32>) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &s in &images {
            let j = s.unsigned_abs() as usize;
            if s == 0 || j > d || seen[j - 1] {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
            seen[j - 1] = true;
        }
        Ok(SignedPerm { images })
    }

    /// Coordinate negation `x -> -x`.
    pub fn negation(d: usize) -> Self {
        SignedPerm {
            images: (1..=d as i32).map(|i| -i).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[i32] {
        &self.images
    }

    /// `(j, sign)` with `e_i -> sign * e_j`.
    #[inline]
    pub fn image(&self, i: usize) -> (usize, i64) {
        let s = self.images[i];
        (s.unsigned_abs() as usize - 1, s.signum() as i64)
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        let mut y = vec![0; x.len()];
        self.apply_into(x, &mut y);
        y
    }

    #[inline]
    pub fn apply_into(&self, x: &[i64], y: &mut [i64]) {
        for (i, &xi) in x.iter().enumerate() {
            let (j, s) = self.image(i);
            y[j] = s * xi;
        }
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        assert_eq!(self.dim(), other.dim(), "signed permutations of different dimension");
        let images = other
            .images
            .iter()
            .map(|&s| {
                let (j, sign) = (s.unsigned_abs() as usize - 1, s.signum());
                self.images[j] * sign
            })
            .collect();
        SignedPerm { images }
    }

    pub fn inverse(&self) -> SignedPerm {
        let mut images = vec![0; self.dim()];
        for (i, &s) in self.images.iter().enumerate() {
            let j = s.unsigned_abs() as usize - 1;
            images[j] = (i as i32 + 1) * s.signum();
        }
        SignedPerm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &s)| s == i as i32 + 1)
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = self.compose(&p);
            k += 1;
        }
        k
    }

    /// Determinant of the corresponding orthogonal matrix (`±1`).
    pub fn det(&self) -> i64 {
        let d = self.dim();
        let mut sign: i64 = self.images.iter().map(|&s| s.signum() as i64).product();
        let mut visited = vec![false; d];
        for start in 0..d {
            if visited[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !visited[i] {
                visited[i] = true;
                i = self.images[i].unsigned_abs() as usize - 1;
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }

    /// All `2^d d!` elements of `B_d`, in lexicographic order of `images`.
    pub fn all(d: usize) -> Vec<SignedPerm> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(d);
        let mut used = vec![false; d];
        fn rec(d: usize, current: &mut Vec<i32>, used: &mut [bool], out: &mut Vec<SignedPerm>) {
            if current.len() == d {
                out.push(SignedPerm {
                    images: current.clone(),
                });
                return;
            }
            for j in 0..d {
                if used[j] {
                    continue;
                }
                used[j] = true;
                for s in [-1, 1] {
                    current.push(s * (j as i32 + 1));
                    rec(d, current, used, out);
                    current.pop();
                }
                used[j] = false;
            }
        }
        rec(d, &mut current, &mut used, &mut out);
        out.sort();
        out
    }
}

impl TryFrom<Vec<i32>> for SignedPerm {
    type Error = Error;

    fn try_from(images: Vec<i32>) -> Result<Self> {
        SignedPerm::new(images)
    }
}

impl From<SignedPerm> for Vec<i32> {
    fn from(p: SignedPerm) -> Self {
        p.images
    }
}

impl fmt::Display for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}
