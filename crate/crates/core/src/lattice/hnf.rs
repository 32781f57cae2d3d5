//! Integer row echelon / Hermite normal form for small lattices.
//!
//! Bases are stored as rows. A basis in HNF has strictly increasing pivot
//! columns, zeros left of each pivot, positive pivots, and entries above each
//! pivot reduced into `[0, pivot)`.

/// HNF of the lattice spanned by `rows` (all of length `dim`). Zero rows are
/// dropped, so the result length is the rank.
pub fn hnf(rows: &[Vec<i64>], dim: usize) -> Vec<Vec<i64>> {
    hnf_with_transform(rows, dim).0
}

/// HNF together with a transform `u` such that `h[k] = Σ_i u[k][i] * rows[i]`.
pub fn hnf_with_transform(rows: &[Vec<i64>], dim: usize) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let m = rows.len();
    let mut a: Vec<Vec<i64>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            assert_eq!(r.len(), dim, "row of wrong length");
            let mut aug = r.clone();
            aug.extend((0..m).map(|j| i64::from(i == j)));
            aug
        })
        .collect();

    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..dim {
        if pivot_row == m {
            break;
        }
        loop {
            let best = (pivot_row..m)
                .filter(|&r| a[r][col] != 0)
                .min_by_key(|&r| a[r][col].abs());
            let Some(best) = best else { break };
            a.swap(pivot_row, best);
            let p = a[pivot_row][col];
            let mut done = true;
            for r in (pivot_row + 1)..m {
                let q = a[r][col].div_euclid(p);
                if q != 0 {
                    sub_multiple(&mut a, r, pivot_row, q);
                }
                if a[r][col] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[pivot_row][col] == 0 {
            continue;
        }
        if a[pivot_row][col] < 0 {
            for v in a[pivot_row].iter_mut() {
                *v = -*v;
            }
        }
        let p = a[pivot_row][col];
        for r in 0..pivot_row {
            let q = a[r][col].div_euclid(p);
            if q != 0 {
                sub_multiple(&mut a, r, pivot_row, q);
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    a.truncate(pivot_row);
    let h = a.iter().map(|r| r[..dim].to_vec()).collect();
    let u = a.iter().map(|r| r[dim..].to_vec()).collect();
    (h, u)
}

fn sub_multiple(a: &mut [Vec<i64>], target: usize, source: usize, q: i64) {
    let (t, s) = if target < source {
        let (lo, hi) = a.split_at_mut(source);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(target);
        (&mut hi[0], &lo[source])
    };
    for (x, y) in t.iter_mut().zip(s.iter()) {
        *x -= q * y;
    }
}

pub fn pivot_col(row: &[i64]) -> usize {
    row.iter().position(|&v| v != 0).expect("zero row in HNF")
}

/// Coefficients `c` with `Σ c[k] * h[k] = x`, if `x` lies in the lattice.
pub fn solve(h: &[Vec<i64>], x: &[i64]) -> Option<Vec<i64>> {
    let mut w = x.to_vec();
    let mut coeffs = Vec::with_capacity(h.len());
    for row in h {
        let c = pivot_col(row);
        if w[c] % row[c] != 0 {
            return None;
        }
        let q = w[c] / row[c];
        for (wi, ri) in w.iter_mut().zip(row) {
            *wi -= q * ri;
        }
        coeffs.push(q);
    }
    w.iter().all(|&v| v == 0).then_some(coeffs)
}

pub fn contains(h: &[Vec<i64>], x: &[i64]) -> bool {
    solve(h, x).is_some()
}

/// Canonical representative of `x` modulo a full-rank HNF basis: the unique
/// point of `x + L` with `0 <= y_k < h[k][k]` for every `k`.
pub fn reduce(h: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    let mut y = x.to_vec();
    reduce_in_place(h, &mut y);
    y
}

#[inline]
pub fn reduce_in_place(h: &[Vec<i64>], y: &mut [i64]) {
    for (k, row) in h.iter().enumerate() {
        let q = y[k].div_euclid(row[k]);
        if q != 0 {
            for (yi, ri) in y.iter_mut().zip(row) {
                *yi -= q * ri;
            }
        }
    }
}

/// Absolute determinant (index in `Z^d`) of a full-rank HNF basis.
pub fn index(h: &[Vec<i64>]) -> u64 {
    h.iter()
        .enumerate()
        .map(|(k, r)| r[k].unsigned_abs())
        .product()
}

/// Least `ℓ1` norm over the coset `c + L` of a full-rank lattice given in
/// HNF, optionally skipping the zero vector. Returns the norm and a minimiser.
///
/// Depth-first over the triangular coordinates with branch-and-bound on the
/// partial `ℓ1` sum: coordinate `j` only depends on coefficients `0..=j`.
pub fn min_l1_in_coset(h: &[Vec<i64>], c: &[i64], skip_zero: bool) -> Option<(u64, Vec<i64>)> {
    let d = c.len();
    assert_eq!(h.len(), d, "full-rank basis required");
    let start = reduce(h, c);
    let norm = |v: &[i64]| -> u64 { v.iter().map(|x| x.unsigned_abs()).sum() };
    let mut best: Option<(u64, Vec<i64>)> = None;
    if !(skip_zero && start.iter().all(|&v| v == 0)) {
        best = Some((norm(&start), start.clone()));
    }
    if skip_zero {
        for row in h {
            let n = norm(row);
            if best.as_ref().is_none_or(|(b, _)| n < *b) {
                best = Some((n, row.clone()));
            }
        }
    }
    let mut w = start.clone();
    search(h, 0, &mut w, 0, skip_zero, &mut best);
    best
}

fn search(
    h: &[Vec<i64>],
    j: usize,
    w: &mut Vec<i64>,
    acc: u64,
    skip_zero: bool,
    best: &mut Option<(u64, Vec<i64>)>,
) {
    let d = w.len();
    if j == d {
        if skip_zero && w.iter().all(|&v| v == 0) {
            return;
        }
        if best.as_ref().is_none_or(|(b, _)| acc < *b) {
            *best = Some((acc, w.clone()));
        }
        return;
    }
    let bound = best.as_ref().map_or(i64::MAX / 4, |(b, _)| *b as i64);
    let rem = bound - acc as i64;
    if rem < 0 {
        return;
    }
    let p = h[j][j];
    let base = w[j];
    // |base + k p| <= rem
    let lo = (-rem - base).div_euclid(p) + i64::from((-rem - base).rem_euclid(p) != 0);
    let hi = (rem - base).div_euclid(p);
    for k in lo..=hi {
        for (wi, ri) in w.iter_mut().zip(&h[j]) {
            *wi += k * ri;
        }
        let wj = w[j].unsigned_abs();
        let acc2 = acc + wj;
        let still = best.as_ref().is_none_or(|(b, _)| acc2 < *b);
        if still {
            search(h, j + 1, w, acc2, skip_zero, best);
        }
        for (wi, ri) in w.iter_mut().zip(&h[j]) {
            *wi -= k * ri;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_of_generic_pair() {
        let h = hnf(&[vec![9, 3], vec![3, 6]], 2);
        assert_eq!(h.len(), 2);
        assert_eq!(index(&h), 45);
        assert!(contains(&h, &[9, 3]));
        assert!(contains(&h, &[12, 9]));
        assert!(!contains(&h, &[1, 0]));
    }

    #[test]
    fn transform_reproduces_rows() {
        let rows = vec![vec![4, 6, 2], vec![2, 2, 8], vec![6, 8, 10]];
        let (h, u) = hnf_with_transform(&rows, 3);
        for (hk, uk) in h.iter().zip(&u) {
            let mut acc = vec![0; 3];
            for (ui, r) in uk.iter().zip(&rows) {
                for (a, v) in acc.iter_mut().zip(r) {
                    *a += ui * v;
                }
            }
            assert_eq!(&acc, hk);
        }
        assert_eq!(h.len(), 2); // third row is the sum of the first two
    }

    #[test]
    fn reduce_is_canonical() {
        let h = hnf(&[vec![9, 3], vec![3, 6]], 2);
        let a = reduce(&h, &[100, -37]);
        let b = reduce(&h, &[100 + 9 * 4 - 3, -37 + 3 * 4 - 6]);
        assert_eq!(a, b);
        for k in 0..2 {
            assert!(a[k] >= 0 && a[k] < h[k][k]);
        }
    }

    #[test]
    fn shortest_l1_vector() {
        let h = hnf(&[vec![9, 3], vec![3, 6]], 2);
        let (n, v) = min_l1_in_coset(&h, &[0, 0], true).unwrap();
        assert_eq!(n, 9);
        assert!(contains(&h, &v));
        // brute force oracle over a box
        let mut best = u64::MAX;
        for a in -20i64..=20 {
            for b in -20i64..=20 {
                if (a, b) == (0, 0) {
                    continue;
                }
                let v = [9 * a + 3 * b, 3 * a + 6 * b];
                best = best.min(v[0].unsigned_abs() + v[1].unsigned_abs());
            }
        }
        assert_eq!(best, 9);
    }
}
