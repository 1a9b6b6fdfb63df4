//! Exact integer and field linear algebra.
//!
//! Two independent rank routes live here: fraction-free (Bareiss) elimination
//! over the integers, and plain Gaussian elimination over any [`Scalar`]
//! field (rationals, or a prime field for the Monte-Carlo fast path).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lift, Fp, Scalar, MERSENNE_61};

/// A sparse integer matrix stored by rows. Duplicate column indices inside a
/// row are allowed and are summed when densified.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub ncols: usize,
    pub rows: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn new(ncols: usize) -> Self {
        SparseMatrix { ncols, rows: Vec::new() }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn push_row(&mut self, row: Vec<(usize, i64)>) {
        debug_assert!(row.iter().all(|&(c, _)| c < self.ncols));
        self.rows.push(row);
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        self.rows
            .iter()
            .map(|r| {
                let mut d = vec![0i64; self.ncols];
                for &(c, v) in r {
                    d[c] += v;
                }
                d
            })
            .collect()
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut rows = vec![Vec::new(); self.ncols];
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, v) in row {
                rows[c].push((r, v));
            }
        }
        SparseMatrix {
            ncols: self.rows.len(),
            rows,
        }
    }

    /// Product `self * other` where `self` is `m x k` and `other` is `k x n`.
    pub fn mul(&self, other: &SparseMatrix) -> Vec<Vec<i64>> {
        assert_eq!(self.ncols, other.nrows());
        let other_dense = other.to_dense();
        self.rows
            .iter()
            .map(|r| {
                let mut out = vec![0i64; other.ncols];
                for &(k, v) in r {
                    for (o, w) in out.iter_mut().zip(&other_dense[k]) {
                        *o += v * w;
                    }
                }
                out
            })
            .collect()
    }
}

/// How ranks are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RankMethod {
    /// Fraction-free integer elimination for every matrix.
    Exact,
    /// Ranks modulo 2^61 - 1 for every matrix.
    Modular,
    /// Exact when `rows * cols <= exact_limit`, modular above it.
    Auto { exact_limit: usize },
}

impl Default for RankMethod {
    fn default() -> Self {
        RankMethod::Auto { exact_limit: 250_000 }
    }
}

impl RankMethod {
    /// Rank of `m`. Tall matrices are transposed first: eliminating along the
    /// short side leaves far fewer rows to reduce to zero.
    pub fn rank(&self, m: &SparseMatrix) -> usize {
        if m.nrows() > m.ncols {
            return self.rank_oriented(&m.transpose());
        }
        self.rank_oriented(m)
    }

    fn rank_oriented(&self, m: &SparseMatrix) -> usize {
        let cells = m.nrows().saturating_mul(m.ncols);
        match *self {
            RankMethod::Exact => exact_rank(m),
            RankMethod::Modular => sparse_rank_field::<Fp<MERSENNE_61>>(m),
            RankMethod::Auto { exact_limit } if cells <= exact_limit => exact_rank(m),
            RankMethod::Auto { .. } => sparse_rank_field::<Fp<MERSENNE_61>>(m),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, RankMethod::Exact)
    }
}

/// Exact rank: sparse integer elimination, falling back to dense
/// arbitrary-precision Bareiss if an entry overflows `i128`.
pub fn exact_rank(m: &SparseMatrix) -> usize {
    sparse_rank_int(m).unwrap_or_else(|| bareiss_rank(m))
}

/// Rows sorted by column with duplicates merged and zeros dropped; shortest
/// rows first so that sparse pivots are taken early.
fn normalized_rows(m: &SparseMatrix) -> Vec<Vec<(usize, i64)>> {
    let mut rows: Vec<Vec<(usize, i64)>> = m
        .rows
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.sort_unstable_by_key(|&(c, _)| c);
            let mut out: Vec<(usize, i64)> = Vec::with_capacity(r.len());
            for (c, v) in r {
                match out.last_mut() {
                    Some((lc, lv)) if *lc == c => *lv += v,
                    _ => out.push((c, v)),
                }
            }
            out.retain(|&(_, v)| v != 0);
            out
        })
        .filter(|r| !r.is_empty())
        .collect();
    rows.sort_by_key(Vec::len);
    rows
}

/// `a * x - b * y` on sorted sparse rows, dropping zeros.
fn combine<T, F>(x: &[(usize, T)], y: &[(usize, T)], mut f: F) -> Option<Vec<(usize, T)>>
where
    T: Copy + PartialEq + Default,
    F: FnMut(Option<T>, Option<T>) -> Option<T>,
{
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let (c, v) = match (x.get(i), y.get(j)) {
            (Some(&(cx, vx)), Some(&(cy, _))) if cx < cy => {
                i += 1;
                (cx, f(Some(vx), None)?)
            }
            (Some(&(cx, _)), Some(&(cy, vy))) if cy < cx => {
                j += 1;
                (cy, f(None, Some(vy))?)
            }
            (Some(&(cx, vx)), Some(&(_, vy))) => {
                i += 1;
                j += 1;
                (cx, f(Some(vx), Some(vy))?)
            }
            (Some(&(cx, vx)), None) => {
                i += 1;
                (cx, f(Some(vx), None)?)
            }
            (None, Some(&(cy, vy))) => {
                j += 1;
                (cy, f(None, Some(vy))?)
            }
            (None, None) => unreachable!(),
        };
        if v != T::default() {
            out.push((c, v));
        }
    }
    Some(out)
}

/// Sparse echelon elimination over a field. Each incoming row is reduced
/// against the pivot rows by its leading entry until it is zero or starts a
/// new pivot column.
pub fn sparse_rank_field<F: Scalar + Copy + Default>(m: &SparseMatrix) -> usize {
    let mut pivots: std::collections::HashMap<usize, Vec<(usize, F)>> = Default::default();
    for row in normalized_rows(m) {
        let mut r: Vec<(usize, F)> = row.into_iter().map(|(c, v)| (c, lift::<F>(v))).collect();
        while let Some(&(lead, lv)) = r.first() {
            let Some(p) = pivots.get(&lead) else {
                let inv = F::one() / lv;
                let scaled = r.into_iter().map(|(c, v)| (c, v * inv)).collect();
                pivots.insert(lead, scaled);
                break;
            };
            r = combine(&r, p, |a, b| {
                Some(a.unwrap_or_else(F::zero) - lv * b.unwrap_or_else(F::zero))
            })
            .expect("field combination cannot fail");
        }
    }
    pivots.len()
}

/// Sparse fraction-free elimination over the integers; rows are divided by
/// their content after every step. `None` on `i128` overflow.
pub fn sparse_rank_int(m: &SparseMatrix) -> Option<usize> {
    let mut pivots: std::collections::HashMap<usize, Vec<(usize, i128)>> = Default::default();
    for row in normalized_rows(m) {
        let mut r: Vec<(usize, i128)> = row.into_iter().map(|(c, v)| (c, v as i128)).collect();
        while let Some(&(lead, lv)) = r.first() {
            let Some(p) = pivots.get(&lead) else {
                pivots.insert(lead, r);
                break;
            };
            let pv = p[0].1;
            let g = pv.gcd(&lv);
            let (a, b) = (pv / g, lv / g);
            r = combine(&r, p, |x, y| {
                let x = x.unwrap_or(0).checked_mul(a)?;
                let y = y.unwrap_or(0).checked_mul(b)?;
                x.checked_sub(y)
            })?;
            let content = r.iter().fold(0i128, |g, &(_, v)| g.gcd(&v));
            if content > 1 {
                for e in r.iter_mut() {
                    e.1 /= content;
                }
            }
        }
    }
    Some(pivots.len())
}

/// Rank over a field by row reduction.
pub fn rank_over<F: Scalar>(m: &SparseMatrix) -> usize {
    if m.nrows() == 0 || m.ncols == 0 {
        return 0;
    }
    let mut a: Vec<Vec<F>> = m
        .to_dense()
        .into_iter()
        .map(|r| r.into_iter().map(lift::<F>).collect())
        .collect();
    let rows = a.len();
    let cols = m.ncols;
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot_row = a[rank].clone();
        let inv = F::one() / pivot_row[c].clone();
        for row in a.iter_mut().skip(rank + 1) {
            if row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone() * inv.clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !y.is_zero() {
                    *x = x.clone() - factor.clone() * y.clone();
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Exact rank by fraction-free elimination. Runs in `i128` and restarts in
/// arbitrary precision if an intermediate minor overflows.
pub fn bareiss_rank(m: &SparseMatrix) -> usize {
    if m.nrows() == 0 || m.ncols == 0 {
        return 0;
    }
    let dense = m.to_dense();
    let small: Vec<Vec<i128>> = dense
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    match bareiss_rank_i128(small) {
        Some(r) => r,
        None => {
            let big = dense
                .iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect();
            bareiss_rank_big(big)
        }
    }
}

fn bareiss_rank_i128(mut a: Vec<Vec<i128>>) -> Option<usize> {
    let rows = a.len();
    let cols = a[0].len();
    let mut prev: i128 = 1;
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, p);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pivot = pivot_row[c];
        for row in rest.iter_mut() {
            let lead = row[c];
            for j in c + 1..cols {
                let lhs = pivot.checked_mul(row[j])?;
                let rhs = lead.checked_mul(pivot_row[j])?;
                row[j] = lhs.checked_sub(rhs)? / prev;
            }
            row[c] = 0;
        }
        prev = pivot;
        rank += 1;
    }
    Some(rank)
}

fn bareiss_rank_big(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    let cols = a[0].len();
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pivot = pivot_row[c].clone();
        for row in rest.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..cols {
                let v = &pivot * &row[j] - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Determinant of a small square integer matrix (fraction-free).
pub fn det(m: &[Vec<i64>]) -> Result<i64> {
    let n = m.len();
    if n == 0 {
        return Ok(1);
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let mut prev: i128 = 1;
    let mut sign: i128 = 1;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| a[r][k] != 0) else {
            return Ok(0);
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[k][k]
                    .checked_mul(a[i][j])
                    .zip(a[i][k].checked_mul(a[k][j]))
                    .and_then(|(x, y)| x.checked_sub(y))
                    .ok_or(Error::Overflow("determinant"))?;
                a[i][j] = v / prev;
            }
        }
        prev = a[k][k];
    }
    i64::try_from(sign * a[n - 1][n - 1]).map_err(|_| Error::Overflow("determinant"))
}

/// Integer normal to the hyperplane spanned by `n - 1` vectors in `Z^n`
/// (generalized cross product). Zero iff the vectors are dependent.
pub fn cross_normal(vectors: &[Vec<i64>], n: usize) -> Result<Vec<i64>> {
    debug_assert_eq!(vectors.len() + 1, n);
    (0..n)
        .map(|k| {
            let minor: Vec<Vec<i64>> = vectors
                .iter()
                .map(|v| {
                    v.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != k)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let d = det(&minor)?;
            Ok(if k % 2 == 0 { d } else { -d })
        })
        .collect()
}

pub fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Column-style unimodular reduction of an `m x n` integer matrix.
///
/// Returns `(rank, u)` where `u` is an `n x n` unimodular matrix such that
/// every row of `a * u` vanishes outside its first `rank` columns.
pub fn unimodular_column_reduce(a: &[Vec<i64>], n: usize) -> Result<(usize, Vec<Vec<i64>>)> {
    let overflow = || Error::Overflow("unimodular reduction");
    let mut work: Vec<Vec<i128>> = a
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let mut u: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut col = 0;

    // col_j -= q * col_c, applied to both `work` and `u`.
    fn axpy(m: &mut [Vec<i128>], j: usize, c: usize, q: i128) -> Option<()> {
        for row in m.iter_mut() {
            row[j] = row[j].checked_sub(q.checked_mul(row[c])?)?;
        }
        Some(())
    }
    fn swap_cols(m: &mut [Vec<i128>], i: usize, j: usize) {
        for row in m.iter_mut() {
            row.swap(i, j);
        }
    }

    for i in 0..work.len() {
        if col == n {
            break;
        }
        loop {
            let pivot = (col..n)
                .filter(|&j| work[i][j] != 0)
                .min_by_key(|&j| work[i][j].abs());
            let Some(p) = pivot else { break };
            swap_cols(&mut work, col, p);
            swap_cols(&mut u, col, p);
            let mut done = true;
            for j in col + 1..n {
                if work[i][j] != 0 {
                    let q = work[i][j].div_euclid(work[i][col]);
                    axpy(&mut work, j, col, q).ok_or_else(overflow)?;
                    axpy(&mut u, j, col, q).ok_or_else(overflow)?;
                    if work[i][j] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                col += 1;
                break;
            }
        }
    }
    let u = u
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|v| i64::try_from(v).map_err(|_| overflow()))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((col, u))
}

/// Rank of a small integer matrix, exact.
pub fn int_rank(rows: &[Vec<i64>]) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let m = SparseMatrix {
        ncols,
        rows: rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(c, &v)| (c, v))
                    .collect()
            })
            .collect(),
    };
    bareiss_rank(&m)
}

#[allow(dead_code)]
fn is_unimodular(u: &[Vec<i64>]) -> bool {
    det(u).map(|d| d.abs() == 1).unwrap_or(false) && u.iter().all(|r| r.len() == u.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use proptest::prelude::*;

    fn from_dense(d: &[Vec<i64>]) -> SparseMatrix {
        let ncols = d.first().map_or(0, Vec::len);
        let mut m = SparseMatrix::new(ncols);
        for r in d {
            m.push_row(
                r.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(c, &v)| (c, v))
                    .collect(),
            );
        }
        m
    }

    #[test]
    fn determinant_small() {
        assert_eq!(det(&[vec![2, 1], vec![1, 1]]).unwrap(), 1);
        assert_eq!(det(&[vec![0, 1], vec![1, 0]]).unwrap(), -1);
        assert_eq!(
            det(&[vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 2]]).unwrap(),
            2
        );
        assert_eq!(det(&[vec![1, 2], vec![2, 4]]).unwrap(), 0);
    }

    #[test]
    fn cross_normal_plane() {
        let n = cross_normal(&[vec![1, 0, 0], vec![0, 1, 0]], 3).unwrap();
        assert_eq!(n, vec![0, 0, 1]);
        // 1D: the empty product gives the unit normal
        assert_eq!(cross_normal(&[], 1).unwrap(), vec![1]);
    }

    #[test]
    fn rank_of_dependent_rows() {
        let m = from_dense(&[vec![1, -1, 0], vec![0, 1, -1], vec![1, 0, -1]]);
        assert_eq!(bareiss_rank(&m), 2);
        assert_eq!(rank_over::<Rational>(&m), 2);
        assert_eq!(rank_over::<Fp<MERSENNE_61>>(&m), 2);
    }

    #[test]
    fn modular_rank_can_drop_for_small_prime() {
        let m = from_dense(&[vec![2, 0], vec![0, 1]]);
        assert_eq!(bareiss_rank(&m), 2);
        assert_eq!(rank_over::<Fp<2>>(&m), 1);
    }

    #[test]
    fn column_reduction_of_plane() {
        let d = vec![vec![1, 1, 0], vec![0, 0, 2]];
        let (r, u) = unimodular_column_reduce(&d, 3).unwrap();
        assert_eq!(r, 2);
        assert!(is_unimodular(&u));
        for row in &d {
            let img: Vec<i64> = (0..3)
                .map(|j| (0..3).map(|k| row[k] * u[k][j]).sum())
                .collect();
            assert_eq!(img[2], 0);
        }
    }

    proptest! {
        #[test]
        fn exact_routes_agree(d in proptest::collection::vec(
            proptest::collection::vec(-3i64..=3, 5), 0..7)) {
            let m = from_dense(&d);
            prop_assert_eq!(bareiss_rank(&m), rank_over::<Rational>(&m));
            prop_assert_eq!(bareiss_rank(&m), int_rank(&d));
            prop_assert_eq!(bareiss_rank(&m), sparse_rank_int(&m).unwrap());
            prop_assert_eq!(bareiss_rank(&m), sparse_rank_field::<Fp<MERSENNE_61>>(&m));
            prop_assert_eq!(rank_over::<Fp<MERSENNE_61>>(&m), sparse_rank_field::<Fp<MERSENNE_61>>(&m));
            prop_assert_eq!(bareiss_rank(&m), bareiss_rank(&m.transpose()));
            prop_assert_eq!(bareiss_rank(&m), RankMethod::Exact.rank(&m));
            prop_assert_eq!(bareiss_rank(&m), RankMethod::Modular.rank(&m));
        }

        #[test]
        fn column_reduction_is_unimodular(d in proptest::collection::vec(
            proptest::collection::vec(-4i64..=4, 4), 1..4)) {
            let (r, u) = unimodular_column_reduce(&d, 4).unwrap();
            prop_assert!(is_unimodular(&u));
            prop_assert_eq!(r, int_rank(&d));
            for row in &d {
                for j in r..4 {
                    let v: i64 = (0..4).map(|k| row[k] * u[k][j]).sum();
                    prop_assert_eq!(v, 0);
                }
            }
        }
    }

    #[test]
    fn bareiss_falls_back_to_bigint() {
        // Entries near 2^62 force an i128 overflow on the second pivot.
        let big = 1i64 << 62;
        let m = from_dense(&[
            vec![big, 1, 3],
            vec![1, big, 5],
            vec![7, 11, big],
        ]);
        assert_eq!(bareiss_rank(&m), 3);
    }
}
