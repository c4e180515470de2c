//! Dense exact linear algebra over the integers, sized for lattice ranks
//! in the twenties rather than the thousands.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// A dense integer matrix, row major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMat {
    rows: Vec<Vec<BigInt>>,
}

impl IntMat {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        if let Some(first) = rows.first() {
            let w = first.len();
            assert!(rows.iter().all(|r| r.len() == w), "ragged matrix");
        }
        IntMat { rows }
    }

    pub fn zero(r: usize, c: usize) -> Self {
        IntMat { rows: vec![vec![BigInt::zero(); c]; r] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.rows[i][i] = BigInt::one();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.rows[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<BigInt>> {
        self.rows
    }

    pub fn transpose(&self) -> IntMat {
        let (r, c) = (self.nrows(), self.ncols());
        let mut t = Self::zero(c, r);
        for i in 0..r {
            for j in 0..c {
                t.rows[j][i] = self.rows[i][j].clone();
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.nrows();
        if n != self.ncols() {
            return false;
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if self.rows[i][j] != self.rows[j][i] {
                    return false;
                }
            }
        }
        true
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.ncols(), other.nrows());
        let (r, k, c) = (self.nrows(), self.ncols(), other.ncols());
        let mut out = Self::zero(r, c);
        for i in 0..r {
            for j in 0..c {
                let mut acc = BigInt::zero();
                for t in 0..k {
                    acc += &self.rows[i][t] * &other.rows[t][j];
                }
                out.rows[i][j] = acc;
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.ncols(), v.len());
        self.rows
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        let n = self.nrows();
        assert_eq!(n, self.ncols(), "determinant of a non-square matrix");
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.rows.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = num / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        sign * m[n - 1][n - 1].clone()
    }

    /// Row Hermite normal form: returns `(h, u)` with `u` unimodular and
    /// `u * self = h`, where `h` is in row echelon form with positive pivots
    /// and entries above each pivot reduced into `[0, pivot)`.
    pub fn hnf_with_transform(&self) -> (IntMat, IntMat) {
        let (r, c) = (self.nrows(), self.ncols());
        let mut h = self.clone();
        let mut u = Self::identity(r);
        let mut pivot_row = 0;
        for col in 0..c {
            if pivot_row == r {
                break;
            }
            // Euclid down the column until at most one nonzero remains.
            loop {
                let mut best: Option<usize> = None;
                for row in pivot_row..r {
                    if !h.rows[row][col].is_zero()
                        && best.is_none_or(|b| {
                            h.rows[row][col].magnitude() < h.rows[b][col].magnitude()
                        })
                    {
                        best = Some(row);
                    }
                }
                let Some(best) = best else { break };
                h.rows.swap(pivot_row, best);
                u.rows.swap(pivot_row, best);
                let mut done = true;
                for row in pivot_row + 1..r {
                    if h.rows[row][col].is_zero() {
                        continue;
                    }
                    let q = h.rows[row][col].div_floor(&h.rows[pivot_row][col]);
                    row_sub_mul(&mut h.rows, row, pivot_row, &q);
                    row_sub_mul(&mut u.rows, row, pivot_row, &q);
                    if !h.rows[row][col].is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if h.rows[pivot_row][col].is_zero() {
                continue;
            }
            if h.rows[pivot_row][col].is_negative() {
                negate_row(&mut h.rows, pivot_row);
                negate_row(&mut u.rows, pivot_row);
            }
            for row in 0..pivot_row {
                let q = h.rows[row][col].div_floor(&h.rows[pivot_row][col]);
                if !q.is_zero() {
                    row_sub_mul(&mut h.rows, row, pivot_row, &q);
                    row_sub_mul(&mut u.rows, row, pivot_row, &q);
                }
            }
            pivot_row += 1;
        }
        (h, u)
    }

    /// Basis of the integer kernel `{ x : self * x = 0 }`. The returned
    /// basis spans a saturated sublattice of `Z^ncols`.
    pub fn kernel(&self) -> Vec<Vec<BigInt>> {
        let (h, u) = self.transpose().hnf_with_transform();
        let mut basis = Vec::new();
        for i in 0..h.nrows() {
            if h.rows[i].iter().all(Zero::is_zero) {
                basis.push(u.rows[i].clone());
            }
        }
        basis
    }

    /// Inverse of a unimodular matrix, or `None` if the matrix is not
    /// unimodular.
    pub fn inverse_unimodular(&self) -> Option<IntMat> {
        if self.nrows() != self.ncols() {
            return None;
        }
        let (h, u) = self.hnf_with_transform();
        if h == Self::identity(self.nrows()) {
            Some(u)
        } else {
            None
        }
    }

    /// Diagonal of the Smith normal form, as nonnegative integers
    /// `d_1 | d_2 | ...` (zeros trimmed).
    pub fn snf_diagonal(&self) -> Vec<BigInt> {
        let (r, c) = (self.nrows(), self.ncols());
        let mut a = self.rows.clone();
        let mut t = 0;
        while t < r && t < c {
            let Some((pi, pj)) = min_abs_nonzero(&a, t) else { break };
            a.swap(t, pi);
            swap_cols(&mut a, t, pj);
            'reduce: loop {
                for i in t + 1..r {
                    if a[i][t].is_zero() {
                        continue;
                    }
                    let q = a[i][t].div_floor(&a[t][t]);
                    row_sub_mul(&mut a, i, t, &q);
                    if !a[i][t].is_zero() {
                        a.swap(t, i);
                        continue 'reduce;
                    }
                }
                for j in t + 1..c {
                    if a[t][j].is_zero() {
                        continue;
                    }
                    let q = a[t][j].div_floor(&a[t][t]);
                    col_sub_mul(&mut a, j, t, &q);
                    if !a[t][j].is_zero() {
                        swap_cols(&mut a, t, j);
                        continue 'reduce;
                    }
                }
                // Pivot clears its row and column; force it to divide the rest.
                for i in t + 1..r {
                    for j in t + 1..c {
                        if !(&a[i][j] % &a[t][t]).is_zero() {
                            let (src, dst) = split_rows(&mut a, i, t);
                            for (d, s) in dst.iter_mut().zip(src.iter()) {
                                *d += s;
                            }
                            continue 'reduce;
                        }
                    }
                }
                break;
            }
            t += 1;
        }
        (0..t).map(|i| a[i][i].abs()).collect()
    }
}

fn row_sub_mul(rows: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let (s, d) = split_rows(rows, src, dst);
    for (dv, sv) in d.iter_mut().zip(s.iter()) {
        *dv -= q * sv;
    }
}

/// Disjoint mutable access: returns `(&rows[a], &mut rows[b])`.
fn split_rows(rows: &mut [Vec<BigInt>], a: usize, b: usize) -> (&Vec<BigInt>, &mut Vec<BigInt>) {
    assert_ne!(a, b);
    if a < b {
        let (lo, hi) = rows.split_at_mut(b);
        (&lo[a], &mut hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(a);
        (&hi[0], &mut lo[b])
    }
}

fn negate_row(rows: &mut [Vec<BigInt>], i: usize) {
    for v in &mut rows[i] {
        *v = -core::mem::take(v);
    }
}

fn swap_cols(rows: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in rows {
        row.swap(a, b);
    }
}

fn col_sub_mul(rows: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in rows {
        let s = row[src].clone();
        row[dst] -= q * s;
    }
}

fn min_abs_nonzero(a: &[Vec<BigInt>], from: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(from) {
        for (j, v) in row.iter().enumerate().skip(from) {
            if !v.is_zero() && best.is_none_or(|(bi, bj)| v.magnitude() < a[bi][bj].magnitude()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Exact congruence diagonalisation of a non-degenerate symmetric integer
/// matrix over the rationals: returns the diagonal values together with a
/// rational basis (as rows `b_k` in the original coordinates) that is
/// orthogonal for the form, i.e. `B G B^T = diag`.
pub fn diagonalize_symmetric(m: &IntMat) -> Result<(Vec<BigRational>, Vec<Vec<BigRational>>)> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = m.nrows();
    let mut a: Vec<Vec<BigRational>> = m
        .rows()
        .iter()
        .map(|row| row.iter().map(|v| BigRational::from(v.clone())).collect())
        .collect();
    let mut basis: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::from(BigInt::one()) } else { BigRational::zero() })
                .collect()
        })
        .collect();
    for i in 0..n {
        if a[i][i].is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(i, j);
                for row in &mut a {
                    row.swap(i, j);
                }
                basis.swap(i, j);
            } else if let Some(j) = (i + 1..n).find(|&j| !a[i][j].is_zero()) {
                // Zero diagonal block: fold row/column j into i to expose
                // the off-diagonal entry on the diagonal.
                for k in 0..n {
                    let v = a[j][k].clone();
                    a[i][k] += v;
                }
                for row in &mut a {
                    let v = row[j].clone();
                    row[i] += v;
                }
                let add = basis[j].clone();
                for (dst, src) in basis[i].iter_mut().zip(add) {
                    *dst += src;
                }
            } else {
                return Err(Error::Degenerate);
            }
        }
        let pivot = a[i][i].clone();
        for j in i + 1..n {
            if a[j][i].is_zero() {
                continue;
            }
            let f = &a[j][i] / &pivot;
            for k in i..n {
                let v = &f * &a[i][k];
                a[j][k] -= v;
            }
            for row in a.iter_mut().take(n).skip(i) {
                let v = &f * &row[i];
                row[j] -= v;
            }
            let sub: Vec<BigRational> = basis[i].iter().map(|v| &f * v).collect();
            for (dst, src) in basis[j].iter_mut().zip(sub) {
                *dst -= src;
            }
        }
    }
    let diag = (0..n).map(|i| a[i][i].clone()).collect();
    Ok((diag, basis))
}

/// Signature `(positive, negative)` of a non-degenerate symmetric integer
/// matrix, by exact congruence diagonalisation over the rationals.
pub fn signature_of_symmetric(m: &IntMat) -> Result<(usize, usize)> {
    let (diag, _) = diagonalize_symmetric(m)?;
    let pos = diag.iter().filter(|d| d.is_positive()).count();
    Ok((pos, diag.len() - pos))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMat {
        IntMat::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect(),
        )
    }

    #[test]
    fn det_examples() {
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det(), BigInt::from(-1));
        assert_eq!(m(&[&[2, 0], &[0, -2]]).det(), BigInt::from(-4));
        assert_eq!(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).det(), BigInt::zero());
        assert_eq!(m(&[&[3, 1], &[1, 2]]).det(), BigInt::from(5));
    }

    #[test]
    fn hnf_transform_is_consistent() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let (h, u) = a.hnf_with_transform();
        assert_eq!(u.mul(&a), h);
        assert_eq!(u.det().magnitude(), BigInt::one().magnitude());
        // Pivots positive, echelon shape.
        assert!(h.at(0, 0) > &BigInt::zero());
    }

    #[test]
    fn kernel_of_projection() {
        let a = m(&[&[1, 1, 0]]);
        let k = a.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!((&v[0] + &v[1]).is_zero());
        }
    }

    #[test]
    fn kernel_is_saturated() {
        // Kernel of (2 4) over Z is spanned by (2, -1), not (4, -2).
        let a = m(&[&[2, 4]]);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        let g = k[0][0].gcd(&k[0][1]);
        assert!(g.is_one());
    }

    #[test]
    fn snf_diagonals() {
        assert_eq!(m(&[&[-6]]).snf_diagonal(), vec![BigInt::from(6)]);
        assert_eq!(
            m(&[&[2, 0], &[0, 4]]).snf_diagonal(),
            vec![BigInt::from(2), BigInt::from(4)]
        );
        // Classic: diag(2, 3) has SNF diag(1, 6).
        assert_eq!(
            m(&[&[2, 0], &[0, 3]]).snf_diagonal(),
            vec![BigInt::from(1), BigInt::from(6)]
        );
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let d = a.snf_diagonal();
        // Divisibility chain and determinant match.
        assert!((&d[1] % &d[0]).is_zero());
        assert!((&d[2] % &d[1]).is_zero());
        assert_eq!(
            d.iter().product::<BigInt>(),
            a.det().magnitude().clone().into()
        );
    }

    #[test]
    fn unimodular_inverse() {
        let a = m(&[&[1, 2], &[1, 3]]);
        let inv = a.inverse_unimodular().unwrap();
        assert_eq!(a.mul(&inv), IntMat::identity(2));
        assert_eq!(inv.mul(&a), IntMat::identity(2));
        assert!(m(&[&[2, 0], &[0, 1]]).inverse_unimodular().is_none());
    }

    #[test]
    fn signatures() {
        assert_eq!(signature_of_symmetric(&m(&[&[0, 1], &[1, 0]])).unwrap(), (1, 1));
        assert_eq!(signature_of_symmetric(&m(&[&[-2]])).unwrap(), (0, 1));
        assert_eq!(
            signature_of_symmetric(&m(&[&[2, 0, 0], &[0, -2, 0], &[0, 0, -2]])).unwrap(),
            (1, 2)
        );
        assert!(signature_of_symmetric(&m(&[&[1, 1], &[1, 1]])).is_err());
    }
}
