//! Eichler transvections and the constructive extraction of a hyperbolic
//! plane orthogonal to a pair of vectors.
//!
//! The extraction works entirely inside the hyperbolic summands: a
//! transvection-driven Euclidean descent concentrates the relevant vector
//! in a single `U` block, which frees the remaining blocks. Every step is
//! an explicit integer isometry, and the final pair is re-verified against
//! its contract before it is returned.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{content, ext_gcd};
use crate::lattice::{GramLattice, LatticeVector, Sublattice};
use crate::matrix::IntMat;
use crate::{Error, Result};

/// The isometry `x -> x + (x,e)a - (x,a)e - (a,a)/2 (x,e) e` attached to an
/// isotropic `e` and an orthogonal `a`, as a matrix acting on column
/// coordinate vectors. It preserves the form and fixes `e`.
pub fn eichler_transvection(l: &GramLattice, e: &[BigInt], a: &[BigInt]) -> Result<IntMat> {
    if !l.is_even() {
        return Err(Error::NotEven);
    }
    if !l.square(e)?.is_zero() {
        return Err(Error::NotIsotropic);
    }
    if !l.pair(e, a)?.is_zero() {
        return Err(Error::NotOrthogonal);
    }
    let n = l.rank();
    let half_aa = l.square(a)? / 2;
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let x = l.basis_vector(j);
        let xe = l.pair(&x, e)?;
        let xa = l.pair(&x, a)?;
        let col: Vec<BigInt> = (0..n)
            .map(|i| {
                let mut v = x[i].clone();
                v += &xe * &a[i];
                v -= &xa * &e[i];
                v -= &half_aa * &xe * &e[i];
                v
            })
            .collect();
        cols.push(col);
    }
    // Transpose columns into a matrix acting on the left.
    let rows = (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect();
    Ok(IntMat::from_rows(rows))
}

/// An even lattice whose basis starts with three mutually orthogonal
/// hyperbolic blocks: the Gram matrix has the shape `U + U + U + T`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HyperbolicTriple {
    lattice: GramLattice,
}

impl HyperbolicTriple {
    pub fn new(lattice: GramLattice) -> Result<Self> {
        if !lattice.is_even() {
            return Err(Error::NotEven);
        }
        if lattice.rank() < 6 {
            return Err(Error::MissingU3Prefix);
        }
        let g = lattice.gram();
        for i in 0..6 {
            for j in 0..lattice.rank() {
                let expected = if (i / 2 == j / 2) && j < 6 {
                    if i == j {
                        BigInt::zero()
                    } else {
                        BigInt::one()
                    }
                } else {
                    BigInt::zero()
                };
                if g.at(i, j) != &expected {
                    return Err(Error::MissingU3Prefix);
                }
            }
        }
        Ok(HyperbolicTriple { lattice })
    }

    pub fn lattice(&self) -> &GramLattice {
        &self.lattice
    }

    /// Basis index pair `(e, f)` of hyperbolic block `i` (0, 1 or 2).
    fn block(i: usize) -> (usize, usize) {
        (2 * i, 2 * i + 1)
    }
}

/// Finds a hyperbolic plane inside the orthogonal complement of `ell` and
/// `a`: two vectors `u, v` with Gram `[[0,1],[1,0]]` pairing to zero with
/// both inputs. `ell` must be primitive.
pub fn hyperbolic_complement(
    m: &HyperbolicTriple,
    ell: &[BigInt],
    a: &[BigInt],
) -> Result<Sublattice> {
    let l = m.lattice();
    if !l.is_primitive(ell)? {
        return Err(Error::NotPrimitive);
    }
    l.pair(ell, a)?; // length check for `a`

    // Cheap case: one of the designated blocks already works.
    for i in 0..3 {
        let (e, f) = HyperbolicTriple::block(i);
        let (ev, fv) = (l.basis_vector(e), l.basis_vector(f));
        if l.pair(&ev, ell)?.is_zero()
            && l.pair(&fv, ell)?.is_zero()
            && l.pair(&ev, a)?.is_zero()
            && l.pair(&fv, a)?.is_zero()
        {
            return finish(l, ev, fv, ell, a);
        }
    }

    // Concentrate the hyperbolic part of `ell` in block 0; blocks 1 and 2
    // then pair to zero with it.
    let p: Vec<BigInt> = ell[..6].to_vec();
    let n1: Vec<LatticeVector> = if p.iter().all(Zero::is_zero) {
        [2usize, 3, 4, 5].iter().map(|&i| l.basis_vector(i)).collect()
    } else {
        let c = content(&p);
        let m0: Vec<BigInt> = p.iter().map(|x| x / &c).collect();
        let mut merge = UMerge::new(3, m0);
        merge.merge(0, 1);
        merge.merge(0, 2);
        debug_assert!(merge.v[2..6].iter().all(Zero::is_zero));
        let ginv = merge.ginv;
        [2usize, 3, 4, 5]
            .iter()
            .map(|&col| {
                let mut v = vec![BigInt::zero(); l.rank()];
                for (r, item) in v.iter_mut().enumerate().take(6) {
                    *item = ginv.at(r, col).clone();
                }
                v
            })
            .collect()
    };

    // Project `a` into the free U+U and repeat the concentration there.
    let (u1, w1, u2, w2) = (&n1[0], &n1[1], &n1[2], &n1[3]);
    let a1 = vec![
        l.pair(a, w1)?,
        l.pair(a, u1)?,
        l.pair(a, w2)?,
        l.pair(a, u2)?,
    ];
    if a1.iter().all(Zero::is_zero) {
        return finish(l, u1.clone(), w1.clone(), ell, a);
    }
    let c = content(&a1);
    let m1: Vec<BigInt> = a1.iter().map(|x| x / &c).collect();
    let mut merge = UMerge::new(2, m1);
    merge.merge(0, 1);
    debug_assert!(merge.v[2..4].iter().all(Zero::is_zero));
    let hinv = merge.ginv;
    let combine = |col: usize| -> LatticeVector {
        let mut v = vec![BigInt::zero(); l.rank()];
        for (k, basis) in n1.iter().enumerate() {
            let coeff = hinv.at(k, col);
            for (vi, bi) in v.iter_mut().zip(basis) {
                *vi += coeff * bi;
            }
        }
        v
    };
    finish(l, combine(2), combine(3), ell, a)
}

/// Verifies the contract of the returned plane exactly and packages it.
fn finish(
    l: &GramLattice,
    u: LatticeVector,
    v: LatticeVector,
    ell: &[BigInt],
    a: &[BigInt],
) -> Result<Sublattice> {
    let ok = l.square(&u)?.is_zero()
        && l.square(&v)?.is_zero()
        && l.pair(&u, &v)?.is_one()
        && l.pair(&u, ell)?.is_zero()
        && l.pair(&v, ell)?.is_zero()
        && l.pair(&u, a)?.is_zero()
        && l.pair(&v, a)?.is_zero();
    if !ok {
        return Err(Error::Internal("extracted plane fails its contract"));
    }
    Sublattice::new(l.clone(), vec![u, v])
}

/// Transvection-driven Euclidean descent on a vector in `U^k`, tracking the
/// composite isometry and its inverse.
struct UMerge {
    k: usize,
    scratch: GramLattice,
    v: Vec<BigInt>,
    ginv: IntMat,
}

impl UMerge {
    fn new(k: usize, v: Vec<BigInt>) -> Self {
        let u = crate::catalog::hyperbolic_plane();
        let mut scratch = u.clone();
        for _ in 1..k {
            scratch = scratch.direct_sum(&u);
        }
        UMerge { k, scratch, v, ginv: IntMat::identity(2 * k) }
    }

    fn x(&self, blk: usize) -> &BigInt {
        &self.v[2 * blk]
    }

    fn y(&self, blk: usize) -> &BigInt {
        &self.v[2 * blk + 1]
    }

    fn block_zero(&self, blk: usize) -> bool {
        self.x(blk).is_zero() && self.y(blk).is_zero()
    }

    fn unit(&self, idx: usize) -> Vec<BigInt> {
        self.scratch.basis_vector(idx)
    }

    /// Applies `E(e_base, coeff * a_base)` where the bases are unit vectors.
    fn transvect(&mut self, e_idx: usize, a_idx: usize, coeff: &BigInt) {
        if coeff.is_zero() {
            return;
        }
        let e = self.unit(e_idx);
        let a: Vec<BigInt> = self.unit(a_idx).iter().map(|c| c * coeff).collect();
        let t = eichler_transvection(&self.scratch, &e, &a).expect("valid transvection data");
        let neg_a: Vec<BigInt> = a.iter().map(|c| -c).collect();
        let tinv = eichler_transvection(&self.scratch, &e, &neg_a).expect("inverse transvection");
        self.v = t.mul_vec(&self.v);
        self.ginv = self.ginv.mul(&tinv);
    }

    fn permute(&mut self, perm: &[(usize, usize)]) {
        let n = 2 * self.k;
        let mut p = IntMat::zero(n, n);
        let mut dest: Vec<usize> = (0..n).collect();
        for &(a, b) in perm {
            dest.swap(a, b);
        }
        for (i, &d) in dest.iter().enumerate() {
            p.set(d, i, BigInt::one());
        }
        let pinv = p.transpose();
        self.v = p.mul_vec(&self.v);
        self.ginv = self.ginv.mul(&pinv);
    }

    /// Swap hyperbolic blocks `i` and `j`.
    fn swap_blocks(&mut self, i: usize, j: usize) {
        self.permute(&[(2 * i, 2 * j), (2 * i + 1, 2 * j + 1)]);
    }

    /// Exchange the two basis vectors within block `i`.
    fn flip(&mut self, i: usize) {
        self.permute(&[(2 * i, 2 * i + 1)]);
    }

    /// Zeroes block `j` of the tracked vector by isometries that only touch
    /// blocks `i` and `j`.
    fn merge(&mut self, i: usize, j: usize) {
        let (ei, fi) = (2 * i, 2 * i + 1);
        let (ej, fj) = (2 * j, 2 * j + 1);
        loop {
            if self.block_zero(j) {
                return;
            }
            if self.block_zero(i) {
                self.swap_blocks(i, j);
                return;
            }
            if self.y(i).is_zero() && self.y(j).is_zero() {
                // Pure Euclid on (x_i, x_j); the side effects vanish.
                loop {
                    if self.x(j).is_zero() {
                        return;
                    }
                    if self.x(i).is_zero() {
                        self.swap_blocks(i, j);
                        return;
                    }
                    let q = self.x(j).div_floor(self.x(i));
                    self.transvect(fi, ej, &-q); // x_j -= q x_i
                    if self.x(j).is_zero() {
                        return;
                    }
                    let q = self.x(i).div_floor(self.x(j));
                    self.transvect(fj, ei, &-q); // x_i -= q x_j
                }
            }
            if self.y(i).is_zero() {
                // y_j is nonzero here; seed y_i from it.
                self.transvect(ej, fi, &BigInt::one()); // y_i += y_j
            }
            // Euclid on (y_i, y_j) until y_j = 0.
            while !self.y(j).is_zero() {
                let q = self.y(j).div_floor(self.y(i));
                self.transvect(ei, fj, &-q); // y_j -= q y_i
                if self.y(j).is_zero() {
                    break;
                }
                let q = self.y(i).div_floor(self.y(j));
                self.transvect(ej, fi, &-q); // y_i -= q y_j
                if self.y(i).is_zero() {
                    self.transvect(ej, fi, &BigInt::one()); // y_i = y_j
                }
            }
            // Reduce x_j modulo gcd(x_i, y_i); both moves are side-effect
            // free while y_j = 0.
            let (g, lam, mu) = ext_gcd(self.x(i), self.y(i));
            debug_assert!(!g.is_zero());
            let q = self.x(j).div_floor(&g);
            self.transvect(fi, ej, &(-&q * lam)); // x_j -= q*lam*x_i
            self.transvect(ei, ej, &(-&q * mu)); // x_j -= q*mu*y_i
            if self.x(j).is_zero() {
                return;
            }
            // Strict descent: the leftover is smaller than gcd(x_i, y_i),
            // so folding it into the y-pair shrinks |y_i|.
            self.flip(j);
        }
    }
}
