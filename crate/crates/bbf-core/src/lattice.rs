//! Even lattices presented by Gram matrices, and the structural operations
//! on them: pairings, divisibility, primitivity, signatures, rescalings,
//! direct sums, discriminant groups, orthogonal complements and saturation.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::content;
use crate::matrix::{signature_of_symmetric, IntMat};
use crate::{Error, Result};

/// Coordinates of a lattice element relative to the basis of its lattice.
pub type LatticeVector = Vec<BigInt>;

/// Convenience constructor for coordinate vectors.
pub fn vector(coords: &[i64]) -> LatticeVector {
    coords.iter().map(|&c| BigInt::from(c)).collect()
}

/// A finitely generated free abelian group together with a non-degenerate,
/// integer-valued, symmetric bilinear form, presented by a Gram matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GramLattice {
    gram: IntMat,
    det: BigInt,
    signature: (usize, usize),
    even: bool,
    label: Option<String>,
}

impl GramLattice {
    /// Builds a lattice from its Gram matrix, rejecting non-symmetric or
    /// degenerate forms.
    pub fn new(gram: Vec<Vec<BigInt>>, label: Option<String>) -> Result<Self> {
        let rank = gram.len();
        if gram.iter().any(|row| row.len() != rank) {
            return Err(Error::NotSymmetric);
        }
        let gram = IntMat::from_rows(gram);
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let det = gram.det();
        if rank > 0 && det.is_zero() {
            return Err(Error::Degenerate);
        }
        let signature = if rank == 0 { (0, 0) } else { signature_of_symmetric(&gram)? };
        let even = (0..rank).all(|i| gram.at(i, i).is_even());
        Ok(GramLattice { gram, det, signature, even, label })
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect(),
            None,
        )
    }

    /// The diagonal lattice `<d_1> + ... + <d_k>`.
    pub fn diagonal(entries: &[i64]) -> Result<Self> {
        let n = entries.len();
        let mut rows = vec![vec![BigInt::zero(); n]; n];
        for (i, &d) in entries.iter().enumerate() {
            rows[i][i] = BigInt::from(d);
        }
        Self::new(rows, None)
    }

    pub fn rank(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &IntMat {
        &self.gram
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// `(positive, negative)` eigenvalue counts of the real extension of the
    /// form, computed exactly at construction time.
    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn is_unimodular(&self) -> bool {
        self.det.magnitude().is_one()
    }

    fn check_len(&self, v: &[BigInt]) -> Result<()> {
        if v.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: v.len() });
        }
        Ok(())
    }

    /// The `i`-th basis vector as a coordinate vector.
    pub fn basis_vector(&self, i: usize) -> LatticeVector {
        let mut v = vec![BigInt::zero(); self.rank()];
        v[i] = BigInt::one();
        v
    }

    /// The bilinear pairing `v^T . gram . w`.
    pub fn pair(&self, v: &[BigInt], w: &[BigInt]) -> Result<BigInt> {
        self.check_len(v)?;
        self.check_len(w)?;
        let gw = self.gram.mul_vec(w);
        Ok(v.iter().zip(&gw).map(|(a, b)| a * b).sum())
    }

    /// The square `pair(v, v)`.
    pub fn square(&self, v: &[BigInt]) -> Result<BigInt> {
        self.pair(v, v)
    }

    /// The vector of pairings of `v` against the basis, i.e. `gram . v`.
    pub fn pairing_profile(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        self.check_len(v)?;
        Ok(self.gram.mul_vec(v))
    }

    /// Positive generator of the pairing ideal `(v, L)`, i.e. the gcd of the
    /// pairings of `v` with a basis.
    pub fn divisibility(&self, v: &[BigInt]) -> Result<BigInt> {
        self.check_len(v)?;
        if v.iter().all(Zero::is_zero) {
            return Err(Error::ZeroVector);
        }
        Ok(content(&self.gram.mul_vec(v)))
    }

    /// Whether `v` is not a proper integer multiple of a lattice vector.
    pub fn is_primitive(&self, v: &[BigInt]) -> Result<bool> {
        self.check_len(v)?;
        if v.iter().all(Zero::is_zero) {
            return Err(Error::ZeroVector);
        }
        Ok(content(v).is_one())
    }

    /// The lattice with every Gram entry multiplied by `k`.
    pub fn rescale(&self, k: &BigInt) -> Result<GramLattice> {
        if k.is_zero() {
            return Err(Error::ZeroRescale);
        }
        let rows = self
            .gram
            .rows()
            .iter()
            .map(|row| row.iter().map(|v| v * k).collect())
            .collect();
        GramLattice::new(rows, None)
    }

    /// Orthogonal direct sum, with block-diagonal Gram matrix.
    pub fn direct_sum(&self, other: &GramLattice) -> GramLattice {
        let (n1, n2) = (self.rank(), other.rank());
        let n = n1 + n2;
        let mut rows = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n1 {
            for j in 0..n1 {
                rows[i][j] = self.gram.at(i, j).clone();
            }
        }
        for i in 0..n2 {
            for j in 0..n2 {
                rows[n1 + i][n1 + j] = other.gram.at(i, j).clone();
            }
        }
        GramLattice::new(rows, None).expect("direct sum of non-degenerate lattices")
    }

    /// Sign of the action of an isometry on the orientation of a maximal
    /// positive-definite subspace: `+1` for the class acting trivially on
    /// the cohomology of the positive cone, `-1` otherwise.
    ///
    /// Convention: the determinant sign of the positive-part block of the
    /// isometry in a rationally diagonalising basis. This utility is not
    /// consumed by any decision procedure here.
    pub fn positive_orientation_sign(&self, isometry: &IntMat) -> Result<i8> {
        if isometry.nrows() != self.rank() || isometry.ncols() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: isometry.nrows(),
            });
        }
        if isometry.transpose().mul(&self.gram).mul(isometry) != self.gram {
            return Err(Error::Domain("the matrix does not preserve the form"));
        }
        let (diag, basis) = crate::matrix::diagonalize_symmetric(&self.gram)?;
        let positive: Vec<usize> =
            (0..diag.len()).filter(|&k| diag[k].is_positive()).collect();
        // Coefficient of T(b_k) along b_j, via the orthogonal basis:
        // c_jk = (T b_k, b_j) / d_j.
        let n = self.rank();
        let pair_rational = |v: &[num_rational::BigRational], w: &[num_rational::BigRational]| {
            let mut acc = num_rational::BigRational::zero();
            for i in 0..n {
                for j in 0..n {
                    acc += &v[i] * num_rational::BigRational::from(self.gram.at(i, j).clone())
                        * &w[j];
                }
            }
            acc
        };
        let apply = |b: &[num_rational::BigRational]| -> Vec<num_rational::BigRational> {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            num_rational::BigRational::from(isometry.at(i, j).clone()) * &b[j]
                        })
                        .sum()
                })
                .collect()
        };
        let p = positive.len();
        let mut block: Vec<Vec<num_rational::BigRational>> = Vec::with_capacity(p);
        for &k in &positive {
            let image = apply(&basis[k]);
            block.push(
                positive
                    .iter()
                    .map(|&j| pair_rational(&image, &basis[j]) / &diag[j])
                    .collect(),
            );
        }
        // Determinant sign of the p x p rational block by fraction-free
        // elimination on numerators.
        let det = rational_det(block);
        Ok(if det.is_positive() {
            1
        } else if det.is_negative() {
            -1
        } else {
            0
        })
    }

    /// Invariant factors of the finite quotient of the dual by the lattice.
    pub fn discriminant_group(&self) -> DiscriminantGroup {
        let factors: Vec<BigInt> = self
            .gram
            .snf_diagonal()
            .into_iter()
            .filter(|d| !d.is_one())
            .collect();
        let order = factors.iter().product();
        DiscriminantGroup { cyclic_factors: factors, order }
    }
}

/// The finite group `L^dual / L`, as a product of cyclic groups
/// `Z/d_1 x ... x Z/d_k` with `d_1 | d_2 | ... | d_k` and each `d_i > 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiscriminantGroup {
    cyclic_factors: Vec<BigInt>,
    order: BigInt,
}

impl DiscriminantGroup {
    pub fn cyclic_factors(&self) -> &[BigInt] {
        &self.cyclic_factors
    }

    pub fn order(&self) -> &BigInt {
        &self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.cyclic_factors.is_empty()
    }
}

/// A sublattice of an ambient lattice, presented by linearly independent
/// basis vectors in ambient coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Sublattice {
    ambient: GramLattice,
    basis: Vec<LatticeVector>,
}

impl Sublattice {
    pub fn new(ambient: GramLattice, basis: Vec<LatticeVector>) -> Result<Self> {
        for v in &basis {
            ambient.check_len(v)?;
        }
        if !basis.is_empty() {
            let m = IntMat::from_rows(basis.clone());
            let rank = m.hnf_with_transform().0.rows().iter().filter(|r| !is_zero_row(r)).count();
            if rank != basis.len() {
                return Err(Error::Domain("sublattice basis vectors must be linearly independent"));
            }
        }
        Ok(Sublattice { ambient, basis })
    }

    pub fn ambient(&self) -> &GramLattice {
        &self.ambient
    }

    pub fn basis(&self) -> &[LatticeVector] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Gram matrix of the pairwise ambient pairings of the basis.
    pub fn induced_gram(&self) -> IntMat {
        let k = self.basis.len();
        let mut rows = vec![vec![BigInt::zero(); k]; k];
        for i in 0..k {
            for j in 0..k {
                rows[i][j] = self
                    .ambient
                    .pair(&self.basis[i], &self.basis[j])
                    .expect("basis vectors live in the ambient lattice");
            }
        }
        IntMat::from_rows(rows)
    }

    /// The sublattice as a lattice in its own right. Fails when the induced
    /// form is degenerate (e.g. the span of an isotropic vector).
    pub fn induced_lattice(&self) -> Result<GramLattice> {
        GramLattice::new(self.induced_gram().into_rows(), None)
    }

    /// Saturated orthogonal complement inside the ambient lattice.
    pub fn orthogonal_complement(&self) -> Sublattice {
        if self.basis.is_empty() {
            let basis = (0..self.ambient.rank()).map(|i| self.ambient.basis_vector(i)).collect();
            return Sublattice { ambient: self.ambient.clone(), basis };
        }
        let pairing_rows: Vec<Vec<BigInt>> = self
            .basis
            .iter()
            .map(|b| self.ambient.gram().mul_vec(b))
            .collect();
        let kernel = IntMat::from_rows(pairing_rows).kernel();
        Sublattice { ambient: self.ambient.clone(), basis: kernel }
    }

    /// The primitive closure: ambient lattice intersected with the rational
    /// span of the basis. Equals the sublattice itself iff it is primitive.
    pub fn saturation(&self) -> Sublattice {
        if self.basis.is_empty() {
            return self.clone();
        }
        // Complement twice with respect to the standard dot product.
        let dual = IntMat::from_rows(self.basis.clone()).kernel();
        if dual.is_empty() {
            let basis = (0..self.ambient.rank()).map(|i| self.ambient.basis_vector(i)).collect();
            return Sublattice { ambient: self.ambient.clone(), basis };
        }
        let basis = IntMat::from_rows(dual).kernel();
        Sublattice { ambient: self.ambient.clone(), basis }
    }

    /// A sublattice is primitive iff its basis matrix has all invariant
    /// factors equal to one.
    pub fn is_saturated(&self) -> bool {
        if self.basis.is_empty() {
            return true;
        }
        IntMat::from_rows(self.basis.clone())
            .snf_diagonal()
            .iter()
            .all(One::is_one)
    }

    /// Canonical (Hermite) form of the basis, for span comparisons.
    pub fn hnf_basis(&self) -> Vec<LatticeVector> {
        if self.basis.is_empty() {
            return Vec::new();
        }
        let (h, _) = IntMat::from_rows(self.basis.clone()).hnf_with_transform();
        h.into_rows().into_iter().filter(|r| !is_zero_row(r)).collect()
    }

    /// Whether two sublattices of the same ambient have the same span over Z.
    pub fn same_span(&self, other: &Sublattice) -> bool {
        self.ambient == other.ambient && self.hnf_basis() == other.hnf_basis()
    }
}

fn is_zero_row(r: &[BigInt]) -> bool {
    r.iter().all(Zero::is_zero)
}

fn rational_det(mut a: Vec<Vec<num_rational::BigRational>>) -> num_rational::BigRational {
    let n = a.len();
    let mut det = num_rational::BigRational::from(BigInt::one());
    for i in 0..n {
        if a[i][i].is_zero() {
            let Some(swap) = (i + 1..n).find(|&r| !a[r][i].is_zero()) else {
                return num_rational::BigRational::zero();
            };
            a.swap(i, swap);
            det = -det;
        }
        det *= a[i][i].clone();
        for r in i + 1..n {
            if a[r][i].is_zero() {
                continue;
            }
            let f = &a[r][i] / &a[i][i];
            for c in i..n {
                let v = &f * &a[i][c];
                a[r][c] -= v;
            }
        }
    }
    det
}
