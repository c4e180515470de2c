//! Exact short-vector enumeration.
//!
//! Definite queries run a rational Cholesky / Fincke–Pohst tree search
//! with exact interval bounds. Hyperbolic separating-wall queries reduce
//! to a definite enumeration under the positive-definite majorant
//! `M_u(x) = 2 (x,u)^2 / q(u) - q(x)`: a class `E` separating `ell` from
//! `h` pairs to zero with some point `u*` of the segment `[ell, h]`, where
//! `M_{u*}(E) = -q(E)`; a Cauchy–Schwarz estimate in the `M_{u*}` inner
//! product then caps `M_ell(E)` by an explicit rational multiple of
//! `-q(E)`, and the enumeration ball follows.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{ceil_neg_sqrt_shift, floor_sqrt_shift};
use crate::lattice::{GramLattice, LatticeVector};
use crate::matrix::IntMat;
use crate::walls::WallSpec;
use crate::{Error, Result};

/// Caps for the enumeration kernels.
#[derive(Clone, Debug)]
pub struct EnumerationLimits {
    /// Largest lattice rank accepted.
    pub max_rank: usize,
    /// Cap on the (integer-scaled) enumeration radius.
    pub max_radius: BigInt,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits { max_rank: 8, max_radius: BigInt::from(1_000_000u64) }
    }
}

/// Comparison operator of a pairing constraint.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Cmp {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Cmp {
    fn holds(self, lhs: &BigInt, rhs: &BigInt) -> bool {
        match self {
            Cmp::Lt => lhs < rhs,
            Cmp::Le => lhs <= rhs,
            Cmp::Eq => lhs == rhs,
            Cmp::Ge => lhs >= rhs,
            Cmp::Gt => lhs > rhs,
        }
    }
}

/// A linear constraint `pair(v, vector) <cmp> bound`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PairingConstraint {
    pub vector: LatticeVector,
    pub cmp: Cmp,
    pub bound: BigInt,
}

/// A definite enumeration query: all vectors of a fixed square subject to
/// pairing constraints.
#[derive(Clone, Debug)]
pub struct EnumerationQuery {
    pub lattice: GramLattice,
    pub target_square: BigInt,
    pub constraints: Vec<PairingConstraint>,
}

/// Complete, duplicate-free, lexicographically sorted list of nonzero
/// vectors with `q(v) = target_square` meeting every constraint.
pub fn enumerate_definite(
    query: &EnumerationQuery,
    limits: &EnumerationLimits,
) -> Result<Vec<LatticeVector>> {
    let l = &query.lattice;
    if l.rank() > limits.max_rank {
        return Err(Error::Capacity {
            what: "enumeration rank",
            attempted: BigInt::from(l.rank()),
            cap: BigInt::from(limits.max_rank),
        });
    }
    let (pos, neg) = l.signature();
    let flip = match (pos, neg) {
        (_, 0) => false,
        (0, _) => true,
        _ => return Err(Error::WrongSignature { expected: (l.rank(), 0), found: (pos, neg) }),
    };
    let target = if flip { -&query.target_square } else { query.target_square.clone() };
    if target.magnitude() > limits.max_radius.magnitude() {
        return Err(Error::Capacity {
            what: "enumeration radius",
            attempted: target.clone(),
            cap: limits.max_radius.clone(),
        });
    }
    if target.is_negative() || l.rank() == 0 {
        return Ok(Vec::new());
    }
    let gram = if flip {
        let rows = l.gram().rows().iter().map(|row| row.iter().map(|v| -v).collect()).collect();
        IntMat::from_rows(rows)
    } else {
        l.gram().clone()
    };
    let mut out: Vec<LatticeVector> = enumerate_ball(&gram, &target)?
        .into_iter()
        .filter(|v| l.square(v).expect("enumerated vectors have full length") == query.target_square)
        .filter(|v| {
            query.constraints.iter().all(|c| {
                let p = l.pair(v, &c.vector).expect("constraint vectors share the rank");
                c.cmp.holds(&p, &c.bound)
            })
        })
        .collect();
    out.sort();
    Ok(out)
}

/// All nonzero `v` with `v^T gram v <= bound` for a positive-definite
/// integer `gram`.
fn enumerate_ball(gram: &IntMat, bound: &BigInt) -> Result<Vec<LatticeVector>> {
    let n = gram.nrows();
    // Rational Cholesky: q(x) = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2.
    let mut c: Vec<Vec<BigRational>> = gram
        .rows()
        .iter()
        .map(|row| row.iter().map(|v| BigRational::from(v.clone())).collect())
        .collect();
    for i in 0..n {
        if !c[i][i].is_positive() {
            return Err(Error::Domain("enumeration requires a definite form"));
        }
        for j in (i + 1)..n {
            let f = &c[i][j] / &c[i][i];
            for k in j..n {
                let v = &f * &c[i][k];
                c[j][k] -= v;
            }
        }
    }
    let d: Vec<BigRational> = (0..n).map(|i| c[i][i].clone()).collect();
    let mu: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if j > i { &c[i][j] / &c[i][i] } else { BigRational::zero() })
                .collect()
        })
        .collect();

    let mut out = Vec::new();
    let mut coords = vec![BigInt::zero(); n];
    descend(
        n,
        &BigRational::zero(),
        &mut coords,
        &d,
        &mu,
        &BigRational::from(bound.clone()),
        &mut out,
    );
    Ok(out)
}

/// Depth-first walk over coordinates `level-1, ..., 0`; at each level the
/// offset `sum_{j>i} mu_ij x_j` recentres the admissible interval.
fn descend(
    level: usize,
    used: &BigRational,
    coords: &mut Vec<BigInt>,
    d: &[BigRational],
    mu: &[Vec<BigRational>],
    bound: &BigRational,
    out: &mut Vec<LatticeVector>,
) {
    let i = level - 1;
    let offset: BigRational =
        (i + 1..coords.len()).map(|j| &mu[i][j] * BigRational::from(coords[j].clone())).sum();
    let rem = bound - used;
    debug_assert!(!rem.is_negative());
    let ratio = &rem / &d[i];
    let lo = ceil_neg_sqrt_shift(&ratio, &offset);
    let hi = floor_sqrt_shift(&ratio, &offset);
    let mut x = lo;
    while x <= hi {
        coords[i] = x.clone();
        let term = BigRational::from(x.clone()) + &offset;
        let used_next = used + &d[i] * &term * &term;
        if used_next <= *bound {
            if i == 0 {
                if coords.iter().any(|v| !v.is_zero()) {
                    out.push(coords.clone());
                }
            } else {
                descend(i, &used_next, coords, d, mu, bound, out);
            }
        }
        x += 1;
    }
    coords[i] = BigInt::zero();
}

/// Rational `kappa` with `M_ell(E) <= kappa * (-q(E))` for every class `E`
/// separating `ell` from `h`, plus the integer Gram matrix of `A * M_ell`
/// (`A = q(ell)`).
fn majorant_data(l: &GramLattice, ell: &[BigInt], h: &[BigInt]) -> Result<(BigRational, IntMat)> {
    let a = l.square(ell)?;
    let b = l.pair(ell, h)?;
    let qh = l.square(h)?;
    if !a.is_positive() || !qh.is_positive() || !b.is_positive() {
        return Err(Error::NotInPositiveCone);
    }
    // Minimum of q((1-t) ell + t h) over t in [0, 1], exactly.
    let phi = |t: &BigRational| -> BigRational {
        let one_minus = BigRational::one() - t;
        BigRational::from(a.clone()) * &one_minus * &one_minus
            + BigRational::from(BigInt::from(2)) * BigRational::from(b.clone()) * t * &one_minus
            + BigRational::from(qh.clone()) * t * t
    };
    let mut qmin = BigRational::from(a.clone()).min(BigRational::from(qh.clone()));
    let lead = BigRational::from(&a - BigInt::from(2) * &b + &qh);
    if lead.is_positive() {
        let vertex = BigRational::from(&a - &b) / &lead;
        if vertex.is_positive() && vertex < BigRational::one() {
            qmin = qmin.min(phi(&vertex));
        }
    }
    if !qmin.is_positive() {
        return Err(Error::Internal("positive-cone segment left the cone"));
    }
    // (E, ell)^2 <= (-q(E)) * M_{u*}(ell) and M_{u*}(ell) <= 2 P^2 / Qmin - A.
    let p = (&a).max(&b).clone();
    let c_bound =
        BigRational::from(BigInt::from(2) * &p * &p) / &qmin - BigRational::from(a.clone());
    let kappa = BigRational::one() + BigRational::from(BigInt::from(2)) * &c_bound / BigRational::from(a.clone());
    // Integer Gram of A * M_ell: 2 (G ell)(G ell)^T - A G.
    let gl = l.gram().mul_vec(ell);
    let n = l.rank();
    let rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n).map(|j| BigInt::from(2) * &gl[i] * &gl[j] - &a * l.gram().at(i, j)).collect()
        })
        .collect();
    Ok((kappa, IntMat::from_rows(rows)))
}

/// Complete list of primitive classes matching a wall datum that separate
/// `ell` from `h`: `pair(E, ell) > 0` and `pair(E, h) <= 0` (a wall through
/// `h` counts as separating; the movable interior is an open condition).
pub fn enumerate_separating_walls(
    l: &GramLattice,
    ell: &[BigInt],
    h: &[BigInt],
    walls: &WallSpec,
    limits: &EnumerationLimits,
) -> Result<Vec<LatticeVector>> {
    let (pos, neg) = l.signature();
    if pos != 1 || neg == 0 {
        return Err(Error::WrongSignature {
            expected: (1, l.rank().saturating_sub(1)),
            found: (pos, neg),
        });
    }
    if l.rank() > limits.max_rank {
        return Err(Error::Capacity {
            what: "separating-wall rank",
            attempted: BigInt::from(l.rank()),
            cap: BigInt::from(limits.max_rank),
        });
    }
    let (kappa, majorant) = majorant_data(l, ell, h)?;
    let a = l.square(ell)?;
    let worst = walls.entries().iter().map(|e| -&e.square).max().unwrap_or_else(BigInt::zero);
    if worst.is_zero() {
        return Ok(Vec::new());
    }
    let radius = (BigRational::from(&a * &worst) * &kappa).floor().to_integer();
    if radius > limits.max_radius {
        return Err(Error::Capacity {
            what: "separating-wall radius",
            attempted: radius,
            cap: limits.max_radius.clone(),
        });
    }
    let mut out: Vec<LatticeVector> = enumerate_ball(&majorant, &radius)?
        .into_iter()
        .filter(|v| {
            let square = l.square(v).expect("enumerated vectors have full length");
            if !square.is_negative() {
                return false;
            }
            let div = l.divisibility(v).expect("nonzero by construction");
            if walls.matched_datum(&square, &div).is_none() {
                return false;
            }
            if !l.is_primitive(v).expect("nonzero by construction") {
                return false;
            }
            l.pair(v, ell).expect("length checked").is_positive()
                && !l.pair(v, h).expect("length checked").is_positive()
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Completeness audit: re-runs the separating-wall search with the derived
/// enumeration ball enlarged by `scale` and reports whether the filtered
/// result is unchanged. A `false` return would mean the comparison
/// constant is wrong.
pub fn separating_walls_doubling_audit(
    l: &GramLattice,
    ell: &[BigInt],
    h: &[BigInt],
    walls: &WallSpec,
    limits: &EnumerationLimits,
    scale: u32,
) -> Result<bool> {
    let base = enumerate_separating_walls(l, ell, h, walls, limits)?;
    let (kappa, majorant) = majorant_data(l, ell, h)?;
    let a = l.square(ell)?;
    let worst = walls.entries().iter().map(|e| -&e.square).max().unwrap_or_else(BigInt::zero);
    if worst.is_zero() {
        return Ok(base.is_empty());
    }
    let radius = (BigRational::from(&a * &worst) * &kappa).floor().to_integer() * BigInt::from(scale);
    let mut enlarged: Vec<LatticeVector> = enumerate_ball(&majorant, &radius)?
        .into_iter()
        .filter(|v| {
            let square = l.square(v).expect("enumerated vectors have full length");
            square.is_negative()
                && walls
                    .matched_datum(&square, &l.divisibility(v).expect("nonzero"))
                    .is_some()
                && l.is_primitive(v).expect("nonzero")
                && l.pair(v, ell).expect("length checked").is_positive()
                && !l.pair(v, h).expect("length checked").is_positive()
        })
        .collect();
    enlarged.sort();
    Ok(base == enlarged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::lattice::vector;

    fn limits() -> EnumerationLimits {
        EnumerationLimits::default()
    }

    fn plain(l: &GramLattice, t: i64) -> EnumerationQuery {
        EnumerationQuery {
            lattice: l.clone(),
            target_square: BigInt::from(t),
            constraints: Vec::new(),
        }
    }

    #[test]
    fn rank_one_examples() {
        let l = GramLattice::diagonal(&[-2]).unwrap();
        let vs = enumerate_definite(&plain(&l, -2), &limits()).unwrap();
        assert_eq!(vs, vec![vector(&[-1]), vector(&[1])]);
        assert!(enumerate_definite(&plain(&l, -3), &limits()).unwrap().is_empty());
        assert!(enumerate_definite(&plain(&l, 2), &limits()).unwrap().is_empty());
    }

    #[test]
    fn indefinite_input_is_rejected() {
        let u = catalog::hyperbolic_plane();
        assert!(matches!(
            enumerate_definite(&plain(&u, 2), &limits()),
            Err(Error::WrongSignature { .. })
        ));
    }

    #[test]
    fn e8_has_240_roots() {
        let e8 = catalog::e8_minus();
        let roots = enumerate_definite(&plain(&e8, -2), &limits()).unwrap();
        assert_eq!(roots.len(), 240);
        // They come in opposite pairs and are all primitive.
        for v in &roots {
            let neg: LatticeVector = v.iter().map(|x| -x).collect();
            assert!(roots.binary_search(&neg).is_ok());
            assert!(e8.is_primitive(v).unwrap());
        }
    }

    #[test]
    fn agrees_with_box_search_on_small_lattices() {
        let cases = [
            GramLattice::diagonal(&[2, 4]).unwrap(),
            GramLattice::diagonal(&[-2, -6, -4]).unwrap(),
            GramLattice::from_i64(&[&[2, 1], &[1, 4]]).unwrap(),
            GramLattice::from_i64(&[&[-4, 1, 0], &[1, -2, 1], &[0, 1, -6]]).unwrap(),
            GramLattice::from_i64(&[
                &[2, 1, 0, 0],
                &[1, 4, 1, 0],
                &[0, 1, 6, -1],
                &[0, 0, -1, 10],
            ])
            .unwrap(),
        ];
        for l in cases {
            for t in -20i64..=20 {
                let got = enumerate_definite(&plain(&l, t), &limits()).unwrap();
                let mut expected = Vec::new();
                let b = 8i64;
                let rank = l.rank();
                let mut idx = vec![-b; rank];
                'outer: loop {
                    let v: LatticeVector = idx.iter().map(|&x| BigInt::from(x)).collect();
                    if idx.iter().any(|&x| x != 0) && l.square(&v).unwrap() == BigInt::from(t) {
                        expected.push(v);
                    }
                    for slot in 0..rank {
                        idx[slot] += 1;
                        if idx[slot] <= b {
                            continue 'outer;
                        }
                        idx[slot] = -b;
                    }
                    break;
                }
                expected.sort();
                assert_eq!(got, expected, "lattice {:?} target {t}", l.gram());
            }
        }
    }

    #[test]
    fn constraints_break_symmetry() {
        let l = GramLattice::diagonal(&[2, 4]).unwrap();
        let q = EnumerationQuery {
            lattice: l.clone(),
            target_square: BigInt::from(6),
            constraints: vec![PairingConstraint {
                vector: vector(&[1, 0]),
                cmp: Cmp::Gt,
                bound: BigInt::zero(),
            }],
        };
        let vs = enumerate_definite(&q, &limits()).unwrap();
        assert_eq!(vs, vec![vector(&[1, -1]), vector(&[1, 1])]);
    }

    #[test]
    fn separating_wall_examples() {
        let walls = crate::walls::WallSpec::k3();
        // In diag(2,-2) the square -2 classes pair to zero with (1,0):
        // the strict positivity filter rejects them.
        let l = GramLattice::diagonal(&[2, -2]).unwrap();
        let out =
            enumerate_separating_walls(&l, &vector(&[1, 0]), &vector(&[2, 1]), &walls, &limits())
                .unwrap();
        assert!(out.is_empty());

        // diag(4,-6): (1,1) separates (1,0) from (3,2) (wall through h).
        let l = GramLattice::diagonal(&[4, -6]).unwrap();
        let out =
            enumerate_separating_walls(&l, &vector(&[1, 0]), &vector(&[3, 2]), &walls, &limits())
                .unwrap();
        assert_eq!(out, vec![vector(&[1, 1])]);

        // ell = h never separates.
        let out =
            enumerate_separating_walls(&l, &vector(&[1, 0]), &vector(&[1, 0]), &walls, &limits())
                .unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn walls_match_exactly_one_datum() {
        use crate::walls::{WallDatum, WallSpec};
        let walls = WallSpec::new(
            "toy",
            vec![WallDatum::with_div(-2, 1), WallDatum::with_div(-2, 2), WallDatum::any(-4)],
            BigInt::from(-4),
        )
        .unwrap();
        let l = GramLattice::from_i64(&[&[4, 1, 0], &[1, -2, 1], &[0, 1, -4]]).unwrap();
        let ell = vector(&[1, 0, 0]);
        let h = vector(&[3, 1, -1]);
        let out = enumerate_separating_walls(&l, &ell, &h, &walls, &limits()).unwrap();
        for e in &out {
            let square = l.square(e).unwrap();
            let div = l.divisibility(e).unwrap();
            let matches = walls
                .entries()
                .iter()
                .filter(|d| d.matches(&square, &div))
                .count();
            assert_eq!(matches, 1, "class {e:?} matches {matches} data");
            assert!(l.is_primitive(e).unwrap());
        }
    }

    #[test]
    fn separating_walls_swap_symmetry() {
        let walls = crate::walls::WallSpec::k3();
        let l = GramLattice::from_i64(&[&[4, 1, 0], &[1, -2, 1], &[0, 1, -4]]).unwrap();
        let ell = vector(&[1, 0, 0]);
        let h = vector(&[3, 1, -1]);
        assert!(l.square(&h).unwrap().is_positive());
        let forward = enumerate_separating_walls(&l, &ell, &h, &walls, &limits()).unwrap();
        let backward = enumerate_separating_walls(&l, &h, &ell, &walls, &limits()).unwrap();
        // E separates ell from h iff -E separates h from ell, up to the
        // boundary convention at the endpoints.
        for e in &forward {
            let through_h = l.pair(e, &h).unwrap().is_zero();
            let through_l = l.pair(e, &ell).unwrap().is_zero();
            if !through_h && !through_l {
                let neg: LatticeVector = e.iter().map(|x| -x).collect();
                assert!(backward.contains(&neg), "missing swapped wall {e:?}");
            }
        }
    }

    #[test]
    fn wall_radius_audit_is_stable() {
        // Doubling the derived radius must not add vectors.
        let walls = crate::walls::WallSpec::k3();
        let l = GramLattice::from_i64(&[&[4, 1, 0], &[1, -2, 1], &[0, 1, -4]]).unwrap();
        let ell = vector(&[1, 0, 0]);
        let h = vector(&[3, 1, -1]);
        let (kappa, majorant) = majorant_data(&l, &ell, &h).unwrap();
        let a = l.square(&ell).unwrap();
        let radius = (BigRational::from(&a * BigInt::from(2)) * &kappa).floor().to_integer();
        let filter = |candidates: Vec<LatticeVector>| -> Vec<LatticeVector> {
            let mut out: Vec<LatticeVector> = candidates
                .into_iter()
                .filter(|v| {
                    l.square(v).unwrap() == BigInt::from(-2)
                        && l.is_primitive(v).unwrap()
                        && l.pair(v, &ell).unwrap().is_positive()
                        && !l.pair(v, &h).unwrap().is_positive()
                })
                .collect();
            out.sort();
            out
        };
        let base = filter(enumerate_ball(&majorant, &radius).unwrap());
        let doubled = filter(enumerate_ball(&majorant, &(radius * BigInt::from(2))).unwrap());
        assert_eq!(base, doubled);
        let reported = enumerate_separating_walls(&l, &ell, &h, &walls, &limits()).unwrap();
        assert_eq!(reported, base);
    }
}
