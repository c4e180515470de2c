//! Cone geometry of signature `(1, n)` lattices: positive-cone
//! membership, movable-interior location, rank-2 chamber decompositions
//! and the rank-2 finiteness oracle for birational automorphism groups.
//!
//! The rank-2 verdict follows the numerical criterion: the group is
//! infinite exactly when the lattice carries no isotropic class and no
//! primitive class matching a wall datum.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::content;
use crate::enumerate::{enumerate_separating_walls, EnumerationLimits};
use crate::forms::{
    extremal_rays_from_classes, has_isotropic_vector, primitive_representatives, BinaryForm,
    BoundaryRay, ChamberSide, FormsConfig, Isotropy, Rank2Rays,
};
use crate::lattice::{GramLattice, LatticeVector, Sublattice};
use crate::walls::{DivisibilityConstraint, WallSpec};
use crate::{Error, Result};

/// Whether `v` lies strictly inside the positive-cone component of
/// `ell_ref`: positive square and positive pairing with the reference.
pub fn in_positive_cone(l: &GramLattice, v: &[BigInt], ell_ref: &[BigInt]) -> Result<bool> {
    let (pos, neg) = l.signature();
    if pos != 1 {
        return Err(Error::WrongSignature {
            expected: (1, l.rank().saturating_sub(1)),
            found: (pos, neg),
        });
    }
    if !l.square(ell_ref)?.is_positive() {
        return Err(Error::NotInPositiveCone);
    }
    Ok(l.square(v)?.is_positive() && l.pair(v, ell_ref)?.is_positive())
}

/// Location of a class relative to the interior of the movable chamber of
/// `ell_ref`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MovableLocation {
    /// Positive square and no separating wall class.
    Inside,
    /// The square is not positive.
    NotPositive { square: BigInt },
    /// Positive square but in the opposite positive-cone component.
    OppositeComponent { pairing: BigInt },
    /// A wall class separates the reference from the queried class.
    Blocked { wall: LatticeVector },
}

impl MovableLocation {
    pub fn is_inside(&self) -> bool {
        matches!(self, MovableLocation::Inside)
    }
}

/// Decides whether `h` lies in the interior of the movable chamber of
/// `ell_ref` (which is trusted to lie there, as a polarization does).
pub fn in_movable_interior(
    l: &GramLattice,
    h: &[BigInt],
    ell_ref: &[BigInt],
    walls: &WallSpec,
    limits: &EnumerationLimits,
) -> Result<MovableLocation> {
    let square = l.square(h)?;
    if !square.is_positive() {
        return Ok(MovableLocation::NotPositive { square });
    }
    let pairing = l.pair(ell_ref, h)?;
    if !pairing.is_positive() {
        return Ok(MovableLocation::OppositeComponent { pairing });
    }
    let blocking = enumerate_separating_walls(l, ell_ref, h, walls, limits)?;
    Ok(match blocking.into_iter().next() {
        None => MovableLocation::Inside,
        Some(wall) => MovableLocation::Blocked { wall },
    })
}

/// Finiteness verdict for the birational automorphism group supported by
/// a rank-2 hyperbolic Picard lattice.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    BirFinite,
    BirInfinite,
    Undetermined,
}

/// Which lattice divisibility constraints were evaluated in.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DivSemantics {
    /// The rank-2 Picard lattice itself.
    Picard,
    /// The ambient lattice of an explicit embedding.
    Ambient,
}

/// Exact description of one extremal ray.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RayDesc {
    /// Spanned by a primitive integral vector.
    Rational { generator: LatticeVector },
    /// Irrational: the slope `x/y` solves `a t^2 + 2b t + c = 0`, branch
    /// selected by the sign on `sqrt(disc)`.
    Irrational { sqrt_sign: i8 },
}

/// Cone report for a rank-2 hyperbolic lattice.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConeReport {
    pub lattice: GramLattice,
    pub ample: LatticeVector,
    pub div_semantics: DivSemantics,
    /// Boundary rays of the positive cone, plus side first.
    pub positive_rays: (RayDesc, RayDesc),
    /// Extremal rays of the effective cone (wall classes or boundary);
    /// `None` when a wall passes through the reference class.
    pub effective_rays: Option<(RayDesc, RayDesc)>,
    /// Extremal rays of the movable chamber of the reference class.
    pub movable_rays: Option<(RayDesc, RayDesc)>,
    /// Wall classes matching the table, normalised against the reference.
    pub wall_classes: Vec<LatticeVector>,
    pub isotropic_witness: Option<LatticeVector>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

/// Rank-2 finiteness oracle with divisibility evaluated in the Picard
/// lattice itself.
pub fn rank2_cone_report(
    l: &GramLattice,
    ample: &[BigInt],
    walls: Option<&WallSpec>,
    config: &FormsConfig,
) -> Result<ConeReport> {
    let f = BinaryForm::from_lattice(l)?;
    let div_of = |v: &(BigInt, BigInt)| f.divisibility(v);
    build_report(&f, l.clone(), ample, walls, &div_of, DivSemantics::Picard, config)
}

/// Rank-2 finiteness oracle for an explicitly embedded Picard lattice,
/// with divisibility evaluated in the ambient lattice. `ample` is given
/// in sublattice coordinates.
pub fn rank2_cone_report_embedded(
    s: &Sublattice,
    ample: &[BigInt],
    walls: Option<&WallSpec>,
    config: &FormsConfig,
) -> Result<ConeReport> {
    if s.rank() != 2 {
        return Err(Error::WrongRank { expected: 2, found: s.rank() });
    }
    let induced = s.induced_lattice()?;
    let f = BinaryForm::from_lattice(&induced)?;
    let ambient = s.ambient().clone();
    let (b0, b1) = (s.basis()[0].clone(), s.basis()[1].clone());
    let div_of = move |v: &(BigInt, BigInt)| {
        let coords: LatticeVector = b0.iter().zip(&b1).map(|(x, y)| &v.0 * x + &v.1 * y).collect();
        ambient.divisibility(&coords).expect("wall classes are nonzero")
    };
    build_report(&f, induced, ample, walls, &div_of, DivSemantics::Ambient, config)
}

fn build_report(
    f: &BinaryForm,
    lattice: GramLattice,
    ample: &[BigInt],
    walls: Option<&WallSpec>,
    div_of: &dyn Fn(&(BigInt, BigInt)) -> BigInt,
    semantics: DivSemantics,
    config: &FormsConfig,
) -> Result<ConeReport> {
    if ample.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: ample.len() });
    }
    let ample_pair = (ample[0].clone(), ample[1].clone());
    let mut notes = Vec::new();

    // Wall-datum matching under the requested divisibility semantics.
    let mut matched: Vec<(BigInt, BigInt)> = Vec::new();
    let mut ambient_gap = false;
    if let Some(w) = walls {
        for datum in w.entries() {
            let (candidates, complete) = primitive_representatives(f, &datum.square, config)?;
            let mut hit = false;
            for mut v in candidates.iter().cloned() {
                if !datum.divisibility.accepts(&div_of(&v)) {
                    continue;
                }
                hit = true;
                if f.pair(&v, &ample_pair).is_negative() {
                    v = (-v.0, -v.1);
                }
                if !matched.contains(&v) {
                    matched.push(v);
                }
            }
            // An exact divisibility constraint evaluated in the ambient
            // lattice is not an orbit invariant; a miss on representatives
            // of an infinite orbit is inconclusive.
            if !hit
                && !candidates.is_empty()
                && !complete
                && semantics == DivSemantics::Ambient
                && matches!(datum.divisibility, DivisibilityConstraint::Exactly(_))
            {
                ambient_gap = true;
            }
        }
    }

    let isotropy = has_isotropic_vector(f);
    let isotropic_witness = match &isotropy {
        Isotropy::Isotropic { witness } => {
            let mut w = witness.clone();
            if f.pair(&w, &ample_pair).is_negative() {
                w = (-w.0, -w.1);
            }
            Some(vec![w.0, w.1])
        }
        Isotropy::Anisotropic { .. } => None,
    };

    let verdict = if isotropic_witness.is_some() || !matched.is_empty() {
        Verdict::BirFinite
    } else if walls.is_none() {
        notes.push(String::from(
            "wall data absent: isotropy alone cannot rule out exceptional classes",
        ));
        Verdict::Undetermined
    } else if ambient_gap {
        notes.push(String::from(
            "ambient divisibility varies over an infinite orbit; exact-divisibility wall data \
             could not be fully excluded",
        ));
        Verdict::Undetermined
    } else {
        Verdict::BirInfinite
    };

    let rays = extremal_rays_from_classes(f, &ample_pair, matched.clone(), config)?;
    let Rank2Rays { boundary_plus, boundary_minus, chamber, matched_classes: _ } = rays;
    let positive_rays = (boundary_to_desc(&boundary_plus), boundary_to_desc(&boundary_minus));
    let (effective_rays, movable_rays) = match chamber {
        None => {
            notes.push(String::from("a wall passes through the reference class"));
            (None, None)
        }
        Some((plus, minus)) => {
            let eff = (side_to_effective(&plus), side_to_effective(&minus));
            let mov = (side_to_movable(&plus), side_to_movable(&minus));
            (Some(eff), Some(mov))
        }
    };
    Ok(ConeReport {
        lattice,
        ample: ample.to_vec(),
        div_semantics: semantics,
        positive_rays,
        effective_rays,
        movable_rays,
        wall_classes: matched.into_iter().map(|v| vec![v.0, v.1]).collect(),
        isotropic_witness,
        verdict,
        notes,
    })
}

fn boundary_to_desc(b: &BoundaryRay) -> RayDesc {
    match b {
        BoundaryRay::Rational { ray } => {
            RayDesc::Rational { generator: vec![ray.0.clone(), ray.1.clone()] }
        }
        BoundaryRay::Irrational { sqrt_sign } => RayDesc::Irrational { sqrt_sign: *sqrt_sign },
    }
}

fn side_to_effective(s: &ChamberSide) -> RayDesc {
    match s {
        ChamberSide::Wall { class, .. } => {
            RayDesc::Rational { generator: vec![class.0.clone(), class.1.clone()] }
        }
        ChamberSide::Boundary(b) => boundary_to_desc(b),
    }
}

fn side_to_movable(s: &ChamberSide) -> RayDesc {
    match s {
        ChamberSide::Wall { ray, .. } => {
            RayDesc::Rational { generator: vec![ray.0.clone(), ray.1.clone()] }
        }
        ChamberSide::Boundary(b) => boundary_to_desc(b),
    }
}

/// One sector of the wall-and-chamber decomposition, listed from the
/// minus boundary to the plus boundary.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Chamber {
    pub lower: RayDesc,
    pub upper: RayDesc,
    pub contains_reference: bool,
}

/// Chambers of the positive cone cut out by an explicit list of wall
/// classes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChamberDecomposition {
    /// Interior wall rays, sorted from the minus boundary towards the
    /// plus boundary of the component of the reference class.
    pub wall_rays: Vec<LatticeVector>,
    pub chambers: Vec<Chamber>,
}

/// Cuts the positive-cone component of `ell_ref` along the orthogonal
/// walls of the supplied classes. The reference class must lie in a
/// chamber interior.
pub fn chamber_decomposition_rank2(
    l: &GramLattice,
    ell_ref: &[BigInt],
    wall_classes: &[LatticeVector],
) -> Result<ChamberDecomposition> {
    let f = BinaryForm::from_lattice(l)?;
    if l.signature() != (1, 1) {
        return Err(Error::WrongSignature { expected: (1, 1), found: l.signature() });
    }
    if ell_ref.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: ell_ref.len() });
    }
    let ell = (ell_ref[0].clone(), ell_ref[1].clone());
    if !f.eval(&ell.0, &ell.1).is_positive() {
        return Err(Error::NotInPositiveCone);
    }

    let mut rays: Vec<(BigInt, BigInt)> = Vec::new();
    for class in wall_classes {
        if class.len() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: class.len() });
        }
        let c = (class[0].clone(), class[1].clone());
        let square = f.eval(&c.0, &c.1);
        if !square.is_negative() {
            return Err(Error::Domain("wall classes must have negative square"));
        }
        // Primitive generator of the wall inside the cone component.
        let gx = f.pair(&c, &(BigInt::from(1), BigInt::from(0)));
        let gy = f.pair(&c, &(BigInt::from(0), BigInt::from(1)));
        let g = content(&[gx.clone(), gy.clone()]);
        let mut ray = (-&gy / &g, gx / &g);
        let pairing = f.pair(&ray, &ell);
        if pairing.is_negative() {
            ray = (-ray.0, -ray.1);
        }
        if det2(&ray, &ell).is_zero() {
            return Err(Error::WallThroughReference);
        }
        if !rays.contains(&ray) {
            rays.push(ray);
        }
    }
    // Ascending angle: r comes first when det(r, r') > 0 for later r'.
    rays.sort_by(|u, v| {
        let d = det2(u, v);
        if d.is_positive() {
            core::cmp::Ordering::Less
        } else if d.is_negative() {
            core::cmp::Ordering::Greater
        } else {
            core::cmp::Ordering::Equal
        }
    });

    let disc = f.disc();
    let (bplus, bminus) =
        crate::forms::boundary_rays(&f, &ell, &disc, crate::arith::is_square(&disc))?;
    let lower_desc = boundary_to_desc(&bminus);
    let upper_desc = boundary_to_desc(&bplus);

    let mut bounds: Vec<RayDesc> = Vec::with_capacity(rays.len() + 2);
    bounds.push(lower_desc);
    for r in &rays {
        bounds.push(RayDesc::Rational { generator: vec![r.0.clone(), r.1.clone()] });
    }
    bounds.push(upper_desc);

    // Locate the reference: count the wall rays on its minus side.
    let below = rays.iter().filter(|r| det2(r, &ell).is_positive()).count();
    let chambers: Vec<Chamber> = bounds
        .windows(2)
        .enumerate()
        .map(|(i, w)| Chamber {
            lower: w[0].clone(),
            upper: w[1].clone(),
            contains_reference: i == below,
        })
        .collect();
    Ok(ChamberDecomposition {
        wall_rays: rays.into_iter().map(|r| vec![r.0, r.1]).collect(),
        chambers,
    })
}

fn det2(u: &(BigInt, BigInt), v: &(BigInt, BigInt)) -> BigInt {
    &u.0 * &v.1 - &u.1 * &v.0
}
