//! JSON wire types. Every integer is carried as a decimal string so that
//! arbitrary-precision values survive any JSON reader, and all structures
//! serialize with fixed field order for byte-reproducible reports.

use bbf_core::avoidance::{AvoidanceCertificate, AvoidanceReason};
use bbf_core::cones::{ConeReport, DivSemantics, MovableLocation, RayDesc, Verdict};
use bbf_core::forms::{AbsenceCertificate, ResidueEntry};
use bbf_core::lattice::{GramLattice, LatticeVector};
use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A big integer on the wire: emitted as a decimal string, accepted as
/// either a string or a JSON number.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Big(pub BigInt);

impl Serialize for Big {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Big {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        let raw = Raw::deserialize(d)?;
        match raw {
            Raw::Int(v) => Ok(Big(BigInt::from(v))),
            Raw::Text(t) => t
                .trim()
                .parse::<BigInt>()
                .map(Big)
                .map_err(|_| D::Error::custom(format!("not an integer: '{t}'"))),
        }
    }
}

pub fn vec_out(v: &[BigInt]) -> Vec<Big> {
    v.iter().cloned().map(Big).collect()
}

pub fn vec_in(v: &[Big]) -> LatticeVector {
    v.iter().map(|b| b.0.clone()).collect()
}

pub fn gram_out(l: &GramLattice) -> Vec<Vec<Big>> {
    l.gram().rows().iter().map(|r| vec_out(r)).collect()
}

/// Lattice as it appears inside results.
#[derive(Clone, Serialize, Deserialize, Debug)]
pub struct LatticeOut {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub rank: usize,
    pub gram: Vec<Vec<Big>>,
}

impl LatticeOut {
    pub fn of(l: &GramLattice) -> Self {
        LatticeOut {
            label: l.label().map(str::to_owned),
            rank: l.rank(),
            gram: gram_out(l),
        }
    }
}

#[derive(Clone, Serialize, Deserialize, Debug)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RayDto {
    Rational {
        generator: Vec<Big>,
    },
    /// Slope `x/y` is the chosen root of `poly[0] t^2 + poly[1] t + poly[2]`.
    Irrational {
        sqrt_sign: i8,
        slope_poly: [Big; 3],
    },
}

pub fn ray_out(r: &RayDesc, lattice: &GramLattice) -> RayDto {
    match r {
        RayDesc::Rational { generator } => RayDto::Rational { generator: vec_out(generator) },
        RayDesc::Irrational { sqrt_sign } => {
            let g = lattice.gram();
            RayDto::Irrational {
                sqrt_sign: *sqrt_sign,
                slope_poly: [
                    Big(g.at(0, 0).clone()),
                    Big(g.at(0, 1).clone() * BigInt::from(2)),
                    Big(g.at(1, 1).clone()),
                ],
            }
        }
    }
}

#[derive(Clone, Serialize, Deserialize, Debug)]
pub struct ConeReportDto {
    pub lattice: LatticeOut,
    pub ample: Vec<Big>,
    pub div_semantics: String,
    pub verdict: String,
    pub positive_rays: [RayDto; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub effective_rays: Option<[RayDto; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub movable_rays: Option<[RayDto; 2]>,
    pub wall_classes: Vec<Vec<Big>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isotropic_witness: Option<Vec<Big>>,
    pub notes: Vec<String>,
}

pub fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::BirFinite => "bir-finite",
        Verdict::BirInfinite => "bir-infinite",
        Verdict::Undetermined => "undetermined",
    }
}

pub fn cone_report_out(r: &ConeReport) -> ConeReportDto {
    let l = &r.lattice;
    ConeReportDto {
        lattice: LatticeOut::of(l),
        ample: vec_out(&r.ample),
        div_semantics: match r.div_semantics {
            DivSemantics::Picard => "picard".to_owned(),
            DivSemantics::Ambient => "ambient".to_owned(),
        },
        verdict: verdict_str(r.verdict).to_owned(),
        positive_rays: [ray_out(&r.positive_rays.0, l), ray_out(&r.positive_rays.1, l)],
        effective_rays: r
            .effective_rays
            .as_ref()
            .map(|(a, b)| [ray_out(a, l), ray_out(b, l)]),
        movable_rays: r.movable_rays.as_ref().map(|(a, b)| [ray_out(a, l), ray_out(b, l)]),
        wall_classes: r.wall_classes.iter().map(|c| vec_out(c)).collect(),
        isotropic_witness: r.isotropic_witness.as_ref().map(|w| vec_out(w)),
        notes: r.notes.clone(),
    }
}

#[derive(Clone, Serialize, Deserialize, Debug)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ReasonDto {
    Parity,
    NonSquareProduct { product: Big },
    ForcedSquare { d: Big, q_of_d: Big },
    ModFour { d: Big, q: Big, m_over_q2: Big },
}

#[derive(Clone, Serialize, Deserialize, Debug)]
pub struct ReasonEntryDto {
    pub i: Big,
    #[serde(flatten)]
    pub reason: ReasonDto,
}

#[derive(Clone, Serialize, Deserialize, Debug)]
pub struct CertificateDto {
    pub square_ell: Big,
    pub scale: Big,
    pub index: Big,
    pub h: Vec<Big>,
    pub b_square: Big,
    pub coefficient: Big,
    pub diagonal: [Big; 2],
    pub n_bound: Big,
    pub primitivity_witness: Vec<Big>,
    pub reasons: Vec<ReasonEntryDto>,
    pub brute_force_radius: Big,
}

pub fn certificate_out(c: &AvoidanceCertificate) -> CertificateDto {
    CertificateDto {
        square_ell: Big(c.square_ell.clone()),
        scale: Big(c.scale.clone()),
        index: Big(c.index.clone()),
        h: vec_out(&c.h),
        b_square: Big(c.b_square.clone()),
        coefficient: Big(c.coefficient.clone()),
        diagonal: [Big(c.diagonal.0.clone()), Big(c.diagonal.1.clone())],
        n_bound: Big(c.n_bound.clone()),
        primitivity_witness: vec_out(&c.primitivity_witness),
        reasons: c
            .reasons
            .iter()
            .map(|(i, r)| ReasonEntryDto {
                i: Big(i.clone()),
                reason: match r {
                    AvoidanceReason::Parity => ReasonDto::Parity,
                    AvoidanceReason::NonSquareProduct { product } => {
                        ReasonDto::NonSquareProduct { product: Big(product.clone()) }
                    }
                    AvoidanceReason::ForcedSquare { d, q_of_d } => ReasonDto::ForcedSquare {
                        d: Big(d.clone()),
                        q_of_d: Big(q_of_d.clone()),
                    },
                    AvoidanceReason::ModFour { d, q, m_over_q2 } => ReasonDto::ModFour {
                        d: Big(d.clone()),
                        q: Big(q.clone()),
                        m_over_q2: Big(m_over_q2.clone()),
                    },
                },
            })
            .collect(),
        brute_force_radius: Big(c.brute_force_radius.clone()),
    }
}

pub fn certificate_in(c: &CertificateDto) -> AvoidanceCertificate {
    AvoidanceCertificate {
        square_ell: c.square_ell.0.clone(),
        scale: c.scale.0.clone(),
        index: c.index.0.clone(),
        h: vec_in(&c.h),
        b_square: c.b_square.0.clone(),
        coefficient: c.coefficient.0.clone(),
        diagonal: (c.diagonal[0].0.clone(), c.diagonal[1].0.clone()),
        n_bound: c.n_bound.0.clone(),
        primitivity_witness: vec_in(&c.primitivity_witness),
        reasons: c
            .reasons
            .iter()
            .map(|e| {
                let reason = match &e.reason {
                    ReasonDto::Parity => AvoidanceReason::Parity,
                    ReasonDto::NonSquareProduct { product } => {
                        AvoidanceReason::NonSquareProduct { product: product.0.clone() }
                    }
                    ReasonDto::ForcedSquare { d, q_of_d } => AvoidanceReason::ForcedSquare {
                        d: d.0.clone(),
                        q_of_d: q_of_d.0.clone(),
                    },
                    ReasonDto::ModFour { d, q, m_over_q2 } => AvoidanceReason::ModFour {
                        d: d.0.clone(),
                        q: q.0.clone(),
                        m_over_q2: m_over_q2.0.clone(),
                    },
                };
                (e.i.0.clone(), reason)
            })
            .collect(),
        brute_force_radius: c.brute_force_radius.0.clone(),
    }
}

/// Self-contained certificate document: everything needed to re-validate
/// offline, with no recomputation of the construction.
#[derive(Clone, Serialize, Deserialize, Debug)]
pub struct CertificateDoc {
    pub schema: String,
    pub ambient: LatticeOut,
    pub ell: Vec<Big>,
    pub a: Vec<Big>,
    pub basis: Vec<Vec<Big>>,
    pub certificate: CertificateDto,
}

pub const CERTIFICATE_SCHEMA: &str = "bbf/certificate/1";

#[derive(Clone, Serialize, Deserialize, Debug)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AbsenceDto {
    NonSquareDisc {
        disc: Big,
    },
    DefiniteSign {
        form_positive: bool,
        target: Big,
    },
    DefiniteExhausted {
        y_bound: Big,
    },
    SplitDivisors {
        s: Big,
        c0: Big,
        split_transform: [Big; 4],
    },
    CycleSearch {
        reduced: [Big; 3],
        entries: Vec<ResidueEntryDto>,
    },
}

#[derive(Clone, Serialize, Deserialize, Debug)]
pub struct ResidueEntryDto {
    pub e: Big,
    pub n_prime: Big,
    pub t: Big,
    pub companion_reduced: [Big; 3],
}

pub fn absence_out(c: &AbsenceCertificate) -> AbsenceDto {
    match c {
        AbsenceCertificate::NonSquareDisc { disc } => {
            AbsenceDto::NonSquareDisc { disc: Big(disc.clone()) }
        }
        AbsenceCertificate::DefiniteSign { form_positive, target } => AbsenceDto::DefiniteSign {
            form_positive: *form_positive,
            target: Big(target.clone()),
        },
        AbsenceCertificate::DefiniteExhausted { y_bound } => {
            AbsenceDto::DefiniteExhausted { y_bound: Big(y_bound.clone()) }
        }
        AbsenceCertificate::SplitDivisors { s, c0, split_transform } => {
            AbsenceDto::SplitDivisors {
                s: Big(s.clone()),
                c0: Big(c0.clone()),
                split_transform: [
                    Big(split_transform[0].clone()),
                    Big(split_transform[1].clone()),
                    Big(split_transform[2].clone()),
                    Big(split_transform[3].clone()),
                ],
            }
        }
        AbsenceCertificate::CycleSearch { reduced, entries } => AbsenceDto::CycleSearch {
            reduced: [Big(reduced.0.clone()), Big(reduced.1.clone()), Big(reduced.2.clone())],
            entries: entries.iter().map(residue_out).collect(),
        },
    }
}

fn residue_out(e: &ResidueEntry) -> ResidueEntryDto {
    ResidueEntryDto {
        e: Big(e.e.clone()),
        n_prime: Big(e.n_prime.clone()),
        t: Big(e.t.clone()),
        companion_reduced: [
            Big(e.companion_reduced.0.clone()),
            Big(e.companion_reduced.1.clone()),
            Big(e.companion_reduced.2.clone()),
        ],
    }
}

#[derive(Clone, Serialize, Deserialize, Debug)]
pub struct MovableDto {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub square: Option<Big>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairing: Option<Big>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocking_wall: Option<Vec<Big>>,
}

pub fn movable_out(m: &MovableLocation) -> MovableDto {
    match m {
        MovableLocation::Inside => MovableDto {
            status: "inside".to_owned(),
            square: None,
            pairing: None,
            blocking_wall: None,
        },
        MovableLocation::NotPositive { square } => MovableDto {
            status: "not-positive".to_owned(),
            square: Some(Big(square.clone())),
            pairing: None,
            blocking_wall: None,
        },
        MovableLocation::OppositeComponent { pairing } => MovableDto {
            status: "opposite-component".to_owned(),
            square: None,
            pairing: Some(Big(pairing.clone())),
            blocking_wall: None,
        },
        MovableLocation::Blocked { wall } => MovableDto {
            status: "blocked".to_owned(),
            square: None,
            pairing: None,
            blocking_wall: Some(vec_out(wall)),
        },
    }
}
