//! Numerical wall data: the `(square, divisibility)` patterns that
//! characterise the classes whose orthogonals cut walls of the movable
//! cone for a fixed deformation class.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use crate::{Error, Result};

/// Divisibility filter attached to a wall datum.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DivisibilityConstraint {
    /// Any divisibility is accepted.
    Any,
    /// The divisibility must equal this value exactly.
    Exactly(BigInt),
}

impl DivisibilityConstraint {
    pub fn accepts(&self, div: &BigInt) -> bool {
        match self {
            DivisibilityConstraint::Any => true,
            DivisibilityConstraint::Exactly(d) => d == div,
        }
    }
}

/// One numerical wall pattern: a negative even square plus a divisibility
/// constraint.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WallDatum {
    pub square: BigInt,
    pub divisibility: DivisibilityConstraint,
}

impl WallDatum {
    pub fn any(square: i64) -> Self {
        WallDatum { square: BigInt::from(square), divisibility: DivisibilityConstraint::Any }
    }

    pub fn with_div(square: i64, div: i64) -> Self {
        WallDatum {
            square: BigInt::from(square),
            divisibility: DivisibilityConstraint::Exactly(BigInt::from(div)),
        }
    }

    pub fn matches(&self, square: &BigInt, div: &BigInt) -> bool {
        &self.square == square && self.divisibility.accepts(div)
    }
}

/// The wall data of a deformation class: finitely many `(square, div)`
/// entries, all bounded below by `floor`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WallSpec {
    label: String,
    entries: Vec<WallDatum>,
    floor: BigInt,
}

impl WallSpec {
    pub fn new(label: impl Into<String>, entries: Vec<WallDatum>, floor: BigInt) -> Result<Self> {
        if !floor.is_negative() {
            return Err(Error::Domain("wall-square floor must be negative"));
        }
        for e in &entries {
            if !e.square.is_negative() || !e.square.is_even() {
                return Err(Error::Domain("wall squares must be negative and even"));
            }
            if e.square < floor {
                return Err(Error::Domain("wall square below the declared floor"));
            }
        }
        for (i, a) in entries.iter().enumerate() {
            for b in entries.iter().skip(i + 1) {
                if a.square == b.square {
                    let overlap = match (&a.divisibility, &b.divisibility) {
                        (DivisibilityConstraint::Exactly(x), DivisibilityConstraint::Exactly(y)) => {
                            x == y
                        }
                        _ => true,
                    };
                    if overlap {
                        return Err(Error::Domain(
                            "wall data entries overlap: a class could match two of them",
                        ));
                    }
                }
            }
        }
        Ok(WallSpec { label: label.into(), entries, floor })
    }

    /// The classical surface case: square `-2`, any divisibility.
    pub fn k3() -> Self {
        WallSpec::new("K3", vec![WallDatum::any(-2)], BigInt::from(-2))
            .expect("the K3 wall table is valid")
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn entries(&self) -> &[WallDatum] {
        &self.entries
    }

    pub fn floor(&self) -> &BigInt {
        &self.floor
    }

    /// Index of the unique datum matched by `(square, div)`, if any.
    pub fn matched_datum(&self, square: &BigInt, div: &BigInt) -> Option<usize> {
        self.entries.iter().position(|e| e.matches(square, div))
    }
}
