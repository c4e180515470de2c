//! Standard lattice blocks and the block-expression grammar
//! `term (+ term)*` with `term ∈ { U, E8(-1), A2(-1), <k>, base^j }`.
//!
//! Named lattices of geometric origin are configuration data and live with
//! the file formats, not here; this module only knows the building blocks
//! every such table is assembled from.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::lattice::GramLattice;
use crate::{Error, Result};

/// The hyperbolic plane: Gram matrix `[[0, 1], [1, 0]]`.
pub fn hyperbolic_plane() -> GramLattice {
    GramLattice::from_i64(&[&[0, 1], &[1, 0]])
        .expect("U is non-degenerate")
        .with_label("U")
}

/// The negative definite E8 lattice (the E8 Cartan matrix, negated).
pub fn e8_minus() -> GramLattice {
    // Simple roots numbered along the chain 1-3-4-5-6-7-8 with 2 hanging
    // off node 4.
    let adjacent = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)];
    let mut rows = vec![vec![BigInt::zero(); 8]; 8];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = BigInt::from(-2);
    }
    for (a, b) in adjacent {
        rows[a - 1][b - 1] = BigInt::from(1);
        rows[b - 1][a - 1] = BigInt::from(1);
    }
    GramLattice::new(rows, None).expect("E8(-1) is non-degenerate").with_label("E8(-1)")
}

/// The negative definite A2 lattice.
pub fn a2_minus() -> GramLattice {
    GramLattice::from_i64(&[&[-2, 1], &[1, -2]])
        .expect("A2(-1) is non-degenerate")
        .with_label("A2(-1)")
}

/// Rank-one lattice `<k>`.
pub fn rank_one(k: &BigInt) -> Result<GramLattice> {
    if k.is_zero() {
        return Err(Error::Degenerate);
    }
    GramLattice::new(vec![vec![k.clone()]], Some(format!("<{k}>")))
}

/// Parses a block expression such as `U^3 + E8(-1)^2 + <-2>`.
pub fn parse_expr(expr: &str) -> Result<GramLattice> {
    parse_expr_with(expr, &|_| None)
}

/// Parses a block expression, resolving unknown block names through
/// `lookup` (for user catalogs whose entries reference other entries).
pub fn parse_expr_with(
    expr: &str,
    lookup: &dyn Fn(&str) -> Option<GramLattice>,
) -> Result<GramLattice> {
    let terms = split_terms(expr)?;
    if terms.is_empty() {
        return Err(Error::Parse("empty block expression".to_string()));
    }
    let mut acc: Option<GramLattice> = None;
    for term in terms {
        let block = parse_term(&term, lookup)?;
        acc = Some(match acc {
            None => block,
            Some(l) => l.direct_sum(&block),
        });
    }
    let lattice = acc.expect("at least one term");
    Ok(lattice.with_label(normalize(expr)))
}

fn normalize(expr: &str) -> String {
    expr.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Splits at top-level `+`, respecting `<...>` and `(...)` groups.
fn split_terms(expr: &str) -> Result<Vec<String>> {
    let mut terms = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    for ch in expr.chars() {
        match ch {
            '<' | '(' => {
                depth += 1;
                current.push(ch);
            }
            '>' | ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Parse(format!("unbalanced brackets in '{expr}'")));
                }
                current.push(ch);
            }
            '+' if depth == 0 => {
                terms.push(current.trim().to_string());
                current.clear();
            }
            _ => current.push(ch),
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced brackets in '{expr}'")));
    }
    terms.push(current.trim().to_string());
    if terms.iter().any(String::is_empty) {
        return Err(Error::Parse(format!("empty term in '{expr}'")));
    }
    Ok(terms)
}

fn parse_term(term: &str, lookup: &dyn Fn(&str) -> Option<GramLattice>) -> Result<GramLattice> {
    let (base, power) = match term.rsplit_once('^') {
        Some((base, exp)) => {
            let power: u32 = exp
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in '{term}'")))?;
            if power == 0 {
                return Err(Error::Parse(format!("zero exponent in '{term}'")));
            }
            (base.trim(), power)
        }
        None => (term, 1),
    };
    let block = parse_base(base, lookup)?;
    let mut acc = block.clone();
    for _ in 1..power {
        acc = acc.direct_sum(&block);
    }
    Ok(acc)
}

fn parse_base(base: &str, lookup: &dyn Fn(&str) -> Option<GramLattice>) -> Result<GramLattice> {
    match base {
        "U" => Ok(hyperbolic_plane()),
        "E8(-1)" => Ok(e8_minus()),
        "A2(-1)" => Ok(a2_minus()),
        _ => {
            if let Some(inner) = base.strip_prefix('<').and_then(|s| s.strip_suffix('>')) {
                let k: BigInt = inner
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad integer in '{base}'")))?;
                return rank_one(&k);
            }
            lookup(base).ok_or_else(|| Error::Parse(format!("unknown block '{base}'")))
        }
    }
}
