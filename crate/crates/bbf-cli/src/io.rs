//! Input documents: lattice specs, wall tables and the lattice catalog,
//! plus the digest records that make reports reproducible offline.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use bbf_core::catalog::parse_expr_with;
use bbf_core::lattice::{GramLattice, LatticeVector};
use bbf_core::walls::{DivisibilityConstraint, WallDatum, WallSpec};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dto::{vec_in, Big};

/// Built-in lattice catalog (editable copy shipped under `data/`).
pub const BUILTIN_CATALOG: &str = include_str!("../data/catalog.json");
/// Built-in wall tables (editable copy shipped under `data/`).
pub const BUILTIN_WALLS: &str = include_str!("../data/walls.json");

/// Provenance record of one input.
#[derive(Clone, Serialize, Deserialize, Debug)]
pub struct InputRecord {
    pub kind: String,
    pub name: String,
    pub sha256: String,
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn record(records: &mut Vec<InputRecord>, kind: &str, name: &str, bytes: &[u8]) {
    records.push(InputRecord {
        kind: kind.to_owned(),
        name: name.to_owned(),
        sha256: digest(bytes),
    });
}

#[derive(Clone, Serialize, Deserialize, Debug)]
pub struct CatalogEntry {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expr: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<Big>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

#[derive(Clone, Serialize, Deserialize, Debug)]
pub struct CatalogDoc {
    pub schema: String,
    pub entries: Vec<CatalogEntry>,
}

#[derive(Clone, Serialize, Deserialize, Debug)]
pub struct LatticeDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expr: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<Big>>>,
}

#[derive(Clone, Serialize, Deserialize, Debug)]
pub struct WallEntryDoc {
    pub square: Big,
    pub div: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

#[derive(Clone, Serialize, Deserialize, Debug)]
pub struct WallTableDoc {
    pub label: String,
    pub floor: Big,
    pub entries: Vec<WallEntryDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub status: Option<String>,
}

#[derive(Clone, Serialize, Deserialize, Debug)]
pub struct WallsDoc {
    pub schema: String,
    pub tables: Vec<WallTableDoc>,
}

/// Resolves lattice and wall specifications against the catalog.
pub struct Loader {
    catalog: CatalogDoc,
    catalog_origin: InputRecord,
    walls: WallsDoc,
    walls_origin: InputRecord,
}

impl Loader {
    pub fn new(catalog_path: Option<&Path>) -> Result<Self> {
        let (catalog, catalog_origin) = match catalog_path {
            Some(p) => {
                let bytes = fs::read(p)
                    .with_context(|| format!("cannot read catalog {}", p.display()))?;
                let doc: CatalogDoc =
                    serde_json::from_slice(&bytes).context("catalog does not match its schema")?;
                (
                    doc,
                    InputRecord {
                        kind: "file".into(),
                        name: p.display().to_string(),
                        sha256: digest(&bytes),
                    },
                )
            }
            None => (
                serde_json::from_str(BUILTIN_CATALOG).expect("built-in catalog is valid"),
                InputRecord {
                    kind: "builtin".into(),
                    name: "catalog".into(),
                    sha256: digest(BUILTIN_CATALOG.as_bytes()),
                },
            ),
        };
        let walls: WallsDoc =
            serde_json::from_str(BUILTIN_WALLS).expect("built-in wall tables are valid");
        let walls_origin = InputRecord {
            kind: "builtin".into(),
            name: "walls".into(),
            sha256: digest(BUILTIN_WALLS.as_bytes()),
        };
        Ok(Loader { catalog, catalog_origin, walls, walls_origin })
    }

    fn lookup(&self, name: &str) -> Option<GramLattice> {
        let entry = self.catalog.entries.iter().find(|e| e.name == name)?;
        self.build_entry(entry).ok()
    }

    fn build_entry(&self, entry: &CatalogEntry) -> Result<GramLattice> {
        if let Some(gram) = &entry.gram {
            let rows = gram.iter().map(|r| vec_in(r)).collect();
            return Ok(GramLattice::new(rows, Some(entry.name.clone()))?);
        }
        if let Some(expr) = &entry.expr {
            let resolve = |n: &str| if n == entry.name { None } else { self.lookup(n) };
            return Ok(parse_expr_with(expr, &resolve)?.with_label(entry.name.clone()));
        }
        bail!("catalog entry '{}' has neither gram nor expr", entry.name)
    }

    /// Resolves a lattice spec: a JSON file path, a catalog name, or an
    /// inline block expression.
    pub fn lattice(&self, spec: &str, records: &mut Vec<InputRecord>) -> Result<GramLattice> {
        let path = Path::new(spec);
        if path.is_file() {
            let bytes =
                fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
            let doc: LatticeDoc = serde_json::from_slice(&bytes)
                .with_context(|| format!("{} does not match the lattice schema", path.display()))?;
            record(records, "file", spec, &bytes);
            if let Some(gram) = &doc.gram {
                let rows = gram.iter().map(|r| vec_in(r)).collect();
                let mut l = GramLattice::new(rows, doc.name.clone())?;
                if let (None, Some(e)) = (&doc.name, &doc.expr) {
                    l = l.with_label(e.clone());
                }
                return Ok(l);
            }
            if let Some(expr) = &doc.expr {
                let resolve = |n: &str| self.lookup(n);
                let l = parse_expr_with(expr, &resolve)?;
                return Ok(match doc.name {
                    Some(name) => l.with_label(name),
                    None => l,
                });
            }
            bail!("{} carries neither a gram matrix nor an expression", path.display());
        }
        if let Some(l) = self.lookup(spec) {
            records.push(self.catalog_origin.clone());
            return Ok(l);
        }
        let resolve = |n: &str| self.lookup(n);
        let l = parse_expr_with(spec, &resolve)
            .map_err(|e| anyhow!("'{spec}' is not a file, catalog name or block expression: {e}"))?;
        record(records, "inline", spec, spec.as_bytes());
        Ok(l)
    }

    /// Resolves a wall-table spec: a JSON file path or the label of a
    /// built-in table.
    pub fn walls(&self, spec: &str, records: &mut Vec<InputRecord>) -> Result<WallSpec> {
        let path = Path::new(spec);
        if path.is_file() {
            let bytes =
                fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
            let doc: WallTableDoc = serde_json::from_slice(&bytes)
                .with_context(|| format!("{} does not match the wall schema", path.display()))?;
            record(records, "file", spec, &bytes);
            return table_to_spec(&doc);
        }
        if let Some(table) = self.walls.tables.iter().find(|t| t.label == spec) {
            records.push(self.walls_origin.clone());
            return table_to_spec(table);
        }
        bail!("'{spec}' is neither a wall-table file nor a built-in table label")
    }

    pub fn builtin_wall_labels(&self) -> Vec<String> {
        self.walls.tables.iter().map(|t| t.label.clone()).collect()
    }

    pub fn catalog_names(&self) -> Vec<String> {
        self.catalog.entries.iter().map(|e| e.name.clone()).collect()
    }
}

fn table_to_spec(doc: &WallTableDoc) -> Result<WallSpec> {
    let mut entries = Vec::new();
    for e in &doc.entries {
        let div = match e.div.trim() {
            "any" | "*" => DivisibilityConstraint::Any,
            text => DivisibilityConstraint::Exactly(
                text.parse::<BigInt>()
                    .map_err(|_| anyhow!("bad divisibility '{}' in wall table", e.div))?,
            ),
        };
        entries.push(WallDatum { square: e.square.0.clone(), divisibility: div });
    }
    Ok(WallSpec::new(doc.label.clone(), entries, doc.floor.0.clone())?)
}

/// Parses a comma-separated coordinate vector like `1,-1,0`.
pub fn parse_vector(text: &str) -> Result<LatticeVector> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<BigInt>()
                .map_err(|_| anyhow!("bad coordinate '{}' in vector '{text}'", part.trim()))
        })
        .collect()
}

/// Parses a semicolon-separated list of vectors like `1,0;0,1`.
pub fn parse_vectors(text: &str) -> Result<Vec<LatticeVector>> {
    text.split(';').map(parse_vector).collect()
}

/// Parses `a b c` or `a,b,c` into binary-form coefficients.
pub fn parse_form(text: &str) -> Result<(BigInt, BigInt, BigInt)> {
    let parts: Vec<&str> =
        text.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
    if parts.len() != 3 {
        bail!("a form needs exactly three coefficients, got '{text}'");
    }
    let parse =
        |s: &str| s.parse::<BigInt>().map_err(|_| anyhow!("bad form coefficient '{s}'"));
    Ok((parse(parts[0])?, parse(parts[1])?, parse(parts[2])?))
}
