//! Command implementations. Each command parses its documents, calls the
//! library, and emits a deterministic report: the JSON form carries the
//! toolkit version, input digests and all certificates needed to
//! re-verify the result offline.

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use bbf_core::avoidance::{
    construct_infinite_bir_lattice, validate_certificate, AvoidanceConfig, ConstructionOutcome,
};
use bbf_core::cones::{
    chamber_decomposition_rank2, in_movable_interior, in_positive_cone, rank2_cone_report,
    ChamberDecomposition, RayDesc, Verdict,
};
use bbf_core::enumerate::EnumerationLimits;
use bbf_core::forms::{represents, BinaryForm, FormsConfig, Represents};
use bbf_core::lattice::{GramLattice, LatticeVector, Sublattice};
use bbf_core::transvections::HyperbolicTriple;
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use crate::dto::{
    absence_out, certificate_in, certificate_out, cone_report_out, movable_out, vec_out, Big,
    CertificateDoc, ConeReportDto, LatticeOut, MovableDto, RayDto, CERTIFICATE_SCHEMA,
};
use crate::io::{parse_form, parse_vector, parse_vectors, InputRecord, Loader};
use crate::svg::chambers_svg;

pub const REPORT_SCHEMA: &str = "bbf/report/1";

#[derive(Parser, Debug)]
#[command(
    name = "bbf",
    version,
    about = "Exact-arithmetic toolkit for even hyperbolic lattices: invariants, representability, \
             certified constructions and cone chamber reports"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Cap on enumeration radii (short-vector and wall searches).
    #[arg(long, global = true)]
    pub radius: Option<u64>,
    /// Half-width of brute-force cross-check boxes.
    #[arg(long = "box", global = true)]
    pub brute_box: Option<u64>,
    /// Cap on the construction index n.
    #[arg(long = "n-cap", global = true)]
    pub n_cap: Option<u64>,
    /// Wall table: a JSON file or the label of a built-in table.
    #[arg(long, global = true)]
    pub walls: Option<String>,
    /// Catalog file overriding the built-in lattice catalog.
    #[arg(long, global = true)]
    pub catalog: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Text,
    Json,
    Svg,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rank, signature, parity and discriminant invariants of a lattice.
    LatticeInfo {
        /// Lattice: JSON file, catalog name, or block expression.
        #[arg(long)]
        lattice: String,
    },
    /// Saturated orthogonal complement of the span of given vectors.
    Complement {
        #[arg(long)]
        lattice: String,
        /// Semicolon-separated coordinate vectors, e.g. `1,1;0,2`.
        #[arg(long, allow_hyphen_values = true)]
        vectors: String,
    },
    /// Decide whether a binary form represents a target integer.
    FormsRepresents {
        /// Coefficients `a b c` of `a x^2 + 2b xy + c y^2`.
        #[arg(long, conflicts_with = "lattice", allow_hyphen_values = true)]
        form: Option<String>,
        /// Rank-2 lattice supplying the form.
        #[arg(long)]
        lattice: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        target: String,
    },
    /// Build a certified rank-2 sublattice with no vectors of square -i
    /// for 0 <= i <= N.
    SchifoBuild {
        /// Ambient lattice; must start with three hyperbolic blocks.
        #[arg(long)]
        lattice: String,
        /// Primitive vector of positive square.
        #[arg(long, allow_hyphen_values = true)]
        ell: String,
        /// Companion vector, not proportional to ell.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        /// Square-avoidance bound N.
        #[arg(long = "N")]
        n_bound: String,
        /// Index override n (default: 1).
        #[arg(long = "n")]
        index: Option<String>,
        /// Scale override m (default: smallest valid choice).
        #[arg(long = "m")]
        scale: Option<String>,
    },
    /// Re-validate a certificate emitted by schifo-build.
    SchifoVerify {
        /// A certificate document or a schifo-build report containing one.
        file: PathBuf,
    },
    /// Locate a class relative to the positive cone and movable chamber.
    ConeLocate {
        #[arg(long)]
        lattice: String,
        #[arg(long, allow_hyphen_values = true)]
        ample: String,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
    },
    /// Rank-2 finiteness verdict for the birational automorphism group.
    BirRank2 {
        #[arg(long)]
        lattice: String,
        /// Reference class of positive square (default: searched).
        #[arg(long, allow_hyphen_values = true)]
        ample: Option<String>,
    },
    /// Wall-and-chamber decomposition of the positive cone.
    Chambers {
        #[arg(long)]
        lattice: String,
        #[arg(long, allow_hyphen_values = true)]
        ample: String,
        /// Explicit wall classes, e.g. `1,1;1,-1`.
        #[arg(long, allow_hyphen_values = true)]
        classes: String,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::LatticeInfo { .. } => "lattice-info",
            Command::Complement { .. } => "complement",
            Command::FormsRepresents { .. } => "forms-represents",
            Command::SchifoBuild { .. } => "schifo-build",
            Command::SchifoVerify { .. } => "schifo-verify",
            Command::ConeLocate { .. } => "cone-locate",
            Command::BirRank2 { .. } => "bir-rank2",
            Command::Chambers { .. } => "chambers",
        }
    }
}

/// What a command run produces: process exit code plus rendered output.
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    schema: &'static str,
    version: &'static str,
    command: &'static str,
    inputs: Vec<InputRecord>,
    result: T,
}

fn render<T: Serialize>(
    format: Format,
    command: &'static str,
    inputs: Vec<InputRecord>,
    result: T,
    text: String,
    exit_code: i32,
) -> Result<Outcome> {
    let stdout = match format {
        Format::Json | Format::Svg => {
            let envelope = Envelope {
                schema: REPORT_SCHEMA,
                version: env!("CARGO_PKG_VERSION"),
                command,
                inputs,
                result,
            };
            let mut s = serde_json::to_string_pretty(&envelope)?;
            s.push('\n');
            s
        }
        Format::Text => text,
    };
    Ok(Outcome { exit_code, stdout })
}

struct Caps {
    limits: EnumerationLimits,
    forms: FormsConfig,
    avoidance: AvoidanceConfig,
    n_cap: u64,
}

impl Caps {
    fn from_cli(cli: &Cli) -> Caps {
        let mut limits = EnumerationLimits::default();
        if let Some(r) = cli.radius {
            limits.max_radius = BigInt::from(r);
        }
        let forms = FormsConfig::default();
        let mut avoidance = AvoidanceConfig::default();
        if let Some(b) = cli.brute_box {
            avoidance.brute_box = b;
        }
        Caps { limits, forms, avoidance, n_cap: cli.n_cap.unwrap_or(1 << 20) }
    }
}

pub fn run(cli: Cli) -> Result<Outcome> {
    let loader = Loader::new(cli.catalog.as_deref())?;
    let caps = Caps::from_cli(&cli);
    let mut inputs: Vec<InputRecord> = Vec::new();
    let command_name = cli.command.name();

    match &cli.command {
        Command::LatticeInfo { lattice } => {
            let l = loader.lattice(lattice, &mut inputs)?;
            lattice_info(&cli, command_name, inputs, &l)
        }
        Command::Complement { lattice, vectors } => {
            let l = loader.lattice(lattice, &mut inputs)?;
            let vs = parse_vectors(vectors)?;
            let sub = Sublattice::new(l, vs)?;
            complement(&cli, command_name, inputs, &sub)
        }
        Command::FormsRepresents { form, lattice, target } => {
            let f = match (form, lattice) {
                (Some(text), _) => {
                    let (a, b, c) = parse_form(text)?;
                    inputs.push(InputRecord {
                        kind: "inline".into(),
                        name: text.clone(),
                        sha256: crate::io::digest(text.as_bytes()),
                    });
                    BinaryForm::new(a, b, c)?
                }
                (None, Some(spec)) => {
                    let l = loader.lattice(spec, &mut inputs)?;
                    BinaryForm::from_lattice(&l)?
                }
                (None, None) => bail!("forms-represents needs --form or --lattice"),
            };
            let n: BigInt = target.parse().map_err(|_| anyhow!("bad target '{target}'"))?;
            forms_represents(&cli, command_name, inputs, &f, &n, &caps)
        }
        Command::SchifoBuild { lattice, ell, a, n_bound, index, scale } => {
            let l = loader.lattice(lattice, &mut inputs)?;
            let triple = HyperbolicTriple::new(l)?;
            let ell = parse_vector(ell)?;
            let a = parse_vector(a)?;
            let n_bound: BigInt =
                n_bound.parse().map_err(|_| anyhow!("bad bound '{n_bound}'"))?;
            let index: Option<BigInt> = match index {
                Some(t) => Some(t.parse().map_err(|_| anyhow!("bad index '{t}'"))?),
                None => None,
            };
            if let Some(n) = &index {
                if n > &BigInt::from(caps.n_cap) {
                    bail!("index {n} exceeds --n-cap {}", caps.n_cap);
                }
            }
            let scale: Option<BigInt> = match scale {
                Some(t) => Some(t.parse().map_err(|_| anyhow!("bad scale '{t}'"))?),
                None => None,
            };
            schifo_build(&cli, command_name, inputs, &triple, &ell, &a, &n_bound, scale, index, &caps)
        }
        Command::SchifoVerify { file } => {
            let bytes = std::fs::read(file)
                .with_context(|| format!("cannot read {}", file.display()))?;
            inputs.push(InputRecord {
                kind: "file".into(),
                name: file.display().to_string(),
                sha256: crate::io::digest(&bytes),
            });
            schifo_verify(&cli, command_name, inputs, &bytes)
        }
        Command::ConeLocate { lattice, ample, class } => {
            let l = loader.lattice(lattice, &mut inputs)?;
            let walls_spec = cli
                .walls
                .as_ref()
                .ok_or_else(|| anyhow!("cone-locate needs --walls (file or built-in label)"))?;
            let walls = loader.walls(walls_spec, &mut inputs)?;
            let ample = parse_vector(ample)?;
            let class = parse_vector(class)?;
            cone_locate(&cli, command_name, inputs, &l, &ample, &class, &walls, &caps)
        }
        Command::BirRank2 { lattice, ample } => {
            let l = loader.lattice(lattice, &mut inputs)?;
            let walls = match &cli.walls {
                Some(spec) => Some(loader.walls(spec, &mut inputs)?),
                None => None,
            };
            let ample = match ample {
                Some(text) => parse_vector(text)?,
                None => find_positive_class(&l)?,
            };
            bir_rank2(&cli, command_name, inputs, &l, &ample, walls.as_ref(), &caps)
        }
        Command::Chambers { lattice, ample, classes } => {
            let l = loader.lattice(lattice, &mut inputs)?;
            let ample = parse_vector(ample)?;
            let classes = parse_vectors(classes)?;
            chambers(&cli, command_name, inputs, &l, &ample, &classes)
        }
    }
}

/// Smallest positive-square class in lexicographic box order; used when
/// bir-rank2 is not given a reference class.
fn find_positive_class(l: &GramLattice) -> Result<LatticeVector> {
    if l.rank() != 2 {
        bail!("rank-2 lattice expected, found rank {}", l.rank());
    }
    for x in 0i64..=32 {
        for y in -32i64..=32 {
            if x == 0 && y <= 0 {
                continue;
            }
            let v: LatticeVector = vec![BigInt::from(x), BigInt::from(y)];
            if l.square(&v)?.is_positive() {
                return Ok(v);
            }
        }
    }
    bail!("no small class of positive square found; pass --ample explicitly")
}

// ---------------------------------------------------------------------------
// Per-command results
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct LatticeInfoResult {
    lattice: LatticeOut,
    signature: [usize; 2],
    even: bool,
    unimodular: bool,
    det: Big,
    discriminant_factors: Vec<Big>,
}

fn lattice_info(
    cli: &Cli,
    name: &'static str,
    inputs: Vec<InputRecord>,
    l: &GramLattice,
) -> Result<Outcome> {
    let d = l.discriminant_group();
    let result = LatticeInfoResult {
        lattice: LatticeOut::of(l),
        signature: [l.signature().0, l.signature().1],
        even: l.is_even(),
        unimodular: l.is_unimodular(),
        det: Big(l.det().clone()),
        discriminant_factors: d.cyclic_factors().iter().cloned().map(Big).collect(),
    };
    let mut text = String::new();
    writeln!(text, "lattice: {}", l.label().unwrap_or("(unnamed)"))?;
    writeln!(text, "rank: {}", l.rank())?;
    writeln!(text, "signature: ({}, {})", l.signature().0, l.signature().1)?;
    writeln!(text, "even: {}", l.is_even())?;
    writeln!(text, "determinant: {}", l.det())?;
    if d.is_trivial() {
        writeln!(text, "discriminant group: trivial (unimodular)")?;
    } else {
        let parts: Vec<String> =
            d.cyclic_factors().iter().map(|f| format!("Z/{f}")).collect();
        writeln!(text, "discriminant group: {}", parts.join(" x "))?;
    }
    render(cli.format, name, inputs, result, text, 0)
}

#[derive(Serialize)]
struct ComplementResult {
    ambient: LatticeOut,
    span: Vec<Vec<Big>>,
    complement_basis: Vec<Vec<Big>>,
    complement_gram: Vec<Vec<Big>>,
    saturated: bool,
}

fn complement(
    cli: &Cli,
    name: &'static str,
    inputs: Vec<InputRecord>,
    sub: &Sublattice,
) -> Result<Outcome> {
    let comp = sub.orthogonal_complement();
    let gram = comp.induced_gram();
    let result = ComplementResult {
        ambient: LatticeOut::of(sub.ambient()),
        span: sub.basis().iter().map(|v| vec_out(v)).collect(),
        complement_basis: comp.basis().iter().map(|v| vec_out(v)).collect(),
        complement_gram: gram.rows().iter().map(|r| vec_out(r)).collect(),
        saturated: comp.is_saturated(),
    };
    let mut text = String::new();
    writeln!(text, "orthogonal complement rank: {}", comp.rank())?;
    for v in comp.basis() {
        writeln!(text, "  basis vector: {}", join(v))?;
    }
    render(cli.format, name, inputs, result, text, 0)
}

#[derive(Serialize)]
struct RepresentsResult {
    form: [Big; 3],
    target: Big,
    represented: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<[Big; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<crate::dto::AbsenceDto>,
}

fn forms_represents(
    cli: &Cli,
    name: &'static str,
    inputs: Vec<InputRecord>,
    f: &BinaryForm,
    n: &BigInt,
    caps: &Caps,
) -> Result<Outcome> {
    let outcome = represents(f, n, &caps.forms)?;
    let (a, b, c) = f.coefficients();
    let mut text = String::new();
    let result = match &outcome {
        Represents::Yes { witness } => {
            writeln!(
                text,
                "{} x^2 + {} xy + {} y^2 = {} at (x, y) = ({}, {})",
                a,
                b.clone() * BigInt::from(2),
                c,
                n,
                witness.0,
                witness.1
            )?;
            RepresentsResult {
                form: [Big(a.clone()), Big(b.clone()), Big(c.clone())],
                target: Big(n.clone()),
                represented: true,
                witness: Some([Big(witness.0.clone()), Big(witness.1.clone())]),
                certificate: None,
            }
        }
        Represents::No { certificate } => {
            writeln!(
                text,
                "{} x^2 + {} xy + {} y^2 = {} has no nonzero integral solution",
                a,
                b.clone() * BigInt::from(2),
                c,
                n
            )?;
            writeln!(text, "certificate: {certificate:?}")?;
            RepresentsResult {
                form: [Big(a.clone()), Big(b.clone()), Big(c.clone())],
                target: Big(n.clone()),
                represented: false,
                witness: None,
                certificate: Some(absence_out(certificate)),
            }
        }
    };
    render(cli.format, name, inputs, result, text, 0)
}

#[derive(Serialize)]
struct SchifoBuildResult {
    outcome: String,
    sublattice_basis: Vec<Vec<Big>>,
    sublattice_gram: Vec<Vec<Big>>,
    diagonal: [Big; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate_document: Option<CertificateDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<ConeReportDto>,
}

#[allow(clippy::too_many_arguments)]
fn schifo_build(
    cli: &Cli,
    name: &'static str,
    inputs: Vec<InputRecord>,
    triple: &HyperbolicTriple,
    ell: &[BigInt],
    a: &[BigInt],
    n_bound: &BigInt,
    scale: Option<BigInt>,
    index: Option<BigInt>,
    caps: &Caps,
) -> Result<Outcome> {
    let outcome = construct_infinite_bir_lattice(
        triple,
        ell,
        a,
        n_bound,
        scale.as_ref(),
        index.as_ref(),
        &caps.avoidance,
    )?;
    let mut text = String::new();
    let result = match outcome {
        ConstructionOutcome::Hyperbolic { build, report } => {
            let gram = build.sublattice.induced_gram();
            let cert_doc = CertificateDoc {
                schema: CERTIFICATE_SCHEMA.to_owned(),
                ambient: LatticeOut::of(triple.lattice()),
                ell: vec_out(ell),
                a: vec_out(a),
                basis: build.sublattice.basis().iter().map(|v| vec_out(v)).collect(),
                certificate: certificate_out(&build.certificate),
            };
            writeln!(text, "outcome: hyperbolic")?;
            writeln!(
                text,
                "diagonal form: diag({}, {})",
                build.certificate.diagonal.0, build.certificate.diagonal.1
            )?;
            writeln!(
                text,
                "scale m = {}, index n = {}, h = ({})",
                build.certificate.scale,
                build.certificate.index,
                join(&build.certificate.h)
            )?;
            writeln!(text, "certificate reasons cover i = 0..={n_bound}")?;
            writeln!(text, "verdict: {}", crate::dto::verdict_str(report.verdict))?;
            SchifoBuildResult {
                outcome: "hyperbolic".to_owned(),
                sublattice_basis: build.sublattice.basis().iter().map(|v| vec_out(v)).collect(),
                sublattice_gram: gram.rows().iter().map(|r| vec_out(r)).collect(),
                diagonal: [
                    Big(build.certificate.diagonal.0.clone()),
                    Big(build.certificate.diagonal.1.clone()),
                ],
                note: None,
                certificate_document: Some(cert_doc),
                report: Some(cone_report_out(&report)),
            }
        }
        ConstructionOutcome::Definite { sublattice, diagonal, note } => {
            let gram = sublattice.induced_gram();
            writeln!(text, "outcome: definite")?;
            writeln!(text, "diagonal form: diag({}, {})", diagonal.0, diagonal.1)?;
            writeln!(text, "{note}")?;
            SchifoBuildResult {
                outcome: "definite".to_owned(),
                sublattice_basis: sublattice.basis().iter().map(|v| vec_out(v)).collect(),
                sublattice_gram: gram.rows().iter().map(|r| vec_out(r)).collect(),
                diagonal: [Big(diagonal.0), Big(diagonal.1)],
                note: Some(note),
                certificate_document: None,
                report: None,
            }
        }
    };
    render(cli.format, name, inputs, result, text, 0)
}

#[derive(Serialize)]
struct SchifoVerifyResult {
    valid: bool,
    n_bound: Big,
    diagonal: [Big; 2],
}

fn schifo_verify(
    cli: &Cli,
    name: &'static str,
    inputs: Vec<InputRecord>,
    bytes: &[u8],
) -> Result<Outcome> {
    // Accept either a bare certificate document or a schifo-build report
    // that embeds one.
    let doc: CertificateDoc = match serde_json::from_slice::<CertificateDoc>(bytes) {
        Ok(doc) => doc,
        Err(_) => {
            let value: serde_json::Value =
                serde_json::from_slice(bytes).context("not a JSON document")?;
            let embedded = value
                .pointer("/result/certificate_document")
                .ok_or_else(|| anyhow!("no certificate document found in the input"))?;
            serde_json::from_value(embedded.clone())
                .context("embedded certificate does not match its schema")?
        }
    };
    if doc.schema != CERTIFICATE_SCHEMA {
        bail!("unsupported certificate schema '{}'", doc.schema);
    }
    let ambient = GramLattice::new(
        doc.ambient.gram.iter().map(|r| crate::dto::vec_in(r)).collect(),
        doc.ambient.label.clone(),
    )?;
    let triple = HyperbolicTriple::new(ambient.clone())?;
    let ell = crate::dto::vec_in(&doc.ell);
    let a = crate::dto::vec_in(&doc.a);
    let basis: Vec<LatticeVector> = doc.basis.iter().map(|v| crate::dto::vec_in(v)).collect();
    let sub = Sublattice::new(ambient, basis)?;
    let cert = certificate_in(&doc.certificate);
    validate_certificate(&triple, &ell, &a, &sub, &cert)?;
    let result = SchifoVerifyResult {
        valid: true,
        n_bound: Big(cert.n_bound.clone()),
        diagonal: [Big(cert.diagonal.0.clone()), Big(cert.diagonal.1.clone())],
    };
    let text = format!(
        "certificate valid: diag({}, {}) avoids all squares -i for 0 <= i <= {}\n",
        cert.diagonal.0, cert.diagonal.1, cert.n_bound
    );
    render(cli.format, name, inputs, result, text, 0)
}

#[derive(Serialize)]
struct ConeLocateResult {
    in_positive_cone: bool,
    movable: MovableDto,
}

#[allow(clippy::too_many_arguments)]
fn cone_locate(
    cli: &Cli,
    name: &'static str,
    inputs: Vec<InputRecord>,
    l: &GramLattice,
    ample: &[BigInt],
    class: &[BigInt],
    walls: &bbf_core::walls::WallSpec,
    caps: &Caps,
) -> Result<Outcome> {
    let in_cone = in_positive_cone(l, class, ample)?;
    let movable = in_movable_interior(l, class, ample, walls, &caps.limits)?;
    let result =
        ConeLocateResult { in_positive_cone: in_cone, movable: movable_out(&movable) };
    let mut text = String::new();
    writeln!(text, "in positive cone: {in_cone}")?;
    writeln!(text, "movable interior: {movable:?}")?;
    render(cli.format, name, inputs, result, text, 0)
}

fn bir_rank2(
    cli: &Cli,
    name: &'static str,
    inputs: Vec<InputRecord>,
    l: &GramLattice,
    ample: &[BigInt],
    walls: Option<&bbf_core::walls::WallSpec>,
    caps: &Caps,
) -> Result<Outcome> {
    let report = rank2_cone_report(l, ample, walls, &caps.forms)?;
    let exit = match report.verdict {
        Verdict::Undetermined => 2,
        _ => 0,
    };
    let dto = cone_report_out(&report);
    let mut text = String::new();
    writeln!(text, "verdict: {}", crate::dto::verdict_str(report.verdict))?;
    if let Some(w) = &report.isotropic_witness {
        writeln!(text, "isotropic class: ({})", join(w))?;
    }
    for c in &report.wall_classes {
        writeln!(text, "wall class: ({})", join(c))?;
    }
    for note in &report.notes {
        writeln!(text, "note: {note}")?;
    }
    render(cli.format, name, inputs, dto, text, exit)
}

#[derive(Serialize)]
struct ChambersResult {
    wall_rays: Vec<Vec<Big>>,
    chambers: Vec<ChamberDto>,
}

#[derive(Serialize)]
struct ChamberDto {
    lower: RayDto,
    upper: RayDto,
    contains_reference: bool,
}

fn chambers(
    cli: &Cli,
    name: &'static str,
    inputs: Vec<InputRecord>,
    l: &GramLattice,
    ample: &[BigInt],
    classes: &[LatticeVector],
) -> Result<Outcome> {
    let d: ChamberDecomposition = chamber_decomposition_rank2(l, ample, classes)?;
    if cli.format == Format::Svg {
        return Ok(Outcome { exit_code: 0, stdout: chambers_svg(&d, &ample.to_vec()) });
    }
    let ray_dto = |r: &RayDesc| crate::dto::ray_out(r, l);
    let result = ChambersResult {
        wall_rays: d.wall_rays.iter().map(|r| vec_out(r)).collect(),
        chambers: d
            .chambers
            .iter()
            .map(|c| ChamberDto {
                lower: ray_dto(&c.lower),
                upper: ray_dto(&c.upper),
                contains_reference: c.contains_reference,
            })
            .collect(),
    };
    let mut text = String::new();
    writeln!(text, "{} chambers across {} walls", d.chambers.len(), d.wall_rays.len())?;
    for (i, c) in d.chambers.iter().enumerate() {
        let marker = if c.contains_reference { " <- reference" } else { "" };
        writeln!(text, "  sector {}: {:?} .. {:?}{marker}", i, c.lower, c.upper)?;
    }
    render(cli.format, name, inputs, result, text, 0)
}

fn join(v: &[BigInt]) -> String {
    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
}
