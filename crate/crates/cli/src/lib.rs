//! The `dualcx` command line: generate complexes, validate them, compute
//! balls and expansion certificates, verify certificates and draw balls.

pub mod render;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use dualcx::balls::{audit_in, critical_radii_in, field_for, BallError, BallView, FaceIntersectionType};
use dualcx::complex::{
    check_link_condition, triangle_shape, validate_disk_condition, ComplexError, DiskCondition, DiskVerdict,
    LinkVerdict, StructureReport, TriComplex, VertexId,
};
use dualcx::exactnum::{
    parse_radical, set_max_precision_bits, ParseError, RadicalSum, Undecided, DEFAULT_MAX_PRECISION_BITS,
};
use dualcx::expansion::{expand_to, verify_certificate, ExpansionCertificate, ExpansionError, Verdict};
use dualcx::generators::{gen_regular, gen_seifert, EdgeOrders, GenError};
use dualcx::geodesics::GeoError;

use render::{render_svg, RenderOptions};

pub const PRECISION_ENV: &str = "CAT0_MAX_PRECISION_BITS";

#[derive(Debug, Parser)]
#[command(name = "dualcx", version, about = "Exact balls and expansion certificates for CAT(0) triangle complexes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Target {
    /// Complex file written by `generate`.
    pub file: PathBuf,
    #[arg(long = "base-vertex", default_value_t = 0)]
    pub base_vertex: VertexId,
    /// Exact radius, e.g. `2`, `3/2`, `sqrt(3)`, `2*sqrt(3)`.
    #[arg(long)]
    pub radius: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a truncated complex around a type-1 base vertex.
    Generate {
        #[arg(long, value_name = "N1,N2,N3")]
        dc: String,
        /// Combinatorial radius.
        #[arg(long)]
        radius: u32,
        /// Edge order for a type pair, e.g. `1,2:3`; any order other than 2
        /// selects the regular tree-like construction.
        #[arg(long, value_name = "I,J:K")]
        orders: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the disk condition, global structure and link condition.
    Validate {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the critical radii up to `--radius`.
    Criticals {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report the ball of radius `--radius`.
    Ball {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also draw the ball as SVG.
        #[arg(long)]
        render: Option<PathBuf>,
        #[arg(long, default_value_t = 60.0)]
        scale: f64,
    },
    /// Run the expansion up to `--radius` and write its certificate.
    Expand {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recheck a certificate; exit 1 when it is invalid.
    Verify { file: PathBuf, cert: PathBuf },
    /// Draw the ball of radius `--radius` as SVG.
    Render {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 60.0)]
        scale: f64,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Verification(String),
    #[error("{0}; raise {PRECISION_ENV} to retry")]
    Undecided(Undecided),
}

impl CliError {
    /// 1 verification failure, 2 input error, 3 undecided comparison.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Input(_) => 2,
            CliError::Undecided(_) => 3,
        }
    }
}

impl From<Undecided> for CliError {
    fn from(u: Undecided) -> Self {
        CliError::Undecided(u)
    }
}

impl From<GeoError> for CliError {
    fn from(e: GeoError) -> Self {
        match e {
            GeoError::Undecided(u) => u.into(),
            e => CliError::Input(e.to_string()),
        }
    }
}

impl From<BallError> for CliError {
    fn from(e: BallError) -> Self {
        match e {
            BallError::Undecided(u) => u.into(),
            BallError::Geo(g) => g.into(),
            e => CliError::Input(e.to_string()),
        }
    }
}

impl From<ExpansionError> for CliError {
    fn from(e: ExpansionError) -> Self {
        match e {
            ExpansionError::Undecided(u) => u.into(),
            ExpansionError::Ball(b) => b.into(),
            ExpansionError::Geo(g) => g.into(),
            e @ ExpansionError::InvalidStep { .. } => CliError::Verification(e.to_string()),
            e => CliError::Input(e.to_string()),
        }
    }
}

macro_rules! input_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Input(e.to_string())
            }
        }
    )*};
}

input_error!(ComplexError, GenError, ParseError, std::io::Error, serde_json::Error);

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("report serialises") + "\n"
}

fn load(path: &Path) -> Result<TriComplex, CliError> {
    TriComplex::load(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn parse_dc(s: &str) -> Result<DiskCondition, CliError> {
    let parts: Vec<u32> = s
        .split(',')
        .map(|p| p.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Input(format!("--dc expects N1,N2,N3, got {s:?}")))?;
    match parts.as_slice() {
        [a, b, c] => Ok(DiskCondition::new(*a, *b, *c)),
        _ => Err(CliError::Input(format!("--dc expects three entries, got {s:?}"))),
    }
}

pub fn parse_orders(specs: &[String]) -> Result<EdgeOrders, CliError> {
    let mut orders = EdgeOrders::seifert();
    for s in specs {
        let bad = || CliError::Input(format!("--orders expects I,J:K with types 1..3, got {s:?}"));
        let (pair, k) = s.split_once(':').ok_or_else(bad)?;
        let (i, j) = pair.split_once(',').ok_or_else(bad)?;
        let (i, j, k): (u8, u8, u32) = (
            i.trim().parse().map_err(|_| bad())?,
            j.trim().parse().map_err(|_| bad())?,
            k.trim().parse().map_err(|_| bad())?,
        );
        if i == j || !(1..=3).contains(&i) || !(1..=3).contains(&j) {
            return Err(bad());
        }
        orders.set(i, j, k);
    }
    Ok(orders)
}

/// Reads the precision cap from the environment.
pub fn configure_precision() -> Result<u32, CliError> {
    let bits = match std::env::var(PRECISION_ENV) {
        Ok(s) => s
            .trim()
            .parse::<u32>()
            .ok()
            .filter(|&b| b >= 64)
            .ok_or_else(|| CliError::Input(format!("{PRECISION_ENV} must be an integer of at least 64, got {s:?}")))?,
        Err(_) => DEFAULT_MAX_PRECISION_BITS,
    };
    set_max_precision_bits(bits);
    Ok(bits)
}

#[derive(Serialize)]
struct RadiusEntry {
    exact: String,
    decimal: String,
}

impl From<&RadicalSum> for RadiusEntry {
    fn from(r: &RadicalSum) -> Self {
        RadiusEntry {
            exact: r.to_string(),
            decimal: r.to_decimal(12),
        }
    }
}

#[derive(Serialize)]
struct ValidateReport {
    disk_condition: DiskCondition,
    verdict: DiskVerdict,
    verdict_code: u8,
    side_lengths_sq: BTreeMap<String, String>,
    structure: StructureReport,
    margin: u32,
    interior_vertices: usize,
    tight_links: usize,
    min_girth_angle_units: Option<u32>,
    link_failures: Vec<LinkVerdict>,
    passes: bool,
}

fn cmd_validate(file: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let cx = load(file)?;
    let dc = cx.disk_condition();
    let verdict = validate_disk_condition(dc.n.map(i64::from))?;
    let shape = triangle_shape(&dc)?;
    let mut sides = BTreeMap::new();
    for (s, t) in [(1u8, 2u8), (1, 3), (2, 3)] {
        sides.insert(format!("{s}{t}"), shape.edge_sq(s, t).to_string());
    }
    let structure = cx.check_structure();
    let mut interior = 0;
    let mut tight = 0;
    let mut min_units: Option<u32> = None;
    let mut failures = Vec::new();
    for v in 0..cx.num_vertices() as VertexId {
        if !cx.is_interior(v) {
            continue;
        }
        interior += 1;
        let lv = check_link_condition(&cx, v)?;
        if let Some(u) = lv.girth_angle_units {
            min_units = Some(min_units.map_or(u, |m| m.min(u)));
            if u == dualcx::complex::FULL_TURN_UNITS {
                tight += 1;
            }
        }
        if !lv.passes {
            failures.push(lv);
        }
    }
    let passes = failures.is_empty() && structure.connected && structure.simply_connected;
    let report = ValidateReport {
        disk_condition: dc,
        verdict,
        verdict_code: verdict.code(),
        side_lengths_sq: sides,
        structure,
        margin: cx.margin(),
        interior_vertices: interior,
        tight_links: tight,
        min_girth_angle_units: min_units,
        link_failures: failures,
        passes,
    };
    emit(out, &json(&report))?;
    if passes {
        Ok(())
    } else {
        Err(CliError::Verification("link or structure check failed".into()))
    }
}

fn target_radius(t: &Target) -> Result<RadicalSum, CliError> {
    let r = parse_radical(&t.radius)?;
    if r.sign()?.is_lt() {
        return Err(CliError::Input(format!("radius {} is negative", t.radius)));
    }
    Ok(r)
}

fn check_vertex(cx: &TriComplex, v: VertexId) -> Result<(), CliError> {
    if v as usize >= cx.num_vertices() {
        return Err(CliError::Input(format!("no vertex {v}")));
    }
    Ok(())
}

#[derive(Serialize)]
struct CriticalsReport {
    center: VertexId,
    max_radius: RadiusEntry,
    radii: Vec<RadiusEntry>,
}

fn cmd_criticals(t: &Target, out: Option<&Path>) -> Result<(), CliError> {
    let cx = load(&t.file)?;
    check_vertex(&cx, t.base_vertex)?;
    let r = target_radius(t)?;
    let field = field_for(&cx, t.base_vertex, &r)?;
    let radii = critical_radii_in(&cx, &field, &r)?;
    let report = CriticalsReport {
        center: t.base_vertex,
        max_radius: (&r).into(),
        radii: radii.iter().map(RadiusEntry::from).collect(),
    };
    emit(out, &json(&report))
}

#[derive(Serialize)]
struct BallReport {
    center: VertexId,
    radius: RadiusEntry,
    regular: bool,
    inside: Vec<VertexId>,
    on_sphere: Vec<VertexId>,
    simplicial_ball: BTreeMap<&'static str, usize>,
    face_type_counts: BTreeMap<String, usize>,
    /// Faces met by the sphere, with their type.
    faces_met: BTreeMap<u32, FaceIntersectionType>,
    sphere_audit_clean: Option<bool>,
}

fn ball_view(t: &Target) -> Result<(TriComplex, dualcx::geodesics::DistanceField, BallView), CliError> {
    let cx = load(&t.file)?;
    check_vertex(&cx, t.base_vertex)?;
    let r = target_radius(t)?;
    let field = field_for(&cx, t.base_vertex, &(&r + &RadicalSum::from_int(2)))?;
    let view = BallView::new(&cx, &field, &r)?;
    Ok((cx, field, view))
}

fn cmd_ball(t: &Target, out: Option<&Path>, svg: Option<&Path>, scale: f64) -> Result<(), CliError> {
    let (cx, field, view) = ball_view(t)?;
    let simplicial = view.simplicial(&cx);
    let mut counts = BTreeMap::new();
    for ty in view.face_types.values() {
        *counts.entry(format!("{ty:?}")).or_insert(0) += 1;
    }
    let faces_met = view
        .face_types
        .iter()
        .filter(|(_, ty)| ty.arcs() > 0)
        .map(|(&f, &ty)| (f, ty))
        .collect();
    let audit = if view.is_regular() {
        Some(audit_in(&cx, &field, &view.radius)?.is_clean())
    } else {
        None
    };
    let report = BallReport {
        center: view.center,
        radius: (&view.radius).into(),
        regular: view.is_regular(),
        inside: view.partition.inside.iter().copied().collect(),
        on_sphere: view.partition.on.iter().copied().collect(),
        simplicial_ball: BTreeMap::from([
            ("vertices", simplicial.vertices.len()),
            ("edges", simplicial.edges.len()),
            ("faces", simplicial.faces.len()),
        ]),
        face_type_counts: counts,
        faces_met,
        sphere_audit_clean: audit,
    };
    if let Some(p) = svg {
        let opts = RenderOptions {
            scale,
            ..RenderOptions::default()
        };
        emit(Some(p), &render_svg(&cx, &field, &view, &opts))?;
    }
    emit(out, &json(&report))
}

fn cmd_render(t: &Target, out: Option<&Path>, scale: f64) -> Result<(), CliError> {
    let (cx, field, view) = ball_view(t)?;
    let opts = RenderOptions {
        scale,
        ..RenderOptions::default()
    };
    emit(out, &render_svg(&cx, &field, &view, &opts))
}

fn cmd_expand(t: &Target, out: Option<&Path>) -> Result<(), CliError> {
    let cx = load(&t.file)?;
    check_vertex(&cx, t.base_vertex)?;
    let r = target_radius(t)?;
    let cert = expand_to(&cx, t.base_vertex, &r)?;
    emit(out, &(cert.to_json() + "\n"))?;
    if out.is_some() {
        let steps: usize = cert.stages.iter().map(|s| s.steps.len()).sum();
        println!("{} stages, {} cone steps", cert.stages.len(), steps);
    }
    Ok(())
}

fn cmd_verify(file: &Path, cert_path: &Path) -> Result<(), CliError> {
    let cx = load(file)?;
    let text = fs::read_to_string(cert_path).map_err(|e| CliError::Input(format!("{}: {e}", cert_path.display())))?;
    let cert = ExpansionCertificate::from_json(&text)
        .map_err(|e| CliError::Input(format!("{}: malformed certificate: {e}", cert_path.display())))?;
    let verdict = verify_certificate(&cx, &cert);
    print!("{}", json(&verdict));
    match verdict {
        Verdict::Valid => Ok(()),
        Verdict::Invalid { stage, step, reason } => Err(CliError::Verification(format!(
            "certificate invalid at stage {stage:?}, step {step:?}: {reason}"
        ))),
    }
}

fn cmd_generate(dc: &str, radius: u32, orders: &[String], out: Option<&Path>) -> Result<(), CliError> {
    let dc = parse_dc(dc)?;
    let orders = parse_orders(orders)?;
    let cx = if orders == EdgeOrders::seifert() {
        gen_seifert(dc, radius)?
    } else {
        gen_regular(dc, orders, radius)?
    };
    emit(out, &(cx.to_json() + "\n"))
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    configure_precision()?;
    match &cli.command {
        Command::Generate { dc, radius, orders, out } => cmd_generate(dc, *radius, orders, out.as_deref()),
        Command::Validate { file, out } => cmd_validate(file, out.as_deref()),
        Command::Criticals { target, out } => cmd_criticals(target, out.as_deref()),
        Command::Ball {
            target,
            out,
            render,
            scale,
        } => cmd_ball(target, out.as_deref(), render.as_deref(), *scale),
        Command::Expand { target, out } => cmd_expand(target, out.as_deref()),
        Command::Verify { file, cert } => cmd_verify(file, cert),
        Command::Render { target, out, scale } => cmd_render(target, out.as_deref(), *scale),
    }
}
