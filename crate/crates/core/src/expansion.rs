//! Growing simplicial balls one boundary vertex at a time.
//!
//! At each critical radius `r` the expansion starts from `B^s_{r−ε}` and
//! cones every vertex at distance exactly `r` onto its link tree. The
//! resulting [`ExpansionCertificate`] records every step and can be rechecked
//! from the complex alone.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::balls::{critical_radii_in, partition, BallError};
use crate::complex::{ordered_pair, SimplexSet, TriComplex, VertexId};
use crate::exactnum::{rat, QField, RadicalSum, Undecided};
use crate::geodesics::{cmp_distances, skeleton_bound, DistanceField, GeoError};

#[derive(Debug, Error)]
pub enum ExpansionError {
    #[error(transparent)]
    Ball(#[from] BallError),
    #[error(transparent)]
    Geo(#[from] GeoError),
    #[error(transparent)]
    Undecided(#[from] Undecided),
    #[error("no critical radius below 1 (got {0})")]
    BelowOne(String),
    #[error("radius {0} is not a vertex distance")]
    NotCritical(String),
    #[error("node {node} is not in the link of {x}")]
    NotInLink { x: VertexId, node: VertexId },
    #[error("cone step at vertex {x} is invalid: {reason}")]
    InvalidStep { x: VertexId, reason: String },
    #[error("stage at radius {radius} ends with a set other than the simplicial ball")]
    StageMismatch { radius: String },
}

/// A subgraph of the link of a vertex: nodes are neighbours, and a link
/// edge `{a, b}` stands for the face spanned with the centre.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkSubgraph {
    pub nodes: BTreeSet<VertexId>,
    pub edges: BTreeSet<(VertexId, VertexId)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeEvidence {
    pub connected: bool,
    pub acyclic: bool,
    /// Diameter in link edges, within the subgraph.
    pub diameter_units: u32,
    /// Diameter at most `n_x / 2` link edges, that is at most π.
    pub diameter_ok: bool,
}

impl TreeEvidence {
    pub fn is_valid(&self) -> bool {
        self.connected && self.acyclic && self.diameter_ok
    }

    fn failure(&self) -> Option<&'static str> {
        if !self.connected {
            Some("not connected")
        } else if !self.acyclic {
            Some("not acyclic")
        } else if !self.diameter_ok {
            Some("diameter exceeds pi")
        } else {
            None
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeStep {
    pub x: VertexId,
    pub gamma: LinkSubgraph,
    pub evidence: TreeEvidence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub radius: RadicalSum,
    pub epsilon: RadicalSum,
    /// Vertices at distance exactly `radius`, in processing order.
    pub boundary: Vec<VertexId>,
    /// Hash of `B^s_{r−ε}`.
    pub start_hash: String,
    pub steps: Vec<ConeStep>,
    /// Hash of the set after the last step.
    pub final_hash: String,
    /// Decimal renderings for readers; ignored by verification.
    pub radius_decimal: String,
    pub epsilon_decimal: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionCertificate {
    pub base_vertex: VertexId,
    pub max_radius: RadicalSum,
    pub complex_hash: String,
    pub stages: Vec<Stage>,
}

impl ExpansionCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialises")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Valid,
    Invalid {
        stage: Option<usize>,
        step: Option<usize>,
        reason: String,
    },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn hash_set(s: &SimplexSet) -> String {
    hex(&Sha256::digest(serde_json::to_vec(s).expect("set serialises")))
}

pub fn hash_complex(cx: &TriComplex) -> String {
    hex(&Sha256::digest(cx.to_json().as_bytes()))
}

fn quarter() -> RadicalSum {
    RadicalSum::from_field(QField::from_rational(rat(1, 4)))
}

/// `0 < ε < r − √(r² − 1/4)`, decided as `ε < r` and `ε(2r − ε) < 1/4`.
pub fn epsilon_bound_holds(eps: &RadicalSum, r: &RadicalSum) -> Result<bool, Undecided> {
    if eps.sign()? != Ordering::Greater || cmp_distances(eps, r)? != Ordering::Less {
        return Ok(false);
    }
    let two_r = r + r;
    let lhs = eps * &(&two_r - eps);
    Ok(cmp_distances(&lhs, &quarter())? == Ordering::Less)
}

/// The ε used at critical radius `r` with previous critical radius
/// `r_prev`: half the transversality bound or half the gap, whichever is
/// smaller.
pub fn epsilon_between(r: &RadicalSum, r_prev: &RadicalSum) -> Result<RadicalSum, ExpansionError> {
    if cmp_distances(r, &RadicalSum::from_int(1))? == Ordering::Less {
        return Err(ExpansionError::BelowOne(r.to_decimal(12)));
    }
    let half = QField::from_rational(rat(1, 2));
    let bound_half = match (r * r).as_field() {
        Some(sq) => (r - &RadicalSum::sqrt_of(&(sq - QField::from_rational(rat(1, 4))))).scale(&half),
        None => {
            // r − √(r² − 1/4) = 1/(4(r + √(r² − 1/4))) > 1/(8r) ≥ 1/(8u)
            let (_, u) = r.enclosure(64);
            RadicalSum::from_field(QField::from_rational(rat(1, 16) / u))
        }
    };
    let gap_half = (r - r_prev).scale(&half);
    Ok(match cmp_distances(&bound_half, &gap_half)? {
        Ordering::Greater => gap_half,
        _ => bound_half,
    })
}

/// A distance field from `v` able to certify radii up to `max`.
pub fn field_to(cx: &TriComplex, v: VertexId, max: &RadicalSum) -> Result<DistanceField, ExpansionError> {
    cx.require_interior(v).map_err(BallError::from)?;
    Ok(DistanceField::new(cx, v, max.to_f64() + 1.0)?)
}

pub fn epsilon_for(cx: &TriComplex, v: VertexId, r: &RadicalSum) -> Result<RadicalSum, ExpansionError> {
    if cmp_distances(r, &RadicalSum::from_int(1))? == Ordering::Less {
        return Err(ExpansionError::BelowOne(r.to_decimal(12)));
    }
    let field = field_to(cx, v, r)?;
    let radii = critical_radii_in(cx, &field, r)?;
    match radii.last() {
        Some(last) if cmp_distances(last, r)? == Ordering::Equal => {}
        _ => return Err(ExpansionError::NotCritical(r.to_decimal(12))),
    }
    let prev = if radii.len() >= 2 {
        radii[radii.len() - 2].clone()
    } else {
        RadicalSum::zero()
    };
    epsilon_between(r, &prev)
}

/// Vertices at distance exactly `r`, by vertex id.
pub fn boundary_vertices(cx: &TriComplex, v: VertexId, r: &RadicalSum) -> Result<Vec<VertexId>, ExpansionError> {
    let field = field_to(cx, v, r)?;
    let part = partition(cx, &field, r)?;
    if part.on.is_empty() {
        return Err(ExpansionError::NotCritical(r.to_decimal(12)));
    }
    Ok(part.on.into_iter().collect())
}

/// `lk(x) ∩ C` with its tree evidence.
pub fn link_tree(cx: &TriComplex, x: VertexId, c: &SimplexSet) -> (LinkSubgraph, TreeEvidence) {
    let mut g = LinkSubgraph::default();
    for &w in cx.neighbors(x) {
        if c.vertices.contains(&w) {
            g.nodes.insert(w);
        }
    }
    for &f in cx.vertex_faces(x) {
        let mut it = cx.face(f).into_iter().filter(|&w| w != x);
        let (a, b) = (it.next().unwrap(), it.next().unwrap());
        if c.edges.contains(&ordered_pair(a, b)) {
            g.edges.insert(ordered_pair(a, b));
        }
    }
    let ev = tree_evidence(cx, x, &g);
    (g, ev)
}

/// Connectivity, acyclicity and diameter of a link subgraph.
pub fn tree_evidence(cx: &TriComplex, x: VertexId, g: &LinkSubgraph) -> TreeEvidence {
    let mut adj: BTreeMap<VertexId, Vec<VertexId>> = g.nodes.iter().map(|&n| (n, Vec::new())).collect();
    let mut dangling = false;
    for &(a, b) in &g.edges {
        match (adj.contains_key(&a), adj.contains_key(&b)) {
            (true, true) => {
                adj.get_mut(&a).unwrap().push(b);
                adj.get_mut(&b).unwrap().push(a);
            }
            _ => dangling = true,
        }
    }
    let bfs = |s: VertexId| -> BTreeMap<VertexId, u32> {
        let mut d = BTreeMap::from([(s, 0)]);
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &w in &adj[&u] {
                if !d.contains_key(&w) {
                    d.insert(w, d[&u] + 1);
                    q.push_back(w);
                }
            }
        }
        d
    };
    let connected = !dangling
        && match g.nodes.iter().next() {
            None => false,
            Some(&s) => bfs(s).len() == g.nodes.len(),
        };
    let acyclic = connected && g.edges.len() + 1 == g.nodes.len();
    let diameter_units = if connected {
        g.nodes.iter().map(|&s| *bfs(s).values().max().unwrap()).max().unwrap_or(0)
    } else {
        u32::MAX
    };
    TreeEvidence {
        connected,
        acyclic,
        diameter_units,
        diameter_ok: connected && 2 * diameter_units <= cx.vertex_n(x),
    }
}

/// `x ∗ Γ`: the centre, an edge per node and a face per link edge.
pub fn cone(cx: &TriComplex, x: VertexId, gamma: &LinkSubgraph) -> Result<SimplexSet, ExpansionError> {
    let mut s = SimplexSet::default();
    s.vertices.insert(x);
    for &n in &gamma.nodes {
        if cx.edge_id(x, n).is_none() {
            return Err(ExpansionError::NotInLink { x, node: n });
        }
        s.vertices.insert(n);
        s.edges.insert(ordered_pair(x, n));
    }
    for &(a, b) in &gamma.edges {
        let f = cx
            .faces_on(x, a)
            .iter()
            .copied()
            .find(|&f| cx.face(f).contains(&b))
            .ok_or(ExpansionError::NotInLink { x, node: b })?;
        s.vertices.extend([a, b]);
        s.edges.extend([ordered_pair(x, a), ordered_pair(x, b), ordered_pair(a, b)]);
        s.faces.insert(f);
    }
    Ok(s)
}

pub fn expand_to(cx: &TriComplex, v: VertexId, max: &RadicalSum) -> Result<ExpansionCertificate, ExpansionError> {
    expand_with_order(cx, v, max, |_, _| {})
}

/// Expansion with a caller-chosen processing order of each boundary set
/// (given sorted by vertex id, stage index first).
pub fn expand_with_order(
    cx: &TriComplex,
    v: VertexId,
    max: &RadicalSum,
    mut order: impl FnMut(usize, &mut Vec<VertexId>),
) -> Result<ExpansionCertificate, ExpansionError> {
    let field = field_to(cx, v, max)?;
    let radii = critical_radii_in(cx, &field, max)?;
    let mut current = SimplexSet::full_subcomplex(cx, &BTreeSet::from([v]));
    let mut stages = Vec::new();
    let mut prev = RadicalSum::zero();
    for (i, r) in radii.iter().enumerate() {
        let eps = epsilon_between(r, &prev)?;
        let below = partition(cx, &field, &(r - &eps))?;
        let start = SimplexSet::full_subcomplex(cx, &below.closed());
        if start != current {
            return Err(ExpansionError::StageMismatch { radius: r.to_decimal(12) });
        }
        let mut boundary: Vec<VertexId> = partition(cx, &field, r)?.on.into_iter().collect();
        order(i, &mut boundary);
        let mut steps = Vec::new();
        for &x in &boundary {
            let (gamma, evidence) = link_tree(cx, x, &current);
            if let Some(reason) = evidence.failure() {
                return Err(ExpansionError::InvalidStep {
                    x,
                    reason: reason.to_string(),
                });
            }
            current = current.union(&cone(cx, x, &gamma)?);
            steps.push(ConeStep { x, gamma, evidence });
        }
        let target = SimplexSet::full_subcomplex(cx, &partition(cx, &field, r)?.closed());
        if current != target {
            return Err(ExpansionError::StageMismatch { radius: r.to_decimal(12) });
        }
        stages.push(Stage {
            radius: r.clone(),
            epsilon: eps.clone(),
            boundary,
            start_hash: hash_set(&start),
            steps,
            final_hash: hash_set(&current),
            radius_decimal: r.to_decimal(12),
            epsilon_decimal: eps.to_decimal(12),
        });
        prev = r.clone();
    }
    Ok(ExpansionCertificate {
        base_vertex: v,
        max_radius: max.clone(),
        complex_hash: hash_complex(cx),
        stages,
    })
}

/// Rechecks a certificate against the complex from scratch.
pub fn verify_certificate(cx: &TriComplex, cert: &ExpansionCertificate) -> Verdict {
    match verify_inner(cx, cert) {
        Ok(v) => v,
        Err(e) => Verdict::Invalid {
            stage: None,
            step: None,
            reason: e.to_string(),
        },
    }
}

fn verify_inner(cx: &TriComplex, cert: &ExpansionCertificate) -> Result<Verdict, ExpansionError> {
    let bad = |stage: Option<usize>, step: Option<usize>, reason: &str| {
        Ok(Verdict::Invalid {
            stage,
            step,
            reason: reason.to_string(),
        })
    };
    if cert.complex_hash != hash_complex(cx) {
        return bad(None, None, "certificate refers to another complex");
    }
    let v = cert.base_vertex;
    if v as usize >= cx.num_vertices() {
        return bad(None, None, "base vertex out of range");
    }
    let field = field_to(cx, v, &cert.max_radius)?;
    let radii = critical_radii_in(cx, &field, &cert.max_radius)?;
    if radii.len() != cert.stages.len() {
        return bad(None, None, "radius schedule differs from the critical radii");
    }
    let mut current = SimplexSet::full_subcomplex(cx, &BTreeSet::from([v]));
    let mut prev = RadicalSum::zero();
    for (i, (stage, r)) in cert.stages.iter().zip(&radii).enumerate() {
        let si = Some(i);
        if cmp_distances(&stage.radius, r)? != Ordering::Equal {
            return bad(si, None, "radius is not the next critical radius");
        }
        let eps = &stage.epsilon;
        if !epsilon_bound_holds(eps, r)? {
            return bad(si, None, "epsilon bound");
        }
        if cmp_distances(eps, &(r - &prev))? != Ordering::Less {
            return bad(si, None, "epsilon reaches the previous critical radius");
        }
        let below = partition(cx, &field, &(r - eps))?;
        let strictly_inside = partition(cx, &field, r)?;
        if below.closed() != strictly_inside.inside {
            return bad(si, None, "B^s_{r-eps} does not hold exactly the vertices inside r");
        }
        let start = SimplexSet::full_subcomplex(cx, &below.closed());
        if hash_set(&start) != stage.start_hash {
            return bad(si, None, "start set hash");
        }
        if start != current {
            return bad(si, None, "start set differs from the previous stage");
        }
        let on: BTreeSet<VertexId> = strictly_inside.on.clone();
        let listed: BTreeSet<VertexId> = stage.boundary.iter().copied().collect();
        if listed != on || listed.len() != stage.boundary.len() {
            return bad(si, None, "boundary set differs from the vertices at distance r");
        }
        if stage.steps.len() != stage.boundary.len() {
            return bad(si, None, "one cone step per boundary vertex");
        }
        for (j, (step, &x)) in stage.steps.iter().zip(&stage.boundary).enumerate() {
            let sj = Some(j);
            if step.x != x {
                return bad(si, sj, "step order differs from the boundary order");
            }
            let ev = tree_evidence(cx, x, &step.gamma);
            if let Some(reason) = ev.failure() {
                return bad(si, sj, reason);
            }
            if ev != step.evidence {
                return bad(si, sj, "recorded evidence differs");
            }
            let (expected, _) = link_tree(cx, x, &current);
            if step.gamma != expected {
                return bad(si, sj, "gamma is not lk(x) intersected with the current set");
            }
            match cone(cx, x, &step.gamma) {
                Ok(c) => current = current.union(&c),
                Err(e) => return bad(si, sj, &e.to_string()),
            }
        }
        if hash_set(&current) != stage.final_hash {
            return bad(si, None, "final set hash");
        }
        let target = SimplexSet::full_subcomplex(cx, &strictly_inside.closed());
        if current != target {
            return bad(si, None, "final set is not the simplicial ball");
        }
        prev = r.clone();
    }
    Ok(Verdict::Valid)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum BoundaryViolation {
    /// Neighbours at distance `r` whose edge is not free in `adj(x)`.
    EdgeNotFree { x: VertexId, y: VertexId, faces: usize },
    /// A face with all three vertices at distance `r`.
    FaceOnSphere { face: u32 },
    /// A geodesic between two vertices of a set leaves it.
    NotConvex { set: String, from: VertexId, to: VertexId },
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryAudit {
    pub center: VertexId,
    pub radius: RadicalSum,
    pub boundary: Vec<VertexId>,
    pub pairs_checked: usize,
    pub violations: Vec<BoundaryViolation>,
}

impl BoundaryAudit {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Whether every vertex-pair geodesic of `s` stays inside `s`.
fn convexity_failures(cx: &TriComplex, s: &SimplexSet) -> Result<(usize, Vec<(VertexId, VertexId)>), ExpansionError> {
    let verts: Vec<VertexId> = s.vertices.iter().copied().collect();
    let mut bad = Vec::new();
    let mut checked = 0;
    for (i, &a) in verts.iter().enumerate() {
        let budget = verts[i + 1..]
            .iter()
            .filter_map(|&b| skeleton_bound(cx, a, b))
            .fold(0.0, f64::max);
        if budget == 0.0 {
            continue;
        }
        let field = DistanceField::new(cx, a, budget + 1e-6)?;
        for &b in &verts[i + 1..] {
            checked += 1;
            let g = field.geodesic(cx, b)?;
            let inside = g.breakpoints.iter().all(|w| s.vertices.contains(w))
                && g.segments.iter().all(|seg| {
                    if seg.corridor.faces.len() == 1 && cx.edge_id(seg.from, seg.to).is_some() {
                        s.edges.contains(&ordered_pair(seg.from, seg.to))
                    } else {
                        seg.corridor.faces.iter().all(|f| s.faces.contains(f))
                    }
                });
            if !inside {
                bad.push((a, b));
            }
        }
    }
    Ok((checked, bad))
}

pub fn audit_boundary_lemmas(cx: &TriComplex, v: VertexId, r: &RadicalSum) -> Result<BoundaryAudit, ExpansionError> {
    let field = field_to(cx, v, r)?;
    let part = partition(cx, &field, r)?;
    if part.on.is_empty() {
        return Err(ExpansionError::NotCritical(r.to_decimal(12)));
    }
    let ball = SimplexSet::full_subcomplex(cx, &part.closed());
    let mut violations = Vec::new();
    let mut pairs_checked = 0;
    for &x in &part.on {
        let adj = SimplexSet::adj(cx, &ball, x);
        for &y in cx.neighbors(x) {
            if part.on.contains(&y) {
                let faces = cx.faces_on(x, y).iter().filter(|f| adj.faces.contains(f)).count();
                if faces != 1 {
                    violations.push(BoundaryViolation::EdgeNotFree { x, y, faces });
                }
            }
        }
        let (n, bad) = convexity_failures(cx, &adj)?;
        pairs_checked += n;
        for (a, b) in bad {
            violations.push(BoundaryViolation::NotConvex {
                set: format!("adj({x})"),
                from: a,
                to: b,
            });
        }
    }
    for (f, vs) in cx.faces().iter().enumerate() {
        if vs.iter().all(|w| part.on.contains(w)) {
            violations.push(BoundaryViolation::FaceOnSphere { face: f as u32 });
        }
    }
    let (n, bad) = convexity_failures(cx, &SimplexSet::star(cx, v))?;
    pairs_checked += n;
    for (a, b) in bad {
        violations.push(BoundaryViolation::NotConvex {
            set: format!("st({v})"),
            from: a,
            to: b,
        });
    }
    Ok(BoundaryAudit {
        center: v,
        radius: r.clone(),
        boundary: part.on.into_iter().collect(),
        pairs_checked,
        violations,
    })
}
