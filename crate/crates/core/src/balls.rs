//! Metric balls around a vertex, their level spheres and simplicial parts.
//!
//! Everything here is read off a [`DistanceField`]: vertex distances decide
//! membership, and interior edge minima decide whether a sphere crosses an
//! edge whose endpoints both lie outside.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{ComplexError, EdgeId, FaceId, SimplexSet, TriComplex, VertexId};
use crate::exactnum::{RadicalSum, Undecided};
use crate::geodesics::{cmp_distances, DistanceField, GeoError};

#[derive(Debug, Error)]
pub enum BallError {
    #[error(transparent)]
    Geo(#[from] GeoError),
    #[error(transparent)]
    Undecided(#[from] Undecided),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("radius {radius} is critical: vertices {vertices:?} lie on the sphere")]
    Critical { radius: String, vertices: Vec<VertexId> },
    #[error("sphere of radius {radius} is tangent to edge {edge}")]
    Tangent { radius: String, edge: EdgeId },
    #[error("radius must be nonnegative")]
    NegativeRadius,
    #[error("face {face} has crossing counts {crossings:?} with {inside} vertices inside")]
    Inconsistent {
        face: FaceId,
        inside: usize,
        crossings: [u8; 3],
    },
}

/// How a closed face meets a ball whose sphere misses its vertices.
///
/// * `Type1`: one arc cutting off the corner at the single outside vertex.
/// * `Type2`: one arc cutting off the corner at the single inside vertex.
/// * `Type3`: one arc with both ends on one edge; no vertex inside.
/// * `Type4`: two arcs, one inside vertex and its opposite edge met in an
///   interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FaceIntersectionType {
    Empty,
    Full,
    Type1,
    Type2,
    Type3,
    Type4,
}

impl FaceIntersectionType {
    pub fn arcs(self) -> usize {
        match self {
            Self::Empty | Self::Full => 0,
            Self::Type4 => 2,
            _ => 1,
        }
    }
}

/// Vertices strictly inside, on, and outside a sphere.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub inside: BTreeSet<VertexId>,
    pub on: BTreeSet<VertexId>,
    pub outside: BTreeSet<VertexId>,
}

impl Partition {
    pub fn is_regular(&self) -> bool {
        self.on.is_empty()
    }

    /// Vertices at distance at most the radius.
    pub fn closed(&self) -> BTreeSet<VertexId> {
        self.inside.union(&self.on).copied().collect()
    }
}

/// A field whose budget covers radius `r` with room for edge minima.
pub fn field_for(cx: &TriComplex, v: VertexId, r: &RadicalSum) -> Result<DistanceField, BallError> {
    cx.require_interior(v)?;
    Ok(DistanceField::new(cx, v, r.to_f64() + 1.0)?)
}

fn check_radius(r: &RadicalSum) -> Result<(), BallError> {
    if r.sign()? == Ordering::Less {
        return Err(BallError::NegativeRadius);
    }
    Ok(())
}

/// Splits the vertices by exact comparison of their distance with `r`.
pub fn partition(cx: &TriComplex, field: &DistanceField, r: &RadicalSum) -> Result<Partition, BallError> {
    check_radius(r)?;
    field.ensure_safe(cx, r)?;
    let mut out = Partition::default();
    for v in 0..cx.num_vertices() as VertexId {
        let side = match field.distance(v) {
            Some(d) => cmp_distances(d, r)?,
            None => Ordering::Greater,
        };
        match side {
            Ordering::Less => out.inside.insert(v),
            Ordering::Equal => out.on.insert(v),
            Ordering::Greater => out.outside.insert(v),
        };
    }
    Ok(out)
}

pub fn vertices_within(cx: &TriComplex, v: VertexId, r: &RadicalSum) -> Result<Partition, BallError> {
    let field = field_for(cx, v, r)?;
    partition(cx, &field, r)
}

/// Distinct vertex distances up to `max`, increasing; consecutive values
/// are certified distinct.
pub fn critical_radii_in(cx: &TriComplex, field: &DistanceField, max: &RadicalSum) -> Result<Vec<RadicalSum>, BallError> {
    field.ensure_safe(cx, max)?;
    let mut out: Vec<RadicalSum> = Vec::new();
    for &v in field.settled() {
        if v == field.source {
            continue;
        }
        let d = field.distance(v).unwrap();
        if cmp_distances(d, max)? == Ordering::Greater {
            continue;
        }
        // settle order is increasing up to floating ties, so only the last
        // few entries can coincide
        let pos = out.iter().rposition(|x| cmp_distances(x, d).map(|o| o != Ordering::Greater).unwrap_or(true));
        match pos {
            Some(i) if cmp_distances(&out[i], d)? == Ordering::Equal => {}
            Some(i) => out.insert(i + 1, d.clone()),
            None => out.insert(0, d.clone()),
        }
    }
    for w in out.windows(2) {
        if cmp_distances(&w[0], &w[1])? != Ordering::Less {
            return Err(BallError::Undecided(Undecided {
                bits: crate::exactnum::max_precision_bits(),
                approx: w[0].to_f64(),
            }));
        }
    }
    Ok(out)
}

pub fn critical_radii(cx: &TriComplex, v: VertexId, max: &RadicalSum) -> Result<Vec<RadicalSum>, BallError> {
    let field = field_for(cx, v, max)?;
    critical_radii_in(cx, &field, max)
}

/// The full subcomplex on the vertices at distance at most `r`.
pub fn simplicial_ball(cx: &TriComplex, v: VertexId, r: &RadicalSum) -> Result<SimplexSet, BallError> {
    let part = vertices_within(cx, v, r)?;
    Ok(SimplexSet::full_subcomplex(cx, &part.closed()))
}

pub fn simplicial_ball_in(cx: &TriComplex, field: &DistanceField, r: &RadicalSum) -> Result<SimplexSet, BallError> {
    let part = partition(cx, field, r)?;
    Ok(SimplexSet::full_subcomplex(cx, &part.closed()))
}

/// Crossing data of one face at a regular radius.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceProfile {
    pub face: FaceId,
    pub inside: usize,
    /// Crossing counts of the edges opposite the type-1, 2, 3 vertices.
    pub crossings: [u8; 3],
    /// For each arc, the edges holding its two ends.
    pub arc_ends: Vec<(EdgeId, EdgeId)>,
}

/// A ball at a fixed radius with the sphere's crossing pattern.
#[derive(Clone, Debug, Serialize)]
pub struct BallView {
    pub center: VertexId,
    pub radius: RadicalSum,
    pub vertex_distances: BTreeMap<VertexId, RadicalSum>,
    pub partition: Partition,
    /// Per-edge crossing counts; only for regular radii.
    pub edge_crossings: BTreeMap<EdgeId, u8>,
    pub face_types: BTreeMap<FaceId, FaceIntersectionType>,
}

impl BallView {
    pub fn new(cx: &TriComplex, field: &DistanceField, r: &RadicalSum) -> Result<Self, BallError> {
        let partition = partition(cx, field, r)?;
        let vertex_distances = field
            .settled()
            .iter()
            .map(|&v| (v, field.distance(v).unwrap().clone()))
            .collect();
        let mut view = BallView {
            center: field.source,
            radius: r.clone(),
            vertex_distances,
            partition,
            edge_crossings: BTreeMap::new(),
            face_types: BTreeMap::new(),
        };
        if view.partition.is_regular() {
            for e in 0..cx.num_edges() as EdgeId {
                let c = edge_crossings(cx, field, &view.partition, r, e)?;
                view.edge_crossings.insert(e, c);
            }
            for f in 0..cx.num_faces() as FaceId {
                let p = view.profile(cx, f);
                view.face_types.insert(f, type_of(&p)?);
            }
        }
        Ok(view)
    }

    pub fn is_regular(&self) -> bool {
        self.partition.is_regular()
    }

    pub fn simplicial(&self, cx: &TriComplex) -> SimplexSet {
        SimplexSet::full_subcomplex(cx, &self.partition.closed())
    }

    /// Crossing counts and arcs of face `f`; requires a regular radius.
    pub fn profile(&self, cx: &TriComplex, f: FaceId) -> FaceProfile {
        let vs = cx.face(f);
        let es = cx.face_edges(f);
        let inside_at: Vec<bool> = vs.iter().map(|v| self.partition.inside.contains(v)).collect();
        let inside = inside_at.iter().filter(|&&b| b).count();
        let crossings = es.map(|e| self.edge_crossings[&e]);
        // edge opposite vertex i is es[i]
        let arc_ends = match inside {
            2 => {
                let out = inside_at.iter().position(|&b| !b).unwrap();
                let [x, y] = others(out);
                vec![(es[x], es[y])]
            }
            1 => {
                let p = inside_at.iter().position(|&b| b).unwrap();
                let [x, y] = others(p);
                if crossings[p] == 2 {
                    vec![(es[x], es[p]), (es[y], es[p])]
                } else {
                    vec![(es[x], es[y])]
                }
            }
            0 => (0..3).filter(|&i| crossings[i] == 2).map(|i| (es[i], es[i])).collect(),
            _ => Vec::new(),
        };
        FaceProfile {
            face: f,
            inside,
            crossings,
            arc_ends,
        }
    }
}

fn others(i: usize) -> [usize; 2] {
    match i {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    }
}

fn edge_crossings(cx: &TriComplex, field: &DistanceField, part: &Partition, r: &RadicalSum, e: EdgeId) -> Result<u8, BallError> {
    let [a, b] = cx.edge(e);
    let (ia, ib) = (part.inside.contains(&a), part.inside.contains(&b));
    Ok(match (ia, ib) {
        (true, true) => 0,
        (true, false) | (false, true) => 1,
        (false, false) => match field.edge_minimum(e, cx)? {
            None => 0,
            Some(m) => match cmp_distances(&m.value, r)? {
                Ordering::Less => 2,
                Ordering::Greater => 0,
                Ordering::Equal => {
                    return Err(BallError::Tangent {
                        radius: r.to_decimal(12),
                        edge: e,
                    })
                }
            },
        },
    })
}

/// The face type implied by a crossing profile.
pub fn type_of(p: &FaceProfile) -> Result<FaceIntersectionType, BallError> {
    use FaceIntersectionType::*;
    let inconsistent = || BallError::Inconsistent {
        face: p.face,
        inside: p.inside,
        crossings: p.crossings,
    };
    let mut sorted = p.crossings;
    sorted.sort_unstable();
    Ok(match (p.inside, sorted) {
        (3, [0, 0, 0]) => Full,
        (2, [0, 1, 1]) => Type1,
        (1, [0, 1, 1]) => Type2,
        (1, [1, 1, 2]) => Type4,
        (0, [0, 0, 0]) => Empty,
        (0, [0, 0, 2]) => Type3,
        _ => return Err(inconsistent()),
    })
}

pub fn classify_face(cx: &TriComplex, v: VertexId, r: &RadicalSum, f: FaceId) -> Result<FaceIntersectionType, BallError> {
    let field = field_for(cx, v, r)?;
    let view = BallView::new(cx, &field, r)?;
    if !view.is_regular() {
        return Err(BallError::Critical {
            radius: r.to_decimal(12),
            vertices: view.partition.on.iter().copied().collect(),
        });
    }
    Ok(view.face_types[&f])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Violation {
    /// More than two arcs in a face.
    TooManyArcs { face: FaceId, arcs: usize },
    /// Two arcs with ends on the same pair of edges.
    ParallelArcs { face: FaceId, edges: (EdgeId, EdgeId) },
    /// Crossing counts no convex section of a face can have.
    Inconsistent { face: FaceId, inside: usize, crossings: [u8; 3] },
    /// An edge whose interior meets the ball in more than one closest point.
    ClosestPoint { edge: EdgeId, positions: Vec<f64> },
    /// An edge met only in its interior without exactly one two-arc face
    /// around it, the rest one-arc faces.
    EdgeFaces { edge: EdgeId, types: Vec<FaceIntersectionType> },
    /// A vertex inside the ball reached by two geodesics.
    Geodesic { vertex: VertexId, predecessors: Vec<VertexId> },
}

#[derive(Clone, Debug, Serialize)]
pub struct SphereAudit {
    pub center: VertexId,
    pub radius: RadicalSum,
    pub faces_met: usize,
    pub violations: Vec<Violation>,
}

impl SphereAudit {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn audit_sphere_lemmas(cx: &TriComplex, v: VertexId, r: &RadicalSum) -> Result<SphereAudit, BallError> {
    let field = field_for(cx, v, r)?;
    audit_in(cx, &field, r)
}

/// Checks the sphere lemmas at a regular radius against a prepared field.
pub fn audit_in(cx: &TriComplex, field: &DistanceField, r: &RadicalSum) -> Result<SphereAudit, BallError> {
    let partition = partition(cx, field, r)?;
    if !partition.is_regular() {
        return Err(BallError::Critical {
            radius: r.to_decimal(12),
            vertices: partition.on.iter().copied().collect(),
        });
    }
    let mut crossings = BTreeMap::new();
    for e in 0..cx.num_edges() as EdgeId {
        crossings.insert(e, edge_crossings(cx, field, &partition, r, e)?);
    }
    let view = BallView {
        center: field.source,
        radius: r.clone(),
        vertex_distances: BTreeMap::new(),
        partition,
        edge_crossings: crossings,
        face_types: BTreeMap::new(),
    };
    let mut violations = Vec::new();
    let mut faces_met = 0;
    let mut types = BTreeMap::new();
    for f in 0..cx.num_faces() as FaceId {
        let p = view.profile(cx, f);
        if !p.arc_ends.is_empty() {
            faces_met += 1;
        }
        if p.arc_ends.len() > 2 {
            violations.push(Violation::TooManyArcs {
                face: f,
                arcs: p.arc_ends.len(),
            });
        }
        let mut ends = p.arc_ends.clone();
        ends.sort_unstable();
        for w in ends.windows(2) {
            if w[0] == w[1] {
                violations.push(Violation::ParallelArcs { face: f, edges: w[0] });
            }
        }
        match type_of(&p) {
            Ok(t) => {
                types.insert(f, t);
            }
            Err(_) => violations.push(Violation::Inconsistent {
                face: f,
                inside: p.inside,
                crossings: p.crossings,
            }),
        }
    }
    for (&e, &c) in &view.edge_crossings {
        if c != 2 {
            continue;
        }
        if let Some(m) = field.edge_minimum(e, cx)? {
            if !m.rivals.is_empty() {
                let mut positions = vec![m.t];
                positions.extend(&m.rivals);
                violations.push(Violation::ClosestPoint { edge: e, positions });
            }
        }
        let around: Vec<FaceIntersectionType> = cx.edge_faces(e).iter().filter_map(|f| types.get(f).copied()).collect();
        let fours = around.iter().filter(|&&t| t == FaceIntersectionType::Type4).count();
        let threes = around.iter().filter(|&&t| t == FaceIntersectionType::Type3).count();
        if fours != 1 || fours + threes != around.len() {
            violations.push(Violation::EdgeFaces { edge: e, types: around });
        }
    }
    for t in field.ties() {
        if view.partition.inside.contains(&t.vertex) {
            violations.push(Violation::Geodesic {
                vertex: t.vertex,
                predecessors: t.predecessors.clone(),
            });
        }
    }
    Ok(SphereAudit {
        center: field.source,
        radius: r.clone(),
        faces_met,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::DiskCondition;
    use crate::exactnum::{rat, QField};
    use crate::generators::{gen_seifert, gen_seifert_patch};

    fn r(n: i64, d: i64) -> RadicalSum {
        RadicalSum::from_field(QField::from_rational(rat(n, d)))
    }

    #[test]
    fn small_balls_in_the_hexagonal_tiling() {
        let cx = gen_seifert(DiskCondition::new(6, 6, 6), 3).unwrap();
        let p = vertices_within(&cx, 0, &r(1, 2)).unwrap();
        assert_eq!(p.inside, BTreeSet::from([0]));
        let p = vertices_within(&cx, 0, &r(1, 1)).unwrap();
        assert_eq!(p.on.len(), 6);
        let p = vertices_within(&cx, 0, &r(3, 2)).unwrap();
        assert_eq!((p.inside.len(), p.on.len()), (7, 0));
        let s = simplicial_ball(&cx, 0, &r(1, 1)).unwrap();
        assert_eq!((s.vertices.len(), s.edges.len(), s.faces.len()), (7, 12, 6));
        assert_eq!(simplicial_ball(&cx, 0, &r(1, 3)).unwrap().vertices.len(), 1);
    }

    #[test]
    fn square_star_ball() {
        let cx = gen_seifert(DiskCondition::new(4, 8, 8), 3).unwrap();
        let s = simplicial_ball(&cx, 0, &r(1, 1)).unwrap();
        assert_eq!((s.vertices.len(), s.edges.len(), s.faces.len()), (5, 8, 4));
    }

    #[test]
    fn critical_radii_of_the_hexagonal_tiling() {
        let cx = gen_seifert(DiskCondition::new(6, 6, 6), 4).unwrap();
        let got = critical_radii(&cx, 0, &r(2, 1)).unwrap();
        let expect = [QField::from_int(1), QField::from_int(3), QField::from_int(4)];
        assert_eq!(got.len(), 3);
        for (g, e) in got.iter().zip(&expect) {
            assert_eq!(*g, RadicalSum::sqrt_of(e));
        }
        assert!(critical_radii(&cx, 0, &r(9, 10)).unwrap().is_empty());
    }

    #[test]
    fn critical_radius_is_refused() {
        let cx = gen_seifert(DiskCondition::new(6, 6, 6), 3).unwrap();
        let f = cx.vertex_faces(0)[0];
        assert!(matches!(classify_face(&cx, 0, &r(1, 1), f), Err(BallError::Critical { .. })));
        assert_eq!(classify_face(&cx, 0, &r(3, 2), f).unwrap(), FaceIntersectionType::Full);
    }

    #[test]
    fn margin_zero_is_refused() {
        let cx = gen_seifert(DiskCondition::new(6, 6, 6), 0).unwrap();
        assert!(matches!(audit_sphere_lemmas(&cx, 0, &r(1, 2)), Err(BallError::Complex(_))));
    }

    /// Planar oracle: sample each face of a flat patch and count sign
    /// changes of `d − r` along its edges.
    fn sampled_crossings(a: (f64, f64), b: (f64, f64), c: (f64, f64), r: f64) -> u8 {
        let n = 4000;
        let mut last = None;
        let mut count = 0;
        for i in 0..=n {
            let t = i as f64 / n as f64;
            let (x, y) = (a.0 + t * (b.0 - a.0) - c.0, a.1 + t * (b.1 - a.1) - c.1);
            let inside = (x * x + y * y).sqrt() < r;
            if let Some(l) = last {
                if l != inside {
                    count += 1;
                }
            }
            last = Some(inside);
        }
        count
    }

    #[test]
    fn crossings_match_the_planar_oracle() {
        for (dc, radii) in [
            ((6, 6, 6), vec![(6, 5), (9, 10), (17, 10), (27, 10)]),
            ((4, 8, 8), vec![(3, 4), (13, 10), (19, 10)]),
            ((4, 6, 12), vec![(11, 10), (17, 10), (23, 10), (5, 2)]),
        ] {
            let patch = gen_seifert_patch(DiskCondition::new(dc.0, dc.1, dc.2), 4).unwrap();
            let cx = &patch.complex;
            let field = DistanceField::new(cx, 0, 4.0).unwrap();
            for (n, d) in radii {
                let rad = r(n, d);
                let view = BallView::new(cx, &field, &rad).unwrap();
                let rf = n as f64 / d as f64;
                for e in 0..cx.num_edges() as EdgeId {
                    let [a, b] = cx.edge(e);
                    let c = sampled_crossings(
                        patch.coords[a as usize].to_f64(),
                        patch.coords[b as usize].to_f64(),
                        patch.coords[0].to_f64(),
                        rf,
                    );
                    assert_eq!(view.edge_crossings[&e], c, "{dc:?} r={rf} edge {e}");
                }
                let audit = audit_in(cx, &field, &rad).unwrap();
                assert!(audit.is_clean(), "{dc:?} r={rf}: {:?}", audit.violations);
            }
        }
    }

    #[test]
    fn type_three_just_past_an_edge_minimum() {
        // the outer edges of the hexagon star are nearest at their midpoints
        let cx = gen_seifert(DiskCondition::new(6, 6, 6), 3).unwrap();
        let field = DistanceField::new(&cx, 0, 3.0).unwrap();
        let view = BallView::new(&cx, &field, &r(9, 10)).unwrap();
        let count = |t| view.face_types.values().filter(|&&x| x == t).count();
        assert_eq!(count(FaceIntersectionType::Type4), 6);
        assert_eq!(count(FaceIntersectionType::Type3), 6);
        assert_eq!(count(FaceIntersectionType::Full), 0);
    }
}
