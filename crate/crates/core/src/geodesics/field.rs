//! Distances from one vertex: a Dijkstra search over vertices in which each
//! settled vertex emits straight segments in the directions a geodesic may
//! continue in.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap};
use std::f64::consts::PI;

use num_rational::BigRational;
use serde::Serialize;

use crate::complex::{EdgeId, FaceId, TriComplex, VertexId};
use crate::exactnum::{CertInterval, QField, RadicalSum, Undecided};
use crate::planar::Point;

use super::angle::{corner_angle, link_angle, link_distances, Direction};
use super::window::{corner, propagate, propagate_cones, Cone, Propagation};
use super::{develop, place_face, seg_len, Corridor, GeoError};

/// Directions within this many radians of the straight continuation are kept.
const CONE_SLACK: f64 = 1e-7;
/// Floating values closer than this are compared exactly.
const CLOSE: f64 = 1e-9;

/// One straight piece of a geodesic.
#[derive(Clone, Debug, Serialize)]
pub struct Segment {
    pub from: VertexId,
    pub to: VertexId,
    pub len_sq: QField,
    pub corridor: Corridor,
    pub departure: Direction,
    pub arrival: Direction,
}

/// Two different routes certified to have the same length.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TieDiagnostic {
    pub vertex: VertexId,
    pub predecessors: Vec<VertexId>,
    pub length: f64,
}

/// Smallest distance attained in the interior of an edge.
#[derive(Clone, Debug, Serialize)]
pub struct EdgeMinimum {
    pub edge: EdgeId,
    pub value: RadicalSum,
    /// Position of the minimiser, from the lower-numbered endpoint.
    pub t: f64,
    pub via: VertexId,
    /// Positions of further minimisers of exactly the same value.
    pub rivals: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeodesicResult {
    pub source: VertexId,
    pub target: VertexId,
    pub length: RadicalSum,
    /// Exact squared length when the geodesic is a single segment.
    pub length_sq: Option<QField>,
    /// Vertices visited, endpoints included.
    pub breakpoints: Vec<VertexId>,
    pub segments: Vec<Segment>,
    /// No point of the truncation frontier is within the length.
    pub within_safe_radius: bool,
    pub ties: Vec<TieDiagnostic>,
}

impl GeodesicResult {
    pub fn interval(&self) -> CertInterval {
        CertInterval::new(self.length.clone())
    }

    pub fn approx(&self) -> f64 {
        self.length.to_f64()
    }

    /// Link angles on both sides of every interior breakpoint.
    pub fn breakpoint_angles(&self, cx: &TriComplex) -> Vec<(VertexId, super::Angle)> {
        self.segments
            .windows(2)
            .map(|w| (w[0].to, link_angle(cx, w[0].to, &w[0].arrival, &w[1].departure)))
            .collect()
    }
}

#[derive(Clone, Debug)]
struct Arrival {
    from: VertexId,
    prop: usize,
    hit: usize,
}

#[derive(Clone, Debug)]
struct Tentative {
    value: RadicalSum,
    approx: f64,
    arrivals: Vec<Arrival>,
}

#[derive(PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Exact comparison of distances, decided in floating point when far apart.
/// Image of `p` under the affine map sending triangle `from` onto `to`.
fn affine_map(from: &[(f64, f64); 3], to: &[(f64, f64); 3], p: (f64, f64)) -> (f64, f64) {
    let (ux, uy) = (from[1].0 - from[0].0, from[1].1 - from[0].1);
    let (vx, vy) = (from[2].0 - from[0].0, from[2].1 - from[0].1);
    let det = ux * vy - uy * vx;
    let (px, py) = (p.0 - from[0].0, p.1 - from[0].1);
    let a = (px * vy - py * vx) / det;
    let b = (ux * py - uy * px) / det;
    (
        to[0].0 + a * (to[1].0 - to[0].0) + b * (to[2].0 - to[0].0),
        to[0].1 + a * (to[1].1 - to[0].1) + b * (to[2].1 - to[0].1),
    )
}

pub fn cmp_distances(a: &RadicalSum, b: &RadicalSum) -> Result<Ordering, Undecided> {
    let (fa, fb) = (a.to_f64(), b.to_f64());
    if (fa - fb).abs() > CLOSE * (1.0 + fa.abs()) {
        return Ok(fa.total_cmp(&fb));
    }
    a.cmp_exact(b)
}

fn cmp_values(a: &RadicalSum, fa: f64, b: &RadicalSum, fb: f64) -> Result<Ordering, GeoError> {
    if (fa - fb).abs() > CLOSE * (1.0 + fa.abs()) {
        return Ok(fa.total_cmp(&fb));
    }
    Ok(a.cmp_exact(b)?)
}

/// Exact distances from `source` to every vertex within `budget`.
#[derive(Clone, Debug)]
pub struct DistanceField {
    pub source: VertexId,
    pub budget: f64,
    settled: Vec<Option<Tentative>>,
    order: Vec<VertexId>,
    props: Vec<Propagation>,
    edge_min: BTreeMap<EdgeId, EdgeMinimum>,
    edge_min_approx: BTreeMap<EdgeId, f64>,
    ties: Vec<TieDiagnostic>,
}

impl DistanceField {
    pub fn new(cx: &TriComplex, source: VertexId, budget: f64) -> Result<Self, GeoError> {
        if source as usize >= cx.num_vertices() {
            return Err(GeoError::NoSuchVertex(source));
        }
        let n = cx.num_vertices();
        let mut field = DistanceField {
            source,
            budget,
            settled: vec![None; n],
            order: Vec::new(),
            props: Vec::new(),
            edge_min: BTreeMap::new(),
            edge_min_approx: BTreeMap::new(),
            ties: Vec::new(),
        };
        let mut tent: Vec<Option<Tentative>> = vec![None; n];
        tent[source as usize] = Some(Tentative {
            value: RadicalSum::zero(),
            approx: 0.0,
            arrivals: Vec::new(),
        });
        let mut heap = BinaryHeap::from([(Reverse(Key(0.0)), source)]);
        let slack = 1e-7 * (1.0 + budget);

        while let Some((Reverse(Key(k)), v)) = heap.pop() {
            if field.settled[v as usize].is_some() {
                continue;
            }
            let t = match &tent[v as usize] {
                Some(t) if t.approx == k => t.clone(),
                _ => continue,
            };
            if k > budget + slack {
                break;
            }
            let prop = if v == source {
                propagate(cx, v, budget)
            } else {
                let (cones, along) = continuation(cx, v, &t.arrivals, &field);
                propagate_cones(cx, v, &cones, &along, budget - k)
            };
            let p = field.props.len();
            for (i, hit) in prop.hits.iter().enumerate() {
                let w = hit.vertex;
                let value = &t.value + &seg_len(&hit.dist_sq);
                let approx = value.to_f64();
                if approx > budget + slack {
                    continue;
                }
                let arrival = Arrival { from: v, prop: p, hit: i };
                if let Some(s) = &field.settled[w as usize] {
                    if (s.approx - approx).abs() <= CLOSE * (1.0 + approx) && s.value == value {
                        field.record_tie(w, v, approx);
                    }
                    continue;
                }
                match &mut tent[w as usize] {
                    None => {
                        tent[w as usize] = Some(Tentative {
                            value,
                            approx,
                            arrivals: vec![arrival],
                        });
                        heap.push((Reverse(Key(approx)), w));
                    }
                    Some(cur) => match cmp_values(&value, approx, &cur.value, cur.approx)? {
                        Ordering::Less => {
                            *cur = Tentative {
                                value,
                                approx,
                                arrivals: vec![arrival],
                            };
                            heap.push((Reverse(Key(approx)), w));
                        }
                        Ordering::Equal => cur.arrivals.push(arrival),
                        Ordering::Greater => {}
                    },
                }
            }
            for foot in &prop.feet {
                let value = &t.value + &seg_len(&foot.dist_sq);
                let approx = value.to_f64();
                field.offer_edge_min(foot.edge, value, approx, foot.t, v)?;
            }
            field.props.push(prop);
            if t.arrivals.len() > 1 {
                let mut preds: Vec<VertexId> = t.arrivals.iter().map(|a| a.from).collect();
                preds.sort_unstable();
                field.ties.push(TieDiagnostic {
                    vertex: v,
                    predecessors: preds,
                    length: t.approx,
                });
            }
            field.settled[v as usize] = Some(t);
            field.order.push(v);
        }
        Ok(field)
    }

    fn record_tie(&mut self, w: VertexId, from: VertexId, length: f64) {
        match self.ties.iter_mut().find(|t| t.vertex == w) {
            Some(t) => {
                if !t.predecessors.contains(&from) {
                    t.predecessors.push(from);
                }
            }
            None => {
                let mut preds: Vec<VertexId> = self.settled[w as usize]
                    .as_ref()
                    .unwrap()
                    .arrivals
                    .iter()
                    .map(|a| a.from)
                    .collect();
                preds.push(from);
                self.ties.push(TieDiagnostic {
                    vertex: w,
                    predecessors: preds,
                    length,
                });
            }
        }
    }

    fn offer_edge_min(&mut self, edge: EdgeId, value: RadicalSum, approx: f64, t: f64, via: VertexId) -> Result<(), GeoError> {
        match self.edge_min.get_mut(&edge) {
            None => {
                self.edge_min.insert(
                    edge,
                    EdgeMinimum {
                        edge,
                        value,
                        t,
                        via,
                        rivals: Vec::new(),
                    },
                );
                self.edge_min_approx.insert(edge, approx);
            }
            Some(cur) => {
                let ca = self.edge_min_approx[&edge];
                match cmp_values(&value, approx, &cur.value, ca)? {
                    Ordering::Less => {
                        *cur = EdgeMinimum {
                            edge,
                            value,
                            t,
                            via,
                            rivals: Vec::new(),
                        };
                        self.edge_min_approx.insert(edge, approx);
                    }
                    Ordering::Equal => {
                        if (cur.t - t).abs() > 1e-9 && !cur.rivals.iter().any(|r| (r - t).abs() <= 1e-9) {
                            cur.rivals.push(t);
                        }
                    }
                    Ordering::Greater => {}
                }
            }
        }
        Ok(())
    }

    pub fn distance(&self, v: VertexId) -> Option<&RadicalSum> {
        self.settled.get(v as usize)?.as_ref().map(|t| &t.value)
    }

    pub fn approx(&self, v: VertexId) -> Option<f64> {
        self.settled.get(v as usize)?.as_ref().map(|t| t.approx)
    }

    /// Settled vertices in order of distance.
    /// Pseudo-sources seen from face `f`: images `(x, y)` of propagation
    /// sources in the canonical chart of `f`, with the source's distance.
    /// Images closer than 1e-9 to an earlier one are dropped.
    pub fn face_sources(&self, cx: &TriComplex, f: FaceId) -> Vec<(f64, f64, f64)> {
        let target = place_face(cx, f).map(|p| p.to_f64());
        let mut out: Vec<(f64, f64, f64)> = Vec::new();
        for prop in &self.props {
            let Some(d) = self.approx(prop.source) else { continue };
            for node in prop.nodes_in(f) {
                let Ok(chart) = develop(cx, &prop.corridor(cx, node)) else { continue };
                let (vs, ps) = chart.faces.last().unwrap();
                let src = chart.point(0, prop.source).unwrap().to_f64();
                let from: Vec<(f64, f64)> = cx.face(f).iter().map(|v| {
                    ps[vs.iter().position(|w| w == v).unwrap()].to_f64()
                }).collect();
                let (x, y) = affine_map(&[from[0], from[1], from[2]], &target, src);
                if !out.iter().any(|o| (o.0 - x).hypot(o.1 - y) < 1e-9 && (o.2 - d).abs() < 1e-9) {
                    out.push((x, y, d));
                }
            }
        }
        out
    }

    pub fn settled(&self) -> &[VertexId] {
        &self.order
    }

    pub fn ties(&self) -> &[TieDiagnostic] {
        &self.ties
    }

    /// Minimum over the interior of `e`, when it is below both endpoints.
    pub fn edge_minimum(&self, e: EdgeId, cx: &TriComplex) -> Result<Option<&EdgeMinimum>, GeoError> {
        let Some(m) = self.edge_min.get(&e) else {
            return Ok(None);
        };
        let ma = self.edge_min_approx[&e];
        for v in cx.edge(e) {
            if let Some(t) = &self.settled[v as usize] {
                if cmp_values(&m.value, ma, &t.value, t.approx)? != Ordering::Less {
                    return Ok(None);
                }
            }
        }
        Ok(Some(m))
    }

    pub fn edge_minima(&self) -> impl Iterator<Item = &EdgeMinimum> {
        self.edge_min.values()
    }

    /// Smallest distance to a non-interior vertex or to a point of an edge
    /// with no interior endpoint, among those within the budget.
    pub fn frontier_distance(&self, cx: &TriComplex) -> Result<Option<(RadicalSum, f64)>, GeoError> {
        let mut best: Option<(RadicalSum, f64)> = None;
        let offer = |v: &RadicalSum, a: f64, best: &mut Option<(RadicalSum, f64)>| -> Result<(), GeoError> {
            let better = match best {
                None => true,
                Some((b, ba)) => cmp_values(v, a, b, *ba)? == Ordering::Less,
            };
            if better {
                *best = Some((v.clone(), a));
            }
            Ok(())
        };
        for &v in &self.order {
            if !cx.is_interior(v) {
                let t = self.settled[v as usize].as_ref().unwrap();
                offer(&t.value, t.approx, &mut best)?;
            }
        }
        for (e, m) in &self.edge_min {
            let [a, b] = cx.edge(*e);
            if !cx.is_interior(a) && !cx.is_interior(b) {
                offer(&m.value, self.edge_min_approx[e], &mut best)?;
            }
        }
        Ok(best)
    }

    /// Fails unless every point within `r` of the source lies inside the
    /// truncated complex, so that distances up to `r` are those of the
    /// untruncated space.
    pub fn ensure_safe(&self, cx: &TriComplex, r: &RadicalSum) -> Result<(), GeoError> {
        let ra = r.to_f64();
        let beyond = |frontier: String| GeoError::BeyondMargin {
            center: self.source,
            radius: r.to_decimal(12),
            frontier,
        };
        if ra > self.budget - 1e-6 * (1.0 + self.budget) {
            return Err(beyond(format!("unexplored beyond {}", self.budget)));
        }
        if let Some((f, fa)) = self.frontier_distance(cx)? {
            if cmp_values(&f, fa, r, ra)? != Ordering::Greater {
                return Err(beyond(f.to_decimal(12)));
            }
        }
        Ok(())
    }

    /// The geodesic to `target`, rebuilt from first arrivals.
    pub fn geodesic(&self, cx: &TriComplex, target: VertexId) -> Result<GeodesicResult, GeoError> {
        let t = self.settled.get(target as usize).and_then(|t| t.as_ref()).ok_or(GeoError::Unreached {
            from: self.source,
            target,
        })?;
        let mut segments = Vec::new();
        let mut v = target;
        let mut ties = Vec::new();
        while v != self.source {
            let tv = self.settled[v as usize].as_ref().unwrap();
            if let Some(d) = self.ties.iter().find(|d| d.vertex == v) {
                ties.push(d.clone());
            }
            let a = &tv.arrivals[0];
            let prop = &self.props[a.prop];
            let hit = &prop.hits[a.hit];
            segments.push(Segment {
                from: a.from,
                to: v,
                len_sq: hit.dist_sq.clone(),
                corridor: prop.hit_corridor(cx, hit),
                departure: hit.departure.clone(),
                arrival: hit.arrival.clone(),
            });
            v = a.from;
        }
        segments.reverse();
        let mut breakpoints = vec![self.source];
        breakpoints.extend(segments.iter().map(|s| s.to));
        let length_sq = match segments.as_slice() {
            [s] => Some(s.len_sq.clone()),
            [] => Some(QField::zero()),
            _ => None,
        };
        let within_safe_radius = match self.frontier_distance(cx)? {
            None => t.approx < self.budget,
            Some((f, fa)) => cmp_values(&f, fa, &t.value, t.approx)? == Ordering::Greater,
        };
        Ok(GeodesicResult {
            source: self.source,
            target,
            length: t.value.clone(),
            length_sq,
            breakpoints,
            segments,
            within_safe_radius,
            ties,
        })
    }
}

/// Cones of directions at `v` making an angle of at least π with some
/// incoming direction, and the neighbours reached along such edges.
fn continuation(cx: &TriComplex, v: VertexId, arrivals: &[Arrival], field: &DistanceField) -> (Vec<Cone>, Vec<VertexId>) {
    let theta = corner_angle(cx, v);
    let straight = PI - 1e-9;
    let mut cones = Vec::new();
    let mut along = Vec::new();
    for a in arrivals {
        let incoming = &field.props[a.prop].hits[a.hit].arrival;
        let dist = link_distances(cx, v, incoming);
        for &w in cx.neighbors(v) {
            if dist[&w] >= straight && !along.contains(&w) {
                along.push(w);
            }
        }
        for &f in cx.vertex_faces(v) {
            let (c, d) = corner(cx, f, v);
            let lo = (straight - dist[&c]).max(0.0);
            let hi = (theta + dist[&d] - straight).min(theta);
            if lo > hi {
                continue;
            }
            let right = (lo - CONE_SLACK > 0.0).then(|| unit_direction(lo - CONE_SLACK));
            let left = (hi + CONE_SLACK < theta).then(|| unit_direction(hi + CONE_SLACK));
            cones.push(Cone { face: f, right, left });
        }
    }
    along.sort_unstable();
    (cones, along)
}

/// A rational vector at angle `phi` from the positive x-axis.
fn unit_direction(phi: f64) -> Point {
    let q = |x: f64| QField::from_rational(BigRational::from_float(x).expect("finite"));
    Point::new(q(phi.cos()), q(phi.sin()))
}

/// Squared length of the shortest straight segment from `u` to `w`, if
/// one of length at most `upper_bound` exists.
pub fn direct_distance(cx: &TriComplex, u: VertexId, w: VertexId, upper_bound: f64) -> Result<Option<QField>, GeoError> {
    cx.require_interior(u)?;
    cx.require_interior(w)?;
    let p = propagate(cx, u, upper_bound);
    Ok(p.hits_of(w).first().map(|h| h.dist_sq.clone()))
}

/// Upper bound on the distance from `v` to `w` along edges.
pub fn skeleton_bound(cx: &TriComplex, v: VertexId, w: VertexId) -> Option<f64> {
    let n = cx.num_vertices();
    let mut dist = vec![f64::INFINITY; n];
    dist[v as usize] = 0.0;
    let mut heap = BinaryHeap::from([(Reverse(Key(0.0)), v)]);
    while let Some((Reverse(Key(d)), u)) = heap.pop() {
        if d > dist[u as usize] {
            continue;
        }
        if u == w {
            return Some(d);
        }
        for &x in cx.neighbors(u) {
            let nd = d + cx.edge_len_sq(u, x).to_f64().sqrt();
            if nd < dist[x as usize] {
                dist[x as usize] = nd;
                heap.push((Reverse(Key(nd)), x));
            }
        }
    }
    None
}

/// The geodesic between two interior vertices.
pub fn vertex_distance(cx: &TriComplex, v: VertexId, w: VertexId) -> Result<GeodesicResult, GeoError> {
    cx.require_interior(v)?;
    cx.require_interior(w)?;
    let bound = skeleton_bound(cx, v, w).ok_or(GeoError::Unreached { from: v, target: w })?;
    let field = DistanceField::new(cx, v, bound + 1e-6)?;
    field.geodesic(cx, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::DiskCondition;
    use crate::generators::{gen_seifert, gen_seifert_patch};

    #[test]
    fn face_sources_match_the_plane() {
        let patch = gen_seifert_patch(DiskCondition::new(4, 6, 12), 4).unwrap();
        let cx = &patch.complex;
        let field = DistanceField::new(cx, 0, 4.0).unwrap();
        let origin = patch.coords[0].to_f64();
        let mut seen = 0;
        for f in 0..cx.num_faces() as FaceId {
            let vs = cx.face(f);
            if vs.iter().any(|&v| field.approx(v).map_or(true, |d| d > 3.0)) {
                continue;
            }
            let from = vs.map(|v| patch.coords[v as usize].to_f64());
            let to = place_face(cx, f).map(|p| p.to_f64());
            let (ox, oy) = affine_map(&from, &to, origin);
            let srcs = field.face_sources(cx, f);
            assert!(!srcs.is_empty());
            for (x, y, d) in srcs {
                // every pseudo-source is the plane's source pushed along a ray
                assert!(((x - ox).hypot(y - oy) - d).abs() < 1e-9, "face {f}");
            }
            seen += 1;
        }
        assert!(seen >= 12, "{seen}");
    }

    #[test]
    fn eisenstein_examples() {
        let patch = gen_seifert_patch(DiskCondition::new(6, 6, 6), 4).unwrap();
        let cx = &patch.complex;
        // the lattice point 2·e₁ + e₂
        let target = (0..cx.num_vertices() as VertexId)
            .find(|&v| patch.coords[v as usize].norm_sq() == QField::from_int(7))
            .unwrap();
        let g = vertex_distance(cx, 0, target).unwrap();
        assert_eq!(g.length_sq, Some(QField::from_int(7)));
        assert!(g.within_safe_radius);

        // a collinear pair at distance 2 goes through the middle vertex
        let two = (0..cx.num_vertices() as VertexId)
            .find(|&v| patch.coords[v as usize].norm_sq() == QField::from_int(4))
            .unwrap();
        let g = vertex_distance(cx, 0, two).unwrap();
        assert_eq!(g.length, RadicalSum::from_int(2));
        assert_eq!(g.breakpoints.len(), 3);
        for (_, a) in g.breakpoint_angles(cx) {
            assert_eq!(a.units, Some(12));
        }
        assert_eq!(direct_distance(cx, 0, two, 3.0).unwrap(), None);
    }

    #[test]
    fn neighbours_at_edge_length() {
        let cx = gen_seifert(DiskCondition::new(4, 6, 12), 2).unwrap();
        for &w in cx.neighbors(0) {
            if cx.is_interior(w) {
                let g = vertex_distance(&cx, 0, w).unwrap();
                assert_eq!(g.length_sq.as_ref(), Some(cx.edge_len_sq(0, w)));
            }
        }
    }

    #[test]
    fn field_matches_planar_distances() {
        for dc in [(6, 6, 6), (4, 8, 8), (4, 6, 12)] {
            let patch = gen_seifert_patch(DiskCondition::new(dc.0, dc.1, dc.2), 3).unwrap();
            let cx = &patch.complex;
            let field = DistanceField::new(cx, 0, 3.0).unwrap();
            for &v in field.settled() {
                let d = patch.coords[v as usize].norm_sq();
                let got = field.distance(v).unwrap();
                assert_eq!(got.cmp_exact(&RadicalSum::sqrt_of(&d)).unwrap(), Ordering::Equal, "{dc:?} vertex {v}");
            }
            assert!(field.ties().is_empty());
        }
    }

    #[test]
    fn safety_of_small_radii() {
        let cx = gen_seifert(DiskCondition::new(6, 6, 6), 3).unwrap();
        let field = DistanceField::new(&cx, 0, 4.0).unwrap();
        // the frontier is the ring at hop 3, whose nearest points are at 3·√3/2
        let (f, _) = field.frontier_distance(&cx).unwrap().unwrap();
        assert_eq!(f, RadicalSum::sqrt_of(&QField::from_ratios((27, 4), (0, 1), (0, 1), (0, 1))));
        assert!(field.ensure_safe(&cx, &RadicalSum::from_int(2)).is_ok());
        assert!(field.ensure_safe(&cx, &RadicalSum::from_int(3)).is_err());
    }
}
