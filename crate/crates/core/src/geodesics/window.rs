//! Straight-ray propagation from a vertex.
//!
//! A window is a cone of rays from the pseudo-source (the origin of the
//! chart) that all cross one developed edge. Crossing the edge places the
//! next face's apex; the cone either passes on one side of it or splits.

use serde::Serialize;

use crate::complex::{EdgeId, FaceId, TriComplex, VertexId};
use crate::exactnum::QField;
use crate::planar::{place_apex, Point};

use super::angle::Direction;
use super::Corridor;

/// A vertex reached by a straight segment from the source.
#[derive(Clone, Debug, Serialize)]
pub struct Hit {
    pub vertex: VertexId,
    pub dist_sq: QField,
    /// Image of the vertex in the chart of the source.
    #[serde(skip)]
    pub image: Point,
    /// Arena node of the face containing the end of the segment.
    node: usize,
    /// Set for segments running along an edge.
    along_edge: bool,
    /// Direction of the segment at the source.
    pub departure: Direction,
    /// Direction back towards the source at the hit vertex.
    pub arrival: Direction,
}

/// Perpendicular foot of the source on the interior of an edge.
#[derive(Clone, Debug, Serialize)]
pub struct EdgeFoot {
    pub edge: EdgeId,
    /// Position along the edge, measured from its lower-numbered endpoint.
    pub t: f64,
    pub dist_sq: QField,
    node: usize,
}

#[derive(Clone, Debug)]
struct Node {
    face: FaceId,
    parent: Option<usize>,
}

/// Everything visible from `source` along straight rays within `budget`.
#[derive(Clone, Debug)]
pub struct Propagation {
    pub source: VertexId,
    pub budget: f64,
    pub hits: Vec<Hit>,
    pub feet: Vec<EdgeFoot>,
    arena: Vec<Node>,
    pub windows: usize,
}

/// Initial cone inside the corner of `face` at the source. Directions are
/// chart vectors with the corner's first vertex on the positive x-axis;
/// `None` means the corner edge itself.
#[derive(Clone, Debug)]
pub(crate) struct Cone {
    pub face: FaceId,
    pub right: Option<Point>,
    pub left: Option<Point>,
}

struct Window {
    node: usize,
    a: VertexId,
    b: VertexId,
    pa: Point,
    pb: Point,
    right: Point,
    left: Point,
    root: FaceId,
}

/// The two other vertices of `f`, in face order; the first is placed on
/// the positive x-axis of the corner chart.
pub(crate) fn corner(cx: &TriComplex, f: FaceId, u: VertexId) -> (VertexId, VertexId) {
    let mut it = cx.face(f).into_iter().filter(|&w| w != u);
    (it.next().unwrap(), it.next().unwrap())
}

/// Chart of the corner of `f` at `u`: images of the two other vertices.
pub(crate) fn corner_chart(cx: &TriComplex, f: FaceId, u: VertexId) -> (VertexId, VertexId, Point, Point) {
    let (c, d) = corner(cx, f, u);
    let pc = Point::new(cx.edge_len_sq(u, c).sqrt_exact().expect("side length in field"), QField::zero());
    let pd = place_apex(&Point::origin(), &pc, cx.edge_len_sq(u, d), cx.edge_len_sq(c, d), &cx.shape().area, true);
    (c, d, pc, pd)
}

/// Full propagation: every direction at `source`.
pub fn propagate(cx: &TriComplex, source: VertexId, budget: f64) -> Propagation {
    let cones: Vec<Cone> = cx
        .vertex_faces(source)
        .iter()
        .map(|&face| Cone {
            face,
            right: None,
            left: None,
        })
        .collect();
    let along: Vec<VertexId> = cx.neighbors(source).to_vec();
    propagate_cones(cx, source, &cones, &along, budget)
}

pub(crate) fn propagate_cones(
    cx: &TriComplex,
    source: VertexId,
    cones: &[Cone],
    along: &[VertexId],
    budget: f64,
) -> Propagation {
    let mut p = Propagation {
        source,
        budget,
        hits: Vec::new(),
        feet: Vec::new(),
        arena: Vec::new(),
        windows: 0,
    };
    let slack = 1e-7 * (1.0 + budget);
    for &w in along {
        let len_sq = cx.edge_len_sq(source, w).clone();
        if len_sq.to_f64().sqrt() > budget + slack {
            continue;
        }
        let f = cx.faces_on(source, w)[0];
        p.arena.push(Node { face: f, parent: None });
        let (c, _, pc, pd) = corner_chart(cx, f, source);
        let image = if c == w { pc } else { pd };
        p.hits.push(Hit {
            vertex: w,
            dist_sq: len_sq,
            image,
            node: p.arena.len() - 1,
            along_edge: true,
            departure: Direction::Edge(w),
            arrival: Direction::Edge(source),
        });
    }

    let mut stack = Vec::new();
    for cone in cones {
        let (c, d, pc, pd) = corner_chart(cx, cone.face, source);
        p.arena.push(Node {
            face: cone.face,
            parent: None,
        });
        let right = cone.right.clone().unwrap_or_else(|| pc.clone());
        let left = cone.left.clone().unwrap_or_else(|| pd.clone());
        let w = Window {
            node: p.arena.len() - 1,
            a: c,
            b: d,
            pa: pc,
            pb: pd,
            right,
            left,
            root: cone.face,
        };
        p.admit(cx, w, slack, &mut stack);
    }

    while let Some(w) = stack.pop() {
        p.windows += 1;
        let from = p.arena[w.node].face;
        let e = cx.edge_id(w.a, w.b).unwrap();
        for &g in cx.edge_faces(e) {
            if g == from {
                continue;
            }
            p.arena.push(Node {
                face: g,
                parent: Some(w.node),
            });
            let node = p.arena.len() - 1;
            let r = cx.third_vertex(g, w.a, w.b);
            let pr = place_apex(&w.pa, &w.pb, cx.edge_len_sq(w.a, r), cx.edge_len_sq(w.b, r), &cx.shape().area, false);
            let cr = w.right.cross(&pr).is_positive();
            let cl = pr.cross(&w.left).is_positive();
            if cr && cl {
                let (c, _) = corner(cx, g, r);
                let pc = if c == w.a { &w.pa } else { &w.pb };
                let (ux, uy) = (pc - &pr).to_f64();
                let (vx, vy) = pr.to_f64();
                let (vx, vy) = (-vx, -vy);
                let arrival = Direction::Face {
                    face: g,
                    offset: (ux * vy - uy * vx).abs().atan2(ux * vx + uy * vy),
                };
                let (x, y) = pr.to_f64();
                let departure = Direction::Face {
                    face: w.root,
                    offset: y.atan2(x),
                };
                p.hits.push(Hit {
                    vertex: r,
                    dist_sq: pr.norm_sq(),
                    image: pr.clone(),
                    node,
                    along_edge: false,
                    departure,
                    arrival,
                });
            }
            if cr {
                let left = if cl { pr.clone() } else { w.left.clone() };
                let child = Window {
                    node,
                    a: w.a,
                    b: r,
                    pa: w.pa.clone(),
                    pb: pr.clone(),
                    right: w.right.clone(),
                    left,
                    root: w.root,
                };
                p.admit(cx, child, slack, &mut stack);
            }
            if cl {
                let right = if cr { pr.clone() } else { w.right.clone() };
                let child = Window {
                    node,
                    a: r,
                    b: w.b,
                    pa: pr.clone(),
                    pb: w.pb.clone(),
                    right,
                    left: w.left.clone(),
                    root: w.root,
                };
                p.admit(cx, child, slack, &mut stack);
            }
        }
    }
    p
}

impl Propagation {
    /// Records the foot on the window's edge and queues the window unless
    /// its visible part of the edge is beyond the budget.
    fn admit(&mut self, cx: &TriComplex, w: Window, slack: f64, stack: &mut Vec<Window>) {
        if cone_segment_distance(&w) > self.budget + slack {
            return;
        }
        let e = &w.pb - &w.pa;
        let den = e.norm_sq();
        let num = -w.pa.dot(&e);
        if num.is_positive() && num.cmp_value(&den).is_lt() {
            // den·foot, to keep the wedge test division free
            let scaled = &w.pa.scale(&den) + &e.scale(&num);
            if !w.right.cross(&scaled).is_negative() && !scaled.cross(&w.left).is_negative() {
                let dist_sq = w.pa.norm_sq() - num.square() * den.inv().unwrap();
                if dist_sq.to_f64().max(0.0).sqrt() <= self.budget + slack {
                    let t = num.to_f64() / den.to_f64();
                    let (edge, t) = if w.a < w.b {
                        (cx.edge_id(w.a, w.b).unwrap(), t)
                    } else {
                        (cx.edge_id(w.a, w.b).unwrap(), 1.0 - t)
                    };
                    self.feet.push(EdgeFoot {
                        edge,
                        t,
                        dist_sq,
                        node: w.node,
                    });
                }
            }
        }
        stack.push(w);
    }

    /// Face sequence from the source corner to the face holding the end of
    /// the segment.
    pub fn corridor(&self, cx: &TriComplex, node: usize) -> Corridor {
        let mut faces = Vec::new();
        let mut k = Some(node);
        while let Some(i) = k {
            faces.push(self.arena[i].face);
            k = self.arena[i].parent;
        }
        faces.reverse();
        Corridor::through(cx, &faces).expect("windows follow shared edges")
    }

    /// Arena nodes lying in face `f`.
    pub(crate) fn nodes_in(&self, f: FaceId) -> impl Iterator<Item = usize> + '_ {
        (0..self.arena.len()).filter(move |&i| self.arena[i].face == f)
    }

    pub fn hit_corridor(&self, cx: &TriComplex, hit: &Hit) -> Corridor {
        self.corridor(cx, hit.node)
    }

    pub fn foot_corridor(&self, cx: &TriComplex, foot: &EdgeFoot) -> Corridor {
        self.corridor(cx, foot.node)
    }

    /// Face in which the segment of `hit` arrives at its vertex.
    pub fn hit_face(&self, hit: &Hit) -> FaceId {
        self.arena[hit.node].face
    }

    pub fn hit_along_edge(&self, hit: &Hit) -> bool {
        hit.along_edge
    }

    /// Hits of one vertex, shortest first.
    pub fn hits_of(&self, v: VertexId) -> Vec<&Hit> {
        let mut out: Vec<&Hit> = self.hits.iter().filter(|h| h.vertex == v).collect();
        out.sort_by(|x, y| x.dist_sq.cmp_value(&y.dist_sq));
        out
    }
}

/// Distance from the origin to the part of the window's edge inside the
/// cone, in floating point.
fn cone_segment_distance(w: &Window) -> f64 {
    let (ax, ay) = w.pa.to_f64();
    let (bx, by) = w.pb.to_f64();
    let clip = |d: (f64, f64)| -> f64 {
        // parameter along ab where the ray in direction d crosses it
        let (ex, ey) = (bx - ax, by - ay);
        let den = d.0 * ey - d.1 * ex;
        if den.abs() < 1e-300 {
            return 0.0;
        }
        ((d.0 * ay - d.1 * ax) / -den).clamp(0.0, 1.0)
    };
    let t0 = clip(w.right.to_f64());
    let t1 = clip(w.left.to_f64());
    let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
    let at = |t: f64| (ax + t * (bx - ax), ay + t * (by - ay));
    let (ex, ey) = (bx - ax, by - ay);
    let l = ex * ex + ey * ey;
    let tf = if l > 0.0 { (-(ax * ex + ay * ey) / l).clamp(lo, hi) } else { lo };
    let (x, y) = at(tf);
    (x * x + y * y).sqrt()
}
