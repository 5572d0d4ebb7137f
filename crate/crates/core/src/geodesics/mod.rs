//! Exact geodesics by unfolding face sequences into the plane.
//!
//! Distances from a vertex are found by propagating wedges of straight
//! rays through the complex (each wedge is bounded by rays through unfolded
//! vertex images), then chaining such direct segments through vertices with
//! a Dijkstra search.

mod angle;
mod field;
mod window;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::complex::{ComplexError, EdgeId, FaceId, TriComplex, VertexId};
use crate::exactnum::{QField, RadicalSum, Undecided};
use crate::planar::{place_apex, Point};

pub use angle::{angle_at, link_angle, Angle, Direction};
pub use field::{cmp_distances, direct_distance, skeleton_bound, vertex_distance, DistanceField, EdgeMinimum, GeodesicResult, Segment, TieDiagnostic};
pub use window::{propagate, EdgeFoot, Hit, Propagation};

#[derive(Debug, Error)]
pub enum GeoError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Undecided(#[from] Undecided),
    #[error("invalid corridor: {0}")]
    InvalidCorridor(String),
    #[error("direction from {0} to itself is undefined")]
    SameVertex(VertexId),
    #[error("radius {radius} reaches the truncation frontier at distance {frontier} from vertex {center}")]
    BeyondMargin {
        center: VertexId,
        radius: String,
        frontier: String,
    },
    #[error("vertex {target} not reached from {from} within the search bound")]
    Unreached { from: VertexId, target: VertexId },
    #[error("no vertex {0}")]
    NoSuchVertex(VertexId),
}

/// Alternating faces and shared edges, without immediate backtracking.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Corridor {
    pub faces: Vec<FaceId>,
    pub edges: Vec<EdgeId>,
}

impl Corridor {
    /// Builds the corridor through consecutive faces, inferring shared edges.
    pub fn through(cx: &TriComplex, faces: &[FaceId]) -> Result<Self, GeoError> {
        let mut edges = Vec::new();
        for w in faces.windows(2) {
            let shared: Vec<EdgeId> = cx
                .face_edges(w[0])
                .into_iter()
                .filter(|e| cx.face_edges(w[1]).contains(e))
                .collect();
            match shared.as_slice() {
                [e] => edges.push(*e),
                _ => {
                    return Err(GeoError::InvalidCorridor(format!(
                        "faces {} and {} do not share exactly one edge",
                        w[0], w[1]
                    )))
                }
            }
        }
        let c = Corridor {
            faces: faces.to_vec(),
            edges,
        };
        c.validate(cx)?;
        Ok(c)
    }

    pub fn validate(&self, cx: &TriComplex) -> Result<(), GeoError> {
        if self.faces.is_empty() || self.edges.len() + 1 != self.faces.len() {
            return Err(GeoError::InvalidCorridor("length mismatch".into()));
        }
        for (j, &e) in self.edges.iter().enumerate() {
            let (f, g) = (self.faces[j], self.faces[j + 1]);
            if f == g || !cx.face_edges(f).contains(&e) || !cx.face_edges(g).contains(&e) {
                return Err(GeoError::InvalidCorridor(format!("edge {e} is not shared by faces {f} and {g}")));
            }
            if j > 0 && self.edges[j - 1] == e {
                return Err(GeoError::InvalidCorridor(format!("backtracks across edge {e}")));
            }
        }
        for &f in &self.faces {
            if !cx.face(f).iter().any(|&v| cx.is_interior(v)) {
                let v = cx.face(f)[0];
                return Err(ComplexError::OutsideMargin {
                    vertex: v,
                    depth: cx.depth(v),
                    margin: cx.margin(),
                }
                .into());
            }
        }
        Ok(())
    }
}

/// Planar images of the faces of a corridor, in corridor order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DevelopedChart {
    /// Per face, its vertices (type order) and their images.
    pub faces: Vec<([VertexId; 3], [Point; 3])>,
}

impl DevelopedChart {
    /// Image of `v` in the `k`-th face of the corridor.
    pub fn point(&self, k: usize, v: VertexId) -> Option<&Point> {
        let (vs, ps) = &self.faces[k];
        vs.iter().position(|&w| w == v).map(|i| &ps[i])
    }

    /// All vertex images, keyed by vertex; a vertex met twice keeps its
    /// first image.
    pub fn vertex_images(&self) -> BTreeMap<VertexId, Point> {
        let mut out = BTreeMap::new();
        for (vs, ps) in &self.faces {
            for (v, p) in vs.iter().zip(ps) {
                out.entry(*v).or_insert_with(|| p.clone());
            }
        }
        out
    }
}

/// Canonical placement of a single face: longest side on the positive
/// x-axis, starting at the endpoint whose other side is longer (lower type
/// on ties), apex above the axis.
pub fn place_face(cx: &TriComplex, _face: FaceId) -> [Point; 3] {
    let shape = cx.shape();
    let side = |i: usize, j: usize| shape.edge_sq(i as u8 + 1, j as u8 + 1).clone();
    let pairs = [(0usize, 1usize), (0, 2), (1, 2)];
    let (i, j) = pairs
        .into_iter()
        .reduce(|best, p| {
            if side(p.0, p.1).cmp_value(&side(best.0, best.1)).is_gt() {
                p
            } else {
                best
            }
        })
        .unwrap();
    let k = 3 - i - j;
    let (o, e) = match side(i, k).cmp_value(&side(j, k)) {
        std::cmp::Ordering::Less => (j, i),
        _ => (i, j),
    };
    let mut pts: [Point; 3] = Default::default();
    pts[o] = Point::origin();
    pts[e] = Point::new(side(o, e).sqrt_exact().expect("side length in field"), QField::zero());
    pts[k] = place_apex(&pts[o], &pts[e], &side(o, k), &side(e, k), &shape.area, true);
    pts
}

/// Unfolds a corridor isometrically into the plane.
pub fn develop(cx: &TriComplex, corridor: &Corridor) -> Result<DevelopedChart, GeoError> {
    corridor.validate(cx)?;
    let shape = cx.shape();
    let first = corridor.faces[0];
    let mut out = vec![(cx.face(first), place_face(cx, first))];
    for (j, &e) in corridor.edges.iter().enumerate() {
        let [a, b] = cx.edge(e);
        let (prev_vs, prev_ps) = &out[j];
        let img = |v: VertexId| prev_ps[prev_vs.iter().position(|&w| w == v).unwrap()].clone();
        let (pa, pb) = (img(a), img(b));
        let far = *prev_vs.iter().find(|&&w| w != a && w != b).unwrap();
        let pfar = img(far);
        let g = corridor.faces[j + 1];
        let c = cx.third_vertex(g, a, b);
        // the new apex goes on the side of ab away from the previous face
        let left = crate::planar::orient(&pa, &pb, &pfar).is_lt();
        let pc = place_apex(&pa, &pb, cx.edge_len_sq(a, c), cx.edge_len_sq(b, c), &shape.area, left);
        let vs = cx.face(g);
        let ps = vs.map(|v| if v == a { pa.clone() } else if v == b { pb.clone() } else { pc.clone() });
        out.push((vs, ps));
    }
    Ok(DevelopedChart { faces: out })
}

/// Length of the segment with squared length `sq`.
pub(crate) fn seg_len(sq: &QField) -> RadicalSum {
    RadicalSum::sqrt_of(sq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::DiskCondition;
    use crate::exactnum::rat;
    use crate::generators::gen_seifert;

    #[test]
    fn canonical_single_faces() {
        let cx = gen_seifert(DiskCondition::new(6, 6, 6), 1).unwrap();
        let ps = place_face(&cx, 0);
        assert_eq!(ps[0], Point::origin());
        assert_eq!(ps[1], Point::new(QField::one(), QField::zero()));
        assert_eq!(ps[2], Point::new(QField::from_rational(rat(1, 2)), QField::sqrt3().scale(&rat(1, 2))));

        let cx = gen_seifert(DiskCondition::new(4, 6, 12), 1).unwrap();
        let ps = place_face(&cx, 0);
        // type-3 vertex at the origin, type 2 at (2,0), right angle at type 1
        assert_eq!(ps[2], Point::origin());
        assert_eq!(ps[1], Point::new(QField::from_int(2), QField::zero()));
        assert_eq!(ps[0], Point::new(QField::from_rational(rat(3, 2)), QField::sqrt3().scale(&rat(1, 2))));
    }

    #[test]
    fn rhombus_development() {
        let cx = gen_seifert(DiskCondition::new(6, 6, 6), 2).unwrap();
        let f = cx.vertex_faces(0)[0];
        let e = cx.face_edges(f)[0];
        let g = *cx.edge_faces(e).iter().find(|&&g| g != f).unwrap();
        let chart = develop(&cx, &Corridor::through(&cx, &[f, g]).unwrap()).unwrap();
        let [a, b] = cx.edge(e);
        let p = chart.point(0, cx.third_vertex(f, a, b)).unwrap();
        let q = chart.point(1, cx.third_vertex(g, a, b)).unwrap();
        assert_eq!(p.dist_sq(q), QField::from_int(3));
        assert_eq!(chart.point(0, a), chart.point(1, a));
    }

    #[test]
    fn corridor_validation() {
        let cx = gen_seifert(DiskCondition::new(6, 6, 6), 2).unwrap();
        let f = cx.vertex_faces(0)[0];
        let e = cx.face_edges(f)[0];
        let g = *cx.edge_faces(e).iter().find(|&&g| g != f).unwrap();
        assert!(Corridor::through(&cx, &[f, g, f]).is_err());
        assert!(Corridor::through(&cx, &[f, f]).is_err());
    }
}
