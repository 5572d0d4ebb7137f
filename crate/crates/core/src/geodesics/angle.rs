//! Directions at a vertex and the angle metric of its link.

use std::collections::{HashMap, VecDeque};
use std::f64::consts::PI;

use serde::Serialize;

use crate::complex::{FaceId, TriComplex, VertexId};

use super::window::corner;
use super::{vertex_distance, GeoError};

/// A direction at a vertex: along an edge towards a neighbour, or inside a
/// face corner at `offset` radians from the edge to the corner's first
/// vertex.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Direction {
    Edge(VertexId),
    Face { face: FaceId, offset: f64 },
}

/// Angle at a vertex, as the length of the shortest link path between two
/// directions. Exact multiples of π/12 are reported in `units`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Angle {
    pub units: Option<u32>,
    pub radians: f64,
}

impl Angle {
    pub fn from_units(u: u32) -> Self {
        Angle {
            units: Some(u),
            radians: u as f64 * PI / 12.0,
        }
    }

    /// At least π, with exact units decided exactly.
    pub fn is_straight_or_more(&self) -> bool {
        match self.units {
            Some(u) => u >= 12,
            None => self.radians >= PI - 1e-9,
        }
    }
}

pub(crate) fn corner_angle(cx: &TriComplex, x: VertexId) -> f64 {
    cx.shape().angle_units[cx.vertex_type(x) as usize - 1] as f64 * PI / 12.0
}

/// Link distance from `from` to every neighbour of `x`.
pub(crate) fn link_distances(cx: &TriComplex, x: VertexId, from: &Direction) -> HashMap<VertexId, f64> {
    let theta = corner_angle(cx, x);
    let mut dist: HashMap<VertexId, f64> = cx.neighbors(x).iter().map(|&w| (w, f64::INFINITY)).collect();
    match from {
        Direction::Edge(w) => {
            dist.insert(*w, 0.0);
        }
        Direction::Face { face, offset } => {
            let (c, d) = corner(cx, *face, x);
            dist.insert(c, *offset);
            dist.insert(d, theta - offset);
        }
    }
    // every link edge has the same length, so settling in order suffices
    let mut done: Vec<VertexId> = Vec::new();
    while let Some((&u, &du)) = dist
        .iter()
        .filter(|(w, d)| d.is_finite() && !done.contains(w))
        .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(b.0)))
    {
        done.push(u);
        for &f in cx.faces_on(x, u) {
            let w = cx.third_vertex(f, x, u);
            let e = dist.get_mut(&w).unwrap();
            if du + theta < *e {
                *e = du + theta;
            }
        }
    }
    dist
}

/// Length of the shortest path in the link of `x` between two directions.
pub fn link_angle(cx: &TriComplex, x: VertexId, a: &Direction, b: &Direction) -> Angle {
    if let (Direction::Edge(p), Direction::Edge(q)) = (a, b) {
        let unit = cx.shape().angle_units[cx.vertex_type(x) as usize - 1];
        return match link_hops(cx, x, *p, *q) {
            Some(h) => Angle::from_units(h * unit),
            None => Angle {
                units: None,
                radians: f64::INFINITY,
            },
        };
    }
    let theta = corner_angle(cx, x);
    let dist = link_distances(cx, x, a);
    let radians = match b {
        Direction::Edge(w) => dist[w],
        Direction::Face { face, offset } => {
            let (c, d) = corner(cx, *face, x);
            let mut r = (dist[&c] + offset).min(dist[&d] + theta - offset);
            if let Direction::Face { face: fa, offset: oa } = a {
                if fa == face {
                    r = r.min((oa - offset).abs());
                }
            }
            r
        }
    };
    Angle { units: None, radians }
}

fn link_hops(cx: &TriComplex, x: VertexId, p: VertexId, q: VertexId) -> Option<u32> {
    let mut hops: HashMap<VertexId, u32> = HashMap::from([(p, 0)]);
    let mut queue = VecDeque::from([p]);
    while let Some(u) = queue.pop_front() {
        if u == q {
            return Some(hops[&u]);
        }
        for &f in cx.faces_on(x, u) {
            let w = cx.third_vertex(f, x, u);
            if !hops.contains_key(&w) {
                hops.insert(w, hops[&u] + 1);
                queue.push_back(w);
            }
        }
    }
    None
}

/// The angle at `x` between the geodesics to `y` and to `z`.
pub fn angle_at(cx: &TriComplex, x: VertexId, y: VertexId, z: VertexId) -> Result<Angle, GeoError> {
    if y == x {
        return Err(GeoError::SameVertex(y));
    }
    if z == x {
        return Err(GeoError::SameVertex(z));
    }
    if y == z {
        return Ok(Angle::from_units(0));
    }
    let gy = vertex_distance(cx, x, y)?;
    let gz = vertex_distance(cx, x, z)?;
    Ok(link_angle(cx, x, &gy.segments[0].departure, &gz.segments[0].departure))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::DiskCondition;
    use crate::generators::gen_seifert;

    #[test]
    fn face_angle_and_straight_line() {
        let cx = gen_seifert(DiskCondition::new(6, 6, 6), 3).unwrap();
        let f = cx.vertex_faces(0)[0];
        let (c, d) = corner(&cx, f, 0);
        let a = link_angle(&cx, 0, &Direction::Edge(c), &Direction::Edge(d));
        assert_eq!(a.units, Some(4));
        // the neighbour opposite c is three link edges away
        let opposite = cx
            .neighbors(0)
            .iter()
            .copied()
            .find(|&w| link_angle(&cx, 0, &Direction::Edge(c), &Direction::Edge(w)).units == Some(12))
            .unwrap();
        assert_eq!(angle_at(&cx, 0, c, opposite).unwrap().units, Some(12));
        assert_eq!(angle_at(&cx, 0, c, d).unwrap().units, Some(4));
        assert_eq!(angle_at(&cx, 0, c, c).unwrap().units, Some(0));
        assert!(matches!(angle_at(&cx, 0, 0, c), Err(GeoError::SameVertex(0))));
    }

    #[test]
    fn face_directions() {
        let cx = gen_seifert(DiskCondition::new(6, 6, 6), 2).unwrap();
        let f = cx.vertex_faces(0)[0];
        let (c, d) = corner(&cx, f, 0);
        let mid = Direction::Face {
            face: f,
            offset: PI / 6.0,
        };
        let a = link_angle(&cx, 0, &mid, &Direction::Edge(c));
        assert!((a.radians - PI / 6.0).abs() < 1e-12);
        let b = link_angle(&cx, 0, &Direction::Edge(d), &mid);
        assert!((b.radians - PI / 6.0).abs() < 1e-12);
        // two offsets in the same corner are compared directly
        let opp = Direction::Face {
            face: f,
            offset: PI / 6.0 + 1e-3,
        };
        assert!((link_angle(&cx, 0, &mid, &opp).radians - 1e-3).abs() < 1e-12);
    }
}
