use std::collections::{HashMap, HashSet, VecDeque};

use crate::complex::{triangle_shape, DiskCondition, TriComplex, VertexId};
use crate::planar::{place_apex, Point};

use super::{renumber_bfs, GenError};

/// A Seifert tessellation patch together with its planar embedding.
#[derive(Clone, Debug)]
pub struct SeifertPatch {
    pub complex: TriComplex,
    /// Developed position of each vertex; the base vertex is the origin.
    pub coords: Vec<Point>,
}

/// The part of the Euclidean `(n₁,n₂,n₃)` tessellation within `radius`
/// combinatorial steps of a type-1 base vertex: the closed stars of all
/// vertices at depth below `radius`.
pub fn gen_seifert(dc: DiskCondition, radius: u32) -> Result<TriComplex, GenError> {
    Ok(gen_seifert_patch(dc, radius)?.complex)
}

pub fn gen_seifert_patch(dc: DiskCondition, radius: u32) -> Result<SeifertPatch, GenError> {
    let shape = triangle_shape(&dc)?;
    let mut pts: Vec<Point> = Vec::new();
    let mut types: Vec<u8> = Vec::new();
    let mut index: HashMap<Point, usize> = HashMap::new();
    let mut intern = |p: Point, t: u8, pts: &mut Vec<Point>, types: &mut Vec<u8>| -> usize {
        *index.entry(p.clone()).or_insert_with(|| {
            pts.push(p);
            types.push(t);
            pts.len() - 1
        })
    };

    let e12 = shape.edge_sq(1, 2).sqrt_exact().expect("side lengths lie in the field");
    let p1 = Point::origin();
    let p2 = Point::new(e12, Default::default());
    let p3 = place_apex(&p1, &p2, shape.edge_sq(1, 3), shape.edge_sq(2, 3), &shape.area, true);
    let first = [
        intern(p1, 1, &mut pts, &mut types),
        intern(p2, 2, &mut pts, &mut types),
        intern(p3, 3, &mut pts, &mut types),
    ];

    // every vertex within `radius` hops lies within Euclidean distance
    // 2·radius, and its star within two more
    let reach = 2.0 * radius as f64 + 3.0;
    let reach_sq = reach * reach;
    let within = |p: &Point| {
        let (x, y) = p.to_f64();
        x * x + y * y <= reach_sq
    };

    let mut faces: Vec<[usize; 3]> = vec![first];
    let mut seen: HashSet<[usize; 3]> = HashSet::from([first]);
    let mut queue = VecDeque::from([first]);
    while let Some(f) = queue.pop_front() {
        if radius == 0 || !f.iter().any(|&v| within(&pts[v])) {
            continue;
        }
        for k in 0..3 {
            let (p, q) = (f[(k + 1) % 3], f[(k + 2) % 3]);
            let image = pts[f[k]].reflect(&pts[p], &pts[q]);
            let r = intern(image, types[f[k]], &mut pts, &mut types);
            let mut g = f;
            g[k] = r;
            if seen.insert(g) {
                faces.push(g);
                queue.push_back(g);
            }
        }
    }

    let adj = super::face_adjacency(pts.len(), &faces);
    let hops = super::hop_depths(&adj, 0);
    let kept: Vec<bool> = hops.iter().map(|&h| h <= radius).collect();
    // union of the closed stars of vertices at depth < radius
    let faces: Vec<[usize; 3]> = faces
        .into_iter()
        .filter(|f| f.iter().any(|&v| hops[v] < radius))
        .collect();
    let adj = super::face_adjacency(pts.len(), &faces);

    let order = renumber_bfs(&adj, &types, &kept, 0);
    let mut new_id = vec![u32::MAX; pts.len()];
    for (i, &old) in order.iter().enumerate() {
        new_id[old] = i as VertexId;
    }
    let new_types = order.iter().map(|&o| types[o]).collect();
    let coords = order.iter().map(|&o| pts[o].clone()).collect();
    let mut new_faces: Vec<[VertexId; 3]> = faces.iter().map(|f| f.map(|v| new_id[v])).collect();
    new_faces.sort_unstable();
    let complex = TriComplex::new(dc, new_types, new_faces, radius)?;
    Ok(SeifertPatch { complex, coords })
}
