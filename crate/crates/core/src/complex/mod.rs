//! Typed triangle 2-complexes: vertices carry a type in {1,2,3}, every face
//! has one vertex of each type, and the face metric comes from the
//! disk-condition attached to the types.

mod io;
mod link;
mod shape;
mod simplicial;

use std::collections::{HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::exactnum::QField;

pub use io::{ComplexFile, VertexRecord};
pub use link::{check_link_condition, link_graph, LinkGraph, LinkVerdict};
pub use shape::{
    triangle_shape, validate_disk_condition, BaseCondition, DiskCondition, DiskVerdict,
    TriangleShape, FULL_TURN_UNITS,
};
pub use simplicial::SimplexSet;

pub type VertexId = u32;
pub type EdgeId = u32;
pub type FaceId = u32;

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("disk-condition entries must be positive, got {0:?}")]
    NonPositiveEntry([i64; 3]),
    #[error("disk-condition {0} is not one of the base conditions (6,6,6), (4,8,8), (4,6,12)")]
    NotBase(DiskCondition),
    #[error("vertex {vertex} has invalid type {ty}")]
    InvalidVertexType { vertex: VertexId, ty: u8 },
    #[error("face {face:?} does not have one vertex of each type")]
    FaceTypes { face: [VertexId; 3] },
    #[error("face {face:?} references a vertex outside 0..{count}")]
    VertexOutOfRange { face: [VertexId; 3], count: usize },
    #[error("face {face:?} listed twice")]
    DuplicateFace { face: [VertexId; 3] },
    #[error("vertex ids must be 0..n in order; found {found} at position {position}")]
    VertexIds { position: usize, found: VertexId },
    #[error("complex has no vertices")]
    Empty,
    #[error("vertex {vertex} at depth {depth} lies outside the faithful margin {margin}")]
    OutsideMargin {
        vertex: VertexId,
        depth: u32,
        margin: u32,
    },
    #[error("malformed complex file: {0}")]
    Malformed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Summary of the global structural checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler_characteristic: i64,
    pub connected: bool,
    /// `dim H₁(C; GF(2))`, computed from the face-boundary matrix.
    pub first_betti_gf2: usize,
    /// Edges within the margin with fewer than two faces.
    pub free_edges: Vec<[VertexId; 2]>,
    pub simply_connected: bool,
}

/// A finite, truncated typed triangle complex. Immutable after construction.
#[derive(Clone, Debug)]
pub struct TriComplex {
    dc: DiskCondition,
    shape: TriangleShape,
    vtype: Vec<u8>,
    faces: Vec<[VertexId; 3]>,
    margin: u32,
    edges: Vec<[VertexId; 2]>,
    edge_index: HashMap<(VertexId, VertexId), EdgeId>,
    edge_faces: Vec<Vec<FaceId>>,
    vertex_faces: Vec<Vec<FaceId>>,
    neighbors: Vec<Vec<VertexId>>,
    depth: Vec<u32>,
}

impl PartialEq for TriComplex {
    fn eq(&self, other: &Self) -> bool {
        self.dc == other.dc
            && self.vtype == other.vtype
            && self.faces == other.faces
            && self.margin == other.margin
    }
}

impl TriComplex {
    /// Builds a complex; faces may list their vertices in any order and are
    /// stored ordered by vertex type.
    pub fn new(
        dc: DiskCondition,
        vertex_types: Vec<u8>,
        faces: Vec<[VertexId; 3]>,
        margin: u32,
    ) -> Result<Self, ComplexError> {
        let shape = triangle_shape(&dc)?;
        if vertex_types.is_empty() {
            return Err(ComplexError::Empty);
        }
        for (v, &t) in vertex_types.iter().enumerate() {
            if !(1..=3).contains(&t) {
                return Err(ComplexError::InvalidVertexType {
                    vertex: v as VertexId,
                    ty: t,
                });
            }
        }
        let nv = vertex_types.len();
        let mut ordered = Vec::with_capacity(faces.len());
        let mut seen = HashMap::new();
        for face in faces {
            if face.iter().any(|&v| v as usize >= nv) {
                return Err(ComplexError::VertexOutOfRange { face, count: nv });
            }
            let mut slot = [None; 3];
            for &v in &face {
                let t = vertex_types[v as usize] as usize - 1;
                if slot[t].replace(v).is_some() {
                    return Err(ComplexError::FaceTypes { face });
                }
            }
            let f = slot.map(|s| s.unwrap());
            if seen.insert(f, ()).is_some() {
                return Err(ComplexError::DuplicateFace { face });
            }
            ordered.push(f);
        }

        let mut edges = Vec::new();
        let mut edge_index = HashMap::new();
        let mut edge_faces: Vec<Vec<FaceId>> = Vec::new();
        let mut vertex_faces = vec![Vec::new(); nv];
        for (fi, f) in ordered.iter().enumerate() {
            for &v in f {
                vertex_faces[v as usize].push(fi as FaceId);
            }
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                let key = ordered_pair(f[i], f[j]);
                let e = *edge_index.entry(key).or_insert_with(|| {
                    edges.push([key.0, key.1]);
                    edge_faces.push(Vec::new());
                    (edges.len() - 1) as EdgeId
                });
                edge_faces[e as usize].push(fi as FaceId);
            }
        }
        let mut neighbors = vec![Vec::new(); nv];
        for &[a, b] in &edges {
            neighbors[a as usize].push(b);
            neighbors[b as usize].push(a);
        }
        for n in &mut neighbors {
            n.sort_unstable();
        }
        let depth = bfs_depths(&neighbors, 0);
        Ok(TriComplex {
            dc,
            shape,
            vtype: vertex_types,
            faces: ordered,
            margin,
            edges,
            edge_index,
            edge_faces,
            vertex_faces,
            neighbors,
            depth,
        })
    }

    pub fn disk_condition(&self) -> DiskCondition {
        self.dc
    }

    pub fn shape(&self) -> &TriangleShape {
        &self.shape
    }

    pub fn margin(&self) -> u32 {
        self.margin
    }

    pub fn num_vertices(&self) -> usize {
        self.vtype.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn vertex_types(&self) -> &[u8] {
        &self.vtype
    }

    pub fn vertex_type(&self, v: VertexId) -> u8 {
        self.vtype[v as usize]
    }

    /// `n_v`: the disk-condition entry of the vertex's type.
    pub fn vertex_n(&self, v: VertexId) -> u32 {
        self.dc.n_of(self.vertex_type(v))
    }

    pub fn faces(&self) -> &[[VertexId; 3]] {
        &self.faces
    }

    /// Face vertices ordered by type.
    pub fn face(&self, f: FaceId) -> [VertexId; 3] {
        self.faces[f as usize]
    }

    pub fn edges(&self) -> &[[VertexId; 2]] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> [VertexId; 2] {
        self.edges[e as usize]
    }

    pub fn edge_id(&self, u: VertexId, w: VertexId) -> Option<EdgeId> {
        self.edge_index.get(&ordered_pair(u, w)).copied()
    }

    pub fn edge_faces(&self, e: EdgeId) -> &[FaceId] {
        &self.edge_faces[e as usize]
    }

    pub fn faces_on(&self, u: VertexId, w: VertexId) -> &[FaceId] {
        self.edge_id(u, w).map(|e| self.edge_faces(e)).unwrap_or(&[])
    }

    pub fn vertex_faces(&self, v: VertexId) -> &[FaceId] {
        &self.vertex_faces[v as usize]
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.neighbors[v as usize]
    }

    pub fn face_edges(&self, f: FaceId) -> [EdgeId; 3] {
        let [a, b, c] = self.face(f);
        [
            self.edge_id(b, c).unwrap(),
            self.edge_id(a, c).unwrap(),
            self.edge_id(a, b).unwrap(),
        ]
    }

    /// The vertex of `f` other than `u` and `w`.
    pub fn third_vertex(&self, f: FaceId, u: VertexId, w: VertexId) -> VertexId {
        *self
            .face(f)
            .iter()
            .find(|&&x| x != u && x != w)
            .expect("face has a third vertex")
    }

    /// Hop distance from vertex 0 (the base vertex of generated complexes).
    pub fn depth(&self, v: VertexId) -> u32 {
        self.depth[v as usize]
    }

    /// Vertices whose star is complete in the truncation.
    pub fn is_interior(&self, v: VertexId) -> bool {
        self.depth(v) < self.margin
    }

    pub fn require_interior(&self, v: VertexId) -> Result<(), ComplexError> {
        if (v as usize) < self.num_vertices() && self.is_interior(v) {
            Ok(())
        } else {
            Err(ComplexError::OutsideMargin {
                vertex: v,
                depth: self.depth.get(v as usize).copied().unwrap_or(u32::MAX),
                margin: self.margin,
            })
        }
    }

    pub fn edge_len_sq(&self, u: VertexId, w: VertexId) -> &QField {
        self.shape.edge_sq(self.vertex_type(u), self.vertex_type(w))
    }

    /// Edges within the margin adjacent to fewer than two faces.
    pub fn free_edges(&self) -> Vec<[VertexId; 2]> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(e, [a, b])| {
                (self.is_interior(*a) || self.is_interior(*b)) && self.edge_faces[*e].len() < 2
            })
            .map(|(_, e)| *e)
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.depth.iter().all(|&d| d != u32::MAX)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_faces() as i64
    }

    /// Rank over GF(2) of the face-boundary matrix ∂₂.
    fn boundary_rank_gf2(&self) -> usize {
        let words = self.num_edges().div_ceil(64);
        let mut rows: Vec<Vec<u64>> = (0..self.num_faces() as FaceId)
            .map(|f| {
                let mut row = vec![0u64; words];
                for e in self.face_edges(f) {
                    row[e as usize / 64] |= 1 << (e % 64);
                }
                row
            })
            .collect();
        let mut rank = 0;
        for col in 0..self.num_edges() {
            let (w, bit) = (col / 64, 1u64 << (col % 64));
            let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & bit != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[w] & bit != 0 {
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x ^= y;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Connectivity, Euler characteristic, H₁ over GF(2) and free edges.
    ///
    /// Simple connectivity is reported when the complex is connected with
    /// `χ = 1` and trivial `H₁(GF(2))`; this is a homological test and does
    /// not detect perfect fundamental groups.
    pub fn check_structure(&self) -> StructureReport {
        let connected = self.is_connected();
        let betti1 = if connected {
            self.num_edges() + 1 - self.num_vertices() - self.boundary_rank_gf2()
        } else {
            usize::MAX
        };
        let euler = self.euler_characteristic();
        let free_edges = self.free_edges();
        StructureReport {
            vertices: self.num_vertices(),
            edges: self.num_edges(),
            faces: self.num_faces(),
            euler_characteristic: euler,
            connected,
            first_betti_gf2: betti1,
            simply_connected: connected && euler == 1 && betti1 == 0,
            free_edges,
        }
    }
}

pub(crate) fn ordered_pair(u: VertexId, w: VertexId) -> (VertexId, VertexId) {
    if u <= w {
        (u, w)
    } else {
        (w, u)
    }
}

fn bfs_depths(neighbors: &[Vec<VertexId>], root: VertexId) -> Vec<u32> {
    let mut depth = vec![u32::MAX; neighbors.len()];
    let mut queue = VecDeque::from([root]);
    depth[root as usize] = 0;
    while let Some(v) = queue.pop_front() {
        for &w in &neighbors[v as usize] {
            if depth[w as usize] == u32::MAX {
                depth[w as usize] = depth[v as usize] + 1;
                queue.push_back(w);
            }
        }
    }
    depth
}
