//! Deterministic construction of truncated complexes: Seifert tessellations
//! of the plane and tree-like developments with prescribed edge orders.

pub mod links;
mod regular;
mod seifert;

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{ComplexError, DiskCondition, TriComplex};

pub use regular::gen_regular;
pub use seifert::{gen_seifert, gen_seifert_patch, SeifertPatch};

#[derive(Debug, Error)]
pub enum GenError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("edge order {order} for types ({i},{j}) must be at least 2")]
    OrderTooSmall { i: u8, j: u8, order: u32 },
    #[error("Seifert mode requires every edge order to be 2")]
    SeifertOrders,
    #[error("link of type-{vertex_type} vertices has girth {girth} < n = {n}")]
    GirthViolation { vertex_type: u8, girth: usize, n: u32 },
    #[error("no link in the catalogue for type-{vertex_type} vertices with n = {n} and degrees {degrees:?}")]
    UnsupportedLink {
        vertex_type: u8,
        n: u32,
        degrees: (u32, u32),
    },
    #[error("link override for type {vertex_type} needs orders 2 on its edges")]
    OverrideOrders { vertex_type: u8 },
    #[error("development stalled: partial link of vertex {vertex} does not embed")]
    Development { vertex: usize },
}

/// Number of faces around each edge, keyed by the types of its endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeOrders {
    pub o12: u32,
    pub o13: u32,
    pub o23: u32,
}

impl EdgeOrders {
    pub fn uniform(k: u32) -> Self {
        EdgeOrders {
            o12: k,
            o13: k,
            o23: k,
        }
    }

    pub fn seifert() -> Self {
        Self::uniform(2)
    }

    pub fn get(&self, i: u8, j: u8) -> u32 {
        match (i.min(j), i.max(j)) {
            (1, 2) => self.o12,
            (1, 3) => self.o13,
            (2, 3) => self.o23,
            _ => panic!("invalid type pair ({i},{j})"),
        }
    }

    pub fn set(&mut self, i: u8, j: u8, k: u32) {
        match (i.min(j), i.max(j)) {
            (1, 2) => self.o12 = k,
            (1, 3) => self.o13 = k,
            (2, 3) => self.o23 = k,
            _ => panic!("invalid type pair ({i},{j})"),
        }
    }

    fn check(&self) -> Result<(), GenError> {
        for (i, j) in [(1, 2), (1, 3), (2, 3)] {
            let order = self.get(i, j);
            if order < 2 {
                return Err(GenError::OrderTooSmall { i, j, order });
            }
        }
        Ok(())
    }
}

impl fmt::Display for EdgeOrders {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1,2:{} 1,3:{} 2,3:{}", self.o12, self.o13, self.o23)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GenMode {
    Seifert,
    RegularTree,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub dc: DiskCondition,
    pub edge_orders: EdgeOrders,
    pub radius: u32,
    pub mode: GenMode,
    /// Replace the link of a vertex type by a cycle of the given length.
    #[serde(default)]
    pub link_cycles: BTreeMap<u8, u32>,
}

impl GenSpec {
    pub fn seifert(dc: DiskCondition, radius: u32) -> Self {
        GenSpec {
            dc,
            edge_orders: EdgeOrders::seifert(),
            radius,
            mode: GenMode::Seifert,
            link_cycles: BTreeMap::new(),
        }
    }

    pub fn regular(dc: DiskCondition, edge_orders: EdgeOrders, radius: u32) -> Self {
        GenSpec {
            dc,
            edge_orders,
            radius,
            mode: GenMode::RegularTree,
            link_cycles: BTreeMap::new(),
        }
    }
}

pub fn generate(spec: &GenSpec) -> Result<TriComplex, GenError> {
    match spec.mode {
        GenMode::Seifert => {
            if spec.edge_orders != EdgeOrders::seifert() || !spec.link_cycles.is_empty() {
                return Err(GenError::SeifertOrders);
            }
            gen_seifert(spec.dc, spec.radius)
        }
        GenMode::RegularTree => regular::develop(spec),
    }
}

pub(crate) fn face_adjacency(n: usize, faces: &[[usize; 3]]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for f in faces {
        for i in 0..3 {
            for j in 0..3 {
                if i != j && !adj[f[i]].contains(&f[j]) {
                    adj[f[i]].push(f[j]);
                }
            }
        }
    }
    adj
}

pub(crate) fn hop_depths(adj: &[Vec<usize>], root: usize) -> Vec<u32> {
    let mut depth = vec![u32::MAX; adj.len()];
    depth[root] = 0;
    let mut q = VecDeque::from([root]);
    while let Some(v) = q.pop_front() {
        for &w in &adj[v] {
            if depth[w] == u32::MAX {
                depth[w] = depth[v] + 1;
                q.push_back(w);
            }
        }
    }
    depth
}

/// Breadth-first order from `root` over kept vertices; unvisited neighbours
/// are enqueued by type, then by their old index.
pub(crate) fn renumber_bfs(adj: &[Vec<usize>], types: &[u8], kept: &[bool], root: usize) -> Vec<usize> {
    let mut seen = vec![false; adj.len()];
    let mut order = vec![root];
    seen[root] = true;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        let mut next: Vec<usize> = adj[v]
            .iter()
            .copied()
            .filter(|&w| kept[w] && !seen[w])
            .collect();
        next.sort_unstable_by_key(|&w| (types[w], w));
        for w in next {
            seen[w] = true;
            order.push(w);
        }
    }
    order
}
