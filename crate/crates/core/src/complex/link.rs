use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use super::{ComplexError, TriComplex, VertexId};

/// Link of a vertex: nodes are its neighbours, one edge per incident face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkGraph {
    nodes: Vec<VertexId>,
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkVerdict {
    pub vertex: VertexId,
    pub n: u32,
    /// `None` when the link is a forest.
    pub girth: Option<usize>,
    /// Angular length of the shortest cycle in units of π/12.
    pub girth_angle_units: Option<u32>,
    pub passes: bool,
    /// A shortest cycle, as link nodes in order.
    pub witness: Vec<VertexId>,
}

impl LinkGraph {
    pub fn new(edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Self {
        let mut index = BTreeMap::new();
        let mut pairs = Vec::new();
        for (a, b) in edges {
            for x in [a, b] {
                let k = index.len();
                index.entry(x).or_insert(k);
            }
            pairs.push((index[&a], index[&b]));
        }
        let mut nodes = vec![0; index.len()];
        for (&v, &i) in &index {
            nodes[i] = v;
        }
        let mut adj = vec![Vec::new(); nodes.len()];
        for &(i, j) in &pairs {
            adj[i].push(j);
            adj[j].push(i);
        }
        LinkGraph {
            nodes,
            adj,
            edge_count: pairs.len(),
        }
    }

    /// The cycle graph on `0..len`.
    pub fn from_cycle(len: u32) -> Self {
        Self::new((0..len).map(|i| (i, (i + 1) % len)))
    }

    pub fn nodes(&self) -> &[VertexId] {
        &self.nodes
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return true;
        }
        let d = self.bfs(0).0;
        d.iter().all(|x| x.is_some())
    }

    fn bfs(&self, root: usize) -> (Vec<Option<usize>>, Vec<usize>) {
        let mut dist = vec![None; self.nodes.len()];
        let mut parent = vec![usize::MAX; self.nodes.len()];
        dist[root] = Some(0);
        let mut q = VecDeque::from([root]);
        while let Some(u) = q.pop_front() {
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(dist[u].unwrap() + 1);
                    parent[w] = u;
                    q.push_back(w);
                }
            }
        }
        (dist, parent)
    }

    /// Length of a shortest cycle with one such cycle.
    pub fn girth(&self) -> Option<(usize, Vec<VertexId>)> {
        let mut best: Option<(usize, Vec<VertexId>)> = None;
        for root in 0..self.nodes.len() {
            let (dist, parent) = self.bfs(root);
            for u in 0..self.nodes.len() {
                let Some(du) = dist[u] else { continue };
                for &w in &self.adj[u] {
                    if w == parent[u] || parent[w] == u {
                        continue;
                    }
                    let dw = dist[w].unwrap();
                    let len = du + dw + 1;
                    if best.as_ref().is_some_and(|(b, _)| *b <= len) {
                        continue;
                    }
                    let climb = |mut x: usize| {
                        let mut path = vec![x];
                        while x != root {
                            x = parent[x];
                            path.push(x);
                        }
                        path
                    };
                    let mut cycle = climb(u);
                    cycle.reverse();
                    let mut back = climb(w);
                    back.pop();
                    cycle.extend(back);
                    best = Some((len, cycle.into_iter().map(|i| self.nodes[i]).collect()));
                }
            }
        }
        best
    }

    /// Longest shortest-path distance between nodes, `None` if disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let mut diam = 0;
        for r in 0..self.nodes.len() {
            for d in self.bfs(r).0 {
                diam = diam.max(d?);
            }
        }
        Some(diam)
    }
}

pub fn link_graph(cx: &TriComplex, v: VertexId) -> Result<LinkGraph, ComplexError> {
    cx.require_interior(v)?;
    Ok(raw_link_graph(cx, v))
}

/// Link graph without the margin check; partial for boundary vertices.
pub(crate) fn raw_link_graph(cx: &TriComplex, v: VertexId) -> LinkGraph {
    LinkGraph::new(cx.vertex_faces(v).iter().map(|&f| {
        let others: Vec<VertexId> = cx.face(f).into_iter().filter(|&x| x != v).collect();
        (others[0], others[1])
    }))
}

/// Each link edge spans `2π/n_v`, so the link is CAT(1) exactly when its
/// girth is at least `n_v`.
pub fn check_link_condition(cx: &TriComplex, v: VertexId) -> Result<LinkVerdict, ComplexError> {
    Ok(verdict_for(&link_graph(cx, v)?, v, cx.vertex_n(v)))
}

pub(crate) fn verdict_for(g: &LinkGraph, vertex: VertexId, n: u32) -> LinkVerdict {
    match g.girth() {
        Some((girth, witness)) => LinkVerdict {
            vertex,
            n,
            girth: Some(girth),
            girth_angle_units: Some(girth as u32 * (super::FULL_TURN_UNITS / n)),
            passes: girth >= n as usize,
            witness,
        },
        None => LinkVerdict {
            vertex,
            n,
            girth: None,
            girth_angle_units: None,
            passes: true,
            witness: Vec::new(),
        },
    }
}

impl LinkVerdict {
    pub fn for_graph(g: &LinkGraph, vertex: VertexId, n: u32) -> Self {
        verdict_for(g, vertex, n)
    }
}
