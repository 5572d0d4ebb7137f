//! Finite bipartite graphs used as vertex links.

use crate::complex::LinkGraph;

/// A bipartite graph with parts `A = 0..a` and `B = 0..b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartite {
    pub a: usize,
    pub b: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Bipartite {
    pub fn to_link_graph(&self) -> LinkGraph {
        let a = self.a as u32;
        LinkGraph::new(self.edges.iter().map(|&(i, j)| (i as u32, a + j as u32)))
    }

    pub fn girth(&self) -> Option<usize> {
        self.to_link_graph().girth().map(|(g, _)| g)
    }

    fn swapped(self) -> Self {
        Bipartite {
            a: self.b,
            b: self.a,
            edges: self.edges.into_iter().map(|(i, j)| (j, i)).collect(),
        }
    }

    /// Incidence graph of a simple graph: `A` = edges (degree 2), `B` = vertices.
    fn subdivision(nv: usize, edges: &[(usize, usize)]) -> Self {
        let mut out = Vec::new();
        for (e, &(u, w)) in edges.iter().enumerate() {
            out.push((e, u));
            out.push((e, w));
        }
        Bipartite {
            a: edges.len(),
            b: nv,
            edges: out,
        }
    }

    fn as_simple_graph(&self) -> (usize, Vec<(usize, usize)>) {
        (
            self.a + self.b,
            self.edges.iter().map(|&(i, j)| (i, self.a + j)).collect(),
        )
    }
}

pub fn cycle(len: usize) -> Bipartite {
    debug_assert!(len % 2 == 0 && len >= 4);
    let h = len / 2;
    let mut edges = Vec::new();
    for i in 0..h {
        edges.push((i, i));
        edges.push(((i + 1) % h, i));
    }
    Bipartite { a: h, b: h, edges }
}

pub fn complete_bipartite(a: usize, b: usize) -> Bipartite {
    let edges = (0..a).flat_map(|i| (0..b).map(move |j| (i, j))).collect();
    Bipartite { a, b, edges }
}

/// Point/line incidence of the Fano plane.
pub fn heawood() -> Bipartite {
    let mut edges = Vec::new();
    for line in 0..7 {
        for off in [0, 1, 3] {
            edges.push(((line + off) % 7, line));
        }
    }
    edges.sort_unstable();
    Bipartite { a: 7, b: 7, edges }
}

/// Duads versus synthemes of a 6-set.
pub fn tutte_coxeter() -> Bipartite {
    let duads: Vec<(usize, usize)> = (0..6)
        .flat_map(|i| (i + 1..6).map(move |j| (i, j)))
        .collect();
    let mut synthemes = Vec::new();
    for (x, &p) in duads.iter().enumerate() {
        for (y, &q) in duads.iter().enumerate().skip(x + 1) {
            for (z, &r) in duads.iter().enumerate().skip(y + 1) {
                let mut pts = [p.0, p.1, q.0, q.1, r.0, r.1];
                pts.sort_unstable();
                if pts == [0, 1, 2, 3, 4, 5] {
                    synthemes.push([x, y, z]);
                }
            }
        }
    }
    let edges = synthemes
        .iter()
        .enumerate()
        .flat_map(|(s, ds)| ds.iter().map(move |&d| (d, s)))
        .collect();
    Bipartite {
        a: duads.len(),
        b: synthemes.len(),
        edges,
    }
}

fn complete_graph(n: usize) -> (usize, Vec<(usize, usize)>) {
    (n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect())
}

/// A link for a vertex with angle parameter `n` whose `A` nodes have
/// degree `deg_a` and `B` nodes degree `deg_b`, with girth at least `n`.
/// Returns `None` outside the catalogue.
pub fn catalogue(n: u32, deg_a: u32, deg_b: u32) -> Option<Bipartite> {
    match (n, deg_a, deg_b) {
        (n, 2, 2) if n % 2 == 0 && n >= 4 => Some(cycle(n as usize)),
        (4, a, b) => Some(complete_bipartite(b as usize, a as usize)),
        (6, 3, 3) => Some(heawood()),
        (8, 3, 3) => Some(tutte_coxeter()),
        (n, 2, b) if b >= 3 => {
            let (nv, edges) = match n {
                6 => complete_graph(b as usize + 1),
                8 => complete_bipartite(b as usize, b as usize).as_simple_graph(),
                12 if b == 3 => heawood().as_simple_graph(),
                _ => return None,
            };
            Some(Bipartite::subdivision(nv, &edges))
        }
        (n, a, 2) if a >= 3 => catalogue(n, 2, a).map(Bipartite::swapped),
        _ => None,
    }
}
