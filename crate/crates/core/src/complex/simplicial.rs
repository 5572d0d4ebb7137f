use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{ordered_pair, FaceId, TriComplex, VertexId};

/// A set of simplices of a fixed ambient complex. Not necessarily closed
/// under taking faces (open stars are not).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexSet {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<(VertexId, VertexId)>,
    pub faces: BTreeSet<FaceId>,
}

impl SimplexSet {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.edges.is_empty() && self.faces.is_empty()
    }

    pub fn len(&self) -> usize {
        self.vertices.len() + self.edges.len() + self.faces.len()
    }

    /// Every simplex of `cx` whose vertices all lie in `verts`.
    pub fn full_subcomplex(cx: &TriComplex, verts: &BTreeSet<VertexId>) -> Self {
        let edges = cx
            .edges()
            .iter()
            .filter(|[a, b]| verts.contains(a) && verts.contains(b))
            .map(|&[a, b]| (a, b))
            .collect();
        let faces = (0..cx.num_faces() as FaceId)
            .filter(|&f| cx.face(f).iter().all(|v| verts.contains(v)))
            .collect();
        SimplexSet {
            vertices: verts.clone(),
            edges,
            faces,
        }
    }

    /// Closed star: all faces through `v` with their faces, plus `v`.
    pub fn star(cx: &TriComplex, v: VertexId) -> Self {
        let mut s = SimplexSet::default();
        s.vertices.insert(v);
        for &w in cx.neighbors(v) {
            s.vertices.insert(w);
            s.edges.insert(ordered_pair(v, w));
        }
        for &f in cx.vertex_faces(v) {
            let [a, b, c] = cx.face(f);
            s.faces.insert(f);
            for (x, y) in [(a, b), (a, c), (b, c)] {
                s.edges.insert(ordered_pair(x, y));
            }
        }
        s
    }

    /// Simplices having `v` as a vertex.
    pub fn open_star(cx: &TriComplex, v: VertexId) -> Self {
        let mut s = SimplexSet::default();
        s.vertices.insert(v);
        for &w in cx.neighbors(v) {
            s.edges.insert(ordered_pair(v, w));
        }
        s.faces.extend(cx.vertex_faces(v).iter().copied());
        s
    }

    /// `st(v) \ st°(v)`.
    pub fn link(cx: &TriComplex, v: VertexId) -> Self {
        Self::star(cx, v).difference(&Self::open_star(cx, v))
    }

    /// `st(x) ∩ C`.
    pub fn adj(cx: &TriComplex, c: &Self, x: VertexId) -> Self {
        Self::star(cx, x).intersection(c)
    }

    /// `st°(x) ∩ C`.
    pub fn adj_open(cx: &TriComplex, c: &Self, x: VertexId) -> Self {
        Self::open_star(cx, x).intersection(c)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        SimplexSet {
            vertices: self.vertices.intersection(&other.vertices).copied().collect(),
            edges: self.edges.intersection(&other.edges).copied().collect(),
            faces: self.faces.intersection(&other.faces).copied().collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        SimplexSet {
            vertices: self.vertices.union(&other.vertices).copied().collect(),
            edges: self.edges.union(&other.edges).copied().collect(),
            faces: self.faces.union(&other.faces).copied().collect(),
        }
    }

    pub fn difference(&self, other: &Self) -> Self {
        SimplexSet {
            vertices: self.vertices.difference(&other.vertices).copied().collect(),
            edges: self.edges.difference(&other.edges).copied().collect(),
            faces: self.faces.difference(&other.faces).copied().collect(),
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.vertices.is_subset(&other.vertices)
            && self.edges.is_subset(&other.edges)
            && self.faces.is_subset(&other.faces)
    }

    /// Closed under taking faces.
    pub fn is_subcomplex(&self, cx: &TriComplex) -> bool {
        self.edges
            .iter()
            .all(|(a, b)| self.vertices.contains(a) && self.vertices.contains(b))
            && self.faces.iter().all(|&f| {
                let [a, b, c] = cx.face(f);
                [(a, b), (a, c), (b, c)]
                    .iter()
                    .all(|&(x, y)| self.edges.contains(&ordered_pair(x, y)))
            })
    }

    /// Smallest subcomplex containing the set.
    pub fn closure(&self, cx: &TriComplex) -> Self {
        let mut s = self.clone();
        for &f in &self.faces {
            let [a, b, c] = cx.face(f);
            for (x, y) in [(a, b), (a, c), (b, c)] {
                s.edges.insert(ordered_pair(x, y));
            }
        }
        for &(a, b) in &s.edges.clone() {
            s.vertices.insert(a);
            s.vertices.insert(b);
        }
        s
    }

    /// Number of connected components of the vertex/edge graph; isolated
    /// vertices count as components.
    pub fn components(&self) -> usize {
        let mut parent: BTreeMap<VertexId, VertexId> =
            self.vertices.iter().map(|&v| (v, v)).collect();
        fn find(p: &mut BTreeMap<VertexId, VertexId>, mut x: VertexId) -> VertexId {
            while p[&x] != x {
                let up = p[&p[&x]];
                p.insert(x, up);
                x = up;
            }
            x
        }
        let mut count = parent.len();
        for &(a, b) in &self.edges {
            if !parent.contains_key(&a) || !parent.contains_key(&b) {
                continue;
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent.insert(ra, rb);
                count -= 1;
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.components() == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::tests::hexagon_star;

    #[test]
    fn star_link_open_star() {
        let cx = hexagon_star();
        let st = SimplexSet::star(&cx, 0);
        assert_eq!((st.vertices.len(), st.edges.len(), st.faces.len()), (7, 12, 6));
        let open = SimplexSet::open_star(&cx, 0);
        assert_eq!(open.len(), 1 + 6 + 6);
        assert!(!open.is_subcomplex(&cx));
        let lk = SimplexSet::link(&cx, 0);
        assert_eq!((lk.vertices.len(), lk.edges.len(), lk.faces.len()), (6, 6, 0));
        assert!(lk.is_subcomplex(&cx) && lk.is_connected());
        assert_eq!(open.closure(&cx), st);
        let all = SimplexSet::full_subcomplex(&cx, &(0..7).collect());
        assert_eq!(SimplexSet::adj(&cx, &all, 2), SimplexSet::star(&cx, 2));
        assert_eq!(SimplexSet::adj_open(&cx, &all, 2), SimplexSet::open_star(&cx, 2));
    }

    #[test]
    fn full_subcomplex_of_rim() {
        let cx = hexagon_star();
        let rim: BTreeSet<_> = (1..7).collect();
        assert_eq!(SimplexSet::full_subcomplex(&cx, &rim), SimplexSet::link(&cx, 0));
        let two: BTreeSet<_> = [1, 4].into_iter().collect();
        assert_eq!(SimplexSet::full_subcomplex(&cx, &two).components(), 2);
    }
}
