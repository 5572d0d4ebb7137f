use std::collections::{BTreeSet, HashMap, HashSet};

use crate::complex::{triangle_shape, DiskCondition, TriComplex, VertexId};

use super::links::{catalogue, cycle, Bipartite};
use super::{hop_depths, renumber_bfs, EdgeOrders, GenError, GenSpec};

/// Truncated complex in which every edge of types `(i,j)` has
/// `orders(i,j)` faces, developed star by star in breadth-first order
/// without identifications beyond those forced by shared faces.
pub fn gen_regular(dc: DiskCondition, orders: EdgeOrders, radius: u32) -> Result<TriComplex, GenError> {
    develop(&GenSpec::regular(dc, orders, radius))
}

fn other_types(t: u8) -> (u8, u8) {
    match t {
        1 => (2, 3),
        2 => (1, 3),
        _ => (1, 2),
    }
}

/// The target link of type-`t` vertices: part `A` holds the nodes of the
/// smaller other type.
fn target_link(spec: &GenSpec, t: u8) -> Result<Bipartite, GenError> {
    let (j, l) = other_types(t);
    let n = spec.dc.n_of(t);
    let degrees = (spec.edge_orders.get(t, j), spec.edge_orders.get(t, l));
    let link = match spec.link_cycles.get(&t) {
        Some(&len) => {
            if degrees != (2, 2) {
                return Err(GenError::OverrideOrders { vertex_type: t });
            }
            if (len as usize) < n as usize {
                return Err(GenError::GirthViolation {
                    vertex_type: t,
                    girth: len as usize,
                    n,
                });
            }
            if len % 2 == 1 {
                return Err(GenError::UnsupportedLink {
                    vertex_type: t,
                    n,
                    degrees,
                });
            }
            cycle(len as usize)
        }
        None => catalogue(n, degrees.0, degrees.1).ok_or(GenError::UnsupportedLink {
            vertex_type: t,
            n,
            degrees,
        })?,
    };
    let girth = link.girth().unwrap_or(usize::MAX);
    if girth < n as usize {
        return Err(GenError::GirthViolation {
            vertex_type: t,
            girth,
            n,
        });
    }
    Ok(link)
}

struct Target {
    graph: Bipartite,
    /// Node type of each target node (`A` nodes first).
    node_type: Vec<u8>,
    adj: Vec<Vec<usize>>,
    edge_set: HashSet<(usize, usize)>,
}

impl Target {
    fn new(graph: Bipartite, t: u8) -> Self {
        let (j, l) = other_types(t);
        let size = graph.a + graph.b;
        let node_type = (0..size).map(|i| if i < graph.a { j } else { l }).collect();
        let mut adj = vec![Vec::new(); size];
        let mut edge_set = HashSet::new();
        for &(i, k) in &graph.edges {
            let k = graph.a + k;
            adj[i].push(k);
            adj[k].push(i);
            edge_set.insert((i, k));
            edge_set.insert((k, i));
        }
        Target {
            graph,
            node_type,
            adj,
            edge_set,
        }
    }

    fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.graph.edges.iter().map(|&(i, k)| (i, self.graph.a + k))
    }
}

#[derive(Default)]
struct Development {
    types: Vec<u8>,
    nbrs: Vec<BTreeSet<usize>>,
    vertex_faces: Vec<Vec<usize>>,
    faces: Vec<[usize; 3]>,
    edge_faces: HashMap<(usize, usize), u32>,
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl Development {
    fn add_vertex(&mut self, t: u8) -> usize {
        self.types.push(t);
        self.nbrs.push(BTreeSet::new());
        self.vertex_faces.push(Vec::new());
        self.types.len() - 1
    }

    fn add_face(&mut self, f: [usize; 3]) {
        let id = self.faces.len();
        self.faces.push(f);
        for i in 0..3 {
            self.vertex_faces[f[i]].push(id);
            for j in i + 1..3 {
                self.nbrs[f[i]].insert(f[j]);
                self.nbrs[f[j]].insert(f[i]);
                *self.edge_faces.entry(key(f[i], f[j])).or_default() += 1;
            }
        }
    }

    fn face_count(&self, a: usize, b: usize) -> u32 {
        self.edge_faces.get(&key(a, b)).copied().unwrap_or(0)
    }

    fn partial_link(&self, x: usize) -> (Vec<usize>, HashSet<(usize, usize)>) {
        let nodes: Vec<usize> = self.nbrs[x].iter().copied().collect();
        let mut edges = HashSet::new();
        for &f in &self.vertex_faces[x] {
            let o: Vec<usize> = self.faces[f].iter().copied().filter(|&v| v != x).collect();
            edges.insert((o[0], o[1]));
            edges.insert((o[1], o[0]));
        }
        (nodes, edges)
    }

    /// Adds the missing part of the star of `x`.
    fn complete(&mut self, x: usize, target: &Target, orders: &EdgeOrders) -> Result<(), GenError> {
        let (nodes, pedges) = self.partial_link(x);
        let order = search_order(&nodes, &pedges);
        let mut image: HashMap<usize, usize> = HashMap::new();
        let mut used = vec![false; target.node_type.len()];
        let ok = self.embed(&order, 0, &pedges, target, orders, &mut image, &mut used);
        if !ok {
            return Err(GenError::Development { vertex: x });
        }
        let mut pre: Vec<Option<usize>> = vec![None; target.node_type.len()];
        for (&v, &i) in &image {
            pre[i] = Some(v);
        }
        for (i, slot) in pre.iter_mut().enumerate() {
            if slot.is_none() {
                *slot = Some(self.add_vertex(target.node_type[i]));
            }
        }
        for (i, k) in target.edges() {
            let (a, b) = (pre[i].unwrap(), pre[k].unwrap());
            if !pedges.contains(&(a, b)) {
                self.add_face([x, a, b]);
            }
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn embed(
        &self,
        order: &[usize],
        depth: usize,
        pedges: &HashSet<(usize, usize)>,
        target: &Target,
        orders: &EdgeOrders,
        image: &mut HashMap<usize, usize>,
        used: &mut [bool],
    ) -> bool {
        if depth == order.len() {
            return self.capacity_ok(image, pedges, target, orders);
        }
        let v = order[depth];
        let anchor = order[..depth]
            .iter()
            .find(|&&w| pedges.contains(&(v, w)))
            .map(|w| image[w]);
        let candidates: Vec<usize> = match anchor {
            Some(i) => target.adj[i].clone(),
            None => (0..target.node_type.len()).collect(),
        };
        for c in candidates {
            if used[c] || target.node_type[c] != self.types[v] {
                continue;
            }
            let consistent = order[..depth].iter().all(|&w| {
                !pedges.contains(&(v, w)) || target.edge_set.contains(&(c, image[&w]))
            });
            if !consistent {
                continue;
            }
            image.insert(v, c);
            used[c] = true;
            if self.embed(order, depth + 1, pedges, target, orders, image, used) {
                return true;
            }
            image.remove(&v);
            used[c] = false;
        }
        false
    }

    /// New faces between already existing vertices must not exceed the
    /// order of their shared edge.
    fn capacity_ok(
        &self,
        image: &HashMap<usize, usize>,
        pedges: &HashSet<(usize, usize)>,
        target: &Target,
        orders: &EdgeOrders,
    ) -> bool {
        let mut pre = vec![None; target.node_type.len()];
        for (&v, &i) in image {
            pre[i] = Some(v);
        }
        target.edges().all(|(i, k)| match (pre[i], pre[k]) {
            (Some(a), Some(b)) if !pedges.contains(&(a, b)) => {
                self.face_count(a, b) < orders.get(self.types[a], self.types[b])
            }
            _ => true,
        })
    }
}

/// Breadth-first order through the partial link so that each node after
/// the first in its component has an earlier neighbour.
fn search_order(nodes: &[usize], pedges: &HashSet<(usize, usize)>) -> Vec<usize> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for &s in nodes {
        if !seen.insert(s) {
            continue;
        }
        let mut head = out.len();
        out.push(s);
        while head < out.len() {
            let v = out[head];
            head += 1;
            for &w in nodes {
                if pedges.contains(&(v, w)) && seen.insert(w) {
                    out.push(w);
                }
            }
        }
    }
    out
}

pub(super) fn develop(spec: &GenSpec) -> Result<TriComplex, GenError> {
    spec.edge_orders.check()?;
    triangle_shape(&spec.dc)?;
    let targets: Vec<Target> = (1..=3)
        .map(|t| target_link(spec, t).map(|g| Target::new(g, t)))
        .collect::<Result<_, _>>()?;

    let mut dev = Development::default();
    dev.add_vertex(1);
    let mut done: Vec<bool> = Vec::new();
    loop {
        done.resize(dev.types.len(), false);
        let adj: Vec<Vec<usize>> = dev.nbrs.iter().map(|s| s.iter().copied().collect()).collect();
        let depth = hop_depths(&adj, 0);
        let next = (0..dev.types.len())
            .filter(|&v| !done[v] && depth[v] < spec.radius)
            .min_by_key(|&v| (depth[v], v));
        let Some(x) = next else { break };
        let t = dev.types[x];
        dev.complete(x, &targets[t as usize - 1], &spec.edge_orders)?;
        done[x] = true;
    }

    let adj: Vec<Vec<usize>> = dev.nbrs.iter().map(|s| s.iter().copied().collect()).collect();
    let kept = vec![true; dev.types.len()];
    let order = renumber_bfs(&adj, &dev.types, &kept, 0);
    let mut new_id = vec![0 as VertexId; order.len()];
    for (i, &old) in order.iter().enumerate() {
        new_id[old] = i as VertexId;
    }
    let types = order.iter().map(|&o| dev.types[o]).collect();
    let mut faces: Vec<[VertexId; 3]> = dev.faces.iter().map(|f| f.map(|v| new_id[v])).collect();
    faces.sort_unstable();
    Ok(TriComplex::new(spec.dc, types, faces, spec.radius)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::check_link_condition;
    use crate::generators::gen_seifert;

    /// Type-preserving isomorphism test by breadth-first extension from
    /// vertex 0 to every candidate image.
    pub(crate) fn isomorphic(x: &TriComplex, y: &TriComplex) -> bool {
        if (x.num_vertices(), x.num_edges(), x.num_faces())
            != (y.num_vertices(), y.num_edges(), y.num_faces())
        {
            return false;
        }
        let fy: HashSet<[VertexId; 3]> = y.faces().iter().copied().collect();
        (0..y.num_vertices() as VertexId)
            .filter(|&c| y.vertex_type(c) == x.vertex_type(0))
            .any(|c| {
                let mut map = vec![None; x.num_vertices()];
                map[0] = Some(c);
                extend(x, y, &fy, &mut map)
            })
    }

    fn extend(x: &TriComplex, y: &TriComplex, fy: &HashSet<[VertexId; 3]>, map: &mut Vec<Option<VertexId>>) -> bool {
        let Some(v) = (0..x.num_vertices()).find(|&v| {
            map[v].is_none() && x.neighbors(v as VertexId).iter().any(|&w| map[w as usize].is_some())
        }) else {
            return map.iter().all(|m| m.is_some())
                && x.faces().iter().all(|f| {
                    let mut g = f.map(|v| map[v as usize].unwrap());
                    g.sort_by_key(|&v| y.vertex_type(v));
                    fy.contains(&g)
                });
        };
        let anchor = x.neighbors(v as VertexId).iter().find(|&&w| map[w as usize].is_some()).unwrap();
        let cands: Vec<VertexId> = y.neighbors(map[*anchor as usize].unwrap()).to_vec();
        for c in cands {
            if y.vertex_type(c) != x.vertex_type(v as VertexId) || map.contains(&Some(c)) {
                continue;
            }
            let ok = x.neighbors(v as VertexId).iter().all(|&w| match map[w as usize] {
                Some(i) => y.edge_id(c, i).is_some(),
                None => true,
            });
            if !ok {
                continue;
            }
            map[v] = Some(c);
            if extend(x, y, fy, map) {
                return true;
            }
            map[v] = None;
        }
        false
    }

    #[test]
    fn orders_two_reproduce_the_tessellation() {
        for (dc, r) in [((6, 6, 6), 3), ((4, 8, 8), 3), ((4, 6, 12), 3)] {
            let dc = DiskCondition::new(dc.0, dc.1, dc.2);
            let a = gen_regular(dc, EdgeOrders::seifert(), r).unwrap();
            let b = gen_seifert(dc, r).unwrap();
            assert!(isomorphic(&a, &b), "{dc}");
        }
    }

    #[test]
    fn order_three_hexagonal() {
        let dc = DiskCondition::new(6, 6, 6);
        let cx = gen_regular(dc, EdgeOrders::uniform(3), 2).unwrap();
        let rep = cx.check_structure();
        assert!(rep.simply_connected && rep.free_edges.is_empty(), "{rep:?}");
        for e in 0..cx.num_edges() as u32 {
            let [a, b] = cx.edge(e);
            if cx.is_interior(a) || cx.is_interior(b) {
                assert_eq!(cx.edge_faces(e).len(), 3);
            }
        }
        for v in 0..cx.num_vertices() as VertexId {
            if cx.is_interior(v) {
                let lv = check_link_condition(&cx, v).unwrap();
                assert!(lv.passes);
                assert_eq!(cx.vertex_faces(v).len(), 21);
            }
        }
    }

    #[test]
    fn girth_violation_is_reported() {
        let mut spec = GenSpec::regular(DiskCondition::new(6, 6, 6), EdgeOrders::seifert(), 2);
        spec.link_cycles.insert(1, 4);
        assert!(matches!(
            develop(&spec),
            Err(GenError::GirthViolation { vertex_type: 1, girth: 4, n: 6 })
        ));
    }

    #[test]
    fn larger_cone_angle_is_allowed() {
        let mut spec = GenSpec::regular(DiskCondition::new(6, 6, 6), EdgeOrders::seifert(), 2);
        spec.link_cycles.insert(1, 8);
        let cx = develop(&spec).unwrap();
        assert_eq!(cx.vertex_faces(0).len(), 8);
        assert!(check_link_condition(&cx, 0).unwrap().passes);
    }

    #[test]
    fn unsupported_and_bad_orders() {
        let dc = DiskCondition::new(4, 6, 12);
        assert!(matches!(
            gen_regular(dc, EdgeOrders::uniform(3), 1),
            Err(GenError::UnsupportedLink { .. })
        ));
        assert!(matches!(
            gen_regular(dc, EdgeOrders { o12: 1, o13: 2, o23: 2 }, 1),
            Err(GenError::OrderTooSmall { .. })
        ));
    }
}
