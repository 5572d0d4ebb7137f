//! Metric and ball invariants checked on random inputs.

use std::sync::OnceLock;

use proptest::prelude::*;

use dualcx::balls::simplicial_ball;
use dualcx::complex::{DiskCondition, TriComplex, VertexId};
use dualcx::exactnum::{rat, QField, RadicalSum};
use dualcx::generators::{gen_seifert_patch, SeifertPatch};
use dualcx::geodesics::{cmp_distances, vertex_distance};

fn patch() -> &'static (SeifertPatch, Vec<VertexId>) {
    static P: OnceLock<(SeifertPatch, Vec<VertexId>)> = OnceLock::new();
    P.get_or_init(|| {
        let p = gen_seifert_patch(DiskCondition::new(4, 6, 12), 5).unwrap();
        // well inside the patch so geodesics never touch the frontier
        let o = &p.coords[0];
        let near = (0..p.complex.num_vertices() as VertexId)
            .filter(|&v| p.coords[v as usize].dist_sq(o).cmp_value(&QField::from_int(4)).is_le())
            .collect();
        (p, near)
    })
}

fn d(cx: &TriComplex, a: VertexId, b: VertexId) -> RadicalSum {
    vertex_distance(cx, a, b).unwrap().length
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn distance_is_a_metric(i in 0usize..64, j in 0usize..64, k in 0usize..64) {
        let (p, near) = patch();
        let cx = &p.complex;
        let (a, b, c) = (near[i % near.len()], near[j % near.len()], near[k % near.len()]);
        let ab = d(cx, a, b);
        prop_assert_eq!(&ab, &d(cx, b, a));
        prop_assert_eq!(ab.is_zero(), a == b);
        let via = &ab + &d(cx, b, c);
        prop_assert!(cmp_distances(&d(cx, a, c), &via).unwrap().is_le());
    }

    #[test]
    fn balls_grow_with_the_radius(n1 in 1i64..120, n2 in 1i64..120) {
        let (p, _) = patch();
        let (lo, hi) = (n1.min(n2), n1.max(n2));
        let r = |n| RadicalSum::from_field(QField::from_rational(rat(n, 40)));
        let small = simplicial_ball(&p.complex, 0, &r(lo)).unwrap();
        let large = simplicial_ball(&p.complex, 0, &r(hi)).unwrap();
        prop_assert!(small.vertices.is_subset(&large.vertices));
        prop_assert!(small.edges.is_subset(&large.edges));
        prop_assert!(small.faces.is_subset(&large.faces));
        prop_assert!(small.vertices.contains(&0));
    }
}
