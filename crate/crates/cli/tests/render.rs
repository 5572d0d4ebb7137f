use dualcx::balls::{field_for, BallView};
use dualcx::complex::DiskCondition;
use dualcx::exactnum::{rat, QField, RadicalSum};
use dualcx::generators::gen_seifert;
use dualcx_cli::render::{draw_faces, render_svg, RenderOptions};

fn frac(n: i64, d: i64) -> RadicalSum {
    RadicalSum::from_field(QField::from_rational(rat(n, d)))
}

#[test]
fn arcs_per_face_match_the_face_types() {
    for (dc, radii) in [
        ((6, 6, 6), vec![frac(1, 2), frac(9, 10), frac(3, 2), frac(19, 10)]),
        ((4, 8, 8), vec![frac(1, 2), frac(6, 5), frac(3, 2), frac(21, 10)]),
        ((4, 6, 12), vec![frac(1, 2), frac(6, 5), frac(5, 2)]),
    ] {
        let cx = gen_seifert(DiskCondition::new(dc.0, dc.1, dc.2), 3).unwrap();
        for r in radii {
            let field = field_for(&cx, 0, &(&r + &RadicalSum::from_int(2))).unwrap();
            let view = BallView::new(&cx, &field, &r).unwrap();
            let drawn = draw_faces(&cx, &field, &r, &RenderOptions::default());
            for fd in &drawn {
                let ty = view.face_types[&fd.face];
                assert_eq!(ty.arcs(), fd.arcs.len(), "{dc:?} r={r} face {} {ty:?}", fd.face);
            }
            // every face the sphere meets is drawn
            let met = view.face_types.values().filter(|t| t.arcs() > 0).count();
            assert_eq!(met, drawn.iter().filter(|fd| !fd.arcs.is_empty()).count());
        }
    }
}

#[test]
fn svg_is_deterministic_and_labelled() {
    let cx = gen_seifert(DiskCondition::new(6, 6, 6), 3).unwrap();
    let r = frac(3, 2);
    let field = field_for(&cx, 0, &(&r + &RadicalSum::from_int(2))).unwrap();
    let view = BallView::new(&cx, &field, &r).unwrap();
    let a = render_svg(&cx, &field, &view, &RenderOptions::default());
    let b = render_svg(&cx, &field, &view, &RenderOptions::default());
    assert_eq!(a, b);
    assert!(a.starts_with("<svg"));
    assert!(a.trim_end().ends_with("</svg>"));
    assert!(a.contains("radius 3/2 = 1.5"));
    let arcs = a.matches(r#"class="arc""#).count();
    let expected: usize = view.face_types.values().map(|t| t.arcs()).sum();
    assert_eq!(arcs, expected);
}
