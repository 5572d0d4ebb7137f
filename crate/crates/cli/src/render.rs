//! SVG picture of a ball: the faces near the centre laid out in the plane
//! face by face, and the level sphere drawn in each face as arcs of circles
//! around the developed images of the centre.

use std::collections::{BTreeMap, VecDeque};
use std::f64::consts::TAU;
use std::fmt::Write;

use dualcx::balls::{BallView, FaceIntersectionType};
use dualcx::complex::{FaceId, TriComplex};
use dualcx::exactnum::RadicalSum;
use dualcx::geodesics::{place_face, DistanceField};

type P = (f64, f64);

const SAMPLES: usize = 1440;

#[derive(Clone, Debug)]
pub struct RenderOptions {
    /// Pixels per unit length.
    pub scale: f64,
    /// Faces are drawn while their nearest vertex is within this much of
    /// the radius.
    pub reach: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { scale: 60.0, reach: 2.0 }
    }
}

/// One drawn face and the arcs found in it.
#[derive(Clone, Debug)]
pub struct FaceDrawing {
    pub face: FaceId,
    pub corners: [P; 3],
    /// Per arc: centre, radius, start and end angle (counterclockwise).
    pub arcs: Vec<(P, f64, f64, f64)>,
}

fn dist(a: P, b: P) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

fn affine(from: &[P; 3], to: &[P; 3], p: P) -> P {
    let (ux, uy) = (from[1].0 - from[0].0, from[1].1 - from[0].1);
    let (vx, vy) = (from[2].0 - from[0].0, from[2].1 - from[0].1);
    let det = ux * vy - uy * vx;
    let (px, py) = (p.0 - from[0].0, p.1 - from[0].1);
    let a = (px * vy - py * vx) / det;
    let b = (ux * py - uy * px) / det;
    (
        to[0].0 + a * (to[1].0 - to[0].0) + b * (to[2].0 - to[0].0),
        to[0].1 + a * (to[1].1 - to[0].1) + b * (to[2].1 - to[0].1),
    )
}

fn inside_triangle(t: &[P; 3], p: P) -> bool {
    let side = |a: P, b: P| (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
    let s = [side(t[0], t[1]), side(t[1], t[2]), side(t[2], t[0])];
    let tol = 1e-9;
    s.iter().all(|&x| x >= -tol) || s.iter().all(|&x| x <= tol)
}

/// Apex of the triangle on `a b` with the given side lengths, on the side
/// of `ab` away from `away`.
fn apex(a: P, b: P, la: f64, lb: f64, away: P) -> P {
    let d = dist(a, b);
    let x = (la * la - lb * lb + d * d) / (2.0 * d);
    let h = (la * la - x * x).max(0.0).sqrt();
    let (ex, ey) = ((b.0 - a.0) / d, (b.1 - a.1) / d);
    let base = (a.0 + x * ex, a.1 + x * ey);
    let side = ex * (away.1 - a.1) - ey * (away.0 - a.0);
    let s = if side > 0.0 { -1.0 } else { 1.0 };
    (base.0 - s * h * ey, base.1 + s * h * ex)
}

/// Lays out the faces near the centre, breadth first across edges.
pub fn layout(cx: &TriComplex, field: &DistanceField, r: f64, reach: f64) -> BTreeMap<FaceId, [P; 3]> {
    let v = field.source;
    let near = |f: FaceId| {
        cx.face(f)
            .iter()
            .map(|&w| field.approx(w).unwrap_or(f64::INFINITY))
            .fold(f64::INFINITY, f64::min)
            <= r + reach
    };
    let mut placed = BTreeMap::new();
    let Some(&first) = cx.vertex_faces(v).first() else {
        return placed;
    };
    let canon = place_face(cx, first).map(|p| p.to_f64());
    let o = canon[cx.face(first).iter().position(|&w| w == v).unwrap()];
    placed.insert(first, canon.map(|p| (p.0 - o.0, p.1 - o.1)));
    let mut queue = VecDeque::from([first]);
    while let Some(f) = queue.pop_front() {
        let vs = cx.face(f);
        let ps = placed[&f];
        let at = |w| ps[vs.iter().position(|&x| x == w).unwrap()];
        for e in cx.face_edges(f) {
            let [a, b] = cx.edge(e);
            let far = at(cx.third_vertex(f, a, b));
            for &g in cx.edge_faces(e) {
                if placed.contains_key(&g) || !near(g) {
                    continue;
                }
                let c = cx.third_vertex(g, a, b);
                let pc = apex(
                    at(a),
                    at(b),
                    cx.edge_len_sq(a, c).to_f64().sqrt(),
                    cx.edge_len_sq(b, c).to_f64().sqrt(),
                    far,
                );
                let gv = cx.face(g);
                let pos = gv.map(|w| if w == a { at(a) } else if w == b { at(b) } else { pc });
                placed.insert(g, pos);
                queue.push_back(g);
            }
        }
    }
    placed
}

/// Angular runs of the circle `(c, rho)` where `ok` holds.
fn runs(c: P, rho: f64, ok: impl Fn(P) -> bool) -> Vec<(f64, f64)> {
    let pt = |t: f64| (c.0 + rho * t.cos(), c.1 + rho * t.sin());
    let step = TAU / SAMPLES as f64;
    let flags: Vec<bool> = (0..SAMPLES).map(|k| ok(pt(k as f64 * step))).collect();
    if flags.iter().all(|&b| b) {
        return vec![(0.0, TAU)];
    }
    let Some(start) = flags.iter().position(|&b| !b) else {
        return Vec::new();
    };
    // boundary between an angle where ok fails and one where it holds
    let refine = |mut bad: f64, mut good: f64| {
        for _ in 0..40 {
            let mid = (bad + good) / 2.0;
            if ok(pt(mid)) {
                good = mid;
            } else {
                bad = mid;
            }
        }
        good
    };
    let mut out = Vec::new();
    let mut k = start;
    for _ in 0..SAMPLES {
        let next = (k + 1) % SAMPLES;
        if !flags[k] && flags[next] {
            let mut j = next;
            while flags[(j + 1) % SAMPLES] {
                j = (j + 1) % SAMPLES;
            }
            let t0 = k as f64 * step;
            let mut t1 = next as f64 * step;
            if t1 < t0 {
                t1 += TAU;
            }
            let mut u0 = j as f64 * step;
            if u0 < t1 {
                u0 += TAU;
            }
            let a = refine(t0, t1);
            let b = refine(u0 + step, u0);
            let shift = if a >= TAU { TAU } else { 0.0 };
            out.push((a - shift, b - shift));
        }
        k = next;
    }
    out
}

/// Faces with their level-sphere arcs.
pub fn draw_faces(cx: &TriComplex, field: &DistanceField, r: &RadicalSum, opts: &RenderOptions) -> Vec<FaceDrawing> {
    let rf = r.to_f64();
    let mut out = Vec::new();
    for (f, corners) in layout(cx, field, rf, opts.reach) {
        let canon = place_face(cx, f).map(|p| p.to_f64());
        let sources: Vec<(P, f64)> = field
            .face_sources(cx, f)
            .into_iter()
            .map(|(x, y, d)| (affine(&canon, &corners, (x, y)), d))
            .collect();
        // a source no closer than another source's value at its centre never
        // wins; it would only touch the other circle
        let dominated = |j: usize| {
            let (cj, dj) = sources[j];
            sources
                .iter()
                .enumerate()
                .any(|(i, &(ci, di))| i != j && di + dist(ci, cj) <= dj + 1e-9 && (i < j || di < dj - 1e-9))
        };
        let sources: Vec<(P, f64)> = (0..sources.len()).filter(|&j| !dominated(j)).map(|j| sources[j]).collect();
        let mut arcs = Vec::new();
        for (i, &(c, d)) in sources.iter().enumerate() {
            let rho = rf - d;
            if rho <= 1e-12 {
                continue;
            }
            let ok = |p: P| {
                inside_triangle(&corners, p)
                    && sources
                        .iter()
                        .enumerate()
                        .all(|(j, &(cj, dj))| j == i || dj + dist(p, cj) >= rf - 1e-9)
            };
            for (a, b) in runs(c, rho, ok) {
                arcs.push((c, rho, a, b));
            }
        }
        out.push(FaceDrawing { face: f, corners, arcs });
    }
    out
}

/// The SVG document for `view`.
pub fn render_svg(cx: &TriComplex, field: &DistanceField, view: &BallView, opts: &RenderOptions) -> String {
    let faces = draw_faces(cx, field, &view.radius, opts);
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for fd in &faces {
        for p in fd.corners {
            x0 = x0.min(p.0);
            x1 = x1.max(p.0);
            y0 = y0.min(p.1);
            y1 = y1.max(p.1);
        }
    }
    if faces.is_empty() {
        (x0, y0, x1, y1) = (-1.0, -1.0, 1.0, 1.0);
    }
    let s = opts.scale;
    let pad = 20.0;
    let sx = |x: f64| (x - x0) * s + pad;
    let sy = |y: f64| (y1 - y) * s + pad;
    let (w, h) = ((x1 - x0) * s + 2.0 * pad, (y1 - y0) * s + 2.0 * pad);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.1}" height="{h:.1}" viewBox="0 0 {w:.1} {h:.1}">"#
    );
    let _ = writeln!(
        svg,
        "<!-- ball around vertex {} of radius {} = {} -->",
        view.center,
        view.radius,
        view.radius.to_decimal(12)
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for fd in &faces {
        let ty = view.face_types.get(&fd.face);
        let (label, fill) = match ty {
            Some(FaceIntersectionType::Full) => ("Full".to_string(), "#cfe0f5"),
            Some(FaceIntersectionType::Empty) => ("Empty".to_string(), "#ffffff"),
            Some(t) => (format!("{t:?}"), "#e9f1fb"),
            None => ("Critical".to_string(), "#f4f4f4"),
        };
        let pts: Vec<String> = fd.corners.iter().map(|p| format!("{:.3},{:.3}", sx(p.0), sy(p.1))).collect();
        let _ = writeln!(
            svg,
            r##"<g class="face" data-face="{}" data-type="{label}" data-arcs="{}">"##,
            fd.face,
            fd.arcs.len()
        );
        let _ = writeln!(
            svg,
            r##"  <polygon points="{}" fill="{fill}" stroke="#888" stroke-width="0.5"/>"##,
            pts.join(" ")
        );
        for &(c, rho, a, b) in &fd.arcs {
            let p = |t: f64| (sx(c.0 + rho * t.cos()), sy(c.1 + rho * t.sin()));
            let (pa, pb) = (p(a), p(b));
            let large = u8::from(b - a > std::f64::consts::PI);
            let rr = rho * s;
            let _ = writeln!(
                svg,
                r##"  <path class="arc" d="M {:.3} {:.3} A {rr:.3} {rr:.3} 0 {large} 0 {:.3} {:.3}" fill="none" stroke="#d62728" stroke-width="1.5"/>"##,
                pa.0, pa.1, pb.0, pb.1
            );
        }
        let _ = writeln!(svg, "</g>");
    }
    let mut dots = BTreeMap::new();
    for fd in &faces {
        for (w, p) in cx.face(fd.face).iter().zip(fd.corners) {
            dots.entry(*w).or_insert(p);
        }
    }
    for (w, p) in dots {
        let colour = if w == view.center {
            "#000000"
        } else if view.partition.on.contains(&w) {
            "#d62728"
        } else if view.partition.inside.contains(&w) {
            "#1f5fbf"
        } else {
            "#999999"
        };
        let rad = if w == view.center { 4.0 } else { 2.5 };
        let _ = writeln!(
            svg,
            r#"<circle class="vertex" data-vertex="{w}" cx="{:.3}" cy="{:.3}" r="{rad}" fill="{colour}"/>"#,
            sx(p.0),
            sy(p.1)
        );
    }
    svg.push_str("</svg>\n");
    svg
}
