//! SVG pictures of meshes and eigenfunction level sets.

use std::fmt::Write;

use steklov_core::fem2d::TriMesh;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 20.0;

// Blue to red.
fn ramp(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let r = (255.0 * t).round() as u8;
    let b = (255.0 * (1.0 - t)).round() as u8;
    format!("#{r:02x}40{b:02x}")
}

/// Renders `mesh`; with `values` (one per vertex) triangles are colored by
/// their mean value and `levels` level sets are drawn.
pub fn render(mesh: &TriMesh, values: Option<&[f64]>, levels: usize) -> String {
    let v = mesh.vertices();
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in v {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let scale = (SIZE - 2.0 * MARGIN) / (hi[0] - lo[0]).max(hi[1] - lo[1]).max(f64::MIN_POSITIVE);
    let xy = |p: [f64; 2]| (MARGIN + (p[0] - lo[0]) * scale, SIZE - MARGIN - (p[1] - lo[1]) * scale);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let range = values.map(|u| {
        let min = u.iter().copied().fold(f64::INFINITY, f64::min);
        let max = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (min, (max - min).max(f64::MIN_POSITIVE))
    });

    let _ = writeln!(out, r##"<g stroke="#555" stroke-width="0.3">"##);
    for t in mesh.triangles() {
        let fill = match (values, range) {
            (Some(u), Some((min, span))) => ramp(((u[t[0]] + u[t[1]] + u[t[2]]) / 3.0 - min) / span),
            _ => "none".to_string(),
        };
        let (a, b, c) = (xy(v[t[0]]), xy(v[t[1]]), xy(v[t[2]]));
        let _ = writeln!(
            out,
            r#"<path d="M{:.2} {:.2}L{:.2} {:.2}L{:.2} {:.2}Z" fill="{fill}"/>"#,
            a.0, a.1, b.0, b.1, c.0, c.1
        );
    }
    let _ = writeln!(out, "</g>");

    if let (Some(u), Some((min, span))) = (values, range) {
        let mut d = String::new();
        for l in 1..=levels {
            let c = min + span * l as f64 / (levels + 1) as f64;
            for t in mesh.triangles() {
                let mut cut = Vec::with_capacity(2);
                for (i, j) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                    let (ui, uj) = (u[i] - c, u[j] - c);
                    if (ui < 0.0) != (uj < 0.0) {
                        let s = ui / (ui - uj);
                        cut.push(xy([v[i][0] + s * (v[j][0] - v[i][0]), v[i][1] + s * (v[j][1] - v[i][1])]));
                    }
                }
                if cut.len() == 2 {
                    let _ = write!(d, "M{:.2} {:.2}L{:.2} {:.2}", cut[0].0, cut[0].1, cut[1].0, cut[1].1);
                }
            }
        }
        let _ = writeln!(out, r#"<path d="{d}" stroke="black" stroke-width="1" fill="none"/>"#);
    }

    let mut d = String::new();
    for e in mesh.boundary_edges() {
        let (a, b) = (xy(v[e[0]]), xy(v[e[1]]));
        let _ = write!(d, "M{:.2} {:.2}L{:.2} {:.2}", a.0, a.1, b.0, b.1);
    }
    let _ = writeln!(out, r#"<path d="{d}" stroke="black" stroke-width="2" fill="none"/>"#);
    out.push_str("</svg>\n");
    out
}
