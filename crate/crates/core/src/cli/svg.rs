//! SVG drawing of a 2-dimensional norm ball with an exceptional set marked.
//! Every coordinate is an integer, so the output is byte-stable.

use std::fmt::Write;

use num_integer::Integer;

use crate::error::Result;
use crate::homology::SurfaceClass;
use crate::norm_ball::NormBall;
use crate::surgery_verdict::{ExceptionalSet, MemberReason};

const MARGIN: i64 = 40;
const HALF_WIDTH: i64 = 240;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Draws the level set `x = N` of the norm, for the smallest `N` that makes
/// every polygon vertex integral and puts every marked class inside or on it.
pub fn ball_svg(title: &str, ball: &NormBall, set: Option<&ExceptionalSet>) -> Result<String> {
    let corners = ball.corners()?;
    let norms: Vec<i64> = corners.iter().map(|c| ball.norm(c)).collect::<Result<_>>()?;
    let step = norms.iter().fold(1i64, |l, &n| l.lcm(&n));
    let classes: Vec<&SurfaceClass> = set.map(|e| e.members.iter().map(|m| &m.class).collect()).unwrap_or_default();
    let reach = classes.iter().map(|c| ball.norm(c)).collect::<Result<Vec<_>>>()?.into_iter().max().unwrap_or(0).max(1);
    let level = step * Integer::div_ceil(&reach, &step);
    let vertices: Vec<[i64; 2]> = corners.iter().zip(&norms).map(|(c, &n)| c.xy().map(|x| x * (level / n))).collect();
    let extent = vertices.iter().copied().chain(classes.iter().map(|c| c.xy())).flat_map(|v| v.map(i64::abs)).max().unwrap_or(1).max(1);
    let scale = (HALF_WIDTH / extent).max(1);
    let size = 2 * (MARGIN + extent * scale);
    let px = |v: [i64; 2]| (MARGIN + (v[0] + extent) * scale, MARGIN + (extent - v[1]) * scale);

    let mut out = String::new();
    let w = &mut out;
    writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(w, r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#).unwrap();
    writeln!(w, r#"  <text x="{}" y="{}" font-size="14">{} (x = {level})</text>"#, MARGIN / 2, MARGIN / 2, escape(title)).unwrap();
    let (ox, oy) = px([0, 0]);
    let (lo, hi) = (MARGIN / 2, size - MARGIN / 2);
    writeln!(w, r##"  <path d="M {lo} {oy} L {hi} {oy} M {ox} {lo} L {ox} {hi}" stroke="#bbbbbb" fill="none"/>"##).unwrap();
    let mut d = String::new();
    for (k, v) in vertices.iter().enumerate() {
        let (x, y) = px(*v);
        write!(d, "{}{x} {y} ", if k == 0 { "M " } else { "L " }).unwrap();
    }
    d.push('Z');
    writeln!(w, r##"  <path id="ball" d="{d}" stroke="#000000" fill="none" stroke-width="2"/>"##).unwrap();
    for c in &corners {
        let (x, y) = px(c.xy());
        writeln!(w, r##"  <path d="M {ox} {oy} L {x} {y}" stroke="#cc0000" stroke-dasharray="4 4" fill="none"/>"##).unwrap();
    }
    if let Some(e) = set {
        for m in &e.members {
            let (x, y) = px(m.class.xy());
            let (r, colour) = match m.reason {
                MemberReason::Corner => (6, "#cc0000"),
                MemberReason::Bisector => (5, "#0044cc"),
                MemberReason::ParallelogramInterior => (4, "#ee8800"),
                MemberReason::Combination { .. } => (3, "#008844"),
            };
            writeln!(w, r#"  <circle cx="{x}" cy="{y}" r="{r}" fill="{colour}"/>"#).unwrap();
        }
    }
    for c in &corners {
        let (x, y) = px(c.xy());
        writeln!(w, r#"  <text x="{}" y="{}" font-size="11">{}</text>"#, x + 6, y - 6, escape(&c.to_string())).unwrap();
    }
    writeln!(w, "</svg>").unwrap();
    Ok(out)
}
