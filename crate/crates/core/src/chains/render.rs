use std::f64::consts::TAU;
use std::fmt::Write;

use super::cover::ChainCover;
use crate::num::Coord;

/// Drawing parameters: `t` maps linearly to radius, `r` to angle `2πr`.
#[derive(Clone, Debug, PartialEq)]
pub struct RenderStyle {
    pub size: f64,
    pub inner: f64,
    pub outer: f64,
    /// Points per link edge along the angle.
    pub arc_steps: usize,
}

impl Default for RenderStyle {
    fn default() -> Self {
        Self { size: 800.0, inner: 120.0, outer: 380.0, arc_steps: 16 }
    }
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn fmt3(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

/// SVG document with one `<g>` layer per level and one polygon per link.
pub fn render_chains<T: Coord>(levels: &[ChainCover<T>], style: &RenderStyle) -> String {
    let c = style.size / 2.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" viewBox="0 0 {s} {s}">"#,
        s = fmt3(style.size)
    );
    for (k, chain) in levels.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let kind = if chain.is_closed() { "closed" } else { "open" };
        let _ = writeln!(
            out,
            r#"  <g id="level-{}" class="{kind}" fill="{color}" fill-opacity="0.25" stroke="{color}" stroke-width="1">"#,
            k + 1
        );
        for (i, link) in chain.links().iter().enumerate() {
            let (t0, t1) = (link.t.0.to_f64(), link.t.1.to_f64());
            let (r0, r1) = (link.r.0.to_f64(), link.r.1.to_f64());
            let radius = |t: f64| style.inner + t * (style.outer - style.inner);
            let n = style.arc_steps.max(1);
            let mut pts = Vec::with_capacity(2 * n + 2);
            let mut arc = |t: f64, forward: bool| {
                for s in 0..=n {
                    let u = if forward { s } else { n - s } as f64 / n as f64;
                    let angle = TAU * (r0 + u * (r1 - r0));
                    let rad = radius(t);
                    pts.push(format!("{},{}", fmt3(c + rad * angle.cos()), fmt3(c - rad * angle.sin())));
                }
            };
            arc(t0, true);
            arc(t1, false);
            let _ = writeln!(out, r#"    <polygon id="level-{}-link-{}" points="{}"/>"#, k + 1, i + 1, pts.join(" "));
        }
        let _ = writeln!(out, "  </g>");
    }
    out.push_str("</svg>\n");
    out
}
