//! SVG rendering of rank-3 diagrams.
//!
//! Wall supports are cut with the unit sphere and drawn after stereographic
//! projection centred at `(1,1,1)/sqrt(3)`. Incoming walls become circles and
//! outgoing walls arcs. Walls outside every supplied chamber are drawn thick.
//! Geometry stays exact until the final projection, and all coordinates are
//! printed with fixed precision, so the output is byte-for-byte reproducible.

use num_traits::ToPrimitive;
use scatterlab::cones::Cone;
use scatterlab::csd::ScatteringDiagram;
use scatterlab::{Error, Result, Q};
use std::collections::BTreeMap;
use std::fmt::Write;

/// Rendering options.
pub struct RenderSpec<'a> {
    pub diagram: &'a ScatteringDiagram,
    /// Pixel size of the square canvas.
    pub size: f64,
    /// Projected points farther than this from the centre are clipped.
    pub clip: f64,
    /// Chambers used to mark walls outside the reachable region.
    pub chambers: Option<&'a [Cone]>,
}

type P3 = [f64; 3];

fn to_f(v: &[Q]) -> P3 {
    let f = |x: &Q| x.to_f64().unwrap_or(0.0);
    [f(&v[0]), f(&v[1]), f(&v[2])]
}

fn norm(v: P3) -> P3 {
    let l = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / l, v[1] / l, v[2] / l]
}

fn lerp(a: P3, b: P3, t: f64) -> P3 {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])]
}

fn neg(a: P3) -> P3 {
    [-a[0], -a[1], -a[2]]
}

fn dot(a: P3, b: P3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Stereographic projection centred at `c = (1,1,1)/sqrt(3)`, from the antipode `-c`.
fn project(u: P3) -> Option<(f64, f64)> {
    let s = 1.0 / 3f64.sqrt();
    let c = [s, s, s];
    let a = norm([1.0, -1.0, 0.0]);
    let b = norm([1.0, 1.0, -2.0]);
    let den = 1.0 + dot(u, c);
    if den < 1e-9 {
        return None;
    }
    Some((dot(u, a) / den, dot(u, b) / den))
}

/// Great-circle pieces covering the spherical image of a two-dimensional cone,
/// as chains of directions that are consecutive within the cone.
fn chains(c: &Cone) -> Vec<Vec<P3>> {
    let lin: Vec<P3> = c.lineality().iter().map(|l| norm(to_f(&scatterlab::cones::ivec_to_q(l)))).collect();
    let rays: Vec<P3> = c.rays().iter().map(|r| norm(to_f(&scatterlab::cones::ivec_to_q(r)))).collect();
    match (lin.len(), rays.len()) {
        (0, 2) => vec![vec![rays[0], rays[1]]],
        (1, 1) => vec![vec![lin[0], rays[0], neg(lin[0])]],
        (2, 0) => vec![vec![lin[0], lin[1], neg(lin[0]), neg(lin[1]), lin[0]]],
        _ => Vec::new(),
    }
}

fn sample(chain: &[P3], steps: usize) -> Vec<P3> {
    let mut out = Vec::new();
    for w in chain.windows(2) {
        for i in 0..steps {
            out.push(norm(lerp(w[0], w[1], i as f64 / steps as f64)));
        }
    }
    if let Some(last) = chain.last() {
        out.push(*last);
    }
    out
}

fn fmt_n(n: &[i64]) -> String {
    let parts: Vec<String> = n.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Renders the diagram as an SVG 1.1 document.
pub fn render_svg(spec: &RenderSpec) -> Result<String> {
    let d = spec.diagram;
    if d.rank() != 3 {
        return Err(Error::Invalid(format!("rendering needs a rank-3 diagram, got rank {}", d.rank())));
    }
    let data = d.data();
    let half = spec.size / 2.0;
    let scale = half / spec.clip;
    let to_px = |(x, y): (f64, f64)| (half + x * scale, half - y * scale);
    let mut body = String::new();
    let mut labels: BTreeMap<Vec<i64>, (f64, f64)> = BTreeMap::new();
    let avoid = d.hyperplanes();
    for (wi, w) in d.walls.iter().enumerate() {
        let incoming = w.is_incoming(data);
        let thick = match spec.chambers {
            Some(ch) => {
                let z = w.support.general_point(wi as u64 + 7, &avoid)?;
                !ch.iter().any(|c| c.contains(&z))
            }
            None => false,
        };
        let (class, width) = match (incoming, thick) {
            (_, true) => ("unreachable", 3.0),
            (true, false) => ("incoming", 1.2),
            (false, false) => ("outgoing", 1.0),
        };
        for chain in chains(&w.support) {
            let pts = sample(&chain, 48);
            let mut path = String::new();
            let mut pen_down = false;
            let mut mid: Option<(f64, f64)> = None;
            // Spread labels along their curves so that circles through a common point do not collide.
            let spot = w.normal.iter().enumerate().map(|(i, x)| (i as i64 + 2) * x).sum::<i64>().rem_euclid(7);
            let target = pts.len() * (2 + spot as usize) / 11;
            for (i, u) in pts.iter().enumerate() {
                match project(*u) {
                    Some(p) if p.0.hypot(p.1) <= spec.clip => {
                        let (x, y) = to_px(p);
                        let _ = write!(path, "{}{:.2},{:.2} ", if pen_down { "L" } else { "M" }, x, y);
                        pen_down = true;
                        if i == target || mid.is_none() {
                            mid = Some((x, y));
                        }
                    }
                    _ => pen_down = false,
                }
            }
            if path.is_empty() {
                continue;
            }
            let _ = writeln!(
                body,
                r#"  <path class="{class}" data-normal="{}" d="{}" fill="none" stroke="{}" stroke-width="{width:.1}"/>"#,
                fmt_n(&w.normal),
                path.trim_end(),
                if incoming { "#1f4e9c" } else { "#222222" },
            );
            if let Some(m) = mid {
                labels.entry(w.normal.clone()).or_insert(m);
            }
        }
    }
    for (n, (x, y)) in &labels {
        let _ = writeln!(
            body,
            r#"  <text class="label" x="{:.2}" y="{:.2}" font-size="10" font-family="sans-serif">{}</text>"#,
            x + 3.0,
            y - 3.0,
            fmt_n(n)
        );
    }
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{0:.0}" height="{0:.0}" viewBox="0 0 {0:.0} {0:.0}">"#,
        spec.size
    );
    let _ = writeln!(out, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    out.push_str(&body);
    out.push_str("</svg>\n");
    Ok(out)
}
