//! Geometry JSON, CSV traces and SVG outlines.

use std::fmt::Write as _;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::EvolutionTrace;
use crate::geometry::{ConvexPolygon, Point2, RoundedSet};

/// `{"kernel": [[x, y], ...], "radius": s}` with counterclockwise vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometryJson {
    pub kernel: Vec<[f64; 2]>,
    #[serde(default)]
    pub radius: f64,
}

impl TryFrom<&GeometryJson> for RoundedSet {
    type Error = Error;

    fn try_from(g: &GeometryJson) -> Result<Self> {
        let kernel = ConvexPolygon::new(g.kernel.iter().map(|&p| Point2::from(p)).collect())?;
        if kernel.is_empty() {
            return Ok(RoundedSet::empty());
        }
        RoundedSet::new(kernel, g.radius)
    }
}

impl From<&RoundedSet> for GeometryJson {
    fn from(s: &RoundedSet) -> Self {
        GeometryJson { kernel: s.kernel().vertices().iter().map(|p| [p.x, p.y]).collect(), radius: s.radius() }
    }
}

pub fn geometry_from_json(text: &str) -> Result<RoundedSet> {
    let g: GeometryJson = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    RoundedSet::try_from(&g)
}

pub fn geometry_to_json(s: &RoundedSet) -> String {
    serde_json::to_string(&GeometryJson::from(s)).expect("geometry serializes")
}

/// Writes `t,a,perimeter,regime,rho` rows followed by event comments.
pub fn write_trace_csv<W: Write>(trace: &EvolutionTrace, cost: Option<f64>, mut out: W) -> io::Result<()> {
    writeln!(out, "t,a,perimeter,regime,rho")?;
    for s in trace.samples() {
        writeln!(out, "{:.16e},{:.16e},{:.16e},{},{:.16e}", s.t, s.a, s.perimeter, s.regime, s.rho)?;
    }
    if let Some(ts) = trace.t_star() {
        writeln!(out, "# T_star={ts:.16e}")?;
    }
    if let Some(td) = trace.t_dagger() {
        writeln!(out, "# T_dagger={td:.16e}")?;
    }
    if let Some(j) = cost {
        writeln!(out, "# J={j:.16e}")?;
    }
    Ok(())
}

/// SVG path of the boundary: translated kernel edges joined by arcs.
pub fn outline_path(s: &RoundedSet) -> String {
    let mut d = String::new();
    if s.is_empty() {
        return d;
    }
    let v = s.kernel().vertices();
    let r = s.radius();
    if v.len() == 1 {
        let c = v[0];
        let _ = write!(
            d,
            "M {} {} A {r} {r} 0 1 1 {} {} A {r} {r} 0 1 1 {} {} Z",
            c.x + r,
            c.y,
            c.x - r,
            c.y,
            c.x + r,
            c.y
        );
        return d;
    }
    let normals = s.kernel().edge_normals();
    let n = normals.len();
    // Vertex i joins edge i−1 and edge i; for a segment both edges share endpoints.
    let vertex = |i: usize| if v.len() == 2 { v[i % 2] } else { v[i % n] };
    for i in 0..n {
        let p = vertex(i);
        let from = p + normals[(i + n - 1) % n] * r;
        let to = p + normals[i] * r;
        if i == 0 {
            let _ = write!(d, "M {} {}", from.x, from.y);
        } else {
            let _ = write!(d, " L {} {}", from.x, from.y);
        }
        if r > 0.0 {
            let _ = write!(d, " A {r} {r} 0 0 1 {} {}", to.x, to.y);
        }
    }
    d.push_str(" Z");
    d
}

/// Stand-alone SVG with the domain and one outline per `(t, set)` pair.
pub fn svg_document(domain: &RoundedSet, frames: &[(f64, RoundedSet)]) -> String {
    let (lo, hi) = bounds(domain, frames);
    let pad = 0.05 * (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
    let (w, h) = (hi.x - lo.x + 2.0 * pad, hi.y - lo.y + 2.0 * pad);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {w} {h}" width="800" height="{}">"#,
        lo.x - pad,
        -(hi.y + pad),
        (800.0 * h / w).round()
    );
    let stroke = 0.002 * w.max(h);
    let _ = writeln!(out, r#"<g transform="scale(1,-1)" fill="none" stroke-width="{stroke}">"#);
    let _ = writeln!(out, r#"<path d="{}" stroke="black"/>"#, outline_path(domain));
    for (t, s) in frames {
        if !s.is_empty() {
            let _ = writeln!(out, r#"<path d="{}" stroke="crimson"><title>t={t}</title></path>"#, outline_path(s));
        }
    }
    out.push_str("</g>\n</svg>\n");
    out
}

fn bounds(domain: &RoundedSet, frames: &[(f64, RoundedSet)]) -> (Point2, Point2) {
    let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for s in std::iter::once(domain).chain(frames.iter().map(|(_, s)| s)) {
        for p in s.kernel().vertices() {
            lo = Point2::new(lo.x.min(p.x - s.radius()), lo.y.min(p.y - s.radius()));
            hi = Point2::new(hi.x.max(p.x + s.radius()), hi.y.max(p.y + s.radius()));
        }
    }
    if !lo.is_finite() {
        return (Point2::ORIGIN, Point2::new(1.0, 1.0));
    }
    (lo, hi)
}
