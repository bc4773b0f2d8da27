//! CSV and SVG renderings of diagrams and of the separating-set atlas.
//! Numbers are written with 17 significant digits so output is byte-stable.

use std::fmt::Write as _;

use crate::bifurcation::{self, BifurcationDiagram};
use crate::error::Result;
use crate::model::ModelParams;
use crate::separating::{self, CurveId};

pub const DIAGRAM_HEADER: &str = "kind,id,param,h,k";
pub const ATLAS_HEADER: &str = "curve,chart,x,y";
pub const SVG_SIZE: f64 = 1000.0;

/// Samples per arc in diagram output.
pub const ARC_SAMPLES: usize = 64;

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// A named polyline.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub id: String,
    pub points: Vec<(f64, f64)>,
}

/// Arcs of the diagram as (h, k) polylines, in diagram order.
pub fn diagram_polylines(d: &BifurcationDiagram, m: &ModelParams) -> Result<Vec<Polyline>> {
    d.arcs
        .iter()
        .map(|arc| {
            Ok(Polyline {
                id: arc.id(),
                points: bifurcation::sample_arc(arc, d.orbit, ARC_SAMPLES, m)?,
            })
        })
        .collect()
}

/// Rows `point,<family>,<z>,h,k` for singular points, then
/// `arc,<arc id>,<t>,h,k` along each arc.
pub fn diagram_csv(d: &BifurcationDiagram, m: &ModelParams) -> Result<String> {
    let mut out = String::new();
    out.push_str(DIAGRAM_HEADER);
    out.push('\n');
    for p in &d.singular_points {
        let z = p.z.map(num).unwrap_or_default();
        let _ = writeln!(out, "point,{},{},{},{}", p.family, z, num(p.h), num(p.k));
    }
    for arc in &d.arcs {
        let pts = bifurcation::sample_arc(arc, d.orbit, ARC_SAMPLES, m)?;
        let n = pts.len();
        for (i, (h, k)) in pts.into_iter().enumerate() {
            let t = arc.t0 + (arc.t1 - arc.t0) * i as f64 / (n - 1) as f64;
            let _ = writeln!(out, "arc,{},{},{},{}", arc.id(), num(t), num(h), num(k));
        }
    }
    Ok(out)
}

/// Window of the atlas in (u, v).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub u0: f64,
    pub u1: f64,
    pub v0: f64,
    pub v1: f64,
}

impl Window {
    /// [0, 4 tau^2] x [0, 16 tau^2].
    pub fn default_for(m: &ModelParams) -> Window {
        let t2 = m.tau2();
        Window {
            u0: 0.0,
            u1: 4.0 * t2,
            v0: 0.0,
            v1: 16.0 * t2,
        }
    }

    pub fn contains(&self, u: f64, v: f64) -> bool {
        u >= self.u0 && u <= self.u1 && v >= self.v0 && v <= self.v1
    }
}

/// One atlas piece: the in-theta arc of a curve clipped to the window.
#[derive(Debug, Clone, PartialEq)]
pub struct AtlasPiece {
    pub curve: CurveId,
    pub chart: &'static str,
    pub points: Vec<(f64, f64)>,
}

/// In-theta arcs of all curves, sampled and clipped to the window. A curve
/// leaving and re-entering the window gives several pieces.
pub fn atlas(window: Window, samples: usize, m: &ModelParams) -> Result<Vec<AtlasPiece>> {
    m.require_compact()?;
    let mut out = Vec::new();
    for c in separating::registry(m) {
        let Some((lo, hi)) = c.in_theta else { continue };
        let cap = 4.0 * window.u1.abs().max(window.v1.abs()).max(m.tau2());
        let mut piece: Vec<(f64, f64)> = Vec::new();
        for x in separating::arc_samples(lo, hi, cap, samples.max(2)) {
            // undefined samples are rounding noise at arc ends; skip them
            match separating::curve_point_uv(&c, x, m) {
                None => {}
                Some((u, v)) if window.contains(u, v) => piece.push((u, v)),
                Some(_) => {
                    if piece.len() > 1 {
                        out.push(AtlasPiece {
                            curve: c.id,
                            chart: c.chart.name(),
                            points: std::mem::take(&mut piece),
                        });
                    }
                    piece.clear();
                }
            }
        }
        if piece.len() > 1 {
            out.push(AtlasPiece {
                curve: c.id,
                chart: c.chart.name(),
                points: piece,
            });
        }
    }
    Ok(out)
}

/// Rows `curve,chart,x,y` with (x, y) = (u, v); `chart` names the chart the
/// curve is given in.
pub fn atlas_csv(pieces: &[AtlasPiece]) -> String {
    let mut out = String::new();
    out.push_str(ATLAS_HEADER);
    out.push('\n');
    for p in pieces {
        for (u, v) in &p.points {
            let _ = writeln!(out, "{},{},{},{}", p.curve, p.chart, num(*u), num(*v));
        }
    }
    out
}

fn bbox<'a>(pts: impl Iterator<Item = &'a (f64, f64)>) -> (f64, f64, f64, f64) {
    let mut b = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in pts {
        if x.is_finite() && y.is_finite() {
            b = (b.0.min(*x), b.1.max(*x), b.2.min(*y), b.3.max(*y));
        }
    }
    if !b.0.is_finite() {
        return (0.0, 1.0, 0.0, 1.0);
    }
    if b.1 - b.0 <= 0.0 {
        b = (b.0 - 0.5, b.1 + 0.5, b.2, b.3);
    }
    if b.3 - b.2 <= 0.0 {
        b = (b.0, b.1, b.2 - 0.5, b.3 + 0.5);
    }
    b
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Affine fit of the bounding box into the viewport, y flipped. Each line
/// becomes one path with its id; labels sit at the middle sample.
pub fn svg(lines: &[Polyline], marks: &[(String, f64, f64)]) -> String {
    let mut all: Vec<(f64, f64)> = lines.iter().flat_map(|l| l.points.iter().copied()).collect();
    all.extend(marks.iter().map(|m| (m.1, m.2)));
    let (x0, x1, y0, y1) = bbox(all.iter());
    let margin = 40.0;
    let span = SVG_SIZE - 2.0 * margin;
    let map = |x: f64, y: f64| {
        (
            margin + (x - x0) / (x1 - x0) * span,
            SVG_SIZE - margin - (y - y0) / (y1 - y0) * span,
        )
    };
    let fmt = |v: f64| format!("{v:.3}");
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{0}" height="{0}" viewBox="0 0 {0} {0}">"#,
        SVG_SIZE
    );
    for l in lines {
        let pts: Vec<(f64, f64)> = l.points.iter().filter(|p| p.0.is_finite() && p.1.is_finite()).copied().collect();
        if pts.is_empty() {
            continue;
        }
        let mut d = String::new();
        for (i, (x, y)) in pts.iter().enumerate() {
            let (px, py) = map(*x, *y);
            let _ = write!(d, "{}{},{} ", if i == 0 { "M" } else { "L" }, fmt(px), fmt(py));
        }
        let id = escape(&l.id);
        let _ = writeln!(out, r#"<path id="{id}" d="{}" fill="none" stroke="black" stroke-width="1.5"/>"#, d.trim_end());
        let (mx, my) = map(pts[pts.len() / 2].0, pts[pts.len() / 2].1);
        let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="12">{id}</text>"#, fmt(mx), fmt(my));
    }
    for (name, x, y) in marks {
        let (px, py) = map(*x, *y);
        let name = escape(name);
        let _ = writeln!(out, r#"<circle id="pt-{name}" cx="{}" cy="{}" r="3" fill="red"/>"#, fmt(px), fmt(py));
        let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="12" fill="red">{name}</text>"#, fmt(px + 4.0), fmt(py - 4.0));
    }
    out.push_str("</svg>\n");
    out
}

pub fn diagram_svg(d: &BifurcationDiagram, m: &ModelParams) -> Result<String> {
    let lines = diagram_polylines(d, m)?;
    let marks: Vec<(String, f64, f64)> = d.singular_points.iter().map(|p| (p.family.to_string(), p.h, p.k)).collect();
    Ok(svg(&lines, &marks))
}

/// Atlas pieces of one curve share the curve name as id, suffixed by the
/// piece index when there are several.
pub fn atlas_svg(pieces: &[AtlasPiece]) -> String {
    let lines: Vec<Polyline> = pieces
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let n = pieces.iter().filter(|q| q.curve == p.curve).count();
            let k = pieces[..i].iter().filter(|q| q.curve == p.curve).count();
            Polyline {
                id: if n == 1 { p.curve.to_string() } else { format!("{}-{}", p.curve, k + 1) },
                points: p.points.clone(),
            }
        })
        .collect();
    svg(&lines, &[])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format_has_17_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(-2.0), "-2.0000000000000000e0");
    }

    #[test]
    fn svg_has_one_path_per_line() {
        let lines = vec![
            Polyline {
                id: "f1".into(),
                points: vec![(0.0, 0.0), (1.0, 1.0)],
            },
            Polyline {
                id: "f2".into(),
                points: vec![(0.0, 1.0), (1.0, 0.0)],
            },
        ];
        let s = svg(&lines, &[]);
        assert_eq!(s.matches("<path").count(), 2);
        assert!(s.contains(r#"id="f2""#));
        // y flipped: (0, 0) maps to the bottom-left corner
        assert!(s.contains("M40.000,960.000"));
    }
}
