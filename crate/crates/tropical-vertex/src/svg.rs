//! Static SVG pictures of diagrams: one colour per slope class.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num::ToPrimitive;

use crate::lattice::{LatticeVector, RPoint};
use crate::perturbation::PerturbedDiagram;
use crate::scattering::{ScatteringDiagram, SupportKind};

const PALETTE: [&str; 10] =
    ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22"];

/// A support to draw.
#[derive(Clone, Debug)]
pub struct Stroke {
    pub base: RPoint,
    pub m: LatticeVector,
    pub kind: SupportKind,
    pub label: String,
}

fn f(x: &num::BigRational) -> f64 {
    x.to_f64().unwrap_or(0.0)
}

/// Clips `base + s m` (with `s ≥ 0` for rays) to the box `[-r, r]^2` around
/// `c`; returns the two endpoints.
fn clip(base: (f64, f64), m: (f64, f64), kind: SupportKind, c: (f64, f64), r: f64) -> Option<((f64, f64), (f64, f64))> {
    let (mut lo, mut hi) = (if kind == SupportKind::Ray { 0.0 } else { f64::NEG_INFINITY }, f64::INFINITY);
    for (p, d, center) in [(base.0, m.0, c.0), (base.1, m.1, c.1)] {
        if d == 0.0 {
            if (p - center).abs() > r {
                return None;
            }
            continue;
        }
        let a = (center - r - p) / d;
        let b = (center + r - p) / d;
        lo = lo.max(a.min(b));
        hi = hi.min(a.max(b));
    }
    (lo < hi).then(|| ((base.0 + lo * m.0, base.1 + lo * m.1), (base.0 + hi * m.0, base.1 + hi * m.1)))
}

/// Renders strokes in a square view containing every base point.
pub fn render(strokes: &[Stroke], title: &str) -> String {
    let pts: Vec<(f64, f64)> = strokes.iter().map(|s| (f(&s.base.x), f(&s.base.y))).chain([(0.0, 0.0)]).collect();
    let (xmin, xmax) = pts.iter().fold((f64::MAX, f64::MIN), |(a, b), p| (a.min(p.0), b.max(p.0)));
    let (ymin, ymax) = pts.iter().fold((f64::MAX, f64::MIN), |(a, b), p| (a.min(p.1), b.max(p.1)));
    let c = ((xmin + xmax) / 2.0, (ymin + ymax) / 2.0);
    let r = ((xmax - xmin).max(ymax - ymin) * 0.65 + 2.0).max(3.0);
    let size = 480.0;
    let scale = size / (2.0 * r);
    let to_px = |p: (f64, f64)| ((p.0 - c.0 + r) * scale, (c.1 + r - p.1) * scale);
    let mut colours: BTreeMap<LatticeVector, usize> = BTreeMap::new();
    let mut slopes: Vec<LatticeVector> = strokes.iter().map(|s| s.m.primitive()).collect();
    slopes.sort_by(|a, b| a.angle_cmp(*b));
    slopes.dedup();
    for (i, m) in slopes.iter().enumerate() {
        colours.insert(*m, i % PALETTE.len());
    }
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#);
    let _ = writeln!(out, "<title>{}</title>", escape(title));
    let _ = writeln!(out, r#"<rect width="{size}" height="{size}" fill="white"/>"#);
    for s in strokes {
        let m = (s.m.a as f64, s.m.b as f64);
        let Some((a, b)) = clip((f(&s.base.x), f(&s.base.y)), m, s.kind, c, r) else { continue };
        let (a, b) = (to_px(a), to_px(b));
        let colour = PALETTE[colours[&s.m.primitive()]];
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{colour}" stroke-width="1.5"><title>{}</title></line>"#,
            a.0,
            a.1,
            b.0,
            b.1,
            escape(&s.label)
        );
        if s.kind == SupportKind::Ray {
            let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="{colour}"/>"#, a.0, a.1);
        }
    }
    for (i, m) in slopes.iter().enumerate() {
        let y = 16.0 + 14.0 * i as f64;
        let colour = PALETTE[colours[m]];
        let _ = writeln!(out, r#"<text x="8" y="{y:.0}" font-size="11" fill="{colour}">slope {m}</text>"#);
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn diagram_strokes(d: &ScatteringDiagram) -> Vec<Stroke> {
    d.walls()
        .iter()
        .map(|w| Stroke {
            base: w.base.clone(),
            m: w.m,
            kind: w.kind,
            label: crate::io::lie_lines(&w.log).join("; "),
        })
        .collect()
}

pub fn perturbed_strokes(d: &PerturbedDiagram) -> Vec<Stroke> {
    d.walls()
        .iter()
        .map(|w| Stroke {
            base: w.base.clone(),
            m: w.m,
            kind: w.kind,
            label: format!("#{} l={} a={} c={}", w.id, w.l, w.a.render(d.ring().symbols()), crate::rational::fmt_q(&w.c)),
        })
        .collect()
}

pub fn render_diagram(d: &ScatteringDiagram, title: &str) -> String {
    render(&diagram_strokes(d), title)
}

pub fn render_perturbed(d: &PerturbedDiagram, title: &str) -> String {
    render(&perturbed_strokes(d), title)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn clipping_and_colours() {
        let (a, b) = clip((0.0, 0.0), (1.0, 1.0), SupportKind::Ray, (0.0, 0.0), 2.0).unwrap();
        assert_eq!((a, b), ((0.0, 0.0), (2.0, 2.0)));
        assert!(clip((5.0, 5.0), (1.0, 0.0), SupportKind::Line, (0.0, 0.0), 2.0).is_none());
        let strokes = vec![
            Stroke { base: RPoint::origin(), m: LatticeVector::new(1, 0), kind: SupportKind::Line, label: "a".into() },
            Stroke { base: RPoint::new(q(1), q(0)), m: LatticeVector::new(2, 0), kind: SupportKind::Ray, label: "b".into() },
            Stroke { base: RPoint::origin(), m: LatticeVector::new(1, 1), kind: SupportKind::Ray, label: "<c>".into() },
        ];
        let svg = render(&strokes, "t");
        assert_eq!(svg.matches("<line").count(), 3);
        assert_eq!(svg.matches("slope ").count(), 2);
        assert!(svg.contains("&lt;c&gt;"));
        assert_eq!(render(&strokes, "t"), svg);
    }
}
