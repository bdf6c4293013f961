//! Deterministic SVG 1.1 figures. Objects are drawn in id order (the
//! scenario's map order) and every coordinate is printed with three decimals,
//! so equal input gives byte-identical output.

use std::fmt::Write;

use sharygin::conics::{principal, ConicQ};
use sharygin::theorems::{Scenario, SceneObject};
use sharygin::{pt, Line, Point};

pub const CANVAS: f64 = 800.0;
const MARGIN: f64 = 0.08;
pub const CONIC_SEGMENTS: usize = 256;

/// World rectangle `[min.x, max.x] × [min.y, max.y]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct View {
    pub min: Point,
    pub max: Point,
}

impl View {
    fn span(&self) -> f64 {
        (self.max.x - self.min.x).max(self.max.y - self.min.y)
    }

    fn to_screen(&self, p: Point) -> (f64, f64) {
        let k = CANVAS / self.span();
        ((p.x - self.min.x) * k, (self.max.y - p.y) * k)
    }

    /// The part of `l` inside the view.
    pub fn clip(&self, l: &Line) -> Option<(Point, Point)> {
        let d = l.direction();
        let o = l.foot(pt((self.min.x + self.max.x) / 2.0, (self.min.y + self.max.y) / 2.0));
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for (p, dp, a, b) in [(o.x, d.x, self.min.x, self.max.x), (o.y, d.y, self.min.y, self.max.y)] {
            if dp.abs() < 1e-15 {
                if p < a || p > b {
                    return None;
                }
                continue;
            }
            let (t1, t2) = ((a - p) / dp, (b - p) / dp);
            lo = lo.max(t1.min(t2));
            hi = hi.min(t1.max(t2));
        }
        (lo < hi).then(|| (o + d * lo, o + d * hi))
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

/// Points on the real part of a central conic, as polylines of
/// `CONIC_SEGMENTS` segments: one closed loop for an ellipse, one open
/// branch per side for a hyperbola (reaching `reach` from the centre), two
/// segments for a line pair. Empty when there is nothing real to draw or the
/// conic has no centre.
pub fn conic_polylines(q: &ConicQ, reach: f64) -> Vec<Vec<Point>> {
    let Ok(p) = principal(q) else { return vec![] };
    let n = CONIC_SEGMENTS;
    let at = |u: f64, w: f64| p.center + p.axes[0] * u + p.axes[1] * w;
    let [l0, l1] = p.lambda;
    let f0 = p.f0;
    let scale = l0.abs().max(l1.abs());
    if f0.abs() <= 1e-12 * scale * reach * reach {
        if l0 * l1 >= 0.0 {
            return vec![];
        }
        // Two lines through the centre: √|λ₀|·u = ±√|λ₁|·w.
        let (a, b) = (l1.abs().sqrt(), l0.abs().sqrt());
        let k = reach / a.hypot(b);
        return [1.0, -1.0].iter().map(|s| vec![at(-a * k, -s * b * k), at(a * k, s * b * k)]).collect();
    }
    let (s0, s1) = (-f0 / l0, -f0 / l1);
    if s0 > 0.0 && s1 > 0.0 {
        let (a, b) = (s0.sqrt(), s1.sqrt());
        let loop_: Vec<Point> = (0..=n)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / n as f64;
                at(a * t.cos(), b * t.sin())
            })
            .collect();
        return vec![loop_];
    }
    if s0 <= 0.0 && s1 <= 0.0 {
        return vec![];
    }
    // Hyperbola: `real` is the axis the branches cross.
    let (real, a, b) = if s0 > 0.0 { (0, s0.sqrt(), (-s1).sqrt()) } else { (1, s1.sqrt(), (-s0).sqrt()) };
    let t_max = (reach / a.min(b)).asinh();
    [1.0, -1.0]
        .iter()
        .map(|side| {
            (0..=n)
                .map(|i| {
                    let t = -t_max + 2.0 * t_max * i as f64 / n as f64;
                    let (x, y) = (side * a * t.cosh(), b * t.sinh());
                    if real == 0 {
                        at(x, y)
                    } else {
                        at(y, x)
                    }
                })
                .collect()
        })
        .collect()
}

/// Bounding box of the bounded objects (points, circles, cycles, ellipses),
/// padded and made square; `[-1, 1]²` when there are none.
pub fn fit(s: &Scenario) -> View {
    let mut lo = pt(f64::INFINITY, f64::INFINITY);
    let mut hi = pt(f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut add = |p: Point, r: f64| {
        lo = pt(lo.x.min(p.x - r), lo.y.min(p.y - r));
        hi = pt(hi.x.max(p.x + r), hi.y.max(p.y + r));
    };
    for obj in s.objects.values() {
        match obj {
            SceneObject::Point(p) => add(*p, 0.0),
            SceneObject::Circle(c) => add(c.center, c.radius),
            SceneObject::Cycle(c) => add(c.center(), c.r.abs()),
            SceneObject::Conic(q) => {
                if let Ok(p) = principal(q) {
                    let (s0, s1) = (-p.f0 / p.lambda[0], -p.f0 / p.lambda[1]);
                    if s0 > 0.0 && s1 > 0.0 {
                        add(p.center, s0.sqrt().max(s1.sqrt()));
                    } else {
                        add(p.center, 0.0);
                    }
                }
            }
            SceneObject::Line(_) => {}
        }
    }
    if !(lo.x <= hi.x) {
        return View { min: pt(-1.0, -1.0), max: pt(1.0, 1.0) };
    }
    let c = (lo + hi) / 2.0;
    let half = ((hi.x - lo.x).max(hi.y - lo.y) / 2.0).max(1e-9) * (1.0 + 2.0 * MARGIN);
    View { min: c - pt(half, half), max: c + pt(half, half) }
}

fn polyline(out: &mut String, view: &View, id: &str, class: &str, pts: &[Point]) {
    let coords: Vec<String> = pts
        .iter()
        .map(|&p| {
            let (x, y) = view.to_screen(p);
            format!("{},{}", num(x), num(y))
        })
        .collect();
    let _ = writeln!(out, r#"<polyline id="{id}" class="{class}" points="{}"/>"#, coords.join(" "));
}

fn label(out: &mut String, view: &View, text: &str, p: Point) {
    let (x, y) = view.to_screen(p);
    let _ = writeln!(out, r#"<text x="{}" y="{}">{text}</text>"#, num(x + 6.0), num(y - 6.0));
}

/// Circles black, cycles blue (dashed when counter-clockwise), lines grey,
/// conics green, points red with their ids as labels.
pub fn render(s: &Scenario) -> String {
    let view = fit(s);
    let reach = 2.0 * view.span();
    let mut out = String::new();
    let c = num(CANVAS);
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{c}" height="{c}" viewBox="0 0 {c} {c}">"#
    );
    let _ = writeln!(out, "<title>{}</title>", escape(&s.name));
    let _ = writeln!(
        out,
        "<style>\n\
         .circle {{ fill: none; stroke: black; stroke-width: 1.5 }}\n\
         .cycle {{ fill: none; stroke: #1f5fbf; stroke-width: 1.5 }}\n\
         .cycle.ccw {{ stroke-dasharray: 6 4 }}\n\
         .line {{ stroke: #777777; stroke-width: 1 }}\n\
         .conic {{ fill: none; stroke: #2a8c3a; stroke-width: 1.5 }}\n\
         .point {{ fill: #c0392b }}\n\
         text {{ font: 14px sans-serif }}\n\
         </style>"
    );
    let _ = writeln!(out, r#"<rect width="{c}" height="{c}" fill="white"/>"#);
    let k = CANVAS / view.span();
    let mut labels = vec![];
    for (id, obj) in &s.objects {
        let id = escape(id);
        match obj {
            SceneObject::Circle(ci) => {
                let (x, y) = view.to_screen(ci.center);
                let r = num(ci.radius * k);
                let _ = writeln!(out, r#"<circle id="{id}" class="circle" cx="{}" cy="{}" r="{r}"/>"#, num(x), num(y));
                labels.push((id, ci.center + pt(0.0, ci.radius)));
            }
            SceneObject::Cycle(cy) => {
                let (x, y) = view.to_screen(cy.center());
                let class = if cy.r < 0.0 { "cycle ccw" } else { "cycle" };
                let r = num(cy.r.abs() * k);
                let _ = writeln!(out, r#"<circle id="{id}" class="{class}" cx="{}" cy="{}" r="{r}"/>"#, num(x), num(y));
                labels.push((id, cy.center() + pt(0.0, cy.r.abs())));
            }
            SceneObject::Line(l) => {
                if let Some((p, q)) = view.clip(l) {
                    let ((x1, y1), (x2, y2)) = (view.to_screen(p), view.to_screen(q));
                    let _ = writeln!(
                        out,
                        r#"<line id="{id}" class="line" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                        num(x1),
                        num(y1),
                        num(x2),
                        num(y2)
                    );
                }
            }
            SceneObject::Conic(q) => {
                let parts = conic_polylines(q, reach);
                if parts.is_empty() {
                    let _ = writeln!(out, "<!-- {id}: no real central conic to draw -->");
                }
                for (i, part) in parts.iter().enumerate() {
                    polyline(&mut out, &view, &format!("{id}.{i}"), "conic", part);
                }
            }
            SceneObject::Point(p) => {
                let (x, y) = view.to_screen(*p);
                let _ = writeln!(out, r#"<circle id="{id}" class="point" cx="{}" cy="{}" r="3"/>"#, num(x), num(y));
                labels.push((id, *p));
            }
        }
    }
    for (id, p) in labels {
        label(&mut out, &view, &id, p);
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
