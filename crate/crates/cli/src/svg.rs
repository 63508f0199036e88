//! SVG rendering of regions: real axis rightward, imaginary axis upward,
//! auto-scaled with 10% padding.

use std::f64::consts::TAU;
use std::fmt::Write;

use srg_core::region::Side;
use srg_core::{Complex64 as C64, Region, RegionPrimitive};

pub const WIDTH: f64 = 800.0;
/// Half-width of the largest view; unbounded regions are clipped to it.
const MAX_EXTENT: f64 = 10.0;
const ARC_STEPS: usize = 96;
const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

#[derive(Debug, Clone)]
pub struct Layer {
    pub label: String,
    pub region: Region,
}

/// A dashed segment between two witness points, labeled with its length.
#[derive(Debug, Clone, Copy)]
pub struct Witness(pub C64, pub C64);

/// Data-to-pixel mapping with equal scale on both axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    pub x_min: f64,
    pub y_max: f64,
    pub scale: f64,
    pub width: f64,
    pub height: f64,
}

impl Viewport {
    /// Fits the box `[x0, x1] × [y0, y1]` with 10% padding on every side.
    pub fn fit(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        let (w, h) = ((x1 - x0).max(1e-9), (y1 - y0).max(1e-9));
        let (pw, ph) = (w * 1.2, h * 1.2);
        let scale = WIDTH / pw;
        Viewport {
            x_min: x0 - 0.1 * w,
            y_max: y1 + 0.1 * h,
            scale,
            width: WIDTH,
            height: ph * scale,
        }
    }

    pub fn px(&self, z: C64) -> (f64, f64) {
        ((z.re - self.x_min) * self.scale, (self.y_max - z.im) * self.scale)
    }

    fn x_max(&self) -> f64 {
        self.x_min + self.width / self.scale
    }

    fn y_min(&self) -> f64 {
        self.y_max - self.height / self.scale
    }
}

fn circle(center: C64, radius: f64) -> Vec<C64> {
    (0..ARC_STEPS)
        .map(|k| center + C64::from_polar(radius, TAU * k as f64 / ARC_STEPS as f64))
        .collect()
}

fn arc(r: f64, a0: f64, a1: f64) -> impl Iterator<Item = C64> {
    let n = ((a1 - a0).abs() / TAU * ARC_STEPS as f64).ceil().max(1.0) as usize;
    (0..=n).map(move |k| C64::from_polar(r, a0 + (a1 - a0) * k as f64 / n as f64))
}

fn signed_area(p: &[C64]) -> f64 {
    p.iter()
        .zip(p.iter().cycle().skip(1))
        .map(|(a, b)| a.re * b.im - b.re * a.im)
        .sum::<f64>()
        / 2.0
}

/// Counter-clockwise rings for each filled primitive; holes run clockwise so
/// the nonzero fill rule keeps unions and removes annulus holes.
fn rings(p: &RegionPrimitive, view: &Viewport) -> Vec<Vec<C64>> {
    let ccw = |mut v: Vec<C64>| {
        if signed_area(&v) < 0.0 {
            v.reverse();
        }
        v
    };
    match p {
        RegionPrimitive::Disc { center, radius } => vec![circle(*center, *radius)],
        RegionPrimitive::ConvexPolygon { vertices } if vertices.len() >= 3 => vec![ccw(vertices.clone())],
        RegionPrimitive::HalfPlaneRe { c, side } => {
            let pad = view.width / view.scale;
            let (lo, hi) = match side {
                Side::Ge => (*c, view.x_max() + pad),
                Side::Le => (view.x_min - pad, *c),
            };
            let (b, t) = (view.y_min() - pad, view.y_max + pad);
            vec![vec![C64::new(lo, b), C64::new(hi, b), C64::new(hi, t), C64::new(lo, t)]]
        }
        RegionPrimitive::LogPolarBox {
            log_modulus: (l0, l1),
            argument: (a0, a1),
        } => {
            let (r0, r1) = (l0.exp(), l1.exp().min(MAX_EXTENT * 10.0));
            if a1 - a0 >= TAU {
                let mut hole = circle(C64::new(0.0, 0.0), r0);
                hole.reverse();
                vec![circle(C64::new(0.0, 0.0), r1), hole]
            } else {
                let mut ring: Vec<C64> = arc(r1, *a0, *a1).collect();
                ring.extend(arc(r0, *a1, *a0));
                vec![ccw(ring)]
            }
        }
        _ => Vec::new(),
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn path_data(rings: &[Vec<C64>], view: &Viewport) -> String {
    let mut d = String::new();
    for ring in rings {
        for (i, z) in ring.iter().enumerate() {
            let (x, y) = view.px(*z);
            let _ = write!(d, "{}{:.2},{:.2} ", if i == 0 { 'M' } else { 'L' }, x, y);
        }
        d.push_str("Z ");
    }
    d.trim_end().to_string()
}

fn extend_box(b: &mut [f64; 4], z: C64) {
    let z = C64::new(z.re.clamp(-MAX_EXTENT, MAX_EXTENT), z.im.clamp(-MAX_EXTENT, MAX_EXTENT));
    b[0] = b[0].min(z.re);
    b[1] = b[1].max(z.re);
    b[2] = b[2].min(z.im);
    b[3] = b[3].max(z.im);
}

fn primitive_box(p: &RegionPrimitive, b: &mut [f64; 4]) {
    match p {
        RegionPrimitive::Disc { center, radius } => {
            extend_box(b, center - C64::new(*radius, *radius));
            extend_box(b, center + C64::new(*radius, *radius));
        }
        RegionPrimitive::ConvexPolygon { vertices } => vertices.iter().for_each(|z| extend_box(b, *z)),
        RegionPrimitive::PointSet { points, .. } => points.iter().for_each(|z| extend_box(b, *z)),
        RegionPrimitive::Segment { a, b: e } => {
            extend_box(b, *a);
            extend_box(b, *e);
        }
        RegionPrimitive::HalfPlaneRe { c, .. } => extend_box(b, C64::new(*c, 0.0)),
        RegionPrimitive::LogPolarBox {
            log_modulus: (_, l1),
            argument: (a0, a1),
        } => {
            let r = l1.exp();
            for z in arc(r, *a0, *a1).chain([C64::new(0.0, 0.0)]) {
                extend_box(b, z);
            }
        }
    }
}

/// Renders the layers with axes, unit markers at −1 and 1, and an optional witness.
pub fn render(layers: &[Layer], witness: Option<Witness>) -> String {
    let mut b = [-1.0, 1.0, 0.0, 0.0];
    for p in layers.iter().flat_map(|l| l.region.primitives()) {
        primitive_box(p, &mut b);
    }
    if let Some(Witness(p, q)) = witness {
        extend_box(&mut b, p);
        extend_box(&mut b, q);
    }
    let view = Viewport::fit(b[0], b[1], b[2], b[3]);
    render_in(layers, witness, &view)
}

pub fn render_in(layers: &[Layer], witness: Option<Witness>, view: &Viewport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.2} {h:.2}">"#,
        w = view.width,
        h = view.height
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (ox, oy) = view.px(C64::new(0.0, 0.0));
    let _ = writeln!(
        s,
        r#"<g class="axes" stroke="black" stroke-width="1"><line x1="0" y1="{oy:.2}" x2="{:.2}" y2="{oy:.2}"/><line x1="{ox:.2}" y1="0" x2="{ox:.2}" y2="{:.2}"/></g>"#,
        view.width, view.height
    );
    for (i, layer) in layers.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let filled: Vec<Vec<C64>> = layer.region.primitives().iter().flat_map(|p| rings(p, view)).collect();
        let _ = writeln!(s, r#"<g class="region" data-label="{}">"#, escape(&layer.label));
        if !filled.is_empty() {
            let _ = writeln!(
                s,
                r#"<path d="{}" fill="{color}" fill-opacity="0.4" fill-rule="nonzero" stroke="{color}" stroke-width="1"/>"#,
                path_data(&filled, view)
            );
        }
        for p in layer.region.primitives() {
            match p {
                RegionPrimitive::Segment { a, b } => {
                    let ((x1, y1), (x2, y2)) = (view.px(*a), view.px(*b));
                    let _ = writeln!(
                        s,
                        r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{color}" stroke-width="2"/>"#
                    );
                }
                RegionPrimitive::PointSet { points, dilation } => {
                    let r = (dilation * view.scale).max(1.5);
                    for z in points {
                        let (x, y) = view.px(*z);
                        let _ = writeln!(
                            s,
                            r#"<circle cx="{x:.2}" cy="{y:.2}" r="{r:.2}" fill="{color}" fill-opacity="0.4"/>"#
                        );
                    }
                }
                _ => {}
            }
        }
        let _ = writeln!(s, "</g>");
    }
    for x in [-1.0, 1.0] {
        let (px, py) = view.px(C64::new(x, 0.0));
        let _ = writeln!(
            s,
            r#"<g class="marker"><line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" font-size="12" text-anchor="middle">{x}</text></g>"#,
            py - 5.0,
            py + 5.0,
            py + 18.0
        );
    }
    if let Some(Witness(p, q)) = witness {
        let ((x1, y1), (x2, y2)) = (view.px(p), view.px(q));
        let _ = writeln!(
            s,
            r#"<g class="witness"><line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="black" stroke-dasharray="6 4"/><text x="{:.2}" y="{:.2}" font-size="12">{:.4}</text></g>"#,
            (x1 + x2) / 2.0 + 6.0,
            (y1 + y2) / 2.0 - 6.0,
            (p - q).norm()
        );
    }
    s.push_str("</svg>\n");
    s
}
