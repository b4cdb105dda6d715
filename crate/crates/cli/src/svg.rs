//! Minimal SVG scatter plots. Coordinates are written with fixed precision so
//! identical inputs give identical files.

use std::fmt::Write as _;

const SIZE: f64 = 640.0;
const MARGIN: f64 = 56.0;

/// One colour per symmetry class, in class order.
pub const PALETTE: [&str; 16] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22",
    "#393b79", "#637939", "#8c6d31", "#843c39", "#7b4173", "#3182bd",
];

pub fn color(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    Axes,
    /// Barycentric triangle for action triples; points are already embedded.
    Triangle,
}

#[derive(Debug, Clone)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub frame: Frame,
    pub points: Vec<([f64; 2], usize)>,
    pub segments: Vec<([f64; 2], [f64; 2], usize)>,
    pub legend: Vec<(String, usize)>,
}

/// (J₁, J₂, J₃) with J₁+J₂+J₃ = 1 onto an equilateral triangle.
pub fn barycentric(j: [f64; 3]) -> [f64; 2] {
    let h = 3f64.sqrt() / 2.0;
    // vertices: J1 at (0,0), J2 at (1,0), J3 at (1/2, h)
    [j[1] + 0.5 * j[2], h * j[2]]
}

fn bounds(plot: &Plot) -> ([f64; 2], [f64; 2]) {
    if plot.frame == Frame::Triangle {
        return ([-0.05, -0.05], [1.05, 0.95]);
    }
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    let all = plot.points.iter().map(|(p, _)| *p).chain(plot.segments.iter().flat_map(|(a, b, _)| [*a, *b]));
    for p in all {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    for k in 0..2 {
        if !lo[k].is_finite() {
            lo[k] = 0.0;
            hi[k] = 1.0;
        }
        let pad = 0.05 * (hi[k] - lo[k]).max(1e-9);
        lo[k] -= pad;
        hi[k] += pad;
    }
    (lo, hi)
}

pub fn render(plot: &Plot) -> String {
    let (lo, hi) = bounds(plot);
    let inner = SIZE - 2.0 * MARGIN;
    let map = |p: [f64; 2]| {
        let x = MARGIN + inner * (p[0] - lo[0]) / (hi[0] - lo[0]);
        let y = SIZE - MARGIN - inner * (p[1] - lo[1]) / (hi[1] - lo[1]);
        (x, y)
    };
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{:.2}" y="24" font-size="16" text-anchor="middle">{}</text>"#, SIZE / 2.0, escape(&plot.title));
    match plot.frame {
        Frame::Axes => {
            let _ = writeln!(
                s,
                r#"<rect x="{MARGIN}" y="{MARGIN}" width="{inner}" height="{inner}" fill="none" stroke="black"/>"#
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle">{}</text>"#,
                SIZE / 2.0,
                SIZE - 16.0,
                escape(&plot.x_label)
            );
            let _ = writeln!(
                s,
                r#"<text x="18" y="{:.2}" font-size="13" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
                SIZE / 2.0,
                SIZE / 2.0,
                escape(&plot.y_label)
            );
            for (k, anchor) in [(0usize, "start"), (1, "end")] {
                let (x, _) = map([if k == 0 { lo[0] } else { hi[0] }, lo[1]]);
                let _ = writeln!(
                    s,
                    r#"<text x="{x:.2}" y="{:.2}" font-size="11" text-anchor="{anchor}">{:.3}</text>"#,
                    SIZE - MARGIN + 14.0,
                    if k == 0 { lo[0] } else { hi[0] }
                );
            }
            for v in [lo[1], hi[1]] {
                let (_, y) = map([lo[0], v]);
                let _ = writeln!(s, r#"<text x="{:.2}" y="{y:.2}" font-size="11" text-anchor="end">{v:.3}</text>"#, MARGIN - 4.0);
            }
        }
        Frame::Triangle => {
            let h = 3f64.sqrt() / 2.0;
            let (ax, ay) = map([0.0, 0.0]);
            let (bx, by) = map([1.0, 0.0]);
            let (cx, cy) = map([0.5, h]);
            let _ = writeln!(
                s,
                r#"<polygon points="{ax:.2},{ay:.2} {bx:.2},{by:.2} {cx:.2},{cy:.2}" fill="none" stroke="black"/>"#
            );
            for (x, y, label, anchor) in [(ax, ay + 16.0, "J1", "middle"), (bx, by + 16.0, "J2", "middle"), (cx, cy - 6.0, "J3", "middle")] {
                let _ = writeln!(s, r#"<text x="{x:.2}" y="{y:.2}" font-size="13" text-anchor="{anchor}">{label}</text>"#);
            }
        }
    }
    for (a, b, c) in &plot.segments {
        let (x1, y1) = map(*a);
        let (x2, y2) = map(*b);
        let _ = writeln!(
            s,
            r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{}" stroke-width="1.2"/>"#,
            color(*c)
        );
    }
    for (p, c) in &plot.points {
        let (x, y) = map(*p);
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="{}"/>"#, color(*c));
    }
    for (k, (label, c)) in plot.legend.iter().enumerate() {
        let y = MARGIN + 14.0 * k as f64;
        let x = SIZE - MARGIN + 6.0;
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{:.2}" r="4" fill="{}"/>"#, y - 4.0, color(*c));
        let _ = writeln!(s, r#"<text x="{:.2}" y="{y:.2}" font-size="10">{}</text>"#, x + 7.0, escape(label));
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
