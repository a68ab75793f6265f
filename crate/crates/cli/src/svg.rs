//! Self-contained SVG scatter plots of complex point sets.

use std::fmt::Write;

use twistspec_core::{Complex64, Window};

pub const BLUE: &str = "#1f4fd8";
pub const RED: &str = "#d62728";
pub const BLACK: &str = "#000000";
pub const GREEN: &str = "#2ca02c";

const PANEL: f64 = 480.0;
const MARGIN: f64 = 48.0;

#[derive(Debug, Clone)]
pub struct Layer {
    pub label: String,
    pub color: &'static str,
    pub radius: f64,
    pub points: Vec<Complex64>,
}

impl Layer {
    pub fn new(label: &str, color: &'static str, radius: f64, points: Vec<Complex64>) -> Self {
        Layer { label: label.to_string(), color, radius, points }
    }
}

/// One plot area. Layers are drawn in order, so later layers sit on top.
#[derive(Debug, Clone)]
pub struct Panel {
    pub title: String,
    pub window: Window,
    pub layers: Vec<Layer>,
}

impl Panel {
    /// Viewport: the given window grown to cover every layer.
    pub fn fitted(title: &str, window: Window, layers: Vec<Layer>) -> Panel {
        let mut w = window;
        for p in layers.iter().flat_map(|l| l.points.iter()) {
            if p.re.is_finite() && p.im.is_finite() {
                w = w.union(&Window { min: *p, max: *p });
            }
        }
        Panel { title: title.to_string(), window: w, layers }
    }
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn render_panel(out: &mut String, panel: &Panel, offset_x: f64) {
    let w = &panel.window;
    let span = w.width().max(w.height()).max(1e-12);
    // Equal scale on both axes, centred in the square plot area.
    let scale = PANEL / span;
    let cx = (w.min.re + w.max.re) / 2.0;
    let cy = (w.min.im + w.max.im) / 2.0;
    let left = offset_x + MARGIN;
    let top = MARGIN;
    let to_px = |z: Complex64| (left + PANEL / 2.0 + (z.re - cx) * scale, top + PANEL / 2.0 - (z.im - cy) * scale);

    let _ = writeln!(out, r#"<g class="panel">"#);
    let _ = writeln!(
        out,
        r#"<rect x="{left:.2}" y="{top:.2}" width="{PANEL:.2}" height="{PANEL:.2}" fill="white" stroke="gray" stroke-width="1"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="15" text-anchor="middle">{}</text>"#,
        left + PANEL / 2.0,
        top - 18.0,
        escape(&panel.title)
    );
    let (lo_re, hi_re) = (cx - span / 2.0, cx + span / 2.0);
    let (lo_im, hi_im) = (cy - span / 2.0, cy + span / 2.0);
    let _ = writeln!(
        out,
        r#"<text x="{left:.2}" y="{:.2}" font-size="11">{}</text><text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{}</text>"#,
        top + PANEL + 16.0,
        fmt_tick(lo_re),
        left + PANEL,
        top + PANEL + 16.0,
        fmt_tick(hi_re)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{}</text><text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{}</text>"#,
        left - 4.0,
        top + PANEL,
        fmt_tick(lo_im),
        left - 4.0,
        top + 10.0,
        fmt_tick(hi_im)
    );
    for layer in &panel.layers {
        let _ = writeln!(out, r#"<g fill="{}" data-label="{}">"#, layer.color, escape(&layer.label));
        for p in &layer.points {
            if !(p.re.is_finite() && p.im.is_finite()) {
                continue;
            }
            let (x, y) = to_px(*p);
            let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{}"/>"#, layer.radius);
        }
        let _ = writeln!(out, "</g>");
    }
    let mut ly = top + 14.0;
    for layer in &panel.layers {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="{}"/><text x="{:.2}" y="{:.2}" font-size="11">{}</text>"#,
            left + 10.0,
            ly - 4.0,
            layer.color,
            left + 18.0,
            ly,
            escape(&layer.label)
        );
        ly += 14.0;
    }
    let _ = writeln!(out, "</g>");
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Panels side by side in one document.
pub fn render(panels: &[Panel]) -> String {
    let cell = PANEL + 2.0 * MARGIN;
    let width = cell * panels.len().max(1) as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{cell:.0}" viewBox="0 0 {width:.0} {cell:.0}" font-family="sans-serif">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, panel) in panels.iter().enumerate() {
        render_panel(&mut out, panel, i as f64 * cell);
    }
    out.push_str("</svg>\n");
    out
}
