//! Deterministic SVG rendering of geometric graphs and dilation witnesses.
//!
//! The output is a pure function of the input: vertices and edges are
//! emitted in index order with fixed-precision coordinates, so rendering the
//! same graph twice yields byte-identical files — the renderer is safe to
//! use in golden tests.

use crate::graph::{DilationReport, GeometricGraph};

/// Canvas size of the longer bounding-box side, in pixels.
const CANVAS: f64 = 640.0;
/// Padding around the drawing, in pixels.
const MARGIN: f64 = 24.0;
/// Extra strip at the top for the caption when a report is rendered.
const CAPTION_STRIP: f64 = 28.0;

fn fmt(v: f64) -> String {
    // Fixed precision keeps the output stable and compact; 0.01px of drift
    // is far below visibility.
    let s = format!("{v:.2}");
    // Normalize "-0.00" to "0.00" so equal inputs render identically even
    // when a coordinate difference underflows to a signed zero.
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

/// Renders `graph` as a standalone SVG document. When `report` is given and
/// holds a finite witness, its path is highlighted, its endpoints are
/// emphasized, and a caption states the stretch factor and the witness pair.
pub fn render_svg(graph: &GeometricGraph, report: Option<&DilationReport>) -> String {
    let ps = graph.points().points();
    let n = ps.len();

    let (mut min_x, mut max_x, mut min_y, mut max_y) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in ps {
        min_x = min_x.min(p.x);
        max_x = max_x.max(p.x);
        min_y = min_y.min(p.y);
        max_y = max_y.max(p.y);
    }
    if n == 0 {
        (min_x, max_x, min_y, max_y) = (0.0, 1.0, 0.0, 1.0);
    }
    let ext_x = (max_x - min_x).max(1e-9);
    let ext_y = (max_y - min_y).max(1e-9);
    let scale = (CANVAS - 2.0 * MARGIN) / ext_x.max(ext_y);
    let caption = if report.is_some() { CAPTION_STRIP } else { 0.0 };
    let width = ext_x * scale + 2.0 * MARGIN;
    let height = ext_y * scale + 2.0 * MARGIN + caption;
    // SVG y grows downward; flip so the drawing matches plane coordinates.
    let map = |p: &crate::geometry::Point| -> (f64, f64) {
        (MARGIN + (p.x - min_x) * scale, caption + MARGIN + (max_y - p.y) * scale)
    };

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" \
         viewBox=\"0 0 {} {}\">\n",
        fmt(width),
        fmt(height),
        fmt(width),
        fmt(height)
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    for &(a, b) in graph.edges() {
        let (x1, y1) = map(&ps[a]);
        let (x2, y2) = map(&ps[b]);
        out.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#555555\" stroke-width=\"1.5\"/>\n",
            fmt(x1), fmt(y1), fmt(x2), fmt(y2)
        ));
    }

    let witness_path: &[usize] = report
        .and_then(|r| r.witness_path.as_deref())
        .unwrap_or(&[]);
    for w in witness_path.windows(2) {
        let (x1, y1) = map(&ps[w[0]]);
        let (x2, y2) = map(&ps[w[1]]);
        out.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"crimson\" stroke-width=\"3\"/>\n",
            fmt(x1), fmt(y1), fmt(x2), fmt(y2)
        ));
    }

    let witness_pair = report.and_then(|r| r.witness_pair);
    for (i, p) in ps.iter().enumerate() {
        let (cx, cy) = map(p);
        let emphasized = witness_pair.is_some_and(|(u, v)| i == u || i == v);
        let (radius, fill) = if emphasized { ("5", "crimson") } else { ("3", "#222222") };
        out.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"{radius}\" fill=\"{fill}\"/>\n",
            fmt(cx),
            fmt(cy)
        ));
        if n <= 40 {
            out.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-size=\"11\" font-family=\"sans-serif\" \
                 fill=\"#333333\">{i}</text>\n",
                fmt(cx + 6.0),
                fmt(cy - 6.0)
            ));
        }
    }

    if let Some(report) = report {
        let text = match (report.stretch.is_finite(), witness_pair) {
            (true, Some((u, v))) => {
                format!("stretch = {:.9}, witness pair ({u}, {v})", report.stretch)
            }
            (false, Some((u, v))) => format!("disconnected pair ({u}, {v})"),
            _ => format!("stretch = {:.9}", report.stretch),
        };
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"14\" font-family=\"sans-serif\" \
             fill=\"black\">{text}</text>\n",
            fmt(MARGIN),
            fmt(MARGIN - 6.0)
        ));
    }

    out.push_str("</svg>\n");
    out
}
