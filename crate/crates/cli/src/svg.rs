//! Static SVG figures: data scatter with the codebook grid drawn on top, and
//! simple line charts. Output is self-contained, styles are inline.

use std::fmt::Write as _;

use ndarray::Array2;
use somqual::CodeBook;

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 32.0;

/// Axis-aligned bounds mapped onto the drawing area with a common scale.
struct Frame {
    min_x: f64,
    max_y: f64,
    scale: f64,
    off_x: f64,
    off_y: f64,
}

impl Frame {
    fn fit(points: impl Iterator<Item = (f64, f64)>, width: f64, height: f64) -> Self {
        let (mut min_x, mut max_x, mut min_y, mut max_y) =
            (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for (x, y) in points {
            min_x = min_x.min(x);
            max_x = max_x.max(x);
            min_y = min_y.min(y);
            max_y = max_y.max(y);
        }
        if !min_x.is_finite() {
            (min_x, max_x, min_y, max_y) = (0.0, 1.0, 0.0, 1.0);
        }
        let span_x = (max_x - min_x).max(1e-12);
        let span_y = (max_y - min_y).max(1e-12);
        let avail_w = width - 2.0 * MARGIN;
        let avail_h = height - 2.0 * MARGIN;
        let scale = (avail_w / span_x).min(avail_h / span_y);
        Frame {
            min_x,
            max_y,
            scale,
            off_x: MARGIN + (avail_w - span_x * scale) / 2.0,
            off_y: MARGIN + (avail_h - span_y * scale) / 2.0,
        }
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        (
            self.off_x + (x - self.min_x) * self.scale,
            self.off_y + (self.max_y - y) * self.scale,
        )
    }
}

/// First two coordinates of a row; one-dimensional rows are drawn at y = 0.
fn xy(matrix: &Array2<f64>, i: usize) -> (f64, f64) {
    let row = matrix.row(i);
    (row[0], if row.len() > 1 { row[1] } else { 0.0 })
}

fn header(out: &mut String, width: f64, height: f64, title: &str) {
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    writeln!(
        out,
        r#"<rect x="0" y="0" width="{width}" height="{height}" style="fill:#ffffff"/>"#
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="20" style="font-family:sans-serif;font-size:14px;text-anchor:middle;fill:#222222">{}</text>"#,
        width / 2.0,
        escape(title)
    )
    .unwrap();
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Data points as dots, prototypes joined along every pair of
/// neighboring units.
pub fn map_figure(data: &Array2<f64>, codebook: &CodeBook, title: &str) -> String {
    let protos = codebook.prototypes();
    let frame = Frame::fit(
        (0..data.nrows())
            .map(|i| xy(data, i))
            .chain((0..protos.nrows()).map(|u| xy(protos, u))),
        WIDTH,
        HEIGHT,
    );
    let mut out = String::new();
    header(&mut out, WIDTH, HEIGHT, title);

    out.push_str(r#"<g style="fill:#9ab7d3;fill-opacity:0.6;stroke:none">"#);
    out.push('\n');
    for i in 0..data.nrows() {
        let (x, y) = frame.map(xy(data, i));
        writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="1.5"/>"#).unwrap();
    }
    out.push_str("</g>\n");

    let grid = codebook.grid();
    out.push_str(r#"<g style="fill:none;stroke:#c0392b;stroke-width:1.5">"#);
    out.push('\n');
    for a in 0..grid.len() {
        for b in grid.neighbors(a).expect("unit in range") {
            if b > a {
                let (x1, y1) = frame.map(xy(protos, a));
                let (x2, y2) = frame.map(xy(protos, b));
                writeln!(out, r#"<polyline points="{x1:.2},{y1:.2} {x2:.2},{y2:.2}"/>"#).unwrap();
            }
        }
    }
    out.push_str("</g>\n");

    out.push_str(r#"<g style="fill:#c0392b;stroke:none">"#);
    out.push('\n');
    for u in 0..protos.nrows() {
        let (x, y) = frame.map(xy(protos, u));
        writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5"/>"#).unwrap();
    }
    out.push_str("</g>\n</svg>\n");
    out
}

/// Line chart of `(x, y)` points with the y axis starting at zero.
pub fn line_chart(points: &[(f64, f64)], title: &str, x_label: &str, y_label: &str) -> String {
    let (width, height) = (WIDTH, 320.0);
    let mut out = String::new();
    header(&mut out, width, height, title);

    let (min_x, max_x) = points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        (lo.min(p.0), hi.max(p.0))
    });
    let max_y = points.iter().fold(0.0f64, |hi, p| hi.max(p.1));
    let sx = (width - 2.0 * MARGIN) / (max_x - min_x).max(1e-12);
    let sy = (height - 2.0 * MARGIN) / max_y.max(1e-12);
    let px = |x: f64| MARGIN + (x - min_x) * sx;
    let py = |y: f64| height - MARGIN - y * sy;

    writeln!(
        out,
        r#"<polyline points="{x0:.2},{y0:.2} {x0:.2},{top:.2}" style="fill:none;stroke:#444444;stroke-width:1"/>"#,
        x0 = MARGIN,
        y0 = height - MARGIN,
        top = MARGIN
    )
    .unwrap();
    writeln!(
        out,
        r#"<polyline points="{x0:.2},{y0:.2} {x1:.2},{y0:.2}" style="fill:none;stroke:#444444;stroke-width:1"/>"#,
        x0 = MARGIN,
        x1 = width - MARGIN,
        y0 = height - MARGIN
    )
    .unwrap();
    let label_style = "font-family:sans-serif;font-size:11px;fill:#444444";
    writeln!(
        out,
        r#"<text x="{}" y="{}" style="{label_style};text-anchor:middle">{}</text>"#,
        width / 2.0,
        height - 8.0,
        escape(x_label)
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="12" y="{}" style="{label_style};text-anchor:middle" transform="rotate(-90 12 {})">{}</text>"#,
        height / 2.0,
        height / 2.0,
        escape(y_label)
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="{}" style="{label_style};text-anchor:end">{max_y}</text>"#,
        MARGIN - 4.0,
        MARGIN + 4.0
    )
    .unwrap();
    let axis_y = height - MARGIN + 14.0;
    writeln!(
        out,
        r#"<text x="{MARGIN}" y="{axis_y}" style="{label_style};text-anchor:middle">{min_x}</text>"#
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="{axis_y}" style="{label_style};text-anchor:middle">{max_x}</text>"#,
        width - MARGIN
    )
    .unwrap();

    let coords: Vec<String> = points
        .iter()
        .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
        .collect();
    writeln!(
        out,
        r#"<polyline points="{}" style="fill:none;stroke:#2c7fb8;stroke-width:2"/>"#,
        coords.join(" ")
    )
    .unwrap();
    out.push_str("</svg>\n");
    out
}
