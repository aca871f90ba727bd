use std::fmt::Write as _;
use std::path::Path;

use crate::error::{NavError, Result};

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const PLOT_LEFT: f64 = 60.0;
const PLOT_TOP: f64 = 30.0;
const PLOT_RIGHT: f64 = 600.0;
const PLOT_BOTTOM: f64 = 560.0;

pub const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(name: &str, points: Vec<(f64, f64)>) -> Self {
        Series {
            name: name.to_string(),
            points,
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Data extents grown by 5% on each side; degenerate spans get a unit width.
fn extents(series: &[Series]) -> (f64, f64, f64, f64) {
    let (mut x0, mut x1, mut y0, mut y1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for p in series.iter().flat_map(|s| &s.points) {
        x0 = x0.min(p.0);
        x1 = x1.max(p.0);
        y0 = y0.min(p.1);
        y1 = y1.max(p.1);
    }
    let pad = |lo: f64, hi: f64| {
        let span = hi - lo;
        if span > 0.0 {
            (lo - 0.05 * span, hi + 0.05 * span)
        } else {
            (lo - 0.5, hi + 0.5)
        }
    };
    let (x0, x1) = pad(x0, x1);
    let (y0, y1) = pad(y0, y1);
    (x0, x1, y0, y1)
}

/// Static line plot: axes box, one polyline per series, legend on the right.
pub fn svg_string(series: &[Series], title: &str) -> Result<String> {
    if series.is_empty() || series.iter().any(|s| s.points.is_empty()) {
        return Err(NavError::EmptyTrace);
    }
    if series
        .iter()
        .flat_map(|s| &s.points)
        .any(|p| !p.0.is_finite() || !p.1.is_finite())
    {
        return Err(NavError::invalid("plot data must be finite"));
    }
    let (x0, x1, y0, y1) = extents(series);
    let sx = (PLOT_RIGHT - PLOT_LEFT) / (x1 - x0);
    let sy = (PLOT_BOTTOM - PLOT_TOP) / (y1 - y0);
    let px = |x: f64| PLOT_LEFT + (x - x0) * sx;
    let py = |y: f64| PLOT_BOTTOM - (y - y0) * sy;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<rect class="axes" x="{PLOT_LEFT}" y="{PLOT_TOP}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        PLOT_RIGHT - PLOT_LEFT,
        PLOT_BOTTOM - PLOT_TOP
    );
    let _ = writeln!(
        s,
        r#"<text x="{PLOT_LEFT}" y="20" font-family="sans-serif" font-size="14">{}</text>"#,
        escape(title)
    );
    for (v, anchor, x, y) in [
        (x0, "start", PLOT_LEFT, PLOT_BOTTOM + 18.0),
        (x1, "end", PLOT_RIGHT, PLOT_BOTTOM + 18.0),
    ] {
        let _ = writeln!(
            s,
            r#"<text x="{x}" y="{y}" text-anchor="{anchor}" font-family="sans-serif" font-size="11">{v:.3}</text>"#
        );
    }
    for (v, y) in [(y0, PLOT_BOTTOM), (y1, PLOT_TOP + 10.0)] {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{y}" text-anchor="end" font-family="sans-serif" font-size="11">{v:.3}</text>"#,
            PLOT_LEFT - 4.0
        );
    }
    for (i, ser) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = ser
            .points
            .iter()
            .map(|p| format!("{:.3},{:.3}", px(p.0), py(p.1)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
    }
    for (i, ser) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let y = PLOT_TOP + 10.0 + 18.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="{color}" stroke-width="3"/>"#,
            PLOT_RIGHT + 15.0,
            PLOT_RIGHT + 35.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text>"#,
            PLOT_RIGHT + 40.0,
            y + 4.0,
            escape(&ser.name)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn render_svg_plot(series: &[Series], title: &str, path: &Path) -> Result<()> {
    let s = svg_string(series, title)?;
    std::fs::write(path, s)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_series() {
        let series: Vec<Series> = (0..3)
            .map(|i| {
                Series::new(
                    &format!("s{i}"),
                    vec![(0.0, i as f64), (1.0, 2.0 * i as f64)],
                )
            })
            .collect();
        let svg = svg_string(&series, "demo").unwrap();
        assert_eq!(svg.matches("<polyline").count(), 3);
        for c in &PALETTE[..3] {
            assert!(svg.contains(c));
        }
        assert!(svg.contains(">s2</text>"));
    }

    #[test]
    fn empty_input() {
        assert!(matches!(svg_string(&[], "x"), Err(NavError::EmptyTrace)));
        assert!(matches!(
            svg_string(&[Series::new("a", vec![])], "x"),
            Err(NavError::EmptyTrace)
        ));
    }

    #[test]
    fn single_point_and_escaping() {
        let svg = svg_string(&[Series::new("a<b", vec![(2.0, 2.0)])], "t&t").unwrap();
        assert!(svg.contains("a&lt;b") && svg.contains("t&amp;t"));
    }
}
