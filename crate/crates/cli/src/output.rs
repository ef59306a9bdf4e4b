use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use clockgame_core::rng::GENERATOR;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// Suffix for the table's file when it is not the main output.
    pub name: &'static str,
    pub header: &'static str,
    pub rows: Vec<String>,
}

impl Table {
    pub fn new(name: &'static str, header: &'static str) -> Self {
        Self {
            name,
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, fields: &[String]) {
        self.rows.push(fields.join(","));
    }
}

/// Everything a subcommand produces. The first table is the main CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub seed: u64,
    pub tables: Vec<Table>,
    pub svg: Option<String>,
    /// Explicit SVG destination; otherwise the SVG goes beside `--out`.
    pub svg_path: Option<std::path::PathBuf>,
}

pub fn metadata_line(seed: u64, reproducible: bool) -> String {
    let mut line = format!("#seed={seed},#version={VERSION},#generator={GENERATOR}");
    if !reproducible {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let _ = write!(line, ",#timestamp={secs}");
    }
    line
}

pub fn render_csv(table: &Table, seed: u64, reproducible: bool) -> String {
    let mut out = metadata_line(seed, reproducible);
    out.push('\n');
    out.push_str(table.header);
    out.push('\n');
    for row in &table.rows {
        out.push_str(row);
        out.push('\n');
    }
    out
}

/// Minimal SVG line chart: axes, min/max tick labels and one polyline.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, points: &[(f64, f64)]) -> String {
    let (w, h, pad) = (640.0, 420.0, 60.0);
    let (x0, x1) = span(points.iter().map(|p| p.0));
    let (y0, y1) = span(points.iter().map(|p| p.1));
    let sx = |x: f64| pad + (x - x0) / (x1 - x0) * (w - 2.0 * pad);
    let sy = |y: f64| h - pad - (y - y0) / (y1 - y0) * (h - 2.0 * pad);
    let poly: Vec<String> = points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="16">{title}</text>"#, w / 2.0);
    let _ = writeln!(
        s,
        r#"<path d="M{pad},{pad} V{} H{}" fill="none" stroke="black"/>"#,
        h - pad,
        w - pad
    );
    let _ = writeln!(s, r#"<text x="{pad}" y="{}" text-anchor="middle" font-size="12">{x0}</text>"#, h - pad + 18.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">{x1}</text>"#, w - pad, h - pad + 18.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end" font-size="12">{y0:.3}</text>"#, pad - 6.0, h - pad);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end" font-size="12">{y1:.3}</text>"#, pad - 6.0, pad + 4.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle" font-size="13">{x_label}</text>"#, w / 2.0, h - 16.0);
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" font-size="13" transform="rotate(-90 16 {})">{y_label}</text>"#,
        h / 2.0,
        h / 2.0
    );
    let _ = writeln!(
        s,
        r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#,
        poly.join(" ")
    );
    s.push_str("</svg>\n");
    s
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_metadata_has_no_timestamp() {
        let m = metadata_line(4, true);
        assert!(m.starts_with("#seed=4,#version="));
        assert!(!m.contains("timestamp"));
        assert!(metadata_line(4, false).contains("#timestamp="));
    }

    #[test]
    fn chart_has_one_vertex_per_point() {
        let svg = line_chart("t", "x", "y", &[(1.0, 0.5), (2.0, 0.6), (3.0, 0.7)]);
        let poly = svg.lines().find(|l| l.starts_with("<polyline")).unwrap();
        assert_eq!(poly.matches(',').count(), 3);
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
