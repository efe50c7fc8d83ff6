//! Hand-rolled SVG line charts; one polyline per series with axes, tick
//! labels and a legend, all in a fixed 800x600 viewbox.

use crate::textfmt::format_sig;
use std::fmt::Write;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 45.0;
const MARGIN_BOTTOM: f64 = 60.0;

/// Stroke colors assigned to series in input order; the caller sorts
/// series by name so the assignment is lexicographic.
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

pub struct Series {
    pub name: String,
    /// (x, y) points; NaN y-values are skipped.
    pub points: Vec<(f64, f64)>,
}

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn coord(v: f64) -> String {
    // one decimal is plenty for pixel coordinates and keeps bytes stable
    format!("{v:.1}")
}

/// Render an accuracy-vs-rate line chart. Series must be pre-sorted by
/// name; every series appears in the legend exactly once.
pub fn render_line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let finite_points: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter().copied())
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .collect();

    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &finite_points {
        x_min = x_min.min(x);
        x_max = x_max.max(x);
        y_min = y_min.min(y);
        y_max = y_max.max(y);
    }
    if finite_points.is_empty() {
        (x_min, x_max, y_min, y_max) = (0.0, 1.0, 0.0, 1.0);
    }
    if x_max - x_min < 1e-12 {
        x_min -= 0.5;
        x_max += 0.5;
    }
    // pad the y range and snap it to 0.05 steps inside [0, 1]-friendly bounds
    let pad = ((y_max - y_min) * 0.15).max(0.02);
    y_min = ((y_min - pad) / 0.05).floor() * 0.05;
    y_max = ((y_max + pad) / 0.05).ceil() * 0.05;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = |y: f64| MARGIN_TOP + plot_h - (y - y_min) / (y_max - y_min) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="25" text-anchor="middle" font-family="sans-serif" font-size="18">{}</text>"#,
        coord(WIDTH / 2.0),
        escape_xml(title)
    );

    // axes
    let x0 = coord(MARGIN_LEFT);
    let y0 = coord(MARGIN_TOP + plot_h);
    let _ = writeln!(
        svg,
        r#"<line x1="{x0}" y1="{y0}" x2="{}" y2="{y0}" stroke="black"/>"#,
        coord(MARGIN_LEFT + plot_w)
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{x0}" y1="{}" x2="{x0}" y2="{y0}" stroke="black"/>"#,
        coord(MARGIN_TOP)
    );

    // x ticks: one per distinct x when few, else 8 even steps
    let mut x_ticks: Vec<f64> = finite_points.iter().map(|p| p.0).collect();
    x_ticks.sort_by(f64::total_cmp);
    x_ticks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    if x_ticks.len() > 12 || x_ticks.is_empty() {
        x_ticks = (0..=8)
            .map(|i| x_min + (x_max - x_min) * i as f64 / 8.0)
            .collect();
    }
    for &tick in &x_ticks {
        let x = coord(sx(tick));
        let _ = writeln!(
            svg,
            r#"<line x1="{x}" y1="{y0}" x2="{x}" y2="{}" stroke="black"/>"#,
            coord(MARGIN_TOP + plot_h + 5.0)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">{}</text>"#,
            coord(MARGIN_TOP + plot_h + 20.0),
            format_sig(tick)
        );
    }
    // y ticks: 6 even steps
    for i in 0..=6 {
        let tick = y_min + (y_max - y_min) * i as f64 / 6.0;
        let y = coord(sy(tick));
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{y}" x2="{x0}" y2="{y}" stroke="black"/>"#,
            coord(MARGIN_LEFT - 5.0)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{y}" text-anchor="end" dominant-baseline="middle" font-family="sans-serif" font-size="12">{}</text>"#,
            coord(MARGIN_LEFT - 9.0),
            format_sig((tick * 1000.0).round() / 1000.0)
        );
    }

    // axis labels
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
        coord(MARGIN_LEFT + plot_w / 2.0),
        coord(HEIGHT - 15.0),
        escape_xml(x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{}" text-anchor="middle" font-family="sans-serif" font-size="14" transform="rotate(-90 20 {})">{}</text>"#,
        coord(MARGIN_TOP + plot_h / 2.0),
        coord(MARGIN_TOP + plot_h / 2.0),
        escape_xml(y_label)
    );

    // series polylines
    for (idx, s) in series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let mut path = String::new();
        for &(x, y) in s
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
        {
            if !path.is_empty() {
                path.push(' ');
            }
            let _ = write!(path, "{},{}", coord(sx(x)), coord(sy(y)));
        }
        if !path.is_empty() {
            let _ = writeln!(
                svg,
                r#"<polyline points="{path}" fill="none" stroke="{color}" stroke-width="2"/>"#
            );
        }
        // point markers
        for &(x, y) in s
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
        {
            let _ = writeln!(
                svg,
                r#"<circle cx="{}" cy="{}" r="3" fill="{color}"/>"#,
                coord(sx(x)),
                coord(sy(y))
            );
        }
    }

    // legend, top-right inside the plot
    for (idx, s) in series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let ly = MARGIN_TOP + 14.0 + idx as f64 * 20.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="2"/>"#,
            coord(MARGIN_LEFT + plot_w - 120.0),
            coord(ly),
            coord(MARGIN_LEFT + plot_w - 90.0),
            coord(ly)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" dominant-baseline="middle" font-family="sans-serif" font-size="13">{}</text>"#,
            coord(MARGIN_LEFT + plot_w - 82.0),
            coord(ly),
            escape_xml(&s.name)
        );
    }

    svg.push_str("</svg>\n");
    svg
}
