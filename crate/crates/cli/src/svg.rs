//! Static line plots on a fixed 800×600 canvas.

use std::fmt::Write;

use crate::format::sig;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const TICKS: usize = 5;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

/// Panels are stacked vertically.
pub fn render(panels: &[Panel]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let slot = HEIGHT / panels.len().max(1) as f64;
    for (i, panel) in panels.iter().enumerate() {
        draw_panel(&mut out, panel, i as f64 * slot, slot);
    }
    out.push_str("</svg>\n");
    out
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo <= 1e-12 * (lo.abs() + hi.abs()).max(1e-300) {
        let pad = if lo == 0.0 { 1.0 } else { 0.05 * lo.abs() };
        return (lo - pad, hi + pad);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn draw_panel(out: &mut String, panel: &Panel, y0: f64, height: f64) {
    let points = || panel.series.iter().flat_map(|s| s.points.iter().copied());
    let (xmin, xmax) = bounds(points().map(|p| p.0));
    let (ymin, ymax) = bounds(points().map(|p| p.1));
    let (px0, px1) = (LEFT, WIDTH - RIGHT);
    let (py0, py1) = (y0 + height - BOTTOM, y0 + TOP);
    let sx = |x: f64| px0 + (x - xmin) / (xmax - xmin) * (px1 - px0);
    let sy = |y: f64| py0 + (y - ymin) / (ymax - ymin) * (py1 - py0);

    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="14">{}</text>"#,
        (px0 + px1) / 2.0,
        y0 + TOP - 14.0,
        escape(&panel.title)
    );
    let _ = writeln!(
        out,
        r#"<rect x="{px0:.2}" y="{py1:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        px1 - px0,
        py0 - py1
    );
    for t in 0..TICKS {
        let f = t as f64 / (TICKS - 1) as f64;
        let (xv, yv) = (xmin + f * (xmax - xmin), ymin + f * (ymax - ymin));
        let (x, y) = (sx(xv), sy(yv));
        let _ = writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{py0:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
            py0 + 5.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            py0 + 18.0,
            sig(xv, 4)
        );
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{px0:.2}" y2="{y:.2}" stroke="black"/>"#,
            px0 - 5.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            px0 - 8.0,
            y + 4.0,
            sig(yv, 4)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        (px0 + px1) / 2.0,
        py0 + 36.0,
        escape(&panel.x_label)
    );
    let (lx, ly) = (20.0, (py0 + py1) / 2.0);
    let _ = writeln!(
        out,
        r#"<text x="{lx:.2}" y="{ly:.2}" text-anchor="middle" transform="rotate(-90 {lx:.2} {ly:.2})">{}</text>"#,
        escape(&panel.y_label)
    );

    for (i, s) in panel.series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            path.join(" ")
        );
        for &(x, y) in &s.points {
            let _ = writeln!(
                out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                sx(x),
                sy(y)
            );
        }
        let ly = py1 + 10.0 + 18.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#,
            px1 + 10.0,
            px1 + 30.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
            px1 + 36.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_fixed_canvas() {
        let panel = Panel {
            title: "a < b".into(),
            x_label: "n".into(),
            y_label: "E".into(),
            series: vec![Series {
                label: "s".into(),
                points: vec![(0.0, 1.0), (1.0, 2.0)],
            }],
        };
        let svg = render(&[panel]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains(r#"viewBox="0 0 800 600""#));
        assert!(svg.contains("a &lt; b"));
        assert!(!svg.contains("<script"));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn flat_series_gets_padded_range() {
        assert_eq!(bounds([2.0, 2.0].into_iter()), (1.9, 2.1));
        assert_eq!(bounds(std::iter::empty()), (0.0, 1.0));
    }
}
