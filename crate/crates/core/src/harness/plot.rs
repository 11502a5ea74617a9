use std::fmt::Write as _;
use std::path::Path;

use super::experiment::{ResultsTable, SummaryPoint};
use crate::error::{BaxError, Result};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 170.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 50.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

/// Maps data coordinates to SVG pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlotLayout {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl PlotLayout {
    fn from_series(series: &[(String, Vec<SummaryPoint>)]) -> Self {
        let mut l = PlotLayout {
            x_min: f64::INFINITY,
            x_max: f64::NEG_INFINITY,
            y_min: f64::INFINITY,
            y_max: f64::NEG_INFINITY,
        };
        for (_, pts) in series {
            for p in pts {
                l.x_min = l.x_min.min(p.iteration as f64);
                l.x_max = l.x_max.max(p.iteration as f64);
                l.y_min = l.y_min.min(p.mean - p.std_err);
                l.y_max = l.y_max.max(p.mean + p.std_err);
            }
        }
        if l.x_max <= l.x_min {
            l.x_max = l.x_min + 1.0;
        }
        if l.y_max <= l.y_min {
            l.y_min -= 0.5;
            l.y_max += 0.5;
        }
        l
    }

    /// Layout the plot of `metric` in `table` uses.
    pub fn for_table(table: &ResultsTable, metric: &str) -> Self {
        Self::from_series(&collect(table, metric))
    }

    pub fn to_pixel(&self, x: f64, y: f64) -> (f64, f64) {
        let pw = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let ph = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        (
            MARGIN_LEFT + (x - self.x_min) / (self.x_max - self.x_min) * pw,
            MARGIN_TOP + (self.y_max - y) / (self.y_max - self.y_min) * ph,
        )
    }

    pub fn from_pixel(&self, px: f64, py: f64) -> (f64, f64) {
        let pw = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let ph = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        (
            self.x_min + (px - MARGIN_LEFT) / pw * (self.x_max - self.x_min),
            self.y_max - (py - MARGIN_TOP) / ph * (self.y_max - self.y_min),
        )
    }
}

fn collect(table: &ResultsTable, metric: &str) -> Vec<(String, Vec<SummaryPoint>)> {
    table
        .methods()
        .into_iter()
        .map(|m| {
            let s = table.summarize(&m, metric);
            (m, s)
        })
        .filter(|(_, s)| !s.is_empty())
        .collect()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e4 || v.abs() < 1e-3 {
        format!("{v:.2e}")
    } else {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// Renders mean-versus-iteration curves with ±1 standard error bands as SVG.
pub fn render_plot(table: &ResultsTable, metric: &str) -> Result<String> {
    let series = collect(table, metric);
    if series.is_empty() {
        return Err(BaxError::input(format!(
            "no rows for metric `{metric}`; available: {}",
            table.metrics().join(", ")
        )));
    }
    let layout = PlotLayout::from_series(&series);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let (x0, y0) = layout.to_pixel(layout.x_min, layout.y_min);
    let (x1, y1) = layout.to_pixel(layout.x_max, layout.y_max);
    let _ = writeln!(
        svg,
        r#"<rect x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y0 - y1
    );
    for i in 0..=5 {
        let fx = layout.x_min + (layout.x_max - layout.x_min) * i as f64 / 5.0;
        let fy = layout.y_min + (layout.y_max - layout.y_min) * i as f64 / 5.0;
        let (px, _) = layout.to_pixel(fx, layout.y_min);
        let (_, py) = layout.to_pixel(layout.x_min, fy);
        let _ = writeln!(
            svg,
            r#"<line x1="{px:.2}" y1="{y0:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            y0 + 5.0,
            y0 + 20.0,
            tick_label(fx)
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{x0:.2}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            py + 4.0,
            tick_label(fy)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">iteration (queries)</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        svg,
        r#"<text transform="translate(16 {:.2}) rotate(-90)" text-anchor="middle">{}</text>"#,
        (y0 + y1) / 2.0,
        escape(metric)
    );

    for (k, (method, pts)) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let name = escape(method);
        let _ = writeln!(svg, r#"<g class="series" data-method="{name}">"#);
        if pts.iter().any(|p| p.count > 1 && p.std_err > 0.0) && pts.len() > 1 {
            let mut band = String::new();
            for p in pts {
                let (px, py) = layout.to_pixel(p.iteration as f64, p.mean + p.std_err);
                let _ = write!(band, "{px:.4},{py:.4} ");
            }
            for p in pts.iter().rev() {
                let (px, py) = layout.to_pixel(p.iteration as f64, p.mean - p.std_err);
                let _ = write!(band, "{px:.4},{py:.4} ");
            }
            let _ = writeln!(
                svg,
                r#"<polygon class="band" points="{}" fill="{color}" fill-opacity="0.2" stroke="none"/>"#,
                band.trim_end()
            );
        }
        if pts.len() == 1 {
            let p = &pts[0];
            let (px, py) = layout.to_pixel(p.iteration as f64, p.mean);
            let _ = writeln!(
                svg,
                r#"<circle class="mean" cx="{px:.4}" cy="{py:.4}" r="4" fill="{color}"/>"#
            );
        } else {
            let mut line = String::new();
            for p in pts {
                let (px, py) = layout.to_pixel(p.iteration as f64, p.mean);
                let _ = write!(line, "{px:.4},{py:.4} ");
            }
            let _ = writeln!(
                svg,
                r#"<polyline class="mean" points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
                line.trim_end()
            );
        }
        let _ = writeln!(svg, "</g>");
        let ly = MARGIN_TOP + 10.0 + 20.0 * k as f64;
        let lx = WIDTH - MARGIN_RIGHT + 15.0;
        let _ = writeln!(
            svg,
            r#"<g class="legend"><line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="3"/><text x="{:.2}" y="{:.2}">{name}</text></g>"#,
            lx + 25.0,
            lx + 32.0,
            ly + 4.0
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Writes the SVG for `metric` to `out_file`.
pub fn emit_plot(table: &ResultsTable, metric: &str, out_file: impl AsRef<Path>) -> Result<()> {
    let svg = render_plot(table, metric)?;
    let p = out_file.as_ref();
    if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| BaxError::io(dir, e))?;
    }
    std::fs::write(p, svg).map_err(|e| BaxError::io(p, e))
}
