//! Self-contained SVG convergence plots with a logarithmic y-axis.

use std::fmt::Write as _;

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XAxis {
    Iteration,
    WallTime,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub x: Vec<f64>,
    /// f − f⋆, plotted on log scale.
    pub y: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotStyle {
    pub width: f64,
    pub height: f64,
    pub x_axis: XAxis,
    pub title: Option<String>,
}

impl Default for PlotStyle {
    fn default() -> Self {
        PlotStyle { width: 720.0, height: 440.0, x_axis: XAxis::Iteration, title: None }
    }
}

const PALETTE: [&str; 10] =
    ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];

const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 170.0;
const MARGIN_TOP: f64 = 36.0;
const MARGIN_BOTTOM: f64 = 52.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// A 1-2-5 step giving about five ticks over `range`.
fn nice_step(range: f64) -> f64 {
    let raw = range / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let r = raw / mag;
    mag * if r <= 1.0 {
        1.0
    } else if r <= 2.0 {
        2.0
    } else if r <= 5.0 {
        5.0
    } else {
        10.0
    }
}

/// Renders one polyline per series. Nonpositive y values are clipped to the
/// smallest positive value in the input and the plot carries a warning.
pub fn emit_plot(series: &[Series], style: &PlotStyle) -> Result<String> {
    if series.is_empty() {
        return Err(BenchError::Usage("nothing to plot".into()));
    }
    for s in series {
        if s.x.len() != s.y.len() {
            return Err(BenchError::Usage(format!(
                "series {} has {} x and {} y values",
                s.label,
                s.x.len(),
                s.y.len()
            )));
        }
    }
    let finite = |v: &f64| v.is_finite();
    let ys = || series.iter().flat_map(|s| s.y.iter().copied()).filter(finite);
    let y_floor = ys().filter(|v| *v > 0.0).fold(f64::INFINITY, f64::min);
    if !y_floor.is_finite() {
        return Err(BenchError::Usage("no positive values to plot on a log scale".into()));
    }
    let clipped = ys().filter(|v| *v <= 0.0).count();
    let y_max = ys().fold(y_floor, f64::max);
    let (mut lo, mut hi) = (y_floor.log10().floor(), y_max.log10().ceil());
    if hi <= lo {
        lo -= 1.0;
        hi += 1.0;
    }
    let xs = || series.iter().flat_map(|s| s.x.iter().copied()).filter(finite);
    let x_min = xs().fold(f64::INFINITY, f64::min);
    let mut x_max = xs().fold(f64::NEG_INFINITY, f64::max);
    let x_min = if x_min.is_finite() { x_min.min(0.0) } else { 0.0 };
    if !(x_max > x_min) {
        x_max = x_min + 1.0;
    }

    let (w, h) = (style.width, style.height);
    let (pw, ph) = (w - MARGIN_LEFT - MARGIN_RIGHT, h - MARGIN_TOP - MARGIN_BOTTOM);
    let px = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * pw;
    let py = |y: f64| MARGIN_TOP + (hi - y.max(y_floor).log10()) / (hi - lo) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    if let Some(t) = &style.title {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
            MARGIN_LEFT + pw / 2.0,
            escape(t)
        );
    }
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN_LEFT:.2}" y="{MARGIN_TOP:.2}" width="{pw:.2}" height="{ph:.2}" fill="none" stroke="black"/>"#
    );
    // y ticks at decades
    let mut e = lo as i64;
    while e as f64 <= hi {
        let y = MARGIN_TOP + (hi - e as f64) / (hi - lo) * ph;
        let _ = writeln!(
            s,
            r##"<line x1="{MARGIN_LEFT:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">1e{e}</text>"##,
            MARGIN_LEFT + pw,
            MARGIN_LEFT - 6.0,
            y + 4.0
        );
        e += 1;
    }
    let step = nice_step(x_max - x_min);
    let mut t = (x_min / step).ceil() * step;
    while t <= x_max + 1e-9 * step {
        let x = px(t);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            MARGIN_TOP + ph,
            MARGIN_TOP + ph + 5.0,
            MARGIN_TOP + ph + 18.0,
            format_tick(t)
        );
        t += step;
    }
    let xlabel = match style.x_axis {
        XAxis::Iteration => "iteration k",
        XAxis::WallTime => "wall time (s)",
    };
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{xlabel}</text>"#,
        MARGIN_LEFT + pw / 2.0,
        h - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">f − f⋆</text>"#,
        MARGIN_TOP + ph / 2.0,
        MARGIN_TOP + ph / 2.0
    );

    for (i, ser) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut pts = String::new();
        for (x, y) in ser.x.iter().zip(&ser.y) {
            if x.is_finite() && y.is_finite() {
                let _ = write!(pts, "{:.2},{:.2} ", px(*x), py(*y));
            }
        }
        let _ = writeln!(
            s,
            r#"<polyline class="series" fill="none" stroke="{color}" stroke-width="1.5" points="{}"><title>{}</title></polyline>"#,
            pts.trim_end(),
            escape(&ser.label)
        );
        let ly = MARGIN_TOP + 14.0 + 18.0 * i as f64;
        let lx = MARGIN_LEFT + pw + 12.0;
        let _ = writeln!(
            s,
            r#"<g class="legend"><line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text></g>"#,
            lx + 22.0,
            lx + 28.0,
            ly + 4.0,
            escape(&ser.label)
        );
    }
    if clipped > 0 {
        let _ = writeln!(
            s,
            r##"<text class="warning" x="{:.2}" y="{:.2}" fill="#b00000">warning: {clipped} nonpositive value(s) clipped to {}</text>"##,
            MARGIN_LEFT + 4.0,
            MARGIN_TOP + ph - 6.0,
            crate::output::fmt_f64(y_floor)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn format_tick(t: f64) -> String {
    if t == 0.0 || (t.abs() >= 1e-3 && t.abs() < 1e6) {
        let r = (t * 1e6).round() / 1e6;
        format!("{r}")
    } else {
        format!("{t:.1e}")
    }
}
