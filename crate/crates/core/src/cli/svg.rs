//! Minimal static SVG line charts. Output is a pure function of the input
//! data: no timestamps, fixed-precision coordinates.

use std::fmt::Write as _;

const PALETTE: [&str; 10] =
    ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];

const PANEL_W: f64 = 420.0;
const PANEL_H: f64 = 320.0;
const MARGIN_L: f64 = 60.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 36.0;
const MARGIN_B: f64 = 48.0;
const LEGEND_W: f64 = 150.0;

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// Extra `data-*` attributes written on the polyline.
    pub data: Vec<(String, String)>,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self { label: label.into(), points, data: Vec::new() }
    }

    pub fn with_data(mut self, key: &str, value: impl Into<String>) -> Self {
        self.data.push((key.to_string(), value.into()));
        self
    }
}

#[derive(Debug, Clone)]
pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    /// Fixed y range; computed from the data when `None`.
    pub y_range: Option<(f64, f64)>,
    pub log_x: bool,
}

impl Panel {
    pub fn new(title: impl Into<String>, x_label: &str, y_label: &str) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            series: Vec::new(),
            y_range: None,
            log_x: false,
        }
    }
}

/// Formats a coordinate or tick with at most `dp` decimals, trailing zeros removed.
fn num(x: f64, dp: usize) -> String {
    let s = format!("{:.*}", dp, x);
    let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let frac = raw / mag;
    let nice = if frac < 1.5 {
        1.0
    } else if frac < 3.5 {
        2.0
    } else if frac < 7.5 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = nice_step(hi - lo);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step + 1e-9).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn data_range(vals: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    vals.filter(|v| v.is_finite()).fold(None, |acc, v| match acc {
        None => Some((v, v)),
        Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
    })
}

fn pad_range((lo, hi): (f64, f64)) -> (f64, f64) {
    if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

/// Renders panels side by side, each with its own legend.
pub fn render(title: &str, panels: &[Panel]) -> String {
    let cell_w = PANEL_W + LEGEND_W;
    let width = cell_w * panels.len().max(1) as f64;
    let height = PANEL_H + 30.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#,
        w = num(width, 1),
        h = num(height, 1)
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="15">{}</text>"#,
        num(width / 2.0, 1),
        escape(title)
    );
    for (pi, panel) in panels.iter().enumerate() {
        render_panel(&mut out, panel, pi as f64 * cell_w, 30.0);
    }
    out.push_str("</svg>\n");
    out
}

fn render_panel(out: &mut String, panel: &Panel, ox: f64, oy: f64) {
    let tx = |x: f64| if panel.log_x { x.max(1e-300).log10() } else { x };
    let x_range =
        pad_range(data_range(panel.series.iter().flat_map(|s| s.points.iter().map(|p| tx(p.0)))).unwrap_or((0.0, 1.0)));
    let y_range = panel.y_range.unwrap_or_else(|| {
        pad_range(data_range(panel.series.iter().flat_map(|s| s.points.iter().map(|p| p.1))).unwrap_or((0.0, 1.0)))
    });
    let (x0, y0) = (ox + MARGIN_L, oy + MARGIN_T);
    let (pw, ph) = (PANEL_W - MARGIN_L - MARGIN_R, PANEL_H - MARGIN_T - MARGIN_B);
    let sx = |x: f64| x0 + (tx(x) - x_range.0) / (x_range.1 - x_range.0) * pw;
    let sy = |y: f64| y0 + ph - (y - y_range.0) / (y_range.1 - y_range.0) * ph;

    let _ = writeln!(out, r#"<g class="panel" data-title="{}">"#, escape(&panel.title));
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="13">{}</text>"#,
        num(x0 + pw / 2.0, 1),
        num(oy + 18.0, 1),
        escape(&panel.title)
    );
    let _ = writeln!(
        out,
        r##"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#333"/>"##,
        num(x0, 1),
        num(y0, 1),
        num(pw, 1),
        num(ph, 1)
    );
    let x_ticks = if panel.log_x {
        ticks(x_range.0, x_range.1).into_iter().map(|e| 10f64.powf(e)).collect::<Vec<_>>()
    } else {
        ticks(x_range.0, x_range.1)
    };
    for t in x_ticks {
        let px = sx(t);
        let _ = writeln!(
            out,
            r##"<line x1="{p}" y1="{a}" x2="{p}" y2="{b}" stroke="#333"/><text x="{p}" y="{c}" text-anchor="middle">{l}</text>"##,
            p = num(px, 2),
            a = num(y0 + ph, 1),
            b = num(y0 + ph + 5.0, 1),
            c = num(y0 + ph + 18.0, 1),
            l = num(t, 3)
        );
    }
    for t in ticks(y_range.0, y_range.1) {
        let py = sy(t);
        let _ = writeln!(
            out,
            r##"<line x1="{a}" y1="{p}" x2="{b}" y2="{p}" stroke="#333"/><text x="{c}" y="{q}" text-anchor="end">{l}</text>"##,
            p = num(py, 2),
            q = num(py + 4.0, 2),
            a = num(x0 - 5.0, 1),
            b = num(x0, 1),
            c = num(x0 - 8.0, 1),
            l = num(t, 3)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        num(x0 + pw / 2.0, 1),
        num(y0 + ph + 38.0, 1),
        escape(&panel.x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="{x}" y="{y}" text-anchor="middle" transform="rotate(-90 {x} {y})">{l}</text>"#,
        x = num(ox + 16.0, 1),
        y = num(y0 + ph / 2.0, 1),
        l = escape(&panel.y_label)
    );

    for (si, s) in panel.series.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .map(|&(x, y)| format!("{},{}", num(sx(x), 2), num(sy(y.clamp(y_range.0, y_range.1)), 2)))
            .collect();
        let data: String = s.data.iter().map(|(k, v)| format!(r#" data-{}="{}""#, k, escape(v))).collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" data-label="{}"{data} points="{}"/>"#,
            escape(&s.label),
            pts.join(" ")
        );
        let ly = y0 + 14.0 + 16.0 * si as f64;
        let lx = ox + PANEL_W;
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="{color}" stroke-width="2"/><text x="{}" y="{t}">{}</text>"#,
            num(lx, 1),
            num(lx + 18.0, 1),
            num(lx + 22.0, 1),
            escape(&s.label),
            y = num(ly, 1),
            t = num(ly + 4.0, 1)
        );
    }
    out.push_str("</g>\n");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_polyline_per_series_and_deterministic() {
        let mut p = Panel::new("demo", "K", "R");
        p.series.push(Series::new("a", vec![(0.0, 0.1), (1.0, 0.9)]));
        p.series.push(Series::new("b <x>", vec![(0.0, 0.2), (1.0, 0.8)]).with_data("peak-k", "0.5"));
        let svg = render("t", &[p.clone(), p]);
        assert_eq!(svg.matches("<polyline").count(), 4);
        assert_eq!(svg.matches(r#"class="panel""#).count(), 2);
        assert!(svg.contains("b &lt;x&gt;"));
        assert!(svg.contains(r#"data-peak-k="0.5""#));
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn ticks_cover_range() {
        let t = ticks(0.0, 1.0);
        assert_eq!(t.first(), Some(&0.0));
        assert!((t.last().unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(num(0.30000000000000004, 3), "0.3");
        assert_eq!(num(-0.0001, 2), "0");
    }
}
