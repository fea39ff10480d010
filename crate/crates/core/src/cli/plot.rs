//! Figure layouts built from a result table.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numfmt::format_sig;
use crate::observe::{dr_dk, peak_and_width, Peak};
use crate::sweep::{PSelector, ResultTable};

use super::svg::{render, Panel, Series};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureKind {
    /// `R(K)`, one curve per `p`, one panel per `N`.
    RVsK,
    /// `R(N)`, one curve per subsampled `K`.
    RVsN,
    /// `R(K)` and `dR/dK`, one curve per `N`.
    DrDk,
}

impl FromStr for FigureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "r_vs_k" => Ok(FigureKind::RVsK),
            "r_vs_n" => Ok(FigureKind::RVsN),
            "drdk" => Ok(FigureKind::DrDk),
            _ => Err(Error::param(format!("unknown figure kind {s:?} (r_vs_k|r_vs_n|drdk)"))),
        }
    }
}

impl FigureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FigureKind::RVsK => "r_vs_k",
            FigureKind::RVsN => "r_vs_n",
            FigureKind::DrDk => "drdk",
        }
    }
}

fn ensure_rows(t: &ResultTable, what: &str) -> Result<()> {
    if t.is_empty() {
        Err(Error::Malformed(format!("no rows to plot{what}")))
    } else {
        Ok(())
    }
}

/// `R(K)` per `p`; restricted to size `only_n` when given.
pub fn r_vs_k(table: &ResultTable, only_n: Option<usize>) -> Result<String> {
    ensure_rows(table, "")?;
    let sizes: Vec<usize> = table.sizes().into_iter().filter(|&n| only_n.is_none_or(|m| m == n)).collect();
    if sizes.is_empty() {
        return Err(Error::Malformed(format!("no rows for N = {}", only_n.unwrap_or(0))));
    }
    let panels = sizes
        .iter()
        .map(|&n| {
            let mut panel = Panel::new(format!("N = {n}"), "K", "R");
            panel.y_range = Some((0.0, 1.0));
            for p in table.p_values(n) {
                let tag = if PSelector::Threshold.matches(n, p) { " (p_c)" } else { "" };
                panel.series.push(Series::new(format!("p = {}{tag}", format_sig(p, 4)), table.mean_curve(n, p)));
            }
            panel
        })
        .collect::<Vec<_>>();
    Ok(render("Order parameter R versus coupling K", &panels))
}

/// `R(N)` for every tenth point of the `K` grid, at the selected `p`.
pub fn r_vs_n(table: &ResultTable, sel: &PSelector) -> Result<String> {
    let t = table.select(sel);
    ensure_rows(&t, &format!(" for p = {sel}"))?;
    let sizes = t.sizes();
    let curves: Vec<(usize, Vec<(f64, f64)>)> = sizes.iter().map(|&n| (n, t.mean_curve(n, t.p_values(n)[0]))).collect();
    let grid: Vec<f64> = curves[0].1.iter().map(|c| c.0).collect();
    let stride = ((grid.len().saturating_sub(1)) / 10).max(1);
    let mut panel = Panel::new(format!("p = {sel}"), "N", "R");
    panel.y_range = Some((0.0, 1.0));
    panel.log_x = sizes.len() > 1;
    for k in grid.iter().step_by(stride) {
        let pts: Vec<(f64, f64)> =
            curves.iter().filter_map(|(n, c)| c.iter().find(|(kk, _)| kk == k).map(|&(_, r)| (*n as f64, r))).collect();
        panel.series.push(Series::new(format!("K = {}", format_sig(*k, 4)), pts));
    }
    Ok(render("Order parameter R versus network size N", &[panel]))
}

/// `R(K)` and `dR/dK` per size at the selected `p`, with the derivative peaks.
pub fn drdk(table: &ResultTable, sel: &PSelector) -> Result<(String, Vec<(usize, Peak)>)> {
    let t = table.select(sel);
    ensure_rows(&t, &format!(" for p = {sel}"))?;
    let mut r_panel = Panel::new(format!("R(K), p = {sel}"), "K", "R");
    r_panel.y_range = Some((0.0, 1.0));
    let mut d_panel = Panel::new("dR/dK", "K", "dR/dK");
    let mut peaks = Vec::new();
    for n in t.sizes() {
        let curve = t.mean_curve(n, t.p_values(n)[0]);
        let (k, r): (Vec<f64>, Vec<f64>) = curve.iter().copied().unzip();
        let d = dr_dk(&k, &r)?;
        let peak = peak_and_width(&k, &d)?;
        r_panel.series.push(Series::new(format!("N = {n}"), curve));
        d_panel.series.push(
            Series::new(format!("N = {n}"), k.iter().copied().zip(d).collect())
                .with_data("peak-k", format_sig(peak.x, 9))
                .with_data("peak-height", format_sig(peak.height, 9))
                .with_data("half-height-width", format_sig(peak.width, 9))
                .with_data("core-half-height-width", format_sig(peak.core_width, 9)),
        );
        peaks.push((n, peak));
    }
    Ok((render("Onset of synchronisation", &[r_panel, d_panel]), peaks))
}

pub fn figure(kind: FigureKind, table: &ResultTable, sel: &PSelector, only_n: Option<usize>) -> Result<String> {
    match kind {
        FigureKind::RVsK => r_vs_k(table, only_n),
        FigureKind::RVsN => r_vs_n(table, sel),
        FigureKind::DrDk => drdk(table, sel).map(|(svg, _)| svg),
    }
}
