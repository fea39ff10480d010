//! Critical coupling from finite-size scaling: at the onset of
//! synchronisation the replicate-averaged `R(N, K)` depends least on `N`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::table::ResultTable;

pub const KC_METHOD: &str = "min-variation-across-N";

/// Grand-mean `R` bounds of the transition window searched for `K_c`.
pub const TRANSITION_WINDOW: (f64, f64) = (0.15, 0.85);

#[derive(Debug, Clone, PartialEq)]
pub struct KcEstimate {
    pub k_c: f64,
    pub k_grid: Vec<f64>,
    /// `max_N R̄(N, K) − min_N R̄(N, K)` at every grid point.
    pub variation_by_k: Vec<f64>,
    /// Mean over `N` of the replicate-averaged `R` at every grid point.
    pub grand_mean_by_k: Vec<f64>,
    pub method: &'static str,
}

impl KcEstimate {
    pub fn in_window(&self, i: usize) -> bool {
        let g = self.grand_mean_by_k[i];
        g >= TRANSITION_WINDOW.0 && g <= TRANSITION_WINDOW.1
    }
}

/// Estimates `K_c` from a table holding a single edge probability per size.
///
/// Every size must cover the same `K` grid. Ties in the variation are broken
/// toward the smaller `K`.
pub fn estimate_kc(table: &ResultTable, sizes: &[usize]) -> Result<KcEstimate> {
    if sizes.len() < 2 {
        return Err(Error::param("K_c estimation needs at least two network sizes"));
    }
    let mut per_size: Vec<BTreeMap<u64, (f64, f64, usize)>> = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let mut p_seen: Option<f64> = None;
        let mut acc: BTreeMap<u64, (f64, f64, usize)> = BTreeMap::new();
        for r in table.rows.iter().filter(|r| r.n == n) {
            match p_seen {
                None => p_seen = Some(r.p),
                Some(p) if p != r.p => {
                    return Err(Error::param(format!(
                        "table holds several edge probabilities for N = {n}; select one first"
                    )))
                }
                _ => {}
            }
            if !(r.k >= 0.0) {
                return Err(Error::Malformed(format!("negative or NaN K = {} in table", r.k)));
            }
            let k = r.k + 0.0; // folds -0 into +0
            let e = acc.entry(k.to_bits()).or_insert((k, 0.0, 0));
            e.1 += r.r_mean;
            e.2 += 1;
        }
        if acc.is_empty() {
            return Err(Error::IncompleteTable(format!("no rows for N = {n}")));
        }
        per_size.push(acc);
    }

    let k_grid: Vec<f64> = per_size[0].values().map(|v| v.0).collect();
    for (acc, &n) in per_size.iter().zip(sizes).skip(1) {
        if acc.len() != k_grid.len() || acc.values().zip(&k_grid).any(|(v, &k)| v.0 != k) {
            let missing = k_grid
                .iter()
                .find(|k| !acc.contains_key(&k.to_bits()))
                .map(|k| format!("K = {k} missing for N = {n}"))
                .unwrap_or_else(|| format!("N = {n} has K values absent for N = {}", sizes[0]));
            return Err(Error::IncompleteTable(missing));
        }
    }

    let means: Vec<Vec<f64>> =
        per_size.iter().map(|acc| acc.values().map(|&(_, s, c)| s / c as f64).collect()).collect();
    let mut variation_by_k = Vec::with_capacity(k_grid.len());
    let mut grand_mean_by_k = Vec::with_capacity(k_grid.len());
    for i in 0..k_grid.len() {
        let (mut lo, mut hi, mut sum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
        for m in &means {
            lo = lo.min(m[i]);
            hi = hi.max(m[i]);
            sum += m[i];
        }
        variation_by_k.push(hi - lo);
        grand_mean_by_k.push(sum / means.len() as f64);
    }

    let mut best: Option<usize> = None;
    for i in 0..k_grid.len() {
        let g = grand_mean_by_k[i];
        if g < TRANSITION_WINDOW.0 || g > TRANSITION_WINDOW.1 {
            continue;
        }
        if best.is_none_or(|b| variation_by_k[i] < variation_by_k[b]) {
            best = Some(i);
        }
    }
    let best = best.ok_or(Error::NoTransition { lo: TRANSITION_WINDOW.0, hi: TRANSITION_WINDOW.1 })?;
    Ok(KcEstimate { k_c: k_grid[best], k_grid, variation_by_k, grand_mean_by_k, method: KC_METHOD })
}
