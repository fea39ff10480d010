//! Sweep-level properties at reduced scale.

use kuramoto_er::prelude::*;

fn small(seed: u64) -> SweepConfig {
    let mut cfg = SweepConfig::desk();
    cfg.seed = seed;
    cfg.sizes = vec![12, 24];
    cfg.k_steps = 5;
    cfg.replicates = 2;
    cfg.sim.steps = 300;
    cfg.sim.tail = 100;
    cfg
}

#[test]
fn table_is_independent_of_worker_count() {
    let one = run_sweep(&SweepConfig { workers: Some(1), ..small(5) }).unwrap();
    let three = run_sweep(&SweepConfig { workers: Some(3), ..small(5) }).unwrap();
    let auto = run_sweep(&small(5)).unwrap();
    assert_eq!(one.to_csv_string(), three.to_csv_string());
    assert_eq!(one.to_csv_string(), auto.to_csv_string());
    assert_eq!(one.len(), small(5).task_count().unwrap());
}

#[test]
fn replicates_differ_but_tables_reproduce() {
    let t = run_sweep(&small(9)).unwrap();
    let sel = t.select(&PSelector::Threshold);
    let by_rep =
        |rep| sel.rows.iter().filter(|r| r.n == 24 && r.rep == rep).map(|r| (r.edges, r.r_mean)).collect::<Vec<_>>();
    assert_ne!(by_rep(0), by_rep(1));
    assert_eq!(run_sweep(&small(9)).unwrap(), t);
    assert_ne!(run_sweep(&small(10)).unwrap(), t);
}

#[test]
fn csv_round_trip_is_lossless() {
    let t = run_sweep(&small(2)).unwrap();
    let text = t.to_csv_string();
    let back = ResultTable::read_csv(text.as_bytes()).unwrap();
    assert_eq!(back.to_csv_string(), text);
    assert_eq!(back.len(), t.len());
}

#[test]
fn deep_incoherent_regime_stays_near_finite_size_floor() {
    let mut cfg = SweepConfig::desk();
    cfg.sizes = vec![50, 100];
    cfg.k_max = 0.04;
    cfg.k_steps = 2;
    let t = run_sweep(&cfg).unwrap();
    for n in [50, 100] {
        for p in t.p_values(n) {
            for (k, r) in t.mean_curve(n, p) {
                assert!(r <= 3.0 / (n as f64).sqrt(), "N = {n}, p = {p}, K = {k}: R = {r}");
            }
        }
    }
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut r = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        for &k in &idx[i..=j] {
            r[k] = (i + j) as f64 / 2.0;
        }
        i = j + 1;
    }
    r
}

fn spearman(x: &[f64], y: &[f64]) -> f64 {
    let (rx, ry) = (ranks(x), ranks(y));
    let m = (x.len() - 1) as f64 / 2.0;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - m) * (b - m)).sum();
    let vx: f64 = rx.iter().map(|a| (a - m).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - m).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

#[test]
fn r_rises_with_k() {
    let mut cfg = SweepConfig::desk();
    cfg.sizes = vec![30, 60];
    cfg.k_steps = 20;
    cfg.replicates = 3;
    cfg.sim.steps = 2000;
    cfg.sim.tail = 500;
    let t = run_sweep(&cfg).unwrap();
    for n in t.sizes() {
        for p in t.p_values(n) {
            let (k, r): (Vec<f64>, Vec<f64>) = t.mean_curve(n, p).into_iter().unzip();
            let rho = spearman(&k, &r);
            assert!(rho >= 0.95, "N = {n}, p = {p}: Spearman {rho}");
        }
    }
}

#[test]
#[ignore = "paper preset at N = 300; about an hour of CPU time"]
fn paper_preset_smoke_at_n_300() {
    let cfg = SweepConfig { sizes: vec![300], ..SweepConfig::paper() };
    let t = run_sweep(&cfg).unwrap();
    assert_eq!(t.len(), cfg.task_count().unwrap());
    assert_eq!(t.p_values(300).len(), 11);
}
