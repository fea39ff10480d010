//! A small sweep end to end: run the grid, write the CSV, estimate K_c at
//! p_c and p = 1, and draw the three figures.
//!
//! The default grid is cut down to finish in well under a minute; at that
//! scale the K_c estimates are mostly noise. Pass `--full` for the desk
//! preset (sizes 50, 100, 200 with five replicates).
//!
//! cargo run --release --example desk_sweep -- [out_dir] [--full]

use std::fs;
use std::path::PathBuf;

use kuramoto_er::cli::plot::{self, FigureKind};
use kuramoto_er::prelude::*;

fn main() -> Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let full = args.iter().any(|a| a == "--full");
    let out = PathBuf::from(args.iter().find(|a| !a.starts_with("--")).map_or("desk_out", |s| s.as_str()));

    let mut cfg = SweepConfig::desk();
    if !full {
        cfg.sizes = vec![25, 50];
        cfg.k_steps = 40;
        cfg.k_max = 0.4;
        cfg.replicates = 2;
        cfg.sim.steps = 2000;
        cfg.sim.tail = 500;
    }
    println!("{} simulations", cfg.task_count()?);
    let table = run_sweep(&cfg)?;
    fs::create_dir_all(&out)?;
    table.write_csv_file(&out.join("results.csv"))?;

    for sel in [PSelector::Threshold, PSelector::Value(1.0)] {
        let t = table.select(&sel);
        match estimate_kc(&t, &t.sizes()) {
            Ok(est) => println!("p = {sel}: k_c = {:.3}", est.k_c),
            Err(e) => println!("p = {sel}: {e}"),
        }
    }

    for kind in [FigureKind::RVsK, FigureKind::RVsN, FigureKind::DrDk] {
        let svg = plot::figure(kind, &table, &PSelector::Threshold, None)?;
        fs::write(out.join(format!("{}.svg", kind.as_str())), svg)?;
    }
    let (_, peaks) = plot::drdk(&table, &PSelector::Threshold)?;
    for (n, pk) in peaks {
        println!("N = {n}: dR/dK peaks at K = {:.3}, height {:.2}, width {:.3}", pk.x, pk.height, pk.width);
    }
    println!("wrote {}", out.display());
    Ok(())
}
