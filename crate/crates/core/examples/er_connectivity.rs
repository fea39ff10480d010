//! How often is G(N, p) connected at the threshold p_c = ln N / N, and what
//! does a graph drawn conditioned on connectivity look like?
//!
//! cargo run --release --example er_connectivity -- [N] [trials]

use kuramoto_er::net::{connectivity_threshold, gen_connected, gen_er, is_connected, DEFAULT_MAX_ATTEMPTS};
use kuramoto_er::sampling::RngStream;

fn main() -> kuramoto_er::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(100, |s| s.parse().expect("N"));
    let trials: usize = args.next().map_or(500, |s| s.parse().expect("trials"));

    let pc = connectivity_threshold(n)?;
    let master = RngStream::new(2024);
    println!("N = {n}, p_c = {pc:.5}, expected mean degree {:.2}", pc * (n - 1) as f64);
    println!("{:>8} {:>10} {:>12}", "p/p_c", "connected", "mean degree");
    for (i, factor) in [0.5, 0.75, 1.0, 1.25, 1.5, 2.0].into_iter().enumerate() {
        let p = (factor * pc).min(1.0);
        let mut connected = 0;
        let mut degree = 0.0;
        for t in 0..trials {
            let g = gen_er(n, p, &mut master.derive(i as u64).derive(t as u64))?;
            connected += usize::from(is_connected(&g));
            degree += g.mean_degree();
        }
        println!("{factor:>8.2} {:>10.3} {:>12.2}", connected as f64 / trials as f64, degree / trials as f64);
    }

    let g = gen_connected(n, pc, &master.derive(99), DEFAULT_MAX_ATTEMPTS)?;
    let degrees = g.degrees();
    println!(
        "conditioned draw: {} edges, degrees {}..={}",
        g.edge_count(),
        degrees.iter().min().unwrap(),
        degrees.iter().max().unwrap()
    );
    Ok(())
}
