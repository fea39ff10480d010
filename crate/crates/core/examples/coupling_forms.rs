//! Degree-normalised network coupling versus the all-to-all K/N form. On
//! the complete graph they differ only by the factor N/(N−1); on a sparse
//! threshold graph the network form synchronises later.

use kuramoto_er::prelude::*;

fn main() -> Result<()> {
    let n = 100;
    let master = RngStream::new(7).derive(n as u64);
    let e = init_ensemble(n, &mut master.derive(1), &mut master.derive(2), &EnsembleSpec::default())?;
    let complete = Graph::complete(n);
    let sparse = gen_connected_at_threshold(n, &master.derive(0), 10_000)?;
    println!("{:>5} {:>12} {:>12} {:>12}", "K", "all-to-all", "complete", "threshold");
    for k in [0.1, 0.15, 0.2, 0.25, 0.3, 0.5] {
        let mf = SimConfig { coupling: CouplingSpec::meanfield(k), ..SimConfig::default() };
        let nw = SimConfig::default().with_coupling(k);
        println!(
            "{k:>5.2} {:>12.4} {:>12.4} {:>12.4}",
            run(&complete, &e, &mf)?.r_mean,
            run(&complete, &e, &nw)?.r_mean,
            run(&sparse, &e, &nw)?.r_mean
        );
    }
    Ok(())
}
