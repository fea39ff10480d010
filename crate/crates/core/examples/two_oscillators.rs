//! Two coupled oscillators with frequency mismatch Δω. The phase difference
//! obeys φ' = Δω − 2K sin φ, which locks at sin φ* = Δω / 2K when 2K > Δω
//! and slips otherwise. The simulated tail R is compared with cos(φ*/2).

use kuramoto_er::prelude::*;

fn main() -> Result<()> {
    let dw = 0.1;
    let g = Graph::complete(2);
    let e = Ensemble::new(vec![0.0, 0.0], vec![-dw / 2.0, dw / 2.0])?;
    println!("{:>6} {:>10} {:>10} {:>14}", "K", "R tail", "R locked", "phi(T) [rad]");
    for k in [0.02, 0.04, 0.049, 0.051, 0.06, 0.1, 0.2] {
        let cfg = SimConfig::default().with_coupling(k);
        let s = run(&g, &e, &cfg)?;
        let locked = if 2.0 * k > dw { format!("{:.4}", ((dw / (2.0 * k)).asin() / 2.0).cos()) } else { "-".into() };
        let phi = s.theta_final[1] - s.theta_final[0];
        println!("{k:>6.3} {:>10.4} {locked:>10} {phi:>14.3}", s.r_mean);
    }
    Ok(())
}
