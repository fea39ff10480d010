//! Global error of Euler and RK4 on the slipping two-oscillator problem as
//! the step is halved, against an RK4 reference at dt = 0.001.

use kuramoto_er::prelude::*;

fn phase_difference(dt: f64, t_end: f64, scheme: Scheme) -> Result<f64> {
    let g = Graph::complete(2);
    let e = Ensemble::new(vec![0.0, 0.0], vec![-0.05, 0.05])?;
    let steps = (t_end / dt).round() as usize;
    let cfg = SimConfig { dt, steps, tail: steps, scheme, ..SimConfig::default() }.with_coupling(0.04);
    let th = run(&g, &e, &cfg)?.theta_final;
    Ok(th[1] - th[0])
}

fn main() -> Result<()> {
    let t_end = 20.0;
    let reference = phase_difference(0.001, t_end, Scheme::Rk4)?;
    for (scheme, dts) in [(Scheme::Euler, [0.4, 0.2, 0.1, 0.05]), (Scheme::Rk4, [0.4, 0.2, 0.1, 0.05])] {
        println!("{}:", scheme.as_str());
        let mut prev: Option<f64> = None;
        for dt in dts {
            let err = (phase_difference(dt, t_end, scheme)? - reference).abs();
            let ratio = prev.map_or(String::new(), |p| format!("ratio {:.2}", p / err));
            println!("  dt = {dt:<5} error {err:.3e}  {ratio}");
            prev = Some(err);
        }
    }
    Ok(())
}
