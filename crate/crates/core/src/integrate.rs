//! Fixed-step integration of the oscillator dynamics.

use std::io::Write;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{CouplingSpec, Ensemble, KuramotoRhs, PhaseField};
use crate::net::Graph;
use crate::numfmt::g9;
use crate::observe::{order_parameter, tail_stats, OrderParameter};

/// Any phase velocity above this magnitude (rad/s) aborts the run. The
/// Kuramoto field is bounded by `max|ω| + K`.
pub const BLOWUP_LIMIT: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    Euler,
    #[default]
    Rk4,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Euler => "euler",
            Scheme::Rk4 => "rk4",
        }
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euler" => Ok(Scheme::Euler),
            "rk4" => Ok(Scheme::Rk4),
            _ => Err(Error::param(format!("unknown scheme {s:?} (euler|rk4)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    /// Time step in seconds.
    pub dt: f64,
    pub steps: usize,
    /// Number of final steps averaged into `r_mean`.
    pub tail: usize,
    pub scheme: Scheme,
    pub coupling: CouplingSpec,
    /// Keep the full per-step `R` series in the summary.
    pub record_series: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt: 0.1,
            steps: 5000,
            tail: 1000,
            scheme: Scheme::Rk4,
            coupling: CouplingSpec::default(),
            record_series: false,
        }
    }
}

impl SimConfig {
    pub fn with_coupling(mut self, k: f64) -> Self {
        self.coupling.k = k;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::param(format!("dt must be positive, got {}", self.dt)));
        }
        if self.steps == 0 {
            return Err(Error::param("steps must be positive"));
        }
        if self.tail == 0 || self.tail > self.steps {
            return Err(Error::param(format!("tail must lie in 1..={}, got {}", self.steps, self.tail)));
        }
        self.coupling.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub r_mean: f64,
    /// Population standard deviation of `R` over the tail.
    pub r_std: f64,
    pub psi_final: f64,
    pub r_series: Option<Vec<f64>>,
    pub theta_final: Vec<f64>,
}

/// What the observer sees after each step.
#[derive(Debug, Clone, Copy)]
pub struct StepRecord<'a> {
    /// 1-based step index.
    pub step: usize,
    pub t: f64,
    pub theta: &'a [f64],
    pub order: OrderParameter,
}

/// Work buffers for one integration; reused across steps.
#[derive(Debug, Clone)]
pub struct Stepper {
    scheme: Scheme,
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    stage: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Blowup;

fn bounded(v: &[f64]) -> bool {
    v.iter().all(|x| x.abs() <= BLOWUP_LIMIT)
}

impl Stepper {
    pub fn new(n: usize, scheme: Scheme) -> Self {
        let stage_buf = || if scheme == Scheme::Rk4 { vec![0.0; n] } else { Vec::new() };
        Self { scheme, k1: vec![0.0; n], k2: stage_buf(), k3: stage_buf(), k4: stage_buf(), stage: stage_buf() }
    }

    /// Advances `theta` in place by one step of size `dt`.
    pub fn advance<F: PhaseField + ?Sized>(
        &mut self,
        field: &mut F,
        theta: &mut [f64],
        dt: f64,
    ) -> std::result::Result<(), Blowup> {
        match self.scheme {
            Scheme::Euler => {
                field.eval(theta, &mut self.k1);
                if !bounded(&self.k1) {
                    return Err(Blowup);
                }
                for (t, v) in theta.iter_mut().zip(&self.k1) {
                    *t += dt * v;
                }
            }
            Scheme::Rk4 => {
                let half = 0.5 * dt;
                field.eval(theta, &mut self.k1);
                for ((s, t), k) in self.stage.iter_mut().zip(&*theta).zip(&self.k1) {
                    *s = t + half * k;
                }
                field.eval(&self.stage, &mut self.k2);
                for ((s, t), k) in self.stage.iter_mut().zip(&*theta).zip(&self.k2) {
                    *s = t + half * k;
                }
                field.eval(&self.stage, &mut self.k3);
                for ((s, t), k) in self.stage.iter_mut().zip(&*theta).zip(&self.k3) {
                    *s = t + dt * k;
                }
                field.eval(&self.stage, &mut self.k4);
                if !(bounded(&self.k1) && bounded(&self.k2) && bounded(&self.k3) && bounded(&self.k4)) {
                    return Err(Blowup);
                }
                let sixth = dt / 6.0;
                for i in 0..theta.len() {
                    theta[i] += sixth * (self.k1[i] + 2.0 * (self.k2[i] + self.k3[i]) + self.k4[i]);
                }
            }
        }
        if theta.iter().all(|t| t.is_finite()) {
            Ok(())
        } else {
            Err(Blowup)
        }
    }
}

/// One step from `theta`, returning the new phase vector.
pub fn step<F: PhaseField + ?Sized>(field: &mut F, theta: &[f64], dt: f64, scheme: Scheme) -> Result<Vec<f64>> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::param(format!("dt must be positive, got {dt}")));
    }
    let mut out = theta.to_vec();
    Stepper::new(theta.len(), scheme).advance(field, &mut out, dt).map_err(|_| Error::NumericalBlowup { step: 1 })?;
    Ok(out)
}

/// Integrates `cfg.steps` steps from `e.theta`, recording `R` after every step.
pub fn run(g: &Graph, e: &Ensemble, cfg: &SimConfig) -> Result<RunSummary> {
    run_observed(g, e, cfg, |_| {})
}

/// [`run`] with a callback invoked after every step.
pub fn run_observed<O>(g: &Graph, e: &Ensemble, cfg: &SimConfig, mut observer: O) -> Result<RunSummary>
where
    O: FnMut(&StepRecord<'_>),
{
    cfg.validate()?;
    if e.theta.len() != g.n() || e.omega.len() != g.n() {
        return Err(Error::param(format!(
            "ensemble of {} oscillators does not match graph with {} nodes",
            e.theta.len(),
            g.n()
        )));
    }
    let mut field = KuramotoRhs::new(g, &e.omega, &cfg.coupling)?;
    let mut stepper = Stepper::new(g.n(), cfg.scheme);
    let mut theta = e.theta.clone();
    let mut series = Vec::with_capacity(cfg.steps);
    let mut last = order_parameter(&theta)?;
    for step in 1..=cfg.steps {
        stepper.advance(&mut field, &mut theta, cfg.dt).map_err(|_| Error::NumericalBlowup { step })?;
        last = order_parameter(&theta)?;
        series.push(last.r);
        observer(&StepRecord { step, t: step as f64 * cfg.dt, theta: &theta, order: last });
    }
    let (r_mean, r_std) = tail_stats(&series, cfg.tail)?;
    Ok(RunSummary {
        r_mean,
        r_std,
        psi_final: last.psi,
        r_series: cfg.record_series.then_some(series),
        theta_final: theta,
    })
}

pub const TRACE_HEADER: &str = "step,t,R,psi";

/// Writes the per-step trace CSV (`step,t,R,psi`).
pub struct TraceWriter<W: Write> {
    out: W,
    error: Option<std::io::Error>,
}

impl<W: Write> TraceWriter<W> {
    pub fn new(mut out: W) -> Result<Self> {
        writeln!(out, "{TRACE_HEADER}")?;
        Ok(Self { out, error: None })
    }

    pub fn record(&mut self, rec: &StepRecord<'_>) {
        if self.error.is_none() {
            if let Err(e) = writeln!(self.out, "{},{},{},{}", rec.step, g9(rec.t), g9(rec.order.r), g9(rec.order.psi)) {
                self.error = Some(e);
            }
        }
    }

    pub fn finish(mut self) -> Result<W> {
        if let Some(e) = self.error {
            return Err(e.into());
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CouplingSpec;

    fn two_oscillators(k: f64, dw: f64, theta0: [f64; 2]) -> (Graph, Ensemble, SimConfig) {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let e = Ensemble::new(theta0.to_vec(), vec![-dw / 2.0, dw / 2.0]).unwrap();
        let cfg = SimConfig { coupling: CouplingSpec::network(k), ..SimConfig::default() };
        (g, e, cfg)
    }

    #[test]
    fn uncoupled_single_step_is_exact() {
        let omega = [0.3, -0.1, 0.05];
        let theta = [1.0, 2.0, 3.0];
        for scheme in [Scheme::Euler, Scheme::Rk4] {
            let mut f = |_: &[f64], out: &mut [f64]| out.copy_from_slice(&omega);
            let next = step(&mut f, &theta, 0.1, scheme).unwrap();
            for i in 0..3 {
                assert!((next[i] - (theta[i] + 0.1 * omega[i])).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn blowup_is_reported() {
        let mut f = |_: &[f64], out: &mut [f64]| out.fill(1e7);
        assert!(matches!(step(&mut f, &[0.0], 0.1, Scheme::Rk4), Err(Error::NumericalBlowup { step: 1 })));
        let mut g = |_: &[f64], out: &mut [f64]| out.fill(f64::NAN);
        assert!(step(&mut g, &[0.0], 0.1, Scheme::Euler).is_err());
        assert!(step(&mut g, &[0.0], 0.0, Scheme::Euler).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(SimConfig::default().validate().is_ok());
        assert!(SimConfig { dt: 0.0, ..SimConfig::default() }.validate().is_err());
        assert!(SimConfig { tail: 6000, ..SimConfig::default() }.validate().is_err());
        assert!(SimConfig { tail: 0, ..SimConfig::default() }.validate().is_err());
        assert!(SimConfig::default().with_coupling(-0.5).validate().is_err());
    }

    #[test]
    fn uncoupled_run_follows_closed_form() {
        let g = Graph::complete(5);
        let e = Ensemble::new(vec![0.1, 0.2, 0.3, 0.4, 0.5], vec![0.2, -0.1, 0.0, 0.15, -0.3]).unwrap();
        let cfg = SimConfig::default();
        let s = run(&g, &e, &cfg).unwrap();
        let t = cfg.steps as f64 * cfg.dt;
        for i in 0..5 {
            assert!((s.theta_final[i] - (e.theta[i] + e.omega[i] * t)).abs() < 1e-9);
        }
    }

    #[test]
    fn observer_sees_every_step_and_trace_matches() {
        let (g, e, mut cfg) = two_oscillators(0.06, 0.1, [0.0, 1.0]);
        cfg.steps = 20;
        cfg.tail = 5;
        cfg.record_series = true;
        let mut seen = Vec::new();
        let mut trace = TraceWriter::new(Vec::new()).unwrap();
        let s = run_observed(&g, &e, &cfg, |rec| {
            seen.push(rec.step);
            trace.record(rec);
        })
        .unwrap();
        assert_eq!(seen, (1..=20).collect::<Vec<_>>());
        let text = String::from_utf8(trace.finish().unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], TRACE_HEADER);
        assert_eq!(lines.len(), 21);
        assert!(lines[1].starts_with("1,0.1,"));
        assert_eq!(s.r_series.as_ref().unwrap().len(), 20);
    }

    #[test]
    fn isolated_node_fails_run() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        let e = Ensemble::new(vec![0.0; 3], vec![0.0; 3]).unwrap();
        let cfg = SimConfig::default().with_coupling(0.5);
        assert!(matches!(run(&g, &e, &cfg), Err(Error::DegenerateDegree { node: 2 })));
    }

    #[test]
    fn locked_pair_reaches_fixed_point() {
        let (g, e, cfg) = two_oscillators(0.06, 0.1, [0.0, 0.0]);
        let s = run(&g, &e, &cfg).unwrap();
        let phi_star = (0.1f64 / 0.12).asin();
        assert!((s.r_mean - (phi_star / 2.0).cos()).abs() < 1e-6, "{}", s.r_mean);
        assert!(s.r_std < 1e-6);
    }
}
