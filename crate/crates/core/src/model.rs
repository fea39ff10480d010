//! Oscillator ensembles and the Kuramoto vector fields.
//!
//! Two couplings are provided:
//!
//! - network: `dθ_i/dt = ω_i + (K / k_i) Σ_j A_ij sin(θ_j − θ_i)`
//! - all-to-all: `dθ_i/dt = ω_i + (K / N) Σ_j sin(θ_j − θ_i)`, evaluated in
//!   `O(N)` as `ω_i + K R sin(ψ − θ_i)`.
//!
//! Both are evaluated through the identity
//! `sin(θ_j − θ_i) = sin θ_j cos θ_i − cos θ_j sin θ_i`, which needs one
//! sine/cosine pair per node instead of one sine per edge.

use std::f64::consts::TAU;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::net::Graph;
use crate::sampling::RngStream;

/// Phases (radians) and natural frequencies (rad/s) of `n` oscillators.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub theta: Vec<f64>,
    pub omega: Vec<f64>,
}

impl Ensemble {
    pub fn new(theta: Vec<f64>, omega: Vec<f64>) -> Result<Self> {
        if theta.len() != omega.len() {
            return Err(Error::param(format!("theta has {} entries but omega has {}", theta.len(), omega.len())));
        }
        if theta.iter().chain(&omega).any(|x| !x.is_finite()) {
            return Err(Error::param("ensemble entries must be finite"));
        }
        Ok(Self { theta, omega })
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseInit {
    /// i.i.d. uniform on `[0, 2π)`.
    #[default]
    Uniform,
    /// Every phase starts at 0 (fully coherent start).
    Zero,
}

impl PhaseInit {
    pub fn as_str(self) -> &'static str {
        match self {
            PhaseInit::Uniform => "uniform",
            PhaseInit::Zero => "zero",
        }
    }
}

impl FromStr for PhaseInit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(PhaseInit::Uniform),
            "zero" => Ok(PhaseInit::Zero),
            _ => Err(Error::param(format!("unknown phase initialisation {s:?} (uniform|zero)"))),
        }
    }
}

/// How natural frequencies and initial phases are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    pub freq_mean: f64,
    pub freq_sigma: f64,
    pub phase_init: PhaseInit,
}

impl Default for EnsembleSpec {
    fn default() -> Self {
        Self { freq_mean: 0.0, freq_sigma: 0.1, phase_init: PhaseInit::Uniform }
    }
}

/// Draws `ω_i ~ normal(freq_mean, freq_sigma)` from `freq_stream` and the
/// initial phases from `phase_stream`.
pub fn init_ensemble(
    n: usize,
    freq_stream: &mut RngStream,
    phase_stream: &mut RngStream,
    spec: &EnsembleSpec,
) -> Result<Ensemble> {
    if n == 0 {
        return Err(Error::param("ensemble needs at least one oscillator"));
    }
    let omega =
        (0..n).map(|_| freq_stream.sample_normal(spec.freq_mean, spec.freq_sigma)).collect::<Result<Vec<_>>>()?;
    let theta = match spec.phase_init {
        PhaseInit::Uniform => (0..n).map(|_| phase_stream.sample_uniform(0.0, TAU)).collect::<Result<Vec<_>>>()?,
        PhaseInit::Zero => vec![0.0; n],
    };
    Ok(Ensemble { theta, omega })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CouplingForm {
    /// `K / k_i` over graph neighbours.
    #[default]
    Network,
    /// `K / N` over all oscillators, ignoring the graph.
    MeanField,
}

impl CouplingForm {
    pub fn as_str(self) -> &'static str {
        match self {
            CouplingForm::Network => "network",
            CouplingForm::MeanField => "meanfield",
        }
    }
}

impl FromStr for CouplingForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "network" => Ok(CouplingForm::Network),
            "meanfield" | "meanfield_eq1" => Ok(CouplingForm::MeanField),
            _ => Err(Error::param(format!("unknown coupling form {s:?} (network|meanfield)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingSpec {
    pub k: f64,
    pub form: CouplingForm,
}

impl CouplingSpec {
    pub fn network(k: f64) -> Self {
        Self { k, form: CouplingForm::Network }
    }

    pub fn meanfield(k: f64) -> Self {
        Self { k, form: CouplingForm::MeanField }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k >= 0.0) || !self.k.is_finite() {
            return Err(Error::param(format!("coupling K must be finite and >= 0, got {}", self.k)));
        }
        Ok(())
    }
}

impl Default for CouplingSpec {
    fn default() -> Self {
        Self::network(0.0)
    }
}

/// An autonomous vector field on phase space.
pub trait PhaseField {
    fn eval(&mut self, theta: &[f64], out: &mut [f64]);
}

impl<F> PhaseField for F
where
    F: FnMut(&[f64], &mut [f64]),
{
    fn eval(&mut self, theta: &[f64], out: &mut [f64]) {
        self(theta, out)
    }
}

#[derive(Debug, Clone)]
enum Topology {
    /// Sums over neighbour lists (CSR).
    Sparse {
        offsets: Vec<usize>,
        targets: Vec<usize>,
    },
    /// Dense graphs: sum over everyone, then subtract the self term and the
    /// non-neighbours (CSR of the complement).
    Complement {
        offsets: Vec<usize>,
        targets: Vec<usize>,
    },
    MeanField,
}

/// Reusable right-hand side for one `(graph, ω, K)` combination.
#[derive(Debug, Clone)]
pub struct KuramotoRhs<'a> {
    omega: &'a [f64],
    /// `K / k_i` for the network form, `K / N` for the all-to-all form.
    gain: Vec<f64>,
    topology: Topology,
    sin: Vec<f64>,
    cos: Vec<f64>,
}

fn csr<F: Fn(usize) -> Vec<usize>>(n: usize, lists: F) -> (Vec<usize>, Vec<usize>) {
    let mut offsets = Vec::with_capacity(n + 1);
    let mut targets = Vec::new();
    offsets.push(0);
    for i in 0..n {
        targets.extend(lists(i));
        offsets.push(targets.len());
    }
    (offsets, targets)
}

impl<'a> KuramotoRhs<'a> {
    /// Network coupling. Fails if any node is isolated.
    pub fn network(g: &Graph, omega: &'a [f64], k: f64) -> Result<Self> {
        let n = g.n();
        if omega.len() != n {
            return Err(Error::param(format!("omega has {} entries, graph has {n} nodes", omega.len())));
        }
        if let Some(node) = (0..n).find(|&i| g.degree(i) == 0) {
            return Err(Error::DegenerateDegree { node });
        }
        let gain = (0..n).map(|i| k / g.degree(i) as f64).collect();
        // Complement sums are cheaper once more than half of all pairs are edges.
        let dense = 2 * g.edge_count() > n * (n - 1) / 2;
        let topology = if dense {
            let (offsets, targets) = csr(n, |i| {
                let nb = g.neighbors(i);
                (0..n).filter(|&j| j != i && nb.binary_search(&j).is_err()).collect()
            });
            Topology::Complement { offsets, targets }
        } else {
            let (offsets, targets) = csr(n, |i| g.neighbors(i).to_vec());
            Topology::Sparse { offsets, targets }
        };
        Ok(Self { omega, gain, topology, sin: vec![0.0; n], cos: vec![0.0; n] })
    }

    /// All-to-all coupling with `K / N` normalisation.
    pub fn meanfield(omega: &'a [f64], k: f64) -> Self {
        let n = omega.len();
        let gain = vec![k / n.max(1) as f64; n];
        Self { omega, gain, topology: Topology::MeanField, sin: vec![0.0; n], cos: vec![0.0; n] }
    }

    pub fn new(g: &Graph, omega: &'a [f64], coupling: &CouplingSpec) -> Result<Self> {
        coupling.validate()?;
        match coupling.form {
            CouplingForm::Network => Self::network(g, omega, coupling.k),
            CouplingForm::MeanField => {
                if omega.len() != g.n() {
                    return Err(Error::param(format!("omega has {} entries, graph has {} nodes", omega.len(), g.n())));
                }
                Ok(Self::meanfield(omega, coupling.k))
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.omega.len()
    }
}

impl PhaseField for KuramotoRhs<'_> {
    fn eval(&mut self, theta: &[f64], out: &mut [f64]) {
        let n = self.omega.len();
        debug_assert_eq!(theta.len(), n);
        debug_assert_eq!(out.len(), n);
        for i in 0..n {
            let (s, c) = theta[i].sin_cos();
            self.sin[i] = s;
            self.cos[i] = c;
        }
        let (sin, cos) = (&self.sin, &self.cos);
        match &self.topology {
            Topology::Sparse { offsets, targets } => {
                for i in 0..n {
                    let (mut ss, mut sc) = (0.0, 0.0);
                    for &j in &targets[offsets[i]..offsets[i + 1]] {
                        ss += sin[j];
                        sc += cos[j];
                    }
                    out[i] = self.omega[i] + self.gain[i] * (ss * cos[i] - sc * sin[i]);
                }
            }
            Topology::Complement { offsets, targets } => {
                let total_s: f64 = sin.iter().sum();
                let total_c: f64 = cos.iter().sum();
                for i in 0..n {
                    let (mut ss, mut sc) = (total_s - sin[i], total_c - cos[i]);
                    for &j in &targets[offsets[i]..offsets[i + 1]] {
                        ss -= sin[j];
                        sc -= cos[j];
                    }
                    out[i] = self.omega[i] + self.gain[i] * (ss * cos[i] - sc * sin[i]);
                }
            }
            Topology::MeanField => {
                // K R sin(ψ − θ_i) = (K/N) (Im Z cos θ_i − Re Z sin θ_i), Z = Σ e^{iθ_j}
                let zs: f64 = sin.iter().sum();
                let zc: f64 = cos.iter().sum();
                for i in 0..n {
                    out[i] = self.omega[i] + self.gain[i] * (zs * cos[i] - zc * sin[i]);
                }
            }
        }
    }
}

fn check_lengths(theta: &[f64], omega: &[f64]) -> Result<()> {
    if theta.len() != omega.len() {
        return Err(Error::param(format!("theta has {} entries but omega has {}", theta.len(), omega.len())));
    }
    Ok(())
}

/// Phase velocities under network coupling `K / k_i`.
pub fn rhs_network(g: &Graph, theta: &[f64], omega: &[f64], k: f64) -> Result<Vec<f64>> {
    check_lengths(theta, omega)?;
    CouplingSpec::network(k).validate()?;
    let mut rhs = KuramotoRhs::network(g, omega, k)?;
    let mut out = vec![0.0; theta.len()];
    rhs.eval(theta, &mut out);
    Ok(out)
}

/// Phase velocities under all-to-all coupling `K / N`.
pub fn rhs_meanfield(theta: &[f64], omega: &[f64], k: f64) -> Result<Vec<f64>> {
    check_lengths(theta, omega)?;
    if theta.is_empty() {
        return Err(Error::param("empty phase vector"));
    }
    CouplingSpec::meanfield(k).validate()?;
    let mut rhs = KuramotoRhs::meanfield(omega, k);
    let mut out = vec![0.0; theta.len()];
    rhs.eval(theta, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use super::*;
    use crate::net::{gen_connected_at_threshold, gen_er, DEFAULT_MAX_ATTEMPTS};

    fn random_state(n: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
        let root = RngStream::new(seed);
        let e = init_ensemble(n, &mut root.derive(1), &mut root.derive(2), &EnsembleSpec::default()).unwrap();
        (e.theta, e.omega)
    }

    /// Pairwise sums straight from the definitions.
    fn direct_network(g: &Graph, theta: &[f64], omega: &[f64], k: f64) -> Vec<f64> {
        (0..g.n())
            .map(|i| {
                let s: f64 = g.neighbors(i).iter().map(|&j| (theta[j] - theta[i]).sin()).sum();
                omega[i] + k / g.degree(i) as f64 * s
            })
            .collect()
    }

    fn direct_meanfield(theta: &[f64], omega: &[f64], k: f64) -> Vec<f64> {
        let n = theta.len();
        (0..n)
            .map(|i| {
                let s: f64 = (0..n).map(|j| (theta[j] - theta[i]).sin()).sum();
                omega[i] + k / n as f64 * s
            })
            .collect()
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (i, (x, y)) in a.iter().zip(b).enumerate() {
            assert!((x - y).abs() <= tol, "entry {i}: {x} vs {y}");
        }
    }

    #[test]
    fn homogeneous_when_sigma_zero() {
        let root = RngStream::new(3);
        let spec = EnsembleSpec { freq_sigma: 0.0, ..EnsembleSpec::default() };
        let e = init_ensemble(10, &mut root.derive(1), &mut root.derive(2), &spec).unwrap();
        assert!(e.omega.iter().all(|&w| w == 0.0));
        let bad = EnsembleSpec { freq_sigma: -1.0, ..EnsembleSpec::default() };
        assert!(init_ensemble(10, &mut root.derive(1), &mut root.derive(2), &bad).is_err());
        assert!(init_ensemble(0, &mut root.derive(1), &mut root.derive(2), &spec).is_err());
    }

    #[test]
    fn default_frequency_spread() {
        let (theta, omega) = random_state(1000, 12345);
        let mean = omega.iter().sum::<f64>() / 1000.0;
        let sd = (omega.iter().map(|w| (w - mean).powi(2)).sum::<f64>() / 999.0).sqrt();
        assert!((sd - 0.1).abs() < 0.01, "sd = {sd}");
        assert!(theta.iter().all(|&t| (0.0..TAU).contains(&t)));
    }

    #[test]
    fn phase_histogram_is_flat() {
        let root = RngStream::new(12345);
        let e = init_ensemble(10_000, &mut root.derive(1), &mut root.derive(2), &EnsembleSpec::default()).unwrap();
        let mut bins = [0usize; 8];
        for &t in &e.theta {
            bins[((t / TAU) * 8.0) as usize] += 1;
        }
        let expected = 10_000.0 / 8.0;
        let sigma = (10_000.0f64 * (1.0 / 8.0) * (7.0 / 8.0)).sqrt();
        for (b, &count) in bins.iter().enumerate() {
            assert!((count as f64 - expected).abs() <= 5.0 * sigma, "bin {b}: {count}");
        }
    }

    #[test]
    fn zero_phase_init() {
        let root = RngStream::new(3);
        let spec = EnsembleSpec { phase_init: PhaseInit::Zero, ..EnsembleSpec::default() };
        let e = init_ensemble(5, &mut root.derive(1), &mut root.derive(2), &spec).unwrap();
        assert_eq!(e.theta, vec![0.0; 5]);
    }

    #[test]
    fn uncoupled_velocity_is_omega() {
        let g = gen_er(30, 0.5, &mut RngStream::new(1)).unwrap();
        let g = if g.degrees().contains(&0) { Graph::complete(30) } else { g };
        let (theta, omega) = random_state(30, 4);
        assert_eq!(rhs_network(&g, &theta, &omega, 0.0).unwrap(), omega);
        assert_eq!(rhs_meanfield(&theta, &omega, 0.0).unwrap(), omega);
    }

    #[test]
    fn two_node_edge() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let v = rhs_network(&g, &[0.0, FRAC_PI_2], &[0.0, 0.0], 1.0).unwrap();
        assert_close(&v, &[1.0, -1.0], 1e-15);
    }

    #[test]
    fn isolated_node_is_rejected() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        let err = rhs_network(&g, &[0.0; 3], &[0.0; 3], 1.0).unwrap_err();
        assert!(matches!(err, Error::DegenerateDegree { node: 2 }));
    }

    #[test]
    fn length_and_coupling_validation() {
        let g = Graph::complete(3);
        assert!(rhs_network(&g, &[0.0; 2], &[0.0; 2], 1.0).is_err());
        assert!(rhs_network(&g, &[0.0; 3], &[0.0; 2], 1.0).is_err());
        assert!(rhs_network(&g, &[0.0; 3], &[0.0; 3], -1.0).is_err());
        assert!(rhs_meanfield(&[], &[], 1.0).is_err());
        assert!(rhs_meanfield(&[0.0], &[0.0, 1.0], 1.0).is_err());
    }

    #[test]
    fn network_matches_pairwise_sum_sparse_and_dense() {
        for (seed, p) in [(1u64, 0.1), (2, 0.5), (3, 0.8), (4, 1.0)] {
            let g = gen_connected_at_threshold(40, &RngStream::new(seed), DEFAULT_MAX_ATTEMPTS).unwrap();
            let g = if p > 0.1 { gen_er(40, p, &mut RngStream::new(seed)).unwrap() } else { g };
            if g.degrees().contains(&0) {
                continue;
            }
            let (theta, omega) = random_state(40, seed + 10);
            let fast = rhs_network(&g, &theta, &omega, 0.7).unwrap();
            assert_close(&fast, &direct_network(&g, &theta, &omega, 0.7), 1e-12);
        }
    }

    #[test]
    fn meanfield_matches_pairwise_sum() {
        let (theta, omega) = random_state(50, 77);
        let fast = rhs_meanfield(&theta, &omega, 0.9).unwrap();
        assert_close(&fast, &direct_meanfield(&theta, &omega, 0.9), 1e-12);
    }

    #[test]
    fn meanfield_sum_identity() {
        let (theta, omega) = random_state(64, 5);
        let v = rhs_meanfield(&theta, &omega, 2.5).unwrap();
        let lhs: f64 = v.iter().sum();
        let rhs: f64 = omega.iter().sum();
        assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn coherent_state_has_no_coupling_term() {
        let omega = [0.1, -0.2, 0.05, 0.3];
        let theta = [1.3; 4];
        assert_close(&rhs_meanfield(&theta, &omega, 3.0).unwrap(), &omega, 1e-15);
        assert_close(&rhs_network(&Graph::complete(4), &theta, &omega, 3.0).unwrap(), &omega, 1e-15);
    }

    #[test]
    fn degree_weighted_drift() {
        let g = gen_connected_at_threshold(20, &RngStream::new(21), DEFAULT_MAX_ATTEMPTS).unwrap();
        let (theta, omega) = random_state(20, 22);
        let v = rhs_network(&g, &theta, &omega, 1.3).unwrap();
        let k = g.degrees();
        let lhs: f64 = v.iter().zip(&k).map(|(x, &d)| x * d as f64).sum();
        let rhs: f64 = omega.iter().zip(&k).map(|(x, &d)| x * d as f64).sum();
        assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn complete_graph_network_equals_meanfield_with_rescaled_k() {
        let n = 10;
        let (theta, omega) = random_state(n, 31);
        let k = 0.8;
        let net = rhs_network(&Graph::complete(n), &theta, &omega, k * (n - 1) as f64 / n as f64).unwrap();
        let mf = rhs_meanfield(&theta, &omega, k).unwrap();
        assert_close(&net, &mf, 1e-14);
    }

    #[test]
    fn reflection_negates_velocity() {
        let g = gen_er(25, 0.3, &mut RngStream::new(8)).unwrap();
        let (theta, omega) = random_state(25, 9);
        let neg_t: Vec<f64> = theta.iter().map(|t| -t).collect();
        let neg_w: Vec<f64> = omega.iter().map(|w| -w).collect();
        let a = rhs_meanfield(&theta, &omega, 1.1).unwrap();
        let b = rhs_meanfield(&neg_t, &neg_w, 1.1).unwrap();
        assert_close(&a, &b.iter().map(|x| -x).collect::<Vec<_>>(), 1e-14);
        if !g.degrees().contains(&0) {
            let a = rhs_network(&g, &theta, &omega, 1.1).unwrap();
            let b = rhs_network(&g, &neg_t, &neg_w, 1.1).unwrap();
            assert_close(&a, &b.iter().map(|x| -x).collect::<Vec<_>>(), 1e-14);
        }
    }
}
