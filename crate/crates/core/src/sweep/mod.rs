//! Experiment orchestration over `(N, p, K, replicate)` grids.
//!
//! For every `(N, p, replicate)` one connected graph and one ensemble are
//! drawn and reused across the whole `K` grid, so each `R(K)` curve isolates
//! the effect of the coupling. Random inputs come from substreams of the
//! master seed:
//!
//! ```text
//! master / N / (3 + rep) / 0 / p_index   graph topology
//! master / N / (3 + rep) / 1             natural frequencies
//! master / N / (3 + rep) / 2             initial phases
//! ```
//!
//! Frequencies and phases are shared between the `p` values of a replicate.
//! Tasks run on a rayon pool; results are sorted into canonical order
//! afterwards, so the table does not depend on the worker count.

mod kc;
mod table;

use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result, TaskKey};
use crate::integrate::{run, SimConfig};
use crate::model::{init_ensemble, Ensemble, EnsembleSpec};
use crate::net::{connectivity_threshold, gen_connected, Graph, DEFAULT_MAX_ATTEMPTS};
use crate::sampling::{replicate_label, RngStream, DEFAULT_SEED, LABEL_FREQUENCIES, LABEL_PHASES, LABEL_TOPOLOGY};

pub use kc::{estimate_kc, KcEstimate, KC_METHOD, TRANSITION_WINDOW};
pub use table::{PSelector, ResultRow, ResultTable, CSV_HEADER};

/// Evenly spaced couplings `0, k_max/k_steps, ..., k_max` (`k_steps + 1` values).
pub fn k_grid(k_max: f64, k_steps: usize) -> Result<Vec<f64>> {
    if !(k_max > 0.0) || !k_max.is_finite() {
        return Err(Error::param(format!("k_max must be positive, got {k_max}")));
    }
    if k_steps < 2 {
        return Err(Error::param(format!("k_steps must be at least 2, got {k_steps}")));
    }
    Ok((0..=k_steps).map(|i| k_max * i as f64 / k_steps as f64).collect())
}

/// Eleven probabilities `p_c + i (1 − p_c)/10`, `i = 0..=10`, ending at exactly 1.
pub fn p_grid(n: usize) -> Result<Vec<f64>> {
    let pc = connectivity_threshold(n)?;
    let dp = (1.0 - pc) / 10.0;
    let mut grid: Vec<f64> = (0..=10).map(|i| pc + i as f64 * dp).collect();
    grid[10] = 1.0;
    Ok(grid)
}

/// Which edge probabilities are simulated for each size.
#[derive(Debug, Clone, PartialEq)]
pub enum PPolicy {
    /// `p_c(N)` only.
    ThresholdOnly,
    /// `p_c(N)` and the complete graph `p = 1`.
    ThresholdAndComplete,
    /// The eleven-value [`p_grid`].
    Ladder,
    /// Explicit probabilities, identical for every size.
    Fixed(Vec<f64>),
}

impl PPolicy {
    pub fn p_values(&self, n: usize) -> Result<Vec<f64>> {
        let mut v = match self {
            PPolicy::ThresholdOnly => vec![connectivity_threshold(n)?],
            PPolicy::ThresholdAndComplete => vec![connectivity_threshold(n)?, 1.0],
            PPolicy::Ladder => p_grid(n)?,
            PPolicy::Fixed(ps) => ps.clone(),
        };
        if v.is_empty() {
            return Err(Error::param("p policy yields no probabilities"));
        }
        if let Some(p) = v.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::param(format!("edge probability must lie in [0, 1], got {p}")));
        }
        v.sort_by(f64::total_cmp);
        v.dedup();
        Ok(v)
    }

    pub fn to_config_string(&self) -> String {
        match self {
            PPolicy::ThresholdOnly => "threshold_only".into(),
            PPolicy::ThresholdAndComplete => "threshold_and_complete".into(),
            PPolicy::Ladder => "ladder".into(),
            PPolicy::Fixed(ps) => {
                let items: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                format!("fixed:{}", items.join(","))
            }
        }
    }
}

impl FromStr for PPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "threshold_only" => Ok(PPolicy::ThresholdOnly),
            "threshold_and_complete" => Ok(PPolicy::ThresholdAndComplete),
            "ladder" => Ok(PPolicy::Ladder),
            other => {
                let list = other.strip_prefix("fixed:").ok_or_else(|| {
                    Error::param(format!(
                        "unknown p policy {other:?} (threshold_only|threshold_and_complete|ladder|fixed:<p,...>)"
                    ))
                })?;
                let ps = list
                    .split(',')
                    .map(|x| x.trim().parse::<f64>().map_err(|_| Error::param(format!("bad probability {x:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                Ok(PPolicy::Fixed(ps))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Network sizes, strictly ascending.
    pub sizes: Vec<usize>,
    pub k_max: f64,
    pub k_steps: usize,
    pub p_policy: PPolicy,
    pub replicates: usize,
    pub sim: SimConfig,
    pub ensemble: EnsembleSpec,
    pub seed: u64,
    /// Worker threads; `None` lets rayon decide.
    pub workers: Option<usize>,
    pub max_attempts: usize,
    /// Record wall-clock time per task. Off by default because it makes the
    /// CSV differ between otherwise identical runs.
    pub timing: bool,
}

impl SweepConfig {
    /// Sizes 50, 100, 200; five replicates; `p_c` and `p = 1`; full `K` grid.
    pub fn desk() -> Self {
        Self {
            sizes: vec![50, 100, 200],
            k_max: 1.0,
            k_steps: 100,
            p_policy: PPolicy::ThresholdAndComplete,
            replicates: 5,
            sim: SimConfig::default(),
            ensemble: EnsembleSpec::default(),
            seed: DEFAULT_SEED,
            workers: None,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
            timing: false,
        }
    }

    /// Sizes 50, 100, 500, 1000; eleven `p` values; ten replicates. Hours of CPU time.
    pub fn paper() -> Self {
        Self { sizes: vec![50, 100, 500, 1000], p_policy: PPolicy::Ladder, replicates: 10, ..Self::desk() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() {
            return Err(Error::param("sizes must not be empty"));
        }
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param("sizes must be strictly ascending"));
        }
        if self.sizes[0] < 2 {
            return Err(Error::param("network sizes must be at least 2"));
        }
        if self.replicates == 0 {
            return Err(Error::param("replicates must be at least 1"));
        }
        if self.max_attempts == 0 {
            return Err(Error::param("max_attempts must be positive"));
        }
        if self.workers == Some(0) {
            return Err(Error::param("workers must be at least 1"));
        }
        if !(self.ensemble.freq_sigma >= 0.0) || !self.ensemble.freq_mean.is_finite() {
            return Err(Error::param("freq_sigma must be >= 0 and freq_mean finite"));
        }
        k_grid(self.k_max, self.k_steps)?;
        for &n in &self.sizes {
            self.p_policy.p_values(n)?;
        }
        self.sim.validate()
    }

    /// Number of rows [`run_sweep`] will produce.
    pub fn task_count(&self) -> Result<usize> {
        let mut total = 0;
        for &n in &self.sizes {
            total += self.p_policy.p_values(n)?.len() * (self.k_steps + 1) * self.replicates;
        }
        Ok(total)
    }
}

/// Graph and oscillators for one `(N, p, replicate)`.
#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: Graph,
    pub ensemble: Ensemble,
}

/// Draws the instance used for `(n, p_index, rep)` under `cfg.seed`.
///
/// Graphs with `p < 1` are redrawn until connected.
pub fn build_instance(cfg: &SweepConfig, n: usize, p_index: usize, p: f64, rep: usize) -> Result<Instance> {
    let rep_stream = RngStream::new(cfg.seed).derive(n as u64).derive(replicate_label(rep));
    let graph_stream = rep_stream.derive(LABEL_TOPOLOGY).derive(p_index as u64);
    let graph = if p >= 1.0 { Graph::complete(n) } else { gen_connected(n, p, &graph_stream, cfg.max_attempts)? };
    let ensemble = init_ensemble(
        n,
        &mut rep_stream.derive(LABEL_FREQUENCIES),
        &mut rep_stream.derive(LABEL_PHASES),
        &cfg.ensemble,
    )?;
    Ok(Instance { graph, ensemble })
}

struct Group {
    n: usize,
    p_index: usize,
    p: f64,
    rep: usize,
}

/// Runs every `(N, p, K, replicate)` simulation and returns rows sorted by that key.
pub fn run_sweep(cfg: &SweepConfig) -> Result<ResultTable> {
    cfg.validate()?;
    let ks = k_grid(cfg.k_max, cfg.k_steps)?;
    let mut groups = Vec::new();
    for &n in &cfg.sizes {
        for (p_index, p) in cfg.p_policy.p_values(n)?.into_iter().enumerate() {
            for rep in 0..cfg.replicates {
                groups.push(Group { n, p_index, p, rep });
            }
        }
    }

    let work = || {
        groups
            .par_iter()
            .map(|grp| -> Vec<Result<ResultRow>> {
                let key = |k: f64| TaskKey { n: grp.n, p: grp.p, k, rep: grp.rep };
                let inst = match build_instance(cfg, grp.n, grp.p_index, grp.p, grp.rep) {
                    Ok(inst) => inst,
                    Err(e) => return vec![Err(Error::Task { key: key(f64::NAN), source: Box::new(e) })],
                };
                ks.par_iter()
                    .map(|&k| {
                        let start = Instant::now();
                        let summary = run(&inst.graph, &inst.ensemble, &cfg.sim.with_coupling(k))
                            .map_err(|e| Error::Task { key: key(k), source: Box::new(e) })?;
                        Ok(ResultRow {
                            n: grp.n,
                            p: grp.p,
                            k,
                            rep: grp.rep,
                            r_mean: summary.r_mean,
                            r_std: summary.r_std,
                            edges: inst.graph.edge_count(),
                            wall_s: if cfg.timing { start.elapsed().as_secs_f64() } else { 0.0 },
                        })
                    })
                    .collect()
            })
            .collect::<Vec<_>>()
    };
    let results = match cfg.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::param(format!("cannot start {w} workers: {e}")))?
            .install(work),
        None => work(),
    };

    // Report the canonically first failure, whatever the scheduling.
    let mut rows = Vec::with_capacity(groups.len() * ks.len());
    let mut first_err: Option<(usize, usize, usize, usize, Error)> = None;
    for (grp, res) in groups.iter().zip(results) {
        for (ki, r) in res.into_iter().enumerate() {
            match r {
                Ok(row) => rows.push(((grp.n, grp.p_index, ki, grp.rep), row)),
                Err(e) => {
                    let pos = (grp.n, grp.p_index, ki, grp.rep);
                    if first_err.as_ref().is_none_or(|f| pos < (f.0, f.1, f.2, f.3)) {
                        first_err = Some((pos.0, pos.1, pos.2, pos.3, e));
                    }
                }
            }
        }
    }
    if let Some((.., e)) = first_err {
        return Err(e);
    }
    rows.sort_by_key(|(pos, _)| *pos);
    Ok(ResultTable::new(rows.into_iter().map(|(_, r)| r).collect()))
}
