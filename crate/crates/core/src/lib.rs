//! Kuramoto phase oscillators on Erdős–Rényi random networks.
//!
//! The crate is organised bottom-up:
//!
//! - [`sampling`]: reproducible random streams with labelled substreams.
//! - [`net`]: the `G(N, p)` model, connectivity tests and generation
//!   conditioned on connectivity at the threshold `ln N / N`.
//! - [`model`]: oscillator ensembles and the network / all-to-all vector fields.
//! - [`integrate`]: fixed-step Euler and RK4 integration with tail averaging.
//! - [`observe`]: order parameter, tail statistics and `dR/dK`.
//! - [`sweep`]: parallel grids over `(N, p, K, replicate)`, result tables and
//!   the minimum-variation estimate of the critical coupling.
//! - [`cli`]: the `kuramoto` command-line front end and SVG plotting.
//!
//! ```
//! use kuramoto_er::prelude::*;
//!
//! let master = RngStream::new(7);
//! let graph = Graph::complete(20);
//! let ensemble = init_ensemble(
//!     20,
//!     &mut master.derive(1),
//!     &mut master.derive(2),
//!     &EnsembleSpec::default(),
//! )
//! .unwrap();
//! let cfg = SimConfig { steps: 500, tail: 100, ..SimConfig::default() }
//!     .with_coupling(1.0);
//! let summary = run(&graph, &ensemble, &cfg).unwrap();
//! assert!(summary.r_mean > 0.8);
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Index loops over several parallel slices read better in the numerics.
#![allow(clippy::needless_range_loop)]

pub mod cli;
mod error;
pub mod integrate;
pub mod model;
pub mod net;
mod numfmt;
pub mod observe;
pub mod sampling;
pub mod sweep;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::error::{Error, Result};
    pub use crate::integrate::{run, run_observed, step, RunSummary, Scheme, SimConfig, StepRecord};
    pub use crate::model::{
        init_ensemble, rhs_meanfield, rhs_network, CouplingForm, CouplingSpec, Ensemble, EnsembleSpec, KuramotoRhs,
        PhaseField, PhaseInit,
    };
    pub use crate::net::{connectivity_threshold, gen_connected_at_threshold, gen_er, is_connected, Graph};
    pub use crate::observe::{dr_dk, order_parameter, tail_stats, OrderParameter};
    pub use crate::sampling::RngStream;
    pub use crate::sweep::{
        estimate_kc, k_grid, p_grid, run_sweep, KcEstimate, PPolicy, PSelector, ResultRow, ResultTable, SweepConfig,
    };
}
