//! Variational quantum optimization on an exact statevector simulator.
//!
//! This crate implements two ansatz families over diagonal Ising Hamiltonians:
//!
//! - **Standard QAOA**: alternating problem/mixer unitaries with `2N`
//!   trainable angles at Trotter depth `N`.
//! - **FPC-QAOA** (fixed parameter count): a digitized adiabatic evolution
//!   driven by three monotone cubic Hermite schedule functions. The schedules
//!   are pinned at the boundaries and carry `n_p` internal control points
//!   each, so the trainable parameter count is `3 * n_p` no matter how deep
//!   the digitization.
//!
//! Around the ansatz builders sit the pieces needed to benchmark them:
//! seedable problem generators ([`gen`]), an exact statevector simulator with
//! multinomial shot sampling ([`sim`]), a CVaR shot objective with a
//! derivative-free trust-region optimizer ([`objective`], [`optimizer`]), and
//! the performance metrics `R` (normalized energy reduction) and `eta`
//! (enhancement ratio) in [`ising`].

// Guards like `!(x > 0.0)` are deliberate: they reject NaN along with the
// out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ansatz;
pub mod circuit;
pub mod error;
pub mod gen;
pub mod histogram;
pub mod ising;
pub mod objective;
pub mod optimizer;
pub mod rng;
pub mod schedule;
pub mod sim;

pub use error::{Error, Result};

pub use ansatz::{
    build_fpc_circuit, build_qaoa_circuit, count_trainable, AnsatzKind, QaoaParams, TrotterConfig,
};
pub use circuit::{Circuit, Gate};
pub use gen::{GraphSpec, TapInstance, Topology};
pub use histogram::ShotHistogram;
pub use ising::{compute_eta, compute_r, GroundState, IsingProblem, MetricsRecord};
pub use objective::{
    cvar_from_histogram, run_fpc, run_qaoa, run_random_sampling, Algorithm, InitStrategy,
    ObjectiveConfig, RunRecord,
};
pub use optimizer::{minimize, OptOutcome, OptimizerConfig};
pub use schedule::{MonotoneCubic, ScheduleFns, ScheduleKind, ScheduleSet};
pub use sim::{
    dense_oracle_evolve, exact_expectation, run_statevector, sample_histogram, SimConfig, SimMode,
    StateVector,
};
