//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: length mismatch, unsorted points, bad index, ...
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A generator spec that cannot be satisfied (e.g. odd n*k for a
    /// k-regular graph).
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    /// A rejection-sampling generator ran out of attempts.
    #[error("generation failure: {0}")]
    GenerationFailure(String),

    /// Problem size exceeds a hard capacity cap.
    #[error("capacity exceeded: {what} needs {needed} qubits, cap is {cap}")]
    Capacity {
        what: &'static str,
        needed: usize,
        cap: usize,
    },

    /// Evaluation point outside the interpolation domain.
    #[error("{value} outside domain [{lo}, {hi}]")]
    OutOfDomain { value: f64, lo: f64, hi: f64 },

    /// The initial state is already optimal: R of a run is undefined.
    #[error("degenerate instance: e_init == e_ground ({0}); R undefined")]
    DegenerateInstance(f64),

    /// Enhancement ratio is undefined because the reference R is <= 0.
    /// Benchmark output flags such instances as excluded.
    #[error("eta undefined: reference R = {r_qaoa} is not strictly positive")]
    EtaUndefined { r_qaoa: f64 },

    /// The objective returned NaN or infinity; the optimizer aborts and
    /// reports where.
    #[error("non-finite objective value at evaluation {evaluation}: params {params:?}")]
    NonFiniteObjective { evaluation: usize, params: Vec<f64> },
}
