//! Gate-level circuit representation for the {H, RX, RZ, RZZ} gate set.
//!
//! Rotation conventions: `RZ(t) = exp(-i t Z/2)`, `RX(t) = exp(-i t X/2)`,
//! `RZZ(t) = exp(-i t ZZ/2)`, angles in radians.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    H { q: usize },
    Rx { q: usize, theta: f64 },
    Rz { q: usize, theta: f64 },
    Rzz { q1: usize, q2: usize, theta: f64 },
}

/// Ordered list of gate operations on `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            ops: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[Gate] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::InvalidInput(format!(
                "qubit {q} out of range for {}-qubit circuit",
                self.n_qubits
            )));
        }
        Ok(())
    }

    pub fn h(&mut self, q: usize) -> Result<()> {
        self.check_qubit(q)?;
        self.ops.push(Gate::H { q });
        Ok(())
    }

    pub fn rx(&mut self, q: usize, theta: f64) -> Result<()> {
        self.check_qubit(q)?;
        self.ops.push(Gate::Rx { q, theta });
        Ok(())
    }

    pub fn rz(&mut self, q: usize, theta: f64) -> Result<()> {
        self.check_qubit(q)?;
        self.ops.push(Gate::Rz { q, theta });
        Ok(())
    }

    pub fn rzz(&mut self, q1: usize, q2: usize, theta: f64) -> Result<()> {
        self.check_qubit(q1)?;
        self.check_qubit(q2)?;
        if q1 == q2 {
            return Err(Error::InvalidInput(format!(
                "RZZ endpoints must be distinct, got qubit {q1} twice"
            )));
        }
        self.ops.push(Gate::Rzz { q1, q2, theta });
        Ok(())
    }

    /// Line-oriented debug export, one op per line with fixed 12-decimal
    /// angles, e.g. `RZZ q3 q7 1.234567890123`. Stable enough for golden
    /// tests.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for op in &self.ops {
            match *op {
                Gate::H { q } => writeln!(out, "H q{q}").unwrap(),
                Gate::Rx { q, theta } => writeln!(out, "RX q{q} {theta:.12}").unwrap(),
                Gate::Rz { q, theta } => writeln!(out, "RZ q{q} {theta:.12}").unwrap(),
                Gate::Rzz { q1, q2, theta } => {
                    writeln!(out, "RZZ q{q1} q{q2} {theta:.12}").unwrap()
                }
            }
        }
        out
    }
}
