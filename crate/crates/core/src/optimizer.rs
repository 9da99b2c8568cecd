//! Derivative-free bound-constrained minimization in the COBYLA family:
//! a linear model interpolated over a simplex of `dim + 1` points, minimized
//! within a shrinking trust region, with box bounds enforced on every
//! candidate.
//!
//! The loop keeps the simplex anchored at the incumbent best point. Each
//! cycle fits the linear model to the simplex, steps `rho` along the clipped
//! steepest-descent direction, and either keeps the radius (sufficient
//! predicted-vs-actual reduction) or halves it and re-spans the simplex along
//! the axes at the new scale. Termination: trust radius below `tol`, or the
//! evaluation budget is spent. Every objective evaluation lands in the trace,
//! and the returned value is the best one ever evaluated. Fully deterministic
//! given a deterministic objective.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    /// Hard budget on objective evaluations.
    pub max_evals: usize,
    /// Terminal trust radius.
    pub tol: f64,
    /// Initial trust radius.
    pub rho_beg: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            max_evals: 250,
            tol: 1e-3,
            rho_beg: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptOutcome {
    pub best_params: Vec<f64>,
    pub best_value: f64,
    /// One entry per objective evaluation, in evaluation order.
    pub params_trace: Vec<Vec<f64>>,
    pub value_trace: Vec<f64>,
    pub evaluations: usize,
    /// True when the trust radius shrank below `tol` within budget.
    pub converged: bool,
}

/// Objective wrapper that enforces the budget, checks finiteness, and records
/// the trace.
struct Tracer<F> {
    objective: F,
    max_evals: usize,
    params_trace: Vec<Vec<f64>>,
    value_trace: Vec<f64>,
    best: (Vec<f64>, f64),
}

impl<F: FnMut(&[f64]) -> Result<f64>> Tracer<F> {
    fn evals(&self) -> usize {
        self.value_trace.len()
    }

    /// Returns `Ok(None)` once the budget is exhausted.
    fn try_eval(&mut self, x: &[f64]) -> Result<Option<f64>> {
        if self.evals() >= self.max_evals {
            return Ok(None);
        }
        let value = (self.objective)(x)?;
        if !value.is_finite() {
            return Err(Error::NonFiniteObjective {
                evaluation: self.evals() + 1,
                params: x.to_vec(),
            });
        }
        self.params_trace.push(x.to_vec());
        self.value_trace.push(value);
        if value < self.best.1 || self.value_trace.len() == 1 {
            self.best = (x.to_vec(), value);
        }
        Ok(Some(value))
    }
}

fn clamp_into(x: &mut [f64], bounds: &[(f64, f64)]) {
    for (v, &(lo, hi)) in x.iter_mut().zip(bounds) {
        *v = v.clamp(lo, hi);
    }
}

/// Axis probe point at distance `rho` from `base`, stepping away from the
/// nearer bound.
fn axis_point(base: &[f64], axis: usize, rho: f64, bounds: &[(f64, f64)]) -> Vec<f64> {
    let mut x = base.to_vec();
    if base[axis] + rho <= bounds[axis].1 {
        x[axis] += rho;
    } else {
        x[axis] -= rho;
    }
    clamp_into(&mut x, bounds);
    x
}

/// Solve `a * g = b` by Gaussian elimination with partial pivoting; `None`
/// when the simplex is degenerate.
#[allow(clippy::needless_range_loop)]
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a
        .iter()
        .flat_map(|row| row.iter().map(|v| v.abs()))
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    let tiny = scale * 1e-12;
    for col in 0..n {
        let pivot = (col..n).max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))?;
        if a[pivot][col].abs() <= tiny {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in (col + 1)..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut g = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in (row + 1)..n {
            acc -= a[row][k] * g[k];
        }
        g[row] = acc / a[row][row];
    }
    Some(g)
}

fn argmin(vals: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in vals.iter().enumerate() {
        if v < vals[best] {
            best = i;
        }
    }
    best
}

fn argmax(vals: &[f64]) -> usize {
    let mut worst = 0;
    for (i, &v) in vals.iter().enumerate() {
        if v > vals[worst] {
            worst = i;
        }
    }
    worst
}

/// Minimize `objective` over the box `bounds` starting from `x0`.
pub fn minimize<F>(
    objective: F,
    x0: &[f64],
    bounds: &[(f64, f64)],
    cfg: &OptimizerConfig,
) -> Result<OptOutcome>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let dim = x0.len();
    if dim == 0 {
        return Err(Error::InvalidInput("empty parameter vector".into()));
    }
    if bounds.len() != dim {
        return Err(Error::InvalidInput(format!(
            "{} bounds for {} parameters",
            bounds.len(),
            dim
        )));
    }
    for (i, &(lo, hi)) in bounds.iter().enumerate() {
        if !(lo < hi) {
            return Err(Error::InvalidInput(format!(
                "bound {i} is empty: [{lo}, {hi}]"
            )));
        }
        if !(x0[i] >= lo && x0[i] <= hi) {
            return Err(Error::InvalidInput(format!(
                "x0[{i}] = {} outside [{lo}, {hi}]",
                x0[i]
            )));
        }
    }
    if cfg.max_evals < dim + 2 {
        return Err(Error::InvalidInput(format!(
            "max_evals = {} but the simplex alone needs {} evaluations",
            cfg.max_evals,
            dim + 1
        )));
    }
    if !(cfg.tol > 0.0) || !(cfg.rho_beg > cfg.tol) {
        return Err(Error::InvalidInput(format!(
            "need 0 < tol < rho_beg, got tol = {}, rho_beg = {}",
            cfg.tol, cfg.rho_beg
        )));
    }

    let mut tracer = Tracer {
        objective,
        max_evals: cfg.max_evals,
        params_trace: Vec::new(),
        value_trace: Vec::new(),
        best: (x0.to_vec(), f64::INFINITY),
    };
    let mut rho = cfg.rho_beg;
    let mut converged = false;

    let mut points: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    let mut vals: Vec<f64> = Vec::with_capacity(dim + 1);
    let v0 = tracer
        .try_eval(x0)?
        .expect("budget admits the initial simplex");
    points.push(x0.to_vec());
    vals.push(v0);

    'outer: {
        for i in 0..dim {
            let x = axis_point(x0, i, rho, bounds);
            match tracer.try_eval(&x)? {
                Some(v) => {
                    points.push(x);
                    vals.push(v);
                }
                None => break 'outer,
            }
        }

        loop {
            let best = argmin(&vals);

            // Linear model g interpolating the simplex relative to the best
            // point.
            let mut rows = Vec::with_capacity(dim);
            let mut rhs = Vec::with_capacity(dim);
            for j in 0..points.len() {
                if j == best {
                    continue;
                }
                rows.push(
                    points[j]
                        .iter()
                        .zip(&points[best])
                        .map(|(a, b)| a - b)
                        .collect::<Vec<f64>>(),
                );
                rhs.push(vals[j] - vals[best]);
            }
            let gradient = solve_linear(rows, rhs);

            let candidate = gradient.as_ref().and_then(|g| {
                let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm == 0.0 || !norm.is_finite() {
                    return None;
                }
                let mut cand: Vec<f64> = points[best]
                    .iter()
                    .zip(g)
                    .map(|(x, gi)| x - rho * gi / norm)
                    .collect();
                clamp_into(&mut cand, bounds);
                let moved = cand
                    .iter()
                    .zip(&points[best])
                    .any(|(a, b)| (a - b).abs() > 1e-15);
                moved.then_some(cand)
            });

            let improved = if let (Some(cand), Some(g)) = (candidate, gradient.as_ref()) {
                let predicted: f64 = g
                    .iter()
                    .zip(points[best].iter().zip(&cand))
                    .map(|(gi, (xb, xc))| gi * (xb - xc))
                    .sum();
                let f_best = vals[best];
                let step: Vec<f64> = cand.iter().zip(&points[best]).map(|(c, b)| c - b).collect();
                let fc = match tracer.try_eval(&cand)? {
                    Some(v) => v,
                    None => break 'outer,
                };
                let worst = argmax(&vals);
                let mut accepted = (cand, fc);
                if fc < vals[worst] {
                    points[worst] = accepted.0.clone();
                    vals[worst] = fc;
                }
                let success = predicted > 0.0 && (f_best - fc) >= 0.1 * predicted;
                if success {
                    // Walk further along the accepted direction while it
                    // keeps paying off; crosses wide basins without touching
                    // the trust radius.
                    loop {
                        let mut next: Vec<f64> =
                            accepted.0.iter().zip(&step).map(|(x, s)| x + s).collect();
                        clamp_into(&mut next, bounds);
                        if next
                            .iter()
                            .zip(&accepted.0)
                            .all(|(a, b)| (a - b).abs() <= 1e-15)
                        {
                            break;
                        }
                        let fw = match tracer.try_eval(&next)? {
                            Some(v) => v,
                            None => break 'outer,
                        };
                        if fw >= accepted.1 {
                            break;
                        }
                        accepted = (next, fw);
                        let worst = argmax(&vals);
                        if accepted.1 < vals[worst] {
                            points[worst] = accepted.0.clone();
                            vals[worst] = accepted.1;
                        }
                    }
                }
                success
            } else {
                // Degenerate simplex or flat model: no usable direction at
                // this scale.
                false
            };

            if !improved {
                rho *= 0.5;
                if rho < cfg.tol {
                    converged = true;
                    break 'outer;
                }
                // Re-span the simplex along the axes at the new radius.
                let anchor = points[argmin(&vals)].clone();
                let anchor_val = vals[argmin(&vals)];
                points = vec![anchor.clone()];
                vals = vec![anchor_val];
                for i in 0..dim {
                    let x = axis_point(&anchor, i, rho, bounds);
                    match tracer.try_eval(&x)? {
                        Some(v) => {
                            points.push(x);
                            vals.push(v);
                        }
                        None => break 'outer,
                    }
                }
            }
            if tracer.evals() >= cfg.max_evals {
                break 'outer;
            }
        }
    }

    let (best_params, best_value) = tracer.best;
    Ok(OptOutcome {
        best_params,
        best_value,
        evaluations: tracer.value_trace.len(),
        params_trace: tracer.params_trace,
        value_trace: tracer.value_trace,
        converged,
    })
}
