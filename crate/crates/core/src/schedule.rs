//! Fixed-parameter-count schedule functions.
//!
//! Three schedule functions F1 (mixer), F2 (problem), F3 (auxiliary bias)
//! are each defined by `n_p` trainable control values on the uniform grid
//! `s_j = j / (n_p + 1)` plus fixed boundary values
//! `F1(0) = F2(1) = 1`, `F1(1) = F2(0) = F3(0) = F3(1) = 0`,
//! and reconstructed by monotonicity-preserving cubic Hermite interpolation
//! (Fritsch-Carlson slope limiting). The trainable parameter count is
//! `3 * n_p` regardless of how many times the schedules get sampled.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Piecewise-cubic C1 interpolant through given points, monotone between
/// adjacent control points (no overshoot within any interval).
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

fn same_sign(a: f64, b: f64) -> bool {
    (a > 0.0 && b > 0.0) || (a < 0.0 && b < 0.0)
}

/// One-sided three-point endpoint slope with the Fritsch-Carlson limits.
/// `delta0` is the secant of the boundary interval, `delta1` its neighbor,
/// `h0`/`h1` the interval widths.
fn endpoint_slope(h0: f64, h1: f64, delta0: f64, delta1: f64) -> f64 {
    if delta0 == 0.0 {
        return 0.0;
    }
    let d = ((2.0 * h0 + h1) * delta0 - h0 * delta1) / (h0 + h1);
    if !same_sign(d, delta0) {
        0.0
    } else if !same_sign(delta0, delta1) && d.abs() > 3.0 * delta0.abs() {
        3.0 * delta0
    } else {
        d
    }
}

impl MonotoneCubic {
    /// Build from `(x, y)` pairs sorted by strictly increasing x.
    pub fn new(points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidInput(
                "interpolation needs at least 2 points".into(),
            ));
        }
        let xs: Vec<f64> = points.iter().map(|&(x, _)| x).collect();
        let ys: Vec<f64> = points.iter().map(|&(_, y)| y).collect();
        if xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(
                "interpolation points must have strictly increasing x".into(),
            ));
        }

        let n = xs.len();
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();

        let mut slopes = vec![0.0; n];
        if n == 2 {
            slopes[0] = delta[0];
            slopes[1] = delta[0];
        } else {
            slopes[0] = endpoint_slope(h[0], h[1], delta[0], delta[1]);
            slopes[n - 1] = endpoint_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
            for i in 1..n - 1 {
                if same_sign(delta[i - 1], delta[i]) {
                    // Weighted harmonic mean keeps the slope inside the
                    // monotonicity region.
                    let w1 = 2.0 * h[i] + h[i - 1];
                    let w2 = h[i] + 2.0 * h[i - 1];
                    slopes[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
                }
                // Sign change or flat secant leaves the slope at zero.
            }
        }
        Ok(MonotoneCubic { xs, ys, slopes })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    /// Evaluate at `x`; no extrapolation outside the point range.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        if !(x >= lo && x <= hi) {
            return Err(Error::OutOfDomain { value: x, lo, hi });
        }
        if x == hi {
            return Ok(*self.ys.last().unwrap());
        }
        let i = self.xs.partition_point(|&v| v <= x) - 1;
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let omt = 1.0 - t;
        let h10 = t * omt * omt;
        let h01 = t * t * (3.0 - 2.0 * t);
        let h11 = t * t * (t - 1.0);
        // Incremental Hermite form: flat segments stay exactly flat.
        Ok(self.ys[i]
            + h01 * (self.ys[i + 1] - self.ys[i])
            + h * (h10 * self.slopes[i] + h11 * self.slopes[i + 1]))
    }
}

/// Which of the three schedule functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScheduleKind {
    /// F1: weight of the mixer Hamiltonian, 1 -> 0.
    Mixer,
    /// F2: weight of the problem Hamiltonian, 0 -> 1.
    Problem,
    /// F3: weight of the auxiliary local bias, 0 -> 0.
    Bias,
}

impl ScheduleKind {
    /// Fixed boundary values (at s = 0 and s = 1) for this schedule.
    pub fn boundary(self) -> (f64, f64) {
        match self {
            ScheduleKind::Mixer => (1.0, 0.0),
            ScheduleKind::Problem => (0.0, 1.0),
            ScheduleKind::Bias => (0.0, 0.0),
        }
    }
}

pub const SCHEDULE_KINDS: [ScheduleKind; 3] = [
    ScheduleKind::Mixer,
    ScheduleKind::Problem,
    ScheduleKind::Bias,
];

/// The `3 * n_p` trainable control values of the three schedules.
///
/// Control values are not box-constrained here; optimizer-level bounds are
/// applied separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScheduleSetRepr", into = "ScheduleSetRepr")]
pub struct ScheduleSet {
    n_p: usize,
    y1: Vec<f64>,
    y2: Vec<f64>,
    y3: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ScheduleSetRepr {
    n_p: usize,
    y1: Vec<f64>,
    y2: Vec<f64>,
    y3: Vec<f64>,
}

impl ScheduleSet {
    pub fn new(y1: Vec<f64>, y2: Vec<f64>, y3: Vec<f64>) -> Result<Self> {
        if y1.len() != y2.len() || y1.len() != y3.len() {
            return Err(Error::InvalidInput(format!(
                "schedule value vectors must share one length, got {}/{}/{}",
                y1.len(),
                y2.len(),
                y3.len()
            )));
        }
        Ok(ScheduleSet {
            n_p: y1.len(),
            y1,
            y2,
            y3,
        })
    }

    /// Split one flat trainable vector `[y1.., y2.., y3..]` of length
    /// `3 * n_p`.
    pub fn from_flat(n_p: usize, flat: &[f64]) -> Result<Self> {
        if flat.len() != 3 * n_p {
            return Err(Error::InvalidInput(format!(
                "expected {} trainable values, got {}",
                3 * n_p,
                flat.len()
            )));
        }
        Ok(ScheduleSet {
            n_p,
            y1: flat[..n_p].to_vec(),
            y2: flat[n_p..2 * n_p].to_vec(),
            y3: flat[2 * n_p..].to_vec(),
        })
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(3 * self.n_p);
        out.extend_from_slice(&self.y1);
        out.extend_from_slice(&self.y2);
        out.extend_from_slice(&self.y3);
        out
    }

    /// Control values reproducing the plain linear annealing ramp:
    /// F1 = 1 - s, F2 = s, F3 = 0 exactly.
    pub fn linear_ramp(n_p: usize) -> Self {
        let grid = Self::grid_interior(n_p);
        ScheduleSet {
            n_p,
            y1: grid.iter().map(|&s| 1.0 - s).collect(),
            y2: grid.clone(),
            y3: vec![0.0; n_p],
        }
    }

    pub fn n_p(&self) -> usize {
        self.n_p
    }

    /// Total trainable parameter count, `3 * n_p`.
    pub fn n_params(&self) -> usize {
        3 * self.n_p
    }

    pub fn values(&self, kind: ScheduleKind) -> &[f64] {
        match kind {
            ScheduleKind::Mixer => &self.y1,
            ScheduleKind::Problem => &self.y2,
            ScheduleKind::Bias => &self.y3,
        }
    }

    /// Interior grid points `s_j = j / (n_p + 1)`, j = 1..=n_p.
    pub fn grid_interior(n_p: usize) -> Vec<f64> {
        (1..=n_p).map(|j| j as f64 / (n_p + 1) as f64).collect()
    }

    fn interpolant(&self, kind: ScheduleKind) -> MonotoneCubic {
        let (b0, b1) = kind.boundary();
        let interior = Self::grid_interior(self.n_p);
        let mut points = Vec::with_capacity(self.n_p + 2);
        points.push((0.0, b0));
        points.extend(
            interior
                .iter()
                .zip(self.values(kind))
                .map(|(&s, &y)| (s, y)),
        );
        points.push((1.0, b1));
        MonotoneCubic::new(&points).expect("uniform schedule grid is strictly increasing")
    }

    /// Build all three interpolants once; cheap, O(n_p).
    pub fn build(&self) -> ScheduleFns {
        ScheduleFns {
            f1: self.interpolant(ScheduleKind::Mixer),
            f2: self.interpolant(ScheduleKind::Problem),
            f3: self.interpolant(ScheduleKind::Bias),
        }
    }

    /// Evaluate schedule `kind` at normalized time `s` in [0, 1].
    pub fn eval(&self, kind: ScheduleKind, s: f64) -> Result<f64> {
        self.interpolant(kind).eval(s)
    }
}

/// The three built schedule functions, immutable and shareable.
#[derive(Debug, Clone)]
pub struct ScheduleFns {
    f1: MonotoneCubic,
    f2: MonotoneCubic,
    f3: MonotoneCubic,
}

impl ScheduleFns {
    pub fn eval(&self, kind: ScheduleKind, s: f64) -> Result<f64> {
        match kind {
            ScheduleKind::Mixer => self.f1.eval(s),
            ScheduleKind::Problem => self.f2.eval(s),
            ScheduleKind::Bias => self.f3.eval(s),
        }
    }

    /// Sample all three curves at `count` equally spaced points over [0, 1],
    /// for plotting exports.
    pub fn sample_curves(&self, count: usize) -> Vec<(f64, f64, f64, f64)> {
        (0..count)
            .map(|i| {
                let s = i as f64 / (count - 1) as f64;
                (
                    s,
                    self.f1.eval(s).unwrap(),
                    self.f2.eval(s).unwrap(),
                    self.f3.eval(s).unwrap(),
                )
            })
            .collect()
    }
}

impl TryFrom<ScheduleSetRepr> for ScheduleSet {
    type Error = Error;

    fn try_from(repr: ScheduleSetRepr) -> Result<Self> {
        if repr.y1.len() != repr.n_p || repr.y2.len() != repr.n_p || repr.y3.len() != repr.n_p {
            return Err(Error::InvalidInput(format!(
                "schedule set declares n_p = {} but carries {}/{}/{} values",
                repr.n_p,
                repr.y1.len(),
                repr.y2.len(),
                repr.y3.len()
            )));
        }
        ScheduleSet::new(repr.y1, repr.y2, repr.y3)
    }
}

impl From<ScheduleSet> for ScheduleSetRepr {
    fn from(s: ScheduleSet) -> Self {
        ScheduleSetRepr {
            n_p: s.n_p,
            y1: s.y1,
            y2: s.y2,
            y3: s.y3,
        }
    }
}
