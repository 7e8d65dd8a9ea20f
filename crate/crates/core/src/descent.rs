//! Multiplicative (log-space) gradient descent for two-factor functionals
//!
//! ```text
//! Φ(s) = (Σ_i A_i e^{α s_i})^a · (Σ_i B_i e^{β s_i})^b
//! ```
//!
//! with nonnegative coefficients. `log Φ` is a sum of log-sum-exp terms, so
//! it is convex in `s`; the descent works on `log Φ` with a gradient scaled
//! by the node masses and an Armijo backtracking line search whose step is
//! allowed to grow after every accepted move.

use crate::error::{AsaError, Result};
use crate::numeric::pairwise_sum;
use serde::Serialize;

#[derive(Debug, Clone)]
pub struct TwoFactorObjective {
    pub first: Vec<f64>,
    pub first_exponent: f64,
    pub first_power: f64,
    pub second: Vec<f64>,
    pub second_exponent: f64,
    pub second_power: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DescentOptions {
    pub max_iterations: usize,
    /// Stop once an accepted step lowers the value by less than this fraction.
    pub relative_tolerance: f64,
    /// Stop once the value falls below this fraction of its starting value.
    pub collapse_fraction: f64,
}

impl Default for DescentOptions {
    fn default() -> Self {
        DescentOptions { max_iterations: 10_000, relative_tolerance: 1e-10, collapse_fraction: 1e-12 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DescentResult {
    pub value: f64,
    /// Optimal log-values `s`.
    pub log_values: Vec<f64>,
    /// `(iteration, value)`; non-increasing.
    pub trace: Vec<(usize, f64)>,
    pub converged: bool,
    pub iterations: usize,
}

impl DescentResult {
    /// Turn a soft non-convergence flag into an error.
    pub fn require_converged(self, options: &DescentOptions) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(AsaError::NonConvergence {
                iterations: self.iterations,
                tolerance: options.relative_tolerance,
                best: self.value,
            })
        }
    }
}

/// `ln Σ c_i e^{k s_i}` over the nodes with `c_i > 0`; `-∞` when none.
fn log_sum(coeffs: &[f64], k: f64, s: &[f64]) -> f64 {
    let shift = coeffs
        .iter()
        .zip(s)
        .filter(|(c, _)| **c > 0.0)
        .map(|(_, x)| k * x)
        .fold(f64::NEG_INFINITY, f64::max);
    if shift == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let terms: Vec<f64> = coeffs
        .iter()
        .zip(s)
        .map(|(c, x)| if *c > 0.0 { c * (k * x - shift).exp() } else { 0.0 })
        .collect();
    shift + pairwise_sum(&terms).ln()
}

impl TwoFactorObjective {
    pub fn len(&self) -> usize {
        self.first.len()
    }

    pub fn is_empty(&self) -> bool {
        self.first.is_empty()
    }

    /// `log Φ(s)`.
    pub fn log_value(&self, s: &[f64]) -> f64 {
        let la = log_sum(&self.first, self.first_exponent, s);
        let lb = log_sum(&self.second, self.second_exponent, s);
        if la == f64::NEG_INFINITY || lb == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        self.first_power * la + self.second_power * lb
    }

    pub fn value(&self, s: &[f64]) -> f64 {
        self.log_value(s).exp()
    }

    /// Gradient of `log Φ` with respect to `s`.
    pub fn log_gradient(&self, s: &[f64]) -> Vec<f64> {
        let la = log_sum(&self.first, self.first_exponent, s);
        let lb = log_sum(&self.second, self.second_exponent, s);
        (0..s.len())
            .map(|i| {
                let mut g = 0.0;
                if self.first[i] > 0.0 {
                    g += self.first_power
                        * self.first_exponent
                        * (self.first[i].ln() + self.first_exponent * s[i] - la).exp();
                }
                if self.second[i] > 0.0 {
                    g += self.second_power
                        * self.second_exponent
                        * (self.second[i].ln() + self.second_exponent * s[i] - lb).exp();
                }
                g
            })
            .collect()
    }

    /// Per-node mass used to scale the gradient: the node's share of each
    /// factor's coefficient total.
    fn node_mass(&self) -> Vec<f64> {
        let ta = pairwise_sum(&self.first);
        let tb = pairwise_sum(&self.second);
        (0..self.len())
            .map(|i| {
                let a = if ta > 0.0 { self.first[i] / ta } else { 0.0 };
                let b = if tb > 0.0 { self.second[i] / tb } else { 0.0 };
                a + b
            })
            .collect()
    }
}

pub fn minimize(objective: &TwoFactorObjective, init: Vec<f64>, options: &DescentOptions) -> DescentResult {
    const ARMIJO: f64 = 1e-4;
    let mass = objective.node_mass();
    let mut s = init;
    let mut log_val = objective.log_value(&s);
    let start = log_val;
    let mut trace = vec![(0, log_val.exp())];
    if log_val == f64::NEG_INFINITY {
        return DescentResult { value: 0.0, log_values: s, trace, converged: true, iterations: 0 };
    }
    let collapse = options.collapse_fraction.ln();
    let mut step = 1.0;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < options.max_iterations {
        iterations += 1;
        let grad = objective.log_gradient(&s);
        let dir: Vec<f64> = grad
            .iter()
            .zip(&mass)
            .map(|(g, m)| if *m > 0.0 { -g / m } else { 0.0 })
            .collect();
        let slope: f64 = pairwise_sum(&grad.iter().zip(&dir).map(|(g, d)| g * d).collect::<Vec<_>>());
        if !(slope < -1e-300) {
            converged = true;
            break;
        }
        let mut accepted = None;
        let mut t = step;
        while t > 1e-30 {
            let cand: Vec<f64> = s.iter().zip(&dir).map(|(x, d)| x + t * d).collect();
            let lv = objective.log_value(&cand);
            if lv <= log_val + ARMIJO * t * slope {
                accepted = Some((cand, lv));
                break;
            }
            t *= 0.5;
        }
        let Some((cand, lv)) = accepted else {
            converged = true;
            break;
        };
        let decrease = 1.0 - (lv - log_val).exp();
        s = cand;
        log_val = lv;
        trace.push((iterations, log_val.exp()));
        step = (2.0 * t).min(1e12);
        if decrease < options.relative_tolerance || log_val - start <= collapse {
            converged = true;
            break;
        }
    }
    DescentResult { value: log_val.exp(), log_values: s, trace, converged, iterations }
}
