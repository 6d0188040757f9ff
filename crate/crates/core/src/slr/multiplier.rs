//! Multiplier vector and step-size rules.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Step-size schedule. `s_k` is the length of the multiplier move in $/MWh.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum StepRule {
    /// `s0·α^k`, applied along the unit residual direction.
    Geometric { s0: f64, alpha: f64 },
    /// `s0 / (k+1)^power` with `0 < power ≤ 1`: vanishing with a divergent sum.
    Diminishing { s0: f64, power: f64 },
}

impl Default for StepRule {
    fn default() -> Self {
        StepRule::Geometric { s0: 20.0, alpha: 0.98 }
    }
}

impl StepRule {
    /// Move length at iteration `k` (0-based).
    pub fn length(&self, k: usize) -> f64 {
        match *self {
            StepRule::Geometric { s0, alpha } => s0 * alpha.powi(k as i32),
            StepRule::Diminishing { s0, power } => s0 / ((k + 1) as f64).powf(power),
        }
    }
}

pub fn l2_norm(r: &[f64]) -> f64 {
    r.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn max_abs(r: &[f64]) -> f64 {
    r.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `Λ ← Λ − s·R` where `R` is supply minus demand and `s = length/‖R‖`.
/// Returns the scalar `s` actually applied (0 when `R = 0`).
pub fn update_multipliers(lambda: &mut [f64], residual: &[f64], length: f64, iteration: usize) -> Result<f64> {
    if lambda.len() != residual.len() {
        return Err(Error::Mismatch(format!(
            "{} multipliers for {} residual rows",
            lambda.len(),
            residual.len()
        )));
    }
    if residual.iter().any(|r| !r.is_finite()) {
        return Err(Error::NonFinite(iteration));
    }
    let norm = l2_norm(residual);
    if norm == 0.0 {
        return Ok(0.0);
    }
    let s = length / norm;
    for (l, r) in lambda.iter_mut().zip(residual) {
        *l -= s * r;
    }
    Ok(s)
}
