//! Quadrature weights for the Riemann–Liouville integral of order `abar`:
//! trapezoidal convolution quadrature (generating function
//! `(2(1-z)/(1+z))^{-abar}`) with a starting correction, and the averaged
//! product-integration rule on piecewise-constant data.

use crate::numerics::{gamma, NumericsError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeightError {
    #[error("order {0} outside (0, 1)")]
    Order(f64),
    #[error("step size {0} must be positive")]
    Step(f64),
    #[error("history of length {got} does not fit a table with {steps} steps")]
    Length { got: usize, steps: usize },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

fn check_order(abar: f64) -> Result<(), WeightError> {
    if abar > 0.0 && abar < 1.0 {
        Ok(())
    } else {
        Err(WeightError::Order(abar))
    }
}

/// Trapezoidal convolution-quadrature weights `chi_p`, correction weights
/// `rho_n`, and their two-point averages.
///
/// `chi_hat[p] = (chi_p + chi_{p-1}) / 2` and `rho_hat[n] = (rho_n + rho_{n-1}) / 2`,
/// with index 0 holding `chi_0 / 2` and `rho_0 / 2` (the convention
/// `chi_{-1} = rho_{-1} = 0`).
#[derive(Debug, Clone)]
pub struct CqWeightTable {
    pub alpha: f64,
    pub chi: Vec<f64>,
    pub rho: Vec<f64>,
    pub chi_hat: Vec<f64>,
    pub rho_hat: Vec<f64>,
}

impl CqWeightTable {
    pub fn steps(&self) -> usize {
        self.chi.len() - 1
    }
}

pub fn build_cq_table(abar: f64, steps: usize) -> Result<CqWeightTable, WeightError> {
    check_order(abar)?;
    let n = steps.max(1);
    // sigma_s = Gamma(a+s) / (Gamma(a) s!), varrho_s = Gamma(a+1) / (Gamma(a-s+1) s!)
    let mut sigma = Vec::with_capacity(n + 1);
    let mut varrho = Vec::with_capacity(n + 1);
    sigma.push(1.0);
    varrho.push(1.0);
    for s in 1..=n {
        let sf = s as f64;
        sigma.push(sigma[s - 1] * (abar + sf - 1.0) / sf);
        varrho.push(varrho[s - 1] * (abar - sf + 1.0) / sf);
    }
    let scale = 2f64.powf(-abar);
    let chi: Vec<f64> = (0..=n).map(|p| scale * (0..=p).map(|s| sigma[s] * varrho[p - s]).sum::<f64>()).collect();
    let inv_gamma = 1.0 / gamma(abar + 1.0)?;
    let mut rho = Vec::with_capacity(n + 1);
    let mut partial = 0.0;
    for (k, c) in chi.iter().enumerate() {
        partial += c;
        rho.push((k as f64).powf(abar) * inv_gamma - partial);
    }
    let chi_hat = average_with_previous(&chi);
    let rho_hat = average_with_previous(&rho);
    Ok(CqWeightTable { alpha: abar, chi, rho, chi_hat, rho_hat })
}

fn average_with_previous(v: &[f64]) -> Vec<f64> {
    (0..v.len()).map(|k| 0.5 * (v[k] + if k > 0 { v[k - 1] } else { 0.0 })).collect()
}

/// `tau^a (sum_p chi_p phi^{n-p} + rho_n phi^0)` for the history
/// `phi^0..phi^n`.
pub fn apply_cq(table: &CqWeightTable, history: &[f64], tau: f64) -> Result<f64, WeightError> {
    if history.is_empty() || history.len() > table.chi.len() {
        return Err(WeightError::Length { got: history.len(), steps: table.steps() });
    }
    let n = history.len() - 1;
    let conv: f64 = (0..=n).map(|p| table.chi[p] * history[n - p]).sum();
    Ok(tau.powf(table.alpha) * (conv + table.rho[n] * history[0]))
}

/// Averaged product-integration weights. `lambda(n, j)` depends only on
/// `n - j`, so a single column of length `N` is stored.
#[derive(Debug, Clone)]
pub struct PiWeightTable {
    pub alpha: f64,
    pub tau: f64,
    by_lag: Vec<f64>,
}

impl PiWeightTable {
    pub fn steps(&self) -> usize {
        self.by_lag.len()
    }

    /// `lambda_{n,j}` for `1 <= j <= n <= N`.
    pub fn lambda(&self, n: usize, j: usize) -> f64 {
        debug_assert!(1 <= j && j <= n && n <= self.steps());
        self.by_lag[n - j]
    }

    /// `lambda_{n,n} = tau^a / Gamma(a + 2)`
    pub fn diagonal(&self) -> f64 {
        self.by_lag[0]
    }

    /// All weights indexed by lag `n - j`.
    pub fn by_lag(&self) -> &[f64] {
        &self.by_lag
    }
}

pub fn build_pi_table(abar: f64, steps: usize, tau: f64) -> Result<PiWeightTable, WeightError> {
    check_order(abar)?;
    if !(tau > 0.0) {
        return Err(WeightError::Step(tau));
    }
    let p = abar + 1.0;
    let scale = tau.powf(abar) / gamma(abar + 2.0)?;
    let mut by_lag = Vec::with_capacity(steps);
    by_lag.push(scale);
    for lag in 1..steps {
        // (m+1)^p - 2 m^p + (m-1)^p written so that the O(1) parts cancel exactly
        let m = lag as f64;
        let x = 1.0 / m;
        let second_diff = m.powf(p) * ((p * x.ln_1p()).exp_m1() + (p * (-x).ln_1p()).exp_m1());
        by_lag.push(scale * second_diff);
    }
    Ok(PiWeightTable { alpha: abar, tau, by_lag })
}

/// `lambda_{n,1} phi^1 + sum_{j=2}^n lambda_{n,j} phi^{j-1/2}`; `mid[k]`
/// holds `phi^{k+3/2}`, i.e. the midpoint values for `j = 2..=n`.
pub fn apply_pi(table: &PiWeightTable, first: f64, mid: &[f64]) -> Result<f64, WeightError> {
    let n = mid.len() + 1;
    if n > table.steps() {
        return Err(WeightError::Length { got: n, steps: table.steps() });
    }
    let mut acc = table.lambda(n, 1) * first;
    for (k, v) in mid.iter().enumerate() {
        acc += table.lambda(n, k + 2) * v;
    }
    Ok(acc)
}
