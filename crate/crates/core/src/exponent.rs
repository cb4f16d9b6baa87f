//! The variable exponent `alpha(t)` and the generalized identity function
//!
//! ```text
//! g(t) = int_0^1 (tz)^(alpha0 - alpha(tz)) / (Gamma(alpha0 - 1) Gamma(2 - alpha(tz)))
//!              (1 - z)^(alpha0 - 2) z^(1 - alpha0) dz
//! ```
//!
//! together with the interpolation weights derived from it.

use crate::numerics::{gamma, gauss_jacobi, gauss_legendre, NumericsError, QuadratureKind, QuadratureRule};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

pub type ExponentFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Node count used for `g` unless configured otherwise.
pub const DEFAULT_JACOBI_NODES: usize = 64;
/// Gauss–Legendre points per time step for the step integrals of `g`.
pub const DEFAULT_AVG_NODES: usize = 4;
/// Largest change in any `g(t_n)` tolerated when the Jacobi rule is doubled.
pub const NODE_DOUBLING_TOL: f64 = 1e-10;
const MAX_JACOBI_NODES: usize = 1024;
const FIRST_STEP_LEVELS: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExponentError {
    #[error("alpha(0) = {0} must lie in (1, 2)")]
    InitialValue(f64),
    #[error("alpha({t}) = {value} leaves (1, 2)")]
    OutOfRange { t: f64, value: f64 },
    #[error("alpha'(0) does not vanish (difference quotients {coarse:e} -> {fine:e})")]
    NonzeroInitialSlope { coarse: f64, fine: f64 },
    #[error("negative time {0}")]
    NegativeTime(f64),
    #[error("quadrature rule does not carry the weight (1-z)^(alpha0-2) z^(1-alpha0)")]
    RuleMismatch,
    #[error("unknown exponent profile '{0}' (expected example1, example2 or constant)")]
    UnknownProfile(String),
    #[error("g quadrature not converged: doubling the Jacobi nodes moved g by {0:e}")]
    NotConverged(f64),
    #[error("need at least one time step and T > 0")]
    BadMesh,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// A time-dependent exponent with `alpha(0) = alpha0 in (1, 2)` and
/// vanishing initial slope.
#[derive(Clone)]
pub struct ExponentProfile {
    alpha: ExponentFn,
    alpha0: f64,
    abar: f64,
    label: String,
}

impl fmt::Debug for ExponentProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExponentProfile").field("label", &self.label).field("alpha0", &self.alpha0).finish()
    }
}

impl ExponentProfile {
    /// Wraps an arbitrary exponent. `alpha0` is read off as `alpha(0)`.
    pub fn new(label: impl Into<String>, alpha: ExponentFn) -> Result<Self, ExponentError> {
        let alpha0 = alpha(0.0);
        if !(alpha0 > 1.0 && alpha0 < 2.0) {
            return Err(ExponentError::InitialValue(alpha0));
        }
        let quotient = |eps: f64| (alpha(eps) - alpha0).abs() / eps;
        let (coarse, fine) = (quotient(1e-3), quotient(1e-4));
        // A nonzero slope keeps the quotient flat; alpha'(0) = 0 makes it shrink.
        if fine > 1e-10 && fine > 0.5 * coarse {
            return Err(ExponentError::NonzeroInitialSlope { coarse, fine });
        }
        Ok(Self { alpha, alpha0, abar: alpha0 - 1.0, label: label.into() })
    }

    /// `alpha0 + t^2 / 11`
    pub fn example1(alpha0: f64) -> Result<Self, ExponentError> {
        Self::new("example1", Arc::new(move |t| alpha0 + t * t / 11.0))
    }

    /// `alpha0 + t^2 / (3 + e^{2t})`
    pub fn example2(alpha0: f64) -> Result<Self, ExponentError> {
        Self::new("example2", Arc::new(move |t| alpha0 + t * t / (3.0 + (2.0 * t).exp())))
    }

    pub fn constant(alpha0: f64) -> Result<Self, ExponentError> {
        Self::new("constant", Arc::new(move |_| alpha0))
    }

    /// Registry lookup used by the CLI and config files.
    pub fn from_key(key: &str, alpha0: f64) -> Result<Self, ExponentError> {
        match key {
            "example1" => Self::example1(alpha0),
            "example2" => Self::example2(alpha0),
            "constant" => Self::constant(alpha0),
            other => Err(ExponentError::UnknownProfile(other.to_string())),
        }
    }

    pub fn alpha(&self, t: f64) -> f64 {
        (self.alpha)(t)
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    /// `alpha0 - 1`, the order of the Abel kernel in the transformed model.
    pub fn abar(&self) -> f64 {
        self.abar
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Samples `alpha` on `samples + 1` equispaced points of `[0, t_final]`.
    pub fn check_range(&self, t_final: f64, samples: usize) -> Result<(), ExponentError> {
        let samples = samples.max(1);
        for k in 0..=samples {
            let t = t_final * k as f64 / samples as f64;
            let value = self.alpha(t);
            if !(value > 1.0 && value < 2.0) {
                return Err(ExponentError::OutOfRange { t, value });
            }
        }
        Ok(())
    }

    /// The Gauss–Jacobi rule whose weight is the singular factor of `g`.
    pub fn identity_rule(&self, nodes: usize) -> Result<QuadratureRule, ExponentError> {
        Ok(gauss_jacobi(nodes, self.alpha0 - 2.0, 1.0 - self.alpha0)?)
    }
}

/// Evaluates `g(t)` with a prebuilt rule carrying the weight
/// `(1-z)^(alpha0-2) z^(1-alpha0)`.
pub fn eval_g(profile: &ExponentProfile, t: f64, rule: &QuadratureRule) -> Result<f64, ExponentError> {
    IdentityFunction::new(profile.clone(), rule.clone())?.eval(t)
}

/// `g` bound to one profile and one Jacobi rule.
#[derive(Debug, Clone)]
pub struct IdentityFunction {
    profile: ExponentProfile,
    rule: QuadratureRule,
    inv_gamma_abar: f64,
    limit: f64,
}

impl IdentityFunction {
    pub fn new(profile: ExponentProfile, rule: QuadratureRule) -> Result<Self, ExponentError> {
        let a0 = profile.alpha0();
        match rule.kind() {
            QuadratureKind::Jacobi { a, b } if (a - (a0 - 2.0)).abs() < 1e-14 && (b - (1.0 - a0)).abs() < 1e-14 => {}
            _ => return Err(ExponentError::RuleMismatch),
        }
        let inv_gamma_abar = 1.0 / gamma(a0 - 1.0)?;
        let limit = inv_gamma_abar / gamma(2.0 - a0)?;
        Ok(Self { profile, rule, inv_gamma_abar, limit })
    }

    pub fn profile(&self) -> &ExponentProfile {
        &self.profile
    }

    pub fn eval(&self, t: f64) -> Result<f64, ExponentError> {
        if !(t >= 0.0) {
            return Err(ExponentError::NegativeTime(t));
        }
        let a0 = self.profile.alpha0();
        let mut acc = 0.0;
        for (&z, &w) in self.rule.nodes().iter().zip(self.rule.weights()) {
            let s = t * z;
            let smooth = if s == 0.0 {
                self.limit
            } else {
                let a = self.profile.alpha(s);
                let gam = gamma(2.0 - a).map_err(|_| ExponentError::OutOfRange { t: s, value: a })?;
                ((a0 - a) * s.ln()).exp() * self.inv_gamma_abar / gam
            };
            acc += w * smooth;
        }
        Ok(acc)
    }
}

/// `g` sampled on a uniform time mesh plus the weights built from it.
#[derive(Debug, Clone)]
pub struct IdentityKernelTable {
    tau: f64,
    times: Vec<f64>,
    g_vals: Vec<f64>,
    step_integrals: Vec<f64>,
    w: Vec<f64>,
    wtilde: Vec<f64>,
    c0: f64,
    doubling_change: f64,
    jacobi_nodes: usize,
}

impl IdentityKernelTable {
    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn steps(&self) -> usize {
        self.times.len() - 1
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// `g(t_n)` for `n = 0..=N`.
    pub fn g_vals(&self) -> &[f64] {
        &self.g_vals
    }

    /// `int_{t_{n-1}}^{t_n} g(t) dt` for `1 <= n <= N`.
    pub fn step_integral(&self, n: usize) -> f64 {
        self.step_integrals[n - 1]
    }

    pub fn step_integrals(&self) -> &[f64] {
        &self.step_integrals
    }

    /// `w_k = g(t_{k+1}) - g(t_k)`, `k = 0..N-1`.
    pub fn w(&self) -> &[f64] {
        &self.w
    }

    /// Averaged weights `w~_0 = w_0 / 2`, `w~_k = (w_k + w_{k-1}) / 2`.
    pub fn wtilde(&self) -> &[f64] {
        &self.wtilde
    }

    /// `1 + w_0 / 2`
    pub fn c0(&self) -> f64 {
        self.c0
    }

    /// Largest `|g(t_n)|` change observed when the Jacobi rule was doubled.
    pub fn doubling_change(&self) -> f64 {
        self.doubling_change
    }

    /// Jacobi node count actually used after escalation.
    pub fn jacobi_nodes(&self) -> usize {
        self.jacobi_nodes
    }
}

pub fn build_kernel_table(
    profile: &ExponentProfile,
    steps: usize,
    t_final: f64,
    jacobi_nodes: usize,
    avg_nodes: usize,
) -> Result<IdentityKernelTable, ExponentError> {
    if steps == 0 || !(t_final > 0.0) {
        return Err(ExponentError::BadMesh);
    }
    profile.check_range(t_final, 4 * steps)?;
    let tau = t_final / steps as f64;
    let times: Vec<f64> = (0..=steps).map(|n| n as f64 * tau).collect();

    // Escalate the Jacobi rule until doubling it no longer moves any g(t_n).
    let mut nodes = jacobi_nodes.max(1);
    let mut g = IdentityFunction::new(profile.clone(), profile.identity_rule(nodes)?)?;
    let mut g_vals = times.iter().map(|&t| g.eval(t)).collect::<Result<Vec<_>, _>>()?;
    let doubling_change = loop {
        let finer = IdentityFunction::new(profile.clone(), profile.identity_rule(2 * nodes)?)?;
        let finer_vals = times.iter().map(|&t| finer.eval(t)).collect::<Result<Vec<_>, _>>()?;
        let change = g_vals.iter().zip(&finer_vals).fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
        if change < NODE_DOUBLING_TOL {
            break change;
        }
        if 2 * nodes > MAX_JACOBI_NODES {
            return Err(ExponentError::NotConverged(change));
        }
        nodes *= 2;
        g = finer;
        g_vals = finer_vals;
    };

    let legendre = gauss_legendre(avg_nodes)?;
    let mut step_integrals = Vec::with_capacity(steps);
    for n in 1..=steps {
        let acc = if n == 1 {
            first_step_integral(&g, &legendre, tau)?
        } else {
            let mut acc = 0.0;
            for (t, w) in legendre.mapped(times[n - 1], times[n]) {
                acc += w * g.eval(t)?;
            }
            acc
        };
        step_integrals.push(acc);
    }

    let w: Vec<f64> = g_vals.windows(2).map(|p| p[1] - p[0]).collect();
    let wtilde: Vec<f64> = (0..steps).map(|k| if k == 0 { 0.5 * w[0] } else { 0.5 * (w[k] + w[k - 1]) }).collect();
    let c0 = 1.0 + 0.5 * w[0];
    Ok(IdentityKernelTable { tau, times, g_vals, step_integrals, w, wtilde, c0, doubling_change, jacobi_nodes: nodes })
}

/// `g` behaves like `1 + c t^2 ln t` at the origin, so the first step is
/// split geometrically towards `t = 0` before applying the Legendre rule.
fn first_step_integral(g: &IdentityFunction, legendre: &QuadratureRule, tau: f64) -> Result<f64, ExponentError> {
    let mut acc = 0.0;
    let mut hi = tau;
    for _ in 0..FIRST_STEP_LEVELS {
        let lo = 0.5 * hi;
        for (t, w) in legendre.mapped(lo, hi) {
            acc += w * g.eval(t)?;
        }
        hi = lo;
    }
    // remaining sliver [0, hi]: g is 1 + O(hi^2 ln hi) there
    acc += hi * g.eval(0.5 * hi)?;
    Ok(acc)
}
