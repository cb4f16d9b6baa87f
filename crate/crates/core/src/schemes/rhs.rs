use super::{ProblemSpec, SchemeError};
use crate::exponent::IdentityKernelTable;
use crate::numerics::{gamma, gauss_jacobi, QuadratureRule};
use crate::spatial::Field2D;

/// Source terms of the transformed equations on the full grid.
///
/// * `source(t)`: `(beta_abar * (lap u0 + f))(t) + g(t) u0bar`, the
///   right-hand side for the shifted unknown `u - u0`.
/// * `averaged_source(n)`: the step average over `(t_{n-1}, t_n)` of
///   `(beta_abar * f)(t) + g(t) u0bar`.
#[derive(Debug, Clone)]
pub struct RhsEvaluator {
    spec: ProblemSpec,
    abar: f64,
    lap_u0: Field2D,
    u0bar: Field2D,
    inv_gamma_a: f64,
    inv_gamma_a1: f64,
    // (1 - s)^(abar - 1) for beta_abar * f, (1 - s)^abar for beta_{abar+1} * f
    point_rule: Option<QuadratureRule>,
    antider_rule: Option<QuadratureRule>,
}

impl RhsEvaluator {
    pub fn new(spec: &ProblemSpec, jacobi_nodes: usize) -> Result<Self, SchemeError> {
        let abar = spec.profile.abar();
        let (point_rule, antider_rule) = if spec.f.is_some() {
            (Some(gauss_jacobi(jacobi_nodes, abar - 1.0, 0.0)?), Some(gauss_jacobi(jacobi_nodes, abar, 0.0)?))
        } else {
            (None, None)
        };
        Ok(Self {
            spec: spec.clone(),
            abar,
            lap_u0: Field2D::from_fn(spec.grid, &*spec.lap_u0),
            u0bar: Field2D::from_fn(spec.grid, &*spec.u0bar),
            inv_gamma_a: 1.0 / gamma(abar)?,
            inv_gamma_a1: 1.0 / gamma(abar + 1.0)?,
            point_rule,
            antider_rule,
        })
    }

    /// `sum_q w_q f(., ., t s_q)` over the rule.
    fn sampled_source_sum(&self, rule: &QuadratureRule, t: f64) -> Field2D {
        let f = self.spec.f.as_ref().expect("source present");
        let mut acc = Field2D::zeros(self.spec.grid);
        for (&s, &w) in rule.nodes().iter().zip(rule.weights()) {
            let ts = t * s;
            acc.axpy(w, &Field2D::from_fn(self.spec.grid, |x, y| f(x, y, ts)));
        }
        acc
    }

    /// `(beta_abar * f)(t)`
    pub fn source_convolution(&self, t: f64) -> Option<Field2D> {
        let rule = self.point_rule.as_ref()?;
        let mut acc = self.sampled_source_sum(rule, t);
        acc.scale(t.powf(self.abar) * self.inv_gamma_a);
        Some(acc)
    }

    /// `(beta_{abar+1} * f)(t)`, an antiderivative of `beta_abar * f`.
    fn source_antiderivative(&self, t: f64) -> Option<Field2D> {
        let rule = self.antider_rule.as_ref()?;
        if t == 0.0 {
            return Some(Field2D::zeros(self.spec.grid));
        }
        let mut acc = self.sampled_source_sum(rule, t);
        acc.scale(t.powf(self.abar + 1.0) * self.inv_gamma_a1);
        Some(acc)
    }

    /// Pointwise source for the shifted unknown; `g_t = g(t)`.
    pub fn source(&self, t: f64, g_t: f64) -> Field2D {
        let mut out = self.lap_u0.clone();
        out.scale(t.powf(self.abar) * self.inv_gamma_a1);
        out.axpy(g_t, &self.u0bar);
        if let Some(conv) = self.source_convolution(t) {
            out.axpy(1.0, &conv);
        }
        out
    }

    /// Step-averaged source for level `n` (`1 <= n <= N`).
    pub fn averaged_source(&self, n: usize, kernel: &IdentityKernelTable) -> Field2D {
        let tau = kernel.tau();
        let mut out = self.u0bar.clone();
        out.scale(kernel.step_integral(n) / tau);
        let times = kernel.times();
        if let (Some(hi), Some(lo)) = (self.source_antiderivative(times[n]), self.source_antiderivative(times[n - 1])) {
            out.axpy(1.0 / tau, &hi);
            out.axpy(-1.0 / tau, &lo);
        }
        out
    }
}
