use super::{PhaseTiming, ProblemSpec, RhsEvaluator, SchemeError, SchemeTag, SolverOptions};
use crate::exponent::{build_kernel_table, IdentityKernelTable};
use crate::spatial::{apply_ah, apply_lambda_h, AdiSolver, Field2D, GridSpec2D, NinePoint};
use crate::weights::{build_cq_table, build_pi_table, CqWeightTable, PiWeightTable};
use web_time::Instant;

#[derive(Debug, Clone)]
enum TimeRule {
    Cq(CqWeightTable),
    Pi(PiWeightTable),
}

/// The linear system of the latest step, on interior nodes:
/// `(c0 Ah - kappa Lh + mixed dx2 dy2) increment = rhs`.
///
/// `mixed` is `kappa^2 / c0` for the ADI schemes and zero otherwise.
#[derive(Debug, Clone)]
pub struct StepSystem {
    pub level: usize,
    pub rhs: Field2D,
    pub increment: Field2D,
    pub c0: f64,
    pub kappa: f64,
    pub mixed: f64,
    pub iterations: usize,
}

impl StepSystem {
    pub fn operator(&self) -> NinePoint {
        NinePoint::combination(self.increment.grid(), self.c0, self.kappa, self.mixed)
    }

    /// Interior residual divided by the interior size of `rhs`.
    pub fn relative_residual(&self) -> f64 {
        let mut r = self.operator().apply(&self.increment);
        r.axpy(-1.0, &self.rhs);
        r.zero_boundary();
        let mut b = self.rhs.clone();
        b.zero_boundary();
        r.max_abs() / b.max_abs().max(f64::MIN_POSITIVE)
    }
}

/// Time stepper shared by all four schemes.
///
/// The convolution-quadrature schemes march the shifted unknown `U - u0`
/// (starting from zero); the product-integration schemes march `U` itself.
/// `Lh` of every stored level and `Ah` of every increment are cached, so a
/// step costs `O(n)` field additions plus one solve.
#[derive(Debug)]
pub struct Stepper {
    tag: SchemeTag,
    grid: GridSpec2D,
    steps: usize,
    tau: f64,
    kernel: IdentityKernelTable,
    rule: TimeRule,
    rhs_eval: RhsEvaluator,
    u0: Field2D,
    levels: Vec<Field2D>,
    lambda_cache: Vec<Field2D>,
    ah_increments: Vec<Field2D>,
    prev_source: Option<Field2D>,
    adi_first: Option<AdiSolver>,
    adi_rest: Option<AdiSolver>,
    last_increment: Field2D,
    last: Option<StepSystem>,
    record: bool,
    cg_tol: f64,
    cg_max_iter: usize,
    timing: PhaseTiming,
}

impl Stepper {
    pub fn new(spec: &ProblemSpec, tag: SchemeTag, steps: usize, opts: &SolverOptions) -> Result<Self, SchemeError> {
        if steps == 0 {
            return Err(SchemeError::BadSteps(steps));
        }
        let start = Instant::now();
        let grid = spec.grid;
        let abar = spec.profile.abar();
        let kernel = build_kernel_table(&spec.profile, steps, spec.t_final, opts.jacobi_nodes, opts.avg_nodes)?;
        let tau = kernel.tau();
        let rule = if tag.uses_cq() {
            TimeRule::Cq(build_cq_table(abar, steps)?)
        } else {
            TimeRule::Pi(build_pi_table(abar, steps, tau)?)
        };
        let rhs_eval = RhsEvaluator::new(spec, opts.source_nodes)?;
        let weights = start.elapsed().as_secs_f64();

        let u0 = spec.initial_field();
        let start_level = if tag.uses_cq() { Field2D::zeros(grid) } else { u0.clone() };
        let c0 = kernel.c0();
        let (adi_first, adi_rest) = if tag.is_adi() {
            let (k1, k2) = match &rule {
                TimeRule::Cq(t) => {
                    let k = tau.powf(abar + 1.0) * t.chi[0] / 2.0;
                    (k, k)
                }
                TimeRule::Pi(t) => (tau * t.diagonal(), tau * t.diagonal() / 2.0),
            };
            let first = AdiSolver::new(grid, k1 / c0, c0)?;
            let rest = if steps > 1 { Some(AdiSolver::new(grid, k2 / c0, c0)?) } else { None };
            (Some(first), rest)
        } else {
            (None, None)
        };
        Ok(Self {
            tag,
            grid,
            steps,
            tau,
            rule,
            rhs_eval,
            u0,
            lambda_cache: vec![apply_lambda_h(&start_level)],
            levels: vec![start_level],
            ah_increments: Vec::with_capacity(steps),
            prev_source: None,
            adi_first,
            adi_rest,
            last_increment: Field2D::zeros(grid),
            last: None,
            record: opts.record_systems,
            cg_tol: opts.cg_tol,
            cg_max_iter: opts.cg_max_iter,
            timing: PhaseTiming { weights, ..PhaseTiming::default() },
            kernel,
        })
    }

    pub fn tag(&self) -> SchemeTag {
        self.tag
    }

    /// Index of the latest computed level.
    pub fn level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn kernel(&self) -> &IdentityKernelTable {
        &self.kernel
    }

    pub fn cq_table(&self) -> Option<&CqWeightTable> {
        match &self.rule {
            TimeRule::Cq(t) => Some(t),
            TimeRule::Pi(_) => None,
        }
    }

    pub fn pi_table(&self) -> Option<&PiWeightTable> {
        match &self.rule {
            TimeRule::Pi(t) => Some(t),
            TimeRule::Cq(_) => None,
        }
    }

    /// Stored unknown at level `k`: `U^k - u0` for the CQ schemes, `U^k` otherwise.
    pub fn state(&self, k: usize) -> &Field2D {
        &self.levels[k]
    }

    /// `U^k` including the initial value.
    pub fn solution(&self, k: usize) -> Field2D {
        let mut u = self.levels[k].clone();
        if self.tag.uses_cq() {
            u.axpy(1.0, &self.u0);
        }
        u
    }

    pub fn cached_lambda(&self, k: usize) -> &Field2D {
        &self.lambda_cache[k]
    }

    /// Largest difference between the cached `Lh` of level `k` and a fresh
    /// evaluation, relative to the field size.
    pub fn cache_deviation(&self, k: usize) -> f64 {
        let fresh = apply_lambda_h(&self.levels[k]);
        fresh.max_abs_diff(&self.lambda_cache[k]) / fresh.max_abs().max(1.0)
    }

    /// The system solved at the latest step; kept only when
    /// `SolverOptions::record_systems` is set.
    pub fn last_system(&self) -> Option<&StepSystem> {
        self.last.as_ref()
    }

    pub fn timing(&self) -> &PhaseTiming {
        &self.timing
    }

    /// Right-hand side and implicit coefficients for level `n`.
    fn assemble(&mut self, n: usize) -> (Field2D, f64) {
        let tau = self.tau;
        let mut rhs = Field2D::zeros(self.grid);
        let kappa;
        let source;
        match &self.rule {
            TimeRule::Cq(t) => {
                let scale = tau.powf(t.alpha + 1.0);
                kappa = scale * t.chi[0] / 2.0;
                for p in 0..n {
                    let mut c = scale * t.chi_hat[n - p];
                    if p == 0 {
                        c += scale * t.rho_hat[n];
                    }
                    if p == n - 1 {
                        c += kappa;
                    }
                    rhs.axpy(c, &self.lambda_cache[p]);
                }
                let g = self.kernel.g_vals();
                let prev = match self.prev_source.take() {
                    Some(f) => f,
                    None => self.rhs_eval.source(self.kernel.times()[n - 1], g[n - 1]),
                };
                let now = self.rhs_eval.source(self.kernel.times()[n], g[n]);
                let mut avg = prev;
                avg.axpy(1.0, &now);
                avg.scale(0.5);
                source = avg;
                self.prev_source = Some(now);
            }
            TimeRule::Pi(t) => {
                if n == 1 {
                    kappa = tau * t.lambda(1, 1);
                    rhs.axpy(kappa, &self.lambda_cache[0]);
                } else {
                    kappa = tau * t.lambda(n, n) / 2.0;
                    rhs.axpy(tau * t.lambda(n, n), &self.lambda_cache[n - 1]);
                    rhs.axpy(tau * t.lambda(n, 1), &self.lambda_cache[1]);
                    for k in 2..n {
                        let c = tau * t.lambda(n, k) / 2.0;
                        rhs.axpy(c, &self.lambda_cache[k]);
                        rhs.axpy(c, &self.lambda_cache[k - 1]);
                    }
                }
                source = self.rhs_eval.averaged_source(n, &self.kernel);
            }
        }
        let wt = self.kernel.wtilde();
        for k in 1..n {
            rhs.axpy(-wt[n - k], &self.ah_increments[k - 1]);
        }
        // source keeps its boundary values: Ah reads them at interior nodes
        rhs.axpy(tau, &apply_ah(&source));
        rhs.zero_boundary();
        (rhs, kappa)
    }

    /// Advances one level.
    pub fn step(&mut self) -> Result<(), SchemeError> {
        let n = self.level() + 1;
        if n > self.steps {
            return Err(SchemeError::BadSteps(n));
        }
        let t0 = Instant::now();
        let (rhs, kappa) = self.assemble(n);
        let t1 = Instant::now();
        let c0 = self.kernel.c0();
        let mut increment = Field2D::zeros(self.grid);
        let (mixed, iterations) = if self.tag.is_adi() {
            let solver = if n == 1 { self.adi_first.as_ref() } else { self.adi_rest.as_ref() }.expect("solver built");
            solver.solve_into(&rhs, &mut increment);
            (kappa * kappa / c0, 0)
        } else {
            increment.values_mut().copy_from_slice(self.last_increment.values());
            let op = NinePoint::combination(&self.grid, c0, kappa, 0.0);
            let it = conjugate_gradient(&op, &rhs, &mut increment, self.cg_tol, self.cg_max_iter)?;
            (0.0, it)
        };
        let t2 = Instant::now();

        let mut next = self.levels[n - 1].clone();
        next.axpy(1.0, &increment);
        self.lambda_cache.push(apply_lambda_h(&next));
        self.ah_increments.push(apply_ah(&increment));
        self.levels.push(next);
        self.timing.rhs += (t1 - t0).as_secs_f64();
        self.timing.solve += (t2 - t1).as_secs_f64();
        if self.record {
            self.last = Some(StepSystem { level: n, rhs, increment: increment.clone(), c0, kappa, mixed, iterations });
        }
        self.last_increment = increment;
        Ok(())
    }

    /// Physical solution at every level, `U^0 ..= U^n`.
    pub fn into_solutions(self) -> Vec<Field2D> {
        let cq = self.tag.uses_cq();
        let u0 = self.u0;
        self.levels
            .into_iter()
            .map(|mut u| {
                if cq {
                    u.axpy(1.0, &u0);
                }
                u
            })
            .collect()
    }
}

/// Conjugate gradients for an SPD stencil on interior nodes. `x` holds the
/// initial guess and receives the solution; stops at
/// `|b - A x| <= tol |b|`.
pub fn conjugate_gradient(
    op: &NinePoint,
    b: &Field2D,
    x: &mut Field2D,
    tol: f64,
    max_iter: usize,
) -> Result<usize, SchemeError> {
    let dot = |u: &Field2D, v: &Field2D| u.values().iter().zip(v.values()).map(|(a, b)| a * b).sum::<f64>();
    let mut b = b.clone();
    b.zero_boundary();
    x.zero_boundary();
    let bnorm = dot(&b, &b).sqrt();
    if bnorm == 0.0 {
        x.fill(0.0);
        return Ok(0);
    }
    let mut r = op.apply(x);
    r.scale(-1.0);
    r.axpy(1.0, &b);
    let mut p = r.clone();
    let mut ap = Field2D::zeros(*b.grid());
    let mut rr = dot(&r, &r);
    let target = tol * bnorm;
    for it in 0..max_iter {
        if rr.sqrt() <= target {
            return Ok(it);
        }
        op.apply_into(&p, &mut ap);
        let alpha = rr / dot(&p, &ap);
        x.axpy(alpha, &p);
        r.axpy(-alpha, &ap);
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        rr = rr_new;
        for (pv, rv) in p.values_mut().iter_mut().zip(r.values()) {
            *pv = rv + beta * *pv;
        }
    }
    if rr.sqrt() <= target {
        return Ok(max_iter);
    }
    Err(SchemeError::NotConverged { iterations: max_iter, residual: rr.sqrt() / bnorm })
}
