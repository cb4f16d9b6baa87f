//! The four time steppers and their right-hand sides.
//!
//! | tag      | time rule                         | solve          |
//! |----------|-----------------------------------|----------------|
//! | `f2oacd` | trapezoidal convolution quadrature | ADI (factored) |
//! | `a2oacd` | averaged product integration       | ADI (factored) |
//! | `f2oscd` | trapezoidal convolution quadrature | CG, unsplit    |
//! | `a2oscd` | averaged product integration       | CG, unsplit    |

mod problem;
mod rhs;
mod stepper;

pub use problem::{ProblemSpec, SourceFn, SpaceFn};
pub use rhs::RhsEvaluator;
pub use stepper::{conjugate_gradient, StepSystem, Stepper};

use crate::exponent::{ExponentError, DEFAULT_AVG_NODES, DEFAULT_JACOBI_NODES};
use crate::numerics::NumericsError;
use crate::spatial::{Field2D, GridError};
use crate::weights::WeightError;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;
use web_time::Instant;

#[derive(Debug, Error)]
pub enum SchemeError {
    #[error(transparent)]
    Exponent(#[from] ExponentError),
    #[error(transparent)]
    Weights(#[from] WeightError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("unknown scheme '{0}' (expected f2oacd, a2oacd, f2oscd or a2oscd)")]
    UnknownScheme(String),
    #[error("unknown problem '{0}' (expected example1, example2 or zero)")]
    UnknownProblem(String),
    #[error("invalid step count {0}")]
    BadSteps(usize),
    #[error("conjugate gradients stalled after {iterations} iterations at relative residual {residual:e}")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("cached Lh of level {level} deviates by {deviation:e}")]
    CacheIncoherent { level: usize, deviation: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeTag {
    F2oacd,
    A2oacd,
    F2oscd,
    A2oscd,
}

impl SchemeTag {
    pub const ALL: [SchemeTag; 4] = [SchemeTag::F2oacd, SchemeTag::A2oacd, SchemeTag::F2oscd, SchemeTag::A2oscd];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeTag::F2oacd => "f2oacd",
            SchemeTag::A2oacd => "a2oacd",
            SchemeTag::F2oscd => "f2oscd",
            SchemeTag::A2oscd => "a2oscd",
        }
    }

    pub fn is_adi(self) -> bool {
        matches!(self, SchemeTag::F2oacd | SchemeTag::A2oacd)
    }

    /// Convolution-quadrature rule (formal order `alpha0`) versus product integration.
    pub fn uses_cq(self) -> bool {
        matches!(self, SchemeTag::F2oacd | SchemeTag::F2oscd)
    }

    /// The unsplit scheme with the same time rule.
    pub fn standard(self) -> SchemeTag {
        if self.uses_cq() {
            SchemeTag::F2oscd
        } else {
            SchemeTag::A2oscd
        }
    }

    pub fn adi(self) -> SchemeTag {
        if self.uses_cq() {
            SchemeTag::F2oacd
        } else {
            SchemeTag::A2oacd
        }
    }
}

impl fmt::Display for SchemeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeTag {
    type Err = SchemeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemeTag::ALL.into_iter().find(|t| t.as_str() == s).ok_or_else(|| SchemeError::UnknownScheme(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverOptions {
    /// Starting Jacobi node count for `g`; doubled until converged.
    pub jacobi_nodes: usize,
    /// Gauss-Legendre nodes per step for the step integrals of `g`.
    pub avg_nodes: usize,
    /// Jacobi nodes for convolutions of a nonzero source.
    pub source_nodes: usize,
    pub cg_tol: f64,
    pub cg_max_iter: usize,
    /// Compare one cached `Lh` level against a fresh evaluation after the run.
    pub verify_cache: bool,
    /// Keep the latest step system (for residual checks).
    pub record_systems: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            jacobi_nodes: DEFAULT_JACOBI_NODES,
            avg_nodes: DEFAULT_AVG_NODES,
            source_nodes: 32,
            cg_tol: 1e-12,
            cg_max_iter: 50_000,
            verify_cache: true,
            record_systems: false,
        }
    }
}

/// Wall-clock seconds per phase.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseTiming {
    /// Kernel, weight and source-rule construction.
    pub weights: f64,
    /// Right-hand-side assembly, summed over steps.
    pub rhs: f64,
    /// Linear solves, summed over steps.
    pub solve: f64,
    /// The stepping loop alone.
    pub stepping: f64,
    pub total: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub tag: SchemeTag,
    pub tau: f64,
    /// `U^0 ..= U^N`
    pub levels: Vec<Field2D>,
    pub timing: PhaseTiming,
    pub jacobi_nodes: usize,
}

impl Trajectory {
    pub fn final_level(&self) -> &Field2D {
        self.levels.last().expect("at least the initial level")
    }
}

/// Runs `tag` for `steps` uniform steps on `[0, T]`.
pub fn run_solver(
    spec: &ProblemSpec,
    tag: SchemeTag,
    steps: usize,
    opts: &SolverOptions,
) -> Result<Trajectory, SchemeError> {
    let start = Instant::now();
    let mut stepper = Stepper::new(spec, tag, steps, opts)?;
    let loop_start = Instant::now();
    for _ in 0..steps {
        stepper.step()?;
    }
    let stepping = loop_start.elapsed().as_secs_f64();
    if opts.verify_cache {
        // a level that moves with N rather than always the first or last
        let k = (steps.wrapping_mul(2_654_435_761) >> 7) % (steps + 1);
        let deviation = stepper.cache_deviation(k);
        if !(deviation <= 1e-12) {
            return Err(SchemeError::CacheIncoherent { level: k, deviation });
        }
    }
    let mut timing = *stepper.timing();
    timing.stepping = stepping;
    let tau = stepper.tau();
    let jacobi_nodes = stepper.kernel().jacobi_nodes();
    let levels = stepper.into_solutions();
    timing.total = start.elapsed().as_secs_f64();
    Ok(Trajectory { tag, tau, levels, timing, jacobi_nodes })
}
