use super::SchemeError;
use crate::exponent::ExponentProfile;
use crate::spatial::{Field2D, GridSpec2D};
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

pub type SpaceFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type SourceFn = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

/// Initial-boundary value problem on a rectangle with homogeneous Dirichlet
/// data: initial value `u0`, initial velocity `u0bar`, source `f`.
#[derive(Clone)]
pub struct ProblemSpec {
    pub grid: GridSpec2D,
    pub t_final: f64,
    pub profile: ExponentProfile,
    pub u0: SpaceFn,
    pub u0bar: SpaceFn,
    /// Exact Laplacian of `u0`.
    pub lap_u0: SpaceFn,
    /// `None` means `f = 0`, which enables the closed-form source path.
    pub f: Option<SourceFn>,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("grid", &self.grid)
            .field("t_final", &self.t_final)
            .field("profile", &self.profile)
            .field("f_is_zero", &self.f.is_none())
            .finish()
    }
}

fn sin_sin(k: f64) -> SpaceFn {
    Arc::new(move |x, y| (k * PI * x).sin() * (k * PI * y).sin())
}

impl ProblemSpec {
    /// `u0 = sin(pi x) sin(pi y)`, `u0bar = sin(2 pi x) sin(2 pi y)`, `f = 0` on the unit square.
    pub fn example1(profile: ExponentProfile, m: usize) -> Result<Self, SchemeError> {
        Ok(Self {
            grid: GridSpec2D::unit_square(m)?,
            t_final: 1.0,
            profile,
            u0: sin_sin(1.0),
            u0bar: sin_sin(2.0),
            lap_u0: Arc::new(|x, y| -2.0 * PI * PI * (PI * x).sin() * (PI * y).sin()),
            f: None,
        })
    }

    /// Same initial value as example 1, zero initial velocity.
    pub fn example2(profile: ExponentProfile, m: usize) -> Result<Self, SchemeError> {
        Ok(Self { u0bar: Arc::new(|_, _| 0.0), ..Self::example1(profile, m)? })
    }

    /// All data zero; the solution is identically zero.
    pub fn zero(profile: ExponentProfile, m: usize) -> Result<Self, SchemeError> {
        let z: SpaceFn = Arc::new(|_, _| 0.0);
        Ok(Self {
            grid: GridSpec2D::unit_square(m)?,
            t_final: 1.0,
            profile,
            u0: z.clone(),
            u0bar: z.clone(),
            lap_u0: z,
            f: None,
        })
    }

    /// Looks up `example1`, `example2` or `zero`.
    pub fn from_key(key: &str, profile: ExponentProfile, m: usize) -> Result<Self, SchemeError> {
        match key {
            "example1" => Self::example1(profile, m),
            "example2" => Self::example2(profile, m),
            "zero" => Self::zero(profile, m),
            other => Err(SchemeError::UnknownProblem(other.to_string())),
        }
    }

    pub fn with_grid(&self, grid: GridSpec2D) -> Self {
        Self { grid, ..self.clone() }
    }

    pub fn with_source(self, f: SourceFn) -> Self {
        Self { f: Some(f), ..self }
    }

    pub fn with_t_final(self, t_final: f64) -> Self {
        Self { t_final, ..self }
    }

    pub fn f_is_zero(&self) -> bool {
        self.f.is_none()
    }

    /// `u0` sampled with the boundary forced to zero.
    pub fn initial_field(&self) -> Field2D {
        Field2D::from_fn_interior(self.grid, &*self.u0)
    }

    /// Largest boundary value of `u0` and `u0bar` on the grid.
    pub fn boundary_mismatch(&self) -> f64 {
        let g = self.grid;
        let mut worst: f64 = 0.0;
        for i in 0..=g.m1 {
            for j in 0..=g.m2 {
                if g.is_boundary(i, j) {
                    let (x, y) = (g.x(i), g.y(j));
                    worst = worst.max((self.u0)(x, y).abs()).max((self.u0bar)(x, y).abs());
                }
            }
        }
        worst
    }
}
