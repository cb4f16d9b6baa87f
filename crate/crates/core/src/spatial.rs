//! Tensor-product grid functions, the fourth-order compact operators and
//! the factored ADI solve.
//!
//! Operators follow the usual compact-difference conventions:
//!
//! * `A1 u = (u_{i-1,j} + 10 u_{i,j} + u_{i+1,j}) / 12` for interior `i`,
//!   identity on `i = 0, M1`; `A2` likewise in `y`; `Ah = A1 A2`.
//! * `dx2`, `dy2` are the three-point second differences, zero on the
//!   boundary lines they cannot reach.
//! * `Lh = A2 dx2 + A1 dy2` is the compact Laplacian.

use crate::numerics::{NumericsError, Tridiagonal, TridiagonalLu};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("need at least 2 cells per direction, got {m1} x {m2}")]
    TooCoarse { m1: usize, m2: usize },
    #[error("empty or inverted domain")]
    Domain,
    #[error("mesh ratio h2/h1 = {0} outside [1/4, 4]")]
    Anisotropic(f64),
    #[error("fields live on different grids")]
    Mismatch,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Uniform partition of `(l1, r1) x (l2, r2)` into `M1 x M2` cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec2D {
    pub l1: f64,
    pub r1: f64,
    pub l2: f64,
    pub r2: f64,
    pub m1: usize,
    pub m2: usize,
}

impl GridSpec2D {
    pub fn new(l1: f64, r1: f64, l2: f64, r2: f64, m1: usize, m2: usize) -> Result<Self, GridError> {
        if m1 < 2 || m2 < 2 {
            return Err(GridError::TooCoarse { m1, m2 });
        }
        if !(r1 > l1) || !(r2 > l2) || !(r1 - l1).is_finite() || !(r2 - l2).is_finite() {
            return Err(GridError::Domain);
        }
        let g = Self { l1, r1, l2, r2, m1, m2 };
        let ratio = g.h2() / g.h1();
        if !(0.25..=4.0).contains(&ratio) {
            return Err(GridError::Anisotropic(ratio));
        }
        Ok(g)
    }

    pub fn unit_square(m: usize) -> Result<Self, GridError> {
        Self::new(0.0, 1.0, 0.0, 1.0, m, m)
    }

    /// Same domain, every cell split in two along each axis.
    pub fn refined(&self) -> Self {
        Self { m1: 2 * self.m1, m2: 2 * self.m2, ..*self }
    }

    pub fn h1(&self) -> f64 {
        (self.r1 - self.l1) / self.m1 as f64
    }

    pub fn h2(&self) -> f64 {
        (self.r2 - self.l2) / self.m2 as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.l1 + i as f64 * self.h1()
    }

    pub fn y(&self, j: usize) -> f64 {
        self.l2 + j as f64 * self.h2()
    }

    /// Number of stored values, boundary included.
    pub fn len(&self) -> usize {
        (self.m1 + 1) * (self.m2 + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * (self.m2 + 1) + j
    }

    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i == self.m1 || j == self.m2
    }
}

/// Grid function on the full `(M1+1) x (M2+1)` node set, row-major by x-index.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D {
    grid: GridSpec2D,
    values: Vec<f64>,
}

impl Field2D {
    pub fn zeros(grid: GridSpec2D) -> Self {
        Self { grid, values: vec![0.0; grid.len()] }
    }

    /// Samples `f` at every node, boundary included.
    pub fn from_fn(grid: GridSpec2D, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..=grid.m1 {
            for j in 0..=grid.m2 {
                values.push(f(grid.x(i), grid.y(j)));
            }
        }
        Self { grid, values }
    }

    /// Samples `f` on interior nodes; boundary left at zero.
    pub fn from_fn_interior(grid: GridSpec2D, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut out = Self::from_fn(grid, f);
        out.zero_boundary();
        out
    }

    pub fn from_values(grid: GridSpec2D, values: Vec<f64>) -> Result<Self, GridError> {
        if values.len() != grid.len() {
            return Err(GridError::Mismatch);
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &GridSpec2D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.idx(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.grid.idx(i, j);
        self.values[k] = v;
    }

    pub fn zero_boundary(&mut self) {
        let (m1, m2) = (self.grid.m1, self.grid.m2);
        for i in 0..=m1 {
            for j in 0..=m2 {
                if self.grid.is_boundary(i, j) {
                    self.set(i, j, 0.0);
                }
            }
        }
    }

    /// True when every boundary value is exactly zero.
    pub fn is_homogeneous(&self) -> bool {
        let (m1, m2) = (self.grid.m1, self.grid.m2);
        (0..=m1).all(|i| (0..=m2).all(|j| !self.grid.is_boundary(i, j) || self.get(i, j) == 0.0))
    }

    pub fn fill(&mut self, v: f64) {
        self.values.iter_mut().for_each(|x| *x = v);
    }

    /// `self += a * other`
    pub fn axpy(&mut self, a: f64, other: &Field2D) {
        debug_assert_eq!(self.grid, other.grid);
        for (x, y) in self.values.iter_mut().zip(&other.values) {
            *x += a * y;
        }
    }

    pub fn scale(&mut self, a: f64) {
        self.values.iter_mut().for_each(|x| *x *= a);
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest absolute difference over interior nodes.
    pub fn max_abs_diff(&self, other: &Field2D) -> f64 {
        self.values.iter().zip(&other.values).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// `(x, y, value)` rows, one per node.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,value\n");
        for i in 0..=self.grid.m1 {
            for j in 0..=self.grid.m2 {
                out.push_str(&format!("{},{},{}\n", self.grid.x(i), self.grid.y(j), self.get(i, j)));
            }
        }
        out
    }
}

fn compact_x(u: &Field2D, out: &mut Field2D) {
    let g = *u.grid();
    let s = g.m2 + 1;
    let (src, dst) = (u.values(), out.values_mut());
    dst[..s].copy_from_slice(&src[..s]);
    let last = g.m1 * s;
    dst[last..last + s].copy_from_slice(&src[last..last + s]);
    for i in 1..g.m1 {
        for j in 0..s {
            let k = i * s + j;
            dst[k] = (src[k - s] + 10.0 * src[k] + src[k + s]) / 12.0;
        }
    }
}

fn compact_y(u: &Field2D, out: &mut Field2D) {
    let g = *u.grid();
    let s = g.m2 + 1;
    let (src, dst) = (u.values(), out.values_mut());
    for i in 0..=g.m1 {
        let row = i * s;
        dst[row] = src[row];
        dst[row + g.m2] = src[row + g.m2];
        for j in 1..g.m2 {
            let k = row + j;
            dst[k] = (src[k - 1] + 10.0 * src[k] + src[k + 1]) / 12.0;
        }
    }
}

fn second_x(u: &Field2D, out: &mut Field2D) {
    let g = *u.grid();
    let s = g.m2 + 1;
    let inv = 1.0 / (g.h1() * g.h1());
    let (src, dst) = (u.values(), out.values_mut());
    dst.iter_mut().for_each(|v| *v = 0.0);
    for i in 1..g.m1 {
        for j in 0..s {
            let k = i * s + j;
            dst[k] = (src[k - s] - 2.0 * src[k] + src[k + s]) * inv;
        }
    }
}

fn second_y(u: &Field2D, out: &mut Field2D) {
    let g = *u.grid();
    let s = g.m2 + 1;
    let inv = 1.0 / (g.h2() * g.h2());
    let (src, dst) = (u.values(), out.values_mut());
    dst.iter_mut().for_each(|v| *v = 0.0);
    for i in 0..=g.m1 {
        for j in 1..g.m2 {
            let k = i * s + j;
            dst[k] = (src[k - 1] - 2.0 * src[k] + src[k + 1]) * inv;
        }
    }
}

pub fn apply_a1(u: &Field2D) -> Field2D {
    let mut out = Field2D::zeros(*u.grid());
    compact_x(u, &mut out);
    out
}

pub fn apply_a2(u: &Field2D) -> Field2D {
    let mut out = Field2D::zeros(*u.grid());
    compact_y(u, &mut out);
    out
}

pub fn apply_dx2(u: &Field2D) -> Field2D {
    let mut out = Field2D::zeros(*u.grid());
    second_x(u, &mut out);
    out
}

pub fn apply_dy2(u: &Field2D) -> Field2D {
    let mut out = Field2D::zeros(*u.grid());
    second_y(u, &mut out);
    out
}

/// Mixed fourth difference `dx2 dy2 u`.
pub fn apply_dx2dy2(u: &Field2D) -> Field2D {
    apply_dx2(&apply_dy2(u))
}

/// `Ah = A1 A2`
pub fn apply_ah(u: &Field2D) -> Field2D {
    apply_a1(&apply_a2(u))
}

/// Compact Laplacian `A2 dx2 u + A1 dy2 u`, zero on the boundary.
pub fn apply_lambda_h(u: &Field2D) -> Field2D {
    let mut out = apply_a2(&apply_dx2(u));
    out.axpy(1.0, &apply_a1(&apply_dy2(u)));
    out.zero_boundary();
    out
}

/// Constant-coefficient nine-point stencil acting on interior nodes.
///
/// Every operator above (and any linear combination of them) agrees with
/// such a stencil at interior nodes, which is what the unsplit schemes and
/// residual checks need.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NinePoint {
    /// `coef[di + 1][dj + 1]` multiplies `u_{i+di, j+dj}`.
    pub coef: [[f64; 3]; 3],
}

impl NinePoint {
    /// `c_mass Ah - c_lap Lh + c_mixed dx2 dy2`
    pub fn combination(grid: &GridSpec2D, c_mass: f64, c_lap: f64, c_mixed: f64) -> Self {
        let a = [1.0 / 12.0, 10.0 / 12.0, 1.0 / 12.0];
        let ix = 1.0 / (grid.h1() * grid.h1());
        let iy = 1.0 / (grid.h2() * grid.h2());
        let d = [1.0, -2.0, 1.0];
        let mut coef = [[0.0; 3]; 3];
        for p in 0..3 {
            for q in 0..3 {
                let mass = a[p] * a[q];
                let lap = d[p] * ix * a[q] + a[p] * d[q] * iy;
                let mixed = d[p] * ix * d[q] * iy;
                coef[p][q] = c_mass * mass - c_lap * lap + c_mixed * mixed;
            }
        }
        Self { coef }
    }

    /// Writes the stencil image into `out` on interior nodes; boundary of
    /// `out` is set to zero.
    pub fn apply_into(&self, u: &Field2D, out: &mut Field2D) {
        let g = *u.grid();
        let s = g.m2 + 1;
        let src = u.values();
        let c = &self.coef;
        let dst = out.values_mut();
        dst.iter_mut().for_each(|v| *v = 0.0);
        for i in 1..g.m1 {
            for j in 1..g.m2 {
                let k = i * s + j;
                let (up, dn) = (k - s, k + s);
                dst[k] = c[0][0] * src[up - 1]
                    + c[0][1] * src[up]
                    + c[0][2] * src[up + 1]
                    + c[1][0] * src[k - 1]
                    + c[1][1] * src[k]
                    + c[1][2] * src[k + 1]
                    + c[2][0] * src[dn - 1]
                    + c[2][1] * src[dn]
                    + c[2][2] * src[dn + 1];
            }
        }
    }

    pub fn apply(&self, u: &Field2D) -> Field2D {
        let mut out = Field2D::zeros(*u.grid());
        self.apply_into(u, &mut out);
        out
    }
}

/// Discrete L2 inner product over interior nodes.
pub fn inner(u: &Field2D, w: &Field2D) -> f64 {
    let g = u.grid();
    let mut acc = 0.0;
    for i in 1..g.m1 {
        for j in 1..g.m2 {
            acc += u.get(i, j) * w.get(i, j);
        }
    }
    acc * g.h1() * g.h2()
}

pub fn norm_l2(u: &Field2D) -> f64 {
    inner(u, u).sqrt()
}

/// `sqrt((u, A1 u))`
pub fn norm_a1(u: &Field2D) -> f64 {
    inner(u, &apply_a1(u)).max(0.0).sqrt()
}

/// `sqrt((u, Ah u))`
pub fn norm_ah(u: &Field2D) -> f64 {
    inner(u, &apply_ah(u)).max(0.0).sqrt()
}

/// `(dx u, dx w)` summed over `i + 1/2 = 1/2..M1-1/2`, interior `j`.
pub fn inner_dx(u: &Field2D, w: &Field2D) -> f64 {
    let g = u.grid();
    let mut acc = 0.0;
    for i in 0..g.m1 {
        for j in 1..g.m2 {
            acc += (u.get(i + 1, j) - u.get(i, j)) * (w.get(i + 1, j) - w.get(i, j));
        }
    }
    acc * g.h2() / g.h1()
}

pub fn inner_dy(u: &Field2D, w: &Field2D) -> f64 {
    let g = u.grid();
    let mut acc = 0.0;
    for i in 1..g.m1 {
        for j in 0..g.m2 {
            acc += (u.get(i, j + 1) - u.get(i, j)) * (w.get(i, j + 1) - w.get(i, j));
        }
    }
    acc * g.h1() / g.h2()
}

/// `(dx dy u, dx dy w)` over all cell centres.
pub fn inner_dxdy(u: &Field2D, w: &Field2D) -> f64 {
    let g = u.grid();
    let cross = |f: &Field2D, i: usize, j: usize| f.get(i + 1, j + 1) - f.get(i, j + 1) - f.get(i + 1, j) + f.get(i, j);
    let mut acc = 0.0;
    for i in 0..g.m1 {
        for j in 0..g.m2 {
            acc += cross(u, i, j) * cross(w, i, j);
        }
    }
    acc / (g.h1() * g.h2())
}

/// Factored solver for `c0 (A1 - eta dx2)(A2 - eta dy2) E = rhs` with
/// homogeneous Dirichlet data. Both line matrices are factored once.
#[derive(Debug, Clone)]
pub struct AdiSolver {
    grid: GridSpec2D,
    eta: f64,
    c0: f64,
    x_lines: TridiagonalLu,
    y_lines: TridiagonalLu,
}

impl AdiSolver {
    pub fn new(grid: GridSpec2D, eta: f64, c0: f64) -> Result<Self, GridError> {
        let line = |m: usize, h: f64, scale: f64| {
            let r = eta / (h * h);
            Tridiagonal::constant(
                m - 1,
                scale * (1.0 / 12.0 - r),
                scale * (10.0 / 12.0 + 2.0 * r),
                scale * (1.0 / 12.0 - r),
            )
        };
        let x_lines = line(grid.m1, grid.h1(), c0).factor()?;
        let y_lines = line(grid.m2, grid.h2(), 1.0).factor()?;
        Ok(Self { grid, eta, c0, x_lines, y_lines })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    /// Step 1 solves one x-line per interior `j` for the intermediate
    /// `E* = (A2 - eta dy2) E`; step 2 solves one y-line per interior `i`.
    /// Only interior values of `rhs` are read.
    pub fn solve_into(&self, rhs: &Field2D, out: &mut Field2D) {
        let g = self.grid;
        let s = g.m2 + 1;
        let mut line = vec![0.0; g.m1 - 1];
        {
            let src = rhs.values();
            let dst = out.values_mut();
            dst.iter_mut().for_each(|v| *v = 0.0);
            for j in 1..g.m2 {
                for i in 1..g.m1 {
                    line[i - 1] = src[i * s + j];
                }
                self.x_lines.solve_in_place(&mut line);
                for i in 1..g.m1 {
                    dst[i * s + j] = line[i - 1];
                }
            }
            for i in 1..g.m1 {
                let row = &mut dst[i * s + 1..i * s + g.m2];
                self.y_lines.solve_in_place(row);
            }
        }
    }

    pub fn solve(&self, rhs: &Field2D) -> Field2D {
        let mut out = Field2D::zeros(self.grid);
        self.solve_into(rhs, &mut out);
        out
    }
}

pub fn adi_sweep(rhs: &Field2D, eta: f64, c0: f64) -> Result<Field2D, GridError> {
    Ok(AdiSolver::new(*rhs.grid(), eta, c0)?.solve(rhs))
}
