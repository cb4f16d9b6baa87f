//! Dense reference machinery shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use diffwave::exponent::build_kernel_table;
use diffwave::numerics::gamma;
use diffwave::schemes::{ProblemSpec, SchemeTag};
use diffwave::spatial::{Field2D, GridSpec2D};
use diffwave::weights::{build_cq_table, build_pi_table};

pub type Mat = Vec<Vec<f64>>;

pub fn zeros(n: usize) -> Mat {
    vec![vec![0.0; n]; n]
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (p, q) = (a.len(), b.len());
    let mut out = zeros(p * q);
    for i in 0..p {
        for j in 0..p {
            for k in 0..q {
                for l in 0..q {
                    out[i * q + k][j * q + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn lin(terms: &[(f64, &Mat)]) -> Mat {
    let n = terms[0].1.len();
    let mut out = zeros(n);
    for (c, m) in terms {
        for i in 0..n {
            for j in 0..n {
                out[i][j] += c * m[i][j];
            }
        }
    }
    out
}

pub fn matvec(a: &Mat, x: &[f64]) -> Vec<f64> {
    a.iter().map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
}

pub fn solve(mut a: Mat, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n).max_by(|&x, &y| a[x][k].abs().total_cmp(&a[y][k].abs())).unwrap();
        a.swap(k, p);
        b.swap(k, p);
        for r in k + 1..n {
            let f = a[r][k] / a[k][k];
            if f != 0.0 {
                for c in k..n {
                    a[r][c] -= f * a[k][c];
                }
                b[r] -= f * b[k];
            }
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|c| a[k][c] * x[c]).sum();
        x[k] = (b[k] - s) / a[k][k];
    }
    x
}

fn tridiag(n: usize, off: f64, diag: f64) -> Mat {
    let mut a = zeros(n);
    for i in 0..n {
        a[i][i] = diag;
        if i > 0 {
            a[i][i - 1] = off;
            a[i - 1][i] = off;
        }
    }
    a
}

/// Compact operators restricted to interior unknowns, ordered `(i-1)(M2-1) + (j-1)`.
pub struct DenseOps {
    pub ah: Mat,
    pub lambda: Mat,
    pub mixed: Mat,
}

impl DenseOps {
    pub fn new(g: &GridSpec2D) -> Self {
        let (nx, ny) = (g.m1 - 1, g.m2 - 1);
        let ax = tridiag(nx, 1.0 / 12.0, 10.0 / 12.0);
        let ay = tridiag(ny, 1.0 / 12.0, 10.0 / 12.0);
        let hx = g.h1() * g.h1();
        let hy = g.h2() * g.h2();
        let dx = tridiag(nx, 1.0 / hx, -2.0 / hx);
        let dy = tridiag(ny, 1.0 / hy, -2.0 / hy);
        let ah = kron(&ax, &ay);
        let lambda = lin(&[(1.0, &kron(&dx, &ay)), (1.0, &kron(&ax, &dy))]);
        let mixed = kron(&dx, &dy);
        Self { ah, lambda, mixed }
    }

    /// `c0 Ah - kappa Lh + mixed dx2 dy2`
    pub fn combo(&self, c0: f64, kappa: f64, mixed: f64) -> Mat {
        lin(&[(c0, &self.ah), (-kappa, &self.lambda), (mixed, &self.mixed)])
    }
}

pub fn interior(f: &Field2D) -> Vec<f64> {
    let g = f.grid();
    let mut v = Vec::with_capacity((g.m1 - 1) * (g.m2 - 1));
    for i in 1..g.m1 {
        for j in 1..g.m2 {
            v.push(f.get(i, j));
        }
    }
    v
}

pub fn sample_interior(g: &GridSpec2D, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    let mut v = Vec::new();
    for i in 1..g.m1 {
        for j in 1..g.m2 {
            v.push(f(g.x(i), g.y(j)));
        }
    }
    v
}

fn add(a: &[f64], b: &[f64], s: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    add(a, b, -1.0)
}

fn scaled(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| s * x).collect()
}

fn avg(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect()
}

/// Physical solutions `U^0..=U^N` on interior nodes from a dense solver
/// written directly in terms of the discrete equations (difference
/// quotients, full convolution sums), for problems with `f = 0`.
pub fn reference_run(spec: &ProblemSpec, tag: SchemeTag, steps: usize) -> Vec<Vec<f64>> {
    assert!(spec.f_is_zero());
    let g = spec.grid;
    let ops = DenseOps::new(&g);
    let abar = spec.profile.abar();
    let kernel = build_kernel_table(&spec.profile, steps, spec.t_final, 64, 4).unwrap();
    let tau = kernel.tau();
    let c0 = kernel.c0();
    let wt = kernel.wtilde().to_vec();
    let u0 = sample_interior(&g, &*spec.u0);
    let u0bar = sample_interior(&g, &*spec.u0bar);
    let lap = sample_interior(&g, &*spec.lap_u0);
    let size = u0.len();
    let zero = vec![0.0; size];
    let mv = |m: &Mat, x: &[f64]| matvec(m, x);
    // sum_{k=1}^{n-1} w~_{n-k} Ah (V^k - V^{k-1}) / tau
    let memory = |hist: &[Vec<f64>], n: usize| {
        let mut acc = zero.clone();
        for k in 1..n {
            acc = add(&acc, &mv(&ops.ah, &sub(&hist[k], &hist[k - 1])), wt[n - k] / tau);
        }
        acc
    };

    if tag.uses_cq() {
        let cq = build_cq_table(abar, steps).unwrap();
        let inv_g = 1.0 / gamma(abar + 1.0).unwrap();
        let source = |n: usize| {
            let t = kernel.times()[n];
            add(&scaled(&lap, t.powf(abar) * inv_g), &u0bar, kernel.g_vals()[n])
        };
        let mixed_c = if tag.is_adi() { (tau.powf(abar + 1.0) * cq.chi[0]).powi(2) / (4.0 * c0) } else { 0.0 };
        let mut hist: Vec<Vec<f64>> = vec![zero.clone()];
        for n in 1..=steps {
            // left-hand side with the unknown level set to zero
            let prev = &hist[n - 1];
            let mut known = scaled(&mv(&ops.ah, prev), -c0 / tau);
            known = add(&known, &memory(&hist, n), 1.0);
            let level = |q: isize| if q < 0 || q as usize == n { zero.clone() } else { hist[q as usize].clone() };
            let mut conv = zero.clone();
            for p in 0..=n {
                let q = n as isize - p as isize;
                conv = add(&conv, &avg(&level(q), &level(q - 1)), cq.chi[p]);
            }
            conv = add(&conv, &hist[0], cq.rho_hat[n]);
            known = add(&known, &mv(&ops.lambda, &conv), -tau.powf(abar));
            known = add(&known, &mv(&ops.mixed, prev), -mixed_c / tau);
            let rhs = sub(&mv(&ops.ah, &avg(&source(n), &source(n - 1))), &known);
            let mat = ops.combo(c0 / tau, tau.powf(abar) * cq.chi[0] / 2.0, mixed_c / tau);
            hist.push(solve(mat, rhs));
        }
        hist.iter().map(|v| add(v, &u0, 1.0)).collect()
    } else {
        let pi = build_pi_table(abar, steps, tau).unwrap();
        let fbar = |n: usize| scaled(&u0bar, kernel.step_integral(n) / tau);
        let mut hist: Vec<Vec<f64>> = vec![u0.clone()];
        for n in 1..=steps {
            let prev = hist[n - 1].clone();
            let l = pi.lambda(n, n);
            let (mat, rhs) = if n == 1 {
                let mixed_c = if tag.is_adi() { tau * tau * l * l / c0 } else { 0.0 };
                let mat = ops.combo(c0 / tau, l, mixed_c / tau);
                let mut known = scaled(&mv(&ops.ah, &prev), -c0 / tau);
                known = add(&known, &mv(&ops.mixed, &prev), -mixed_c / tau);
                (mat, sub(&mv(&ops.ah, &fbar(1)), &known))
            } else {
                let mixed_c = if tag.is_adi() { tau * tau * l * l / (4.0 * c0) } else { 0.0 };
                let mat = ops.combo(c0 / tau, l / 2.0, mixed_c / tau);
                let mut known = scaled(&mv(&ops.ah, &prev), -c0 / tau);
                known = add(&known, &memory(&hist, n), 1.0);
                // P^{n-1/2} with the unknown level zeroed
                let mut p = scaled(&hist[1], pi.lambda(n, 1));
                for j in 2..=n {
                    let upper = if j == n { zero.clone() } else { hist[j].clone() };
                    p = add(&p, &avg(&upper, &hist[j - 1]), pi.lambda(n, j));
                }
                known = add(&known, &mv(&ops.lambda, &p), -1.0);
                known = add(&known, &mv(&ops.mixed, &prev), -mixed_c / tau);
                (mat, sub(&mv(&ops.ah, &fbar(n)), &known))
            };
            hist.push(solve(mat, rhs));
        }
        hist
    }
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}
