//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line per
//! criterion (with the failing sub-checks underneath) and exits non-zero if
//! any criterion fails.

#![allow(clippy::type_complexity)]
mod common;

use common::{interior, max_abs, max_diff, solve, DenseOps};
use diffwave::exponent::{build_kernel_table, eval_g, ExponentProfile};
use diffwave::harness::{
    benchmark_findings, run_benchmark, run_convergence_study, Axis, ConvergenceTable, StudyConfig,
};
use diffwave::numerics::gamma;
use diffwave::schemes::{run_solver, ProblemSpec, SchemeTag, SolverOptions, Stepper};
use diffwave::spatial::*;
use diffwave::weights::{apply_pi, build_cq_table, build_pi_table};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

const VALUE_TOL: f64 = 0.10;
const TABLE1_RATE_TOL: f64 = 0.15;
const TABLE2_RATE_TOL: f64 = 0.15;
const TABLE3_RATE_TOL: f64 = 0.10;

/// `(N or M, error, rate)`; rate 0 marks the "*" row.
type Block = (f64, &'static [(usize, f64, f64)]);

const TABLE1_F2: &[Block] = &[
    (
        1.20,
        &[
            (16, 5.9599e-02, 0.0),
            (32, 2.5695e-02, 1.21),
            (64, 1.0927e-02, 1.23),
            (128, 4.7918e-03, 1.19),
            (256, 2.1244e-03, 1.17),
        ],
    ),
    (
        1.50,
        &[
            (32, 4.0199e-03, 0.0),
            (64, 1.2671e-03, 1.67),
            (128, 4.1822e-04, 1.60),
            (256, 1.4427e-04, 1.54),
            (512, 5.1424e-05, 1.49),
        ],
    ),
    (
        1.90,
        &[
            (8, 7.0889e-02, 0.0),
            (16, 1.8802e-02, 1.91),
            (32, 4.8048e-03, 1.96),
            (64, 1.2164e-03, 1.98),
            (128, 3.0618e-04, 1.99),
        ],
    ),
];

const TABLE1_A2: &[Block] = &[
    (
        1.20,
        &[
            (16, 4.8255e-02, 0.0),
            (32, 1.3225e-02, 1.87),
            (64, 3.5678e-03, 1.89),
            (128, 8.6806e-04, 2.04),
            (256, 2.0957e-04, 2.05),
        ],
    ),
    (
        1.50,
        &[
            (32, 4.0991e-03, 0.0),
            (64, 8.7841e-04, 2.22),
            (128, 2.0193e-04, 2.12),
            (256, 4.8330e-05, 2.06),
            (512, 1.1830e-05, 2.03),
        ],
    ),
    (
        1.90,
        &[
            (8, 5.6004e-02, 0.0),
            (16, 1.3043e-02, 2.10),
            (32, 3.0786e-03, 2.08),
            (64, 7.3910e-04, 2.06),
            (128, 1.7691e-04, 2.06),
        ],
    ),
];

const TABLE2_F2: &[Block] = &[
    (
        1.30,
        &[
            (4, 8.1301e-04, 0.0),
            (8, 4.9771e-05, 4.03),
            (16, 3.0949e-06, 4.01),
            (32, 1.9318e-07, 4.00),
            (64, 1.2070e-08, 4.00),
        ],
    ),
    (
        1.60,
        &[
            (4, 7.1109e-04, 0.0),
            (8, 4.3471e-05, 4.03),
            (16, 2.7032e-06, 4.01),
            (32, 1.6874e-07, 4.00),
            (64, 1.0543e-08, 4.00),
        ],
    ),
    (
        1.90,
        &[
            (4, 4.5057e-03, 0.0),
            (8, 2.6665e-04, 4.08),
            (16, 1.6485e-05, 4.02),
            (32, 1.0277e-06, 4.00),
            (64, 6.4188e-08, 4.00),
        ],
    ),
];

const TABLE2_A2: &[Block] = &[
    (
        1.30,
        &[
            (4, 1.1750e-04, 0.0),
            (8, 6.7722e-06, 4.12),
            (16, 4.1509e-07, 4.03),
            (32, 2.5818e-08, 4.01),
            (64, 1.6117e-09, 4.00),
        ],
    ),
    (
        1.60,
        &[
            (4, 4.7537e-05, 0.0),
            (8, 2.9915e-06, 3.99),
            (16, 1.8425e-07, 4.02),
            (32, 1.1464e-08, 4.01),
            (64, 7.1564e-10, 4.00),
        ],
    ),
    (
        1.90,
        &[
            (4, 3.0726e-03, 0.0),
            (8, 1.7529e-04, 4.13),
            (16, 1.0763e-05, 4.03),
            (32, 6.6997e-07, 4.01),
            (64, 4.1831e-08, 4.00),
        ],
    ),
];

const TABLE3_F2: &[Block] = &[
    (
        1.50,
        &[
            (128, 4.1822e-04, 0.0),
            (256, 1.4427e-04, 1.54),
            (512, 5.1424e-05, 1.49),
            (1024, 1.8644e-05, 1.46),
            (2048, 6.7951e-06, 1.46),
        ],
    ),
    (
        1.75,
        &[
            (128, 2.1335e-04, 0.0),
            (256, 6.3718e-05, 1.74),
            (512, 1.8969e-05, 1.75),
            (1024, 5.6418e-06, 1.75),
            (2048, 1.6775e-06, 1.75),
        ],
    ),
];

#[derive(Default)]
struct Report {
    checks: usize,
    failures: Vec<String>,
}

impl Report {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn rel(got: f64, want: f64) -> f64 {
    (got - want) / want
}

fn study(axis: Axis, scheme: SchemeTag, block: &Block, fixed: usize) -> ConvergenceTable {
    let ladder: Vec<usize> = block.1.iter().map(|r| r.0).collect();
    let (n, m) = match axis {
        Axis::Time => (ladder, vec![fixed]),
        _ => (vec![fixed], ladder),
    };
    let cfg = StudyConfig {
        problem: diffwave::harness::ProblemKey::Example1,
        profile: None,
        schemes: vec![scheme],
        alpha0: vec![block.0],
        n,
        m,
        t_final: 1.0,
        solver: SolverOptions::default(),
        repetitions: 1,
        output: None,
    };
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    run_convergence_study(&cfg, axis, threads).expect("study runs")
}

/// Compares a computed block against the printed one. `rate_target` returns
/// the expected rate and tolerance for row `k` (if that row's rate is checked).
fn compare(
    report: &mut Report,
    axis: Axis,
    label: &str,
    fixed: usize,
    blocks: &[Block],
    rate_target: impl Fn(&[(usize, f64, f64)], usize) -> Option<(f64, f64)>,
) {
    let tag: SchemeTag = label.parse().unwrap();
    for block in blocks {
        let &(a0, rows) = block;
        let table = study(axis, tag, block, fixed);
        let got = &table.rows;
        assert_eq!(got.len(), rows.len());
        for (k, (g, &(level, want, _))) in got.iter().zip(rows).enumerate() {
            let e = g.error.unwrap();
            report.check(rel(e, want).abs() <= VALUE_TOL, || {
                format!("{label} a0={a0:.2} {level}: error {e:.4e} vs {want:.4e} ({:+.1}%)", 100.0 * rel(e, want))
            });
            if let Some((target, tol)) = rate_target(rows, k) {
                let r = g.rate.unwrap_or(f64::NAN);
                report.check((r - target).abs() <= tol, || {
                    format!("{label} a0={a0:.2} {level}: rate {r:.3} vs {target:.2} +- {tol}")
                });
            }
        }
    }
}

fn criterion_table1(report: &mut Report) {
    compare(report, Axis::Time, "f2oacd", 16, TABLE1_F2, |rows, k| {
        (k == rows.len() - 1).then(|| (rows[k].2, TABLE1_RATE_TOL))
    });
    compare(report, Axis::Time, "a2oacd", 16, TABLE1_A2, |rows, k| {
        (k == rows.len() - 1).then_some((2.0, TABLE1_RATE_TOL))
    });
}

fn criterion_table2(report: &mut Report) {
    for (label, blocks) in [("f2oacd", TABLE2_F2), ("a2oacd", TABLE2_A2)] {
        compare(report, Axis::Space, label, 32, blocks, |_, k| (k > 0).then_some((4.0, TABLE2_RATE_TOL)));
    }
}

fn criterion_table3(report: &mut Report) {
    compare(report, Axis::Time, "f2oacd", 16, TABLE3_F2, |rows, k| (k > 0).then(|| (rows[k].2, TABLE3_RATE_TOL)));
}

fn criterion_benchmark(report: &mut Report) {
    let cfg = StudyConfig::from_json(
        r#"{"problem": "example2", "schemes": ["f2oacd", "f2oscd", "a2oacd", "a2oscd"],
            "alpha0": [1.3], "N": [32], "M": [64, 128, 256], "repetitions": 3}"#,
    )
    .unwrap();
    let table = run_benchmark(&cfg).expect("benchmark runs");
    for r in &table.rows {
        println!("    {:<7} M={:<4} {:.4}s", r.scheme.as_str(), r.m, r.seconds);
    }
    let secs = |tag: SchemeTag, m: usize| table.rows.iter().find(|r| r.scheme == tag && r.m == m).unwrap().seconds;
    for adi in [SchemeTag::F2oacd, SchemeTag::A2oacd] {
        let std = adi.standard();
        report.check(secs(adi, 256) < secs(std, 256), || {
            format!("{adi} {:.4}s not below {std} {:.4}s at M=256", secs(adi, 256), secs(std, 256))
        });
        let gaps: Vec<f64> = [64, 128, 256].iter().map(|&m| secs(std, m) - secs(adi, m)).collect();
        report.check(gaps.windows(2).all(|w| w[1] > w[0]), || format!("{adi} gap does not widen: {gaps:?}"));
    }
    report.check(benchmark_findings(&table).is_empty(), || format!("{:?}", benchmark_findings(&table)));
}

fn criterion_splitting(report: &mut Report) {
    let opts = SolverOptions { record_systems: true, ..SolverOptions::default() };
    let specs = [
        ProblemSpec::example1(ExponentProfile::example1(1.5).unwrap(), 8).unwrap(),
        ProblemSpec::example2(ExponentProfile::example2(1.3).unwrap(), 8).unwrap(),
        ProblemSpec::example1(ExponentProfile::example1(1.9).unwrap(), 8).unwrap(),
    ];
    for spec in &specs {
        let ops = DenseOps::new(&spec.grid);
        for tag in [SchemeTag::F2oacd, SchemeTag::A2oacd] {
            let steps = 8;
            let mut s = Stepper::new(spec, tag, steps, &opts).unwrap();
            for n in 1..=steps {
                s.step().unwrap();
                let sys = s.last_system().unwrap();
                let res = sys.relative_residual();
                report.check(res <= 1e-10, || format!("{tag} {} step {n}: residual {res:e}", spec.profile.label()));
                let x = solve(ops.combo(sys.c0, sys.kappa, sys.mixed), interior(&sys.rhs));
                let d = max_diff(&x, &interior(&sys.increment)) / max_abs(&x);
                report.check(d <= 1e-11, || format!("{tag} {} step {n}: dense mismatch {d:e}", spec.profile.label()));
            }
        }
    }
}

fn random_interior(grid: GridSpec2D, rng: &mut impl Rng) -> Field2D {
    let mut f = Field2D::zeros(grid);
    for i in 1..grid.m1 {
        for j in 1..grid.m2 {
            f.set(i, j, rng.random_range(-1.0..1.0));
        }
    }
    f
}

fn criterion_properties(report: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for abar in [0.2, 0.5, 0.9] {
        let t = build_cq_table(abar, 256).unwrap();
        report.check(t.chi[0] == 2f64.powf(-abar), || format!("chi_0 at {abar}"));
        let inv = 1.0 / gamma(abar + 1.0).unwrap();
        let mut partial = 0.0;
        for n in 0..=256usize {
            partial += t.chi[n];
            let want = (n as f64).powf(abar) * inv;
            let err = (partial + t.rho[n] - want).abs() / want.max(1.0);
            report.check(err <= 1e-11, || format!("constant exactness a={abar} n={n}: {err:e}"));
        }
        let tau = 1.0 / 64.0;
        let pi = build_pi_table(abar, 64, tau).unwrap();
        let g2 = gamma(abar + 2.0).unwrap();
        for n in 1..=64usize {
            let d = pi.lambda(n, n);
            report.check(((d - tau.powf(abar) / g2) / d).abs() <= 1e-12, || format!("lambda_nn a={abar} n={n}"));
            let sum: f64 = (1..=n).map(|j| pi.lambda(n, j)).sum();
            let (tn, tm) = (n as f64 * tau, (n - 1) as f64 * tau);
            let want = (tn.powf(abar + 1.0) - tm.powf(abar + 1.0)) / (tau * g2);
            report.check((sum - want).abs() <= 1e-11, || format!("lambda row sum a={abar} n={n}"));
        }
    }

    for trial in 0..200 {
        let abar = [0.2, 0.5, 0.9][trial % 3];
        let n = rng.random_range(1..=128usize);
        let v: Vec<f64> = (0..=n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let norm2: f64 = v.iter().map(|x| x * x).sum();
        let t = build_cq_table(abar, n).unwrap();
        let cq_form: f64 = (0..=n).map(|m| (0..=m).map(|p| t.chi[p] * v[m - p]).sum::<f64>() * v[m]).sum();
        report.check(cq_form >= -1e-10 * norm2, || format!("CQ quadratic form trial {trial}: {cq_form:e}"));

        let pi = build_pi_table(abar, n, 1.0 / n as f64).unwrap();
        let mid: Vec<f64> = (1..=n).map(|k| 0.5 * (v[k] + v[k - 1])).collect();
        let mut pi_form = v[1] * apply_pi(&pi, v[1], &[]).unwrap();
        for m in 2..=n {
            pi_form += mid[m - 1] * apply_pi(&pi, v[1], &mid[1..m]).unwrap();
        }
        report.check(pi_form >= -1e-10 * norm2, || format!("PI quadratic form trial {trial}: {pi_form:e}"));
    }

    for trial in 0..100 {
        let m = 3 + trial % 20;
        let g = GridSpec2D::unit_square(m).unwrap();
        let u = random_interior(g, &mut rng);
        let w = random_interior(g, &mut rng);
        // relative to the Cauchy-Schwarz bound |Du| |w| of either side
        let (dx, dy, dxy) = (apply_dx2(&u), apply_dy2(&u), apply_dx2dy2(&u));
        let nw = norm_l2(&w);
        let pairs = [
            (inner(&dx, &w), -inner_dx(&u, &w), norm_l2(&dx) * nw),
            (inner(&dy, &w), -inner_dy(&u, &w), norm_l2(&dy) * nw),
            (inner(&dxy, &w), inner_dxdy(&u, &w), norm_l2(&dxy) * nw),
        ];
        for (lhs, rhs, scale) in pairs {
            report.check((lhs - rhs).abs() <= 1e-12 * scale, || {
                format!("summation by parts trial {trial}: {lhs} vs {rhs}")
            });
        }
        let n2 = norm_l2(&w).powi(2);
        let ah = norm_ah(&w).powi(2);
        report.check(n2 / 3.0 <= ah * (1.0 + 1e-14) && ah <= n2 * (1.0 + 1e-14), || {
            format!("norm equivalence trial {trial}: {ah} vs {n2}")
        });
    }

    for a0 in [1.2, 1.5, 1.75, 1.9] {
        for p in [ExponentProfile::example1(a0).unwrap(), ExponentProfile::example2(a0).unwrap()] {
            let k = build_kernel_table(&p, 64, 1.0, 64, 4).unwrap();
            let g0 = k.g_vals()[0];
            report.check((g0 - 1.0).abs() <= 1e-10, || format!("g(0) {} {a0}: {g0}", p.label()));
            let (coarse, fine) =
                (p.identity_rule(k.jacobi_nodes()).unwrap(), p.identity_rule(2 * k.jacobi_nodes()).unwrap());
            for &t in k.times() {
                let d = (eval_g(&p, t, &coarse).unwrap() - eval_g(&p, t, &fine).unwrap()).abs();
                report.check(d <= 1e-10, || format!("g node doubling {} {a0} t={t}: {d:e}", p.label()));
            }
        }
        let c = build_kernel_table(&ExponentProfile::constant(a0).unwrap(), 64, 1.0, 64, 4).unwrap();
        report.check(c.g_vals().iter().all(|g| (g - 1.0).abs() <= 1e-10), || format!("constant g {a0}"));
    }
}

fn criterion_stability(report: &mut Report) {
    let opts = SolverOptions::default();
    for a0 in [1.2, 1.5, 1.9] {
        let specs = [
            ProblemSpec::example1(ExponentProfile::example1(a0).unwrap(), 16).unwrap(),
            ProblemSpec::example2(ExponentProfile::example2(a0).unwrap(), 16).unwrap(),
        ];
        for spec in &specs {
            for tag in SchemeTag::ALL {
                let peaks: Vec<f64> = [8, 16, 32, 64, 128, 256]
                    .iter()
                    .map(|&n| {
                        let traj = run_solver(spec, tag, n, &opts).unwrap();
                        traj.levels.iter().map(norm_l2).fold(0.0, f64::max)
                    })
                    .collect();
                // one bound for every N: twice the coarsest run's peak
                let bound = 2.0 * peaks[0];
                report.check(peaks.iter().all(|p| p.is_finite() && *p <= bound), || {
                    format!("{tag} {} a0={a0}: peaks {peaks:?}", spec.profile.label())
                });
            }
        }
    }
}

fn main() {
    let criteria: [(&str, fn(&mut Report)); 7] = [
        ("4 ADI schemes faster than unsplit ones, gap widening in M", criterion_benchmark),
        ("1 temporal convergence table, M=16", criterion_table1),
        ("2 spatial convergence table, N=32", criterion_table2),
        ("3 long-run temporal table, F2OACD, N up to 2048", criterion_table3),
        ("5 ADI steps solve the unsplit equations, M=8", criterion_splitting),
        ("6 weight, quadrature and grid-operator properties", criterion_properties),
        ("7 bounded solutions for N = 8..256, M=16", criterion_stability),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let mut report = Report::default();
        run(&mut report);
        let ok = report.failures.is_empty();
        println!(
            "[{}] criterion {name} ({} of {} checks passed, {:.1}s)",
            if ok { "PASS" } else { "FAIL" },
            report.checks - report.failures.len(),
            report.checks,
            start.elapsed().as_secs_f64()
        );
        for f in &report.failures {
            println!("    fail: {f}");
        }
        failed += usize::from(!ok);
    }
    println!("acceptance: {} of 7 criteria passed", 7 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
