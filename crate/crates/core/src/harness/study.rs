use super::{
    rate, space_error_between, time_error_between, Axis, ConvergenceTable, HarnessError, RunRecord, StudyConfig,
};
use crate::schemes::{run_solver, SchemeTag, Trajectory};
use rayon::prelude::*;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct RunKey {
    tag: SchemeTag,
    alpha_bits: u64,
    n: usize,
    m: usize,
}

fn check_ladder(name: &str, ladder: &[usize]) -> Result<(), HarnessError> {
    if ladder.is_empty() {
        return Err(HarnessError::Ladder(format!("{name} ladder is empty")));
    }
    if let Some(w) = ladder.windows(2).find(|w| w[1] != 2 * w[0]) {
        return Err(HarnessError::Ladder(format!("{name} ladder must double: {} -> {}", w[0], w[1])));
    }
    Ok(())
}

fn run_key(cfg: &StudyConfig, key: RunKey) -> Result<Trajectory, HarnessError> {
    let spec = cfg.problem_spec(f64::from_bits(key.alpha_bits), key.m)?;
    Ok(run_solver(&spec, key.tag, key.n, &cfg.solver)?)
}

/// Runs every key once; `threads == 0` keeps everything on the calling thread.
fn run_all(cfg: &StudyConfig, keys: Vec<RunKey>, threads: usize) -> Result<BTreeMap<RunKey, Trajectory>, HarnessError> {
    let results: Vec<Result<(RunKey, Trajectory), HarnessError>> = if threads == 0 {
        keys.into_iter().map(|k| run_key(cfg, k).map(|t| (k, t))).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| HarnessError::Ladder(format!("thread pool: {e}")))?;
        pool.install(|| keys.into_par_iter().map(|k| run_key(cfg, k).map(|t| (k, t))).collect())
    };
    results.into_iter().collect()
}

/// `E(tau, h)` for a single `N` against `2N`.
pub fn two_mesh_time_error(
    cfg: &StudyConfig,
    tag: SchemeTag,
    alpha0: f64,
    n: usize,
    m: usize,
) -> Result<f64, HarnessError> {
    let spec = cfg.problem_spec(alpha0, m)?;
    let coarse = run_solver(&spec, tag, n, &cfg.solver)?;
    let fine = run_solver(&spec, tag, 2 * n, &cfg.solver)?;
    time_error_between(&coarse, &fine)
}

/// `S(tau, h)` for a single `M` against `2M`.
pub fn two_mesh_space_error(
    cfg: &StudyConfig,
    tag: SchemeTag,
    alpha0: f64,
    n: usize,
    m: usize,
) -> Result<f64, HarnessError> {
    let coarse = run_solver(&cfg.problem_spec(alpha0, m)?, tag, n, &cfg.solver)?;
    let fine = run_solver(&cfg.problem_spec(alpha0, 2 * m)?, tag, n, &cfg.solver)?;
    space_error_between(coarse.final_level(), fine.final_level())
}

/// Two-mesh study along `axis`. The refined ladder is `cfg.n` for the time
/// axis (every `M` in `cfg.m` gives its own block) and `cfg.m` for space.
/// Each solve happens once even when it serves two rows.
pub fn run_convergence_study(cfg: &StudyConfig, axis: Axis, threads: usize) -> Result<ConvergenceTable, HarnessError> {
    cfg.validate()?;
    let (ladder, fixed) = match axis {
        Axis::Time => (&cfg.n, &cfg.m),
        Axis::Space => (&cfg.m, &cfg.n),
        Axis::Bench => return Err(HarnessError::Ladder("benchmarks use run_benchmark".into())),
    };
    check_ladder(if axis == Axis::Time { "N" } else { "M" }, ladder)?;
    let key = |tag, a: f64, l: usize, f: usize| match axis {
        Axis::Time => RunKey { tag, alpha_bits: a.to_bits(), n: l, m: f },
        _ => RunKey { tag, alpha_bits: a.to_bits(), n: f, m: l },
    };

    let mut blocks = Vec::new();
    for &tag in &cfg.schemes {
        for &a in &cfg.alpha0 {
            for &f in fixed {
                blocks.push((tag, a, f));
            }
        }
    }
    let mut levels = ladder.clone();
    levels.push(2 * ladder[ladder.len() - 1]);
    let mut keys: Vec<RunKey> =
        blocks.iter().flat_map(|&(tag, a, f)| levels.iter().map(move |&l| key(tag, a, l, f))).collect();
    keys.sort();
    keys.dedup();
    let runs = run_all(cfg, keys, threads)?;

    let hash = cfg.hash();
    let mut rows = Vec::new();
    for &(tag, a, f) in &blocks {
        let mut prev: Option<f64> = None;
        for &l in ladder {
            let coarse = &runs[&key(tag, a, l, f)];
            let fine = &runs[&key(tag, a, 2 * l, f)];
            let error = match axis {
                Axis::Time => time_error_between(coarse, fine)?,
                _ => space_error_between(coarse.final_level(), fine.final_level())?,
            };
            let r = match prev {
                Some(p) if p > 0.0 && error > 0.0 => Some(rate(p, error)?),
                _ => None,
            };
            prev = Some(error);
            let k = key(tag, a, l, f);
            rows.push(RunRecord {
                scheme: tag,
                alpha0: a,
                n: k.n,
                m: k.m,
                error: Some(error),
                rate: r,
                seconds: coarse.timing.total,
                config_hash: hash.clone(),
            });
        }
    }
    Ok(ConvergenceTable { axis, rows })
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len() / 2;
    if v.len() % 2 == 1 {
        v[k]
    } else {
        0.5 * (v[k - 1] + v[k])
    }
}

/// Wall time of the stepping loop, median over `cfg.repetitions`, for every
/// scheme and every `M` at `N = cfg.n[0]`, `alpha0 = cfg.alpha0[0]`. Always
/// serial so the timings do not compete for cores.
pub fn run_benchmark(cfg: &StudyConfig) -> Result<ConvergenceTable, HarnessError> {
    cfg.validate()?;
    let n = *cfg.n.first().ok_or_else(|| HarnessError::Ladder("N needs one value".into()))?;
    let a = cfg.alpha0[0];
    let hash = cfg.hash();
    let mut rows = Vec::new();
    for &m in &cfg.m {
        let spec = cfg.problem_spec(a, m)?;
        for &tag in &cfg.schemes {
            let mut times = Vec::with_capacity(cfg.repetitions);
            for _ in 0..cfg.repetitions {
                times.push(run_solver(&spec, tag, n, &cfg.solver)?.timing.stepping);
            }
            rows.push(RunRecord {
                scheme: tag,
                alpha0: a,
                n,
                m,
                error: None,
                rate: None,
                seconds: median(times),
                config_hash: hash.clone(),
            });
        }
    }
    Ok(ConvergenceTable { axis: Axis::Bench, rows })
}

/// Problems with a benchmark table: an ADI scheme not faster than its
/// standard counterpart at the largest `M`, or a speed gap that shrinks as `M`
/// grows. Empty means the expected picture holds.
pub fn benchmark_findings(table: &ConvergenceTable) -> Vec<String> {
    let mut out = Vec::new();
    let mut ms: Vec<usize> = table.rows.iter().map(|r| r.m).collect();
    ms.sort_unstable();
    ms.dedup();
    let secs = |tag: SchemeTag, m: usize| table.rows.iter().find(|r| r.scheme == tag && r.m == m).map(|r| r.seconds);
    for tag in [SchemeTag::F2oacd, SchemeTag::A2oacd] {
        let gaps: Vec<(usize, f64)> =
            ms.iter().filter_map(|&m| Some((m, secs(tag.standard(), m)? - secs(tag, m)?))).collect();
        if let Some(&(m, g)) = gaps.last() {
            if !(g > 0.0) {
                out.push(format!("{tag} is not faster than {} at M={m}", tag.standard()));
            }
        }
        for w in gaps.windows(2) {
            if !(w[1].1 > w[0].1) {
                out.push(format!("{tag} gap does not widen from M={} to M={}", w[0].0, w[1].0));
            }
        }
    }
    out
}
