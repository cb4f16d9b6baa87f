//! wasm-bindgen surface for `www/index.html`. Each exported function has a
//! plain Rust twin returning `Result<_, String>` so it can be tested natively.

use diffwave::exponent::{build_kernel_table, ExponentProfile};
use diffwave::schemes::{run_solver, ProblemSpec, SchemeTag, SolverOptions};
use diffwave::spatial::norm_l2;
use diffwave::weights::{build_cq_table, build_pi_table};
use wasm_bindgen::prelude::*;

const MAX_CELLS: usize = 128;
const MAX_STEPS: usize = 1024;

#[wasm_bindgen]
pub struct Snapshot {
    cells: usize,
    values: Vec<f64>,
    peak_norm: f64,
    final_norm: f64,
    millis: f64,
}

#[wasm_bindgen]
impl Snapshot {
    /// Row-major `(cells + 1)^2` nodal values at the final time, x index outermost.
    pub fn values(&self) -> Vec<f64> {
        self.values.clone()
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    #[wasm_bindgen(js_name = peakNorm)]
    pub fn peak_norm(&self) -> f64 {
        self.peak_norm
    }

    #[wasm_bindgen(js_name = finalNorm)]
    pub fn final_norm(&self) -> f64 {
        self.final_norm
    }

    pub fn millis(&self) -> f64 {
        self.millis
    }
}

fn profile(key: &str, alpha0: f64) -> Result<ExponentProfile, String> {
    ExponentProfile::from_key(key, alpha0).map_err(|e| e.to_string())
}

pub fn solve_snapshot(
    problem: &str,
    scheme: &str,
    alpha0: f64,
    steps: usize,
    cells: usize,
) -> Result<Snapshot, String> {
    if steps == 0 || steps > MAX_STEPS || !(2..=MAX_CELLS).contains(&cells) {
        return Err(format!("need 1 <= N <= {MAX_STEPS} and 2 <= M <= {MAX_CELLS}"));
    }
    let tag: SchemeTag = scheme.parse().map_err(|e: diffwave::schemes::SchemeError| e.to_string())?;
    let prof_key = if problem == "example2" { "example2" } else { "example1" };
    let spec = ProblemSpec::from_key(problem, profile(prof_key, alpha0)?, cells).map_err(|e| e.to_string())?;
    let run = run_solver(&spec, tag, steps, &SolverOptions::default()).map_err(|e| e.to_string())?;
    Ok(Snapshot {
        cells,
        peak_norm: run.levels.iter().map(norm_l2).fold(0.0, f64::max),
        final_norm: norm_l2(run.final_level()),
        values: run.final_level().values().to_vec(),
        millis: 1e3 * run.timing.total,
    })
}

/// `g(t_k)` at `samples + 1` equally spaced points of `[0, t_final]`.
pub fn g_samples(profile_key: &str, alpha0: f64, samples: usize, t_final: f64) -> Result<Vec<f64>, String> {
    if samples == 0 || samples > 4096 {
        return Err("samples must lie in 1..=4096".into());
    }
    let p = profile(profile_key, alpha0)?;
    let k = build_kernel_table(&p, samples, t_final, 64, 4).map_err(|e| e.to_string())?;
    Ok(k.g_vals().to_vec())
}

pub fn weight_values(kind: &str, profile_key: &str, alpha0: f64, steps: usize) -> Result<Vec<f64>, String> {
    if steps == 0 || steps > 4096 {
        return Err("steps must lie in 1..=4096".into());
    }
    let p = profile(profile_key, alpha0)?;
    let abar = p.abar();
    let err = |e: &dyn std::fmt::Display| e.to_string();
    match kind {
        "chi" | "rho" | "chi_hat" | "rho_hat" => {
            let t = build_cq_table(abar, steps).map_err(|e| err(&e))?;
            Ok(match kind {
                "chi" => t.chi,
                "rho" => t.rho,
                "chi_hat" => t.chi_hat,
                _ => t.rho_hat,
            })
        }
        "lambda" => Ok(build_pi_table(abar, steps, 1.0 / steps as f64).map_err(|e| err(&e))?.by_lag().to_vec()),
        "wtilde" => Ok(build_kernel_table(&p, steps, 1.0, 64, 4).map_err(|e| err(&e))?.wtilde().to_vec()),
        other => Err(format!("unknown table `{other}`")),
    }
}

#[wasm_bindgen]
pub fn solve(problem: &str, scheme: &str, alpha0: f64, steps: usize, cells: usize) -> Result<Snapshot, JsError> {
    solve_snapshot(problem, scheme, alpha0, steps, cells).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = gCurve)]
pub fn g_curve(profile_key: &str, alpha0: f64, samples: usize, t_final: f64) -> Result<Vec<f64>, JsError> {
    g_samples(profile_key, alpha0, samples, t_final).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = weightTable)]
pub fn weight_table(kind: &str, profile_key: &str, alpha0: f64, steps: usize) -> Result<Vec<f64>, JsError> {
    weight_values(kind, profile_key, alpha0, steps).map_err(|e| JsError::new(&e))
}
