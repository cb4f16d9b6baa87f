use super::HarnessError;
use crate::exponent::ExponentProfile;
use crate::schemes::{ProblemSpec, SchemeTag, SolverOptions};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKey {
    Example1,
    Example2,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKey {
    Example1,
    Example2,
    Constant,
}

impl ProfileKey {
    pub fn as_str(self) -> &'static str {
        match self {
            ProfileKey::Example1 => "example1",
            ProfileKey::Example2 => "example2",
            ProfileKey::Constant => "constant",
        }
    }
}

impl ProblemKey {
    pub fn as_str(self) -> &'static str {
        match self {
            ProblemKey::Example1 => "example1",
            ProblemKey::Example2 => "example2",
            ProblemKey::Zero => "zero",
        }
    }

    fn default_profile(self) -> ProfileKey {
        match self {
            ProblemKey::Example2 => ProfileKey::Example2,
            _ => ProfileKey::Example1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: String,
    #[serde(default = "default_format")]
    pub format: Format,
}

fn default_format() -> Format {
    Format::Csv
}

fn default_t_final() -> f64 {
    1.0
}

fn default_repetitions() -> usize {
    3
}

/// One JSON document describing a run, a convergence study or a benchmark.
///
/// ```json
/// {"problem": "example1", "schemes": ["f2oacd"], "alpha0": [1.5], "N": [16, 32], "M": [16]}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    pub problem: ProblemKey,
    /// Defaults to the profile that belongs to `problem`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileKey>,
    pub schemes: Vec<SchemeTag>,
    pub alpha0: Vec<f64>,
    #[serde(rename = "N")]
    pub n: Vec<usize>,
    #[serde(rename = "M")]
    pub m: Vec<usize>,
    #[serde(default = "default_t_final")]
    pub t_final: f64,
    #[serde(default)]
    pub solver: SolverOptions,
    /// Benchmark repetitions; the median is reported.
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

impl StudyConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: StudyConfig = serde_path_to_error::deserialize(de)
            .map_err(|e| HarnessError::Config { path: e.path().to_string(), message: e.inner().to_string() })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |path: &str, message: String| Err(HarnessError::Config { path: path.to_string(), message });
        if self.schemes.is_empty() {
            return bad("schemes", "at least one scheme is required".into());
        }
        if self.alpha0.is_empty() {
            return bad("alpha0", "at least one value is required".into());
        }
        for (k, a) in self.alpha0.iter().enumerate() {
            if !(*a > 1.0 && *a < 2.0) {
                return bad(&format!("alpha0[{k}]"), format!("{a} is outside (1, 2)"));
            }
        }
        if let Some(k) = self.n.iter().position(|&n| n == 0) {
            return bad(&format!("N[{k}]"), "step counts must be positive".into());
        }
        if let Some(k) = self.m.iter().position(|&m| m < 2) {
            return bad(&format!("M[{k}]"), "need at least 2 cells".into());
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return bad("t_final", format!("{} must be positive", self.t_final));
        }
        if self.repetitions == 0 {
            return bad("repetitions", "must be at least 1".into());
        }
        if self.solver.jacobi_nodes == 0 || self.solver.avg_nodes == 0 || self.solver.source_nodes == 0 {
            return bad("solver", "node counts must be positive".into());
        }
        if !(self.solver.cg_tol > 0.0) {
            return bad("solver.cg_tol", "must be positive".into());
        }
        Ok(())
    }

    pub fn profile_key(&self) -> ProfileKey {
        self.profile.unwrap_or(self.problem.default_profile())
    }

    pub fn problem_spec(&self, alpha0: f64, m: usize) -> Result<ProblemSpec, HarnessError> {
        let profile = ExponentProfile::from_key(self.profile_key().as_str(), alpha0)
            .map_err(crate::schemes::SchemeError::from)?;
        Ok(ProblemSpec::from_key(self.problem.as_str(), profile, m)?.with_t_final(self.t_final))
    }

    /// First 16 hex digits of the SHA-256 of the normalised document.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serialises");
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

pub fn parse_config(path: impl AsRef<Path>) -> Result<StudyConfig, HarnessError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| HarnessError::Config { path: path.display().to_string(), message: e.to_string() })?;
    StudyConfig::from_json(&text)
}
