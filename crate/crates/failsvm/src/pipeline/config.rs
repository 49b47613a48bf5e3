//! Run configuration: a single TOML document with an explicit schema version.
//! Every default is materialized before the manifest is written, so reports
//! are self-describing.

use crate::align::KtaConfig;
use crate::data::{PlateGeometry, DEFAULT_EPS_DIV, DEFAULT_THRESHOLD};
use crate::error::{Error, Result};
use crate::kernel::{ClassicalKernelSpec, KernelSpec};
use crate::quantum::{EmbeddingSpec, QuantumKernelSpec, MAX_QUBITS};
use crate::svm::SmoParams;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub data: DataConfig,
    #[serde(default)]
    pub scaling: ScalingConfig,
    #[serde(default)]
    pub split: SplitConfig,
    pub kernels: Vec<KernelConfig>,
    #[serde(default)]
    pub kta: KtaSection,
    #[serde(default)]
    pub svm: SvmSection,
    #[serde(default)]
    pub cv: CvSection,
    #[serde(default)]
    pub curve: CurveSection,
    #[serde(default)]
    pub seeds: Seeds,
    #[serde(default)]
    pub output: OutputSection,
}

/// Default output directory; the `--out` flag overrides it.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DataSource {
    /// Synthetic oracle paths with a closed-form failure envelope.
    Synthetic,
    /// CSV of homogenized strain/stress increments.
    HomogenizedCsv,
    /// CSV of raw reference-DOF increments, homogenized on ingest.
    RawCsv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataConfig {
    pub source: DataSource,
    /// Input CSV for the csv sources, resolved against the config file's
    /// directory on load.
    #[serde(default)]
    pub path: Option<PathBuf>,
    /// Sample count for the synthetic source (each sample brings its elastic
    /// anchor increment, so the labeled dataset holds twice this many rows).
    #[serde(default = "default_n_samples")]
    pub n_samples: usize,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default = "default_eps_div")]
    pub eps_div: f64,
    #[serde(default)]
    pub geometry: Option<PlateGeometry>,
}

fn default_n_samples() -> usize {
    1000
}

fn default_threshold() -> f64 {
    DEFAULT_THRESHOLD
}

fn default_eps_div() -> f64 {
    DEFAULT_EPS_DIV
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScalingConfig {
    /// Target interval for classical-kernel features.
    pub classical: (f64, f64),
    /// Target interval for quantum-embedding angles.
    pub quantum: (f64, f64),
}

impl Default for ScalingConfig {
    fn default() -> Self {
        ScalingConfig {
            classical: crate::data::CLASSICAL_TARGET,
            quantum: crate::data::QUANTUM_TARGET,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitConfig {
    pub test_fraction: f64,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig { test_fraction: 0.2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    Rbf,
    Polynomial,
    Sigmoid,
    Iqp,
    He2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelConfig {
    /// Tag used in output file names; defaults to the kind (plus `_wXdY` for
    /// embeddings).
    #[serde(default)]
    pub name: Option<String>,
    pub kind: KernelKind,
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default)]
    pub c0: Option<f64>,
    #[serde(default)]
    pub degree: Option<u32>,
    #[serde(default)]
    pub width: Option<usize>,
    #[serde(default)]
    pub depth: Option<usize>,
    /// HE2 angles; absent means seeded initialization from `theta_seed`.
    #[serde(default)]
    pub theta: Option<Vec<f64>>,
}

impl KernelConfig {
    pub fn is_quantum(&self) -> bool {
        matches!(self.kind, KernelKind::Iqp | KernelKind::He2)
    }

    pub fn effective_name(&self) -> String {
        if let Some(name) = &self.name {
            return name.clone();
        }
        match self.kind {
            KernelKind::Rbf => "rbf".into(),
            KernelKind::Polynomial => "polynomial".into(),
            KernelKind::Sigmoid => "sigmoid".into(),
            KernelKind::Iqp => format!(
                "iqp_w{}d{}",
                self.width.unwrap_or(3),
                self.depth.unwrap_or(1)
            ),
            KernelKind::He2 => format!(
                "he2_w{}d{}",
                self.width.unwrap_or(3),
                self.depth.unwrap_or(1)
            ),
        }
    }

    /// Builds the kernel spec, drawing HE2 angles from `theta_seed + index`
    /// when none are configured.
    pub fn to_spec(
        &self,
        index: usize,
        theta_seed: u64,
        quantum_scaler_fingerprint: &str,
    ) -> Result<KernelSpec> {
        match self.kind {
            KernelKind::Rbf => Ok(KernelSpec::Classical(ClassicalKernelSpec::Rbf {
                gamma: self.gamma.unwrap_or(1.0),
            })),
            KernelKind::Polynomial => Ok(KernelSpec::Classical(ClassicalKernelSpec::Polynomial {
                gamma: self.gamma.unwrap_or(1.0),
                c0: self.c0.unwrap_or(0.0),
                degree: self.degree.unwrap_or(2),
            })),
            KernelKind::Sigmoid => Ok(KernelSpec::Classical(ClassicalKernelSpec::Sigmoid {
                gamma: self.gamma.unwrap_or(1.0),
                c0: self.c0.unwrap_or(0.0),
            })),
            KernelKind::Iqp => {
                let embedding =
                    EmbeddingSpec::iqp(self.width.unwrap_or(3), self.depth.unwrap_or(1))?;
                Ok(KernelSpec::Quantum(QuantumKernelSpec::new(
                    embedding,
                    quantum_scaler_fingerprint,
                )))
            }
            KernelKind::He2 => {
                let width = self.width.unwrap_or(3);
                let depth = self.depth.unwrap_or(1);
                let embedding = match &self.theta {
                    Some(theta) => EmbeddingSpec::he2(width, depth, theta.clone())?,
                    None => EmbeddingSpec::he2_seeded(
                        width,
                        depth,
                        theta_seed.wrapping_add(index as u64),
                    )?,
                };
                Ok(KernelSpec::Quantum(QuantumKernelSpec::new(
                    embedding,
                    quantum_scaler_fingerprint,
                )))
            }
        }
    }
}

/// KTA training section; `enabled = false` keeps every kernel untrained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KtaSection {
    pub enabled: bool,
    pub iters: usize,
    pub learning_rate: f64,
    pub batch: usize,
    pub log_every: usize,
    pub fd_step: f64,
}

impl Default for KtaSection {
    fn default() -> Self {
        let kta = KtaConfig::default();
        KtaSection {
            enabled: true,
            iters: kta.iters,
            learning_rate: kta.learning_rate,
            batch: kta.batch,
            log_every: kta.log_every,
            fd_step: kta.fd_step,
        }
    }
}

impl KtaSection {
    pub fn to_kta_config(&self, seed: u64) -> KtaConfig {
        KtaConfig {
            iters: self.iters,
            learning_rate: self.learning_rate,
            batch: self.batch,
            seed,
            log_every: self.log_every,
            fd_step: self.fd_step,
            ..KtaConfig::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SvmSection {
    pub tol: f64,
    pub max_iter: Option<usize>,
    pub support_eps: f64,
}

impl Default for SvmSection {
    fn default() -> Self {
        let p = SmoParams::default();
        SvmSection {
            tol: p.tol,
            max_iter: p.max_iter,
            support_eps: p.support_eps,
        }
    }
}

impl SvmSection {
    pub fn to_smo_params(&self) -> SmoParams {
        SmoParams {
            tol: self.tol,
            max_iter: self.max_iter,
            support_eps: self.support_eps,
            ..SmoParams::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CvSection {
    pub c_grid: Vec<f64>,
    pub folds: usize,
}

impl Default for CvSection {
    fn default() -> Self {
        CvSection {
            c_grid: (0..=7).map(|k| 10f64.powi(k)).collect(),
            folds: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CurveSection {
    pub fractions: Vec<f64>,
}

impl Default for CurveSection {
    fn default() -> Self {
        CurveSection {
            fractions: (1..=10).map(|k| k as f64 / 10.0).collect(),
        }
    }
}

/// Named seeds; every random choice in the pipeline flows from one of these.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Seeds {
    pub split_seed: u64,
    pub theta_seed: u64,
    pub adam_seed: u64,
    pub cv_seed: u64,
    pub synth_seed: u64,
    pub curve_seed: u64,
}

impl Default for Seeds {
    fn default() -> Self {
        Seeds {
            split_seed: 1,
            theta_seed: 2,
            adam_seed: 3,
            cv_seed: 4,
            synth_seed: 5,
            curve_seed: 6,
        }
    }
}

impl Seeds {
    pub fn set(&mut self, name: &str, value: u64) -> Result<()> {
        match name {
            "split_seed" => self.split_seed = value,
            "theta_seed" => self.theta_seed = value,
            "adam_seed" => self.adam_seed = value,
            "cv_seed" => self.cv_seed = value,
            "synth_seed" => self.synth_seed = value,
            "curve_seed" => self.curve_seed = value,
            other => {
                return Err(Error::Parameter(format!(
                    "unknown seed {other:?}; expected one of split_seed, theta_seed, adam_seed, cv_seed, synth_seed, curve_seed"
                )))
            }
        }
        Ok(())
    }
}

impl RunConfig {
    /// Parses a config document; `base_dir` resolves relative input paths.
    pub fn from_toml_str(text: &str, base_dir: &Path) -> Result<RunConfig> {
        let mut config: RunConfig = toml::from_str(text)
            .map_err(|e| Error::ConfigValidation(vec![format!("TOML parse error: {e}")]))?;
        if let Some(p) = &config.data.path {
            if p.is_relative() {
                config.data.path = Some(base_dir.join(p));
            }
        }
        if let Some(d) = &config.output.dir {
            if d.is_relative() {
                config.output.dir = Some(base_dir.join(d));
            }
        }
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<RunConfig> {
        let path = path.as_ref();
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::from_toml_str(&text, base)
    }

    /// Collects every config problem at once.
    pub fn validate(&self) -> Result<()> {
        let mut issues = Vec::new();
        if self.schema_version != SCHEMA_VERSION {
            issues.push(format!(
                "schema_version must be {SCHEMA_VERSION}, got {}",
                self.schema_version
            ));
        }

        match self.data.source {
            DataSource::Synthetic => {
                if self.data.n_samples < 4 {
                    issues.push(format!(
                        "data.n_samples must be >= 4 for the synthetic source, got {}",
                        self.data.n_samples
                    ));
                }
            }
            DataSource::HomogenizedCsv | DataSource::RawCsv => match &self.data.path {
                None => issues.push("data.path is required for csv sources".into()),
                Some(p) => {
                    if !p.exists() {
                        issues.push(format!("data.path {} does not exist", p.display()));
                    }
                }
            },
        }
        if self.data.source == DataSource::RawCsv {
            match &self.data.geometry {
                None => issues.push("data.geometry is required for the raw-csv source".into()),
                Some(g) => {
                    if let Err(e) = PlateGeometry::new(g.d1, g.d2, g.thickness, g.hole_diameter) {
                        issues.push(e.to_string());
                    }
                }
            }
        }
        if !(self.data.threshold > 0.0 && self.data.threshold < 1.0) {
            issues.push(format!(
                "data.threshold must lie in (0, 1), got {}",
                self.data.threshold
            ));
        }
        if !(self.data.eps_div > 0.0 && self.data.eps_div.is_finite()) {
            issues.push(format!(
                "data.eps_div must be positive, got {}",
                self.data.eps_div
            ));
        }

        for (label, (lo, hi)) in [
            ("scaling.classical", self.scaling.classical),
            ("scaling.quantum", self.scaling.quantum),
        ] {
            if !(lo.is_finite() && hi.is_finite() && hi > lo) {
                issues.push(format!("{label} interval [{lo}, {hi}] is degenerate"));
            }
        }

        if !(self.split.test_fraction > 0.0 && self.split.test_fraction < 1.0) {
            issues.push(format!(
                "split.test_fraction must lie in (0, 1), got {}",
                self.split.test_fraction
            ));
        }

        if self.kernels.is_empty() {
            issues.push("at least one [[kernels]] entry is required".into());
        }
        let mut names = Vec::new();
        for (i, k) in self.kernels.iter().enumerate() {
            let name = k.effective_name();
            if name.is_empty()
                || !name
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
            {
                issues.push(format!(
                    "kernels[{i}] name {name:?} must be non-empty and use only [A-Za-z0-9_-]"
                ));
            }
            if names.contains(&name) {
                issues.push(format!("duplicate kernel name {name:?}"));
            }
            names.push(name);
            if let Some(g) = k.gamma {
                if !(g > 0.0 && g.is_finite()) {
                    issues.push(format!("kernels[{i}].gamma must be positive, got {g}"));
                }
            }
            if k.is_quantum() {
                let w = k.width.unwrap_or(3);
                let d = k.depth.unwrap_or(1);
                if !(1..=MAX_QUBITS).contains(&w) {
                    issues.push(format!(
                        "kernels[{i}].width must lie in 1..={MAX_QUBITS}, got {w}"
                    ));
                }
                if d < 1 {
                    issues.push(format!("kernels[{i}].depth must be >= 1, got {d}"));
                }
                if let Some(theta) = &k.theta {
                    if k.kind == KernelKind::Iqp {
                        issues.push(format!("kernels[{i}]: iqp takes no theta"));
                    } else if theta.len() != w * d {
                        issues.push(format!(
                            "kernels[{i}].theta must hold {} value(s), got {}",
                            w * d,
                            theta.len()
                        ));
                    }
                }
            } else {
                for (field, present) in [
                    ("width", k.width.is_some()),
                    ("depth", k.depth.is_some()),
                    ("theta", k.theta.is_some()),
                ] {
                    if present {
                        issues.push(format!(
                            "kernels[{i}]: {field} only applies to quantum kernels"
                        ));
                    }
                }
                if k.degree.map(|d| d < 1).unwrap_or(false) {
                    issues.push(format!("kernels[{i}].degree must be >= 1"));
                }
            }
        }

        if let Err(e) = self.kta.to_kta_config(0).validate() {
            issues.push(format!("kta: {e}"));
        }
        if !(self.svm.tol > 0.0 && self.svm.tol.is_finite()) {
            issues.push(format!("svm.tol must be positive, got {}", self.svm.tol));
        }
        if self.cv.c_grid.is_empty() {
            issues.push("cv.c_grid must be non-empty".into());
        }
        for c in &self.cv.c_grid {
            if !(*c > 0.0 && c.is_finite()) {
                issues.push(format!("cv.c_grid entries must be positive, got {c}"));
            }
        }
        if self.cv.folds < 2 {
            issues.push(format!("cv.folds must be >= 2, got {}", self.cv.folds));
        }
        if self.curve.fractions.is_empty() {
            issues.push("curve.fractions must be non-empty".into());
        }
        for f in &self.curve.fractions {
            if !(*f > 0.0 && *f <= 1.0) {
                issues.push(format!("curve.fractions must lie in (0, 1], got {f}"));
            }
        }

        if issues.is_empty() {
            Ok(())
        } else {
            Err(Error::ConfigValidation(issues))
        }
    }
}
