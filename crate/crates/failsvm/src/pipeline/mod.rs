//! Config-driven orchestration: label, train-kernel, grid-search, fit, curve
//! and metrics stages, each runnable in isolation, plus the full `run`
//! sequence. Stages communicate through files in the output directory, so an
//! isolated stage invocation produces byte-identical artifacts to the full
//! pipeline.

mod config;

pub use config::{
    CurveSection, CvSection, DataConfig, DataSource, KernelConfig, KernelKind, KtaSection,
    OutputSection, RunConfig, ScalingConfig, Seeds, SplitConfig, SvmSection, SCHEMA_VERSION,
};

use crate::align::{train_kta, KtaReport, TrainableKernel};
use crate::data::{
    export_labeled, export_paths, ingest_paths_with_eps_div, ingest_raw_paths, label_path,
    read_labeled, Dataset, FeatureScaler, LabeledRow, LabeledSample, LoadPath, PlateGeometry,
};
use crate::error::{Error, Result};
use crate::eval::{
    classification_metrics, grid_search_cv, learning_curve, ConfusionCounts, CvResult,
    LearningCurve, MetricsRecord,
};
use crate::kernel::KernelSpec;
use crate::svm::{decision_values_from_gram, solve_dual, SolverDiagnostics, SvmModel};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Label,
    TrainKernel,
    GridSearch,
    Fit,
    Curve,
    Metrics,
}

impl Stage {
    pub const ALL: [Stage; 6] = [
        Stage::Label,
        Stage::TrainKernel,
        Stage::GridSearch,
        Stage::Fit,
        Stage::Curve,
        Stage::Metrics,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Label => "label",
            Stage::TrainKernel => "train-kernel",
            Stage::GridSearch => "grid-search",
            Stage::Fit => "fit",
            Stage::Curve => "curve",
            Stage::Metrics => "metrics",
        }
    }

    pub fn from_name(name: &str) -> Result<Stage> {
        Stage::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| {
                Error::Parameter(format!(
                    "unknown stage {name:?}; expected one of label, train-kernel, grid-search, fit, curve, metrics"
                ))
            })
    }
}

/// Files written and human-readable log lines produced by a stage.
#[derive(Debug, Default)]
pub struct StageReport {
    pub files: Vec<PathBuf>,
    pub lines: Vec<String>,
}

impl StageReport {
    fn file(&mut self, path: PathBuf) {
        self.files.push(path);
    }

    fn line(&mut self, line: String) {
        self.lines.push(line);
    }
}

/// Runs a closure inside a rayon pool of the requested size; `None` keeps the
/// default pool. Results are thread-count independent by construction.
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Parameter(format!("cannot build worker pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Executes the full stage sequence and writes `manifest.json` and `run.log`.
pub fn run(config: &RunConfig, out_dir: &Path) -> Result<StageReport> {
    config.validate()?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir.display().to_string(), e))?;
    let mut report = StageReport::default();
    let manifest = write_manifest(config, out_dir)?;
    report.file(manifest);
    for stage in Stage::ALL {
        let stage_report =
            run_stage(config, out_dir, stage).map_err(|e| Error::stage(stage.name(), e))?;
        for line in &stage_report.lines {
            report.line(format!("{}: {line}", stage.name()));
        }
        report.files.extend(stage_report.files);
    }
    let log_path = out_dir.join("run.log");
    let mut log = String::new();
    for line in &report.lines {
        let _ = writeln!(log, "{line}");
    }
    std::fs::write(&log_path, log).map_err(|e| Error::io(log_path.display().to_string(), e))?;
    report.file(log_path);
    Ok(report)
}

/// Executes one stage in isolation. Upstream artifacts must already exist in
/// the output directory.
pub fn run_stage(config: &RunConfig, out_dir: &Path, stage: Stage) -> Result<StageReport> {
    config.validate()?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir.display().to_string(), e))?;
    match stage {
        Stage::Label => stage_label(config, out_dir),
        Stage::TrainKernel => stage_train_kernel(config, out_dir),
        Stage::GridSearch => stage_grid_search(config, out_dir),
        Stage::Fit => stage_fit(config, out_dir),
        Stage::Curve => stage_curve(config, out_dir),
        Stage::Metrics => stage_metrics(config, out_dir),
    }
}

/// Machine-readable record of the run: schema and crate versions, the config
/// with defaults materialized, the resolved kernel specs and the seeds.
pub fn write_manifest(config: &RunConfig, out_dir: &Path) -> Result<PathBuf> {
    #[derive(Serialize)]
    struct Manifest<'a> {
        schema_version: u32,
        crate_version: &'static str,
        stage_order: [&'static str; 6],
        seeds: Seeds,
        config: &'a RunConfig,
        kernels_resolved: Vec<(String, KernelSpec)>,
    }
    let quantum_scaler = FeatureScaler::from_hypercube(config.scaling.quantum, 3)?;
    let kernels_resolved = config
        .kernels
        .iter()
        .enumerate()
        .map(|(i, k)| {
            Ok((
                k.effective_name(),
                k.to_spec(i, config.seeds.theta_seed, &quantum_scaler.fingerprint())?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        crate_version: env!("CARGO_PKG_VERSION"),
        stage_order: [
            "label",
            "train-kernel",
            "grid-search",
            "fit",
            "curve",
            "metrics",
        ],
        seeds: config.seeds,
        config,
        kernels_resolved,
    };
    let path = out_dir.join("manifest.json");
    write_json(&path, &manifest)?;
    Ok(path)
}

// ─── stage: label ────────────────────────────────────────────────────

fn stage_label(config: &RunConfig, out: &Path) -> Result<StageReport> {
    let mut report = StageReport::default();
    let paths: Vec<LoadPath> = match config.data.source {
        DataSource::Synthetic => {
            let (_, paths) =
                crate::data::synth_oracle_paths(config.data.n_samples, config.seeds.synth_seed)?;
            let path_file = out.join("paths.csv");
            export_paths(&path_file, &paths)?;
            report.file(path_file);
            paths
        }
        DataSource::HomogenizedCsv => {
            let file = config.data.path.as_ref().expect("validated");
            ingest_paths_with_eps_div(file, config.data.eps_div)?
        }
        DataSource::RawCsv => {
            let file = config.data.path.as_ref().expect("validated");
            let g = config.data.geometry.as_ref().expect("validated");
            let geom = PlateGeometry::new(g.d1, g.d2, g.thickness, g.hole_diameter)?;
            ingest_raw_paths(file, &geom, config.data.eps_div)?
        }
    };

    let mut rows = Vec::new();
    for path in &paths {
        let samples = label_path(path, config.data.threshold, config.data.eps_div)?;
        for (i, sample) in samples.iter().enumerate() {
            rows.push(LabeledRow {
                path_id: path.path_id.clone(),
                increment: i,
                record: path.increments[i],
                label: sample.y,
            });
        }
    }
    let labeled = out.join("labeled.csv");
    export_labeled(&labeled, &rows)?;
    report.file(labeled);

    let ds = dataset_from_rows(&rows);
    #[derive(Serialize)]
    struct DatasetSummary {
        source: String,
        n_paths: usize,
        n_samples: usize,
        class_counts: crate::data::ClassCounts,
        threshold: f64,
        eps_div: f64,
    }
    let summary_path = out.join("dataset.json");
    write_json(
        &summary_path,
        &DatasetSummary {
            source: format!("{:?}", config.data.source),
            n_paths: paths.len(),
            n_samples: ds.len(),
            class_counts: ds.class_counts,
            threshold: config.data.threshold,
            eps_div: config.data.eps_div,
        },
    )?;
    report.file(summary_path);
    report.line(format!(
        "{} paths -> {} labeled samples ({} failed / {} non-failed)",
        paths.len(),
        ds.len(),
        ds.class_counts.failed,
        ds.class_counts.non_failed
    ));
    Ok(report)
}

// ─── stage: train-kernel ─────────────────────────────────────────────

#[derive(Serialize, Deserialize)]
struct KtaSummary {
    initial_kta: f64,
    final_kta: f64,
    #[serde(flatten)]
    report: KtaReport,
}

fn stage_train_kernel(config: &RunConfig, out: &Path) -> Result<StageReport> {
    let mut report = StageReport::default();
    let env = StageEnv::prepare(config, out)?;
    for (i, kc) in config.kernels.iter().enumerate() {
        let name = kc.effective_name();
        let spec = kc.to_spec(
            i,
            config.seeds.theta_seed,
            &env.quantum_scaler.fingerprint(),
        )?;
        let x_train = env.train_features(&spec);
        let y_train = env.train.labels();

        let trainable =
            config.kta.enabled && config.kta.iters > 0 && TrainableKernel::from_spec(&spec).is_ok();
        let final_spec = if trainable {
            let kta_config = config
                .kta
                .to_kta_config(config.seeds.adam_seed.wrapping_add(i as u64));
            let (trained, kta_report) = train_kta(&spec, &x_train, &y_train, &kta_config)?;
            let csv_path = out.join(format!("kta_{name}.csv"));
            std::fs::write(&csv_path, kta_report.to_csv())
                .map_err(|e| Error::io(csv_path.display().to_string(), e))?;
            report.file(csv_path);
            let json_path = out.join(format!("kta_{name}.json"));
            write_json(
                &json_path,
                &KtaSummary {
                    initial_kta: kta_report.initial_kta(),
                    final_kta: kta_report.final_kta(),
                    report: kta_report.clone(),
                },
            )?;
            report.file(json_path);
            report.line(format!(
                "{name}: KTA {:.6} -> {:.6} over {} iterations",
                kta_report.initial_kta(),
                kta_report.final_kta(),
                config.kta.iters
            ));
            trained
        } else {
            report.line(format!(
                "{name}: no trainable parameters, spec kept as configured"
            ));
            spec
        };
        let spec_path = out.join(format!("kernel_{name}.json"));
        write_json(&spec_path, &final_spec)?;
        report.file(spec_path);
    }
    Ok(report)
}

// ─── stage: grid-search ──────────────────────────────────────────────

fn stage_grid_search(config: &RunConfig, out: &Path) -> Result<StageReport> {
    let mut report = StageReport::default();
    let env = StageEnv::prepare(config, out)?;
    for kc in &config.kernels {
        let name = kc.effective_name();
        let spec = load_kernel_spec(out, &name)?;
        let x_train = env.train_features(&spec);
        let result = grid_search_cv(
            &x_train,
            &env.train.labels(),
            &spec,
            &config.cv.c_grid,
            config.cv.folds,
            config.seeds.cv_seed,
            &config.svm.to_smo_params(),
        )?;
        let csv_path = out.join(format!("cv_{name}.csv"));
        std::fs::write(&csv_path, cv_to_csv(&result))
            .map_err(|e| Error::io(csv_path.display().to_string(), e))?;
        report.file(csv_path);
        let json_path = out.join(format!("cv_{name}.json"));
        write_json(&json_path, &result)?;
        report.file(json_path);
        report.line(format!(
            "{name}: best C = {} over {} cells",
            result.best_c,
            result.grid.len()
        ));
    }
    Ok(report)
}

fn cv_to_csv(result: &CvResult) -> String {
    let mut out = String::from("c,fold,accuracy,converged\n");
    for cell in &result.grid {
        for (fold, (acc, conv)) in cell.fold_accuracies.iter().zip(&cell.converged).enumerate() {
            let _ = writeln!(out, "{},{},{},{}", cell.c, fold, acc, conv);
        }
    }
    out
}

// ─── stage: fit ──────────────────────────────────────────────────────

#[derive(Serialize, Deserialize)]
struct FitSummary {
    c: f64,
    diagnostics: SolverDiagnostics,
    train_accuracy: f64,
    test_accuracy: f64,
    n_support: usize,
}

fn stage_fit(config: &RunConfig, out: &Path) -> Result<StageReport> {
    let mut report = StageReport::default();
    let env = StageEnv::prepare(config, out)?;
    for kc in &config.kernels {
        let name = kc.effective_name();
        let spec = load_kernel_spec(out, &name)?;
        let best_c = load_best_c(out, &name)?;
        let x_train = env.train_features(&spec);
        let x_test = env.test_features(&spec);
        let scaler = env.scaler_for(&spec).clone();
        let y_train = env.train.labels();

        // One Gram over the training set plus one cross block; predictions
        // come from slices rather than per-pair kernel re-evaluation.
        let gram = spec.gram(&x_train)?;
        let (sol, diag) = solve_dual(&gram, &y_train, best_c, &config.svm.to_smo_params())?;
        let train_decisions = decision_values_from_gram(&sol.alpha, sol.b, &y_train, &gram)?;
        let train_acc = train_decisions
            .iter()
            .zip(&y_train)
            .filter(|(f, y)| (**f >= 0.0) == (**y > 0.0))
            .count() as f64
            / y_train.len() as f64;

        let cross = spec.gram_block(&x_train, &x_test)?;
        let decisions = decision_values_from_gram(&sol.alpha, sol.b, &y_train, &cross)?;
        let model = SvmModel {
            alpha: sol.alpha,
            b: sol.b,
            support_indices: sol.support_indices,
            y_train,
            x_train,
            kernel: spec,
            scaler,
            c: best_c,
        };
        let y_test = env.test.labels();
        let mut predictions = String::from("index,y_true,decision,y_pred\n");
        let mut correct = 0usize;
        for (i, (f, y)) in decisions.iter().zip(&y_test).enumerate() {
            let pred = if *f >= 0.0 { 1.0 } else { -1.0 };
            if pred == *y {
                correct += 1;
            }
            let _ = writeln!(predictions, "{},{},{},{}", i, y, f, pred);
        }
        let test_acc = correct as f64 / y_test.len() as f64;

        let model_path = out.join(format!("model_{name}.json"));
        std::fs::write(&model_path, model.to_json()?)
            .map_err(|e| Error::io(model_path.display().to_string(), e))?;
        report.file(model_path);
        let pred_path = out.join(format!("predictions_{name}.csv"));
        std::fs::write(&pred_path, predictions)
            .map_err(|e| Error::io(pred_path.display().to_string(), e))?;
        report.file(pred_path);
        let fit_path = out.join(format!("fit_{name}.json"));
        write_json(
            &fit_path,
            &FitSummary {
                c: best_c,
                diagnostics: diag,
                train_accuracy: train_acc,
                test_accuracy: test_acc,
                n_support: model.support_indices.len(),
            },
        )?;
        report.file(fit_path);
        report.line(format!(
            "{name}: C = {best_c}, train accuracy {train_acc:.4}, test accuracy {test_acc:.4}{}",
            if diag.converged {
                ""
            } else {
                " (solver did not converge)"
            }
        ));
    }
    Ok(report)
}

// ─── stage: curve ────────────────────────────────────────────────────

fn stage_curve(config: &RunConfig, out: &Path) -> Result<StageReport> {
    let mut report = StageReport::default();
    let env = StageEnv::prepare(config, out)?;
    for kc in &config.kernels {
        let name = kc.effective_name();
        let spec = load_kernel_spec(out, &name)?;
        let best_c = load_best_c(out, &name)?;
        let curve = learning_curve(
            &env.train_features(&spec),
            &env.train.labels(),
            &env.test_features(&spec),
            &env.test.labels(),
            &spec,
            best_c,
            &config.curve.fractions,
            config.seeds.curve_seed,
            &config.svm.to_smo_params(),
        )?;
        let csv_path = out.join(format!("curve_{name}.csv"));
        std::fs::write(&csv_path, curve_to_csv(&curve))
            .map_err(|e| Error::io(csv_path.display().to_string(), e))?;
        report.file(csv_path);
        let json_path = out.join(format!("curve_{name}.json"));
        write_json(&json_path, &curve)?;
        report.file(json_path);
        let last = curve.points.last().expect("nonempty fractions");
        report.line(format!(
            "{name}: {} points, accuracy {:.4} at N_train = {}",
            curve.points.len(),
            last.metrics.accuracy,
            last.n_train
        ));
    }
    Ok(report)
}

fn opt_cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn curve_to_csv(curve: &LearningCurve) -> String {
    let mut out = String::from("n_train,accuracy,jaccard,precision,recall,specificity,converged\n");
    for p in &curve.points {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            p.n_train,
            p.metrics.accuracy,
            opt_cell(p.metrics.jaccard),
            opt_cell(p.metrics.precision),
            opt_cell(p.metrics.recall),
            opt_cell(p.metrics.specificity),
            p.converged
        );
    }
    out
}

// ─── stage: metrics ──────────────────────────────────────────────────

fn stage_metrics(config: &RunConfig, out: &Path) -> Result<StageReport> {
    let mut report = StageReport::default();
    for kc in &config.kernels {
        let name = kc.effective_name();
        let pred_path = out.join(format!("predictions_{name}.csv"));
        if !pred_path.exists() {
            return Err(Error::Dependency(pred_path.display().to_string()));
        }
        let text = std::fs::read_to_string(&pred_path)
            .map_err(|e| Error::io(pred_path.display().to_string(), e))?;
        let rows = parse_predictions(&text)?;
        let y_true: Vec<f64> = rows.iter().map(|r| r.y_true).collect();
        let y_pred: Vec<f64> = rows.iter().map(|r| r.y_pred).collect();
        let counts = ConfusionCounts::from_labels(&y_true, &y_pred)?;
        let metrics = classification_metrics(&counts)?;
        let path = out.join(format!("metrics_{name}.json"));
        #[derive(Serialize)]
        struct MetricsSummary {
            counts: ConfusionCounts,
            metrics: MetricsRecord,
        }
        write_json(&path, &MetricsSummary { counts, metrics })?;
        report.file(path);
        report.line(format!(
            "{name}: accuracy {:.4} on {} predictions",
            metrics.accuracy,
            rows.len()
        ));
    }
    Ok(report)
}

/// One row of a predictions export.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictionRow {
    pub index: usize,
    pub y_true: f64,
    pub decision: f64,
    pub y_pred: f64,
}

pub const PREDICTIONS_HEADER: &str = "index,y_true,decision,y_pred";

/// Strict parser for the predictions schema.
pub fn parse_predictions(text: &str) -> Result<Vec<PredictionRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        None => return Err(Error::EmptyDataset("file is empty".into())),
        Some((_, first)) => {
            let first = first.strip_suffix('\r').unwrap_or(first);
            if first != PREDICTIONS_HEADER {
                return Err(Error::Parse {
                    row: 1,
                    msg: format!("header mismatch: expected {PREDICTIONS_HEADER:?}, got {first:?}"),
                });
            }
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let row = i + 1;
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                row,
                msg: format!("expected 4 columns, got {}", fields.len()),
            });
        }
        let index: usize = fields[0].parse().map_err(|_| Error::Parse {
            row,
            msg: format!("bad index {:?}", fields[0]),
        })?;
        let mut nums = [0.0f64; 3];
        for (k, v) in nums.iter_mut().enumerate() {
            *v = fields[k + 1].parse().map_err(|_| Error::Parse {
                row,
                msg: format!("non-numeric cell {:?}", fields[k + 1]),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    row,
                    msg: format!("non-finite cell {:?}", fields[k + 1]),
                });
            }
        }
        if nums[0] != 1.0 && nums[0] != -1.0 {
            return Err(Error::Parse {
                row,
                msg: format!("y_true must be +1 or -1, got {}", nums[0]),
            });
        }
        if nums[2] != 1.0 && nums[2] != -1.0 {
            return Err(Error::Parse {
                row,
                msg: format!("y_pred must be +1 or -1, got {}", nums[2]),
            });
        }
        rows.push(PredictionRow {
            index,
            y_true: nums[0],
            decision: nums[1],
            y_pred: nums[2],
        });
    }
    if rows.is_empty() {
        return Err(Error::EmptyDataset("no prediction rows".into()));
    }
    Ok(rows)
}

// ─── shared stage environment ────────────────────────────────────────

/// Labeled dataset, deterministic split and the two feature scalings, shared
/// by every stage past `label`.
struct StageEnv {
    train: Dataset,
    test: Dataset,
    classical_scaler: FeatureScaler,
    quantum_scaler: FeatureScaler,
    x_train_classical: Vec<Vec<f64>>,
    x_test_classical: Vec<Vec<f64>>,
    x_train_quantum: Vec<Vec<f64>>,
    x_test_quantum: Vec<Vec<f64>>,
}

impl StageEnv {
    fn prepare(config: &RunConfig, out: &Path) -> Result<StageEnv> {
        let labeled = out.join("labeled.csv");
        if !labeled.exists() {
            return Err(Error::Dependency(labeled.display().to_string()));
        }
        let rows = read_labeled(&labeled)?;
        let ds = dataset_from_rows(&rows);
        let (train, test) =
            crate::data::split_dataset(&ds, config.split.test_fraction, config.seeds.split_seed)?;
        let classical_scaler = FeatureScaler::from_hypercube(config.scaling.classical, 3)?;
        let quantum_scaler = FeatureScaler::from_hypercube(config.scaling.quantum, 3)?;
        let apply = |scaler: &FeatureScaler, ds: &Dataset| -> Vec<Vec<f64>> {
            ds.samples.iter().map(|s| scaler.apply(&s.eps)).collect()
        };
        Ok(StageEnv {
            x_train_classical: apply(&classical_scaler, &train),
            x_test_classical: apply(&classical_scaler, &test),
            x_train_quantum: apply(&quantum_scaler, &train),
            x_test_quantum: apply(&quantum_scaler, &test),
            train,
            test,
            classical_scaler,
            quantum_scaler,
        })
    }

    fn train_features(&self, spec: &KernelSpec) -> Vec<Vec<f64>> {
        match spec {
            KernelSpec::Classical(_) => self.x_train_classical.clone(),
            KernelSpec::Quantum(_) => self.x_train_quantum.clone(),
        }
    }

    fn test_features(&self, spec: &KernelSpec) -> Vec<Vec<f64>> {
        match spec {
            KernelSpec::Classical(_) => self.x_test_classical.clone(),
            KernelSpec::Quantum(_) => self.x_test_quantum.clone(),
        }
    }

    fn scaler_for(&self, spec: &KernelSpec) -> &FeatureScaler {
        match spec {
            KernelSpec::Classical(_) => &self.classical_scaler,
            KernelSpec::Quantum(_) => &self.quantum_scaler,
        }
    }
}

fn dataset_from_rows(rows: &[LabeledRow]) -> Dataset {
    Dataset::new(
        rows.iter()
            .map(|r| LabeledSample {
                eps: r.record.eps,
                y: r.label,
            })
            .collect(),
    )
}

fn load_kernel_spec(out: &Path, name: &str) -> Result<KernelSpec> {
    let path = out.join(format!("kernel_{name}.json"));
    if !path.exists() {
        return Err(Error::Dependency(path.display().to_string()));
    }
    let text =
        std::fs::read_to_string(&path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let spec: KernelSpec =
        serde_json::from_str(&text).map_err(|e| Error::Serialize(e.to_string()))?;
    spec.validate()?;
    Ok(spec)
}

fn load_best_c(out: &Path, name: &str) -> Result<f64> {
    let path = out.join(format!("cv_{name}.json"));
    if !path.exists() {
        return Err(Error::Dependency(path.display().to_string()));
    }
    let text =
        std::fs::read_to_string(&path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let result: CvResult =
        serde_json::from_str(&text).map_err(|e| Error::Serialize(e.to_string()))?;
    Ok(result.best_c)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| Error::Serialize(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path.display().to_string(), e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_names_round_trip() {
        for stage in Stage::ALL {
            assert_eq!(Stage::from_name(stage.name()).unwrap(), stage);
        }
        assert!(Stage::from_name("bogus").is_err());
    }

    #[test]
    fn predictions_parser_is_strict() {
        let good = "index,y_true,decision,y_pred\n0,1,0.52,1\n1,-1,-0.1,-1\n";
        let rows = parse_predictions(good).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].y_pred, -1.0);

        assert!(matches!(
            parse_predictions("index,y_true\n"),
            Err(Error::Parse { row: 1, .. })
        ));
        assert!(matches!(
            parse_predictions("index,y_true,decision,y_pred\n0,2,0.1,1\n"),
            Err(Error::Parse { row: 2, .. })
        ));
        assert!(matches!(
            parse_predictions("index,y_true,decision,y_pred\n"),
            Err(Error::EmptyDataset(_))
        ));
    }
}
