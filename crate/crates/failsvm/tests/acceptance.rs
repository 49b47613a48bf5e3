//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (visible with `cargo test --test acceptance -- --nocapture`).

mod common;

use common::{dense_apply, qp_oracle};
use failsvm::align::{kta_gradient, train_kta, KtaConfig, TrainableKernel};
use failsvm::data::{scale_features, synth_oracle_dataset, CLASSICAL_TARGET, QUANTUM_TARGET};
use failsvm::kernel::{classical_kernel, gram_matrix, ClassicalKernelSpec, KernelSpec};
use failsvm::pipeline::{self, RunConfig};
use failsvm::quantum::{
    quantum_gram, quantum_kernel, EmbeddingSpec, Gate, KernelMethod, QuantumKernelSpec, Statevector,
};
use failsvm::svm::{solve_dual, SmoParams};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::{Path, PathBuf};
use std::time::Instant;

fn report(criterion: &str, start: Instant) {
    println!(
        "ACCEPTANCE {criterion}: PASS in {:.2} s",
        start.elapsed().as_secs_f64()
    );
}

fn random_gate(rng: &mut ChaCha8Rng, n: usize) -> Gate {
    let q = rng.gen_range(0..n);
    let mut q2 = rng.gen_range(0..n);
    while q2 == q {
        q2 = rng.gen_range(0..n);
    }
    let angle = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    match rng.gen_range(0..7) {
        0 => Gate::h(q),
        1 => Gate::rx(q, angle),
        2 => Gate::ry(q, angle),
        3 => Gate::rz(q, angle),
        4 => Gate::cnot(q, q2),
        5 => Gate::cz(q, q2),
        _ => Gate::rzz(q, q2, angle),
    }
}

#[test]
fn criterion_1_ghz_and_dense_unitary_oracle() {
    let start = Instant::now();

    // GHZ circuit: H on qubit 0, CNOT cascade.
    let mut st = Statevector::zero_state(4).unwrap();
    st.apply(&Gate::h(0)).unwrap();
    for q in 0..3 {
        st.apply(&Gate::cnot(q, q + 1)).unwrap();
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for (i, amp) in st.amps().iter().enumerate() {
        let expected = if i == 0 || i == 15 { s } else { 0.0 };
        assert!(
            (amp.re - expected).abs() < 1e-12 && amp.im.abs() < 1e-12,
            "GHZ amplitude {i} = {amp}"
        );
    }

    // Random 5-qubit circuits against the dense-matrix oracle.
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    for _ in 0..20 {
        let n = 5;
        let mut st = Statevector::zero_state(n).unwrap();
        let mut dense: Vec<Complex64> = st.amps().to_vec();
        for _ in 0..40 {
            let gate = random_gate(&mut rng, n);
            st.apply(&gate).unwrap();
            dense = dense_apply(n, &dense, &gate);
        }
        for (a, b) in st.amps().iter().zip(&dense) {
            assert!((a - b).norm() < 1e-10, "simulator {a} vs oracle {b}");
        }
    }

    assert!(
        start.elapsed().as_secs_f64() < 1.0,
        "runtime budget exceeded"
    );
    report("criterion 1 (quantum simulator vs dense oracle)", start);
}

#[test]
fn criterion_2_overlap_adjoint_kernel_identity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2002);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut embeddings = Vec::new();
    for (i, &w) in [3usize, 4, 6].iter().enumerate() {
        for &d in &[1usize, 2, 3] {
            embeddings.push(EmbeddingSpec::he2_seeded(w, d, 40 + i as u64 * 3 + d as u64).unwrap());
            embeddings.push(EmbeddingSpec::iqp(w, d).unwrap());
        }
    }
    for spec in &embeddings {
        for _ in 0..100 {
            let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-half_pi..half_pi)).collect();
            let x2: Vec<f64> = (0..3).map(|_| rng.gen_range(-half_pi..half_pi)).collect();
            let overlap = quantum_kernel(spec, &x, &x2, KernelMethod::Overlap).unwrap();
            let adjoint = quantum_kernel(spec, &x, &x2, KernelMethod::Adjoint).unwrap();
            assert!(
                (overlap - adjoint).abs() < 1e-10,
                "{}: overlap {overlap} vs adjoint {adjoint}",
                spec.fingerprint()
            );
        }
    }
    assert!(
        start.elapsed().as_secs_f64() < 10.0,
        "runtime budget exceeded"
    );
    report("criterion 2 (overlap vs adjoint kernel identity)", start);
}

#[test]
fn criterion_3_gram_psd_and_bounds() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3003);
    let x_classical: Vec<Vec<f64>> = (0..40)
        .map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let rbf = gram_matrix(&ClassicalKernelSpec::Rbf { gamma: 1.065 }, &x_classical).unwrap();

    let half_pi = std::f64::consts::FRAC_PI_2;
    let x_quantum: Vec<Vec<f64>> = (0..40)
        .map(|_| (0..3).map(|_| rng.gen_range(-half_pi..half_pi)).collect())
        .collect();
    let quantum_specs = [
        EmbeddingSpec::iqp(3, 1).unwrap(),
        EmbeddingSpec::he2_seeded(3, 2, 8).unwrap(),
        EmbeddingSpec::he2_seeded(6, 3, 9).unwrap(),
    ];
    let mut grams = vec![rbf];
    for spec in &quantum_specs {
        grams.push(quantum_gram(spec, &x_quantum).unwrap());
    }

    for gram in &grams {
        for i in 0..gram.nrows() {
            assert!(
                (gram.entries[(i, i)] - 1.0).abs() < 1e-12,
                "{}: diagonal {}",
                gram.kernel,
                gram.entries[(i, i)]
            );
        }
        let min = gram
            .entries
            .symmetric_eigenvalues()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        assert!(min >= -1e-8, "{}: min eigenvalue {min}", gram.kernel);
    }
    report("criterion 3 (Gram PSD and unit diagonals)", start);
}

#[test]
fn criterion_4_smo_matches_brute_force_qp() {
    let start = Instant::now();

    // Hand-derived two-sample solution.
    let x = vec![vec![0.0], vec![1.0]];
    let y = [1.0, -1.0];
    let gram = gram_matrix(&ClassicalKernelSpec::Rbf { gamma: 1.0 }, &x).unwrap();
    let tight = SmoParams {
        tol: 1e-10,
        ..SmoParams::default()
    };
    let (sol, _) = solve_dual(&gram, &y, 1e6, &tight).unwrap();
    let expected = 1.0 / (1.0 - (-1.0f64).exp());
    assert!((sol.alpha[0] - expected).abs() < 1e-6);
    assert!((sol.alpha[1] - expected).abs() < 1e-6);
    assert!(sol.b.abs() < 1e-6);

    // 50 random problems, M <= 12, PSD Grams from RBF on random points.
    let mut rng = ChaCha8Rng::seed_from_u64(4004);
    let params = SmoParams {
        tol: 1e-8,
        ..SmoParams::default()
    };
    for problem in 0..50 {
        let m = rng.gen_range(4..=12);
        let pts: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let mut labels: Vec<f64> = (0..m)
            .map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 })
            .collect();
        labels[0] = 1.0;
        labels[1] = -1.0;
        let gamma = rng.gen_range(0.5..3.0);
        let c = [0.5, 1.0, 10.0][rng.gen_range(0..3)];
        let spec = ClassicalKernelSpec::Rbf { gamma };
        let gram = gram_matrix(&spec, &pts).unwrap();
        let k_rows: Vec<Vec<f64>> = (0..m)
            .map(|i| (0..m).map(|j| gram.entries[(i, j)]).collect())
            .collect();

        let (smo_sol, smo_diag) = solve_dual(&gram, &labels, c, &params).unwrap();
        let oracle = qp_oracle(&k_rows, &labels, c);
        assert!(
            (smo_diag.objective - oracle.objective).abs() < 1e-5,
            "problem {problem}: SMO objective {} vs oracle {}",
            smo_diag.objective,
            oracle.objective
        );

        // Predictions must agree exactly on a probe set.
        for _ in 0..100 {
            let probe: Vec<f64> = (0..2).map(|_| rng.gen_range(-1.2..1.2)).collect();
            let decide = |alpha: &[f64], b: f64| -> f64 {
                let mut f = b;
                for i in 0..m {
                    f += alpha[i] * labels[i] * classical_kernel(&spec, &pts[i], &probe).unwrap();
                }
                f
            };
            let f_smo = decide(&smo_sol.alpha, smo_sol.b);
            let f_oracle = decide(&oracle.alpha, oracle.b);
            assert_eq!(
                f_smo >= 0.0,
                f_oracle >= 0.0,
                "problem {problem}: prediction mismatch ({f_smo} vs {f_oracle})"
            );
        }
    }
    report("criterion 4 (SMO vs brute-force QP oracle)", start);
}

#[test]
fn criterion_5_kta_properties() {
    let start = Instant::now();

    // kta(yy', y) = 1 exactly.
    let y: Vec<f64> = (0..9)
        .map(|i| if i % 3 == 0 { -1.0 } else { 1.0 })
        .collect();
    let m = y.len();
    let yy = DMatrix::from_fn(m, m, |i, j| y[i] * y[j]);
    assert_eq!(failsvm::align::kta(&yy, &y).unwrap(), 1.0);

    // kta(I, y) = 1/sqrt(M) within 1e-12.
    for m in [2usize, 7, 25] {
        let y: Vec<f64> = (0..m)
            .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        let id = DMatrix::<f64>::identity(m, m);
        let v = failsvm::align::kta(&id, &y).unwrap();
        assert!((v - 1.0 / (m as f64).sqrt()).abs() < 1e-12);
    }

    // Analytic RBF gradient vs central finite differences, 100 draws.
    let mut rng = ChaCha8Rng::seed_from_u64(5005);
    let h = 1e-5;
    let mut checked = 0;
    while checked < 100 {
        let m = rng.gen_range(4..14);
        let x: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let y: Vec<f64> = (0..m)
            .map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 })
            .collect();
        if y.iter().all(|v| *v == y[0]) {
            continue;
        }
        let log_gamma: f64 = rng.gen_range(-2.0..3.0);
        let spec = KernelSpec::rbf(log_gamma.exp());
        let analytic = kta_gradient(&spec, &x, &y, 1e-4).unwrap()[0];
        let kta_at = |lg: f64| {
            TrainableKernel::from_spec(&KernelSpec::rbf(lg.exp()))
                .unwrap()
                .kta(&x, &y)
                .unwrap()
        };
        let fd = (kta_at(log_gamma + h) - kta_at(log_gamma - h)) / (2.0 * h);
        let denom = analytic.abs().max(fd.abs()).max(1e-8);
        assert!(
            (analytic - fd).abs() / denom < 1e-4,
            "draw {checked}: analytic {analytic} vs fd {fd}"
        );
        checked += 1;
    }
    report("criterion 5 (KTA identities and RBF gradient)", start);
}

#[test]
fn criterion_6_kta_training_improvement() {
    let start = Instant::now();
    let ds = synth_oracle_dataset(400, 606).unwrap();
    let y = ds.labels();

    // RBF from a far-off start.
    let (x_classical, _) = scale_features(&ds.samples, CLASSICAL_TARGET).unwrap();
    let config = KtaConfig {
        seed: 7,
        ..KtaConfig::default()
    };
    let (_, rbf_report) = train_kta(&KernelSpec::rbf(1e3), &x_classical, &y, &config).unwrap();
    assert!(
        rbf_report.final_kta() >= rbf_report.initial_kta(),
        "RBF KTA {} -> {}",
        rbf_report.initial_kta(),
        rbf_report.final_kta()
    );
    // Monotone-trend ascent: no logged value sags far below the running max.
    let mut running_max = f64::NEG_INFINITY;
    for &(it, v) in &rbf_report.history {
        assert!(
            v >= running_max - 0.02,
            "KTA history dips at iteration {it}: {v} vs max {running_max}"
        );
        running_max = running_max.max(v);
    }
    assert!(
        rbf_report.final_kta() > rbf_report.initial_kta() + 0.05,
        "expected a clear ascent from the detuned start"
    );

    // HE2 W3D1 (whose fidelity kernel is invariant to its single trailing
    // rotation layer, so equality within tolerance is the expected outcome).
    let (x_quantum, scaler) = scale_features(&ds.samples, QUANTUM_TARGET).unwrap();
    let embedding = EmbeddingSpec::he2_seeded(3, 1, 11).unwrap();
    let spec = KernelSpec::Quantum(QuantumKernelSpec::new(embedding, scaler.fingerprint()));
    let (_, he2_report) = train_kta(&spec, &x_quantum, &y, &config).unwrap();
    assert!(
        he2_report.final_kta() >= he2_report.initial_kta() - 1e-6,
        "HE2 KTA {} -> {}",
        he2_report.initial_kta(),
        he2_report.final_kta()
    );

    assert!(
        start.elapsed().as_secs_f64() < 120.0,
        "runtime budget exceeded"
    );
    report("criterion 6 (KTA training improvement)", start);
}

fn synthetic_config(n_samples: usize) -> RunConfig {
    let text = format!(
        r#"
schema_version = 1

[data]
source = "synthetic"
n_samples = {n_samples}

[[kernels]]
kind = "rbf"
gamma = 1.0

[curve]
fractions = [0.5, 1.0]
"#
    );
    RunConfig::from_toml_str(&text, Path::new(".")).unwrap()
}

#[test]
fn criterion_7_end_to_end_synthetic_classification() {
    let start = Instant::now();
    // 500 synthetic draws -> 1000 labeled samples through the pipeline.
    let config = synthetic_config(500);
    let dir = tempfile::tempdir().unwrap();
    pipeline::run(&config, dir.path()).unwrap();

    let fit: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fit_rbf.json")).unwrap())
            .unwrap();
    let test_accuracy = fit["test_accuracy"].as_f64().unwrap();
    assert!(
        test_accuracy >= 0.9,
        "end-to-end test accuracy {test_accuracy}"
    );
    assert!(
        start.elapsed().as_secs_f64() < 300.0,
        "runtime budget exceeded"
    );
    report("criterion 7 (end-to-end synthetic accuracy >= 0.9)", start);
}

/// Reference-dataset replication: reproduces the pinned learning-curve
/// accuracies on the full FE load-path dataset. Skipped (not failed) unless
/// the dataset is supplied via `FAILSVM_REFERENCE_DATA` or
/// `data/fe_dataset.csv`.
#[test]
fn criterion_8_reference_dataset_replication() {
    let start = Instant::now();
    let candidate = std::env::var("FAILSVM_REFERENCE_DATA")
        .map(PathBuf::from)
        .unwrap_or_else(|_| {
            Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/fe_dataset.csv")
        });
    if !candidate.exists() {
        println!(
            "ACCEPTANCE criterion 8 (reference-dataset replication): SKIP (dataset not supplied at {})",
            candidate.display()
        );
        return;
    }

    let paths = failsvm::data::ingest_paths(&candidate).unwrap();
    let samples = failsvm::data::label_samples(&paths, 0.9, 1e-8).unwrap();
    let ds = failsvm::data::Dataset::new(samples);
    let (train, test) = failsvm::data::split_dataset(&ds, 0.2, 1).unwrap();
    let y_train = train.labels();
    let y_test = test.labels();
    let smo = SmoParams::default();

    // RBF, KTA-aligned, C = 1e7.
    let (x_train, _) = scale_features(&train.samples, CLASSICAL_TARGET).unwrap();
    let (x_test, _) = scale_features(&test.samples, CLASSICAL_TARGET).unwrap();
    let kta_config = KtaConfig {
        seed: 3,
        ..KtaConfig::default()
    };
    let (rbf_spec, _) = train_kta(&KernelSpec::rbf(1.0), &x_train, &y_train, &kta_config).unwrap();
    let curve = failsvm::eval::learning_curve(
        &x_train,
        &y_train,
        &x_test,
        &y_test,
        &rbf_spec,
        1e7,
        &[1.0],
        29,
        &smo,
    )
    .unwrap();
    let rbf_acc = curve.points.last().unwrap().metrics.accuracy;
    assert!(
        (rbf_acc - 0.882).abs() <= 0.02,
        "RBF accuracy {rbf_acc} outside 0.882 +/- 0.02"
    );

    // HE2 W6D3, KTA-aligned, C = 1e4.
    let (xq_train, scaler) = scale_features(&train.samples, QUANTUM_TARGET).unwrap();
    let (xq_test, _) = scale_features(&test.samples, QUANTUM_TARGET).unwrap();
    let embedding = EmbeddingSpec::he2_seeded(6, 3, 2).unwrap();
    let he2 = KernelSpec::Quantum(QuantumKernelSpec::new(embedding, scaler.fingerprint()));
    let (he2_spec, _) = train_kta(&he2, &xq_train, &y_train, &kta_config).unwrap();
    let curve = failsvm::eval::learning_curve(
        &xq_train,
        &y_train,
        &xq_test,
        &y_test,
        &he2_spec,
        1e4,
        &[1.0],
        29,
        &smo,
    )
    .unwrap();
    let he2_acc = curve.points.last().unwrap().metrics.accuracy;
    assert!(
        (he2_acc - 0.818).abs() <= 0.03,
        "HE2 W6D3 accuracy {he2_acc} outside 0.818 +/- 0.03"
    );
    report("criterion 8 (reference-dataset replication)", start);
}

#[test]
fn criterion_9_byte_identical_reports() {
    let start = Instant::now();
    let config = synthetic_config(60);
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    pipeline::run(&config, dir_a.path()).unwrap();
    pipeline::run(&config, dir_b.path()).unwrap();

    let mut names: Vec<String> = std::fs::read_dir(dir_a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert!(!names.is_empty());
    let names_b: std::collections::BTreeSet<String> = std::fs::read_dir(dir_b.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    assert_eq!(
        names
            .iter()
            .cloned()
            .collect::<std::collections::BTreeSet<_>>(),
        names_b
    );

    for name in &names {
        let a = std::fs::read(dir_a.path().join(name)).unwrap();
        let b = std::fs::read(dir_b.path().join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical runs");
    }
    report("criterion 9 (byte-identical reports)", start);
}
