//! Load-path data pipeline: homogenization of reference-DOF records,
//! stiffness-degradation labeling, feature scaling, dataset splitting and a
//! synthetic analytic generator with the same record shape as the FE data.

mod io;
mod scale;
mod split;
mod synth;

pub use io::{
    export_labeled, export_paths, ingest_paths, ingest_paths_with_eps_div, ingest_raw_paths,
    parse_homogenized, parse_labeled, parse_raw, read_labeled, write_labeled, write_paths,
    LabeledRow, HOMOGENIZED_HEADER, LABELED_HEADER, RAW_HEADER,
};
pub use scale::{scale_features, FeatureScaler, CLASSICAL_TARGET, QUANTUM_TARGET};
pub use split::split_dataset;
pub use synth::{closed_form_label, envelope_value, synth_oracle_dataset, synth_oracle_paths};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::ops::Range;

/// Half-width of the strain sampling hypercube; every feature lives in
/// `[-HYPERCUBE_HALF_WIDTH, HYPERCUBE_HALF_WIDTH]`.
pub const HYPERCUBE_HALF_WIDTH: f64 = 1e-2;

/// Strain magnitude below which a component is excluded from secant-stiffness
/// ratios (the division is singular at zero strain).
pub const DEFAULT_EPS_DIV: f64 = 1e-8;

/// Default stiffness-degradation threshold separating failed from non-failed
/// increments.
pub const DEFAULT_THRESHOLD: f64 = 0.9;

/// In-plane dimensions of the open-hole plate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlateGeometry {
    /// Plate dimension along direction 1 (mm).
    pub d1: f64,
    /// Plate dimension along direction 2 (mm).
    pub d2: f64,
    /// Laminate thickness (mm).
    pub thickness: f64,
    /// Hole diameter (mm).
    pub hole_diameter: f64,
}

impl PlateGeometry {
    pub fn new(d1: f64, d2: f64, thickness: f64, hole_diameter: f64) -> Result<Self> {
        let geom = PlateGeometry {
            d1,
            d2,
            thickness,
            hole_diameter,
        };
        for (name, v) in [
            ("d1", d1),
            ("d2", d2),
            ("thickness", thickness),
            ("hole_diameter", hole_diameter),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Parameter(format!(
                    "geometry field {name} must be strictly positive, got {v}"
                )));
            }
        }
        Ok(geom)
    }

    /// The 6 mm hole specimen: in-plane dimensions five times the hole
    /// diameter, 1 mm laminate thickness.
    pub fn open_hole_6mm() -> Self {
        PlateGeometry {
            d1: 30.0,
            d2: 30.0,
            thickness: 1.0,
            hole_diameter: 6.0,
        }
    }
}

/// One increment of an FE analysis in reference-DOF form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawIncrement {
    /// Reference-DOF displacements `[U1, U2, U3, U4]` (mm).
    pub u: [f64; 4],
    /// Conjugate reaction forces `[F1, F2, F3, F4]` (N).
    pub f: [f64; 4],
    /// Pseudo-time; strictly increasing within a path.
    pub time: f64,
}

/// One increment in homogenized form: strain triple `[eps11, eps22, gam12]`
/// and stress triple `[sig11, sig22, sig12]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomogenizedIncrement {
    pub eps: [f64; 3],
    pub sig: [f64; 3],
}

impl HomogenizedIncrement {
    pub fn new(eps: [f64; 3], sig: [f64; 3]) -> Result<Self> {
        if eps.iter().chain(sig.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidRecord(format!(
                "non-finite increment entries eps={eps:?} sig={sig:?}"
            )));
        }
        Ok(HomogenizedIncrement { eps, sig })
    }
}

/// One radial loading path: ordered homogenized increments plus the index
/// window treated as the linear elastic region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoadPath {
    pub path_id: String,
    pub increments: Vec<HomogenizedIncrement>,
    /// Increment range whose secant stiffnesses define the baseline.
    pub baseline_window: Range<usize>,
}

impl LoadPath {
    /// Builds a path with the default baseline window: the first increment at
    /// which every component that is ever active (above `DEFAULT_EPS_DIV`)
    /// exceeds the guard.
    pub fn new(path_id: impl Into<String>, increments: Vec<HomogenizedIncrement>) -> Result<Self> {
        Self::with_eps_div(path_id, increments, DEFAULT_EPS_DIV)
    }

    pub fn with_eps_div(
        path_id: impl Into<String>,
        increments: Vec<HomogenizedIncrement>,
        eps_div: f64,
    ) -> Result<Self> {
        let path_id = path_id.into();
        if increments.len() < 2 {
            return Err(Error::InvalidRecord(format!(
                "path {path_id} has {} increment(s); at least 2 required",
                increments.len()
            )));
        }
        let baseline_window = default_baseline_window(&increments, eps_div);
        Ok(LoadPath {
            path_id,
            increments,
            baseline_window,
        })
    }

    pub fn with_baseline_window(mut self, window: Range<usize>) -> Result<Self> {
        if window.start >= window.end || window.end > self.increments.len() {
            return Err(Error::Parameter(format!(
                "baseline window {window:?} invalid for {} increments",
                self.increments.len()
            )));
        }
        self.baseline_window = window;
        Ok(self)
    }
}

fn default_baseline_window(increments: &[HomogenizedIncrement], eps_div: f64) -> Range<usize> {
    let mut active = [false; 3];
    for inc in increments {
        for (flag, e) in active.iter_mut().zip(&inc.eps) {
            *flag |= e.abs() > eps_div;
        }
    }
    if !active.iter().any(|&a| a) {
        return 0..1;
    }
    for (t, inc) in increments.iter().enumerate() {
        if (0..3).all(|c| !active[c] || inc.eps[c].abs() > eps_div) {
            return t..t + 1;
        }
    }
    // Active components never all exceed the guard simultaneously; anchor the
    // window at the first increment where any of them does.
    for (t, inc) in increments.iter().enumerate() {
        if (0..3).any(|c| active[c] && inc.eps[c].abs() > eps_div) {
            return t..t + 1;
        }
    }
    0..1
}

/// Secant stiffnesses at one increment; `None` marks a component whose strain
/// magnitude is below the division guard.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StiffnessState {
    pub e1: Option<f64>,
    pub e2: Option<f64>,
    pub g12: Option<f64>,
    /// Minimum retained ratio of instantaneous to baseline secant stiffness.
    pub ds: f64,
}

/// Binary failure label: `+1` non-failed, `-1` failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Label {
    Failed,
    NonFailed,
}

impl Label {
    pub fn value(self) -> f64 {
        match self {
            Label::Failed => -1.0,
            Label::NonFailed => 1.0,
        }
    }

    /// Sign-function labeling; an exact zero maps to `+1`.
    pub fn from_sign(v: f64) -> Self {
        if v >= 0.0 {
            Label::NonFailed
        } else {
            Label::Failed
        }
    }
}

impl From<Label> for i8 {
    fn from(l: Label) -> i8 {
        match l {
            Label::Failed => -1,
            Label::NonFailed => 1,
        }
    }
}

impl TryFrom<i8> for Label {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            -1 => Ok(Label::Failed),
            1 => Ok(Label::NonFailed),
            other => Err(format!("label must be -1 or +1, got {other}")),
        }
    }
}

/// One strain vector with its failure label.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabeledSample {
    pub eps: [f64; 3],
    pub y: Label,
}

impl LabeledSample {
    pub fn new(eps: [f64; 3], y: Label) -> Result<Self> {
        let bound = HYPERCUBE_HALF_WIDTH * (1.0 + 1e-9);
        for (c, v) in eps.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::InvalidRecord(format!(
                    "non-finite strain component {c}: {v}"
                )));
            }
            if v.abs() > bound {
                return Err(Error::InvalidRecord(format!(
                    "strain component {c} = {v} outside sampling hypercube [-{0}, {0}]",
                    HYPERCUBE_HALF_WIDTH
                )));
            }
        }
        Ok(LabeledSample { eps, y })
    }
}

/// Per-class sample counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClassCounts {
    pub failed: usize,
    pub non_failed: usize,
}

impl ClassCounts {
    pub fn of(samples: &[LabeledSample]) -> Self {
        let failed = samples.iter().filter(|s| s.y == Label::Failed).count();
        ClassCounts {
            failed,
            non_failed: samples.len() - failed,
        }
    }

    pub fn total(&self) -> usize {
        self.failed + self.non_failed
    }
}

/// A labeled strain dataset plus the bookkeeping needed to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub samples: Vec<LabeledSample>,
    /// Affine per-feature transform used when the features were prepared for
    /// a kernel; identity until a scaler is attached.
    pub scaler: FeatureScaler,
    pub split_seed: u64,
    pub class_counts: ClassCounts,
}

impl Dataset {
    pub fn new(samples: Vec<LabeledSample>) -> Self {
        let class_counts = ClassCounts::of(&samples);
        Dataset {
            samples,
            scaler: FeatureScaler::identity(3),
            split_seed: 0,
            class_counts,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn labels(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.y.value()).collect()
    }

    /// Raw (unscaled) feature rows.
    pub fn features(&self) -> Vec<Vec<f64>> {
        self.samples.iter().map(|s| s.eps.to_vec()).collect()
    }
}

/// Homogenized strains from reference-DOF displacements:
/// `eps11 = U1/D1`, `eps22 = U2/D2`, `gam12 = U3/D1 + U4/D2`.
pub fn homogenize_strains(u: [f64; 4], geom: &PlateGeometry) -> Result<[f64; 3]> {
    if u.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidRecord(format!(
            "non-finite displacement record {u:?}"
        )));
    }
    Ok([
        u[0] / geom.d1,
        u[1] / geom.d2,
        u[2] / geom.d1 + u[3] / geom.d2,
    ])
}

/// Homogenized stresses from reaction forces via the energy balance:
/// `sig11 = F1/(t*D2)`, `sig22 = F2/(t*D1)`,
/// `sig12 = (F3*U3 + F4*U4)/(gam12*t*D1*D2)`.
///
/// At `|gam12| <= eps_div` the shear expression is singular: if all shear
/// quantities vanish the path is purely axial and `sig12 = 0`, otherwise a
/// shear-singularity error is returned.
pub fn homogenize_stresses(
    f: [f64; 4],
    u: [f64; 4],
    gamma12: f64,
    geom: &PlateGeometry,
    eps_div: f64,
) -> Result<[f64; 3]> {
    if f.iter().chain(u.iter()).any(|v| !v.is_finite()) || !gamma12.is_finite() {
        return Err(Error::InvalidRecord(format!(
            "non-finite force/displacement record f={f:?} u={u:?} gamma12={gamma12}"
        )));
    }
    let t = geom.thickness;
    let sig11 = f[0] / (t * geom.d2);
    let sig22 = f[1] / (t * geom.d1);
    let sig12 = if gamma12.abs() > eps_div {
        (f[2] * u[2] + f[3] * u[3]) / (gamma12 * t * geom.d1 * geom.d2)
    } else if f[2] == 0.0 && u[2] == 0.0 && f[3] == 0.0 && u[3] == 0.0 {
        0.0
    } else {
        return Err(Error::ShearSingularity { gamma12 });
    };
    Ok([sig11, sig22, sig12])
}

/// Full homogenization of one raw increment.
pub fn homogenize_increment(
    raw: &RawIncrement,
    geom: &PlateGeometry,
    eps_div: f64,
) -> Result<HomogenizedIncrement> {
    let eps = homogenize_strains(raw.u, geom)?;
    let sig = homogenize_stresses(raw.f, raw.u, eps[2], geom, eps_div)?;
    HomogenizedIncrement::new(eps, sig)
}

/// Per-increment secant stiffnesses and degradation ratio along a path.
///
/// The baseline stiffness of each component is the mean secant over the
/// baseline-window increments where that component's strain exceeds
/// `eps_div`; a component without a baseline never enters the degradation
/// minimum. Increments where no retained component is active report
/// `ds = 1.0`.
pub fn stiffness_history(path: &LoadPath, eps_div: f64) -> Result<Vec<StiffnessState>> {
    let w = &path.baseline_window;
    if w.start >= w.end || w.end > path.increments.len() {
        return Err(Error::Parameter(format!(
            "baseline window {w:?} invalid for {} increments",
            path.increments.len()
        )));
    }

    let mut baseline = [None::<f64>; 3];
    for (c, base) in baseline.iter_mut().enumerate() {
        let mut sum = 0.0;
        let mut count = 0usize;
        for inc in &path.increments[w.clone()] {
            if inc.eps[c].abs() > eps_div {
                sum += inc.sig[c] / inc.eps[c];
                count += 1;
            }
        }
        if count > 0 {
            let mean = sum / count as f64;
            if mean != 0.0 {
                *base = Some(mean);
            }
        }
    }
    if baseline.iter().all(Option::is_none) {
        return Err(Error::DegeneratePath {
            path_id: path.path_id.clone(),
        });
    }

    let states = path
        .increments
        .iter()
        .map(|inc| {
            let mut secants = [None::<f64>; 3];
            let mut ds = f64::INFINITY;
            let mut retained = false;
            for c in 0..3 {
                if inc.eps[c].abs() > eps_div {
                    let secant = inc.sig[c] / inc.eps[c];
                    secants[c] = Some(secant);
                    if let Some(base) = baseline[c] {
                        ds = ds.min(secant / base);
                        retained = true;
                    }
                }
            }
            StiffnessState {
                e1: secants[0],
                e2: secants[1],
                g12: secants[2],
                ds: if retained { ds } else { 1.0 },
            }
        })
        .collect();
    Ok(states)
}

/// Labels every increment of a path: `-1` when the degradation ratio drops
/// strictly below `threshold`, `+1` otherwise.
pub fn label_path(path: &LoadPath, threshold: f64, eps_div: f64) -> Result<Vec<LabeledSample>> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::Parameter(format!(
            "threshold must lie in (0, 1), got {threshold}"
        )));
    }
    let states = stiffness_history(path, eps_div)?;
    path.increments
        .iter()
        .zip(states)
        .map(|(inc, st)| {
            let y = if st.ds < threshold {
                Label::Failed
            } else {
                Label::NonFailed
            };
            LabeledSample::new(inc.eps, y)
        })
        .collect()
}

/// Labels every increment of every path.
pub fn label_samples(
    paths: &[LoadPath],
    threshold: f64,
    eps_div: f64,
) -> Result<Vec<LabeledSample>> {
    let mut samples = Vec::new();
    for path in paths {
        samples.extend(label_path(path, threshold, eps_div)?);
    }
    Ok(samples)
}
