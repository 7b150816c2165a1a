//! JSON mesh and run-configuration files, and CSV convergence reports.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bench::{Case, ConvergenceReport, Method, StudyConfig};
use crate::error::Error;
use crate::geometry::{Interface, MultiPatch, Patch, Point};
use crate::linalg::Matrix;
use crate::mesh::ExtractedMesh;
use crate::spline::KnotVector;

/// Identifier stored in every mesh file.
pub const MESH_FORMAT: &str = "bezier-mortar-mesh";
pub const MESH_VERSION: u32 = 1;

/// Validation failures of input files. Each variant has a stable code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FileError {
    #[error("[E001] malformed JSON: {0}")]
    Json(String),
    #[error("[E002] unsupported file format '{format}' version {version}")]
    Format { format: String, version: u32 },
    #[error("[E010] patch {patch}, direction {dir}: knot vector is not open ({reason})")]
    NonOpenKnotVector { patch: usize, dir: usize, reason: String },
    #[error("[E011] patch {patch}, direction {dir}: invalid knot vector ({reason})")]
    InvalidKnotVector { patch: usize, dir: usize, reason: String },
    #[error("[E020] patch {patch}: weight {index} is {value}, weights must be positive")]
    NonPositiveWeight { patch: usize, index: usize, value: f64 },
    #[error("[E030] patch {patch}: {what} has {found} entries, the knot vectors need {expected}")]
    ControlNetMismatch { patch: usize, what: &'static str, expected: usize, found: usize },
    #[error("[E040] invalid model: {0}")]
    Model(Error),
    #[error("[E050] invalid run configuration: {0}")]
    Config(String),
}

impl FileError {
    /// Stable error code, e.g. `E010`.
    pub fn code(&self) -> &'static str {
        match self {
            FileError::Json(_) => "E001",
            FileError::Format { .. } => "E002",
            FileError::NonOpenKnotVector { .. } => "E010",
            FileError::InvalidKnotVector { .. } => "E011",
            FileError::NonPositiveWeight { .. } => "E020",
            FileError::ControlNetMismatch { .. } => "E030",
            FileError::Model(_) => "E040",
            FileError::Config(_) => "E050",
        }
    }
}

/// One patch of a mesh file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatchRecord {
    pub degrees: [usize; 2],
    pub knots: [Vec<f64>; 2],
    /// Control points with the first parametric index running fastest.
    pub control_points: Vec<Point>,
    pub weights: Vec<f64>,
}

/// Weakly continuous extraction data of one integration cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeakElementRecord {
    pub patch: usize,
    pub parent: usize,
    pub cell_box: [[f64; 2]; 2],
    /// Global DOF of each operator row.
    pub dofs: Vec<usize>,
    /// Rows express the element functions in the Bernstein basis of the
    /// parent element.
    pub operator: Matrix<f64>,
}

/// Weakly continuous mesh compiled from the patches of the file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeakPayload {
    pub dual_refinement: usize,
    pub num_dofs: usize,
    pub elements: Vec<WeakElementRecord>,
}

/// Contents of a mesh file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshFile {
    pub format: String,
    pub version: u32,
    pub patches: Vec<PatchRecord>,
    pub interfaces: Vec<Interface>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weak: Option<WeakPayload>,
}

impl MeshFile {
    pub fn from_model(model: &MultiPatch) -> Self {
        let patches = model
            .patches
            .iter()
            .map(|p| PatchRecord {
                degrees: [p.degree(0), p.degree(1)],
                knots: [p.knots(0).knots().to_vec(), p.knots(1).knots().to_vec()],
                control_points: p.points().to_vec(),
                weights: p.weights().to_vec(),
            })
            .collect();
        Self {
            format: MESH_FORMAT.into(),
            version: MESH_VERSION,
            patches,
            interfaces: model.interfaces.clone(),
            weak: None,
        }
    }

    /// Attaches the cells of a weakly continuous mesh.
    pub fn with_weak(mut self, mesh: &ExtractedMesh, dual_refinement: usize) -> Self {
        self.weak = Some(WeakPayload {
            dual_refinement,
            num_dofs: mesh.num_dofs,
            elements: mesh
                .elements
                .iter()
                .map(|e| WeakElementRecord {
                    patch: e.patch,
                    parent: e.parent,
                    cell_box: e.cell_box,
                    dofs: e.dofs.clone(),
                    operator: e.operator.clone(),
                })
                .collect(),
        });
        self
    }

    /// Checks the schema and builds the multi-patch model.
    pub fn to_model(&self) -> Result<MultiPatch, FileError> {
        if self.format != MESH_FORMAT || self.version != MESH_VERSION {
            return Err(FileError::Format { format: self.format.clone(), version: self.version });
        }
        let patches =
            self.patches.iter().enumerate().map(|(k, rec)| validate_patch(k, rec)).collect::<Result<Vec<_>, _>>()?;
        MultiPatch::new(patches, self.interfaces.clone()).map_err(FileError::Model)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("mesh files contain only finite numbers");
        s.push('\n');
        s
    }

    /// Parses and validates a mesh file.
    pub fn from_json(text: &str) -> Result<Self, FileError> {
        let file: MeshFile = serde_json::from_str(text).map_err(|e| FileError::Json(e.to_string()))?;
        file.to_model()?;
        Ok(file)
    }
}

fn validate_knots(patch: usize, dir: usize, knots: &[f64], p: usize) -> Result<KnotVector<f64>, FileError> {
    let non_open = |reason: String| FileError::NonOpenKnotVector { patch, dir, reason };
    if knots.len() < 2 * (p + 1) {
        return Err(FileError::InvalidKnotVector {
            patch,
            dir,
            reason: format!("{} knots are too few for degree {p}", knots.len()),
        });
    }
    let n = knots.len();
    if knots[..=p].iter().any(|k| *k != knots[0]) {
        return Err(non_open(format!("the first {} knots are not equal", p + 1)));
    }
    if knots[n - p - 1..].iter().any(|k| *k != knots[n - 1]) {
        return Err(non_open(format!("the last {} knots are not equal", p + 1)));
    }
    KnotVector::new(knots.to_vec(), p).map_err(|e| FileError::InvalidKnotVector { patch, dir, reason: e.to_string() })
}

fn validate_patch(k: usize, rec: &PatchRecord) -> Result<Patch, FileError> {
    let kv0 = validate_knots(k, 0, &rec.knots[0], rec.degrees[0])?;
    let kv1 = validate_knots(k, 1, &rec.knots[1], rec.degrees[1])?;
    let expected = kv0.num_basis() * kv1.num_basis();
    if rec.control_points.len() != expected {
        return Err(FileError::ControlNetMismatch {
            patch: k,
            what: "control_points",
            expected,
            found: rec.control_points.len(),
        });
    }
    if rec.weights.len() != expected {
        return Err(FileError::ControlNetMismatch { patch: k, what: "weights", expected, found: rec.weights.len() });
    }
    if let Some((index, &value)) = rec.weights.iter().enumerate().find(|(_, w)| !(**w > 0.0)) {
        return Err(FileError::NonPositiveWeight { patch: k, index, value });
    }
    Patch::new([kv0, kv1], rec.control_points.clone(), rec.weights.clone()).map_err(FileError::Model)
}

/// Settings of a `solve` or `converge` run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub case: Case,
    #[serde(default = "default_degree")]
    pub p: usize,
    #[serde(default = "default_ratio")]
    pub ratio: [usize; 2],
    #[serde(default = "default_true")]
    pub matched: bool,
    #[serde(default = "default_refinement")]
    pub n: usize,
    #[serde(default = "default_levels")]
    pub levels: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_method")]
    pub method: Method,
    /// Young's modulus and Poisson ratio; the case defaults apply if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub material: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

fn default_degree() -> usize {
    2
}
fn default_ratio() -> [usize; 2] {
    [2, 3]
}
fn default_true() -> bool {
    true
}
fn default_refinement() -> usize {
    1
}
fn default_levels() -> usize {
    4
}
fn default_method() -> Method {
    Method::Mortar
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, FileError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| FileError::Json(e.to_string()))?;
        cfg.study().map_err(|e| FileError::Config(e.to_string()))?;
        Ok(cfg)
    }

    /// Study parameters after validation against the case.
    pub fn study(&self) -> Result<StudyConfig, Error> {
        if self.material.is_some() {
            return Err(Error::InvalidConfig("the benchmark cases use fixed material constants".into()));
        }
        let mut s = StudyConfig::new(self.case, self.p, self.ratio);
        s.matched = self.matched;
        s.dual_refinement = self.n;
        s.levels = self.levels;
        s.seed = self.seed;
        s.method = self.method;
        if self.case.load_case().is_some() {
            s.method = Method::Weak;
        }
        s.validate()?;
        Ok(s)
    }
}

/// Column header of convergence reports.
pub const REPORT_HEADER: &str = "case,p,ratio,matched,n,level,h,dofs,l2_error,rate";

/// Floating-point numbers in reports use 17 significant digits.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        String::new()
    }
}

/// CSV text of a convergence report. A `status` column is appended when a
/// level failed.
pub fn report_csv(report: &ConvergenceReport) -> String {
    let c = &report.config;
    let with_status = report.has_failures();
    let mut out = String::from(REPORT_HEADER);
    if with_status {
        out.push_str(",status");
    }
    out.push('\n');
    for row in &report.rows {
        let _ = write!(
            out,
            "{},{},{}:{},{},{},{},{},{},{},{}{}",
            c.case.name(),
            c.p,
            c.ratio[0],
            c.ratio[1],
            c.matched,
            c.dual_refinement,
            row.level,
            format_float(row.h),
            row.dofs,
            format_float(row.l2_error),
            row.rate.map(format_float).unwrap_or_default(),
            if with_status {
                format!(
                    ",{}",
                    row.status.as_deref().map_or("ok".to_string(), |s| format!("\"{}\"", s.replace('"', "'")))
                )
            } else {
                String::new()
            }
        );
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::geometry::{annulus_two_patch, square_two_patch};

    #[test]
    fn mesh_round_trip_is_byte_identical() {
        let model = annulus_two_patch(2, 2, 3).unwrap();
        let text = MeshFile::from_model(&model).to_json();
        let again = MeshFile::from_json(&text).unwrap().to_json();
        assert_eq!(text, again);
        assert_eq!(MeshFile::from_json(&text).unwrap().to_model().unwrap(), model);
    }

    fn corrupt(f: impl FnOnce(&mut MeshFile)) -> FileError {
        let mut file = MeshFile::from_model(&square_two_patch(2, 2, 3, None).unwrap());
        f(&mut file);
        MeshFile::from_json(&file.to_json()).unwrap_err()
    }

    #[test]
    fn schema_errors_have_codes() {
        let e = corrupt(|m| m.patches[0].knots[0][1] = 0.1);
        assert_eq!(e.code(), "E010");
        let e = corrupt(|m| m.patches[1].weights[3] = 0.0);
        assert_eq!(e.code(), "E020");
        let e = corrupt(|m| {
            m.patches[0].control_points.pop();
        });
        assert_eq!(e.code(), "E030");
        assert_eq!(MeshFile::from_json("{").unwrap_err().code(), "E001");
        let e = corrupt(|m| m.version = 7);
        assert_eq!(e.code(), "E002");
    }

    #[test]
    fn run_config_defaults_and_validation() {
        let cfg = RunConfig::from_json(r#"{"case": "square-mixed"}"#).unwrap();
        assert_eq!((cfg.p, cfg.ratio, cfg.n, cfg.levels), (2, [2, 3], 1, 4));
        let err = RunConfig::from_json(r#"{"case": "annulus", "matched": false}"#).unwrap_err();
        assert_eq!(err.code(), "E050");
        assert_eq!(RunConfig::from_json(r#"{"case": "nope"}"#).unwrap_err().code(), "E001");
    }

    #[test]
    fn report_header_and_blank_first_rate() {
        let cfg = StudyConfig::new(Case::SquareMixed, 2, [2, 3]);
        let report = ConvergenceReport {
            config: cfg,
            rows: vec![
                crate::bench::ConvergenceRow { level: 0, h: 0.5, dofs: 36, l2_error: 1e-2, rate: None, status: None },
                crate::bench::ConvergenceRow {
                    level: 1,
                    h: 0.25,
                    dofs: 92,
                    l2_error: 1.25e-3,
                    rate: Some(3.0),
                    status: None,
                },
            ],
        };
        let csv = report_csv(&report);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], REPORT_HEADER);
        assert!(lines[1].ends_with(','));
        assert_eq!(
            lines[2],
            "square-mixed,2,2:3,true,1,1,2.5000000000000000e-1,92,1.2500000000000000e-3,3.0000000000000000e0"
        );
    }
}
