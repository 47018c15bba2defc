//! Problem files.
//!
//! ```json
//! {
//!   "kind": "extension",
//!   "variant": "pontryagin",
//!   "J1": "-", "J2": [[1]],
//!   "T11": [[0]], "T21": [[1]],
//!   "tolerances": { "relative_zero": 1e-10, "residual_tol": "1e-8" }
//! }
//! ```
//!
//! Matrices are row-major arrays of rows. Entries may be JSON numbers or
//! decimal strings. Symmetries are matrices or signature strings such as
//! `"+-+"`; when omitted they default to the identity.

use std::path::Path;

use krein_core::completion::CompletionProblem;
use krein_core::extension::{ExtensionProblem, Variant};
use krein_core::{BlockSpace, FundamentalSymmetry, Mat, TolerancePolicy};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Float(f64),
    Text(String),
}

impl Number {
    fn value(&self) -> Result<f64, CliError> {
        let x = match self {
            Number::Float(x) => *x,
            Number::Text(s) => s
                .trim()
                .replace('−', "-")
                .parse::<f64>()
                .map_err(|_| CliError::Parse(format!("{s:?} is not a number")))?,
        };
        if x.is_finite() {
            Ok(x)
        } else {
            Err(CliError::Parse(format!("non-finite entry {x}")))
        }
    }
}

pub type MatrixSpec = Vec<Vec<Number>>;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SymmetrySpec {
    Signature(String),
    Matrix(MatrixSpec),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSpec {
    pub relative_zero: Option<Number>,
    pub residual_tol: Option<Number>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub kind: Option<String>,
    pub description: Option<String>,
    #[serde(rename = "J")]
    pub j: Option<SymmetrySpec>,
    #[serde(rename = "J1")]
    pub j1: Option<SymmetrySpec>,
    #[serde(rename = "J2")]
    pub j2: Option<SymmetrySpec>,
    #[serde(rename = "A11")]
    pub a11: Option<MatrixSpec>,
    #[serde(rename = "A12")]
    pub a12: Option<MatrixSpec>,
    #[serde(rename = "T11")]
    pub t11: Option<MatrixSpec>,
    #[serde(rename = "T21")]
    pub t21: Option<MatrixSpec>,
    pub matrix: Option<MatrixSpec>,
    pub variant: Option<String>,
    pub tolerances: Option<ToleranceSpec>,
}

pub fn matrix(spec: &MatrixSpec, name: &str) -> Result<Mat, CliError> {
    let rows = spec.len();
    let cols = spec.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Err(CliError::Parse(format!("{name} is empty")));
    }
    if let Some(bad) = spec.iter().position(|r| r.len() != cols) {
        return Err(CliError::Parse(format!(
            "{name}: row {bad} has {} entries, expected {cols}",
            spec[bad].len()
        )));
    }
    let mut m = Mat::zeros(rows, cols);
    for (i, row) in spec.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            m[(i, j)] = x.value().map_err(|e| CliError::Parse(format!("{name}[{i}][{j}]: {e}")))?;
        }
    }
    Ok(m)
}

fn symmetry(
    spec: Option<&SymmetrySpec>,
    name: &str,
    dim: usize,
    tol: &TolerancePolicy,
) -> Result<FundamentalSymmetry, CliError> {
    let j = match spec {
        None => return Ok(FundamentalSymmetry::identity(dim)),
        Some(SymmetrySpec::Signature(s)) => FundamentalSymmetry::from_signature(s),
        Some(SymmetrySpec::Matrix(m)) => FundamentalSymmetry::with_tolerance(matrix(m, name)?, tol),
    }
    .map_err(|e| CliError::Parse(format!("{name}: {e}")))?;
    if j.dim() != dim {
        return Err(CliError::Parse(format!(
            "{name} has dimension {}, expected {dim}",
            j.dim()
        )));
    }
    Ok(j)
}

fn required<'a>(field: &'a Option<MatrixSpec>, name: &str) -> Result<&'a MatrixSpec, CliError> {
    field.as_ref().ok_or_else(|| CliError::Parse(format!("missing field {name}")))
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Self::parse(&text)
    }

    fn expect_kind(&self, kind: &str) -> Result<(), CliError> {
        match self.kind.as_deref() {
            None => Ok(()),
            Some(k) if k == kind => Ok(()),
            Some(k) => Err(CliError::Parse(format!("expected kind {kind:?}, found {k:?}"))),
        }
    }

    /// File tolerances overridden by explicit values.
    pub fn tolerances(&self, relative_zero: Option<f64>, residual_tol: Option<f64>) -> Result<TolerancePolicy, CliError> {
        let base = TolerancePolicy::default();
        let spec = self.tolerances.clone().unwrap_or_default();
        let file_zero = spec.relative_zero.as_ref().map(Number::value).transpose()?;
        let file_res = spec.residual_tol.as_ref().map(Number::value).transpose()?;
        let zero = relative_zero.or(file_zero).unwrap_or(base.relative_zero);
        let res = residual_tol.or(file_res).unwrap_or(base.residual_tol);
        TolerancePolicy::new(zero, res).map_err(CliError::from)
    }

    /// The matrix and optional symmetry of an inertia query.
    pub fn inertia_input(&self, tol: &TolerancePolicy) -> Result<(Mat, Option<FundamentalSymmetry>), CliError> {
        self.expect_kind("inertia")?;
        let m = matrix(required(&self.matrix, "matrix")?, "matrix")?;
        if m.nrows() != m.ncols() {
            return Err(CliError::Parse(format!("matrix must be square, got {}x{}", m.nrows(), m.ncols())));
        }
        let j = match &self.j {
            None => None,
            Some(spec) => Some(symmetry(Some(spec), "J", m.nrows(), tol)?),
        };
        Ok((m, j))
    }

    pub fn completion_problem(&self, tol: &TolerancePolicy) -> Result<CompletionProblem, CliError> {
        self.expect_kind("completion")?;
        let a11 = matrix(required(&self.a11, "A11")?, "A11")?;
        let a12 = matrix(required(&self.a12, "A12")?, "A12")?;
        if a11.nrows() != a11.ncols() || a12.nrows() != a11.nrows() {
            return Err(CliError::Parse(format!(
                "A11 must be square and A12 must have as many rows (A11 {}x{}, A12 {}x{})",
                a11.nrows(),
                a11.ncols(),
                a12.nrows(),
                a12.ncols()
            )));
        }
        let j1 = symmetry(self.j1.as_ref(), "J1", a11.nrows(), tol)?;
        let j2 = symmetry(self.j2.as_ref(), "J2", a12.ncols(), tol)?;
        Ok(CompletionProblem::new(BlockSpace::new(j1, j2), a11, a12, *tol)?)
    }

    pub fn extension_problem(&self, tol: &TolerancePolicy) -> Result<ExtensionProblem, CliError> {
        self.expect_kind("extension")?;
        let variant: Variant = self
            .variant
            .as_deref()
            .ok_or_else(|| CliError::Parse("missing field variant (hilbert, krein or pontryagin)".into()))?
            .parse()
            .map_err(|e: krein_core::Error| CliError::Parse(e.to_string()))?;
        let t11 = matrix(required(&self.t11, "T11")?, "T11")?;
        let t21 = matrix(required(&self.t21, "T21")?, "T21")?;
        if t11.nrows() != t11.ncols() || t21.ncols() != t11.ncols() {
            return Err(CliError::Parse(format!(
                "T11 must be square and T21 must have as many columns (T11 {}x{}, T21 {}x{})",
                t11.nrows(),
                t11.ncols(),
                t21.nrows(),
                t21.ncols()
            )));
        }
        let j1 = symmetry(self.j1.as_ref(), "J1", t11.nrows(), tol)?;
        let j2 = symmetry(self.j2.as_ref(), "J2", t21.nrows(), tol)?;
        Ok(ExtensionProblem::new(BlockSpace::new(j1, j2), t11, t21, variant, *tol)?)
    }
}
