//! JSON file formats for structures, tensors, Lie algebras, group elements and
//! reports.
//!
//! Matrices are stored as arrays of rows. Numbers use the shortest decimal
//! that round-trips to the same `f64`.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::decomposition::ClassReport;
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::models::LieAlgebraSpec;
use crate::structure::{canonical_structure, StructureData};
use crate::tensor::Tensor3;

// -0.0 prints as "-0.0"; emit plain zeros
fn clean(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter()
        .map(|r| r.iter().copied().map(clean).collect())
        .collect()
}

fn from_rows(what: &str, data: &[Vec<f64>], dim: usize) -> Result<DMatrix<f64>> {
    if data.len() != dim || data.iter().any(|r| r.len() != dim) {
        return Err(Error::Parse(format!(
            "`{what}` must be a {dim}x{dim} array of rows"
        )));
    }
    Ok(DMatrix::from_fn(dim, dim, |i, j| data[i][j]))
}

fn from_vec(what: &str, data: &[f64], dim: usize) -> Result<DVector<f64>> {
    if data.len() != dim {
        return Err(Error::Parse(format!(
            "`{what}` must have length {dim}, got {}",
            data.len()
        )));
    }
    Ok(DVector::from_column_slice(data))
}

fn parse_json<T: for<'de> Deserialize<'de>>(value: Value) -> Result<T> {
    serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))
}

/// Structure document. Omitted fields default to the canonical structure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Vec<f64>>,
}

impl StructureFile {
    pub fn from_structure(s: &StructureData) -> Self {
        Self {
            n: s.n(),
            g: Some(rows(s.g())),
            phi: Some(rows(s.phi())),
            xi: Some(s.xi().iter().copied().map(clean).collect()),
            eta: Some(s.eta().iter().copied().map(clean).collect()),
        }
    }

    /// Builds the structure. The axioms are not checked here.
    pub fn to_structure(&self) -> Result<StructureData> {
        let base = canonical_structure(self.n)?;
        let d = base.dim();
        let g = match &self.g {
            Some(g) => from_rows("g", g, d)?,
            None => base.g().clone(),
        };
        let phi = match &self.phi {
            Some(p) => from_rows("phi", p, d)?,
            None => base.phi().clone(),
        };
        let xi = match &self.xi {
            Some(v) => from_vec("xi", v, d)?,
            None => base.xi().clone(),
        };
        let eta = match &self.eta {
            Some(v) => from_vec("eta", v, d)?,
            None => base.eta().clone(),
        };
        StructureData::new(self.n, g, phi, xi, eta)
    }
}

/// Tensor document: `comps` is row-major with the first index outermost.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorFile {
    pub dim: usize,
    pub comps: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureFile>,
}

impl TensorFile {
    pub fn new(s: &StructureData, t: &Tensor3) -> Self {
        Self {
            dim: t.dim(),
            comps: t.comps().iter().copied().map(clean).collect(),
            structure: (!s.is_canonical(0.0)).then(|| StructureFile::from_structure(s)),
        }
    }

    pub fn to_parts(&self) -> Result<(StructureData, Tensor3)> {
        if self.dim < 3 || self.dim.is_multiple_of(2) {
            return Err(Error::Parse(format!(
                "`dim` must be odd and at least 3, got {}",
                self.dim
            )));
        }
        let n = (self.dim - 1) / 2;
        let s = match &self.structure {
            Some(sf) if sf.n != n => {
                return Err(Error::Parse(format!(
                    "structure has n = {}, tensor dimension {} needs n = {n}",
                    sf.n, self.dim
                )))
            }
            Some(sf) => sf.to_structure()?,
            None => canonical_structure(n)?,
        };
        let expected = self.dim.pow(3);
        if self.comps.len() != expected {
            return Err(Error::Parse(format!(
                "`comps` must have {expected} entries, got {}",
                self.comps.len()
            )));
        }
        let t = Tensor3::from_vec(self.dim, self.comps.clone())?;
        Ok((s, t))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketRecord {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<f64>,
}

/// Lie-algebra document: `[E_i, E_j] = Σ coeffs[k] E_k` for `i < j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieAlgebraFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureFile>,
    pub brackets: Vec<BracketRecord>,
}

impl LieAlgebraFile {
    pub fn new(spec: &LieAlgebraSpec) -> Self {
        let s = &spec.structure;
        Self {
            n: s.n(),
            structure: (!s.is_canonical(0.0)).then(|| StructureFile::from_structure(s)),
            brackets: spec
                .upper_brackets()
                .into_iter()
                .map(|(i, j, coeffs)| BracketRecord {
                    i,
                    j,
                    coeffs: coeffs.into_iter().map(clean).collect(),
                })
                .collect(),
        }
    }

    pub fn to_spec(&self) -> Result<LieAlgebraSpec> {
        let s = match &self.structure {
            Some(sf) if sf.n != self.n => {
                return Err(Error::Parse(format!(
                    "structure has n = {}, expected {}",
                    sf.n, self.n
                )))
            }
            Some(sf) => sf.to_structure()?,
            None => canonical_structure(self.n)?,
        };
        let d = s.dim();
        let mut brackets = Vec::with_capacity(self.brackets.len());
        for b in &self.brackets {
            if b.coeffs.len() != d {
                return Err(Error::Parse(format!(
                    "bracket [E{}, E{}] needs {d} coefficients, got {}",
                    b.i,
                    b.j,
                    b.coeffs.len()
                )));
            }
            brackets.push((b.i, b.j, b.coeffs.clone()));
        }
        LieAlgebraSpec::from_brackets(s, &brackets).map_err(|e| match e {
            Error::InvalidArgument(m) => Error::Parse(m),
            other => other,
        })
    }
}

/// Group element document in the canonical basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub n: usize,
    pub matrix: Vec<Vec<f64>>,
}

impl GroupFile {
    pub fn new(a: &GroupElement) -> Self {
        Self {
            n: a.n(),
            matrix: rows(a.matrix()),
        }
    }

    pub fn to_matrix(&self) -> Result<DMatrix<f64>> {
        from_rows("matrix", &self.matrix, 2 * self.n + 1)
    }
}

/// Classification output: the report plus the class names.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub class: String,
    pub classes: Vec<String>,
    #[serde(flatten)]
    pub report: ClassReport,
}

impl From<ClassReport> for ReportFile {
    fn from(report: ClassReport) -> Self {
        Self {
            class: report.class_label(),
            classes: report.class_names(),
            report,
        }
    }
}

/// A classifiable input.
#[derive(Clone, Debug, PartialEq)]
pub enum Input {
    Tensor(StructureData, Tensor3),
    LieAlgebra(LieAlgebraSpec),
}

/// Parses a tensor or Lie-algebra document, deciding by its fields: `brackets`
/// means a Lie algebra, `comps` a tensor. Documents with both are rejected.
pub fn parse_input(text: &str) -> Result<Input> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse("expected a JSON object".into()))?;
    match (obj.contains_key("brackets"), obj.contains_key("comps")) {
        (true, true) => Err(Error::Parse(
            "ambiguous input: both `brackets` and `comps` present".into(),
        )),
        (true, false) => Ok(Input::LieAlgebra(
            parse_json::<LieAlgebraFile>(value)?.to_spec()?,
        )),
        (false, true) => {
            let (s, t) = parse_json::<TensorFile>(value)?.to_parts()?;
            Ok(Input::Tensor(s, t))
        }
        (false, false) => Err(Error::Parse(
            "missing field `comps` (tensor) or `brackets` (Lie algebra)".into(),
        )),
    }
}

pub fn read_input(path: &Path) -> Result<Input> {
    parse_input(&std::fs::read_to_string(path)?)
}

pub fn parse_structure(text: &str) -> Result<StructureData> {
    serde_json::from_str::<StructureFile>(text)
        .map_err(|e| Error::Parse(e.to_string()))?
        .to_structure()
}

pub fn parse_group(text: &str) -> Result<DMatrix<f64>> {
    serde_json::from_str::<GroupFile>(text)
        .map_err(|e| Error::Parse(e.to_string()))?
        .to_matrix()
}

/// Single-line JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string(value).map_err(|e| Error::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}
