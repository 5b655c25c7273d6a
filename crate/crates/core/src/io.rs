//! JSON forms of states and catalogs.
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major nested arrays.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SekineError};
use crate::functionals::{idempotency_report, Functional, IdempotencyReport};
use crate::idempotents::{Catalog, IdempotentDescriptor};
use crate::scalar::{c, CMatrix};

type JsonMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub k: usize,
    pub alpha: JsonMatrix,
    pub kappa: JsonMatrix,
}

fn to_json_matrix(m: &CMatrix) -> JsonMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn from_json_matrix(name: &str, k: usize, rows: &JsonMatrix) -> Result<CMatrix> {
    if rows.len() != k || rows.iter().any(|r| r.len() != k) {
        return Err(SekineError::Parse(format!("{name} must be {k}x{k}")));
    }
    Ok(CMatrix::from_fn(k, k, |i, j| {
        let [re, im] = rows[i][j];
        c(re, im)
    }))
}

impl From<Functional> for StateFile {
    fn from(f: Functional) -> Self {
        StateFile::from(&f)
    }
}

impl From<&Functional> for StateFile {
    fn from(f: &Functional) -> Self {
        Self {
            k: f.k(),
            alpha: to_json_matrix(f.alpha()),
            kappa: to_json_matrix(f.kappa()),
        }
    }
}

impl TryFrom<StateFile> for Functional {
    type Error = SekineError;

    fn try_from(s: StateFile) -> Result<Self> {
        let alpha = from_json_matrix("alpha", s.k, &s.alpha)?;
        let kappa = from_json_matrix("kappa", s.k, &s.kappa)?;
        if alpha.iter().chain(kappa.iter()).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(SekineError::Parse("non-finite coefficient".into()));
        }
        Functional::new(alpha, kappa)
    }
}

pub fn state_to_json(f: &Functional) -> Result<String> {
    Ok(serde_json::to_string_pretty(&StateFile::from(f))?)
}

pub fn state_from_json(text: &str) -> Result<Functional> {
    let file: StateFile =
        serde_json::from_str(text).map_err(|e| SekineError::Parse(e.to_string()))?;
    Functional::try_from(file)
}

pub fn read_state(path: &Path) -> Result<Functional> {
    let text = fs::read_to_string(path)
        .map_err(|e| SekineError::Parse(format!("{}: {e}", path.display())))?;
    state_from_json(&text)
}

pub fn write_state(path: &Path, f: &Functional) -> Result<()> {
    fs::write(path, state_to_json(f)?)
        .map_err(|e| SekineError::Parse(format!("{}: {e}", path.display())))
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogRecord {
    pub label: String,
    pub descriptor: IdempotentDescriptor,
    pub state: StateFile,
    pub report: IdempotencyReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogExport {
    pub k: usize,
    pub count: usize,
    pub members: Vec<CatalogRecord>,
}

pub fn catalog_export(catalog: &Catalog, tol: f64) -> CatalogExport {
    CatalogExport {
        k: catalog.k,
        count: catalog.len(),
        members: catalog
            .entries
            .iter()
            .map(|e| CatalogRecord {
                label: e.descriptor.label(),
                descriptor: e.descriptor.clone(),
                state: StateFile::from(&e.functional),
                report: idempotency_report(&e.functional, tol),
            })
            .collect(),
    }
}

pub fn catalog_to_json(catalog: &Catalog, tol: f64) -> Result<String> {
    Ok(serde_json::to_string_pretty(&catalog_export(catalog, tol))?)
}
