//! Input file schemas and their conversion into core domain objects.
//!
//! All complex entries are `[re, im]` pairs; matrices are row-major
//! nested arrays; q-measure tables are dense arrays of length 2ⁿ
//! indexed by event bitmask. Failures here mean the file does not
//! describe an object of the expected shape at all — as opposed to
//! describing one that fails a domain check — and exit with status 2.

use std::path::Path;

use decoh::{
    ComplexMatrix, ComplexVector, EventSpace, HistoryError, HistoryScenario,
    OperatorValuedMeasure, QMeasure, Tolerance,
};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Errors that make a report impossible: unreadable input, malformed
/// JSON, or a file failing the schema and cap checks.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{0}")]
    Schema(String),
}

/// A decoherence functional: atom labels plus the matrix of atom-pair
/// values. `normalized` asserts unit total mass.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalFile {
    pub atoms: Vec<String>,
    pub atom_matrix: Vec<Vec<[f64; 2]>>,
    pub normalized: bool,
}

/// A quantum measure as a dense table of 2ⁿ values indexed by bitmask.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QMeasureFile {
    pub atoms: Vec<String>,
    pub values: Vec<f64>,
}

/// A finite evolution scenario: `sites` basis states, `times` slots,
/// `times − 1` step unitaries, and the initial state.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub sites: usize,
    pub times: usize,
    pub steps: Vec<Vec<Vec<[f64; 2]>>>,
    pub psi: Vec<[f64; 2]>,
}

/// An operator-valued measure: one `dim × dim` operator per atom.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorMeasureFile {
    pub dim: usize,
    pub operators: Vec<Vec<Vec<[f64; 2]>>>,
}

/// Read a file and its content digest (`sha256:<hex>` over raw bytes).
pub fn read_input(path: &Path) -> Result<(Vec<u8>, String), CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let digest = format!("sha256:{:x}", Sha256::digest(&bytes));
    Ok((bytes, digest))
}

pub fn parse_json<T: DeserializeOwned>(path: &Path, bytes: &[u8]) -> Result<T, CliError> {
    serde_json::from_slice(bytes).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn complex(pair: [f64; 2]) -> Complex64 {
    Complex64::new(pair[0], pair[1])
}

pub fn build_vector(entries: &[[f64; 2]]) -> ComplexVector {
    ComplexVector::new(entries.iter().copied().map(complex).collect())
}

/// Rectangular nested arrays → matrix; raggedness and emptiness are
/// schema errors.
pub fn build_matrix(rows: &[Vec<[f64; 2]>], what: &str) -> Result<ComplexMatrix, CliError> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || cols == 0 {
        return Err(CliError::Schema(format!("{what} must be a non-empty matrix")));
    }
    for (k, row) in rows.iter().enumerate() {
        if row.len() != cols {
            return Err(CliError::Schema(format!(
                "{what}: row {k} has {} entries, expected {cols}",
                row.len()
            )));
        }
    }
    let converted: Vec<Vec<Complex64>> =
        rows.iter().map(|row| row.iter().copied().map(complex).collect()).collect();
    Ok(ComplexMatrix::from_rows(&converted))
}

/// Functional file → (space, atom matrix, normalization flag), with the
/// matrix checked square of the right order.
pub fn functional_parts(
    file: &FunctionalFile,
    max_atoms: usize,
) -> Result<(EventSpace, ComplexMatrix, bool), CliError> {
    let space = EventSpace::with_max_atoms(file.atoms.clone(), max_atoms)
        .map_err(|e| CliError::Schema(e.to_string()))?;
    let n = space.n();
    let matrix = build_matrix(&file.atom_matrix, "atom_matrix")?;
    if matrix.rows() != n || matrix.cols() != n {
        return Err(CliError::Schema(format!(
            "atom_matrix is {}x{}, expected {n}x{n} for {n} atoms",
            matrix.rows(),
            matrix.cols()
        )));
    }
    Ok((space, matrix, file.normalized))
}

pub fn qmeasure_from_file(file: &QMeasureFile, max_atoms: usize) -> Result<QMeasure, CliError> {
    let space = EventSpace::with_max_atoms(file.atoms.clone(), max_atoms)
        .map_err(|e| CliError::Schema(e.to_string()))?;
    QMeasure::new(space, file.values.clone()).map_err(|e| CliError::Schema(e.to_string()))
}

/// Scenario file → scenario, separating schema errors (outer `Err`,
/// exit 2) from semantic invalidity — non-unitary steps, a non-unit
/// state — which the caller reports with exit 1 (inner `Err`).
pub fn scenario_from_file(
    file: &ScenarioFile,
    cap: usize,
    tol: Tolerance,
) -> Result<Result<HistoryScenario, HistoryError>, CliError> {
    let steps = file
        .steps
        .iter()
        .enumerate()
        .map(|(k, rows)| build_matrix(rows, &format!("steps[{k}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let psi = build_vector(&file.psi);
    match HistoryScenario::with_cap(file.sites, file.times, steps, psi, cap, tol) {
        Ok(s) => Ok(Ok(s)),
        Err(e @ (HistoryError::StepNotUnitary { .. } | HistoryError::StateNotUnit { .. })) => {
            Ok(Err(e))
        }
        Err(other) => Err(CliError::Schema(other.to_string())),
    }
}

pub fn operator_measure_from_file(
    file: &OperatorMeasureFile,
) -> Result<OperatorValuedMeasure, CliError> {
    let operators = file
        .operators
        .iter()
        .enumerate()
        .map(|(k, rows)| {
            let m = build_matrix(rows, &format!("operators[{k}]"))?;
            if m.rows() != file.dim || m.cols() != file.dim {
                return Err(CliError::Schema(format!(
                    "operators[{k}] is {}x{}, expected {dim}x{dim} as declared",
                    m.rows(),
                    m.cols(),
                    dim = file.dim
                )));
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>, _>>()?;
    OperatorValuedMeasure::new(operators).map_err(|e| CliError::Schema(e.to_string()))
}
