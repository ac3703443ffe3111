//! A concrete history model: a particle on `n` sites evolving through
//! `N−1` unitary steps.
//!
//! A history is a tuple `ω = (ω₁, …, ω_N)` of visited sites. Its path
//! operator is `ℰ(ω) = P_{ω_N}·U_{N−1}·P_{ω_{N−1}}···P_{ω_2}·U_1·P_{ω_1}`
//! with `P_i` the coordinate projections; summing over sets of histories
//! gives class operators, and `D(A, B) = ⟨ℰ(A)ψ, ℰ(B)ψ⟩` induces a
//! decoherence functional on the space of all `n^N` histories.
//!
//! The initial vector ψ is cyclic for the induced representation exactly
//! when every site is hit: for each `i` some history has
//! `[ℰ(ω)ψ](i) ≠ 0`. That criterion is decided here and cross-checkable
//! against the rank of the induced Gram matrix.

use num_complex::Complex64;
use thiserror::Error;

use crate::decoherence::{DecoherenceError, DecoherenceFunctional};
use crate::event::{EventError, EventSpace, QMeasure, DEFAULT_MAX_ATOMS};
use crate::linalg::{gram_matrix, is_unitary, ComplexMatrix, ComplexVector, Tolerance};

/// Default ceiling on `n_sites^N`, the atom count of the induced history
/// space; its dense atom matrix is the practical substrate limit.
pub const DEFAULT_HISTORY_CAP: usize = 4096;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum HistoryError {
    #[error("a scenario needs at least one site")]
    NoSites,
    #[error("a scenario needs at least two times, got {got}")]
    TooFewTimes { got: usize },
    #[error("expected {expected} step matrices for {times} times, got {got}")]
    WrongStepCount { expected: usize, times: usize, got: usize },
    #[error("step {index} is {rows}x{cols}, expected {expected}x{expected}")]
    StepWrongShape { index: usize, rows: usize, cols: usize, expected: usize },
    #[error("step {index} is not unitary: residual {residual:.3e}")]
    StepNotUnitary { index: usize, residual: f64 },
    #[error("initial state has dimension {got}, expected {expected}")]
    StateWrongDim { expected: usize, got: usize },
    #[error("initial state is not a unit vector: norm {norm}")]
    StateNotUnit { norm: f64 },
    #[error("{histories} histories exceed the cap {cap}")]
    CapExceeded { histories: u128, cap: usize },
    #[error("history has {got} entries, expected {expected}")]
    WrongHistoryLength { expected: usize, got: usize },
    #[error("history visits site {site} at position {position}, but there are {n_sites} sites")]
    SiteOutOfRange { position: usize, site: usize, n_sites: usize },
    #[error(transparent)]
    Event(#[from] EventError),
    #[error(transparent)]
    Induced(#[from] DecoherenceError),
}

/// One system history: the tuple of sites visited at `t_1, …, t_N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct History(Vec<usize>);

impl History {
    pub fn new(sites: Vec<usize>) -> Self {
        History(sites)
    }

    pub fn sites(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first_site(&self) -> usize {
        self.0[0]
    }

    pub fn final_site(&self) -> usize {
        *self.0.last().expect("histories are nonempty")
    }

    /// Site tuple joined by dashes, e.g. `"0-1-0"`.
    pub fn label(&self) -> String {
        self.0.iter().map(usize::to_string).collect::<Vec<_>>().join("-")
    }
}

/// A validated scenario: `n` sites, `N` times, `N−1` unitary step matrices
/// `U_k = U(t_{k+1}, t_k)` and a unit initial state. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoryScenario {
    n_sites: usize,
    n_times: usize,
    step_unitaries: Vec<ComplexMatrix>,
    initial_state: ComplexVector,
    cap: usize,
}

impl HistoryScenario {
    pub fn new(
        n_sites: usize,
        n_times: usize,
        step_unitaries: Vec<ComplexMatrix>,
        initial_state: ComplexVector,
        tol: Tolerance,
    ) -> Result<Self, HistoryError> {
        Self::with_cap(n_sites, n_times, step_unitaries, initial_state, DEFAULT_HISTORY_CAP, tol)
    }

    pub fn with_cap(
        n_sites: usize,
        n_times: usize,
        step_unitaries: Vec<ComplexMatrix>,
        initial_state: ComplexVector,
        cap: usize,
        tol: Tolerance,
    ) -> Result<Self, HistoryError> {
        if n_sites == 0 {
            return Err(HistoryError::NoSites);
        }
        if n_times < 2 {
            return Err(HistoryError::TooFewTimes { got: n_times });
        }
        if step_unitaries.len() != n_times - 1 {
            return Err(HistoryError::WrongStepCount {
                expected: n_times - 1,
                times: n_times,
                got: step_unitaries.len(),
            });
        }
        let histories = (n_sites as u128).checked_pow(n_times as u32).unwrap_or(u128::MAX);
        if histories > cap as u128 {
            return Err(HistoryError::CapExceeded { histories, cap });
        }
        for (index, u) in step_unitaries.iter().enumerate() {
            if u.rows() != n_sites || u.cols() != n_sites {
                return Err(HistoryError::StepWrongShape {
                    index,
                    rows: u.rows(),
                    cols: u.cols(),
                    expected: n_sites,
                });
            }
            if !is_unitary(u, tol).expect("shape already checked") {
                let residual = u
                    .adjoint()
                    .matmul(u)
                    .sub(&ComplexMatrix::identity(n_sites))
                    .max_abs();
                return Err(HistoryError::StepNotUnitary { index, residual });
            }
        }
        if initial_state.dim() != n_sites {
            return Err(HistoryError::StateWrongDim {
                expected: n_sites,
                got: initial_state.dim(),
            });
        }
        if (initial_state.norm() - 1.0).abs() > tol.abs {
            return Err(HistoryError::StateNotUnit { norm: initial_state.norm() });
        }
        Ok(HistoryScenario { n_sites, n_times, step_unitaries, initial_state, cap })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_times(&self) -> usize {
        self.n_times
    }

    pub fn step_unitaries(&self) -> &[ComplexMatrix] {
        &self.step_unitaries
    }

    pub fn initial_state(&self) -> &ComplexVector {
        &self.initial_state
    }

    pub fn history_count(&self) -> usize {
        self.n_sites.pow(self.n_times as u32)
    }

    pub fn check_history(&self, omega: &History) -> Result<(), HistoryError> {
        if omega.len() != self.n_times {
            return Err(HistoryError::WrongHistoryLength {
                expected: self.n_times,
                got: omega.len(),
            });
        }
        for (position, &site) in omega.sites().iter().enumerate() {
            if site >= self.n_sites {
                return Err(HistoryError::SiteOutOfRange {
                    position,
                    site,
                    n_sites: self.n_sites,
                });
            }
        }
        Ok(())
    }

    /// Histories indexed little-endian: `ω_j = (k / n^(j−1)) mod n`, so the
    /// first coordinate is the fastest-varying digit.
    pub fn history_from_index(&self, mut index: usize) -> History {
        assert!(index < self.history_count());
        let mut sites = Vec::with_capacity(self.n_times);
        for _ in 0..self.n_times {
            sites.push(index % self.n_sites);
            index /= self.n_sites;
        }
        History(sites)
    }

    /// Inverse of [`history_from_index`](Self::history_from_index).
    pub fn history_index(&self, omega: &History) -> usize {
        debug_assert!(self.check_history(omega).is_ok());
        omega.sites().iter().rev().fold(0, |acc, &site| acc * self.n_sites + site)
    }

    /// All `n^N` histories in index order.
    pub fn histories(&self) -> impl Iterator<Item = History> + '_ {
        (0..self.history_count()).map(|k| self.history_from_index(k))
    }

    /// `U(t_N, t_1)`: the ordered product of all step matrices.
    pub fn full_product(&self) -> ComplexMatrix {
        let mut acc = ComplexMatrix::identity(self.n_sites);
        for u in &self.step_unitaries {
            acc = u.matmul(&acc);
        }
        acc
    }
}

fn site_projector(n: usize, site: usize) -> ComplexMatrix {
    let mut p = ComplexMatrix::zeros(n, n);
    p.set(site, site, Complex64::ONE);
    p
}

/// The path operator `ℰ(ω) = P_{ω_N}·U_{N−1}···U_1·P_{ω_1}`, built as the
/// literal alternating product.
pub fn path_operator(s: &HistoryScenario, omega: &History) -> Result<ComplexMatrix, HistoryError> {
    s.check_history(omega)?;
    let n = s.n_sites();
    let mut acc = site_projector(n, omega.first_site());
    for (k, u) in s.step_unitaries().iter().enumerate() {
        acc = u.matmul(&acc);
        acc = site_projector(n, omega.sites()[k + 1]).matmul(&acc);
    }
    Ok(acc)
}

/// `ℰ(ω)ψ` without materializing the operator: alternate projections and
/// step applications directly on the state vector.
pub fn path_vector(s: &HistoryScenario, omega: &History) -> Result<ComplexVector, HistoryError> {
    s.check_history(omega)?;
    let n = s.n_sites();
    let project = |v: &ComplexVector, site: usize| {
        let mut out = ComplexVector::zeros(n);
        out.set(site, v.get(site));
        out
    };
    let mut v = project(s.initial_state(), omega.first_site());
    for (k, u) in s.step_unitaries().iter().enumerate() {
        v = u.matvec(&v);
        v = project(&v, omega.sites()[k + 1]);
    }
    Ok(v)
}

/// Class operator of a set of histories: `ℰ(A) = Σ_{ω∈A} ℰ(ω)`.
pub fn class_operator(
    s: &HistoryScenario,
    histories: &[History],
) -> Result<ComplexMatrix, HistoryError> {
    let mut acc = ComplexMatrix::zeros(s.n_sites(), s.n_sites());
    for omega in histories {
        acc = acc.add(&path_operator(s, omega)?);
    }
    Ok(acc)
}

/// The decoherence functional induced on the space of all histories:
/// atoms are histories in index order, labeled by their site tuples, and
/// `M_{ωω′} = ⟨ℰ(ω)ψ, ℰ(ω′)ψ⟩`. Always normalized: `ℰ(Ω) = U(t_N, t_1)`
/// is unitary, so `‖ℰ(Ω)ψ‖ = 1`.
pub fn induced_functional(
    s: &HistoryScenario,
    tol: Tolerance,
) -> Result<DecoherenceFunctional, HistoryError> {
    let labels: Vec<String> = s.histories().map(|omega| omega.label()).collect();
    let space = EventSpace::with_max_atoms(labels, s.history_count().max(DEFAULT_MAX_ATOMS))?;
    let vectors: Vec<ComplexVector> =
        s.histories().map(|omega| path_vector(s, &omega)).collect::<Result<_, _>>()?;
    let atom_matrix = gram_matrix(&vectors);
    Ok(DecoherenceFunctional::validate(space, atom_matrix, true, tol)?)
}

/// The induced diagonal q-measure `μ(A) = D(A, A)` as a dense table.
/// Only available when the history space is small enough for 2ⁿ storage.
pub fn induced_qmeasure(s: &HistoryScenario, tol: Tolerance) -> Result<QMeasure, HistoryError> {
    let d = induced_functional(s, tol)?;
    let count = s.history_count();
    if count > DEFAULT_MAX_ATOMS {
        return Err(HistoryError::Event(EventError::TooManyAtoms {
            n: count,
            max: DEFAULT_MAX_ATOMS,
        }));
    }
    let values: Vec<f64> = d
        .space()
        .events()
        .map(|a| d.diagonal_measure(a).expect("event from the same space"))
        .collect();
    // Clamp eigen-noise negatives: the diagonal measure is ‖ℰ(A)ψ‖² ≥ 0.
    let values = values.into_iter().map(|v| v.max(0.0)).collect();
    Ok(QMeasure::new(d.space().clone(), values)?)
}

/// Cyclicity verdict: ψ is cyclic iff every site is reachable, i.e. for
/// each site `i` some history has `[ℰ(ω)ψ](i)` above the floor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicityVerdict {
    pub cyclic: bool,
    pub missing_sites: Vec<usize>,
}

/// Decide cyclicity of the initial state for the induced representation.
///
/// Agrees with the rank criterion: the span of `{ℰ(ω)ψ}` is all of the
/// site space iff no site is missing, because each `ℰ(ω)ψ` is a scalar
/// multiple of the basis vector at the history's final site.
pub fn cyclicity_criterion(s: &HistoryScenario, tol: Tolerance) -> CyclicityVerdict {
    let mut hit = vec![false; s.n_sites()];
    for omega in s.histories() {
        let v = path_vector(s, &omega).expect("enumerated histories are valid");
        for (i, slot) in hit.iter_mut().enumerate() {
            *slot |= v.get(i).norm() > tol.abs;
        }
    }
    let missing_sites: Vec<usize> =
        hit.iter().enumerate().filter(|(_, &h)| !h).map(|(i, _)| i).collect();
    CyclicityVerdict { cyclic: missing_sites.is_empty(), missing_sites }
}
