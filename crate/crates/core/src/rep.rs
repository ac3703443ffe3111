//! Hilbert-space representations of decoherence functionals.
//!
//! A *vector representation* assigns to each atom a vector `e_i` with
//! `⟨e_i, e_j⟩ = D(ω_i, ω_j)`; the event map `ℰ(A) = Σ_{ω_i∈A} e_i` then
//! reproduces the whole functional. An *operator representation* upgrades
//! the atoms to rank-1 operators `P_i` together with a cyclic unit vector
//! `ψ` such that `⟨ℰ(A)ψ, ℰ(B)ψ⟩ = D(A, B)`.
//!
//! Also here: unitary intertwiners between representations of the same
//! functional, one-sided inequivalence certificates (rank profiles and
//! spectra are unitary invariants), and the history-space analysis relating
//! the event-indexed Gram space `K` to a representation's ambient space.

use num_complex::Complex64;
use thiserror::Error;

use crate::decoherence::{eval_masks, DecoherenceFunctional};
use crate::event::Event;
use crate::linalg::{
    gram_matrix, hermitian_eigen, numerical_rank, ComplexMatrix, ComplexVector, LinalgError,
    Tolerance,
};
use crate::sampling::{random_unit_vector, rng_from_seed};

/// Default floor for `|⟨e_i, ψ⟩| ≥ τ_c · ‖e_i‖` in the cyclic-vector
/// search; guards the conditioning of the `1/⟨ψ, e_i⟩` denominators.
pub const DEFAULT_CYCLIC_FLOOR: f64 = 1e-6;

/// Default retry budget for the cyclic-vector search. Random unit vectors
/// fail the floor with probability ~n·τ_c², so one attempt almost always
/// suffices; 64 keeps the failure probability ignorable.
pub const DEFAULT_CYCLIC_ATTEMPTS: usize = 64;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum RepError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("vector family is ragged: expected dim {expected}, found {found}")]
    RaggedVectors { expected: usize, found: usize },
    #[error("representations have different Gram matrices: residual {residual:.3e}")]
    GramMismatch { residual: f64 },
    #[error("representation dimensions differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("cyclic-vector search exhausted {attempts} attempts at floor {floor:.1e}")]
    SearchExhausted { attempts: usize, floor: f64 },
    #[error("representation is empty (dimension 0 has no unit vectors)")]
    EmptyRep,
    #[error("psi is not a unit vector: norm {norm}")]
    PsiNotUnit { norm: f64 },
    #[error(
        "intertwiner verification failed: unitarity residual {unitarity_residual:.3e}, \
         intertwining residual {intertwine_residual:.3e}"
    )]
    VerificationFailed { unitarity_residual: f64, intertwine_residual: f64 },
    #[error("representation does not reproduce the functional: residual {residual:.3e}")]
    RepMismatch { residual: f64 },
}

/// Vector representation: one vector per atom, all in a common dimension.
///
/// Constructed either by [`build_vector_rep`] (always spanning) or from
/// explicit vectors (which may deliberately *not* span, e.g. zero-padded
/// embeddings used to exercise the natural-map analysis).
#[derive(Debug, Clone, PartialEq)]
pub struct VectorRep {
    dim: usize,
    atom_vectors: Vec<ComplexVector>,
}

impl VectorRep {
    pub fn from_vectors(atom_vectors: Vec<ComplexVector>) -> Result<Self, RepError> {
        let dim = atom_vectors.first().map_or(0, |v| v.dim());
        for v in &atom_vectors {
            if v.dim() != dim {
                return Err(RepError::RaggedVectors { expected: dim, found: v.dim() });
            }
        }
        Ok(VectorRep { dim, atom_vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atom_count(&self) -> usize {
        self.atom_vectors.len()
    }

    pub fn atom_vectors(&self) -> &[ComplexVector] {
        &self.atom_vectors
    }

    pub fn atom_vector(&self, i: usize) -> &ComplexVector {
        &self.atom_vectors[i]
    }

    /// `ℰ(A) = Σ_{ω_i∈A} e_i`; the empty event maps to the zero vector.
    pub fn event_vector(&self, event: Event) -> ComplexVector {
        let mut out = ComplexVector::zeros(self.dim);
        for i in event.members() {
            debug_assert!(i < self.atom_vectors.len());
            out = out.add(&self.atom_vectors[i]);
        }
        out
    }

    /// Gram matrix `G_ij = ⟨e_i, e_j⟩` — equals the atom matrix of the
    /// represented functional.
    pub fn gram(&self) -> ComplexMatrix {
        gram_matrix(&self.atom_vectors)
    }

    /// Spanning ⇔ the atom vectors have full rank in the ambient space.
    pub fn is_spanning(&self, tol: Tolerance) -> bool {
        match numerical_rank(&self.gram(), tol) {
            Ok(rank) => rank == self.dim,
            Err(_) => false,
        }
    }
}

/// Operator representation: rank-1 atom operators plus a unit vector.
/// For the degenerate rank-0 functional the carrier has dimension 0 and
/// `psi` is the (only) dim-0 vector; every identity holds vacuously there.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorRep {
    dim: usize,
    atom_operators: Vec<ComplexMatrix>,
    psi: ComplexVector,
}

impl OperatorRep {
    /// Wrap externally supplied operators and vector (used for fixtures
    /// and for re-verifying serialized representations).
    pub fn from_parts(
        atom_operators: Vec<ComplexMatrix>,
        psi: ComplexVector,
        tol: Tolerance,
    ) -> Result<Self, RepError> {
        let dim = psi.dim();
        for op in &atom_operators {
            if op.rows() != dim || op.cols() != dim {
                return Err(RepError::DimensionMismatch { left: op.rows(), right: dim });
            }
        }
        if dim > 0 && (psi.norm() - 1.0).abs() > tol.abs {
            return Err(RepError::PsiNotUnit { norm: psi.norm() });
        }
        Ok(OperatorRep { dim, atom_operators, psi })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atom_count(&self) -> usize {
        self.atom_operators.len()
    }

    pub fn atom_operators(&self) -> &[ComplexMatrix] {
        &self.atom_operators
    }

    pub fn psi(&self) -> &ComplexVector {
        &self.psi
    }

    /// `ℰ(A) = Σ_{ω_i∈A} P_i`.
    pub fn event_operator(&self, event: Event) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for i in event.members() {
            debug_assert!(i < self.atom_operators.len());
            out = out.add(&self.atom_operators[i]);
        }
        out
    }

    /// `ℰ(A)ψ` — the vector family whose Gram reproduces the functional.
    pub fn event_vector(&self, event: Event) -> ComplexVector {
        let mut out = ComplexVector::zeros(self.dim);
        for i in event.members() {
            out = out.add(&self.atom_operators[i].matvec(&self.psi));
        }
        out
    }

    /// The induced vector representation `e_i = P_i ψ`.
    pub fn to_vector_rep(&self) -> VectorRep {
        let vectors: Vec<ComplexVector> =
            (0..self.atom_count()).map(|i| self.atom_operators[i].matvec(&self.psi)).collect();
        VectorRep { dim: self.dim, atom_vectors: vectors }
    }
}

/// Build the spanning vector representation by Gram factorization of the
/// atom matrix: `dim = rank(M)` and `⟨e_i, e_j⟩ = M_ij`.
pub fn build_vector_rep(
    d: &DecoherenceFunctional,
    tol: Tolerance,
) -> Result<VectorRep, RepError> {
    let vectors = crate::linalg::gram_factorize(d.atom_matrix(), tol)?;
    let dim = vectors.first().map_or(0, |v| v.dim());
    Ok(VectorRep { dim, atom_vectors: vectors })
}

/// Unitary intertwiner between two spanning representations of the same
/// functional: `U` with `U·e_i = f_i` for all atoms.
///
/// A maximal independent subset of the `e_i` is selected by greedy Gram
/// pivoting (pivoted Cholesky on the shared Gram matrix); `U` is defined on
/// that basis by `e_i ↦ f_i`, extended by solving the induced linear
/// system, and finally *verified* — unitarity and intertwining residuals
/// are measured rather than assumed.
pub fn intertwiner(
    rep_a: &VectorRep,
    rep_b: &VectorRep,
    tol: Tolerance,
) -> Result<ComplexMatrix, RepError> {
    if rep_a.atom_count() != rep_b.atom_count() {
        return Err(RepError::GramMismatch { residual: f64::INFINITY });
    }
    if rep_a.dim() != rep_b.dim() {
        return Err(RepError::DimensionMismatch { left: rep_a.dim(), right: rep_b.dim() });
    }
    let gram_a = rep_a.gram();
    let gram_b = rep_b.gram();
    let scale = gram_a.max_abs().max(1.0);
    let residual = gram_a.sub(&gram_b).max_abs();
    if residual > tol.abs * scale {
        return Err(RepError::GramMismatch { residual });
    }
    let m = rep_a.dim();
    if m == 0 {
        return Ok(ComplexMatrix::zeros(0, 0));
    }
    let pivots = greedy_gram_pivots(&gram_a, m, tol)
        .ok_or(RepError::DimensionMismatch { left: rep_a.dim(), right: rep_b.dim() })?;
    let mut basis_a = ComplexMatrix::zeros(m, m);
    let mut basis_b = ComplexMatrix::zeros(m, m);
    for (col, &i) in pivots.iter().enumerate() {
        for r in 0..m {
            basis_a.set(r, col, rep_a.atom_vector(i).get(r));
            basis_b.set(r, col, rep_b.atom_vector(i).get(r));
        }
    }
    // U · basis_a = basis_b  ⇒  U = basis_b · basis_a⁻¹.
    let inv = crate::linalg::solve(&basis_a, &ComplexMatrix::identity(m))
        .ok_or(RepError::GramMismatch { residual: f64::INFINITY })?;
    let u = basis_b.matmul(&inv);

    let unitarity_residual =
        u.adjoint().matmul(&u).sub(&ComplexMatrix::identity(m)).max_abs();
    let norm_scale = rep_a
        .atom_vectors()
        .iter()
        .map(|v| v.norm())
        .fold(1.0f64, f64::max);
    let mut intertwine_residual = 0.0f64;
    for i in 0..rep_a.atom_count() {
        let image = u.matvec(rep_a.atom_vector(i));
        intertwine_residual = intertwine_residual.max(image.sub(rep_b.atom_vector(i)).norm());
    }
    intertwine_residual /= norm_scale;
    // 10× headroom over the base tolerance: the residuals accumulate one
    // linear solve on top of the factorization noise.
    if unitarity_residual > 10.0 * tol.abs || intertwine_residual > 10.0 * tol.abs {
        return Err(RepError::VerificationFailed { unitarity_residual, intertwine_residual });
    }
    Ok(u)
}

/// Pivoted-Cholesky column selection: returns `count` indices whose
/// vectors are maximally independent, or `None` if the Gram rank is
/// smaller than `count`.
fn greedy_gram_pivots(gram: &ComplexMatrix, count: usize, tol: Tolerance) -> Option<Vec<usize>> {
    let n = gram.rows();
    let mut residual_diag: Vec<f64> = (0..n).map(|i| gram.get(i, i).re).collect();
    let floor = tol.rel * residual_diag.iter().cloned().fold(0.0f64, f64::max);
    let mut chol_cols: Vec<Vec<Complex64>> = Vec::new();
    let mut selected = Vec::with_capacity(count);
    for _ in 0..count {
        let pivot = (0..n)
            .filter(|i| !selected.contains(i))
            .max_by(|&a, &b| residual_diag[a].partial_cmp(&residual_diag[b]).unwrap())?;
        if residual_diag[pivot] <= floor {
            return None;
        }
        let scale = residual_diag[pivot].sqrt();
        let mut col = vec![Complex64::ZERO; n];
        for (i, slot) in col.iter_mut().enumerate() {
            let mut acc = gram.get(i, pivot);
            for prev in &chol_cols {
                acc -= prev[i] * prev[pivot].conj();
            }
            *slot = acc / scale;
        }
        for i in 0..n {
            residual_diag[i] = (residual_diag[i] - col[i].norm_sqr()).max(0.0);
        }
        selected.push(pivot);
        chol_cols.push(col);
    }
    Some(selected)
}

/// Randomized search for a unit vector `ψ` with `|⟨e_i, ψ⟩| ≥ floor·‖e_i‖`
/// for every nonzero `e_i`. Deterministic given the seed. Vectors with
/// `‖e_i‖ = 0` are exempt (the condition quantifies over nonzero atoms).
pub fn find_cyclic_vector(
    rep: &VectorRep,
    seed: u64,
    floor: f64,
    max_attempts: usize,
) -> Result<ComplexVector, RepError> {
    if rep.dim() == 0 {
        return Err(RepError::EmptyRep);
    }
    let mut rng = rng_from_seed(seed);
    for _ in 0..max_attempts {
        let psi = random_unit_vector(&mut rng, rep.dim());
        let ok = rep
            .atom_vectors()
            .iter()
            .all(|e| e.inner(&psi).norm() >= floor * e.norm());
        if ok {
            return Ok(psi);
        }
    }
    Err(RepError::SearchExhausted { attempts: max_attempts, floor })
}

/// Build the cyclic operator representation: Gram-factorize to get the
/// `e_i`, search for a cyclic `ψ`, then set `P_i = |e_i⟩⟨e_i| / ⟨ψ, e_i⟩`
/// so that `P_i ψ = e_i` exactly (the denominator is oriented to make the
/// representation identity hold without a spurious phase). Atoms whose
/// vector is negligible get `P_i = 0`.
pub fn build_operator_rep(
    d: &DecoherenceFunctional,
    seed: u64,
    tol: Tolerance,
) -> Result<OperatorRep, RepError> {
    let vrep = build_vector_rep(d, tol)?;
    let m = vrep.dim();
    let n = vrep.atom_count();
    if m == 0 {
        return Ok(OperatorRep {
            dim: 0,
            atom_operators: vec![ComplexMatrix::zeros(0, 0); n],
            psi: ComplexVector::zeros(0),
        });
    }
    let psi = find_cyclic_vector(&vrep, seed, DEFAULT_CYCLIC_FLOOR, DEFAULT_CYCLIC_ATTEMPTS)?;
    // ‖e_i‖² = D_ii; atoms below the noise floor become the zero operator
    // (the e_i = 0 branch of the construction).
    let max_norm_sqr = vrep.atom_vectors().iter().map(|v| v.norm_sqr()).fold(0.0f64, f64::max);
    let zero_gate = tol.abs * tol.abs * max_norm_sqr.max(1.0);
    let mut atom_operators = Vec::with_capacity(n);
    for e in vrep.atom_vectors() {
        if e.norm_sqr() <= zero_gate {
            atom_operators.push(ComplexMatrix::zeros(m, m));
            continue;
        }
        let denom = psi.inner(e); // ⟨ψ, e_i⟩, bounded below by the search floor
        atom_operators.push(e.outer(e).scale(denom.inv()));
    }
    Ok(OperatorRep { dim: m, atom_operators, psi })
}

/// Rank of `ℰ(A)` for every event, indexed by event mask. Equivalent
/// representations necessarily have identical profiles, so differing
/// profiles certify inequivalence.
pub fn rep_rank_profile(rep: &OperatorRep, tol: Tolerance) -> Vec<usize> {
    let n = rep.atom_count();
    assert!(n <= 20, "rank profile enumerates 2^n events");
    (0..(1u64 << n))
        .map(|mask| {
            let op = rep.event_operator(Event::from_mask(mask));
            operator_rank(&op, tol)
        })
        .collect()
}

/// Numerical rank of an arbitrary (not necessarily Hermitian) operator via
/// the PSD form `T*T`.
pub fn operator_rank(op: &ComplexMatrix, tol: Tolerance) -> usize {
    numerical_rank(&op.adjoint().matmul(op), tol).expect("T*T is Hermitian PSD by construction")
}

/// Singular values of an operator, descending, via eigenvalues of `T*T`.
fn singular_values(op: &ComplexMatrix, tol: Tolerance) -> Vec<f64> {
    let eig = hermitian_eigen(&op.adjoint().matmul(op), tol)
        .expect("T*T is Hermitian by construction");
    eig.eigenvalues.iter().map(|&lam| lam.max(0.0).sqrt()).collect()
}

/// One-sided equivalence certificate. `definitely_inequivalent = true` is
/// sound (backed by a unitary invariant that differs); `false` makes no
/// claim — deciding full unitary-orbit equivalence is out of scope.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceCertificate {
    pub definitely_inequivalent: bool,
    pub reason: Option<String>,
}

pub fn check_equivalence_certificate(
    rep_a: &OperatorRep,
    rep_b: &OperatorRep,
    tol: Tolerance,
) -> EquivalenceCertificate {
    if rep_a.atom_count() != rep_b.atom_count() {
        return EquivalenceCertificate {
            definitely_inequivalent: true,
            reason: Some(format!(
                "atom counts differ: {} vs {}",
                rep_a.atom_count(),
                rep_b.atom_count()
            )),
        };
    }
    if rep_a.dim() != rep_b.dim() {
        return EquivalenceCertificate {
            definitely_inequivalent: true,
            reason: Some(format!("ambient dimensions differ: {} vs {}", rep_a.dim(), rep_b.dim())),
        };
    }
    let profile_a = rep_rank_profile(rep_a, tol);
    let profile_b = rep_rank_profile(rep_b, tol);
    for mask in 0..profile_a.len() {
        if profile_a[mask] != profile_b[mask] {
            return EquivalenceCertificate {
                definitely_inequivalent: true,
                reason: Some(format!(
                    "rank of the event operator at mask {mask:#b} differs: {} vs {}",
                    profile_a[mask], profile_b[mask]
                )),
            };
        }
    }
    // Singular values are roots of T*T eigenvalues, so their noise floor is
    // the square root of the eigen-solver's; compare at √tol.
    let sigma_gate = tol.rel.sqrt();
    for mask in 0..(1u64 << rep_a.atom_count()) {
        let sa = singular_values(&rep_a.event_operator(Event::from_mask(mask)), tol);
        let sb = singular_values(&rep_b.event_operator(Event::from_mask(mask)), tol);
        let scale = sa.first().copied().unwrap_or(0.0).max(1.0);
        for (x, y) in sa.iter().zip(&sb) {
            if (x - y).abs() > sigma_gate * scale {
                return EquivalenceCertificate {
                    definitely_inequivalent: true,
                    reason: Some(format!(
                        "singular values of the event operator at mask {mask:#b} differ: \
                         {x:.6} vs {y:.6}"
                    )),
                };
            }
        }
    }
    EquivalenceCertificate { definitely_inequivalent: false, reason: None }
}

/// A representation family for the history-space analysis.
pub enum RepFamily<'a> {
    Vector(&'a VectorRep),
    Operator(&'a OperatorRep),
}

/// Outcome of the natural-map analysis: the dimension of the event-indexed
/// Gram space `K`, the orthogonal projector onto the representation's
/// actual span inside its ambient space, and whether the natural map
/// `K → H` is unitary (⇔ the representation is spanning/cyclic).
#[derive(Debug, Clone, PartialEq)]
pub struct HistorySpaceAnalysis {
    pub dim_k: usize,
    pub projector: ComplexMatrix,
    pub natural_map_unitary: bool,
}

/// Analyze the history space of a functional relative to a representation.
///
/// `dim_K` is the rank of the full event Gram matrix `[D(A,B)]` — equal to
/// the atom-matrix rank, which is how it is computed for spaces too large
/// to materialize a 2ⁿ-sided Gram (n > 10).
pub fn analyze_history_space(
    d: &DecoherenceFunctional,
    rep: RepFamily<'_>,
    tol: Tolerance,
) -> Result<HistorySpaceAnalysis, RepError> {
    let (ambient, vectors): (usize, Vec<ComplexVector>) = match rep {
        RepFamily::Vector(v) => (v.dim(), v.atom_vectors().to_vec()),
        RepFamily::Operator(o) => {
            (o.dim(), (0..o.atom_count()).map(|i| o.atom_operators()[i].matvec(o.psi())).collect())
        }
    };
    let scale = d.atom_matrix().max_abs().max(1.0);
    let residual = gram_matrix(&vectors).sub(d.atom_matrix()).max_abs();
    if residual > tol.abs * scale {
        return Err(RepError::RepMismatch { residual });
    }

    let n = d.n();
    let dim_k = if n <= 10 {
        let side = 1usize << n;
        let mut event_gram = ComplexMatrix::zeros(side, side);
        for a in 0..side {
            for b in 0..side {
                event_gram.set(a, b, eval_masks(d.atom_matrix(), a as u64, b as u64));
            }
        }
        numerical_rank(&event_gram, tol)?
    } else {
        numerical_rank(d.atom_matrix(), tol)?
    };

    // Span projector: eigenvectors of Σ|v_i⟩⟨v_i| above the rank cutoff.
    let mut outer_sum = ComplexMatrix::zeros(ambient, ambient);
    for v in &vectors {
        outer_sum = outer_sum.add(&v.outer(v));
    }
    let eig = hermitian_eigen(&outer_sum, tol)?;
    let cutoff = tol.rel * eig.eigenvalues.first().copied().unwrap_or(0.0);
    let kept: Vec<usize> =
        (0..ambient).filter(|&k| eig.eigenvalues[k] > cutoff && eig.eigenvalues[k] > 0.0).collect();
    let mut projector = ComplexMatrix::zeros(ambient, ambient);
    for &k in &kept {
        let q = eig.eigenvectors.col(k);
        projector = projector.add(&q.outer(&q));
    }
    let span_dim = kept.len();
    debug_assert_eq!(span_dim, dim_k, "span of a faithful representation has dimension dim_K");
    Ok(HistorySpaceAnalysis {
        dim_k,
        projector,
        natural_map_unitary: span_dim == ambient,
    })
}
