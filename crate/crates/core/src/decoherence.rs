//! Decoherence functionals on finite sample spaces: validation against the
//! three axioms, biadditive extension from the atom matrix to all event
//! pairs, and the classicality classification.
//!
//! A finite functional is stored *only* through its atom matrix
//! `M_ij = D(ω_i, ω_j)`; additivity in each slot forces
//! `D(A, B) = Σ_{ω_i∈A, ω_j∈B} M_ij`, so the full 2ⁿ×2ⁿ table is always
//! derived, never stored. The axioms become: `M` Hermitian, `M` PSD, and —
//! when normalization is asserted — `Σ_ij M_ij = 1`.

use num_complex::Complex64;
use thiserror::Error;

use crate::event::{Event, EventError, EventSpace, DEFAULT_MAX_ATOMS};
use crate::linalg::{gram_matrix, hermitian_eigen, ComplexMatrix, Tolerance};
use crate::rep::VectorRep;

/// One violated axiom with numeric evidence.
#[derive(Debug, Clone, PartialEq)]
pub enum AxiomViolation {
    /// `max |M_ij − conj(M_ji)|` exceeded the tolerance.
    NotHermitian { residual: f64 },
    /// Some family matrix has a genuinely negative eigenvalue; on a finite
    /// space the atom matrix is the decisive family.
    NotPsd { min_eigenvalue: f64 },
    /// Normalization was asserted but `Σ_ij M_ij ≠ 1`.
    NotNormalized { total: Complex64 },
}

impl std::fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AxiomViolation::NotHermitian { residual } => {
                write!(f, "atom matrix is not Hermitian (residual {residual:.3e})")
            }
            AxiomViolation::NotPsd { min_eigenvalue } => {
                write!(f, "atom matrix is not PSD (min eigenvalue {min_eigenvalue:.6e})")
            }
            AxiomViolation::NotNormalized { total } => {
                write!(f, "total mass is {:.12}+{:.12}i, expected 1", total.re, total.im)
            }
        }
    }
}

/// Validation error carrying *every* violated axiom, not just the first.
#[derive(Debug, Clone, Error, PartialEq)]
pub struct ValidationFailure {
    pub violations: Vec<AxiomViolation>,
}

impl std::fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invalid decoherence functional: ")?;
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum DecoherenceError {
    #[error("atom matrix is {rows}x{cols}, expected {expected}x{expected}")]
    ShapeMismatch { expected: usize, rows: usize, cols: usize },
    #[error(transparent)]
    Event(#[from] EventError),
    #[error(transparent)]
    Invalid(#[from] ValidationFailure),
    #[error(
        "event table is not biadditive at events {a:#b}, {b:#b}: residual {residual:.3e}"
    )]
    BiadditivityViolation { a: u64, b: u64, residual: f64 },
    #[error("representation does not reproduce the functional: residual {residual:.3e}")]
    RepMismatch { residual: f64 },
}

/// A validated finite decoherence functional.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoherenceFunctional {
    space: EventSpace,
    atom_matrix: ComplexMatrix,
    normalized: bool,
}

/// Outcome of the classicality classification.
///
/// `classical` means `D(A, B) = 0` for all disjoint pairs — equivalently,
/// the atom matrix is diagonal. `weakly_classical` requires it only of the
/// real part. `witness` is a disjoint singleton pair showing the failure of
/// the strongest property that fails; `recovered_measure` is the dense
/// table `μ(A) = D(A, A)` present when the functional is classical (and the
/// space small enough for a 2ⁿ table).
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalityVerdict {
    pub classical: bool,
    pub weakly_classical: bool,
    pub witness: Option<(Event, Event)>,
    pub recovered_measure: Option<Vec<f64>>,
}

impl DecoherenceFunctional {
    /// Validate an atom matrix against the axioms and construct the
    /// functional. The error lists every violated axiom with evidence.
    ///
    /// Hermitian within `tol.abs` is required (larger asymmetry is treated
    /// as a modeling bug, not noise); PSD is gated relatively at
    /// `−tol.rel·max(1, λ_max)`; normalization, when asserted, requires
    /// `|Σ_ij M_ij − 1| ≤ tol.abs`.
    pub fn validate(
        space: EventSpace,
        atom_matrix: ComplexMatrix,
        normalized: bool,
        tol: Tolerance,
    ) -> Result<Self, DecoherenceError> {
        let n = space.n();
        if atom_matrix.rows() != n || atom_matrix.cols() != n {
            return Err(DecoherenceError::ShapeMismatch {
                expected: n,
                rows: atom_matrix.rows(),
                cols: atom_matrix.cols(),
            });
        }
        let mut violations = Vec::new();
        let residual = atom_matrix.hermitian_residual().expect("square by construction");
        if residual > tol.abs {
            violations.push(AxiomViolation::NotHermitian { residual });
        } else {
            // PSD is only decidable once the matrix is (numerically) Hermitian.
            let eig = hermitian_eigen(&atom_matrix, tol).expect("checked Hermitian");
            if let (Some(&max), Some(&min)) = (eig.eigenvalues.first(), eig.eigenvalues.last()) {
                if min < -tol.rel * max.max(1.0) {
                    violations.push(AxiomViolation::NotPsd { min_eigenvalue: min });
                }
            }
        }
        if normalized {
            let total = atom_matrix.entry_sum();
            if (total - Complex64::ONE).norm() > tol.abs {
                violations.push(AxiomViolation::NotNormalized { total });
            }
        }
        if violations.is_empty() {
            Ok(DecoherenceFunctional { space, atom_matrix, normalized })
        } else {
            Err(ValidationFailure { violations }.into())
        }
    }

    /// Ingestion path for full 2ⁿ×2ⁿ event tables (indexed by event mask):
    /// checks that the table is biadditive — i.e. every entry equals the
    /// atom-level sum it should be — then collapses to atoms and validates.
    pub fn from_event_table(
        space: EventSpace,
        table: &[Vec<Complex64>],
        normalized: bool,
        tol: Tolerance,
    ) -> Result<Self, DecoherenceError> {
        let n = space.n();
        let side = space.event_count();
        if table.len() != side || table.iter().any(|row| row.len() != side) {
            return Err(DecoherenceError::ShapeMismatch {
                expected: side,
                rows: table.len(),
                cols: table.first().map_or(0, |r| r.len()),
            });
        }
        let mut atoms = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                atoms.set(i, j, table[1usize << i][1usize << j]);
            }
        }
        let scale = table
            .iter()
            .flat_map(|row| row.iter())
            .map(|z| z.norm())
            .fold(1.0f64, f64::max);
        for (am, row) in table.iter().enumerate() {
            for (bm, &entry) in row.iter().enumerate() {
                let expect = eval_masks(&atoms, am as u64, bm as u64);
                let residual = (entry - expect).norm();
                if residual > tol.abs * scale {
                    return Err(DecoherenceError::BiadditivityViolation {
                        a: am as u64,
                        b: bm as u64,
                        residual,
                    });
                }
            }
        }
        Self::validate(space, atoms, normalized, tol)
    }

    pub fn space(&self) -> &EventSpace {
        &self.space
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn atom_matrix(&self) -> &ComplexMatrix {
        &self.atom_matrix
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// `D(A, B) = Σ_{ω_i∈A, ω_j∈B} M_ij`. `evaluate(∅, B) = 0`.
    pub fn evaluate(&self, a: Event, b: Event) -> Result<Complex64, DecoherenceError> {
        self.space.check_event(a)?;
        self.space.check_event(b)?;
        Ok(eval_masks(&self.atom_matrix, a.mask(), b.mask()))
    }

    /// The diagonal q-measure `μ(A) = D(A, A)`, real for Hermitian atoms.
    pub fn diagonal_measure(&self, a: Event) -> Result<f64, DecoherenceError> {
        Ok(self.evaluate(a, a)?.re)
    }

    /// Classify classicality. The decision is O(n²) at the atom level
    /// (diagonality of `M`, resp. of `Re M`); on small spaces the
    /// equivalent event-level identities are re-verified as internal
    /// consistency assertions, not as the decision procedure.
    pub fn classify_classicality(&self, tol: Tolerance) -> ClassicalityVerdict {
        let n = self.n();
        let gate = tol.abs * self.atom_matrix.max_abs().max(1.0);
        let mut worst_full = 0.0f64;
        let mut worst_real = 0.0f64;
        let mut witness_pair = None;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let entry = self.atom_matrix.get(i, j);
                if entry.norm() > worst_full {
                    worst_full = entry.norm();
                    // Witness events are only expressible in spaces small
                    // enough for bitmask events (oversized history spaces
                    // still get the verdict, just no event pair).
                    witness_pair = if n <= 64 {
                        Some((Event::singleton(i), Event::singleton(j)))
                    } else {
                        None
                    };
                }
                worst_real = worst_real.max(entry.re.abs());
            }
        }
        let classical = worst_full <= gate;
        let weakly_classical = worst_real <= gate;
        let witness = if classical { None } else { witness_pair };
        let recovered_measure = if classical && n <= DEFAULT_MAX_ATOMS {
            Some(
                self.space
                    .events()
                    .map(|a| eval_masks(&self.atom_matrix, a.mask(), a.mask()).re)
                    .collect(),
            )
        } else {
            None
        };
        if n <= 10 {
            debug_assert_eq!(self.disjoint_pairs_vanish(tol).0, classical);
            debug_assert_eq!(self.real_part_identity_holds(tol), weakly_classical);
            debug_assert!(!classical || self.intersection_identity_holds(tol));
        }
        ClassicalityVerdict { classical, weakly_classical, witness, recovered_measure }
    }

    /// Event-level form of the classicality criterion: `D(A, B) = 0` for
    /// every disjoint pair. Returns the verdict and a worst witness.
    pub fn disjoint_pairs_vanish(&self, tol: Tolerance) -> (bool, Option<(Event, Event)>) {
        let gate = tol.abs * self.atom_matrix.max_abs().max(1.0);
        let mut worst = 0.0f64;
        let mut witness = None;
        for a in self.space.events() {
            for b in disjoint_partners(a, self.space.full()) {
                let v = eval_masks(&self.atom_matrix, a.mask(), b.mask()).norm();
                if v > worst {
                    worst = v;
                    witness = Some((a, b));
                }
            }
        }
        if worst <= gate {
            (true, None)
        } else {
            (false, witness)
        }
    }

    /// Event-level form of weak classicality:
    /// `Re D(A, B) = μ(A∩B)` for all pairs, with `μ(X) = Re D(X, X)`.
    pub fn real_part_identity_holds(&self, tol: Tolerance) -> bool {
        let gate = tol.abs * self.atom_matrix.max_abs().max(1.0);
        for a in self.space.events() {
            for b in self.space.events() {
                let lhs = eval_masks(&self.atom_matrix, a.mask(), b.mask()).re;
                let cap = a.intersect(b);
                let rhs = eval_masks(&self.atom_matrix, cap.mask(), cap.mask()).re;
                if (lhs - rhs).abs() > gate {
                    return false;
                }
            }
        }
        true
    }

    /// Event-level identity characterizing classicality:
    /// `D(A, B) = D(A∩B, A∩B)` for all pairs.
    pub fn intersection_identity_holds(&self, tol: Tolerance) -> bool {
        let gate = tol.abs * self.atom_matrix.max_abs().max(1.0);
        for a in self.space.events() {
            for b in self.space.events() {
                let lhs = eval_masks(&self.atom_matrix, a.mask(), b.mask());
                let cap = a.intersect(b);
                let rhs = eval_masks(&self.atom_matrix, cap.mask(), cap.mask());
                if (lhs - rhs).norm() > gate {
                    return false;
                }
            }
        }
        true
    }

    /// True iff `⟨ℰ(A), ℰ(B)⟩ = 0` within tolerance for every disjoint
    /// pair of the given representation. Errors if the representation does
    /// not reproduce this functional. Classicality is representation-
    /// independent, so the result must (and does) agree with
    /// [`classify_classicality`] — that agreement is an acceptance-tested
    /// invariant rather than assumed here.
    pub fn orthogonality_profile(
        &self,
        rep: &VectorRep,
        tol: Tolerance,
    ) -> Result<bool, DecoherenceError> {
        let gram = gram_matrix(rep.atom_vectors());
        let residual = gram.sub(&self.atom_matrix).max_abs();
        let scale = self.atom_matrix.max_abs().max(1.0);
        if residual > tol.abs * scale {
            return Err(DecoherenceError::RepMismatch { residual });
        }
        let gate = tol.abs * scale;
        let vectors: Vec<_> = self.space.events().map(|a| rep.event_vector(a)).collect();
        for a in self.space.events() {
            for b in disjoint_partners(a, self.space.full()) {
                let ip = vectors[a.mask() as usize].inner(&vectors[b.mask() as usize]);
                if ip.norm() > gate {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Biadditive extension at the mask level (no range checks; callers have
/// validated the events).
pub(crate) fn eval_masks(atoms: &ComplexMatrix, a: u64, b: u64) -> Complex64 {
    let mut acc = Complex64::ZERO;
    let n = atoms.rows();
    for i in 0..n {
        if a >> i & 1 == 0 {
            continue;
        }
        for j in 0..n {
            if b >> j & 1 == 1 {
                acc += atoms.get(i, j);
            }
        }
    }
    acc
}

/// Events disjoint from `a` within the ground set.
fn disjoint_partners(a: Event, full: Event) -> impl Iterator<Item = Event> {
    let rest = full.minus(a).mask();
    // Carry-rippler over the complement of `a`.
    let mut current = Some(0u64);
    std::iter::from_fn(move || {
        let out = current?;
        let next = out.wrapping_sub(rest) & rest;
        current = if next == 0 { None } else { Some(next) };
        Some(Event::from_mask(out))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::build_vector_rep;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn space(n: usize) -> EventSpace {
        EventSpace::new((0..n).map(|i| format!("w{i}")).collect()).unwrap()
    }

    /// Two-atom functional with atoms (1/5)·[[1,1],[1,2]].
    fn fixture() -> DecoherenceFunctional {
        let atoms = ComplexMatrix::from_real_rows(&[vec![0.2, 0.2], vec![0.2, 0.4]]);
        DecoherenceFunctional::validate(space(2), atoms, true, tol()).unwrap()
    }

    #[test]
    fn fixture_event_values() {
        let d = fixture();
        let omega = d.space().full();
        let w1 = Event::singleton(0);
        let w2 = Event::singleton(1);
        assert!((d.evaluate(omega, w1).unwrap() - c(0.4, 0.0)).norm() < 1e-12);
        assert!((d.evaluate(w1, omega).unwrap() - c(0.4, 0.0)).norm() < 1e-12);
        assert!((d.evaluate(omega, w2).unwrap() - c(0.6, 0.0)).norm() < 1e-12);
        assert!((d.evaluate(omega, omega).unwrap() - c(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(d.evaluate(Event::EMPTY, omega).unwrap(), Complex64::ZERO);
    }

    #[test]
    fn evaluate_rejects_out_of_range_events() {
        let d = fixture();
        let bad = Event::from_members(&[3]);
        assert!(matches!(
            d.evaluate(bad, Event::EMPTY),
            Err(DecoherenceError::Event(EventError::EventOutOfRange { .. }))
        ));
    }

    #[test]
    fn evaluate_is_biadditive_and_conjugate_symmetric() {
        let mut rng = crate::sampling::rng_from_seed(41);
        for _ in 0..25 {
            let d = crate::sampling::random_functional(&mut rng, 4, false);
            let full = d.space().full();
            for a in d.space().events() {
                for b in d.space().events() {
                    let dab = d.evaluate(a, b).unwrap();
                    let dba = d.evaluate(b, a).unwrap();
                    assert!((dab - dba.conj()).norm() < 1e-12);
                }
            }
            for a in d.space().events() {
                for b in disjoint_partners(a, full) {
                    for cx in d.space().events() {
                        let joint = d.evaluate(a.union(b), cx).unwrap();
                        let split =
                            d.evaluate(a, cx).unwrap() + d.evaluate(b, cx).unwrap();
                        assert!((joint - split).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn validate_accepts_amplitude_functionals() {
        let mut rng = crate::sampling::rng_from_seed(42);
        for n in 2..=5 {
            let raw = crate::sampling::random_complex_measure(&mut rng, n);
            let total: Complex64 = raw.iter().sum();
            let nu: Vec<Complex64> = raw.iter().map(|z| z / total).collect();
            let mut atoms = ComplexMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    atoms.set(i, j, nu[i] * nu[j].conj());
                }
            }
            let d = DecoherenceFunctional::validate(space(n), atoms, true, tol()).unwrap();
            assert!(d.is_normalized());
        }
    }

    #[test]
    fn validate_rejects_indefinite_matrix() {
        let atoms = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        match DecoherenceFunctional::validate(space(2), atoms, false, tol()) {
            Err(DecoherenceError::Invalid(failure)) => {
                assert_eq!(failure.violations.len(), 1);
                assert!(matches!(
                    failure.violations[0],
                    AxiomViolation::NotPsd { min_eigenvalue } if (min_eigenvalue + 1.0).abs() < 1e-9
                ));
            }
            other => panic!("expected validation failure, got {other:?}"),
        }
    }

    #[test]
    fn validate_collects_multiple_violations() {
        // Indefinite and, with mass 2, not normalized either.
        let atoms = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        match DecoherenceFunctional::validate(space(2), atoms, true, tol()) {
            Err(DecoherenceError::Invalid(failure)) => {
                assert_eq!(failure.violations.len(), 2);
                assert!(matches!(failure.violations[0], AxiomViolation::NotPsd { .. }));
                assert!(matches!(
                    failure.violations[1],
                    AxiomViolation::NotNormalized { total } if (total.re - 2.0).abs() < 1e-12
                ));
            }
            other => panic!("expected two violations, got {other:?}"),
        }
    }

    #[test]
    fn validate_rejects_non_hermitian_before_psd() {
        let atoms = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.5, 0.0)],
            vec![c(0.1, 0.0), c(1.0, 0.0)],
        ]);
        match DecoherenceFunctional::validate(space(2), atoms, false, tol()) {
            Err(DecoherenceError::Invalid(failure)) => {
                assert_eq!(failure.violations.len(), 1);
                assert!(matches!(failure.violations[0], AxiomViolation::NotHermitian { .. }));
            }
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn uniform_diagonal_is_valid_and_normalized() {
        let n = 4;
        let atoms = ComplexMatrix::identity(n).scale(c(1.0 / n as f64, 0.0));
        let d = DecoherenceFunctional::validate(space(n), atoms, true, tol()).unwrap();
        assert!((d.evaluate(d.space().full(), d.space().full()).unwrap().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn classify_diagonal_as_classical_with_additive_measure() {
        let weights = [0.1, 0.2, 0.3, 0.4];
        let atoms =
            ComplexMatrix::diagonal(&weights.iter().map(|&p| c(p, 0.0)).collect::<Vec<_>>());
        let d = DecoherenceFunctional::validate(space(4), atoms, true, tol()).unwrap();
        let verdict = d.classify_classicality(tol());
        assert!(verdict.classical && verdict.weakly_classical);
        assert!(verdict.witness.is_none());
        let table = verdict.recovered_measure.unwrap();
        for a in d.space().events() {
            let expect: f64 = a.members().map(|i| weights[i]).sum();
            assert!((table[a.mask() as usize] - expect).abs() < 1e-12);
            for b in disjoint_partners(a, d.space().full()) {
                let additive = table[a.mask() as usize] + table[b.mask() as usize];
                assert!((table[a.union(b).mask() as usize] - additive).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn classify_imaginary_offdiagonal_as_weakly_classical_only() {
        let atoms = ComplexMatrix::from_rows(&[
            vec![c(0.5, 0.0), c(0.0, 0.5)],
            vec![c(0.0, -0.5), c(0.5, 0.0)],
        ]);
        let d = DecoherenceFunctional::validate(space(2), atoms, true, tol()).unwrap();
        let verdict = d.classify_classicality(tol());
        assert!(!verdict.classical);
        assert!(verdict.weakly_classical);
        assert!(verdict.witness.is_some());
        assert!(verdict.recovered_measure.is_none());
        // Brute-force the real-part identity over all 16 event pairs.
        for a in d.space().events() {
            for b in d.space().events() {
                let lhs = d.evaluate(a, b).unwrap().re;
                let cap = a.intersect(b);
                let rhs = d.evaluate(cap, cap).unwrap().re;
                assert!((lhs - rhs).abs() < 1e-12, "a={:?} b={:?}", a, b);
            }
        }
    }

    #[test]
    fn classify_fixture_as_neither() {
        let verdict = fixture().classify_classicality(tol());
        assert!(!verdict.classical);
        assert!(!verdict.weakly_classical);
        let (a, b) = verdict.witness.unwrap();
        assert!(a.is_disjoint(b));
        assert_eq!(a.size(), 1);
        assert_eq!(b.size(), 1);
    }

    #[test]
    fn classification_is_permutation_covariant() {
        let mut rng = crate::sampling::rng_from_seed(43);
        for _ in 0..20 {
            let d = crate::sampling::random_functional(&mut rng, 4, false);
            let n = d.n();
            // Reverse relabeling is permutation enough to catch index bugs.
            let mut permuted = ComplexMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    permuted.set(n - 1 - i, n - 1 - j, d.atom_matrix().get(i, j));
                }
            }
            let dp = DecoherenceFunctional::validate(space(n), permuted, false, tol()).unwrap();
            let v1 = d.classify_classicality(tol());
            let v2 = dp.classify_classicality(tol());
            assert_eq!(v1.classical, v2.classical);
            assert_eq!(v1.weakly_classical, v2.weakly_classical);
        }
    }

    #[test]
    fn orthogonality_profile_matches_classicality() {
        let mut rng = crate::sampling::rng_from_seed(44);
        // Constructed classical case.
        let diag = ComplexMatrix::diagonal(&[c(0.5, 0.0), c(0.5, 0.0)]);
        let d = DecoherenceFunctional::validate(space(2), diag, true, tol()).unwrap();
        let rep = build_vector_rep(&d, tol()).unwrap();
        assert!(d.orthogonality_profile(&rep, tol()).unwrap());
        // The interference fixture is not classical.
        let d = fixture();
        let rep = build_vector_rep(&d, tol()).unwrap();
        assert!(!d.orthogonality_profile(&rep, tol()).unwrap());
        // Random functionals: profile must agree with the atom-level verdict.
        for _ in 0..100 {
            let d = crate::sampling::random_functional(&mut rng, 4, false);
            let rep = build_vector_rep(&d, tol()).unwrap();
            let profile = d.orthogonality_profile(&rep, tol()).unwrap();
            assert_eq!(profile, d.classify_classicality(tol()).classical);
        }
    }

    #[test]
    fn orthogonality_profile_rejects_foreign_rep() {
        let d = fixture();
        let other = DecoherenceFunctional::validate(
            space(2),
            ComplexMatrix::identity(2).scale(c(0.5, 0.0)),
            true,
            tol(),
        )
        .unwrap();
        let rep = build_vector_rep(&other, tol()).unwrap();
        assert!(matches!(
            d.orthogonality_profile(&rep, tol()),
            Err(DecoherenceError::RepMismatch { .. })
        ));
    }

    #[test]
    fn event_table_ingestion_roundtrip() {
        let d = fixture();
        let side = d.space().event_count();
        let mut table = vec![vec![Complex64::ZERO; side]; side];
        for a in d.space().events() {
            for b in d.space().events() {
                table[a.mask() as usize][b.mask() as usize] = d.evaluate(a, b).unwrap();
            }
        }
        let rebuilt =
            DecoherenceFunctional::from_event_table(space(2), &table, true, tol()).unwrap();
        assert!(rebuilt.atom_matrix().sub(d.atom_matrix()).max_abs() < 1e-12);

        table[3][3] = c(0.9, 0.0); // breaks biadditivity at (Ω, Ω)
        match DecoherenceFunctional::from_event_table(space(2), &table, true, tol()) {
            Err(DecoherenceError::BiadditivityViolation { a: 3, b: 3, residual }) => {
                assert!((residual - 0.1).abs() < 1e-12);
            }
            other => panic!("expected biadditivity violation, got {other:?}"),
        }
    }
}
