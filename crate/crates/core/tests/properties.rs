//! Property tests for the combinatorial and algebraic invariants:
//! event algebra laws, index round-trips, and the identities every
//! Gram-form q-measure must satisfy regardless of the generating
//! vectors. Inputs are small integer-valued objects so the float
//! assertions sit far above solver noise.

use decoh::event::{delta, grade2_check, grade2_pairwise_check, interference};
use decoh::history::HistoryScenario;
use decoh::linalg::{gram_factorize, gram_matrix, hermitian_eigen};
use decoh::qmeasure::{pair_reconstruction_identity, strong_positivity};
use decoh::sampling::qmeasure_from_vectors;
use decoh::{ComplexMatrix, ComplexVector, Event, EventSpace, QMeasure, Tolerance};
use num_complex::Complex64;
use proptest::prelude::*;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn space(n: usize) -> EventSpace {
    EventSpace::new((0..n).map(|i| format!("w{i}")).collect()).expect("small space")
}

/// Strategy: an atom count and two event masks within the space.
fn space_and_masks() -> impl Strategy<Value = (usize, u64, u64)> {
    (1usize..=10).prop_flat_map(|n| {
        let full = (1u64 << n) - 1;
        (Just(n), 0..=full, 0..=full)
    })
}

/// Strategy: `n` integer-valued complex vectors of one dimension.
fn integer_vectors() -> impl Strategy<Value = Vec<ComplexVector>> {
    (1usize..=5, 1usize..=4).prop_flat_map(|(n, dim)| {
        proptest::collection::vec(
            proptest::collection::vec((-3i32..=3, -3i32..=3), dim),
            n,
        )
        .prop_map(|rows| {
            rows.into_iter()
                .map(|row| {
                    ComplexVector::new(
                        row.into_iter()
                            .map(|(re, im)| Complex64::new(f64::from(re), f64::from(im)))
                            .collect(),
                    )
                })
                .collect()
        })
    })
}

/// Strategy: a small Hermitian matrix with integer-valued entries.
fn integer_hermitian() -> impl Strategy<Value = ComplexMatrix> {
    (1usize..=5)
        .prop_flat_map(|n| {
            proptest::collection::vec(
                proptest::collection::vec((-3i32..=3, -3i32..=3), n),
                n,
            )
        })
        .prop_map(|rows| {
            let n = rows.len();
            let mut m = ComplexMatrix::zeros(n, n);
            for (r, row) in rows.iter().enumerate() {
                for (c, &(re, im)) in row.iter().enumerate() {
                    m.set(r, c, Complex64::new(f64::from(re), f64::from(im)));
                }
            }
            // Symmetrize: H = (M + M*) / 2 is Hermitian for any M.
            m.add(&m.adjoint()).scale(Complex64::new(0.5, 0.0))
        })
}

proptest! {
    #[test]
    fn event_algebra_satisfies_de_morgan((n, a, b) in space_and_masks()) {
        let (a, b) = (Event::from_mask(a), Event::from_mask(b));
        let lhs = a.union(b).complement(n);
        let rhs = a.complement(n).intersect(b.complement(n));
        prop_assert_eq!(lhs, rhs);
        let lhs = a.intersect(b).complement(n);
        let rhs = a.complement(n).union(b.complement(n));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn event_sizes_obey_inclusion_exclusion((_, a, b) in space_and_masks()) {
        let (a, b) = (Event::from_mask(a), Event::from_mask(b));
        prop_assert_eq!(
            a.union(b).size() + a.intersect(b).size(),
            a.size() + b.size()
        );
        let sym = a.sym_diff(b);
        prop_assert_eq!(sym, a.minus(b).union(b.minus(a)));
        prop_assert!(a.minus(b).is_disjoint(b));
    }

    #[test]
    fn event_rebuilds_from_its_members((_, a, _) in space_and_masks()) {
        let a = Event::from_mask(a);
        let members: Vec<usize> = a.members().collect();
        prop_assert_eq!(Event::from_members(&members), a);
        prop_assert_eq!(members.len(), a.size());
    }

    #[test]
    fn history_index_round_trips(
        sites in 1usize..=4,
        times in 2usize..=5,
        pick in 0usize..1_000_000,
    ) {
        let steps = vec![ComplexMatrix::identity(sites); times - 1];
        let state = ComplexVector::basis(sites, 0);
        let scenario = HistoryScenario::new(sites, times, steps, state, tol())
            .expect("identity scenario is valid");
        let index = pick % scenario.history_count();
        let omega = scenario.history_from_index(index);
        prop_assert_eq!(omega.len(), times);
        prop_assert_eq!(scenario.history_index(&omega), index);
    }

    #[test]
    fn gram_qmeasures_are_grade2_additive_in_both_forms(vectors in integer_vectors()) {
        let mu = qmeasure_from_vectors(space(vectors.len()), &vectors);
        let triple = grade2_check(&mu, tol());
        prop_assert!(triple.holds, "worst violation {}", triple.worst_violation);
        let pair = grade2_pairwise_check(&mu, tol());
        prop_assert!(pair.holds, "worst violation {}", pair.worst_violation);
    }

    #[test]
    fn gram_qmeasures_are_strongly_positive(vectors in integer_vectors()) {
        let mu = qmeasure_from_vectors(space(vectors.len()), &vectors);
        let verdict = strong_positivity(&mu, tol()).expect("Gram measures are grade-2");
        prop_assert!(
            verdict.strongly_positive,
            "min eigenvalue {:?}",
            verdict.atom_eigenvalues.last()
        );
    }

    #[test]
    fn pair_reconstruction_holds_on_every_event(vectors in integer_vectors()) {
        let mu = qmeasure_from_vectors(space(vectors.len()), &vectors);
        for event in mu.space().events() {
            let verdict = pair_reconstruction_identity(&mu, event, tol());
            prop_assert!(
                verdict.holds,
                "event {:#b}: lhs {} rhs {}",
                event.mask(),
                verdict.lhs,
                verdict.rhs
            );
        }
    }

    #[test]
    fn interference_decomposes_pair_masses(vectors in integer_vectors()) {
        // μ({i, j}) = μ({i}) + μ({j}) + I_ij, and the halved decoherence
        // matrix is exactly the Gram matrix of the generating vectors'
        // real inner products.
        let mu = qmeasure_from_vectors(space(vectors.len()), &vectors);
        let data = interference(&mu);
        let gram = gram_matrix(&vectors);
        for i in 0..mu.n() {
            for j in 0..mu.n() {
                prop_assert!((data.decoherence(i, j) - gram.get(i, j).re).abs() < 1e-9);
                let a = Event::singleton(i);
                let b = Event::singleton(j);
                prop_assert!((delta(&mu, a, b) - data.decoherence(i, j)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn eigendecomposition_reconstructs_hermitian_matrices(m in integer_hermitian()) {
        let eigen = hermitian_eigen(&m, tol()).expect("input is Hermitian");
        let residual = eigen.reconstruct().sub(&m).max_abs();
        prop_assert!(residual < 1e-9, "reconstruction residual {residual}");
        // Eigenvalues are reported in descending order.
        for pair in eigen.eigenvalues.windows(2) {
            prop_assert!(pair[0] >= pair[1]);
        }
    }

    #[test]
    fn gram_factorization_reproduces_psd_matrices(vectors in integer_vectors()) {
        // A Gram matrix of explicit vectors is PSD by construction; its
        // factorization must reproduce it entrywise.
        let gram = gram_matrix(&vectors);
        let factors = gram_factorize(&gram, tol()).expect("Gram matrices are PSD");
        prop_assert_eq!(factors.len(), vectors.len());
        let residual = gram_matrix(&factors).sub(&gram).max_abs();
        prop_assert!(residual < 1e-9, "factorization residual {residual}");
    }

    #[test]
    fn qmeasure_tables_round_trip_through_events(vectors in integer_vectors()) {
        let mu = qmeasure_from_vectors(space(vectors.len()), &vectors);
        // Event values match the explicit ‖Σ_{i∈A} v_i‖² they encode.
        for event in mu.space().events() {
            let dim = vectors[0].dim();
            let mut sum = ComplexVector::zeros(dim);
            for i in event.members() {
                sum = sum.add(&vectors[i]);
            }
            prop_assert!((mu.value(event) - sum.norm_sqr()).abs() < 1e-9);
        }
    }
}

/// Separate non-proptest regression: the default `QMeasure` caps reject
/// oversized tables instead of allocating them.
#[test]
fn qmeasure_rejects_wrong_length_tables() {
    let err = QMeasure::new(space(2), vec![0.0; 3]).unwrap_err();
    assert!(err.to_string().contains("expected 2^2"), "{err}");
}
