//! Validation, representation, and classification of finite decoherence
//! functionals and quantum measures.
//!
//! A decoherence functional assigns a complex number `D(A, B)` to every pair
//! of events over a finite sample space, subject to three axioms:
//! normalization (`D(Ω, Ω) = 1`), additivity in each slot, and positive
//! semi-definiteness of every matrix `[D(A_i, A_j)]`. On a finite space the
//! whole functional is determined by its atom matrix `M_ij = D(ω_i, ω_j)`,
//! which must be Hermitian and PSD.
//!
//! The crate provides:
//!
//! - [`linalg`]: dense complex vectors/matrices with explicit numerical
//!   contracts (Hermitian eigendecomposition, PSD tests, numerical rank,
//!   Gram factorization, unitarity tests);
//! - [`event`]: finite sample spaces, bitmask events, q-measure tables and
//!   their grade-2 additivity / interference combinatorics;
//! - [`decoherence`]: the [`DecoherenceFunctional`] value with axiom
//!   validation and the classicality classification;
//! - [`rep`]: spanning vector representations, unitary intertwiners, cyclic
//!   operator representations, inequivalence certificates, and the
//!   history-space (natural map) analysis;
//! - [`qmeasure`]: strong positivity of q-measures and the reconstruction
//!   `μ(A) = ‖ℰ(A)‖²`;
//! - [`history`]: the n-site / N-time unitary history model, path and class
//!   operators, induced functionals, and the site-coverage cyclicity test;
//! - [`opqm`]: operator-valued measures, decoherence operators
//!   `𝒟(A,B) = ℰ(B)*ℰ(A)`, operator q-measures `𝒬(A) = ℰ(A)*ℰ(A)`, and
//!   their identity checks;
//! - [`sampling`]: seeded generators for random unitaries, PSD matrices,
//!   functionals, and scenarios (used by tests and reproducible demos).
//!
//! All operations are pure functions of their inputs; randomized searches
//! take an explicit seed. The inner product convention throughout is
//! *linear in the first argument*: `⟨x, y⟩ = Σ_k x_k · conj(y_k)`.

pub mod decoherence;
pub mod event;
pub mod history;
pub mod linalg;
pub mod opqm;
pub mod qmeasure;
pub mod rep;
pub mod sampling;

pub use decoherence::{ClassicalityVerdict, DecoherenceError, DecoherenceFunctional};
pub use event::{Event, EventError, EventSpace, InterferenceData, QMeasure};
pub use history::{History, HistoryError, HistoryScenario};
pub use linalg::{ComplexMatrix, ComplexVector, HermitianEigen, LinalgError, PsdVerdict, Tolerance};
pub use opqm::{DecoherenceOperatorVerdict, OperatorValuedMeasure};
pub use qmeasure::{QMeasureError, StrongPositivityVerdict};
pub use rep::{HistorySpaceAnalysis, OperatorRep, RepError, VectorRep};
