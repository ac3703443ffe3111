//! Finite sample spaces, bitmask events, q-measure tables, and the
//! combinatorics of grade-2 additivity: the three-set identity, its
//! pairwise equivalent, two-point interference, and the Δ functional.
//!
//! Events are little-endian bitmasks: bit `i` set means atom `ω_{i+1}` is a
//! member. Unions, intersections and complements are single bitwise ops and
//! dense tables index directly by mask.

use std::collections::HashSet;

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{ComplexMatrix, Tolerance};

/// Default ceiling on atom counts for spaces that carry dense 2ⁿ tables.
pub const DEFAULT_MAX_ATOMS: usize = 12;

/// Hard ceiling for event *enumeration* (streams of 2ⁿ or 4ⁿ items).
/// Spaces may be larger (the history model builds spaces with up to 4096
/// atoms) but only atom-level operations are available there.
const MAX_ENUMERABLE_ATOMS: usize = 20;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EventError {
    #[error("sample space needs at least one atom")]
    NoAtoms,
    #[error("{n} atoms exceeds the configured maximum {max}")]
    TooManyAtoms { n: usize, max: usize },
    #[error("duplicate atom label {label:?}")]
    DuplicateLabel { label: String },
    #[error("event {event:#b} has members outside a space of {n} atoms")]
    EventOutOfRange { event: u64, n: usize },
    #[error("q-measure table has {got} entries, expected 2^{n} = {expected}")]
    WrongTableLength { n: usize, expected: usize, got: usize },
    #[error("q-measure value for event {event:#b} is negative: {value}")]
    NegativeValue { event: u64, value: f64 },
    #[error("q-measure of the empty event must be 0, got {value}")]
    EmptySetNonzero { value: f64 },
}

/// An event: a subset of atom indices encoded as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Event(u64);

impl Event {
    pub const EMPTY: Event = Event(0);

    pub fn from_mask(mask: u64) -> Self {
        Event(mask)
    }

    pub fn singleton(atom: usize) -> Self {
        assert!(atom < 64);
        Event(1u64 << atom)
    }

    pub fn from_members(members: &[usize]) -> Self {
        let mut mask = 0u64;
        for &i in members {
            assert!(i < 64);
            mask |= 1u64 << i;
        }
        Event(mask)
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn union(self, other: Self) -> Self {
        Event(self.0 | other.0)
    }

    pub fn intersect(self, other: Self) -> Self {
        Event(self.0 & other.0)
    }

    /// Set difference `self \ other`.
    pub fn minus(self, other: Self) -> Self {
        Event(self.0 & !other.0)
    }

    pub fn sym_diff(self, other: Self) -> Self {
        Event(self.0 ^ other.0)
    }

    /// Complement within a space of `n` atoms.
    pub fn complement(self, n: usize) -> Self {
        Event(!self.0 & mask_of(n))
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn contains(self, atom: usize) -> bool {
        atom < 64 && self.0 >> atom & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn size(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Atom indices in ascending order.
    pub fn members(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..64).filter(move |&i| mask >> i & 1 == 1)
    }
}

fn mask_of(n: usize) -> u64 {
    assert!(n <= 64, "bitmask events support at most 64 atoms");
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A finite sample space `Ω = {ω_1, …, ω_n}` with the full power set as
/// event algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventSpace {
    atom_labels: Vec<String>,
}

impl EventSpace {
    /// Space with the default atom ceiling (dense-table workloads).
    pub fn new(atom_labels: Vec<String>) -> Result<Self, EventError> {
        Self::with_max_atoms(atom_labels, DEFAULT_MAX_ATOMS)
    }

    /// Space with a caller-chosen ceiling. The history model uses this for
    /// induced spaces with up to 4096 atoms; event enumeration stays
    /// unavailable there, atom-level operations still work.
    pub fn with_max_atoms(atom_labels: Vec<String>, max: usize) -> Result<Self, EventError> {
        let n = atom_labels.len();
        if n == 0 {
            return Err(EventError::NoAtoms);
        }
        if n > max {
            return Err(EventError::TooManyAtoms { n, max });
        }
        let mut seen = HashSet::new();
        for label in &atom_labels {
            if !seen.insert(label.as_str()) {
                return Err(EventError::DuplicateLabel { label: label.clone() });
            }
        }
        Ok(EventSpace { atom_labels })
    }

    pub fn n(&self) -> usize {
        self.atom_labels.len()
    }

    pub fn atom_labels(&self) -> &[String] {
        &self.atom_labels
    }

    pub fn label(&self, atom: usize) -> &str {
        &self.atom_labels[atom]
    }

    /// The sure event Ω.
    pub fn full(&self) -> Event {
        Event(mask_of(self.n()))
    }

    pub fn check_event(&self, event: Event) -> Result<(), EventError> {
        // Spaces beyond the bitmask width admit every expressible mask.
        if self.n() >= 64 || event.is_subset_of(self.full()) {
            Ok(())
        } else {
            Err(EventError::EventOutOfRange { event: event.mask(), n: self.n() })
        }
    }

    /// All 2ⁿ events in mask order. Panics on spaces too large to
    /// enumerate; see [`MAX_ENUMERABLE_ATOMS`].
    pub fn events(&self) -> impl Iterator<Item = Event> {
        let n = self.n();
        assert!(
            n <= MAX_ENUMERABLE_ATOMS,
            "event enumeration requires at most {MAX_ENUMERABLE_ATOMS} atoms, space has {n}"
        );
        (0..(1u64 << n)).map(Event)
    }

    pub fn event_count(&self) -> usize {
        assert!(self.n() <= MAX_ENUMERABLE_ATOMS);
        1usize << self.n()
    }
}

/// All submasks of `set`, ascending from 0 to `set` itself, via the
/// carry-rippler step `s = (s - set) & set`.
fn submasks(set: u64) -> impl Iterator<Item = u64> {
    let mut current = Some(0u64);
    std::iter::from_fn(move || {
        let out = current?;
        let next = out.wrapping_sub(set) & set;
        current = if next == 0 { None } else { Some(next) };
        Some(out)
    })
}

/// All 4ⁿ mutually disjoint triples `(A, B, C)` over a ground mask: each
/// atom lands in A, B, C, or none.
pub fn disjoint_triples(full: Event) -> impl Iterator<Item = (Event, Event, Event)> {
    let ground = full.mask();
    submasks(ground).flat_map(move |a| {
        submasks(ground & !a).flat_map(move |b| {
            submasks(ground & !a & !b).map(move |c| (Event(a), Event(b), Event(c)))
        })
    })
}

/// A q-measure: a nonnegative set function over all 2ⁿ events with
/// `μ(∅) = 0`, stored as a dense table indexed by event mask. Grade-2
/// additivity is *not* assumed at construction — it is what
/// [`grade2_check`] decides.
#[derive(Debug, Clone, PartialEq)]
pub struct QMeasure {
    space: EventSpace,
    values: Vec<f64>,
}

impl QMeasure {
    pub fn new(space: EventSpace, values: Vec<f64>) -> Result<Self, EventError> {
        let n = space.n();
        if n > MAX_ENUMERABLE_ATOMS {
            return Err(EventError::TooManyAtoms { n, max: MAX_ENUMERABLE_ATOMS });
        }
        let expected = 1usize << n;
        if values.len() != expected {
            return Err(EventError::WrongTableLength { n, expected, got: values.len() });
        }
        if values[0] != 0.0 {
            return Err(EventError::EmptySetNonzero { value: values[0] });
        }
        for (mask, &v) in values.iter().enumerate() {
            if v < 0.0 {
                return Err(EventError::NegativeValue { event: mask as u64, value: v });
            }
        }
        Ok(QMeasure { space, values })
    }

    pub fn space(&self) -> &EventSpace {
        &self.space
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn value(&self, event: Event) -> f64 {
        debug_assert!(self.space.check_event(event).is_ok());
        self.values[event.mask() as usize]
    }

    /// `μ(Ω)`, the total mass.
    pub fn total(&self) -> f64 {
        self.value(self.space.full())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Verdict of a grade-2 additivity check. `witness` is a maximal violator,
/// present only when the check fails.
#[derive(Debug, Clone, PartialEq)]
pub struct Grade2Verdict {
    pub holds: bool,
    pub worst_violation: f64,
    pub witness: Option<(Event, Event, Event)>,
}

/// Three-set grade-2 additivity: for all mutually disjoint `A, B, C`,
/// `μ(A∪B∪C) = μ(A∪B) + μ(A∪C) + μ(B∪C) − μ(A) − μ(B) − μ(C)`
/// within `tol.abs · max(1, μ(Ω))`.
pub fn grade2_check(mu: &QMeasure, tol: Tolerance) -> Grade2Verdict {
    let gate = tol.abs * mu.total().max(1.0);
    let mut worst = 0.0f64;
    let mut witness = None;
    for (a, b, c) in disjoint_triples(mu.space().full()) {
        let lhs = mu.value(a.union(b).union(c));
        let rhs = mu.value(a.union(b)) + mu.value(a.union(c)) + mu.value(b.union(c))
            - mu.value(a)
            - mu.value(b)
            - mu.value(c);
        let violation = (lhs - rhs).abs();
        if violation > worst {
            worst = violation;
            witness = Some((a, b, c));
        }
    }
    let holds = worst <= gate;
    Grade2Verdict { holds, worst_violation: worst, witness: if holds { None } else { witness } }
}

/// Verdict of the pairwise form; `witness` is the worst pair when failing.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseGrade2Verdict {
    pub holds: bool,
    pub worst_violation: f64,
    pub witness: Option<(Event, Event)>,
}

/// Pairwise grade-2 additivity, equivalent to the three-set form: for all
/// (not necessarily disjoint) `A, B`,
/// `μ(A∪B) = μ(A) + μ(B) − μ(A∩B) + μ(A△B) − μ(A∩B′) − μ(A′∩B)`.
pub fn grade2_pairwise_check(mu: &QMeasure, tol: Tolerance) -> PairwiseGrade2Verdict {
    let gate = tol.abs * mu.total().max(1.0);
    let n = mu.n();
    let mut worst = 0.0f64;
    let mut witness = None;
    for a in mu.space().events() {
        for b in mu.space().events() {
            let lhs = mu.value(a.union(b));
            let rhs = mu.value(a) + mu.value(b) - mu.value(a.intersect(b))
                + mu.value(a.sym_diff(b))
                - mu.value(a.intersect(b.complement(n)))
                - mu.value(a.complement(n).intersect(b));
            let violation = (lhs - rhs).abs();
            if violation > worst {
                worst = violation;
                witness = Some((a, b));
            }
        }
    }
    let holds = worst <= gate;
    PairwiseGrade2Verdict {
        holds,
        worst_violation: worst,
        witness: if holds { None } else { witness },
    }
}

/// Two-point interference terms and the decoherence matrix of a q-measure.
///
/// `interference(i, j) = μ({ω_i, ω_j}) − μ(ω_i) − μ(ω_j)` for `i ≠ j`, zero
/// on the diagonal. The decoherence matrix follows the *halved* convention
/// `Dmat_ii = μ(ω_i)`, `Dmat_ij = I_ij / 2`, which is the one consistent
/// with the Δ functional (`Δ({ω_i}, {ω_j}) = I_ij / 2`). The unhalved
/// variant (off-diagonal `I_ij`) is kept available as a diagnostic because
/// it is a display convention seen in the wild.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceData {
    n: usize,
    interference: Vec<f64>,
    decoherence: Vec<f64>,
}

impl InterferenceData {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn interference(&self, i: usize, j: usize) -> f64 {
        self.interference[i * self.n + j]
    }

    /// Halved-convention decoherence matrix entry.
    pub fn decoherence(&self, i: usize, j: usize) -> f64 {
        self.decoherence[i * self.n + j]
    }

    /// Halved-convention decoherence matrix as a complex matrix.
    pub fn decoherence_matrix(&self) -> ComplexMatrix {
        real_matrix(self.n, &self.decoherence)
    }

    /// Diagnostic: diagonal `μ(ω_i)`, off-diagonal the raw `I_ij`.
    pub fn unhalved_matrix(&self) -> ComplexMatrix {
        let mut entries = self.interference.clone();
        for i in 0..self.n {
            entries[i * self.n + i] = self.decoherence[i * self.n + i];
        }
        real_matrix(self.n, &entries)
    }
}

fn real_matrix(n: usize, entries: &[f64]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            m.set(r, c, Complex64::new(entries[r * n + c], 0.0));
        }
    }
    m
}

/// Compute interference terms and both decoherence-matrix conventions.
pub fn interference(mu: &QMeasure) -> InterferenceData {
    let n = mu.n();
    let mut inter = vec![0.0f64; n * n];
    let mut dec = vec![0.0f64; n * n];
    for i in 0..n {
        dec[i * n + i] = mu.value(Event::singleton(i));
        for j in 0..n {
            if i == j {
                continue;
            }
            let pair = Event::singleton(i).union(Event::singleton(j));
            let term = mu.value(pair)
                - mu.value(Event::singleton(i))
                - mu.value(Event::singleton(j));
            inter[i * n + j] = term;
            dec[i * n + j] = term / 2.0;
        }
    }
    InterferenceData { n, interference: inter, decoherence: dec }
}

/// The Δ functional:
/// `Δ(A, B) = ½ [μ(A∪B) + μ(A∩B) − μ(A∩B′) − μ(A′∩B)]`.
/// Symmetric in its arguments; `Δ(A, A) = μ(A)`; for additive `μ` it
/// collapses to `μ(A∩B)`.
pub fn delta(mu: &QMeasure, a: Event, b: Event) -> f64 {
    let n = mu.n();
    0.5 * (mu.value(a.union(b)) + mu.value(a.intersect(b))
        - mu.value(a.intersect(b.complement(n)))
        - mu.value(a.complement(n).intersect(b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn space(n: usize) -> EventSpace {
        EventSpace::new((0..n).map(|i| format!("w{i}")).collect()).unwrap()
    }

    fn additive_measure(n: usize, weights: &[f64]) -> QMeasure {
        let sp = space(n);
        let values: Vec<f64> = (0..(1u64 << n))
            .map(|mask| Event::from_mask(mask).members().map(|i| weights[i]).sum())
            .collect();
        QMeasure::new(sp, values).unwrap()
    }

    #[test]
    fn space_rejects_bad_inputs() {
        assert_eq!(EventSpace::new(vec![]), Err(EventError::NoAtoms));
        let labels: Vec<String> = (0..13).map(|i| format!("w{i}")).collect();
        assert!(matches!(
            EventSpace::new(labels),
            Err(EventError::TooManyAtoms { n: 13, max: 12 })
        ));
        assert!(matches!(
            EventSpace::new(vec!["a".into(), "a".into()]),
            Err(EventError::DuplicateLabel { .. })
        ));
    }

    #[test]
    fn event_algebra_basics() {
        let a = Event::from_members(&[0, 2]);
        let b = Event::from_members(&[1, 2]);
        assert_eq!(a.union(b), Event::from_members(&[0, 1, 2]));
        assert_eq!(a.intersect(b), Event::singleton(2));
        assert_eq!(a.sym_diff(b), Event::from_members(&[0, 1]));
        assert_eq!(a.complement(4), Event::from_members(&[1, 3]));
        assert!(a.minus(b).is_disjoint(b));
        assert_eq!(a.size(), 2);
        assert_eq!(a.members().collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn triple_counts_are_powers_of_four() {
        for n in 1..=4 {
            let count = disjoint_triples(space(n).full()).count();
            assert_eq!(count, 4usize.pow(n as u32), "n={n}");
        }
    }

    #[test]
    fn triples_are_mutually_disjoint() {
        for (a, b, c) in disjoint_triples(space(3).full()) {
            assert!(a.is_disjoint(b) && a.is_disjoint(c) && b.is_disjoint(c));
        }
    }

    #[test]
    fn qmeasure_table_validation() {
        let sp = space(2);
        assert!(matches!(
            QMeasure::new(sp.clone(), vec![0.0, 1.0]),
            Err(EventError::WrongTableLength { expected: 4, got: 2, .. })
        ));
        assert!(matches!(
            QMeasure::new(sp.clone(), vec![0.5, 0.0, 0.0, 1.0]),
            Err(EventError::EmptySetNonzero { .. })
        ));
        assert!(matches!(
            QMeasure::new(sp.clone(), vec![0.0, -0.1, 0.0, 1.0]),
            Err(EventError::NegativeValue { event: 1, .. })
        ));
        assert!(QMeasure::new(sp, vec![0.0, 0.3, 0.7, 1.0]).is_ok());
    }

    #[test]
    fn additive_measures_are_grade2_additive() {
        let mu = additive_measure(4, &[0.1, 0.2, 0.3, 0.4]);
        let verdict = grade2_check(&mu, Tolerance::default());
        assert!(verdict.holds);
        assert!(verdict.worst_violation < 1e-14);
        assert!(verdict.witness.is_none());
    }

    #[test]
    fn amplitude_squared_tables_are_grade2_additive() {
        // Oracle: evaluate the three-set identity directly from the complex
        // sums ν(A) = Σ_{i∈A} ν_i rather than through the table.
        let mut rng = crate::sampling::rng_from_seed(31);
        for n in 2..=5 {
            let nu = crate::sampling::random_complex_measure(&mut rng, n);
            let sp = space(n);
            let nu_sum = |e: Event| -> Complex64 { e.members().map(|i| nu[i]).sum() };
            let values: Vec<f64> =
                (0..(1u64 << n)).map(|m| nu_sum(Event::from_mask(m)).norm_sqr()).collect();
            let mu = QMeasure::new(sp.clone(), values).unwrap();
            assert!(grade2_check(&mu, Tolerance::default()).holds, "n={n}");
            for (a, b, c) in disjoint_triples(sp.full()) {
                let lhs = nu_sum(a.union(b).union(c)).norm_sqr();
                let rhs = nu_sum(a.union(b)).norm_sqr()
                    + nu_sum(a.union(c)).norm_sqr()
                    + nu_sum(b.union(c)).norm_sqr()
                    - nu_sum(a).norm_sqr()
                    - nu_sum(b).norm_sqr()
                    - nu_sum(c).norm_sqr();
                assert!((lhs - rhs).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn cardinality_squared_is_grade2_additive() {
        for n in 1..=4 {
            let sp = space(n);
            let values: Vec<f64> = (0..(1u64 << n))
                .map(|m| {
                    let s = Event::from_mask(m).size() as f64;
                    s * s
                })
                .collect();
            let mu = QMeasure::new(sp, values).unwrap();
            assert!(grade2_check(&mu, Tolerance::default()).holds, "n={n}");
        }
    }

    #[test]
    fn pure_mass_on_omega_fails_with_singleton_witness() {
        let sp = space(3);
        let mut values = vec![0.0; 8];
        values[7] = 1.0;
        let mu = QMeasure::new(sp, values).unwrap();
        let verdict = grade2_check(&mu, Tolerance::default());
        assert!(!verdict.holds);
        assert!((verdict.worst_violation - 1.0).abs() < 1e-15);
        let (a, b, c) = verdict.witness.unwrap();
        let mut masks = [a.mask(), b.mask(), c.mask()];
        masks.sort_unstable();
        assert_eq!(masks, [0b001, 0b010, 0b100]);
    }

    #[test]
    fn pairwise_form_reduces_to_identity_on_equal_events() {
        let mu = additive_measure(3, &[0.5, 0.25, 0.25]);
        let n = mu.n();
        for a in mu.space().events() {
            let lhs = mu.value(a);
            let rhs = mu.value(a) + mu.value(a) - mu.value(a) + mu.value(Event::EMPTY)
                - mu.value(a.intersect(a.complement(n)))
                - mu.value(a.complement(n).intersect(a));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn pairwise_and_three_set_forms_agree_on_random_tables() {
        let mut rng = crate::sampling::rng_from_seed(32);
        for round in 0..1000 {
            // Uniform random tables are usually not grade-2 additive; the
            // generated quadratic ones always are. Mix both populations.
            let mu = if round % 2 == 0 {
                let values: Vec<f64> = std::iter::once(0.0)
                    .chain((1..16).map(|_| rng.random_range(0.0..2.0)))
                    .collect();
                QMeasure::new(space(4), values).unwrap()
            } else {
                crate::sampling::random_grade2_qmeasure(&mut rng, 4)
            };
            let three = grade2_check(&mu, Tolerance::default());
            let pair = grade2_pairwise_check(&mu, Tolerance::default());
            assert_eq!(three.holds, pair.holds, "round {round}");
        }
    }

    #[test]
    fn interference_of_pure_pair_mass() {
        // n=2, μ(Ω)=1, everything else 0: I₁₂ = 1, halved Dmat = [[0,½],[½,0]].
        let mu = QMeasure::new(space(2), vec![0.0, 0.0, 0.0, 1.0]).unwrap();
        let data = interference(&mu);
        assert_eq!(data.interference(0, 1), 1.0);
        assert_eq!(data.interference(1, 0), 1.0);
        assert_eq!(data.interference(0, 0), 0.0);
        assert_eq!(data.decoherence(0, 1), 0.5);
        assert_eq!(data.decoherence(0, 0), 0.0);
        let unhalved = data.unhalved_matrix();
        assert_eq!(unhalved.get(0, 1).re, 1.0);
    }

    #[test]
    fn interference_of_additive_measure_vanishes() {
        let mu = additive_measure(3, &[0.2, 0.3, 0.5]);
        let data = interference(&mu);
        for i in 0..3 {
            for j in 0..3 {
                assert!(data.interference(i, j).abs() < 1e-15);
            }
        }
        // Dmat is then diagonal with the singleton masses.
        assert_eq!(data.decoherence(0, 0), 0.2);
        assert_eq!(data.decoherence(1, 1), 0.3);
        assert!(data.decoherence(0, 1).abs() < 1e-15);
    }

    #[test]
    fn interference_all_pairs_destructive() {
        // n=3, μ(∅)=μ(Ω)=0, μ=1 on every other event: I_ij = -1.
        let sp = space(3);
        let values: Vec<f64> =
            (0..8).map(|m| if m == 0 || m == 7 { 0.0 } else { 1.0 }).collect();
        let mu = QMeasure::new(sp, values).unwrap();
        let data = interference(&mu);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(data.interference(i, j), -1.0);
                    assert_eq!(data.decoherence(i, j), -0.5);
                }
            }
        }
    }

    #[test]
    fn delta_on_equal_events_is_the_measure() {
        let mu = additive_measure(3, &[0.1, 0.6, 0.3]);
        for a in mu.space().events() {
            assert!((delta(&mu, a, a) - mu.value(a)).abs() < 1e-15);
        }
    }

    #[test]
    fn delta_on_singletons_is_half_interference() {
        let mut rng = crate::sampling::rng_from_seed(33);
        let mu = crate::sampling::random_grade2_qmeasure(&mut rng, 4);
        let data = interference(&mu);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    let d = delta(&mu, Event::singleton(i), Event::singleton(j));
                    assert!((d - 0.5 * data.interference(i, j)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn delta_of_additive_measure_is_intersection_mass() {
        let mu = additive_measure(4, &[0.1, 0.2, 0.3, 0.4]);
        for a in mu.space().events() {
            for b in mu.space().events() {
                let expect = mu.value(a.intersect(b));
                assert!((delta(&mu, a, b) - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn delta_is_symmetric() {
        let mut rng = crate::sampling::rng_from_seed(34);
        for _ in 0..20 {
            let mu = crate::sampling::random_grade2_qmeasure(&mut rng, 4);
            for a in mu.space().events() {
                for b in mu.space().events() {
                    // Swapping the arguments reorders the subtraction, so
                    // agreement is to rounding, not bit-exact.
                    assert!((delta(&mu, a, b) - delta(&mu, b, a)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn delta_is_biadditive_for_grade2_tables() {
        let mut rng = crate::sampling::rng_from_seed(35);
        for _ in 0..10 {
            let mu = crate::sampling::random_grade2_qmeasure(&mut rng, 4);
            let total = mu.total().max(1.0);
            for a in mu.space().events() {
                for b in mu.space().events() {
                    if !a.is_disjoint(b) {
                        continue;
                    }
                    for c in mu.space().events() {
                        let lhs = delta(&mu, a.union(b), c);
                        let rhs = delta(&mu, a, c) + delta(&mu, b, c);
                        assert!((lhs - rhs).abs() <= 1e-9 * total);
                    }
                }
            }
        }
    }
}
