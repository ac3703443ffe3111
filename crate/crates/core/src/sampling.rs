//! Seeded generators for random test and demo data: Gaussian vectors,
//! unitaries, PSD matrices, valid functionals, q-measures, and history
//! scenarios.
//!
//! Everything is deterministic given the caller-supplied RNG; the crate
//! never creates entropy on its own. `ChaCha12Rng` is used because its
//! stream is stable across platforms and versions, which keeps seeds in
//! fixture files meaningful.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::decoherence::DecoherenceFunctional;
use crate::event::{EventSpace, QMeasure};
use crate::history::HistoryScenario;
use crate::linalg::{ComplexMatrix, ComplexVector, Tolerance};

/// The one RNG constructor used throughout tests and the CLI.
pub fn rng_from_seed(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Standard complex normal: independent N(0,1) real and imaginary parts.
pub fn standard_complex<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

pub fn random_vector<R: Rng>(rng: &mut R, dim: usize) -> ComplexVector {
    ComplexVector::new((0..dim).map(|_| standard_complex(rng)).collect())
}

/// Random unit vector; complex-normal coordinates make the direction
/// uniform on the sphere.
pub fn random_unit_vector<R: Rng>(rng: &mut R, dim: usize) -> ComplexVector {
    assert!(dim > 0, "no unit vectors in dimension 0");
    loop {
        let v = random_vector(rng, dim);
        if v.norm() > 1e-6 {
            return v.normalized();
        }
    }
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m.set(r, c, standard_complex(rng));
        }
    }
    m
}

/// Random Hermitian matrix `A + A*`.
pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let a = random_matrix(rng, n, n);
    a.add(&a.adjoint())
}

/// Random PSD matrix `B·B*` with `B` of shape n×rank, so the result has
/// numerical rank `min(rank, n)` almost surely.
pub fn random_psd<R: Rng>(rng: &mut R, n: usize, rank: usize) -> ComplexMatrix {
    let b = random_matrix(rng, n, rank);
    b.matmul(&b.adjoint())
}

/// Haar-ish random unitary via modified Gram–Schmidt on a Gaussian matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    loop {
        let a = random_matrix(rng, n, n);
        let mut cols: Vec<ComplexVector> = (0..n).map(|c| a.col(c)).collect();
        let mut ok = true;
        for k in 0..n {
            for j in 0..k {
                let proj = cols[k].inner(&cols[j]);
                cols[k] = cols[k].sub(&cols[j].scale(proj));
            }
            if cols[k].norm() < 1e-8 {
                ok = false;
                break;
            }
            cols[k] = cols[k].normalized();
        }
        if !ok {
            continue; // numerically degenerate draw; resample
        }
        let mut u = ComplexMatrix::zeros(n, n);
        for (c, col) in cols.iter().enumerate() {
            for r in 0..n {
                u.set(r, c, col.get(r));
            }
        }
        return u;
    }
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("w{i}")).collect()
}

/// Random valid decoherence functional on `n` atoms. When `normalized`,
/// the atom matrix is rescaled so the total mass `Σ_ij M_ij` is 1 (the
/// mass of `B·B*` is `‖Σ rows of B‖² ≥ 0`; near-zero draws are rejected).
pub fn random_functional<R: Rng>(rng: &mut R, n: usize, normalized: bool) -> DecoherenceFunctional {
    let space = EventSpace::new(default_labels(n)).expect("valid atom count");
    loop {
        let rank = rng.random_range(1..=n);
        let mut m = random_psd(rng, n, rank);
        if normalized {
            let mass = m.entry_sum().re;
            if mass < 1e-3 {
                continue;
            }
            m = m.scale(Complex64::new(1.0 / mass, 0.0));
        }
        match DecoherenceFunctional::validate(space.clone(), m, normalized, Tolerance::default()) {
            Ok(d) => return d,
            Err(_) => continue,
        }
    }
}

/// Random complex measure on atoms: `n` independent complex-normal weights.
pub fn random_complex_measure<R: Rng>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| standard_complex(rng)).collect()
}

/// Random vector-valued measure: one vector of dimension `dim` per atom.
/// The event map is `ℰ(A) = Σ_{i∈A} v_i`.
pub fn random_vector_measure<R: Rng>(rng: &mut R, n: usize, dim: usize) -> Vec<ComplexVector> {
    (0..n).map(|_| random_vector(rng, dim)).collect()
}

/// Q-measure `μ(A) = ‖Σ_{i∈A} v_i‖²` from a vector-valued measure.
/// Such tables are grade-2 additive and strongly positive by construction.
pub fn qmeasure_from_vectors(space: EventSpace, vectors: &[ComplexVector]) -> QMeasure {
    assert_eq!(space.n(), vectors.len());
    let dim = vectors.first().map_or(0, |v| v.dim());
    let mut values = Vec::with_capacity(1usize << space.n());
    for event in space.events() {
        let mut sum = ComplexVector::zeros(dim);
        for i in event.members() {
            sum = sum.add(&vectors[i]);
        }
        values.push(sum.norm_sqr());
    }
    QMeasure::new(space, values).expect("vector-measure table is a valid q-measure")
}

/// Random grade-2 additive table, not necessarily strongly positive:
/// `μ(A) = Σ_{i,j∈A} H_ij` for a random real symmetric `H`, shifted along
/// the diagonal just enough to make every event value nonnegative.
/// Quadratic set functions of this form satisfy the three-set identity
/// exactly; the diagonal shift adds a measure, which preserves it.
#[allow(clippy::needless_range_loop)] // matrix-index loops mirror the Σ_{i,j∈A} H_ij definition
pub fn random_grade2_qmeasure<R: Rng>(rng: &mut R, n: usize) -> QMeasure {
    let space = EventSpace::new(default_labels(n)).expect("valid atom count");
    let mut h = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in i..n {
            let x: f64 = rng.sample(StandardNormal);
            h[i][j] = x;
            h[j][i] = x;
        }
    }
    let value = |h: &[Vec<f64>], mask: u64| {
        let mut acc = 0.0;
        for i in 0..n {
            if mask >> i & 1 == 0 {
                continue;
            }
            for j in 0..n {
                if mask >> j & 1 == 1 {
                    acc += h[i][j];
                }
            }
        }
        acc
    };
    let mut worst = 0.0f64;
    for mask in 0..(1u64 << n) {
        let size = mask.count_ones() as f64;
        if size > 0.0 {
            worst = worst.min(value(&h, mask) / size);
        }
    }
    if worst < 0.0 {
        for (i, row) in h.iter_mut().enumerate() {
            row[i] -= worst;
        }
    }
    let values: Vec<f64> = (0..(1u64 << n)).map(|mask| value(&h, mask).max(0.0)).collect();
    QMeasure::new(space, values).expect("shifted quadratic table is a valid q-measure")
}

/// Random history scenario: `n_times - 1` random step unitaries and a
/// random initial unit state.
pub fn random_scenario<R: Rng>(rng: &mut R, n_sites: usize, n_times: usize) -> HistoryScenario {
    let steps: Vec<ComplexMatrix> =
        (0..n_times.saturating_sub(1)).map(|_| random_unitary(rng, n_sites)).collect();
    let psi = random_unit_vector(rng, n_sites);
    HistoryScenario::new(n_sites, n_times, steps, psi, Tolerance::default())
        .expect("generated scenario is valid")
}
