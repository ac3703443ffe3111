use decoh::rep::{build_operator_rep, build_vector_rep};
use decoh::{ComplexMatrix, DecoherenceFunctional, Event, EventSpace, Tolerance};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tol = Tolerance::default(); // rel = abs = 1e-9
    let space = EventSpace::new(vec!["1".into(), "2".into()])?;
    let matrix = ComplexMatrix::from_real_rows(&[vec![0.2, 0.2], vec![0.2, 0.4]]);
    let d = DecoherenceFunctional::validate(space, matrix, true, tol)?;

    // Events are bitmasks over the atoms; Ω = {1, 2} here.
    let omega = Event::from_mask(0b11);
    assert!((d.evaluate(omega, omega)?.re - 1.0).abs() < 1e-12);

    // Minimal spanning vectors with ⟨e_i, e_j⟩ = M_ij …
    let vectors = build_vector_rep(&d, tol)?;
    assert_eq!(vectors.dim(), 2);

    // … and a cyclic operator representation ⟨ℰ(A)ψ, ℰ(B)ψ⟩ = D(A, B).
    let ops = build_operator_rep(&d, 0, tol)?;
    assert_eq!(ops.dim(), 2);
    Ok(())
}
