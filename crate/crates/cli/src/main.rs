//! `decoh` — validate, represent, and classify finite decoherence
//! functionals, quantum measures, evolution scenarios, and
//! operator-valued measures from JSON input files.
//!
//! Every subcommand reads one file, runs its analysis at the requested
//! tolerance, and prints one report. Exit codes are uniform: `0` when
//! the subcommand's headline verdict holds, `1` when it is negative
//! (the report is still printed), `2` when the input cannot be read,
//! parsed, or sits over an enumeration cap.

mod input;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use decoh::decoherence::AxiomViolation;
use decoh::event::{grade2_check, DEFAULT_MAX_ATOMS};
use decoh::history::{class_operator, cyclicity_criterion, induced_functional, induced_qmeasure};
use decoh::linalg::hermitian_eigen;
use decoh::opqm::{
    classify_operator_decoherence, grade2_operator_check, operator_qmeasure, regularity_check,
};
use decoh::qmeasure::{build_qmeasure_rep, strong_positivity};
use decoh::rep::{build_operator_rep, build_vector_rep, DEFAULT_CYCLIC_FLOOR};
use decoh::{
    DecoherenceError, DecoherenceFunctional, Event, OperatorRep, QMeasure, Tolerance, VectorRep,
};
use serde_json::{json, Value};

use crate::input::{
    functional_parts, operator_measure_from_file, parse_json, qmeasure_from_file, read_input,
    scenario_from_file, CliError, FunctionalFile, OperatorMeasureFile, QMeasureFile, ScenarioFile,
};
use crate::report::{
    complex_json, event_pair_json, event_triple_json, matrix_json, vector_json, AnalysisReport,
    OutputFormat,
};

/// Hard ceiling for the operator-measure event scans (4ⁿ triples).
const MAX_OPQM_ATOMS: usize = 12;

/// Default cap on enumerated histories in a scenario.
const DEFAULT_HISTORY_CAP: usize = decoh::history::DEFAULT_HISTORY_CAP;

#[derive(Parser)]
#[command(
    name = "decoh",
    version,
    about = "Validate, represent, and classify finite decoherence functionals and quantum measures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the functional axioms on an atom-matrix file
    Validate {
        path: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Build a Gram-vector or cyclic-operator representation
    Represent {
        path: PathBuf,
        /// Representation family to construct
        #[arg(long, value_enum)]
        mode: RepMode,
        #[command(flatten)]
        flags: Flags,
    },
    /// Classify a functional as classical, weakly classical, or neither
    Classify {
        path: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Grade-2 additivity and strong positivity of a q-measure table
    Qmeasure {
        #[arg(value_enum)]
        action: QmAction,
        path: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Analyze an evolution scenario and its induced functional
    History {
        path: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Identity and regularity checks on an operator-valued measure
    Opqm {
        path: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RepMode {
    Vector,
    Operator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum QmAction {
    /// Decide grade-2 additivity and strong positivity
    Check,
    /// Additionally build the norm-squared vector representation
    Represent,
}

#[derive(Args)]
struct Flags {
    /// Numerical tolerance: sets both the relative eigenvalue gate and
    /// the absolute residual gate (default 1e-9 for both)
    #[arg(long, value_parser = parse_tolerance)]
    tol: Option<f64>,
    /// Seed for randomized constructions, recorded in the report
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report format
    #[arg(long, value_enum, default_value = "json")]
    output: OutputFormat,
    /// Enumeration cap: atoms for event-table subcommands (default 12,
    /// scans scale as 4ⁿ), histories for `history` (default 4096)
    #[arg(long)]
    max_atoms: Option<usize>,
}

impl Flags {
    fn tolerance(&self) -> Tolerance {
        self.tol.map_or_else(Tolerance::default, Tolerance::uniform)
    }
}

fn parse_tolerance(raw: &str) -> Result<f64, String> {
    let value: f64 = raw.parse().map_err(|e| format!("{e}"))?;
    if !value.is_finite() || value < 0.0 {
        return Err("tolerance must be a finite nonnegative number".to_string());
    }
    Ok(value)
}

struct Outcome {
    rendered: String,
    holds: bool,
}

impl Outcome {
    fn emit(report: AnalysisReport, format: OutputFormat, holds: bool) -> Self {
        Outcome { rendered: report.render(format), holds }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(outcome) => {
            print!("{}", outcome.rendered);
            if outcome.holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Validate { path, flags } => cmd_validate(&path, &flags),
        Command::Represent { path, mode, flags } => cmd_represent(&path, mode, &flags),
        Command::Classify { path, flags } => cmd_classify(&path, &flags),
        Command::Qmeasure { action, path, flags } => cmd_qmeasure(&path, action, &flags),
        Command::History { path, flags } => cmd_history(&path, &flags),
        Command::Opqm { path, flags } => cmd_opqm(&path, &flags),
    }
}

/// Stable axiom codes and human messages for every violated axiom.
fn violation_details(err: &DecoherenceError) -> (Vec<&'static str>, Vec<String>) {
    match err {
        DecoherenceError::Invalid(failure) => failure
            .violations
            .iter()
            .map(|v| {
                let code = match v {
                    AxiomViolation::NotHermitian { .. } => "hermiticity",
                    AxiomViolation::NotPsd { .. } => "positivity",
                    AxiomViolation::NotNormalized { .. } => "normalization",
                };
                (code, v.to_string())
            })
            .unzip(),
        other => (vec!["structure"], vec![other.to_string()]),
    }
}

fn cmd_validate(path: &Path, flags: &Flags) -> Result<Outcome, CliError> {
    let tol = flags.tolerance();
    let (bytes, digest) = read_input(path)?;
    let file: FunctionalFile = parse_json(path, &bytes)?;
    let (space, matrix, normalized) =
        functional_parts(&file, flags.max_atoms.unwrap_or(DEFAULT_MAX_ATOMS))?;

    // Evidence is computed up front so failing inputs still get a full
    // spectral picture (eigenvalues are only meaningful if Hermitian).
    let hermitian_residual = matrix.hermitian_residual().expect("schema guarantees square");
    let spectrum = hermitian_eigen(&matrix, tol).ok().map(|e| e.eigenvalues);
    let min_eigenvalue = spectrum.as_ref().and_then(|s| s.last()).copied();
    let total = matrix.entry_sum();

    let result = DecoherenceFunctional::validate(space, matrix, normalized, tol);
    let (valid, axioms, messages) = match &result {
        Ok(_) => (true, Vec::new(), Vec::new()),
        Err(err) => {
            let (axioms, messages) = violation_details(err);
            (false, axioms, messages)
        }
    };
    let verdicts = json!({
        "atoms": file.atoms.len(),
        "valid": valid,
        "hermitian_residual": hermitian_residual,
        "eigenvalues": spectrum,
        "min_eigenvalue": min_eigenvalue,
        "total_mass": complex_json(total),
        "normalized_asserted": normalized,
        "violated_axioms": axioms,
        "violations": messages,
    });
    let report = AnalysisReport::new("validate", digest, flags.seed, tol, verdicts);
    Ok(Outcome::emit(report, flags.output, valid))
}

fn cmd_represent(path: &Path, mode: RepMode, flags: &Flags) -> Result<Outcome, CliError> {
    let tol = flags.tolerance();
    let (bytes, digest) = read_input(path)?;
    let file: FunctionalFile = parse_json(path, &bytes)?;
    let (space, matrix, normalized) =
        functional_parts(&file, flags.max_atoms.unwrap_or(DEFAULT_MAX_ATOMS))?;
    let command = match mode {
        RepMode::Vector => "represent --mode vector",
        RepMode::Operator => "represent --mode operator",
    };
    let functional = match DecoherenceFunctional::validate(space, matrix, normalized, tol) {
        Ok(d) => d,
        Err(err) => {
            let (axioms, messages) = violation_details(&err);
            let verdicts = json!({
                "built": false,
                "valid": false,
                "violated_axioms": axioms,
                "violations": messages,
            });
            let report = AnalysisReport::new(command, digest, flags.seed, tol, verdicts);
            return Ok(Outcome::emit(report, flags.output, false));
        }
    };
    match mode {
        RepMode::Vector => {
            let rep = build_vector_rep(&functional, tol)
                .expect("a validated functional has a PSD atom matrix");
            let gram_residual = rep.gram().sub(functional.atom_matrix()).max_abs();
            let verdicts = json!({
                "built": true,
                "valid": true,
                "dim": rep.dim(),
                "atom_count": rep.atom_count(),
                "spanning": rep.is_spanning(tol),
                "gram_residual": gram_residual,
            });
            let report = AnalysisReport::new(command, digest, flags.seed, tol, verdicts)
                .with_representation(vector_rep_json(&rep));
            Ok(Outcome::emit(report, flags.output, true))
        }
        RepMode::Operator => match build_operator_rep(&functional, flags.seed, tol) {
            Ok(rep) => {
                let (residual, scope) = worst_pair_residual(&functional, &rep);
                let verdicts = json!({
                    "built": true,
                    "valid": true,
                    "dim": rep.dim(),
                    "atom_count": rep.atom_count(),
                    "cyclic_floor": DEFAULT_CYCLIC_FLOOR,
                    "achieved_floor": achieved_floor(&rep),
                    "pair_identity_residual": residual,
                    "pair_identity_scope": scope,
                });
                let report = AnalysisReport::new(command, digest, flags.seed, tol, verdicts)
                    .with_representation(operator_rep_json(&rep));
                Ok(Outcome::emit(report, flags.output, true))
            }
            Err(err) => {
                let verdicts = json!({
                    "built": false,
                    "valid": true,
                    "violations": [err.to_string()],
                });
                let report = AnalysisReport::new(command, digest, flags.seed, tol, verdicts);
                Ok(Outcome::emit(report, flags.output, false))
            }
        },
    }
}

/// Worst attained ratio `min_i |⟨e_i, ψ⟩| / ‖e_i‖` over nonzero atom
/// vectors; `None` when every atom vector vanishes (dim-0 reps).
fn achieved_floor(rep: &OperatorRep) -> Option<f64> {
    let vectors = rep.to_vector_rep();
    let floor = vectors
        .atom_vectors()
        .iter()
        .filter(|e| e.norm() > 0.0)
        .map(|e| e.inner(rep.psi()).norm() / e.norm())
        .fold(f64::INFINITY, f64::min);
    floor.is_finite().then_some(floor)
}

/// Worst pair-identity residual `|⟨ℰ(A)ψ, ℰ(B)ψ⟩ − D(A, B)|`: over all
/// event pairs when the space is small enough to enumerate cheaply,
/// over atom pairs (the generating case) otherwise.
fn worst_pair_residual(d: &DecoherenceFunctional, rep: &OperatorRep) -> (f64, &'static str) {
    let n = d.n();
    if n <= 8 {
        let event_vectors: Vec<_> =
            (0..(1u64 << n)).map(|mask| rep.event_vector(Event::from_mask(mask))).collect();
        let mut worst = 0.0f64;
        for (a, ea) in event_vectors.iter().enumerate() {
            for (b, eb) in event_vectors.iter().enumerate() {
                let expected = d
                    .evaluate(Event::from_mask(a as u64), Event::from_mask(b as u64))
                    .expect("enumerated events lie in the space");
                worst = worst.max((ea.inner(eb) - expected).norm());
            }
        }
        (worst, "events")
    } else {
        let gram = rep.to_vector_rep().gram();
        (gram.sub(d.atom_matrix()).max_abs(), "atoms")
    }
}

fn vector_rep_json(rep: &VectorRep) -> Value {
    json!({
        "kind": "vector",
        "dim": rep.dim(),
        "atom_vectors": rep.atom_vectors().iter().map(vector_json).collect::<Vec<_>>(),
    })
}

fn operator_rep_json(rep: &OperatorRep) -> Value {
    json!({
        "kind": "operator",
        "dim": rep.dim(),
        "psi": vector_json(rep.psi()),
        "atom_operators": rep.atom_operators().iter().map(matrix_json).collect::<Vec<_>>(),
    })
}

fn cmd_classify(path: &Path, flags: &Flags) -> Result<Outcome, CliError> {
    let tol = flags.tolerance();
    let (bytes, digest) = read_input(path)?;
    let file: FunctionalFile = parse_json(path, &bytes)?;
    let (space, matrix, normalized) =
        functional_parts(&file, flags.max_atoms.unwrap_or(DEFAULT_MAX_ATOMS))?;
    let (verdicts, holds) = match DecoherenceFunctional::validate(space, matrix, normalized, tol) {
        Ok(d) => {
            let verdict = d.classify_classicality(tol);
            (
                json!({
                    "valid": true,
                    "classical": verdict.classical,
                    "weakly_classical": verdict.weakly_classical,
                    "witness": event_pair_json(verdict.witness),
                    "recovered_measure": verdict.recovered_measure,
                }),
                verdict.classical,
            )
        }
        Err(err) => {
            let (axioms, messages) = violation_details(&err);
            (
                json!({
                    "valid": false,
                    "classical": Value::Null,
                    "weakly_classical": Value::Null,
                    "violated_axioms": axioms,
                    "violations": messages,
                }),
                false,
            )
        }
    };
    let report = AnalysisReport::new("classify", digest, flags.seed, tol, verdicts);
    Ok(Outcome::emit(report, flags.output, holds))
}

fn cmd_qmeasure(path: &Path, action: QmAction, flags: &Flags) -> Result<Outcome, CliError> {
    let tol = flags.tolerance();
    let (bytes, digest) = read_input(path)?;
    let file: QMeasureFile = parse_json(path, &bytes)?;
    let mu = qmeasure_from_file(&file, flags.max_atoms.unwrap_or(DEFAULT_MAX_ATOMS))?;
    let command = match action {
        QmAction::Check => "qmeasure check",
        QmAction::Represent => "qmeasure represent",
    };
    let grade2 = grade2_check(&mu, tol);
    if !grade2.holds {
        let verdicts = json!({
            "grade2_additive": false,
            "grade2_worst_violation": grade2.worst_violation,
            "grade2_witness": event_triple_json(grade2.witness),
            "strongly_positive": Value::Null,
            "total": mu.total(),
        });
        let report = AnalysisReport::new(command, digest, flags.seed, tol, verdicts);
        return Ok(Outcome::emit(report, flags.output, false));
    }
    let verdict = strong_positivity(&mu, tol).expect("grade-2 additivity already verified");
    let strongly_positive = verdict.strongly_positive;
    let min_atom_eigenvalue = verdict.atom_eigenvalues.last().copied();
    let mut verdicts = json!({
        "grade2_additive": true,
        "grade2_worst_violation": grade2.worst_violation,
        "strongly_positive": strongly_positive,
        "atom_eigenvalues": verdict.atom_eigenvalues,
        "min_atom_eigenvalue": min_atom_eigenvalue,
        "unhalved_eigenvalues": verdict.unhalved_eigenvalues,
        "delta_eigenvalues": verdict.delta_eigenvalues,
        "convention_note": verdict.convention_note,
        "total": mu.total(),
    });
    match action {
        QmAction::Check => {
            let report = AnalysisReport::new(command, digest, flags.seed, tol, verdicts);
            Ok(Outcome::emit(report, flags.output, strongly_positive))
        }
        QmAction::Represent => {
            if !strongly_positive {
                insert(&mut verdicts, "built", json!(false));
                let report = AnalysisReport::new(command, digest, flags.seed, tol, verdicts);
                return Ok(Outcome::emit(report, flags.output, false));
            }
            let rep = build_qmeasure_rep(&mu, tol).expect("strong positivity already verified");
            insert(&mut verdicts, "built", json!(true));
            insert(&mut verdicts, "dim", json!(rep.dim()));
            insert(
                &mut verdicts,
                "reconstruction_residual",
                json!(reconstruction_residual(&mu, &rep)),
            );
            let report = AnalysisReport::new(command, digest, flags.seed, tol, verdicts)
                .with_representation(vector_rep_json(&rep));
            Ok(Outcome::emit(report, flags.output, true))
        }
    }
}

fn insert(verdicts: &mut Value, key: &str, value: Value) {
    if let Value::Object(map) = verdicts {
        map.insert(key.to_string(), value);
    }
}

/// Worst deviation of `‖ℰ(A)‖²` from `μ(A)` over every event.
fn reconstruction_residual(mu: &QMeasure, rep: &VectorRep) -> f64 {
    let mut worst = 0.0f64;
    for event in mu.space().events() {
        let reconstructed = rep.event_vector(event).norm_sqr();
        worst = worst.max((mu.value(event) - reconstructed).abs());
    }
    worst
}

fn cmd_history(path: &Path, flags: &Flags) -> Result<Outcome, CliError> {
    let tol = flags.tolerance();
    let (bytes, digest) = read_input(path)?;
    let file: ScenarioFile = parse_json(path, &bytes)?;
    let cap = flags.max_atoms.unwrap_or(DEFAULT_HISTORY_CAP);
    let scenario = match scenario_from_file(&file, cap, tol)? {
        Ok(s) => s,
        Err(violation) => {
            let verdicts = json!({
                "scenario_valid": false,
                "violations": [violation.to_string()],
            });
            let report = AnalysisReport::new("history", digest, flags.seed, tol, verdicts);
            return Ok(Outcome::emit(report, flags.output, false));
        }
    };
    let functional = match induced_functional(&scenario, tol) {
        Ok(d) => d,
        Err(err) => {
            let verdicts = json!({
                "scenario_valid": true,
                "induced_functional_valid": false,
                "violations": [err.to_string()],
            });
            let report = AnalysisReport::new("history", digest, flags.seed, tol, verdicts);
            return Ok(Outcome::emit(report, flags.output, false));
        }
    };
    let cyclicity = cyclicity_criterion(&scenario, tol);
    let all: Vec<_> = scenario.histories().collect();
    let telescoped = class_operator(&scenario, &all).expect("enumerated histories are valid");
    let telescoping_residual = telescoped.sub(&scenario.full_product()).max_abs();
    // The dense induced table is only materialized when the history
    // space fits the 2ⁿ format.
    let table: Option<Vec<f64>> = (scenario.history_count() <= DEFAULT_MAX_ATOMS).then(|| {
        induced_qmeasure(&scenario, tol)
            .expect("history count within the table cap")
            .values()
            .to_vec()
    });
    let verdicts = json!({
        "sites": scenario.n_sites(),
        "times": scenario.n_times(),
        "histories": scenario.history_count(),
        "scenario_valid": true,
        "induced_functional_valid": true,
        "induced_total_mass": complex_json(functional.atom_matrix().entry_sum()),
        "cyclic": cyclicity.cyclic,
        "missing_sites": cyclicity.missing_sites,
        "telescoping_residual": telescoping_residual,
        "induced_qmeasure_values": table,
    });
    let holds = cyclicity.cyclic;
    let report = AnalysisReport::new("history", digest, flags.seed, tol, verdicts);
    Ok(Outcome::emit(report, flags.output, holds))
}

fn cmd_opqm(path: &Path, flags: &Flags) -> Result<Outcome, CliError> {
    let tol = flags.tolerance();
    let (bytes, digest) = read_input(path)?;
    let file: OperatorMeasureFile = parse_json(path, &bytes)?;
    let measure = operator_measure_from_file(&file)?;
    let cap = flags.max_atoms.unwrap_or(MAX_OPQM_ATOMS).min(MAX_OPQM_ATOMS);
    if measure.n() > cap {
        return Err(CliError::Schema(format!(
            "{} atom operators exceed the event-scan cap {cap}",
            measure.n()
        )));
    }
    let grade2 = grade2_operator_check(&measure, tol);
    let regularity = regularity_check(&measure, tol);
    let classification = classify_operator_decoherence(&measure, tol);
    let total = operator_qmeasure(&measure, measure.full());
    let verdicts = json!({
        "atoms": measure.n(),
        "dim": measure.dim(),
        "grade2_holds": grade2.holds,
        "grade2_worst_residual": grade2.worst_residual,
        "grade2_witness": event_triple_json(grade2.witness),
        "regularity_holds": regularity.holds,
        "regularity_worst_excess": regularity.worst_excess,
        "regularity_witness": event_pair_json(regularity.witness),
        "classical": classification.classical,
        "weakly_classical": classification.weakly_classical,
        "classicality_witness": event_pair_json(classification.witness),
        "total_qmeasure_trace": total.trace().re,
    });
    let holds = grade2.holds && regularity.holds;
    let report = AnalysisReport::new("opqm", digest, flags.seed, tol, verdicts);
    Ok(Outcome::emit(report, flags.output, holds))
}
