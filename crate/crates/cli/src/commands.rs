use qproc::gates::compile_su2_matrix;
use qproc::processor::{
    apply_processor, build_conditional_from_matrices, momentum_processor, network_unitary,
    run_network, FamilyDomain, GateFamily, ProgramBasis, DEFAULT_MOMENTUM_RESOLUTION,
};
use qproc::qstate::{
    dft_vector, matrix_phase_distance, schmidt_coefficients, schmidt_rank, unitarity_defect,
    BipartiteCut, CMatrix, FactorRole, StateVector, Unitary, C64, NORM_TOL,
};
use qproc::stochastic::{monte_carlo_success, success_probability_exact};
use qproc::QprocError;
use serde::Serialize;

use crate::doc::{
    from_complex, matrix_from_json, matrix_to_json, BasisDoc, ConditionalDoc, ExperimentDoc,
    JsonComplex, JsonMatrix, NetworkDoc, SweepDoc,
};
use crate::error::CliError;

/// Amplitudes at or below this modulus are left out of reports.
pub const REPORT_ZERO_TOL: f64 = 1e-14;

/// Default seed for Monte Carlo columns when neither the document nor the
/// command line sets one.
pub const DEFAULT_SEED: u64 = 0x5EED;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct AmplitudeEntry {
    pub index: Vec<usize>,
    pub amplitude: JsonComplex,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SimulationReport {
    pub kind: &'static str,
    pub dims: Vec<usize>,
    pub roles: Vec<&'static str>,
    /// Nonzero joint amplitudes; program factors come first.
    pub output: Vec<AmplitudeEntry>,
    pub schmidt_coefficients: Vec<f64>,
    pub schmidt_rank: usize,
    /// Data register when the program is a basis state.
    pub data_output: Option<Vec<JsonComplex>>,
    /// Unitary the program selected, when the program is a basis state.
    pub effective_data_unitary: Option<JsonMatrix>,
    pub warnings: Vec<String>,
}

fn multi_index(mut flat: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = flat % d;
        flat /= d;
    }
    out
}

fn dense_entries(amps: &[C64], dims: &[usize]) -> Vec<AmplitudeEntry> {
    amps.iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > REPORT_ZERO_TOL)
        .map(|(i, a)| AmplitudeEntry {
            index: multi_index(i, dims),
            amplitude: from_complex(*a),
        })
        .collect()
}

fn core_input(field: &str) -> impl Fn(QprocError) -> CliError + '_ {
    move |e| CliError::input(field, e)
}

/// Index of the single basis vector `v` is proportional to, if any.
fn basis_index(v: &[C64]) -> Option<usize> {
    let mut found = None;
    for (i, a) in v.iter().enumerate() {
        if a.norm() > NORM_TOL {
            if found.is_some() {
                return None;
            }
            found = Some(i);
        }
    }
    found.filter(|&i| (v[i].norm() - 1.0).abs() <= NORM_TOL)
}

/// Runs a conditional or network document.
pub fn simulate(doc: &ExperimentDoc, momentum_resolution: Option<usize>) -> Result<SimulationReport, CliError> {
    match doc {
        ExperimentDoc::Conditional(d) => simulate_conditional(d),
        ExperimentDoc::Network(d) => simulate_network(d, momentum_resolution),
        other => Err(CliError::input(
            "kind",
            format!("simulate expects conditional or network, got {}", other.kind()),
        )),
    }
}

fn simulate_conditional(doc: &ConditionalDoc) -> Result<SimulationReport, CliError> {
    let mut warnings = Vec::new();
    let blocks = doc
        .blocks
        .iter()
        .enumerate()
        .map(|(i, b)| matrix_from_json(&format!("blocks[{i}]"), b))
        .collect::<Result<Vec<_>, _>>()?;
    let processor = match doc.program_basis {
        BasisDoc::Computational => build_conditional_from_matrices(blocks).map_err(core_input("blocks"))?,
        BasisDoc::Momentum => {
            let table = blocks
                .into_iter()
                .map(Unitary::new)
                .collect::<Result<Vec<_>, _>>()
                .map_err(core_input("blocks"))?;
            let m = table.len();
            let family = GateFamily::new(FamilyDomain::Momentum, table).map_err(core_input("blocks"))?;
            momentum_processor(&family, m).map_err(core_input("blocks"))?
        }
    };
    let program_role = match doc.program_basis {
        BasisDoc::Computational => FactorRole::ProgramDiscrete,
        BasisDoc::Momentum => FactorRole::ProgramContinuous,
    };
    let program = doc.program.to_state("program", program_role, &mut warnings)?;
    let data = doc.data.to_state("data", FactorRole::DataQubit, &mut warnings)?;
    let joint = apply_processor(&processor, &program, &data).map_err(core_input("program"))?;
    let cut = BipartiteCut::program_data(&joint).map_err(core_input("program"))?;
    let coeffs = schmidt_coefficients(&joint, &cut).map_err(core_input("program"))?;

    let in_basis = match processor.basis() {
        ProgramBasis::Computational => program.amplitudes().to_vec(),
        ProgramBasis::Momentum => dft_vector(program.amplitudes(), false),
    };
    let selected = basis_index(&in_basis).and_then(|p| processor.block(p));
    let data_output = selected
        .map(|u| u.apply(data.amplitudes()))
        .transpose()
        .map_err(core_input("data"))?
        .map(|v| v.into_iter().map(from_complex).collect());

    Ok(SimulationReport {
        kind: "conditional",
        dims: joint.dims().to_vec(),
        roles: joint.roles().iter().map(|r| r.name()).collect(),
        output: dense_entries(joint.amplitudes(), joint.dims()),
        schmidt_rank: schmidt_rank(&coeffs),
        schmidt_coefficients: coeffs,
        data_output,
        effective_data_unitary: selected.map(|u| matrix_to_json(u.matrix())),
        warnings,
    })
}

fn simulate_network(doc: &NetworkDoc, momentum_resolution: Option<usize>) -> Result<SimulationReport, CliError> {
    let mut warnings = Vec::new();
    let m = momentum_resolution
        .or(doc.momentum_resolution)
        .unwrap_or(DEFAULT_MOMENTUM_RESOLUTION);
    if m == 0 {
        return Err(CliError::input("momentum_resolution", "must be at least 1"));
    }
    let spec = doc.spec()?;
    let assignment = doc.assignment(&mut warnings)?;
    let data = doc.data.to_state("data", FactorRole::DataQubit, &mut warnings)?;
    if data.dims().iter().any(|&d| d != 2) || data.num_factors() != spec.n() {
        return Err(CliError::input(
            "data.dims",
            format!("expected {} qubit factors of dimension 2", spec.n()),
        ));
    }
    let run = run_network(&spec, &assignment, &data, m).map_err(core_input("program"))?;

    let mut dims = run.program_dims().to_vec();
    dims.extend(std::iter::repeat_n(2, spec.n()));
    let mut roles: Vec<&'static str> = run.program_roles().iter().map(|r| r.name()).collect();
    roles.extend(std::iter::repeat_n(FactorRole::DataQubit.name(), spec.n()));

    let data_dims = vec![2; spec.n()];
    let mut output = Vec::new();
    for branch in run.branches() {
        for (k, a) in branch.data.iter().enumerate() {
            let amp = branch.amplitude * a;
            if amp.norm() > REPORT_ZERO_TOL {
                let mut index = branch.config.clone();
                index.extend(multi_index(k, &data_dims));
                output.push(AmplitudeEntry {
                    index,
                    amplitude: from_complex(amp),
                });
            }
        }
    }

    let coeffs = run.schmidt_coefficients();
    let (data_output, effective) = match run.branches() {
        [only] => {
            let u = network_unitary(&spec, &only.config, m).map_err(core_input("program"))?;
            let out = run.data_state().map(|s| s.amplitudes().iter().copied().map(from_complex).collect());
            (out, Some(matrix_to_json(u.matrix())))
        }
        _ => (None, None),
    };
    Ok(SimulationReport {
        kind: "network",
        dims,
        roles,
        output,
        schmidt_rank: schmidt_rank(&coeffs),
        schmidt_coefficients: coeffs,
        data_output,
        effective_data_unitary: effective,
        warnings,
    })
}

/// One CSV row of a stochastic sweep.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SweepRow {
    pub m: u32,
    pub exact_success: f64,
    pub closed_form: f64,
    pub monte_carlo_frequency: f64,
    pub standard_error: f64,
    pub trials: u64,
}

/// Per-row Monte Carlo seed, so rows draw from unrelated streams.
fn row_seed(seed: u64, m: u32) -> u64 {
    seed.wrapping_add((m as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn sweep_rows(doc: &SweepDoc, seed_override: Option<u64>) -> Result<Vec<SweepRow>, CliError> {
    if doc.trials < 1 {
        return Err(CliError::input("trials", "must be at least 1"));
    }
    if doc.m_min < 1 {
        return Err(CliError::input("m_min", "must be at least 1"));
    }
    if doc.m_max < doc.m_min {
        return Err(CliError::input("m_max", "must not be below m_min"));
    }
    if doc.m_max > 24 {
        return Err(CliError::input("m_max", "must be at most 24"));
    }
    if !doc.alpha.is_finite() {
        return Err(CliError::input("alpha", "must be finite"));
    }
    let seed = seed_override.or(doc.seed).unwrap_or(DEFAULT_SEED);
    (doc.m_min..=doc.m_max)
        .map(|m| {
            let exact = success_probability_exact(m).map_err(core_input("m_max"))?;
            let mc = monte_carlo_success(doc.alpha, m, doc.trials, row_seed(seed, m))
                .map_err(core_input("trials"))?;
            Ok(SweepRow {
                m,
                exact_success: exact,
                closed_form: 1.0 - 2f64.powi(-(m as i32)),
                monte_carlo_frequency: mc.frequency,
                standard_error: mc.standard_error,
                trials: doc.trials,
            })
        })
        .collect()
}

/// Renders sweep rows as CSV with a header row and LF line endings.
pub fn sweep_csv(rows: &[SweepRow]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for row in rows {
        w.serialize(row)
            .map_err(|e| CliError::Input(format!("csv: {e}")))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Input(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn sweep(doc: &ExperimentDoc, seed_override: Option<u64>) -> Result<String, CliError> {
    match doc {
        ExperimentDoc::StochasticSweep(d) => sweep_csv(&sweep_rows(d, seed_override)?),
        other => Err(CliError::input(
            "kind",
            format!("sweep expects stochastic-sweep, got {}", other.kind()),
        )),
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CompileReport {
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    /// Phase-aligned max-entry distance between the rebuilt gate and the input.
    pub distance: f64,
}

/// Parses eight reals `re00 im00 re01 im01 re10 im10 re11 im11`.
pub fn matrix_from_reals(values: &[f64]) -> Result<CMatrix, CliError> {
    if values.len() != 8 {
        return Err(CliError::input(
            "matrix",
            format!("expected 8 reals, got {}", values.len()),
        ));
    }
    let entries: Vec<C64> = values.chunks(2).map(|p| C64::new(p[0], p[1])).collect();
    Ok(CMatrix::from_row_slice(2, 2, &entries))
}

pub fn compile(matrix: &CMatrix) -> Result<CompileReport, CliError> {
    let angles = compile_su2_matrix(matrix).map_err(|e| match e {
        QprocError::NotUnitary { .. } => CliError::input(
            "matrix",
            format!("not unitary, max |U^dagger U - I| = {:.3e}", unitarity_defect(matrix)),
        ),
        other => CliError::input("matrix", other),
    })?;
    let [q1, q2, q3] = angles.values();
    Ok(CompileReport {
        q1,
        q2,
        q3,
        distance: matrix_phase_distance(angles.rebuild().matrix(), matrix),
    })
}

pub fn compile_doc(doc: &ExperimentDoc) -> Result<CompileReport, CliError> {
    match doc {
        ExperimentDoc::Compile(d) => {
            let m = matrix_from_json("matrix", &d.matrix)?;
            if m.nrows() != 2 {
                return Err(CliError::input("matrix", "expected a 2x2 matrix"));
            }
            compile(&m)
        }
        other => Err(CliError::input(
            "kind",
            format!("compile expects compile, got {}", other.kind()),
        )),
    }
}

/// Data register state for reports; used by tests to check outputs.
pub fn data_state(report: &SimulationReport) -> Option<StateVector> {
    let amps = report
        .data_output
        .as_ref()?
        .iter()
        .map(|c| C64::new(c[0], c[1]))
        .collect();
    StateVector::qubits(amps).ok()
}
