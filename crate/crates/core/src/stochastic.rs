//! Measurement-based programmable U(1) gate and its doubling cascade.
//!
//! A program qubit `|φ_a⟩ = (e^{ia/2}|0⟩ + e^{-ia/2}|1⟩)/√2` is consumed per
//! stage: CNOT from the data qubit onto it, then a computational-basis
//! measurement. Outcome 0 leaves `R(a) = diag(e^{ia/2}, e^{-ia/2})` on the data;
//! outcome 1 leaves `R(-a)`, and the next stage retries with `2a`.

use std::collections::VecDeque;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{QprocError, Result};
use crate::gates::apply_cnot;
use crate::qstate::{dft_coefficient, tensor_product, CMatrix, FactorRole, StateVector, C64};

/// Program phase reduced into `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct ProgramPhase(f64);

impl ProgramPhase {
    pub fn new(alpha: f64) -> Self {
        let r = alpha.rem_euclid(2.0 * PI);
        Self(if r >= 2.0 * PI { 0.0 } else { r })
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Program register `⊗_{k=0}^{m-1} |φ_{2^k α}⟩` of `M = 2^m` amplitudes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CascadeProgram {
    alpha: ProgramPhase,
    m: u32,
}

impl CascadeProgram {
    pub fn new(alpha: f64, m: u32) -> Result<Self> {
        check_stages(m)?;
        Ok(Self {
            alpha: ProgramPhase::new(alpha),
            m,
        })
    }

    pub fn alpha(&self) -> ProgramPhase {
        self.alpha
    }

    pub fn stages(&self) -> u32 {
        self.m
    }

    pub fn dim(&self) -> usize {
        1usize << self.m
    }

    pub fn state(&self) -> StateVector {
        phi_state(self.alpha.value(), self.m).expect("stage count validated")
    }
}

fn check_stages(m: u32) -> Result<()> {
    if m < 1 {
        return Err(QprocError::InvalidParameter("stage count must be at least 1".into()));
    }
    if m > 24 {
        return Err(QprocError::InvalidParameter(format!(
            "stage count {m} exceeds supported maximum of 24"
        )));
    }
    Ok(())
}

/// `|φ_a⟩ = (e^{ia/2}|0⟩ + e^{-ia/2}|1⟩) / √2`.
pub fn phi_single(alpha: f64) -> StateVector {
    let h = 1.0 / 2f64.sqrt();
    let amps = vec![
        C64::from_polar(h, alpha / 2.0),
        C64::from_polar(h, -alpha / 2.0),
    ];
    StateVector::single(amps, FactorRole::ProgramDiscrete).expect("unit norm")
}

/// `⊗_{k=0}^{m-1} |φ_{2^k α}⟩` indexed by `K = b_0 + 2 b_1 + 4 b_2 + …`,
/// where `b_k` is the bit of stage `k`. Under the slowest-first factor
/// convention this puts stage `m-1` as factor 0 and stage 0 as the last factor.
pub fn phi_state(alpha: f64, m: u32) -> Result<StateVector> {
    check_stages(m)?;
    let mut state = phi_single(alpha * 2f64.powi(m as i32 - 1));
    for k in (0..m as i32 - 1).rev() {
        state = tensor_product(&state, &phi_single(alpha * 2f64.powi(k)));
    }
    Ok(state)
}

/// `|⟨p̃|Φ_{α,m}⟩|`, with `|p̃⟩` the DFT momentum state of dimension `2^m`.
pub fn momentum_overlap(alpha: f64, m: u32, p: usize) -> Result<f64> {
    let phi = phi_state(alpha, m)?;
    if p >= phi.len() {
        return Err(QprocError::InvalidParameter(format!(
            "momentum {p} out of range for dimension {}",
            phi.len()
        )));
    }
    Ok(dft_coefficient(phi.amplitudes(), p).norm())
}

/// `|⟨Φ_{α,m}|Φ_{β,m}⟩| = ∏_k |cos(2^k (α - β) / 2)|`.
pub fn overlap_decay(alpha: f64, beta: f64, m: u32) -> Result<f64> {
    check_stages(m)?;
    let delta = alpha - beta;
    Ok((0..m as i32)
        .map(|k| (2f64.powi(k) * delta / 2.0).cos().abs())
        .product())
}

/// `R(α) = diag(e^{iα/2}, e^{-iα/2})`.
pub fn phase_rotation(alpha: f64) -> CMatrix {
    CMatrix::from_row_slice(
        2,
        2,
        &[
            C64::from_polar(1.0, alpha / 2.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::from_polar(1.0, -alpha / 2.0),
        ],
    )
}

/// Supplies measurement outcomes given the probability of outcome 1.
pub trait OutcomeSource {
    fn draw(&mut self, probability_of_one: f64) -> Result<u8>;
}

/// Pseudo-random outcomes from a seeded ChaCha stream.
#[derive(Clone, Debug)]
pub struct SeededSampler {
    rng: ChaCha8Rng,
}

impl SeededSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream for one trial of a batch.
    pub fn for_trial(seed: u64, trial: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        Self { rng }
    }
}

impl OutcomeSource for SeededSampler {
    fn draw(&mut self, probability_of_one: f64) -> Result<u8> {
        Ok(u8::from(self.rng.gen::<f64>() < probability_of_one))
    }
}

/// A fixed outcome sequence; drawing past its end is an error.
#[derive(Clone, Debug, Default)]
pub struct ForcedOutcomes {
    bits: VecDeque<u8>,
}

impl ForcedOutcomes {
    pub fn new(bits: impl IntoIterator<Item = u8>) -> Self {
        Self {
            bits: bits.into_iter().collect(),
        }
    }
}

impl OutcomeSource for ForcedOutcomes {
    fn draw(&mut self, _probability_of_one: f64) -> Result<u8> {
        match self.bits.pop_front() {
            Some(b @ (0 | 1)) => Ok(b),
            Some(other) => Err(QprocError::InvalidParameter(format!(
                "forced outcome {other} is not a bit"
            ))),
            None => Err(QprocError::InvalidParameter(
                "forced outcome sequence exhausted".into(),
            )),
        }
    }
}

/// One measurement round.
#[derive(Clone, Debug, PartialEq)]
pub struct AttemptOutcome {
    pub outcome_bit: u8,
    pub branch_probability: f64,
    /// Probabilities of outcomes 0 and 1.
    pub probabilities: [f64; 2],
    /// Renormalized data register after the measurement.
    pub post_state: StateVector,
    /// Phase still owed for `R(α)`: 0 on success, `2α` on failure.
    pub residual_phase: f64,
}

fn qubit_count(data: &StateVector) -> Result<usize> {
    let len = data.len();
    if len < 2 || !len.is_power_of_two() {
        return Err(QprocError::InvalidParameter(format!(
            "data register of {len} amplitudes is not a qubit register"
        )));
    }
    Ok(len.trailing_zeros() as usize)
}

/// Runs one stage on qubit `target` of `data` with program phase `alpha`.
pub fn attempt(
    data: &StateVector,
    target: usize,
    alpha: f64,
    source: &mut dyn OutcomeSource,
) -> Result<AttemptOutcome> {
    let n = qubit_count(data)?;
    if target >= n {
        return Err(QprocError::QubitOutOfRange { qubit: target, n });
    }
    let data = data.with_roles(FactorRole::DataQubit);
    let joint = tensor_product(&data, &phi_single(alpha));
    let mut amps = joint.into_amplitudes();
    // program qubit is the last (fastest) factor
    apply_cnot(&mut amps, n + 1, target, n)?;

    let mut probabilities = [0.0f64; 2];
    for (i, a) in amps.iter().enumerate() {
        probabilities[i & 1] += a.norm_sqr();
    }
    let outcome_bit = source.draw(probabilities[1])?;
    let branch_probability = probabilities[outcome_bit as usize];
    if branch_probability <= 0.0 {
        return Err(QprocError::InvalidParameter(format!(
            "outcome {outcome_bit} has zero probability"
        )));
    }
    let scale = 1.0 / branch_probability.sqrt();
    let post: Vec<C64> = amps
        .iter()
        .skip(outcome_bit as usize)
        .step_by(2)
        .map(|a| a * scale)
        .collect();
    let post_state = StateVector::normalized(post, data.dims().to_vec(), data.roles().to_vec())?;
    Ok(AttemptOutcome {
        outcome_bit,
        branch_probability,
        probabilities,
        post_state,
        residual_phase: if outcome_bit == 0 { 0.0 } else { 2.0 * alpha },
    })
}

/// Result of a cascade run.
#[derive(Clone, Debug, PartialEq)]
pub struct CascadeResult {
    pub final_state: StateVector,
    pub success: bool,
    pub stages_used: u32,
    /// Net rotation angle applied: `α` on success, `-(2^m - 1) α` after `m` failures.
    pub applied_phase: f64,
    /// Rotation still owed to reach `R(α)`: 0 on success, `2^m α` otherwise.
    pub residual_phase: f64,
    /// Probability of the outcome path taken.
    pub path_probability: f64,
}

/// Up to `m` stages; stage `k` attempts `R(2^k α)` and stops on the first success.
pub fn cascade(
    data: &StateVector,
    target: usize,
    alpha: f64,
    m: u32,
    source: &mut dyn OutcomeSource,
) -> Result<CascadeResult> {
    check_stages(m)?;
    let mut state = data.clone();
    let mut owed = alpha;
    let mut applied = 0.0;
    let mut path_probability = 1.0;
    for stage in 0..m {
        let outcome = attempt(&state, target, owed, source)?;
        path_probability *= outcome.branch_probability;
        state = outcome.post_state;
        if outcome.outcome_bit == 0 {
            return Ok(CascadeResult {
                final_state: state,
                success: true,
                stages_used: stage + 1,
                applied_phase: applied + owed,
                residual_phase: 0.0,
                path_probability,
            });
        }
        applied -= owed;
        owed = outcome.residual_phase;
    }
    Ok(CascadeResult {
        final_state: state,
        success: false,
        stages_used: m,
        applied_phase: applied,
        residual_phase: owed,
        path_probability,
    })
}

/// Exhaustive outcome-tree probabilities of an `m`-stage cascade.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TreeProbabilities {
    pub success: f64,
    pub failure: f64,
    pub leaves: usize,
}

/// Walks every measurement branch, forcing each outcome in turn and
/// multiplying the branch probabilities the simulation reports.
pub fn enumerate_outcome_tree(
    data: &StateVector,
    target: usize,
    alpha: f64,
    m: u32,
) -> Result<TreeProbabilities> {
    check_stages(m)?;
    let mut totals = TreeProbabilities {
        success: 0.0,
        failure: 0.0,
        leaves: 0,
    };
    let mut frontier = vec![(data.clone(), alpha, 1.0f64)];
    for stage in 0..m {
        let mut next = Vec::new();
        for (state, owed, weight) in frontier {
            for bit in [0u8, 1] {
                let outcome = attempt(&state, target, owed, &mut ForcedOutcomes::new([bit]))?;
                let w = weight * outcome.branch_probability;
                match bit {
                    0 => {
                        totals.success += w;
                        totals.leaves += 1;
                    }
                    _ if stage + 1 == m => {
                        totals.failure += w;
                        totals.leaves += 1;
                    }
                    _ => next.push((outcome.post_state, outcome.residual_phase, w)),
                }
            }
        }
        frontier = next;
    }
    Ok(totals)
}

/// Data state used where the cascade statistics are data-independent.
pub fn reference_data() -> StateVector {
    StateVector::qubits(vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)]).expect("unit norm")
}

/// Success probability of an `m`-stage cascade summed over the outcome tree.
pub fn success_probability_exact(m: u32) -> Result<f64> {
    Ok(enumerate_outcome_tree(&reference_data(), 0, 1.0, m)?.success)
}

/// Monte Carlo estimate of the cascade success probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonteCarloSummary {
    pub trials: u64,
    pub successes: u64,
    pub frequency: f64,
    /// `sqrt(f (1 - f) / trials)`.
    pub standard_error: f64,
}

/// Runs `trials` independent cascades, trial `t` drawing from stream `t` of `seed`.
pub fn monte_carlo_success(alpha: f64, m: u32, trials: u64, seed: u64) -> Result<MonteCarloSummary> {
    check_stages(m)?;
    if trials == 0 {
        return Err(QprocError::InvalidParameter("trials must be at least 1".into()));
    }
    let data = reference_data();
    let mut successes = 0;
    for trial in 0..trials {
        let mut sampler = SeededSampler::for_trial(seed, trial);
        if cascade(&data, 0, alpha, m, &mut sampler)?.success {
            successes += 1;
        }
    }
    let frequency = successes as f64 / trials as f64;
    Ok(MonteCarloSummary {
        trials,
        successes,
        frequency,
        standard_error: (frequency * (1.0 - frequency) / trials as f64).sqrt(),
    })
}
