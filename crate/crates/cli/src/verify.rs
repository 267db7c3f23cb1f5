//! Built-in invariant suite run by `qproc verify`.

use std::f64::consts::PI;

use qproc::gates::{cnot, compile_su2, embed_single_qubit, theta_matrix, Axis};
use qproc::processor::{
    apply_processor, build_conditional, momentum_basis_state, momentum_kernel_matrix,
    momentum_processor, run_network, FamilyDomain, GateFamily, NetworkSpec, ProgramAssignment,
    ProgramKind, ProgramValue, Slot,
};
use qproc::qstate::{
    commutator_defect, dft, inner_product, inverse_dft, mat_vec, max_abs_diff,
    phase_aligned_distance, schmidt_coefficients, schmidt_rank, tensor_product, unitarity_defect,
    BipartiteCut, CMatrix, FactorRole, StateVector, Unitary, C64,
};
use qproc::random::{random_qubits, random_state, random_unitary};
use qproc::stochastic::{
    cascade, enumerate_outcome_tree, momentum_overlap, monte_carlo_success, overlap_decay,
    phase_rotation, phi_state, success_probability_exact, ForcedOutcomes,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::commands::{sweep_csv, sweep_rows};
use crate::doc::SweepDoc;

/// Size of the entry added to `θ(0, 0)` under fault injection.
pub const FAULT_SIZE: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub worst: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.worst <= self.tolerance
    }

    pub fn line(&self) -> String {
        format!(
            "{:<40} worst={:<10.3e} tol={:<8.1e} {}",
            self.name,
            self.worst,
            self.tolerance,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed()).count()
    }

    pub fn render(&self) -> String {
        let mut out: String = self.checks.iter().map(|c| c.line() + "\n").collect();
        out.push_str(&format!(
            "{} checks, {} failed\n",
            self.checks.len(),
            self.failures()
        ));
        out
    }
}

struct Ctx {
    fault: bool,
    rng: ChaCha8Rng,
}

impl Ctx {
    fn theta(&self, axis: Axis, q: f64) -> CMatrix {
        let mut m = theta_matrix(axis, q);
        if self.fault {
            m[(0, 0)] += C64::new(FAULT_SIZE, 0.0);
        }
        m
    }

    fn rotation(&self, q: [f64; 3]) -> CMatrix {
        self.theta(Axis::Z, q[2]) * self.theta(Axis::Y, q[1]) * self.theta(Axis::X, q[0])
    }
}

/// Deviations a check can report as a hard failure.
const FAILED: f64 = f64::INFINITY;

fn check(name: &'static str, tolerance: f64, worst: f64) -> CheckResult {
    CheckResult {
        name,
        worst: if worst.is_nan() { FAILED } else { worst },
        tolerance,
    }
}

/// Runs all twenty checks.
pub fn run_suite(fault_inject: bool, seed: u64) -> VerifyReport {
    let mut ctx = Ctx {
        fault: fault_inject,
        rng: ChaCha8Rng::seed_from_u64(seed),
    };
    let checks = vec![
        check("qstate.type_invariants", 1e-10, type_invariants(&mut ctx)),
        check("qstate.dft_inverse", 1e-12, dft_inverse(&mut ctx)),
        check("qstate.schmidt_local_unitary", 1e-10, schmidt_local_unitary(&mut ctx)),
        check("qstate.commutator_trace", 1e-10, commutator_trace()),
        check("gates.theta_group_law", 1e-12, theta_group_law(&mut ctx)),
        check("gates.theta_unitary_det", 1e-12, theta_unitary_det(&mut ctx)),
        check("gates.compile_round_trip", 1e-10, compile_round_trip(&mut ctx)),
        check("gates.cnot_embed_patterns", 1e-14, cnot_embed_patterns(&mut ctx)),
        check("processor.basis_program_purity", 1e-12, basis_program_purity(&mut ctx)),
        check("processor.orthogonal_programs", 1e-12, orthogonal_programs(&mut ctx)),
        check("processor.momentum_position_equivalence", 1e-12, momentum_position(&mut ctx)),
        check("processor.network_explicit_product", 1e-12, network_explicit_product(&mut ctx)),
        check("processor.linearity", 1e-12, linearity(&mut ctx)),
        check("stochastic.phi_closed_form", 1e-12, phi_closed_form(&mut ctx)),
        check("stochastic.momentum_equivalence", 1e-12, momentum_equivalence()),
        check("stochastic.cascade_tree", 1e-14, cascade_tree(&mut ctx)),
        check("stochastic.monte_carlo", 4.0, monte_carlo(seed)),
        check("stochastic.success_branch_rotation", 1e-10, success_branch_rotation(&mut ctx)),
        check("stochastic.overlap_decay", 1e-12, overlap_decay_check(&mut ctx)),
        check("cli.deterministic_sweep", 0.0, deterministic_sweep(seed)),
    ];
    VerifyReport { checks }
}

fn type_invariants(ctx: &mut Ctx) -> f64 {
    let r = &mut ctx.rng;
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (da, db) = (r.gen_range(1..6), r.gen_range(1..6));
        let a = random_state(r, &[da], FactorRole::ProgramDiscrete);
        let b = random_state(r, &[db], FactorRole::DataQubit);
        let ab = tensor_product(&a, &b);
        worst = worst.max((ab.norm() - 1.0).abs());
        let u = random_unitary(r, db);
        worst = worst.max(unitarity_defect(u.matrix()));
        let out = u.apply(b.amplitudes()).expect("dimensions agree");
        worst = worst.max((qproc::qstate::vector_norm(&out) - 1.0).abs());
    }
    worst
}

fn dft_inverse(ctx: &mut Ctx) -> f64 {
    let mut worst = 0.0f64;
    for m in 1..=64 {
        let v = random_state(&mut ctx.rng, &[m], FactorRole::ProgramContinuous);
        let f = dft(&v, 0).expect("factor 0 exists");
        worst = worst.max((f.norm() - 1.0).abs());
        let back = inverse_dft(&f, 0).expect("factor 0 exists");
        worst = worst.max(max_abs_diff(back.amplitudes(), v.amplitudes()));
    }
    worst
}

fn schmidt_local_unitary(ctx: &mut Ctx) -> f64 {
    let r = &mut ctx.rng;
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (dl, dr) = (r.gen_range(2..5), r.gen_range(2..5));
        let s = random_state(r, &[dl, dr], FactorRole::DataQubit);
        let cut = BipartiteCut::new(vec![0], 2).expect("valid cut");
        let before = schmidt_coefficients(&s, &cut).expect("valid cut");
        let local = random_unitary(r, dl).matrix().kronecker(random_unitary(r, dr).matrix());
        let t = StateVector::new(mat_vec(&local, s.amplitudes()), vec![dl, dr], s.roles().to_vec());
        let Ok(t) = t else { return FAILED };
        let after = schmidt_coefficients(&t, &cut).expect("valid cut");
        for (x, y) in before.iter().zip(&after) {
            worst = worst.max((x - y).abs());
        }
    }
    worst
}

fn commutator_trace() -> f64 {
    let mut worst = 0.0f64;
    for d in 2..=64 {
        let Ok(c) = commutator_defect(d) else { return FAILED };
        if c.max_deviation_from_identity < 0.5 {
            return FAILED;
        }
        worst = worst.max(c.trace_of_commutator.norm() / d as f64);
    }
    worst
}

fn theta_group_law(ctx: &mut Ctx) -> f64 {
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let (q, s) = (ctx.rng.gen_range(0.0..1.0), ctx.rng.gen_range(0.0..1.0));
        for axis in Axis::ALL {
            let lhs = ctx.theta(axis, q) * ctx.theta(axis, s);
            let rhs = ctx.theta(axis, (q + s).rem_euclid(1.0));
            worst = worst.max(max_abs_diff(lhs.as_slice(), rhs.as_slice()));
        }
    }
    worst
}

fn theta_unitary_det(ctx: &mut Ctx) -> f64 {
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let q = ctx.rng.gen_range(-3.0..3.0);
        for axis in Axis::ALL {
            let m = ctx.theta(axis, q);
            worst = worst.max(unitarity_defect(&m));
            let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
            worst = worst.max((det - C64::new(1.0, 0.0)).norm());
        }
    }
    worst
}

fn compile_round_trip(ctx: &mut Ctx) -> f64 {
    let mut targets: Vec<Unitary> = (0..100).map(|_| random_unitary(&mut ctx.rng, 2)).collect();
    for lock in [0.125, 0.875] {
        for offset in [0.0, 1e-9, -1e-9, 1e-6, -1e-6] {
            let q = [ctx.rng.gen_range(0.0..1.0), lock + offset, ctx.rng.gen_range(0.0..1.0)];
            let m = theta_matrix(Axis::Z, q[2]) * theta_matrix(Axis::Y, q[1]) * theta_matrix(Axis::X, q[0]);
            targets.push(Unitary::new(m).expect("product of unitaries"));
        }
    }
    let mut worst = 0.0f64;
    for t in &targets {
        let Ok(angles) = compile_su2(t) else { return FAILED };
        let rebuilt = ctx.rotation(angles.values());
        worst = worst.max(qproc::qstate::matrix_phase_distance(&rebuilt, t.matrix()));
    }
    worst
}

fn cnot_embed_patterns(ctx: &mut Ctx) -> f64 {
    let mut worst = 0.0f64;
    for n in 2..=4 {
        for control in 0..n {
            for target in (0..n).filter(|&t| t != control) {
                let Ok(g) = cnot(control, target, n) else { return FAILED };
                let (cb, tb) = (1usize << (n - 1 - control), 1usize << (n - 1 - target));
                for row in 0..(1 << n) {
                    for col in 0..(1 << n) {
                        let image = if col & cb != 0 { col ^ tb } else { col };
                        let expected = if image == row { 1.0 } else { 0.0 };
                        worst = worst.max((g.matrix()[(row, col)] - C64::new(expected, 0.0)).norm());
                    }
                }
            }
        }
    }
    let u = random_unitary(&mut ctx.rng, 2);
    for n in 1..=3 {
        for t in 0..n {
            let Ok(e) = embed_single_qubit(&u, t, n) else { return FAILED };
            let stride = 1usize << (n - 1 - t);
            for row in 0..(1 << n) {
                for col in 0..(1 << n) {
                    let expected = if (row & !stride) == (col & !stride) {
                        u.matrix()[(((row & stride) != 0) as usize, ((col & stride) != 0) as usize)]
                    } else {
                        C64::new(0.0, 0.0)
                    };
                    worst = worst.max((e.matrix()[(row, col)] - expected).norm());
                }
            }
        }
    }
    worst
}

fn basis_program_purity(ctx: &mut Ctx) -> f64 {
    let r = &mut ctx.rng;
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let (m, n) = (r.gen_range(1..=16), r.gen_range(1..=3));
        let dim = 1usize << n;
        let blocks: Vec<Unitary> = (0..m).map(|_| random_unitary(r, dim)).collect();
        let Ok(cu) = build_conditional(blocks.clone()) else { return FAILED };
        worst = worst.max(unitarity_defect(&cu.assembled()));
        for _ in 0..5 {
            let p = r.gen_range(0..m);
            let program = StateVector::basis(m, p, FactorRole::ProgramDiscrete).expect("p < m");
            let data = random_qubits(r, n);
            let Ok(out) = apply_processor(&cu, &program, &data) else { return FAILED };
            let rotated = StateVector::qubits(blocks[p].apply(data.amplitudes()).expect("dims agree"));
            let Ok(rotated) = rotated else { return FAILED };
            let expected = tensor_product(&program, &rotated);
            worst = worst.max(max_abs_diff(out.amplitudes(), expected.amplitudes()));
            let cut = BipartiteCut::program_data(&out).expect("program and data present");
            let coeffs = schmidt_coefficients(&out, &cut).expect("valid cut");
            if schmidt_rank(&coeffs) != 1 {
                return FAILED;
            }
            worst = worst.max((coeffs[0] - 1.0).abs());
        }
    }
    worst
}

fn orthogonal_programs(ctx: &mut Ctx) -> f64 {
    let r = &mut ctx.rng;
    let mut worst = 0.0f64;
    let m = 4;
    let blocks: Vec<Unitary> = (0..m).map(|_| random_unitary(r, 2)).collect();
    let Ok(cu) = build_conditional(blocks) else { return FAILED };
    for p in 0..m {
        for pp in 0..m {
            let a = StateVector::basis(m, p, FactorRole::ProgramDiscrete).expect("p < m");
            let b = StateVector::basis(m, pp, FactorRole::ProgramDiscrete).expect("p < m");
            let (s, sp) = (random_qubits(r, 1), random_qubits(r, 1));
            let before = a.inner(&b).expect("same dims") * s.inner(&sp).expect("same dims");
            let x = apply_processor(&cu, &a, &s).expect("dims agree");
            let y = apply_processor(&cu, &b, &sp).expect("dims agree");
            let after = x.inner(&y).expect("same dims");
            worst = worst.max((before - after).norm());
        }
    }
    // non-orthogonal programs cannot each deterministically select their own unitary
    let mut smallest_violation = f64::INFINITY;
    for _ in 0..20 {
        let a = random_state(r, &[3], FactorRole::ProgramDiscrete);
        let b = random_state(r, &[3], FactorRole::ProgramDiscrete);
        let (s, sp) = (random_qubits(r, 1), random_qubits(r, 1));
        let (u, v) = (random_unitary(r, 2), random_unitary(r, 2));
        let ab = a.inner(&b).expect("same dims");
        let before = ab * s.inner(&sp).expect("same dims");
        let us = u.apply(s.amplitudes()).expect("dims agree");
        let vsp = v.apply(sp.amplitudes()).expect("dims agree");
        smallest_violation = smallest_violation.min((before - ab * inner_product(&us, &vsp)).norm());
    }
    if smallest_violation < 1e-6 {
        return FAILED;
    }
    worst
}

fn momentum_position(ctx: &mut Ctx) -> f64 {
    let mut worst = 0.0f64;
    for m in [2usize, 4, 8] {
        let table: Vec<Unitary> = (0..m).map(|_| random_unitary(&mut ctx.rng, 2)).collect();
        let Ok(family) = GateFamily::new(FamilyDomain::Momentum, table) else { return FAILED };
        let Ok(cu) = momentum_processor(&family, m) else { return FAILED };
        let Ok(kernel) = momentum_kernel_matrix(&family) else { return FAILED };
        worst = worst.max(max_abs_diff(cu.position_matrix().as_slice(), kernel.as_slice()));
        for p in 0..m {
            let program = momentum_basis_state(m, p).expect("p < m");
            let data = random_qubits(&mut ctx.rng, 1);
            let Ok(out) = apply_processor(&cu, &program, &data) else { return FAILED };
            let rotated = family.table()[p].apply(data.amplitudes()).expect("dims agree");
            let expected = tensor_product(&program, &StateVector::qubits(rotated).expect("unit norm"));
            worst = worst.max(max_abs_diff(out.amplitudes(), expected.amplitudes()));
            let direct = mat_vec(&kernel, tensor_product(&program, &data).amplitudes());
            worst = worst.max(max_abs_diff(&direct, expected.amplitudes()));
        }
    }
    worst
}

fn random_network(r: &mut ChaCha8Rng, n: usize, slots: usize) -> NetworkSpec {
    let mut out = Vec::new();
    let mut next = 0;
    for _ in 0..slots {
        if n >= 2 && r.gen_bool(0.4) {
            let control = r.gen_range(0..n);
            let mut target = r.gen_range(0..n - 1);
            if target >= control {
                target += 1;
            }
            out.push(Slot::Controlled {
                control_bit: next,
                control,
                target,
            });
            next += 1;
        } else {
            out.push(Slot::Rotation {
                qubit: r.gen_range(0..n),
                vars: [next, next + 1, next + 2],
            });
            next += 3;
        }
    }
    NetworkSpec::new(n, out).expect("ids assigned in order")
}

fn basis_value(kind: ProgramKind, index: usize) -> ProgramValue {
    match kind {
        ProgramKind::Continuous => ProgramValue::Momentum(index),
        ProgramKind::Discrete => ProgramValue::Bit(index == 1),
    }
}

fn random_config(r: &mut ChaCha8Rng, spec: &NetworkSpec, m: usize) -> Vec<usize> {
    spec.program_kinds()
        .iter()
        .map(|k| match k {
            ProgramKind::Continuous => r.gen_range(0..m),
            ProgramKind::Discrete => r.gen_range(0..2),
        })
        .collect()
}

fn assignment_for(spec: &NetworkSpec, config: &[usize]) -> ProgramAssignment {
    ProgramAssignment::new(
        spec.program_kinds()
            .iter()
            .zip(config)
            .map(|(&k, &i)| basis_value(k, i))
            .collect(),
    )
}

fn explicit_product(ctx: &Ctx, spec: &NetworkSpec, config: &[usize], m: usize) -> CMatrix {
    let n = spec.n();
    let mut u = CMatrix::identity(1 << n, 1 << n);
    for slot in spec.slots() {
        let g = match *slot {
            Slot::Rotation { qubit, vars } => {
                let q = vars.map(|v| config[v] as f64 / m as f64);
                let single = ctx.rotation(q);
                let mut full = CMatrix::identity(1, 1);
                for w in 0..n {
                    full = if w == qubit {
                        full.kronecker(&single)
                    } else {
                        full.kronecker(&CMatrix::identity(2, 2))
                    };
                }
                full
            }
            Slot::Controlled {
                control_bit,
                control,
                target,
            } => {
                if config[control_bit] == 1 {
                    cnot(control, target, n).expect("distinct wires").into_matrix()
                } else {
                    CMatrix::identity(1 << n, 1 << n)
                }
            }
        };
        u = g * u;
    }
    u
}

fn network_explicit_product(ctx: &mut Ctx) -> f64 {
    let m = 16;
    let mut worst = 0.0f64;
    for _ in 0..40 {
        let n = ctx.rng.gen_range(1..=3);
        let slots = ctx.rng.gen_range(1..=6);
        let spec = random_network(&mut ctx.rng, n, slots);
        let config = random_config(&mut ctx.rng, &spec, m);
        let data = random_qubits(&mut ctx.rng, n);
        let Ok(run) = run_network(&spec, &assignment_for(&spec, &config), &data, m) else {
            return FAILED;
        };
        let Some(out) = run.data_state() else { return FAILED };
        let expected = mat_vec(&explicit_product(ctx, &spec, &config, m), data.amplitudes());
        worst = worst.max(max_abs_diff(out.amplitudes(), &expected));
    }
    worst
}

fn linearity(ctx: &mut Ctx) -> f64 {
    let r = &mut ctx.rng;
    let m = 4;
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let spec = random_network(r, 2, 3);
        let config = random_config(r, &spec, m);
        let kind = spec.program_kinds()[0];
        let weights = random_state(
            r,
            &[if kind == ProgramKind::Continuous { m } else { 2 }],
            FactorRole::ProgramDiscrete,
        )
        .into_amplitudes();
        let mut assignment = assignment_for(&spec, &config);
        assignment.set(
            0,
            match kind {
                ProgramKind::Continuous => ProgramValue::MomentumAmplitudes(weights.clone()),
                ProgramKind::Discrete => ProgramValue::BitAmplitudes([weights[0], weights[1]]),
            },
        );
        let data = random_qubits(r, 2);
        let Ok(joint) = run_network(&spec, &assignment, &data, m).and_then(|x| x.joint_state()) else {
            return FAILED;
        };
        let mut combined = vec![C64::new(0.0, 0.0); joint.len()];
        for (i, w) in weights.iter().enumerate() {
            let mut basis = assignment.clone();
            basis.set(0, basis_value(kind, i));
            let Ok(part) = run_network(&spec, &basis, &data, m).and_then(|x| x.joint_state()) else {
                return FAILED;
            };
            for (acc, a) in combined.iter_mut().zip(part.amplitudes()) {
                *acc += w * a;
            }
        }
        worst = worst.max(max_abs_diff(joint.amplitudes(), &combined));
    }
    worst
}

fn closed_form(alpha: f64, m: u32) -> Vec<C64> {
    let dim = 1usize << m;
    (0..dim)
        .map(|k| {
            let phase = alpha * (dim as f64 - 1.0) / 2.0 - k as f64 * alpha;
            C64::from_polar(1.0 / (dim as f64).sqrt(), phase)
        })
        .collect()
}

fn phi_closed_form(ctx: &mut Ctx) -> f64 {
    let mut worst = 0.0f64;
    for m in 1..=8 {
        for _ in 0..10 {
            let alpha = ctx.rng.gen_range(-10.0..10.0);
            let Ok(s) = phi_state(alpha, m) else { return FAILED };
            worst = worst.max(max_abs_diff(s.amplitudes(), &closed_form(alpha, m)));
        }
    }
    worst
}

fn momentum_equivalence() -> f64 {
    let mut worst = 0.0f64;
    for m in 1..=8u32 {
        let dim = 1usize << m;
        for p in 0..dim {
            let alpha = -2.0 * PI * p as f64 / dim as f64;
            let Ok(hit) = momentum_overlap(alpha, m, p) else { return FAILED };
            worst = worst.max((hit - 1.0).abs());
            for step in 1..dim.min(9) {
                let Ok(miss) = momentum_overlap(alpha, m, (p + step) % dim) else { return FAILED };
                worst = worst.max(miss);
            }
        }
    }
    worst
}

fn cascade_tree(ctx: &mut Ctx) -> f64 {
    let mut worst = 0.0f64;
    for m in 1..=12u32 {
        let Ok(p) = success_probability_exact(m) else { return FAILED };
        worst = worst.max((p - (1.0 - 2f64.powi(-(m as i32)))).abs());
    }
    for _ in 0..5 {
        let data = random_qubits(&mut ctx.rng, 2);
        let target = ctx.rng.gen_range(0..2);
        let alpha = ctx.rng.gen_range(0.0..2.0 * PI);
        let Ok(t) = enumerate_outcome_tree(&data, target, alpha, 6) else { return FAILED };
        worst = worst.max((t.success - (1.0 - 2f64.powi(-6))).abs());
        worst = worst.max((t.success + t.failure - 1.0).abs());
    }
    worst
}

/// Largest deviation of the Monte Carlo frequency, in exact standard errors.
fn monte_carlo(seed: u64) -> f64 {
    let trials = 100_000;
    let mut worst = 0.0f64;
    for m in 1..=3u32 {
        let Ok(s) = monte_carlo_success(0.77, m, trials, seed.wrapping_add(m as u64)) else {
            return FAILED;
        };
        let exact = 1.0 - 2f64.powi(-(m as i32));
        let se = (exact * (1.0 - exact) / trials as f64).sqrt();
        worst = worst.max((s.frequency - exact).abs() / se);
    }
    worst
}

fn success_branch_rotation(ctx: &mut Ctx) -> f64 {
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let n = ctx.rng.gen_range(1..=3);
        let target = ctx.rng.gen_range(0..n);
        let alpha = ctx.rng.gen_range(0.0..2.0 * PI);
        let data = random_qubits(&mut ctx.rng, n);
        let gate = Unitary::new(phase_rotation(alpha)).expect("diagonal phases");
        let expected = embed_single_qubit(&gate, target, n)
            .and_then(|g| g.apply(data.amplitudes()))
            .expect("target in range");
        let m = 4;
        for fails in 0..m {
            let path: Vec<u8> = std::iter::repeat_n(1, fails as usize).chain([0]).collect();
            let Ok(out) = cascade(&data, target, alpha, m, &mut ForcedOutcomes::new(path)) else {
                return FAILED;
            };
            if !out.success || out.stages_used != fails + 1 {
                return FAILED;
            }
            worst = worst.max(phase_aligned_distance(out.final_state.amplitudes(), &expected));
        }
    }
    worst
}

fn overlap_decay_check(ctx: &mut Ctx) -> f64 {
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let a = ctx.rng.gen_range(0.0..2.0 * PI);
        let b = ctx.rng.gen_range(0.0..2.0 * PI);
        for m in 1..=12 {
            let (Ok(ab), Ok(ba)) = (overlap_decay(a, b, m), overlap_decay(b, a, m)) else {
                return FAILED;
            };
            worst = worst.max((ab - ba).abs());
            let brute = inner_product(&closed_form(a, m), &closed_form(b, m)).norm();
            worst = worst.max((ab - brute).abs());
        }
        let Ok(same) = overlap_decay(a, a + 2.0 * PI, 6) else { return FAILED };
        worst = worst.max((same - 1.0).abs());
        let Ok(apart) = overlap_decay(a, a + 0.3, 6) else { return FAILED };
        if apart > 1.0 - 1e-3 {
            return FAILED;
        }
    }
    worst
}

fn deterministic_sweep(seed: u64) -> f64 {
    let doc = SweepDoc {
        alpha: 0.77,
        m_min: 1,
        m_max: 4,
        trials: 2_000,
        seed: Some(seed),
    };
    let render = || sweep_rows(&doc, None).and_then(|rows| sweep_csv(&rows));
    match (render(), render()) {
        (Ok(a), Ok(b)) if a == b => 0.0,
        _ => FAILED,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_suite_passes_with_twenty_lines() {
        let report = run_suite(false, 7);
        assert_eq!(report.checks.len(), 20);
        for c in &report.checks {
            assert!(c.passed(), "{}", c.line());
        }
    }

    #[test]
    fn fault_breaks_theta_checks() {
        let report = run_suite(true, 7);
        let det = report
            .checks
            .iter()
            .find(|c| c.name == "gates.theta_unitary_det")
            .unwrap();
        assert!(!det.passed());
        assert!(report.failures() >= 1);
    }
}
