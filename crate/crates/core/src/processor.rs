//! Programmable processors: conditional dynamics `U = Σ_P |P⟩⟨P| ⊗ u_P`,
//! the momentum-conditioned operator `Ũ`, the grid-coordinate action, and the
//! network runner for rotation triples and control-bit-gated CNOTs.
//!
//! Program states handed to [`apply_processor`] and [`position_action`] are in
//! the grid (computational) representation. [`run_network`] reports each
//! continuous program variable by its momentum coefficients.

use nalgebra::DMatrix;

use crate::error::{QprocError, Result};
use crate::gates::{apply_cnot, apply_single_qubit, theta_matrix, Axis};
use crate::qstate::{
    dft_vector, singular_values_desc, tensor_product, vector_norm, CMatrix, FactorRole,
    StateVector, Unitary, C64, NORM_TOL,
};

/// Default number of integer momenta kept per continuous program variable.
pub const DEFAULT_MOMENTUM_RESOLUTION: usize = 256;

/// Largest joint dimension [`NetworkRun::joint_state`] will materialize.
pub const MAX_DENSE_DIM: usize = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyDomain {
    /// Integer momenta `p = 0..M-1`.
    Momentum,
    /// Grid coordinates `j = 0..M-1`, i.e. `q_j = j / M`.
    Grid,
}

impl FamilyDomain {
    fn name(self) -> &'static str {
        match self {
            FamilyDomain::Momentum => "momentum",
            FamilyDomain::Grid => "grid",
        }
    }
}

/// A family `index ↦ u_(index)` evaluated into a table.
#[derive(Clone, Debug, PartialEq)]
pub struct GateFamily {
    domain: FamilyDomain,
    table: Vec<Unitary>,
}

impl GateFamily {
    pub fn new(domain: FamilyDomain, table: Vec<Unitary>) -> Result<Self> {
        let first = table
            .first()
            .ok_or_else(|| QprocError::InvalidParameter("empty gate family".into()))?;
        let dim = first.dim();
        if let Some(bad) = table.iter().find(|u| u.dim() != dim) {
            return Err(QprocError::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Self { domain, table })
    }

    pub fn from_fn(domain: FamilyDomain, size: usize, f: impl FnMut(usize) -> Unitary) -> Result<Self> {
        Self::new(domain, (0..size).map(f).collect())
    }

    /// `index ↦ θ_axis(index / size)`.
    pub fn theta(domain: FamilyDomain, axis: Axis, size: usize) -> Self {
        Self::from_fn(domain, size, |i| {
            crate::gates::theta_gate(axis, i as f64 / size as f64)
        })
        .expect("theta family is non-empty and uniform")
    }

    pub fn constant(domain: FamilyDomain, size: usize, u: Unitary) -> Result<Self> {
        Self::new(domain, vec![u; size])
    }

    pub fn domain(&self) -> FamilyDomain {
        self.domain
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn data_dim(&self) -> usize {
        self.table[0].dim()
    }

    pub fn table(&self) -> &[Unitary] {
        &self.table
    }

    fn expect_domain(&self, expected: FamilyDomain) -> Result<()> {
        if self.domain != expected {
            return Err(QprocError::DomainMismatch {
                expected: expected.name(),
                found: self.domain.name(),
            });
        }
        Ok(())
    }
}

/// Basis of the program register in which a [`ConditionalUnitary`] is block-diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProgramBasis {
    Computational,
    Momentum,
}

/// Block-diagonal joint operator `Σ_P |P⟩⟨P| ⊗ u_P`, with `|P⟩` taken from
/// [`ProgramBasis`].
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalUnitary {
    blocks: Vec<Unitary>,
    data_dim: usize,
    basis: ProgramBasis,
}

impl ConditionalUnitary {
    pub fn program_dim(&self) -> usize {
        self.blocks.len()
    }

    pub fn data_dim(&self) -> usize {
        self.data_dim
    }

    pub fn basis(&self) -> ProgramBasis {
        self.basis
    }

    pub fn blocks(&self) -> &[Unitary] {
        &self.blocks
    }

    pub fn block(&self, program: usize) -> Option<&Unitary> {
        self.blocks.get(program)
    }

    /// The `MN × MN` block-diagonal matrix, expressed in this operator's own
    /// program basis.
    pub fn assembled(&self) -> CMatrix {
        let n = self.data_dim;
        let size = self.program_dim() * n;
        let mut m = CMatrix::zeros(size, size);
        for (p, block) in self.blocks.iter().enumerate() {
            m.view_mut((p * n, p * n), (n, n)).copy_from(block.matrix());
        }
        m
    }

    /// Slices block `P` back out of an assembled matrix.
    pub fn extract_block(assembled: &CMatrix, data_dim: usize, program: usize) -> CMatrix {
        let o = program * data_dim;
        assembled.view((o, o), (data_dim, data_dim)).into_owned()
    }

    /// The operator with the program factor in the grid representation:
    /// [`Self::assembled`] itself for computational processors, and
    /// `(F† ⊗ I) · assembled · (F ⊗ I)` for momentum processors.
    pub fn position_matrix(&self) -> CMatrix {
        let assembled = self.assembled();
        match self.basis {
            ProgramBasis::Computational => assembled,
            ProgramBasis::Momentum => {
                let f = crate::qstate::dft_matrix(self.program_dim())
                    .kronecker(&CMatrix::identity(self.data_dim, self.data_dim));
                f.adjoint() * assembled * f
            }
        }
    }
}

/// Assembles `U = Σ_P |P⟩⟨P| ⊗ u_P` from `M` equally sized unitaries.
pub fn build_conditional(blocks: Vec<Unitary>) -> Result<ConditionalUnitary> {
    let data_dim = blocks
        .first()
        .ok_or_else(|| QprocError::InvalidParameter("no program blocks".into()))?
        .dim();
    if let Some(bad) = blocks.iter().find(|u| u.dim() != data_dim) {
        return Err(QprocError::DimensionMismatch {
            expected: data_dim,
            found: bad.dim(),
        });
    }
    Ok(ConditionalUnitary {
        blocks,
        data_dim,
        basis: ProgramBasis::Computational,
    })
}

/// [`build_conditional`] from raw matrices, rejecting non-unitary blocks.
pub fn build_conditional_from_matrices(blocks: Vec<CMatrix>) -> Result<ConditionalUnitary> {
    let blocks = blocks
        .into_iter()
        .map(Unitary::new)
        .collect::<Result<Vec<_>>>()?;
    build_conditional(blocks)
}

/// `Ũ = Σ_p |p̃⟩⟨p̃| ⊗ u_(p)`, block-diagonal in the momentum basis of an
/// `M`-point program register.
pub fn momentum_processor(family: &GateFamily, m: usize) -> Result<ConditionalUnitary> {
    family.expect_domain(FamilyDomain::Momentum)?;
    if family.size() != m {
        return Err(QprocError::DimensionMismatch {
            expected: m,
            found: family.size(),
        });
    }
    Ok(ConditionalUnitary {
        blocks: family.table.clone(),
        data_dim: family.data_dim(),
        basis: ProgramBasis::Momentum,
    })
}

/// Grid-representation matrix of `Ũ` from its kernel
/// `⟨j|Ũ|j'⟩ = (1/M) Σ_p e^{2πi p (j - j') / M} u_(p)`, without any DFT.
pub fn momentum_kernel_matrix(family: &GateFamily) -> Result<CMatrix> {
    family.expect_domain(FamilyDomain::Momentum)?;
    let m = family.size();
    let n = family.data_dim();
    let mut out = CMatrix::zeros(m * n, m * n);
    for j in 0..m {
        for jp in 0..m {
            let shift = (j + m - jp) % m;
            let mut block = CMatrix::zeros(n, n);
            for (p, u) in family.table.iter().enumerate() {
                let angle = 2.0 * std::f64::consts::PI * ((p * shift) % m) as f64 / m as f64;
                block += u.matrix() * C64::from_polar(1.0 / m as f64, angle);
            }
            out.view_mut((j * n, jp * n), (n, n)).copy_from(&block);
        }
    }
    Ok(out)
}

/// Grid-representation momentum eigenstate, amplitudes `e^{2πi p j / M} / √M`.
pub fn momentum_basis_state(m: usize, p: usize) -> Result<StateVector> {
    if p >= m {
        return Err(QprocError::InvalidParameter(format!(
            "momentum {p} out of range for resolution {m}"
        )));
    }
    let mut e = vec![C64::new(0.0, 0.0); m];
    e[p] = C64::new(1.0, 0.0);
    StateVector::single(dft_vector(&e, true), FactorRole::ProgramContinuous)
}

/// `U (program ⊗ data)`.
pub fn apply_processor(
    u: &ConditionalUnitary,
    program: &StateVector,
    data: &StateVector,
) -> Result<StateVector> {
    if program.len() != u.program_dim() {
        return Err(QprocError::DimensionMismatch {
            expected: u.program_dim(),
            found: program.len(),
        });
    }
    if data.len() != u.data_dim() {
        return Err(QprocError::DimensionMismatch {
            expected: u.data_dim(),
            found: data.len(),
        });
    }
    let m = u.program_dim();
    let n = u.data_dim();
    let joint = tensor_product(program, data);
    let mut amps = joint.amplitudes().to_vec();

    let transform_program = |amps: &mut Vec<C64>, inverse: bool| {
        let mut column = vec![C64::new(0.0, 0.0); m];
        for i in 0..n {
            for (p, slot) in column.iter_mut().enumerate() {
                *slot = amps[p * n + i];
            }
            for (p, value) in dft_vector(&column, inverse).into_iter().enumerate() {
                amps[p * n + i] = value;
            }
        }
    };

    if u.basis == ProgramBasis::Momentum {
        transform_program(&mut amps, false);
    }
    for (p, block) in u.blocks.iter().enumerate() {
        let slice = &mut amps[p * n..(p + 1) * n];
        let out = block.apply(slice)?;
        slice.copy_from_slice(&out);
    }
    if u.basis == ProgramBasis::Momentum {
        transform_program(&mut amps, true);
    }
    Ok(StateVector::from_parts(
        amps,
        joint.dims().to_vec(),
        joint.roles().to_vec(),
    ))
}

/// Grid-coordinate action `Û(ψ ⊗ s)`: amplitude row `j` becomes
/// `ψ_j · u_(q_j) s`.
pub fn position_action(
    family: &GateFamily,
    program: &StateVector,
    data: &StateVector,
) -> Result<StateVector> {
    family.expect_domain(FamilyDomain::Grid)?;
    if program.len() != family.size() {
        return Err(QprocError::DimensionMismatch {
            expected: family.size(),
            found: program.len(),
        });
    }
    if data.len() != family.data_dim() {
        return Err(QprocError::DimensionMismatch {
            expected: family.data_dim(),
            found: data.len(),
        });
    }
    let mut amps = Vec::with_capacity(program.len() * data.len());
    for (psi, u) in program.amplitudes().iter().zip(&family.table) {
        amps.extend(u.apply(data.amplitudes())?.into_iter().map(|a| psi * a));
    }
    let dims = program.dims().iter().chain(data.dims()).copied().collect();
    let roles = program.roles().iter().chain(data.roles()).copied().collect();
    Ok(StateVector::from_parts(amps, dims, roles))
}

/// One step of a processor network.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Slot {
    /// `θ_1`, `θ_2`, `θ_3` on `qubit`, each driven by a continuous program variable.
    Rotation { qubit: usize, vars: [usize; 3] },
    /// CNOT `control → target`, applied when program bit `control_bit` is 1.
    Controlled {
        control_bit: usize,
        control: usize,
        target: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProgramKind {
    Continuous,
    Discrete,
}

/// An ordered list of slots over `n` data qubits. Program factor ids run over
/// `0..num_program_factors()` and each id feeds exactly one gate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkSpec {
    n: usize,
    slots: Vec<Slot>,
    kinds: Vec<ProgramKind>,
}

impl NetworkSpec {
    pub fn new(n: usize, slots: Vec<Slot>) -> Result<Self> {
        if n == 0 {
            return Err(QprocError::InvalidNetwork("no data qubits".into()));
        }
        let mut kinds: Vec<Option<ProgramKind>> = Vec::new();
        let mut claim = |id: usize, kind: ProgramKind| -> Result<()> {
            if kinds.len() <= id {
                kinds.resize(id + 1, None);
            }
            if kinds[id].is_some() {
                return Err(QprocError::InvalidNetwork(format!(
                    "program factor {id} used more than once"
                )));
            }
            kinds[id] = Some(kind);
            Ok(())
        };
        for slot in &slots {
            match *slot {
                Slot::Rotation { qubit, vars } => {
                    if qubit >= n {
                        return Err(QprocError::QubitOutOfRange { qubit, n });
                    }
                    for v in vars {
                        claim(v, ProgramKind::Continuous)?;
                    }
                }
                Slot::Controlled {
                    control_bit,
                    control,
                    target,
                } => {
                    for q in [control, target] {
                        if q >= n {
                            return Err(QprocError::QubitOutOfRange { qubit: q, n });
                        }
                    }
                    if control == target {
                        return Err(QprocError::QubitCollision(control));
                    }
                    claim(control_bit, ProgramKind::Discrete)?;
                }
            }
        }
        let kinds = kinds
            .into_iter()
            .enumerate()
            .map(|(id, k)| {
                k.ok_or_else(|| {
                    QprocError::InvalidNetwork(format!("program factor {id} is never used"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n, slots, kinds })
    }

    /// One rotation triple per qubit, then a CNOT `i → i+1` for each adjacent
    /// pair, each gated by its own program bit.
    pub fn canonical(n: usize) -> Result<Self> {
        let mut slots = Vec::new();
        let mut next = 0;
        for qubit in 0..n {
            slots.push(Slot::Rotation {
                qubit,
                vars: [next, next + 1, next + 2],
            });
            next += 3;
        }
        for control in 0..n.saturating_sub(1) {
            slots.push(Slot::Controlled {
                control_bit: next,
                control,
                target: control + 1,
            });
            next += 1;
        }
        Self::new(n, slots)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn num_program_factors(&self) -> usize {
        self.kinds.len()
    }

    pub fn program_kinds(&self) -> &[ProgramKind] {
        &self.kinds
    }

    fn program_dims(&self, m: usize) -> Vec<usize> {
        self.kinds
            .iter()
            .map(|k| match k {
                ProgramKind::Continuous => m,
                ProgramKind::Discrete => 2,
            })
            .collect()
    }
}

/// State of one program factor.
#[derive(Clone, Debug, PartialEq)]
pub enum ProgramValue {
    /// Momentum eigenstate `|p̃⟩`.
    Momentum(usize),
    /// Superposition over momenta `0..M-1`.
    MomentumAmplitudes(Vec<C64>),
    Bit(bool),
    BitAmplitudes([C64; 2]),
}

impl ProgramValue {
    fn kind(&self) -> ProgramKind {
        match self {
            ProgramValue::Momentum(_) | ProgramValue::MomentumAmplitudes(_) => ProgramKind::Continuous,
            ProgramValue::Bit(_) | ProgramValue::BitAmplitudes(_) => ProgramKind::Discrete,
        }
    }

    /// Nonzero `(index, amplitude)` pairs.
    fn support(&self) -> Vec<(usize, C64)> {
        let one = C64::new(1.0, 0.0);
        match self {
            ProgramValue::Momentum(p) => vec![(*p, one)],
            ProgramValue::Bit(b) => vec![(*b as usize, one)],
            ProgramValue::MomentumAmplitudes(a) => nonzero(a),
            ProgramValue::BitAmplitudes(a) => nonzero(a),
        }
    }
}

fn nonzero(a: &[C64]) -> Vec<(usize, C64)> {
    a.iter()
        .copied()
        .enumerate()
        .filter(|(_, x)| x.norm_sqr() > 0.0)
        .collect()
}

/// Per-factor program states, indexed by program factor id.
#[derive(Clone, Debug, PartialEq)]
pub struct ProgramAssignment {
    values: Vec<ProgramValue>,
}

impl ProgramAssignment {
    pub fn new(values: Vec<ProgramValue>) -> Self {
        Self { values }
    }

    /// All momenta 0 and all bits 0.
    pub fn zeros(spec: &NetworkSpec) -> Self {
        Self::new(
            spec.kinds
                .iter()
                .map(|k| match k {
                    ProgramKind::Continuous => ProgramValue::Momentum(0),
                    ProgramKind::Discrete => ProgramValue::Bit(false),
                })
                .collect(),
        )
    }

    pub fn values(&self) -> &[ProgramValue] {
        &self.values
    }

    pub fn set(&mut self, factor: usize, value: ProgramValue) {
        if self.values.len() <= factor {
            self.values.resize(factor + 1, ProgramValue::Bit(false));
        }
        self.values[factor] = value;
    }

    fn validate(&self, spec: &NetworkSpec, m: usize) -> Result<()> {
        if self.values.len() < spec.num_program_factors() {
            return Err(QprocError::UnassignedFactor(self.values.len()));
        }
        if self.values.len() > spec.num_program_factors() {
            return Err(QprocError::InvalidNetwork(format!(
                "assignment has {} factors, network uses {}",
                self.values.len(),
                spec.num_program_factors()
            )));
        }
        for (id, (value, kind)) in self.values.iter().zip(&spec.kinds).enumerate() {
            if value.kind() != *kind {
                return Err(QprocError::InvalidNetwork(format!(
                    "program factor {id} is {kind:?} but was assigned a {:?} value",
                    value.kind()
                )));
            }
            match value {
                ProgramValue::Momentum(p) if *p >= m => {
                    return Err(QprocError::InvalidParameter(format!(
                        "program factor {id}: momentum {p} out of range for resolution {m}"
                    )))
                }
                ProgramValue::MomentumAmplitudes(a) => check_amplitudes(id, a, m)?,
                ProgramValue::BitAmplitudes(a) => check_amplitudes(id, a, 2)?,
                _ => {}
            }
        }
        Ok(())
    }
}

fn check_amplitudes(id: usize, a: &[C64], len: usize) -> Result<()> {
    if a.len() != len {
        return Err(QprocError::DimensionMismatch {
            expected: len,
            found: a.len(),
        });
    }
    let norm = vector_norm(a);
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(QprocError::InvalidParameter(format!(
            "program factor {id} amplitudes have norm {norm}"
        )));
    }
    Ok(())
}

/// One term `amplitude · |config⟩ ⊗ |data⟩` of a network output.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    /// Program basis index per factor (momentum or bit).
    pub config: Vec<usize>,
    pub amplitude: C64,
    /// Normalized data state for this program configuration.
    pub data: Vec<C64>,
}

/// Output of [`run_network`], stored as program-basis branches so that large
/// momentum resolutions need not be materialized.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkRun {
    program_dims: Vec<usize>,
    program_roles: Vec<FactorRole>,
    n: usize,
    branches: Vec<Branch>,
}

impl NetworkRun {
    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn program_dims(&self) -> &[usize] {
        &self.program_dims
    }

    pub fn program_roles(&self) -> &[FactorRole] {
        &self.program_roles
    }

    pub fn data_qubits(&self) -> usize {
        self.n
    }

    /// The data register when the program was a single basis configuration.
    pub fn data_state(&self) -> Option<StateVector> {
        match self.branches.as_slice() {
            [only] => StateVector::qubits(only.data.iter().map(|a| a * only.amplitude).collect()).ok(),
            _ => None,
        }
    }

    /// Schmidt coefficients across the program/data cut.
    pub fn schmidt_coefficients(&self) -> Vec<f64> {
        let dim = 1usize << self.n;
        let rows = self.branches.len();
        let m = DMatrix::from_fn(rows, dim, |r, c| {
            self.branches[r].amplitude * self.branches[r].data[c]
        });
        singular_values_desc(m)
    }

    /// Dense joint state, program factors first. Fails above [`MAX_DENSE_DIM`].
    pub fn joint_state(&self) -> Result<StateVector> {
        let program_total = self
            .program_dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d));
        let dim = 1usize << self.n;
        let total = program_total.and_then(|p| p.checked_mul(dim));
        let total = match total {
            Some(t) if t <= MAX_DENSE_DIM => t,
            _ => {
                return Err(QprocError::InvalidParameter(
                    "joint state too large to materialize".into(),
                ))
            }
        };
        let mut amps = vec![C64::new(0.0, 0.0); total];
        for b in &self.branches {
            let offset = b
                .config
                .iter()
                .zip(&self.program_dims)
                .fold(0, |acc, (&i, &d)| acc * d + i);
            for (k, a) in b.data.iter().enumerate() {
                amps[offset * dim + k] += b.amplitude * a;
            }
        }
        let dims = self
            .program_dims
            .iter()
            .copied()
            .chain(std::iter::repeat_n(2, self.n))
            .collect();
        let roles = self
            .program_roles
            .iter()
            .copied()
            .chain(std::iter::repeat_n(FactorRole::DataQubit, self.n))
            .collect();
        Ok(StateVector::from_parts(amps, dims, roles))
    }
}

/// Applies the slots for one basis program configuration to `data` in place.
fn apply_slots(spec: &NetworkSpec, config: &[usize], m: usize, data: &mut [C64]) -> Result<()> {
    let n = spec.n;
    for slot in &spec.slots {
        match *slot {
            Slot::Rotation { qubit, vars } => {
                for (axis, var) in Axis::ALL.into_iter().zip(vars) {
                    let q = config[var] as f64 / m as f64;
                    apply_single_qubit(data, n, qubit, &theta_matrix(axis, q))?;
                }
            }
            Slot::Controlled {
                control_bit,
                control,
                target,
            } => {
                if config[control_bit] == 1 {
                    apply_cnot(data, n, control, target)?;
                }
            }
        }
    }
    Ok(())
}

/// Composite data unitary selected by a basis program configuration.
pub fn network_unitary(spec: &NetworkSpec, config: &[usize], m: usize) -> Result<Unitary> {
    if config.len() != spec.num_program_factors() {
        return Err(QprocError::UnassignedFactor(config.len().min(spec.num_program_factors())));
    }
    let dim = 1usize << spec.n;
    let mut matrix = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut v = vec![C64::new(0.0, 0.0); dim];
        v[col] = C64::new(1.0, 0.0);
        apply_slots(spec, config, m, &mut v)?;
        for (row, a) in v.into_iter().enumerate() {
            matrix[(row, col)] = a;
        }
    }
    Ok(Unitary::from_matrix_unchecked(matrix))
}

/// Runs the network. Each continuous variable with momentum `p` contributes
/// `θ_axis(p / M)`; each control bit gates its CNOT. Superposed program
/// factors are handled branch by branch.
pub fn run_network(
    spec: &NetworkSpec,
    assignment: &ProgramAssignment,
    data: &StateVector,
    m: usize,
) -> Result<NetworkRun> {
    if m == 0 {
        return Err(QprocError::InvalidParameter("momentum resolution 0".into()));
    }
    assignment.validate(spec, m)?;
    let dim = 1usize << spec.n;
    if data.len() != dim {
        return Err(QprocError::DimensionMismatch {
            expected: dim,
            found: data.len(),
        });
    }

    let supports: Vec<Vec<(usize, C64)>> = assignment.values.iter().map(ProgramValue::support).collect();
    let mut configs: Vec<(Vec<usize>, C64)> = vec![(Vec::new(), C64::new(1.0, 0.0))];
    for support in &supports {
        configs = configs
            .into_iter()
            .flat_map(|(prefix, amp)| {
                support.iter().map(move |&(i, a)| {
                    let mut next = prefix.clone();
                    next.push(i);
                    (next, amp * a)
                })
            })
            .collect();
    }

    let branches = configs
        .into_iter()
        .map(|(config, amplitude)| {
            let mut out = data.amplitudes().to_vec();
            apply_slots(spec, &config, m, &mut out)?;
            Ok(Branch {
                config,
                amplitude,
                data: out,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let program_roles = spec
        .kinds
        .iter()
        .map(|k| match k {
            ProgramKind::Continuous => FactorRole::ProgramContinuous,
            ProgramKind::Discrete => FactorRole::ProgramDiscrete,
        })
        .collect();
    Ok(NetworkRun {
        program_dims: spec.program_dims(m),
        program_roles,
        n: spec.n,
        branches,
    })
}
