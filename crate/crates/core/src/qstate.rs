//! Amplitude vectors over labeled tensor factors, unitaries, the discrete
//! Fourier transform between grid and momentum pictures, Schmidt analysis and
//! the finite-matrix commutator check.
//!
//! Multi-factor amplitudes use one global ordering: the first listed factor is
//! the slowest-varying index.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{QprocError, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

/// Tolerance for norm and unitarity invariants.
pub const NORM_TOL: f64 = 1e-10;
/// Tolerance for exact algebraic identities at desk scale.
pub const EXACT_TOL: f64 = 1e-12;
/// Singular values above this count toward the Schmidt rank.
pub const SCHMIDT_RANK_TOL: f64 = 1e-9;

/// Role of one tensor factor in a joint register.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FactorRole {
    DataQubit,
    ProgramDiscrete,
    /// A periodic program variable truncated to `M` integer momenta.
    ProgramContinuous,
}

impl FactorRole {
    pub fn is_program(self) -> bool {
        !matches!(self, FactorRole::DataQubit)
    }

    pub fn name(self) -> &'static str {
        match self {
            FactorRole::DataQubit => "data-qubit",
            FactorRole::ProgramDiscrete => "program-discrete",
            FactorRole::ProgramContinuous => "program-continuous",
        }
    }
}

/// A normalized pure state over an ordered list of tensor factors.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
    dims: Vec<usize>,
    roles: Vec<FactorRole>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<C64>, dims: Vec<usize>, roles: Vec<FactorRole>) -> Result<Self> {
        if dims.len() != roles.len() {
            return Err(QprocError::DimensionMismatch {
                expected: dims.len(),
                found: roles.len(),
            });
        }
        if dims.contains(&0) {
            return Err(QprocError::InvalidParameter("factor dimension 0".into()));
        }
        let total: usize = dims.iter().product();
        if total != amplitudes.len() {
            return Err(QprocError::DimensionMismatch {
                expected: total,
                found: amplitudes.len(),
            });
        }
        let norm = vector_norm(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(QprocError::NotNormalized { norm });
        }
        Ok(Self {
            amplitudes,
            dims,
            roles,
        })
    }

    /// Single-factor state.
    pub fn single(amplitudes: Vec<C64>, role: FactorRole) -> Result<Self> {
        let dim = amplitudes.len();
        Self::new(amplitudes, vec![dim], vec![role])
    }

    /// An `n`-qubit data register; the amplitude count must be a power of two.
    pub fn qubits(amplitudes: Vec<C64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(QprocError::InvalidParameter(format!(
                "qubit register needs a power-of-two amplitude count, got {len}"
            )));
        }
        let n = len.trailing_zeros() as usize;
        Self::new(amplitudes, vec![2; n], vec![FactorRole::DataQubit; n])
    }

    /// Computational basis state `|index>` of a single factor.
    pub fn basis(dim: usize, index: usize, role: FactorRole) -> Result<Self> {
        if index >= dim {
            return Err(QprocError::InvalidParameter(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Self::single(amplitudes, role)
    }

    /// Computational basis state of an `n`-qubit data register.
    pub fn qubit_basis(n: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n;
        if index >= dim {
            return Err(QprocError::InvalidParameter(format!(
                "basis index {index} out of range for {n} qubits"
            )));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Self::qubits(amplitudes)
    }

    pub fn uniform(dim: usize, role: FactorRole) -> Result<Self> {
        let a = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Self::single(vec![a; dim], role)
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(
        mut amplitudes: Vec<C64>,
        dims: Vec<usize>,
        roles: Vec<FactorRole>,
    ) -> Result<Self> {
        let norm = vector_norm(&amplitudes);
        if norm == 0.0 || !norm.is_finite() {
            return Err(QprocError::NotNormalized { norm });
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Self::new(amplitudes, dims, roles)
    }

    pub(crate) fn from_parts(amplitudes: Vec<C64>, dims: Vec<usize>, roles: Vec<FactorRole>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), amplitudes.len());
        debug_assert_eq!(dims.len(), roles.len());
        Self {
            amplitudes,
            dims,
            roles,
        }
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn roles(&self) -> &[FactorRole] {
        &self.roles
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn num_factors(&self) -> usize {
        self.dims.len()
    }

    pub fn norm(&self) -> f64 {
        vector_norm(&self.amplitudes)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.len() != other.len() {
            return Err(QprocError::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(inner_product(&self.amplitudes, &other.amplitudes))
    }

    /// Copy of this state with every factor relabeled.
    pub fn with_roles(&self, role: FactorRole) -> Self {
        Self {
            amplitudes: self.amplitudes.clone(),
            dims: self.dims.clone(),
            roles: vec![role; self.dims.len()],
        }
    }
}

/// Euclidean norm of a complex vector.
pub fn vector_norm(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// `sum conj(a_i) b_i`.
pub fn inner_product(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `a ⊗ b`, with `a` as the slower-varying index.
pub fn tensor_product(a: &StateVector, b: &StateVector) -> StateVector {
    let mut amplitudes = Vec::with_capacity(a.len() * b.len());
    for x in &a.amplitudes {
        for y in &b.amplitudes {
            amplitudes.push(x * y);
        }
    }
    let dims = a.dims.iter().chain(&b.dims).copied().collect();
    let roles = a.roles.iter().chain(&b.roles).copied().collect();
    StateVector::from_parts(amplitudes, dims, roles)
}

/// Square complex matrix with unitarity certified to [`NORM_TOL`].
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary {
    matrix: CMatrix,
}

impl Unitary {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(QprocError::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let deviation = unitarity_defect(&matrix);
        if deviation > NORM_TOL || !deviation.is_finite() {
            return Err(QprocError::NotUnitary { deviation });
        }
        Ok(Self { matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn adjoint(&self) -> Unitary {
        Unitary {
            matrix: self.matrix.adjoint(),
        }
    }

    /// `self · other`.
    pub fn compose(&self, other: &Unitary) -> Result<Unitary> {
        if self.dim() != other.dim() {
            return Err(QprocError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Unitary {
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.dim() {
            return Err(QprocError::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(mat_vec(&self.matrix, v))
    }
}

pub fn mat_vec(m: &CMatrix, v: &[C64]) -> Vec<C64> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[(r, c)] * v[c]).sum())
        .collect()
}

/// `max |U^dagger U - I|` over entries.
pub fn unitarity_defect(m: &CMatrix) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    let product = m.adjoint() * m;
    let mut worst = 0.0f64;
    for r in 0..product.nrows() {
        for c in 0..product.ncols() {
            let target = if r == c { 1.0 } else { 0.0 };
            worst = worst.max((product[(r, c)] - C64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Largest entrywise modulus difference.
pub fn max_abs_diff(a: &[C64], b: &[C64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Entrywise max distance between `phase · a` and `b`, with the unit phase
/// chosen to align `a` onto `b` in the Frobenius inner product. This bounds
/// the minimum over all unit phases from above.
pub fn phase_aligned_distance(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len(), "phase alignment needs equal lengths");
    let overlap = inner_product(a, b);
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    a.iter()
        .zip(b)
        .map(|(x, y)| (phase * x - y).norm())
        .fold(0.0, f64::max)
}

/// [`phase_aligned_distance`] for matrices.
pub fn matrix_phase_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    phase_aligned_distance(a.as_slice(), b.as_slice())
}

fn root_of_unity(k: usize, m: usize, sign: f64) -> C64 {
    let angle = sign * 2.0 * PI * ((k % m) as f64) / (m as f64);
    C64::from_polar(1.0, angle)
}

fn twiddles(m: usize, sign: f64) -> Vec<C64> {
    (0..m).map(|k| root_of_unity(k, m, sign)).collect()
}

/// `c̃_p = (1/√M) Σ_j e^{-2πi p j / M} c_j`, or its inverse.
pub fn dft_vector(v: &[C64], inverse: bool) -> Vec<C64> {
    let m = v.len();
    let scale = 1.0 / (m as f64).sqrt();
    let table = twiddles(m, if inverse { 1.0 } else { -1.0 });
    (0..m)
        .map(|p| {
            v.iter()
                .enumerate()
                .map(|(j, c)| table[(p * j) % m] * c)
                .sum::<C64>()
                * scale
        })
        .collect()
}

/// Single coefficient `c̃_p` of [`dft_vector`].
pub fn dft_coefficient(v: &[C64], p: usize) -> C64 {
    let m = v.len();
    let table = twiddles(m, -1.0);
    v.iter()
        .enumerate()
        .map(|(j, c)| table[(p * j) % m] * c)
        .sum::<C64>()
        / (m as f64).sqrt()
}

/// Matrix `F` with `F[p][j] = e^{-2πi p j / M} / √M`.
pub fn dft_matrix(m: usize) -> CMatrix {
    let scale = 1.0 / (m as f64).sqrt();
    CMatrix::from_fn(m, m, |p, j| root_of_unity(p * j, m, -1.0) * scale)
}

fn transform_factor(s: &StateVector, factor: usize, inverse: bool) -> Result<StateVector> {
    if factor >= s.num_factors() {
        return Err(QprocError::FactorOutOfRange {
            index: factor,
            count: s.num_factors(),
        });
    }
    let m = s.dims[factor];
    let outer: usize = s.dims[..factor].iter().product();
    let inner: usize = s.dims[factor + 1..].iter().product();
    let mut out = s.amplitudes.clone();
    let mut line = vec![C64::new(0.0, 0.0); m];
    for o in 0..outer {
        for i in 0..inner {
            for (j, slot) in line.iter_mut().enumerate() {
                *slot = s.amplitudes[(o * m + j) * inner + i];
            }
            for (p, value) in dft_vector(&line, inverse).into_iter().enumerate() {
                out[(o * m + p) * inner + i] = value;
            }
        }
    }
    Ok(StateVector::from_parts(out, s.dims.clone(), s.roles.clone()))
}

/// Grid-to-momentum transform on one factor.
pub fn dft(s: &StateVector, factor: usize) -> Result<StateVector> {
    transform_factor(s, factor, false)
}

/// Momentum-to-grid transform on one factor.
pub fn inverse_dft(s: &StateVector, factor: usize) -> Result<StateVector> {
    transform_factor(s, factor, true)
}

/// Partition of a state's factors into two non-empty sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteCut {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl BipartiteCut {
    pub fn new(left: Vec<usize>, num_factors: usize) -> Result<Self> {
        let mut left = left;
        left.sort_unstable();
        left.dedup();
        if let Some(&bad) = left.iter().find(|&&f| f >= num_factors) {
            return Err(QprocError::InvalidCut(format!(
                "factor {bad} out of range for {num_factors} factors"
            )));
        }
        let right: Vec<usize> = (0..num_factors).filter(|f| !left.contains(f)).collect();
        if left.is_empty() || right.is_empty() {
            return Err(QprocError::InvalidCut("both sides must be non-empty".into()));
        }
        Ok(Self { left, right })
    }

    /// Cut separating every program factor from every data factor.
    pub fn program_data(state: &StateVector) -> Result<Self> {
        let left = state
            .roles()
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_program())
            .map(|(i, _)| i)
            .collect();
        Self::new(left, state.num_factors())
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }
}

/// Coefficient matrix with rows indexed by the left side and columns by the right.
pub(crate) fn cut_matrix(s: &StateVector, cut: &BipartiteCut) -> CMatrix {
    let dims = s.dims();
    let rows: usize = cut.left.iter().map(|&f| dims[f]).product();
    let cols: usize = cut.right.iter().map(|&f| dims[f]).product();
    let mut strides = vec![1usize; dims.len()];
    for f in (0..dims.len().saturating_sub(1)).rev() {
        strides[f] = strides[f + 1] * dims[f + 1];
    }
    let mut m = CMatrix::zeros(rows, cols);
    for (flat, amp) in s.amplitudes().iter().enumerate() {
        let digit = |f: usize| (flat / strides[f]) % dims[f];
        let r = cut.left.iter().fold(0, |acc, &f| acc * dims[f] + digit(f));
        let c = cut.right.iter().fold(0, |acc, &f| acc * dims[f] + digit(f));
        m[(r, c)] = *amp;
    }
    m
}

/// Schmidt coefficients across `cut`, sorted descending.
pub fn schmidt_coefficients(s: &StateVector, cut: &BipartiteCut) -> Result<Vec<f64>> {
    let n = s.num_factors();
    if cut.left.iter().chain(&cut.right).any(|&f| f >= n) || cut.left.len() + cut.right.len() != n
    {
        return Err(QprocError::InvalidCut(format!(
            "cut does not partition {n} factors"
        )));
    }
    Ok(singular_values_desc(cut_matrix(s, cut)))
}

pub(crate) fn singular_values_desc(m: CMatrix) -> Vec<f64> {
    let mut values: Vec<f64> = m
        .svd(false, false)
        .singular_values
        .iter()
        .map(|v| v.max(0.0))
        .collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

pub fn schmidt_rank(coefficients: &[f64]) -> usize {
    coefficients.iter().filter(|&&c| c > SCHMIDT_RANK_TOL).count()
}

/// Result of checking the canonical commutation relation on `D × D` matrices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CommutatorDefect {
    /// `i · Tr[P, Q]`.
    pub trace_of_commutator: C64,
    pub trace_of_identity: f64,
    /// `max |i[P, Q] - I|` over entries.
    pub max_deviation_from_identity: f64,
}

/// Builds grid position `Q = diag(2πj/D)` and momentum `P = F† K F`, where
/// `K` holds the integer momenta wrapped into `(-D/2, D/2]`, and measures how
/// far `i[P, Q]` is from the identity.
pub fn commutator_defect(d: usize) -> Result<CommutatorDefect> {
    if d < 2 {
        return Err(QprocError::InvalidParameter(format!(
            "commutator dimension must be at least 2, got {d}"
        )));
    }
    let q = CMatrix::from_fn(d, d, |r, c| {
        if r == c {
            C64::new(2.0 * PI * r as f64 / d as f64, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let momentum = |k: usize| {
        let k = k as i64;
        let d = d as i64;
        if 2 * k > d {
            k - d
        } else {
            k
        }
    };
    let k = CMatrix::from_fn(d, d, |r, c| {
        if r == c {
            C64::new(momentum(r) as f64, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let f = dft_matrix(d);
    let p = f.adjoint() * k * &f;
    let commutator = &p * &q - &q * &p;
    let i_comm = commutator * C64::new(0.0, 1.0);
    let trace_of_commutator = i_comm.trace();
    let mut worst = 0.0f64;
    for r in 0..d {
        for c in 0..d {
            let id = if r == c { 1.0 } else { 0.0 };
            worst = worst.max((i_comm[(r, c)] - C64::new(id, 0.0)).norm());
        }
    }
    Ok(CommutatorDefect {
        trace_of_commutator,
        trace_of_identity: d as f64,
        max_deviation_from_identity: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn basis_tensor_ordering() {
        let zero = StateVector::basis(2, 0, FactorRole::DataQubit).unwrap();
        let one = StateVector::basis(2, 1, FactorRole::DataQubit).unwrap();
        let joint = tensor_product(&zero, &one);
        assert_eq!(joint.dims(), &[2, 2]);
        assert_eq!(joint.amplitudes()[1], c(1.0, 0.0));
        assert_eq!(joint.norm(), 1.0);
    }

    #[test]
    fn plus_tensor_zero() {
        let h = 1.0 / 2f64.sqrt();
        let plus = StateVector::single(vec![c(h, 0.0), c(h, 0.0)], FactorRole::DataQubit).unwrap();
        let zero = StateVector::basis(2, 0, FactorRole::DataQubit).unwrap();
        let joint = tensor_product(&plus, &zero);
        let expected = [c(h, 0.0), c(0.0, 0.0), c(h, 0.0), c(0.0, 0.0)];
        assert!(max_abs_diff(joint.amplitudes(), &expected) < 1e-15);
    }

    #[test]
    fn rejects_bad_states() {
        assert!(matches!(
            StateVector::single(vec![c(1.0, 0.0), c(1.0, 0.0)], FactorRole::DataQubit),
            Err(QprocError::NotNormalized { .. })
        ));
        assert!(matches!(
            StateVector::new(vec![c(1.0, 0.0)], vec![2], vec![FactorRole::DataQubit]),
            Err(QprocError::DimensionMismatch { .. })
        ));
        assert!(StateVector::qubits(vec![c(1.0, 0.0); 3]).is_err());
    }

    #[test]
    fn dft_of_uniform_and_basis() {
        for m in [2, 4, 8, 16] {
            let uniform = StateVector::uniform(m, FactorRole::ProgramContinuous).unwrap();
            let out = dft(&uniform, 0).unwrap();
            let expected = StateVector::basis(m, 0, FactorRole::ProgramContinuous).unwrap();
            assert!(max_abs_diff(out.amplitudes(), expected.amplitudes()) < 1e-12);

            let back = dft(&expected, 0).unwrap();
            assert!(max_abs_diff(back.amplitudes(), uniform.amplitudes()) < 1e-12);
        }
    }

    #[test]
    fn dft_acts_on_selected_factor_only() {
        let h = 1.0 / 2f64.sqrt();
        let plus = StateVector::single(vec![c(h, 0.0), c(h, 0.0)], FactorRole::DataQubit).unwrap();
        let uniform = StateVector::uniform(4, FactorRole::ProgramContinuous).unwrap();
        let joint = tensor_product(&uniform, &plus);
        let out = dft(&joint, 0).unwrap();
        let expected = tensor_product(
            &StateVector::basis(4, 0, FactorRole::ProgramContinuous).unwrap(),
            &plus,
        );
        assert!(max_abs_diff(out.amplitudes(), expected.amplitudes()) < 1e-12);
        assert!(matches!(
            dft(&joint, 2),
            Err(QprocError::FactorOutOfRange { index: 2, count: 2 })
        ));
    }

    #[test]
    fn dft_matrix_matches_vector_transform() {
        let m = 8;
        let f = dft_matrix(m);
        assert!(unitarity_defect(&f) < 1e-12);
        let v: Vec<C64> = (0..m).map(|j| c(j as f64, -(j as f64) / 3.0)).collect();
        assert!(max_abs_diff(&mat_vec(&f, &v), &dft_vector(&v, false)) < 1e-12);
    }

    #[test]
    fn schmidt_of_product_and_bell() {
        let zero = StateVector::basis(2, 0, FactorRole::ProgramDiscrete).unwrap();
        let one = StateVector::basis(2, 1, FactorRole::DataQubit).unwrap();
        let prod = tensor_product(&zero, &one);
        let cut = BipartiteCut::new(vec![0], 2).unwrap();
        let coeffs = schmidt_coefficients(&prod, &cut).unwrap();
        assert!((coeffs[0] - 1.0).abs() < 1e-12);
        assert_eq!(schmidt_rank(&coeffs), 1);

        let h = 1.0 / 2f64.sqrt();
        let bell = StateVector::new(
            vec![c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)],
            vec![2, 2],
            vec![FactorRole::ProgramDiscrete, FactorRole::DataQubit],
        )
        .unwrap();
        let coeffs = schmidt_coefficients(&bell, &cut).unwrap();
        assert!((coeffs[0] - h).abs() < 1e-12 && (coeffs[1] - h).abs() < 1e-12);
        assert_eq!(schmidt_rank(&coeffs), 2);
    }

    #[test]
    fn invalid_cuts() {
        assert!(BipartiteCut::new(vec![], 2).is_err());
        assert!(BipartiteCut::new(vec![0, 1], 2).is_err());
        assert!(BipartiteCut::new(vec![3], 2).is_err());
        let s = StateVector::qubit_basis(3, 0).unwrap();
        let cut = BipartiteCut::new(vec![0], 2).unwrap();
        assert!(schmidt_coefficients(&s, &cut).is_err());
    }

    #[test]
    fn non_contiguous_cut() {
        // |0>|1>|0> ⊗ ... with factor 1 entangled with nothing: cut {0,2} | {1}
        let s = StateVector::qubit_basis(3, 0b010).unwrap();
        let cut = BipartiteCut::new(vec![0, 2], 3).unwrap();
        let coeffs = schmidt_coefficients(&s, &cut).unwrap();
        assert_eq!(schmidt_rank(&coeffs), 1);
    }

    #[test]
    fn commutator_small_cases() {
        let d2 = commutator_defect(2).unwrap();
        assert!(d2.trace_of_commutator.norm() < 1e-10);
        assert_eq!(d2.trace_of_identity, 2.0);
        let d8 = commutator_defect(8).unwrap();
        assert!(d8.trace_of_commutator.norm() < 1e-10 * 8.0);
        let d4 = commutator_defect(4).unwrap();
        assert!(d4.max_deviation_from_identity >= 0.5);
        assert!(commutator_defect(1).is_err());
    }

    #[test]
    fn unitary_rejects_non_unitary() {
        let mut m = CMatrix::identity(2, 2);
        m[(0, 0)] = c(1.1, 0.0);
        assert!(matches!(Unitary::new(m), Err(QprocError::NotUnitary { .. })));
        assert!(Unitary::new(CMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn phase_alignment_ignores_global_phase() {
        let a = [c(0.6, 0.0), c(0.0, 0.8)];
        let phase = C64::from_polar(1.0, 1.234);
        let b: Vec<C64> = a.iter().map(|x| x * phase).collect();
        assert!(phase_aligned_distance(&a, &b) < 1e-15);
        assert!(max_abs_diff(&a, &b) > 0.1);
    }
}
