//! Gate constructors: the `θ_k(q) = exp(2πi q σ_k)` family, CNOT, embedding
//! into an `n`-qubit register, and three-angle compilation of single-qubit
//! unitaries.
//!
//! Qubit 0 is the first (slowest-varying) factor of a register.

use std::f64::consts::PI;

use crate::error::{QprocError, Result};
use crate::qstate::{unitarity_defect, CMatrix, Unitary, C64, NORM_TOL};

/// Pauli axis selector `σ_1`, `σ_2`, `σ_3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X = 1,
    Y = 2,
    Z = 3,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> u8 {
        self as u8
    }
}

impl TryFrom<u8> for Axis {
    type Error = QprocError;

    fn try_from(k: u8) -> Result<Self> {
        match k {
            1 => Ok(Axis::X),
            2 => Ok(Axis::Y),
            3 => Ok(Axis::Z),
            other => Err(QprocError::InvalidAxis(other)),
        }
    }
}

/// Gate parameter reduced into `[0, 1)`; `θ_k` has period 1.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct PhaseParameter(f64);

impl PhaseParameter {
    pub fn new(q: f64) -> Self {
        let r = q.rem_euclid(1.0);
        // rem_euclid rounds tiny negatives up to exactly 1.0
        Self(if r >= 1.0 { 0.0 } else { r })
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Distance on the unit circle `R / Z`.
    pub fn circular_distance(self, other: PhaseParameter) -> f64 {
        let d = (self.0 - other.0).abs();
        d.min(1.0 - d)
    }
}

/// Angles for `θ_3(q3) · θ_2(q2) · θ_1(q1)`; `θ_1` is applied first.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleTriple {
    pub q1: PhaseParameter,
    pub q2: PhaseParameter,
    pub q3: PhaseParameter,
}

impl AngleTriple {
    pub fn new(q1: f64, q2: f64, q3: f64) -> Self {
        Self {
            q1: PhaseParameter::new(q1),
            q2: PhaseParameter::new(q2),
            q3: PhaseParameter::new(q3),
        }
    }

    pub fn values(&self) -> [f64; 3] {
        [self.q1.value(), self.q2.value(), self.q3.value()]
    }

    /// `θ_3(q3) · θ_2(q2) · θ_1(q1)`.
    pub fn rebuild(&self) -> Unitary {
        let m = theta_matrix(Axis::Z, self.q3.value())
            * theta_matrix(Axis::Y, self.q2.value())
            * theta_matrix(Axis::X, self.q1.value());
        Unitary::from_matrix_unchecked(m)
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `cos(2πq) I + i sin(2πq) σ_k` as a raw 2×2 matrix.
pub fn theta_matrix(axis: Axis, q: f64) -> CMatrix {
    let (s, co) = (2.0 * PI * q).sin_cos();
    let entries = match axis {
        Axis::X => [c(co, 0.0), c(0.0, s), c(0.0, s), c(co, 0.0)],
        Axis::Y => [c(co, 0.0), c(s, 0.0), c(-s, 0.0), c(co, 0.0)],
        Axis::Z => [c(co, s), c(0.0, 0.0), c(0.0, 0.0), c(co, -s)],
    };
    CMatrix::from_row_slice(2, 2, &entries)
}

/// `θ_k(q) = exp(2πi q σ_k)`.
pub fn theta_gate(axis: Axis, q: f64) -> Unitary {
    Unitary::from_matrix_unchecked(theta_matrix(axis, q))
}

/// Same as [`theta_gate`] with the axis given as `1`, `2` or `3`.
pub fn theta_gate_k(k: u8, q: f64) -> Result<Unitary> {
    Ok(theta_gate(Axis::try_from(k)?, q))
}

pub fn pauli(axis: Axis) -> Unitary {
    let entries = match axis {
        Axis::X => [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        Axis::Y => [c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)],
        Axis::Z => [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
    };
    Unitary::from_matrix_unchecked(CMatrix::from_row_slice(2, 2, &entries))
}

fn check_qubit(qubit: usize, n: usize) -> Result<()> {
    if qubit >= n {
        return Err(QprocError::QubitOutOfRange { qubit, n });
    }
    Ok(())
}

fn bit_of(index: usize, qubit: usize, n: usize) -> usize {
    (index >> (n - 1 - qubit)) & 1
}

fn flip_mask(qubit: usize, n: usize) -> usize {
    1 << (n - 1 - qubit)
}

/// Permutation matrix flipping `target` when `control` is 1.
pub fn cnot(control: usize, target: usize, n: usize) -> Result<Unitary> {
    check_qubit(control, n)?;
    check_qubit(target, n)?;
    if control == target {
        return Err(QprocError::QubitCollision(control));
    }
    let dim = 1usize << n;
    let mut m = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let row = if bit_of(col, control, n) == 1 {
            col ^ flip_mask(target, n)
        } else {
            col
        };
        m[(row, col)] = c(1.0, 0.0);
    }
    Ok(Unitary::from_matrix_unchecked(m))
}

/// `I ⊗ … ⊗ u ⊗ … ⊗ I` with `u` on `target`.
pub fn embed_single_qubit(u: &Unitary, target: usize, n: usize) -> Result<Unitary> {
    check_qubit(target, n)?;
    if u.dim() != 2 {
        return Err(QprocError::DimensionMismatch {
            expected: 2,
            found: u.dim(),
        });
    }
    let left = CMatrix::identity(1 << target, 1 << target);
    let right_dim = 1usize << (n - 1 - target);
    let right = CMatrix::identity(right_dim, right_dim);
    let m = left.kronecker(u.matrix()).kronecker(&right);
    Ok(Unitary::from_matrix_unchecked(m))
}

/// Applies a 2×2 matrix to one qubit of an `n`-qubit amplitude vector.
pub fn apply_single_qubit(amps: &mut [C64], n: usize, target: usize, u: &CMatrix) -> Result<()> {
    check_qubit(target, n)?;
    if amps.len() != 1 << n {
        return Err(QprocError::DimensionMismatch {
            expected: 1 << n,
            found: amps.len(),
        });
    }
    let mask = flip_mask(target, n);
    for i in 0..amps.len() {
        if i & mask == 0 {
            let (a0, a1) = (amps[i], amps[i | mask]);
            amps[i] = u[(0, 0)] * a0 + u[(0, 1)] * a1;
            amps[i | mask] = u[(1, 0)] * a0 + u[(1, 1)] * a1;
        }
    }
    Ok(())
}

/// Applies CNOT to an `n`-qubit amplitude vector in place.
pub fn apply_cnot(amps: &mut [C64], n: usize, control: usize, target: usize) -> Result<()> {
    check_qubit(control, n)?;
    check_qubit(target, n)?;
    if control == target {
        return Err(QprocError::QubitCollision(control));
    }
    if amps.len() != 1 << n {
        return Err(QprocError::DimensionMismatch {
            expected: 1 << n,
            found: amps.len(),
        });
    }
    let cmask = flip_mask(control, n);
    let tmask = flip_mask(target, n);
    for i in 0..amps.len() {
        if i & cmask != 0 && i & tmask == 0 {
            amps.swap(i, i | tmask);
        }
    }
    Ok(())
}

/// Magnitudes below this count as a vanishing Euler component.
const GIMBAL_TOL: f64 = 1e-13;

/// Angles `(q1, q2, q3)` with `θ_3(q3) θ_2(q2) θ_1(q1)` equal to `target` up to
/// global phase.
///
/// With `R_k(φ) = exp(-iφσ_k/2)` we have `θ_k(q) = R_k(-4πq)`, so this is the
/// x-y-z Tait–Bryan factorization `V = R_z(c) R_y(b) R_x(a)` of the
/// determinant-one representative `V`. Since `R_x(a) = R_y(π/2) R_z(a) R_y(-π/2)`,
/// `W = V R_y(π/2) = R_z(c) R_y(b + π/2) R_z(a)` and the angles are read off the
/// entries of `W`. At gimbal lock `q1 = 0`. The overall sign is fixed by
/// keeping `q1` in `[0, 1/2)`, using `θ_1(q + 1/2) = -θ_1(q)`.
pub fn compile_su2(target: &Unitary) -> Result<AngleTriple> {
    if target.dim() != 2 {
        return Err(QprocError::DimensionMismatch {
            expected: 2,
            found: target.dim(),
        });
    }
    let u = target.matrix();
    let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
    let v = u * C64::from_polar(1.0, -det.arg() / 2.0);

    // R_y(π/2) = θ_2(-1/8)
    let w = v * theta_matrix(Axis::Y, -0.125);
    let (w00, w10) = (w[(0, 0)], w[(1, 0)]);
    let middle = 2.0 * w10.norm().atan2(w00.norm());

    let (a, c) = if w10.norm() < GIMBAL_TOL {
        (0.0, -2.0 * w00.arg())
    } else if w00.norm() < GIMBAL_TOL {
        (0.0, 2.0 * w10.arg())
    } else {
        let sum = -2.0 * w00.arg();
        let diff = -2.0 * w10.arg();
        ((sum + diff) / 2.0, (sum - diff) / 2.0)
    };
    let b = middle - PI / 2.0;

    let to_q = |angle: f64| -angle / (4.0 * PI);
    let mut q1 = PhaseParameter::new(to_q(a)).value();
    if q1 >= 0.5 {
        q1 -= 0.5;
    }
    Ok(AngleTriple::new(q1, to_q(b), to_q(c)))
}

/// [`compile_su2`] for a raw matrix, validating unitarity first.
pub fn compile_su2_matrix(m: &CMatrix) -> Result<AngleTriple> {
    if m.shape() != (2, 2) {
        return Err(QprocError::DimensionMismatch {
            expected: 2,
            found: m.nrows().max(m.ncols()),
        });
    }
    let deviation = unitarity_defect(m);
    if deviation > NORM_TOL || !deviation.is_finite() {
        return Err(QprocError::NotUnitary { deviation });
    }
    compile_su2(&Unitary::from_matrix_unchecked(m.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use crate::qstate::{matrix_phase_distance, max_abs_diff};

    fn identity(n: usize) -> CMatrix {
        DMatrix::identity(1 << n, 1 << n)
    }

    fn assert_close(a: &CMatrix, b: &CMatrix, tol: f64) {
        let d = max_abs_diff(a.as_slice(), b.as_slice());
        assert!(d <= tol, "distance {d:e} > {tol:e}\n{a}\n{b}");
    }

    #[test]
    fn theta_zero_is_identity() {
        assert_close(theta_gate(Axis::Z, 0.0).matrix(), &identity(1), 0.0);
    }

    #[test]
    fn theta_z_quarter() {
        let expected = CMatrix::from_row_slice(2, 2, &[c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)]);
        assert_close(theta_gate(Axis::Z, 0.25).matrix(), &expected, 1e-12);
    }

    #[test]
    fn theta_x_half_is_minus_identity() {
        assert_close(theta_gate(Axis::X, 0.5).matrix(), &(-identity(1)), 1e-12);
    }

    #[test]
    fn axis_validation() {
        assert_eq!(Axis::try_from(2).unwrap(), Axis::Y);
        assert!(matches!(theta_gate_k(0, 0.1), Err(QprocError::InvalidAxis(0))));
        assert!(matches!(theta_gate_k(4, 0.1), Err(QprocError::InvalidAxis(4))));
    }

    #[test]
    fn phase_parameter_wraps() {
        assert_eq!(PhaseParameter::new(1.25).value(), 0.25);
        assert_eq!(PhaseParameter::new(-0.25).value(), 0.75);
        assert_eq!(PhaseParameter::new(-1e-18).value(), 0.0);
        assert!(PhaseParameter::new(0.999).circular_distance(PhaseParameter::new(0.001)) < 0.0021);
    }

    #[test]
    fn cnot_action() {
        let g = cnot(0, 1, 2).unwrap();
        // |10> -> |11>
        assert_eq!(g.matrix()[(3, 2)], c(1.0, 0.0));
        // |00> -> |00>
        assert_eq!(g.matrix()[(0, 0)], c(1.0, 0.0));
        assert!(matches!(cnot(1, 1, 2), Err(QprocError::QubitCollision(1))));
        assert!(matches!(cnot(0, 2, 2), Err(QprocError::QubitOutOfRange { .. })));
    }

    #[test]
    fn cnot_squares_to_identity() {
        for n in 2..=4 {
            for control in 0..n {
                for target in (0..n).filter(|&t| t != control) {
                    let g = cnot(control, target, n).unwrap();
                    assert_close(&(g.matrix() * g.matrix()), &identity(n), 0.0);
                }
            }
        }
    }

    #[test]
    fn embed_identity_and_flip() {
        let id = embed_single_qubit(&Unitary::identity(2), 1, 3).unwrap();
        assert_close(id.matrix(), &identity(3), 0.0);
        let x0 = embed_single_qubit(&pauli(Axis::X), 0, 2).unwrap();
        // |00> -> |10>
        assert_eq!(x0.matrix()[(2, 0)], c(1.0, 0.0));
        assert!(embed_single_qubit(&pauli(Axis::X), 2, 2).is_err());
    }

    #[test]
    fn in_place_application_matches_matrices() {
        let n = 3;
        let amps: Vec<C64> = (0..8).map(|i| c(i as f64 * 0.1, 0.05 * i as f64 - 0.2)).collect();
        let u = theta_gate(Axis::Y, 0.137);
        for t in 0..n {
            let mut fast = amps.clone();
            apply_single_qubit(&mut fast, n, t, u.matrix()).unwrap();
            let slow = embed_single_qubit(&u, t, n).unwrap().apply(&amps).unwrap();
            assert!(max_abs_diff(&fast, &slow) < 1e-15);
        }
        let mut fast = amps.clone();
        apply_cnot(&mut fast, n, 2, 0).unwrap();
        let slow = cnot(2, 0, n).unwrap().apply(&amps).unwrap();
        assert!(max_abs_diff(&fast, &slow) < 1e-15);
    }

    #[test]
    fn compile_identity() {
        let t = compile_su2(&Unitary::identity(2)).unwrap();
        assert_eq!(t.values(), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn compile_pauli_x() {
        let t = compile_su2(&pauli(Axis::X)).unwrap();
        let expected = AngleTriple::new(0.25, 0.0, 0.0);
        assert!(t.q1.circular_distance(expected.q1) < 1e-12, "{t:?}");
        assert!(t.q2.circular_distance(expected.q2) < 1e-12, "{t:?}");
        assert!(t.q3.circular_distance(expected.q3) < 1e-12, "{t:?}");
        assert!(matrix_phase_distance(t.rebuild().matrix(), pauli(Axis::X).matrix()) < 1e-12);
    }

    #[test]
    fn compile_gimbal_lock_sets_first_angle_zero() {
        // middle factor a quarter turn: θ_2(±1/8)
        for q2 in [0.125, 0.875] {
            let target = AngleTriple::new(0.3, q2, 0.1).rebuild();
            let t = compile_su2(&target).unwrap();
            assert_eq!(t.q1.value(), 0.0);
            assert!(matrix_phase_distance(t.rebuild().matrix(), target.matrix()) < 1e-12);
        }
    }

    #[test]
    fn compile_rejects_non_unitary() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.1, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(compile_su2_matrix(&m), Err(QprocError::NotUnitary { .. })));
    }
}
