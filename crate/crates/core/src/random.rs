//! Random states and unitaries for property checks.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::qstate::{CMatrix, FactorRole, StateVector, Unitary, C64};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state over the given factors.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, dims: &[usize], role: FactorRole) -> StateVector {
    let total: usize = dims.iter().product();
    let amps: Vec<C64> = (0..total).map(|_| gaussian(rng)).collect();
    StateVector::normalized(amps, dims.to_vec(), vec![role; dims.len()])
        .expect("gaussian vector is nonzero")
}

/// Haar-random `n`-qubit data register state.
pub fn random_qubits<R: Rng + ?Sized>(rng: &mut R, n: usize) -> StateVector {
    random_state(rng, &vec![2; n], FactorRole::DataQubit)
}

/// Haar-random unitary via QR of a complex Ginibre matrix with the phases of
/// R's diagonal divided out.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Unitary {
    let g: CMatrix = DMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for col in 0..dim {
        let d = r[(col, col)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for row in 0..dim {
            q[(row, col)] *= phase;
        }
    }
    Unitary::new(q).expect("QR factor is unitary")
}

/// Haar-random element of SU(2).
pub fn random_su2<R: Rng + ?Sized>(rng: &mut R) -> Unitary {
    let (a, b) = loop {
        let a = gaussian(rng);
        let b = gaussian(rng);
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if norm > 1e-12 {
            break (a / norm, b / norm);
        }
    };
    let m = CMatrix::from_row_slice(2, 2, &[a, -b.conj(), b, a.conj()]);
    Unitary::new(m).expect("quaternion matrix is unitary")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_satisfy_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in 1..6 {
            let u = random_unitary(&mut rng, d);
            assert_eq!(u.dim(), d);
        }
        let s = random_su2(&mut rng);
        let m = s.matrix();
        let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        assert!((det - C64::new(1.0, 0.0)).norm() < 1e-12);
        let st = random_state(&mut rng, &[3, 2], FactorRole::DataQubit);
        assert!((st.norm() - 1.0).abs() < 1e-12);
    }
}
