//! Dense linear algebra for 4×4 complex Hermitian matrices.
//!
//! The eigensolver is a cyclic Jacobi iteration with a fixed sweep order, so
//! results are bit-deterministic for a given input. Accuracy is limited only
//! by rounding (off-diagonal mass is driven below `1e-15 * scale`).

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;

/// 4×4 complex matrix, the working type for two-qubit operators.
pub type CMat4 = Matrix4<Complex64>;
/// 4-component complex vector (state amplitudes).
pub type CVec4 = Vector4<Complex64>;

pub(crate) const ZERO_C: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE_C: Complex64 = Complex64::new(1.0, 0.0);

/// Largest entry-wise deviation from Hermiticity, `max_ij |m_ij - conj(m_ji)|`.
pub fn hermitian_defect(m: &CMat4) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..4 {
        for j in 0..4 {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            worst = worst.max(d);
        }
    }
    worst
}

fn off_diagonal_norm(m: &CMat4) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition of a Hermitian 4×4 matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues sorted ascending and the unitary of matching
/// eigenvector columns. The input is assumed Hermitian; only the invariance
/// of the algorithm, not the input, is checked here.
pub(crate) fn eigh(m: &CMat4) -> ([f64; 4], CMat4) {
    let mut a = *m;
    let mut v = CMat4::identity();
    let scale = 1.0 + a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let tol = 1e-15 * scale;

    const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    for _sweep in 0..64 {
        if off_diagonal_norm(&a) < tol {
            break;
        }
        for &(p, q) in PAIRS.iter() {
            let z = a[(p, q)];
            let r = z.norm();
            if r < 1e-300 {
                continue;
            }
            // Absorb the phase of a_pq, then annihilate it with a real rotation.
            let phase = z / Complex64::new(r, 0.0);
            let app = a[(p, p)].re;
            let aqq = a[(q, q)].re;
            let theta = (aqq - app) / (2.0 * r);
            let t = if theta >= 0.0 {
                1.0 / (theta + (1.0 + theta * theta).sqrt())
            } else {
                -1.0 / (-theta + (1.0 + theta * theta).sqrt())
            };
            let c = 1.0 / (1.0 + t * t).sqrt();
            let s = t * c;

            let mut g = CMat4::identity();
            g[(p, p)] = Complex64::new(c, 0.0);
            g[(p, q)] = phase * s;
            g[(q, p)] = -phase.conj() * s;
            g[(q, q)] = Complex64::new(c, 0.0);

            a = g.adjoint() * a * g;
            v *= g;
            // rotations keep a Hermitian up to rounding; pin the invariant
            a[(q, p)] = a[(p, q)].conj();
        }
    }

    let mut order = [0usize, 1, 2, 3];
    let diag = [a[(0, 0)].re, a[(1, 1)].re, a[(2, 2)].re, a[(3, 3)].re];
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());
    let vals = [
        diag[order[0]],
        diag[order[1]],
        diag[order[2]],
        diag[order[3]],
    ];
    let mut vecs = CMat4::zeros();
    for (col, &src) in order.iter().enumerate() {
        for row in 0..4 {
            vecs[(row, col)] = v[(row, src)];
        }
    }
    (vals, vecs)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub(crate) fn min_eigenvalue(m: &CMat4) -> f64 {
    eigh(m).0[0]
}

/// Kronecker product of two 2×2 complex matrices (atom 1 ⊗ atom 2).
pub(crate) fn kron2(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>) -> CMat4 {
    let mut out = CMat4::zeros();
    for i1 in 0..2 {
        for j1 in 0..2 {
            for i2 in 0..2 {
                for j2 in 0..2 {
                    out[(2 * i1 + i2, 2 * j1 + j2)] = a[(i1, j1)] * b[(i2, j2)];
                }
            }
        }
    }
    out
}
