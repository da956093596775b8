//! Helpers shared by unit tests: a fixed-seed RNG and an independent
//! eigensolver for checking spectra of small Hermitian matrices.

use crate::tensor::ComplexMatrix;
use num_complex::Complex64;

pub use crate::random::seeded_rng;

/// Eigenvalues of a Hermitian matrix via Jacobi rotations, ascending.
///
/// Each step picks the largest off-diagonal entry and conjugates by the
/// exact 2x2 unitary that diagonalizes that block, until every off-diagonal
/// entry is below 1e-14. Deliberately naive; only used to cross-check
/// production code on small matrices.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    assert!(m.is_square(), "eigensolver needs a square matrix");
    let n = m.rows();
    let mut h: Vec<Complex64> = m.entries().to_vec();

    let hermiticity = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (h[i * n + j] - h[j * n + i].conj()).norm())
        .fold(0.0, f64::max);
    assert!(hermiticity < 1e-9, "matrix is not Hermitian: {hermiticity}");

    for _ in 0..200 * n * n {
        let mut best = 0.0;
        let (mut p, mut q) = (0, 0);
        for i in 0..n {
            for j in (i + 1)..n {
                let v = h[i * n + j].norm();
                if v > best {
                    best = v;
                    p = i;
                    q = j;
                }
            }
        }
        if best < 1e-14 {
            break;
        }

        let a = h[p * n + p].re;
        let c = h[q * n + q].re;
        let b = h[p * n + q];
        let mid = 0.5 * (a + c);
        let radius = (0.25 * (a - c) * (a - c) + b.norm_sqr()).sqrt();
        let lambda = if a >= c { mid + radius } else { mid - radius };
        let scale = (b.norm_sqr() + (lambda - a) * (lambda - a)).sqrt();
        let (u00, u10, u01, u11) = if scale < 1e-300 {
            (
                Complex64::ONE,
                Complex64::ZERO,
                Complex64::ZERO,
                Complex64::ONE,
            )
        } else {
            let v0 = b / scale;
            let v1 = Complex64::new((lambda - a) / scale, 0.0);
            (v0, v1, -v1.conj(), v0.conj())
        };

        for i in 0..n {
            let hip = h[i * n + p];
            let hiq = h[i * n + q];
            h[i * n + p] = hip * u00 + hiq * u10;
            h[i * n + q] = hip * u01 + hiq * u11;
        }
        for j in 0..n {
            let hpj = h[p * n + j];
            let hqj = h[q * n + j];
            h[p * n + j] = u00.conj() * hpj + u10.conj() * hqj;
            h[q * n + j] = u01.conj() * hpj + u11.conj() * hqj;
        }
    }

    let mut eigenvalues: Vec<f64> = (0..n).map(|i| h[i * n + i].re).collect();
    eigenvalues.sort_by(f64::total_cmp);
    eigenvalues
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{adjoint, matmul, ComplexMatrix};
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_matrix_returns_its_diagonal() {
        let m = ComplexMatrix::from_rows(vec![
            vec![c(3.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(-1.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(hermitian_eigenvalues(&m), vec![-1.0, 3.0]);
    }

    #[test]
    fn bit_flip_has_eigenvalues_plus_minus_one() {
        let m = ComplexMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let ev = hermitian_eigenvalues(&m);
        assert!((ev[0] + 1.0).abs() < 1e-12);
        assert!((ev[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn recovers_spectrum_of_conjugated_diagonal() {
        let mut rng = seeded_rng(77);
        let n = 5;
        let diag: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let u = crate::random::random_unitary(n, &mut rng);
        let mut d_entries: Vec<Complex64> = vec![Complex64::ZERO; n * n];
        for (i, &l) in diag.iter().enumerate() {
            d_entries[i * n + i] = c(l, 0.0);
        }
        let d = ComplexMatrix::new(n, n, d_entries).unwrap();
        let m = matmul(&matmul(&u, &d).unwrap(), &adjoint(&u)).unwrap();
        let mut want = diag.clone();
        want.sort_by(f64::total_cmp);
        let got = hermitian_eigenvalues(&m);
        for (x, y) in got.iter().zip(&want) {
            assert!((x - y).abs() < 1e-10, "{x} vs {y}");
        }
    }
}
