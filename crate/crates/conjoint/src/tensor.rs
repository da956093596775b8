//! Dense complex linear algebra kernel.
//!
//! Everything else in this crate is built on the small set of operations
//! defined here: matrix products, adjoints, Kronecker products, traces and
//! partial traces over one factor of a bipartite space. Matrices are dense,
//! row-major `Complex64` arrays; states are column matrices.
//!
//! The composite-space index convention is fixed once, globally: for a
//! bipartite space the A index is major and the B index is minor, i.e. the
//! composite basis element `(i, k)` lives at flat index `i * dim_b + k`.
//! This matches the block structure of [`tensor_product`].

use num_complex::Complex64;
use thiserror::Error;

/// Hard cap on subsystem dimensions; composite spaces stay at or below 64x64.
pub const MAX_SUBSYSTEM_DIM: usize = 64;

/// Errors from kernel operations. Shapes are always reported.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TensorError {
    #[error(
        "dimension mismatch: cannot multiply {left_rows}x{left_cols} by {right_rows}x{right_cols}"
    )]
    ShapeMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("expected a column vector, got {rows}x{cols}")]
    NotColumn { rows: usize, cols: usize },
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyShape { rows: usize, cols: usize },
    #[error("entry count {found} does not match shape {rows}x{cols}")]
    EntryCount {
        rows: usize,
        cols: usize,
        found: usize,
    },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("side {side} does not equal dim_a * dim_b = {dim_a}x{dim_b}")]
    CompositeMismatch {
        side: usize,
        dim_a: usize,
        dim_b: usize,
    },
    #[error("vectors have different lengths: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("tolerance must satisfy 0 < eps < 1e-3, got {eps}")]
    InvalidTolerance { eps: f64 },
}

/// Numerical tolerance for validity checks, in (0, 1e-3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    eps: f64,
}

impl Tolerance {
    /// Tolerance for structural validation: unitarity, orthonormality,
    /// normalization of states and probability tables.
    pub const STRUCTURAL: Tolerance = Tolerance { eps: 1e-10 };

    /// Tighter tolerance for pure-arithmetic identities.
    pub const ARITHMETIC: Tolerance = Tolerance { eps: 1e-12 };

    pub fn new(eps: f64) -> Result<Self, TensorError> {
        if eps.is_finite() && eps > 0.0 && eps < 1e-3 {
            Ok(Tolerance { eps })
        } else {
            Err(TensorError::InvalidTolerance { eps })
        }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::STRUCTURAL
    }
}

/// Which factor of a bipartite space an operation acts on.
///
/// `A` is the first (index-major) factor, `B` the second (index-minor) one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Dense complex matrix in row-major order.
///
/// The universal carrier for states (column matrices), operators, density
/// operators and coefficient matrices. All entries are finite by
/// construction; dimensions are at least 1x1.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting shape/entry-count
    /// mismatches and non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, TensorError> {
        if rows == 0 || cols == 0 {
            return Err(TensorError::EmptyShape { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(TensorError::EntryCount {
                rows,
                cols,
                found: data.len(),
            });
        }
        for (k, z) in data.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(TensorError::NonFinite {
                    row: k / cols,
                    col: k % cols,
                });
            }
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    /// Convenience constructor from rows of entries.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self, TensorError> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n_cols {
                return Err(TensorError::EntryCount {
                    rows: n_rows,
                    cols: n_cols,
                    found: i * n_cols + r.len(),
                });
            }
        }
        ComplexMatrix::new(n_rows, n_cols, rows.into_iter().flatten().collect())
    }

    /// Column vector from a flat list of entries.
    pub fn column(entries: Vec<Complex64>) -> Result<Self, TensorError> {
        let n = entries.len();
        ComplexMatrix::new(n, 1, entries)
    }

    /// Column vector with a 1 in slot `index` and 0 elsewhere.
    pub fn basis_column(dim: usize, index: usize) -> Self {
        assert!(
            index < dim,
            "basis index {index} out of range for dim {dim}"
        );
        let mut data = vec![Complex64::ZERO; dim];
        data[index] = Complex64::ONE;
        ComplexMatrix {
            rows: dim,
            cols: 1,
            data,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "zero-sized matrix");
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::ONE;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_column(&self) -> bool {
        self.cols == 1
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.cols + col]
    }

    /// Row-major view of all entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<Self, TensorError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(TensorError::ShapeMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<Self, TensorError> {
        self.add(&other.scale(-Complex64::ONE))
    }

    /// Largest entry modulus; used for residuals in validity checks.
    pub fn max_entry_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Standard matrix product, `a.rows x b.cols`.
pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, TensorError> {
    if a.cols != b.rows {
        return Err(TensorError::ShapeMismatch {
            left_rows: a.rows,
            left_cols: a.cols,
            right_rows: b.rows,
            right_cols: b.cols,
        });
    }
    let mut out = vec![Complex64::ZERO; a.rows * b.cols];
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.data[i * a.cols + k];
            if aik == Complex64::ZERO {
                continue;
            }
            let b_row = &b.data[k * b.cols..(k + 1) * b.cols];
            let out_row = &mut out[i * b.cols..(i + 1) * b.cols];
            for (o, bkj) in out_row.iter_mut().zip(b_row) {
                *o += aik * bkj;
            }
        }
    }
    Ok(ComplexMatrix {
        rows: a.rows,
        cols: b.cols,
        data: out,
    })
}

/// Conjugate transpose: `result[j, i] = conj(m[i, j])`.
pub fn adjoint(m: &ComplexMatrix) -> ComplexMatrix {
    let mut data = vec![Complex64::ZERO; m.rows * m.cols];
    for i in 0..m.rows {
        for j in 0..m.cols {
            data[j * m.rows + i] = m.data[i * m.cols + j].conj();
        }
    }
    ComplexMatrix {
        rows: m.cols,
        cols: m.rows,
        data,
    }
}

/// Kronecker product with A-major block structure:
/// `result[(i*b.rows + k), (j*b.cols + l)] = a[i, j] * b[k, l]`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut data = vec![Complex64::ZERO; rows * cols];
    for i in 0..a.rows {
        for j in 0..a.cols {
            let aij = a.data[i * a.cols + j];
            for k in 0..b.rows {
                for l in 0..b.cols {
                    data[(i * b.rows + k) * cols + (j * b.cols + l)] = aij * b.data[k * b.cols + l];
                }
            }
        }
    }
    ComplexMatrix { rows, cols, data }
}

/// Sum of diagonal entries of a square matrix.
pub fn trace(m: &ComplexMatrix) -> Result<Complex64, TensorError> {
    if !m.is_square() {
        return Err(TensorError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    Ok((0..m.rows).map(|i| m.data[i * m.cols + i]).sum())
}

/// Partial trace of an operator on a bipartite space with subsystem
/// dimensions `dim_a`, `dim_b` (composite index `i * dim_b + k`).
///
/// Tracing over `A` returns the `dim_b x dim_b` operator
/// `result[k, l] = sum_i m[(i,k), (i,l)]`; tracing over `B` the symmetric
/// `dim_a x dim_a` one.
pub fn partial_trace(
    m: &ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
    over: Subsystem,
) -> Result<ComplexMatrix, TensorError> {
    if !m.is_square() {
        return Err(TensorError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    if dim_a == 0 || dim_b == 0 || m.rows != dim_a * dim_b {
        return Err(TensorError::CompositeMismatch {
            side: m.rows,
            dim_a,
            dim_b,
        });
    }
    let composite = |i: usize, k: usize| i * dim_b + k;
    match over {
        Subsystem::A => {
            let mut out = ComplexMatrix::zeros(dim_b, dim_b);
            for k in 0..dim_b {
                for l in 0..dim_b {
                    let mut sum = Complex64::ZERO;
                    for i in 0..dim_a {
                        sum += m.get(composite(i, k), composite(i, l));
                    }
                    out.data[k * dim_b + l] = sum;
                }
            }
            Ok(out)
        }
        Subsystem::B => {
            let mut out = ComplexMatrix::zeros(dim_a, dim_a);
            for i in 0..dim_a {
                for j in 0..dim_a {
                    let mut sum = Complex64::ZERO;
                    for k in 0..dim_b {
                        sum += m.get(composite(i, k), composite(j, k));
                    }
                    out.data[i * dim_a + j] = sum;
                }
            }
            Ok(out)
        }
    }
}

/// True iff `m` is square and the max-entry norm of `m† m - I` is within
/// `tol`. Non-square matrices are never unitary.
pub fn is_unitary(m: &ComplexMatrix, tol: Tolerance) -> bool {
    unitarity_residual(m).is_some_and(|r| r <= tol.eps())
}

/// Max-entry norm of `m† m - I`, or `None` for non-square input.
pub fn unitarity_residual(m: &ComplexMatrix) -> Option<f64> {
    if !m.is_square() {
        return None;
    }
    let gram = matmul(&adjoint(m), m).expect("square product");
    let diff = gram
        .sub(&ComplexMatrix::identity(m.rows))
        .expect("same shape");
    Some(diff.max_entry_norm())
}

/// Euclidean norm of a column vector.
pub fn vector_norm(v: &ComplexMatrix) -> Result<f64, TensorError> {
    if !v.is_column() {
        return Err(TensorError::NotColumn {
            rows: v.rows,
            cols: v.cols,
        });
    }
    Ok(v.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
}

/// Inner product `<a|b>` of two column vectors of equal length
/// (conjugate-linear in the first argument).
pub fn inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64, TensorError> {
    if !a.is_column() {
        return Err(TensorError::NotColumn {
            rows: a.rows,
            cols: a.cols,
        });
    }
    if !b.is_column() {
        return Err(TensorError::NotColumn {
            rows: b.rows,
            cols: b.cols,
        });
    }
    if a.rows != b.rows {
        return Err(TensorError::LengthMismatch {
            left: a.rows,
            right: b.rows,
        });
    }
    Ok(a.data.iter().zip(&b.data).map(|(x, y)| x.conj() * y).sum())
}

/// Projector `|v><v|` onto a column vector.
pub fn projector(v: &ComplexMatrix) -> Result<ComplexMatrix, TensorError> {
    if !v.is_column() {
        return Err(TensorError::NotColumn {
            rows: v.rows,
            cols: v.cols,
        });
    }
    matmul(v, &adjoint(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::{hermitian_eigenvalues, seeded_rng};
    use rand::Rng;

    const TOL: f64 = 1e-12;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
        let data = (0..rows * cols)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        ComplexMatrix::new(rows, cols, data).unwrap()
    }

    fn assert_matrix_eq(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) {
        assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                let d = (a.get(i, j) - b.get(i, j)).norm();
                assert!(
                    d <= tol,
                    "entry ({i}, {j}) differs by {d}: {} vs {}",
                    a.get(i, j),
                    b.get(i, j)
                );
            }
        }
    }

    fn bit_flip() -> ComplexMatrix {
        ComplexMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap()
    }

    #[test]
    fn construction_rejects_bad_shapes() {
        assert_eq!(
            ComplexMatrix::new(0, 2, vec![]),
            Err(TensorError::EmptyShape { rows: 0, cols: 2 })
        );
        assert_eq!(
            ComplexMatrix::new(2, 2, vec![Complex64::ZERO; 3]),
            Err(TensorError::EntryCount {
                rows: 2,
                cols: 2,
                found: 3
            })
        );
        let bad = vec![
            Complex64::ZERO,
            c(f64::NAN, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
        ];
        assert_eq!(
            ComplexMatrix::new(2, 2, bad),
            Err(TensorError::NonFinite { row: 0, col: 1 })
        );
    }

    #[test]
    fn tolerance_bounds() {
        assert!(Tolerance::new(1e-10).is_ok());
        assert!(Tolerance::new(0.0).is_err());
        assert!(Tolerance::new(1e-3).is_err());
        assert!(Tolerance::new(-1e-9).is_err());
        assert!(Tolerance::new(f64::NAN).is_err());
    }

    #[test]
    fn matmul_identity_leaves_input_unchanged() {
        let mut rng = seeded_rng(11);
        let m = random_matrix(2, 2, &mut rng);
        let out = matmul(&ComplexMatrix::identity(2), &m).unwrap();
        assert_matrix_eq(&out, &m, 0.0);
    }

    #[test]
    fn matmul_bit_flip_squares_to_identity() {
        let x = bit_flip();
        let out = matmul(&x, &x).unwrap();
        assert_matrix_eq(&out, &ComplexMatrix::identity(2), 0.0);
    }

    #[test]
    fn matmul_matches_naive_triple_loop() {
        let mut rng = seeded_rng(12);
        let a = random_matrix(3, 3, &mut rng);
        let b = random_matrix(3, 3, &mut rng);
        let fast = matmul(&a, &b).unwrap();
        // independent oracle: plain sum over the contraction index
        for i in 0..3 {
            for j in 0..3 {
                let mut want = Complex64::ZERO;
                for k in 0..3 {
                    want += a.get(i, k) * b.get(k, j);
                }
                assert!((fast.get(i, j) - want).norm() <= TOL);
            }
        }
    }

    #[test]
    fn matmul_rejects_shape_mismatch() {
        let a = ComplexMatrix::zeros(2, 3);
        let b = ComplexMatrix::zeros(2, 2);
        assert_eq!(
            matmul(&a, &b),
            Err(TensorError::ShapeMismatch {
                left_rows: 2,
                left_cols: 3,
                right_rows: 2,
                right_cols: 2
            })
        );
    }

    #[test]
    fn adjoint_of_identity_and_involution() {
        let id = ComplexMatrix::identity(2);
        assert_matrix_eq(&adjoint(&id), &id, 0.0);
        let mut rng = seeded_rng(13);
        let m = random_matrix(3, 2, &mut rng);
        assert_matrix_eq(&adjoint(&adjoint(&m)), &m, 0.0);
    }

    #[test]
    fn adjoint_conjugates_single_entry() {
        let m = ComplexMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let want = ComplexMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, -1.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert_matrix_eq(&adjoint(&m), &want, 0.0);
    }

    #[test]
    fn tensor_product_basis_and_identity() {
        let e0 = ComplexMatrix::basis_column(2, 0);
        let out = tensor_product(&e0, &e0);
        assert_eq!((out.rows(), out.cols()), (4, 1));
        assert_eq!(out.get(0, 0), Complex64::ONE);
        for k in 1..4 {
            assert_eq!(out.get(k, 0), Complex64::ZERO);
        }
        let id2 = ComplexMatrix::identity(2);
        assert_matrix_eq(
            &tensor_product(&id2, &id2),
            &ComplexMatrix::identity(4),
            0.0,
        );
    }

    #[test]
    fn tensor_product_matches_index_formula() {
        let mut rng = seeded_rng(14);
        let a = random_matrix(2, 2, &mut rng);
        let b = random_matrix(2, 2, &mut rng);
        let out = tensor_product(&a, &b);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        let want = a.get(i, j) * b.get(k, l);
                        let got = out.get(i * 2 + k, j * 2 + l);
                        assert!((got - want).norm() <= TOL);
                    }
                }
            }
        }
    }

    #[test]
    fn trace_of_identity_and_projector() {
        assert_eq!(trace(&ComplexMatrix::identity(4)).unwrap(), c(4.0, 0.0));
        let mut rng = seeded_rng(15);
        let v = random_matrix(3, 1, &mut rng);
        let n = vector_norm(&v).unwrap();
        let unit = v.scale(c(1.0 / n, 0.0));
        let p = projector(&unit).unwrap();
        assert!((trace(&p).unwrap() - Complex64::ONE).norm() <= TOL);
    }

    #[test]
    fn trace_is_cyclic_under_matmul() {
        let mut rng = seeded_rng(16);
        let a = random_matrix(4, 4, &mut rng);
        let b = random_matrix(4, 4, &mut rng);
        let ab = trace(&matmul(&a, &b).unwrap()).unwrap();
        let ba = trace(&matmul(&b, &a).unwrap()).unwrap();
        assert!((ab - ba).norm() <= TOL);
    }

    #[test]
    fn trace_rejects_non_square() {
        assert_eq!(
            trace(&ComplexMatrix::zeros(2, 3)),
            Err(TensorError::NotSquare { rows: 2, cols: 3 })
        );
    }

    #[test]
    fn partial_trace_of_product_state() {
        let ket00 = tensor_product(
            &ComplexMatrix::basis_column(2, 0),
            &ComplexMatrix::basis_column(2, 0),
        );
        let rho = projector(&ket00).unwrap();
        let reduced = partial_trace(&rho, 2, 2, Subsystem::A).unwrap();
        let want = projector(&ComplexMatrix::basis_column(2, 0)).unwrap();
        assert_matrix_eq(&reduced, &want, TOL);
    }

    #[test]
    fn partial_trace_of_bell_projector_is_maximally_mixed() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell =
            ComplexMatrix::column(vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]).unwrap();
        let rho = projector(&bell).unwrap();
        let reduced = partial_trace(&rho, 2, 2, Subsystem::A).unwrap();
        let want = ComplexMatrix::identity(2).scale(c(0.5, 0.0));
        assert_matrix_eq(&reduced, &want, TOL);
    }

    #[test]
    fn partial_trace_rejects_bad_factorization() {
        let m = ComplexMatrix::zeros(6, 6);
        assert_eq!(
            partial_trace(&m, 2, 2, Subsystem::A),
            Err(TensorError::CompositeMismatch {
                side: 6,
                dim_a: 2,
                dim_b: 2
            })
        );
    }

    #[test]
    fn partial_traces_share_nonzero_spectrum() {
        let mut rng = seeded_rng(17);
        for &(da, db) in &[(2, 2), (2, 4), (3, 4), (4, 3)] {
            let v = random_matrix(da * db, 1, &mut rng);
            let n = vector_norm(&v).unwrap();
            let psi = v.scale(c(1.0 / n, 0.0));
            let rho = projector(&psi).unwrap();
            let rho_b = partial_trace(&rho, da, db, Subsystem::A).unwrap();
            let rho_a = partial_trace(&rho, da, db, Subsystem::B).unwrap();
            let mut ev_b: Vec<f64> = hermitian_eigenvalues(&rho_b)
                .into_iter()
                .filter(|l| l.abs() > 1e-8)
                .collect();
            let mut ev_a: Vec<f64> = hermitian_eigenvalues(&rho_a)
                .into_iter()
                .filter(|l| l.abs() > 1e-8)
                .collect();
            ev_a.sort_by(f64::total_cmp);
            ev_b.sort_by(f64::total_cmp);
            assert_eq!(ev_a.len(), ev_b.len(), "rank mismatch at ({da}, {db})");
            for (x, y) in ev_a.iter().zip(&ev_b) {
                assert!((x - y).abs() <= 1e-8, "{x} vs {y}");
            }
        }
    }

    #[test]
    fn is_unitary_examples() {
        let tol = Tolerance::STRUCTURAL;
        assert!(is_unitary(&ComplexMatrix::identity(2), tol));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let hadamard = ComplexMatrix::from_rows(vec![
            vec![c(s, 0.0), c(s, 0.0)],
            vec![c(s, 0.0), c(-s, 0.0)],
        ])
        .unwrap();
        assert!(is_unitary(&hadamard, tol));
        let stretched = ComplexMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(2.0, 0.0)],
        ])
        .unwrap();
        assert!(!is_unitary(&stretched, tol));
        assert!(!is_unitary(&ComplexMatrix::zeros(2, 3), tol));
    }

    #[test]
    fn vector_norm_examples() {
        assert_eq!(
            vector_norm(&ComplexMatrix::basis_column(2, 0)).unwrap(),
            1.0
        );
        assert_eq!(vector_norm(&ComplexMatrix::zeros(3, 1)).unwrap(), 0.0);
        let plus = ComplexMatrix::column(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((vector_norm(&plus).unwrap() - 2f64.sqrt()).abs() <= TOL);
        assert!(vector_norm(&ComplexMatrix::zeros(2, 2)).is_err());
    }

    mod properties {
        use super::*;
        use crate::random::random_unitary;
        use proptest::prelude::*;

        fn arb_entries(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
            proptest::collection::vec(
                (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im)),
                n,
            )
        }

        proptest! {
            #[test]
            fn tensor_product_is_bilinear(
                a in arb_entries(4), a2 in arb_entries(4), b in arb_entries(4)
            ) {
                let a = ComplexMatrix::new(2, 2, a).unwrap();
                let a2 = ComplexMatrix::new(2, 2, a2).unwrap();
                let b = ComplexMatrix::new(2, 2, b).unwrap();
                let lhs = tensor_product(&a.add(&a2).unwrap(), &b);
                let rhs = tensor_product(&a, &b).add(&tensor_product(&a2, &b)).unwrap();
                for (x, y) in lhs.entries().iter().zip(rhs.entries()) {
                    prop_assert!((x - y).norm() <= 1e-12);
                }
            }

            #[test]
            fn adjoint_reverses_products(a in arb_entries(6), b in arb_entries(6)) {
                let a = ComplexMatrix::new(2, 3, a).unwrap();
                let b = ComplexMatrix::new(3, 2, b).unwrap();
                let lhs = adjoint(&matmul(&a, &b).unwrap());
                let rhs = matmul(&adjoint(&b), &adjoint(&a)).unwrap();
                for (x, y) in lhs.entries().iter().zip(rhs.entries()) {
                    prop_assert!((x - y).norm() <= 1e-12);
                }
            }

            #[test]
            fn partial_trace_preserves_trace(entries in arb_entries(36)) {
                let m = ComplexMatrix::new(6, 6, entries).unwrap();
                let herm = m.add(&adjoint(&m)).unwrap().scale(Complex64::new(0.5, 0.0));
                let full = trace(&herm).unwrap();
                for over in [Subsystem::A, Subsystem::B] {
                    let reduced = partial_trace(&herm, 2, 3, over).unwrap();
                    prop_assert!((trace(&reduced).unwrap() - full).norm() <= 1e-12);
                }
            }

            #[test]
            fn unitaries_preserve_norm(seed in any::<u64>(), entries in arb_entries(4)) {
                let mut rng = crate::test_support::seeded_rng(seed);
                let u = random_unitary(4, &mut rng);
                prop_assume!(is_unitary(&u, Tolerance::STRUCTURAL));
                let v = ComplexMatrix::column(entries).unwrap();
                let rotated = matmul(&u, &v).unwrap();
                prop_assert!(
                    (vector_norm(&rotated).unwrap() - vector_norm(&v).unwrap()).abs() <= 1e-10
                );
            }
        }
    }
}
