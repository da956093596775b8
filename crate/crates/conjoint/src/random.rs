//! Seeded random generation of experiment ingredients: amplitudes,
//! states, unitaries, bases, and whole scenarios.
//!
//! The verification suite leans on randomized inputs, so the generators
//! live in the library proper rather than in test code. Everything is a
//! deterministic function of the supplied RNG; pair with [`seeded_rng`]
//! for reproducible streams.

use crate::model::{Evolution, MeasurementBasis, Preparation, Scenario};
use crate::tensor::{inner, vector_norm, ComplexMatrix};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Pivot threshold below which a random draw is considered degenerate and
/// redrawn (Gram-Schmidt pivots, normalization denominators).
const REDRAW_THRESHOLD: f64 = 1e-8;

/// The crate-wide deterministic generator: ChaCha8 seeded from a 64-bit
/// integer. Identical seeds give identical streams on every platform.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex number with real and imaginary parts uniform in [-1, 1).
pub fn random_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Unit-norm column vector with entries drawn by [`random_complex`] and
/// normalized; degenerate draws are rejected and retried.
pub fn random_unit_column(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    loop {
        let entries: Vec<Complex64> = (0..dim).map(|_| random_complex(rng)).collect();
        let v = ComplexMatrix::column(entries).expect("nonempty column");
        let norm = vector_norm(&v).expect("column");
        if norm > REDRAW_THRESHOLD {
            return v.scale(Complex64::new(1.0 / norm, 0.0));
        }
    }
}

/// Haar-flavored random unitary: Gram-Schmidt orthonormalization of the
/// columns of a random complex matrix, restarting on near-dependent draws.
/// Not exactly Haar-distributed, which no caller here needs; it is a
/// generic unitary with no special structure.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    'restart: loop {
        let mut columns: Vec<ComplexMatrix> = Vec::with_capacity(dim);
        for _ in 0..dim {
            let mut v = ComplexMatrix::column((0..dim).map(|_| random_complex(rng)).collect())
                .expect("nonempty column");
            for q in &columns {
                let overlap = inner(q, &v).expect("same dimension");
                v = v.sub(&q.scale(overlap)).expect("same shape");
            }
            let norm = vector_norm(&v).expect("column");
            if norm < REDRAW_THRESHOLD {
                continue 'restart;
            }
            columns.push(v.scale(Complex64::new(1.0 / norm, 0.0)));
        }
        let mut entries = vec![Complex64::ZERO; dim * dim];
        for (c, col) in columns.iter().enumerate() {
            for r in 0..dim {
                entries[r * dim + c] = col.get(r, 0);
            }
        }
        return ComplexMatrix::new(dim, dim, entries).expect("square matrix");
    }
}

/// Orthonormal measurement basis assembled from the columns of a random
/// unitary.
pub fn random_basis(dim: usize, rng: &mut impl Rng) -> MeasurementBasis {
    let u = random_unitary(dim, rng);
    let vectors = (0..dim)
        .map(|c| ComplexMatrix::column((0..dim).map(|r| u.get(r, c)).collect()).expect("column"))
        .collect();
    MeasurementBasis::new(vectors).expect("columns of a unitary form a basis")
}

/// Random preparation: normalized amplitudes over `dim_a` outcomes and
/// `dim_a` independent unit states in dimension `dim_b`. The states are
/// generally non-orthogonal.
pub fn random_preparation(dim_a: usize, dim_b: usize, rng: &mut impl Rng) -> Preparation {
    let alpha = random_unit_column(dim_a, rng);
    let states = (0..dim_a).map(|_| random_unit_column(dim_b, rng)).collect();
    Preparation::new(alpha.entries().to_vec(), states).expect("structurally valid by construction")
}

/// Random preparation whose conditional states are mutually orthonormal
/// (the first `dim_a` columns of a random unitary on the system space).
/// Requires `dim_b >= dim_a`.
pub fn random_orthonormal_preparation(
    dim_a: usize,
    dim_b: usize,
    rng: &mut impl Rng,
) -> Preparation {
    assert!(
        dim_b >= dim_a,
        "cannot fit {dim_a} orthonormal states in dimension {dim_b}"
    );
    let alpha = random_unit_column(dim_a, rng);
    let u = random_unitary(dim_b, rng);
    let states = (0..dim_a)
        .map(|c| ComplexMatrix::column((0..dim_b).map(|r| u.get(r, c)).collect()).expect("column"))
        .collect();
    Preparation::new(alpha.entries().to_vec(), states).expect("structurally valid by construction")
}

/// Random scenario with a local (system-only) unitary evolution and
/// standard measurement bases.
pub fn random_local_scenario(dim_a: usize, dim_b: usize, rng: &mut impl Rng) -> Scenario {
    let prep = random_preparation(dim_a, dim_b, rng);
    let evolution = Evolution::Local(random_unitary(dim_b, rng));
    Scenario::with_standard_bases(prep, evolution).expect("dimensions consistent by construction")
}

/// Random scenario with an arbitrary joint unitary on the composite space
/// and standard measurement bases.
pub fn random_joint_scenario(dim_a: usize, dim_b: usize, rng: &mut impl Rng) -> Scenario {
    let prep = random_preparation(dim_a, dim_b, rng);
    let evolution = Evolution::Joint(random_unitary(dim_a * dim_b, rng));
    Scenario::with_standard_bases(prep, evolution).expect("dimensions consistent by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{is_unitary, Tolerance};

    #[test]
    fn same_seed_reproduces_the_same_draws() {
        let a = random_unitary(4, &mut seeded_rng(5));
        let b = random_unitary(4, &mut seeded_rng(5));
        assert_eq!(a, b);
        let c = random_unitary(4, &mut seeded_rng(6));
        assert_ne!(a, c);
    }

    #[test]
    fn random_unitaries_pass_the_unitarity_check() {
        let mut rng = seeded_rng(31);
        for dim in [1, 2, 3, 6, 8] {
            let u = random_unitary(dim, &mut rng);
            assert!(is_unitary(&u, Tolerance::STRUCTURAL), "dim {dim}");
        }
    }

    #[test]
    fn random_unit_columns_are_normalized() {
        let mut rng = seeded_rng(32);
        for dim in [1, 2, 5] {
            let v = random_unit_column(dim, &mut rng);
            assert!((vector_norm(&v).unwrap() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn random_preparations_validate_cleanly() {
        let mut rng = seeded_rng(33);
        for _ in 0..10 {
            let prep = random_preparation(3, 4, &mut rng);
            assert!(prep.validate(Tolerance::STRUCTURAL).is_valid());
        }
    }

    #[test]
    fn orthonormal_preparation_states_have_zero_overlap() {
        let mut rng = seeded_rng(34);
        let prep = random_orthonormal_preparation(3, 4, &mut rng);
        for i in 0..3 {
            for j in (i + 1)..3 {
                let overlap = inner(prep.conditional_state(i), prep.conditional_state(j))
                    .unwrap()
                    .norm();
                assert!(overlap <= 1e-12, "states {i}, {j} overlap by {overlap}");
            }
        }
    }

    #[test]
    fn random_scenarios_validate_cleanly() {
        let mut rng = seeded_rng(35);
        for _ in 0..5 {
            let s = random_local_scenario(2, 3, &mut rng);
            assert!(s.validate(Tolerance::STRUCTURAL).is_valid());
            let s = random_joint_scenario(2, 3, &mut rng);
            assert!(s.validate(Tolerance::STRUCTURAL).is_valid());
        }
    }

    #[test]
    fn random_bases_are_orthonormal() {
        let mut rng = seeded_rng(36);
        let basis = random_basis(5, &mut rng);
        assert!(basis.orthonormality_residual() <= 1e-10);
        assert!(!basis.is_standard());
    }
}
