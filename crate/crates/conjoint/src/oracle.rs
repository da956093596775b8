//! Independent verification path for the probability engine.
//!
//! [`enumerate_joint`] re-derives every joint probability the slow way:
//! assemble the state by explicit superposition, build the full evolved
//! density matrix U|ψ⟩⟨ψ|U†, project on each outcome pair with
//! P_ab = |a⟩⟨a| ⊗ |b⟩⟨b|, and take a trace. No inner-product shortcut,
//! no coefficient matrix; only the linear-algebra kernel is shared with
//! the fast path, so agreement between the two is a meaningful check.
//!
//! [`sample_joint`] adds an empirical check: seeded Monte Carlo draws
//! from the exact distribution whose frequencies must converge to the
//! computed table at the usual 1/√n rate.

use crate::engine::{joint_distribution, EngineError, JointTable};
use crate::model::{assemble_complete_state, validate_scenario, Evolution, Scenario};
use crate::tensor::{adjoint, matmul, projector, tensor_product, trace, ComplexMatrix, Tolerance};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("sample count must be at least 1")]
    ZeroSampleCount,
    #[error("tables have different shapes: {left_a}x{left_b} vs {right_a}x{right_b}")]
    TableShapeMismatch {
        left_a: usize,
        left_b: usize,
        right_a: usize,
        right_b: usize,
    },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// The fixed deterministic generator behind all sampling: ChaCha8,
/// seeded from a 64-bit integer. The same seed yields the same draw
/// sequence bit-for-bit on every platform, which is what makes sampler
/// output committable as golden data.
pub struct RngStream {
    rng: ChaCha8Rng,
}

impl RngStream {
    pub const ALGORITHM: &'static str = "ChaCha8 (seed_from_u64)";

    pub fn from_seed(seed: u64) -> Self {
        RngStream {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn algorithm(&self) -> &'static str {
        Self::ALGORITHM
    }

    /// Next uniform draw in [0, 1), 53 bits of precision.
    pub fn next_uniform(&mut self) -> f64 {
        self.rng.random()
    }
}

/// Outcome counts from one seeded sampling run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleRun {
    seed: u64,
    n: u64,
    dim_a: usize,
    dim_b: usize,
    counts: Vec<u64>,
}

impl SampleRun {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn count(&self, a: usize, b: usize) -> u64 {
        self.counts[a * self.dim_b + b]
    }

    /// Row-major counts, index a·dimB + b; they sum to `n`.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Empirical frequencies counts/n as a probability table.
    pub fn empirical(&self) -> JointTable {
        let n = self.n as f64;
        let freq = self.counts.iter().map(|&c| c as f64 / n).collect();
        JointTable::new(self.dim_a, self.dim_b, freq, Tolerance::STRUCTURAL)
            .expect("counts sum to n")
    }
}

/// Brute-force joint distribution: p(a,b) = Tr{P_ab · U|ψ⟩⟨ψ|U†} with
/// P_ab = |a⟩⟨a| ⊗ |b⟩⟨b| built explicitly.
pub fn enumerate_joint(s: &Scenario, tol: Tolerance) -> Result<JointTable, EngineError> {
    let report = validate_scenario(s, tol);
    if !report.is_valid() {
        return Err(EngineError::InvalidScenario { report });
    }
    let prep = s.preparation();
    let (dim_a, dim_b) = (prep.dim_a(), prep.dim_b());

    // |ψ⟩ by explicit superposition of product terms
    let mut psi = ComplexMatrix::zeros(dim_a * dim_b, 1);
    for i in 0..dim_a {
        let term = tensor_product(
            &ComplexMatrix::basis_column(dim_a, i),
            prep.conditional_state(i),
        )
        .scale(prep.amplitudes()[i]);
        psi = psi.add(&term)?;
    }

    let u_full = match s.evolution() {
        Evolution::Local(v) => tensor_product(&ComplexMatrix::identity(dim_a), v),
        Evolution::Joint(u) => u.clone(),
    };
    let rho = projector(&psi)?;
    let rho_evolved = matmul(&matmul(&u_full, &rho)?, &adjoint(&u_full))?;

    let mut p = vec![0.0; dim_a * dim_b];
    for a in 0..dim_a {
        let proj_a = projector(s.basis_a().vector(a))?;
        for b in 0..dim_b {
            let proj_b = projector(s.basis_b().vector(b))?;
            let p_ab = tensor_product(&proj_a, &proj_b);
            p[a * dim_b + b] = trace(&matmul(&p_ab, &rho_evolved)?)?.re;
        }
    }
    JointTable::new(dim_a, dim_b, p, tol)
}

/// Draws `n` outcomes from the scenario's exact joint distribution by
/// inverse CDF over the flattened (a, b) cells. Deterministic in `seed`;
/// cells with zero probability are never drawn.
pub fn sample_joint(
    s: &Scenario,
    n: u64,
    seed: u64,
    tol: Tolerance,
) -> Result<SampleRun, OracleError> {
    if n == 0 {
        return Err(OracleError::ZeroSampleCount);
    }
    let state = assemble_complete_state(s.preparation()).map_err(EngineError::from)?;
    let exact = joint_distribution(&state, s.evolution(), s.basis_a(), s.basis_b(), tol)?;

    let mut cdf = Vec::with_capacity(exact.entries().len());
    let mut acc = 0.0;
    for &p in exact.entries() {
        acc += p;
        cdf.push(acc);
    }
    let last_drawable = exact
        .entries()
        .iter()
        .rposition(|&p| p > 0.0)
        .expect("a normalized table has a positive entry");

    let mut stream = RngStream::from_seed(seed);
    let mut counts = vec![0u64; exact.entries().len()];
    for _ in 0..n {
        let u = stream.next_uniform();
        // smallest cell whose cumulative mass exceeds u; zero-probability
        // cells share their predecessor's cumulative value and lose the tie
        let cell = cdf.partition_point(|&c| c <= u).min(last_drawable);
        counts[cell] += 1;
    }
    Ok(SampleRun {
        seed,
        n,
        dim_a: exact.dim_a(),
        dim_b: exact.dim_b(),
        counts,
    })
}

/// Total variation distance 0.5·Σ_ab |p − q| between two tables of the
/// same shape; ranges over [0, 1].
pub fn tv_distance(p: &JointTable, q: &JointTable) -> Result<f64, OracleError> {
    if p.dim_a() != q.dim_a() || p.dim_b() != q.dim_b() {
        return Err(OracleError::TableShapeMismatch {
            left_a: p.dim_a(),
            left_b: p.dim_b(),
            right_a: q.dim_a(),
            right_b: q.dim_b(),
        });
    }
    let sum: f64 = p
        .entries()
        .iter()
        .zip(q.entries())
        .map(|(x, y)| (x - y).abs())
        .sum();
    Ok(0.5 * sum)
}
