//! Probability formulas for both descriptions of the experiment.
//!
//! The conventional path treats the preparation as a classical mixture:
//! outcome a occurs with p(a) = |α_a|², after which the system evolves
//! alone and the Born rule gives p(b|a) = |⟨b| V_B |χ_a⟩|². The complete
//! path keeps the experimenter in the state: p(a,b) = |⟨a|⊗⟨b| U |ψ⟩|²
//! on the assembled entangled state |ψ⟩. For local evolutions and the
//! standard experimenter basis the two coincide; [`divergence_report`]
//! quantifies the gap once the evolution couples the two systems.
//!
//! This module is the strict boundary: operations reject inputs whose
//! numerical invariants fail at the given tolerance, where the model
//! layer merely reports them.

use crate::model::{
    assemble_complete_state, validate_scenario, BipartiteState, Evolution, MeasurementBasis,
    ModelError, Preparation, Scenario, ValidationReport,
};
use crate::tensor::{
    inner, matmul, partial_trace, projector, tensor_product, unitarity_residual, ComplexMatrix,
    Subsystem, TensorError, Tolerance,
};
use num_complex::Complex64;
use thiserror::Error;

/// Probabilities below this are treated as exact zeros when computing
/// support masks, so floating-point dust cannot create spurious support.
pub const SUPPORT_CLAMP: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("scenario failed validation: {report}")]
    InvalidScenario { report: ValidationReport },
    #[error("the conventional description cannot express a joint evolution; it needs a system-only unitary")]
    JointEvolutionNotExpressible,
    #[error("joint-evolution scenario declares no local evolution to compare against")]
    MissingDeclaredEvolution,
    #[error("{name} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        name: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("probability table needs {expected} entries, got {found}")]
    EntryCount { expected: usize, found: usize },
    #[error("probability at ({a}, {b}) is not finite")]
    NonFiniteProbability { a: usize, b: usize },
    #[error("probability at ({a}, {b}) is {value}, negative beyond tolerance")]
    NegativeProbability { a: usize, b: usize, value: f64 },
    #[error("probability table sums to {sum}, expected 1")]
    NotNormalized { sum: f64 },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Which conditional a table holds: final outcome given preparation, or
/// preparation inferred from final outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// p(b|a): condition on the preparation outcome.
    Predictive,
    /// p(a|b): condition on the final outcome.
    Retrodictive,
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Direction::Predictive => write!(f, "predictive"),
            Direction::Retrodictive => write!(f, "retrodictive"),
        }
    }
}

/// Joint probability table p(a,b), row index a, column index b.
///
/// Entries are non-negative and sum to 1 within the construction
/// tolerance; negative floating-point dust inside the tolerance is
/// clamped to 0.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable {
    dim_a: usize,
    dim_b: usize,
    p: Vec<f64>,
}

impl JointTable {
    pub fn new(
        dim_a: usize,
        dim_b: usize,
        entries: Vec<f64>,
        tol: Tolerance,
    ) -> Result<Self, EngineError> {
        if dim_a == 0 || dim_b == 0 || entries.len() != dim_a * dim_b {
            return Err(EngineError::EntryCount {
                expected: dim_a * dim_b,
                found: entries.len(),
            });
        }
        let mut p = entries;
        for (k, e) in p.iter_mut().enumerate() {
            let (a, b) = (k / dim_b, k % dim_b);
            if !e.is_finite() {
                return Err(EngineError::NonFiniteProbability { a, b });
            }
            if *e < -tol.eps() {
                return Err(EngineError::NegativeProbability { a, b, value: *e });
            }
            if *e < 0.0 {
                *e = 0.0;
            }
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > tol.eps() {
            return Err(EngineError::NotNormalized { sum });
        }
        Ok(JointTable { dim_a, dim_b, p })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn p(&self, a: usize, b: usize) -> f64 {
        self.p[a * self.dim_b + b]
    }

    /// Row-major probabilities, index a·dimB + b.
    pub fn entries(&self) -> &[f64] {
        &self.p
    }

    /// Marginal p(a): row sums.
    pub fn marginal_a(&self) -> Vec<f64> {
        (0..self.dim_a)
            .map(|a| (0..self.dim_b).map(|b| self.p(a, b)).sum())
            .collect()
    }

    /// Marginal p(b): column sums.
    pub fn marginal_b(&self) -> Vec<f64> {
        (0..self.dim_b)
            .map(|b| (0..self.dim_a).map(|a| self.p(a, b)).sum())
            .collect()
    }

    /// Conditional table in the given direction. Conditioning outcomes
    /// whose marginal vanishes (after clamping dust below
    /// [`SUPPORT_CLAMP`]) are masked, not divided by.
    pub fn conditional(&self, direction: Direction) -> ConditionalTable {
        let clamp = |x: f64| if x < SUPPORT_CLAMP { 0.0 } else { x };
        let mut p = vec![0.0; self.dim_a * self.dim_b];
        let support: Vec<bool>;
        match direction {
            Direction::Predictive => {
                let marginal = self.marginal_a();
                support = (0..self.dim_a)
                    .map(|a| (0..self.dim_b).map(|b| clamp(self.p(a, b))).sum::<f64>() > 0.0)
                    .collect();
                for a in 0..self.dim_a {
                    if !support[a] {
                        continue;
                    }
                    for b in 0..self.dim_b {
                        p[a * self.dim_b + b] = self.p(a, b) / marginal[a];
                    }
                }
            }
            Direction::Retrodictive => {
                let marginal = self.marginal_b();
                support = (0..self.dim_b)
                    .map(|b| (0..self.dim_a).map(|a| clamp(self.p(a, b))).sum::<f64>() > 0.0)
                    .collect();
                for b in 0..self.dim_b {
                    if !support[b] {
                        continue;
                    }
                    for a in 0..self.dim_a {
                        p[a * self.dim_b + b] = self.p(a, b) / marginal[b];
                    }
                }
            }
        }
        ConditionalTable {
            direction,
            dim_a: self.dim_a,
            dim_b: self.dim_b,
            p,
            support,
        }
    }

    /// True iff this table, its own conditionals, and its marginals
    /// satisfy p(a|b)·p(b) = p(b|a)·p(a) = p(a,b) within `tol` on every
    /// supported outcome.
    pub fn bayes_check(&self, tol: Tolerance) -> bool {
        bayes_consistent(
            self,
            &self.conditional(Direction::Predictive),
            &self.conditional(Direction::Retrodictive),
            tol,
        )
    }
}

/// Conditional probability table with a support mask over the
/// conditioning outcomes.
///
/// Predictive tables hold p(b|a) and mask rows a; retrodictive tables
/// hold p(a|b) and mask columns b. Masked entries are undefined, which is
/// different from zero: [`ConditionalTable::value`] returns `None` there.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalTable {
    direction: Direction,
    dim_a: usize,
    dim_b: usize,
    p: Vec<f64>,
    support: Vec<bool>,
}

impl ConditionalTable {
    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    /// p(b|a) or p(a|b) at (a, b), `None` when the conditioning outcome
    /// is out of support.
    pub fn value(&self, a: usize, b: usize) -> Option<f64> {
        let supported = match self.direction {
            Direction::Predictive => self.support[a],
            Direction::Retrodictive => self.support[b],
        };
        supported.then(|| self.p[a * self.dim_b + b])
    }

    /// Support mask over conditioning outcomes: indexed by a for
    /// predictive tables, by b for retrodictive ones.
    pub fn support(&self) -> &[bool] {
        &self.support
    }

    /// Conditioning outcomes that are masked (zero marginal).
    pub fn masked_outcomes(&self) -> Vec<usize> {
        self.support
            .iter()
            .enumerate()
            .filter_map(|(k, &s)| (!s).then_some(k))
            .collect()
    }
}

/// The amplitudes μ_ij of the complete state in the product basis
/// {|i⟩_A ⊗ |j⟩_B(pulled back through the evolution)}: μ_ij = α_i·⟨j|V_B|χ_i⟩.
///
/// Each row carries the weight of its outcome, Σ_j |μ_ij|² = |α_i|², and
/// the whole matrix carries weight 1. The per-state amplitudes β_ij are
/// not stored: they are μ_ij / α_i, defined only where α_i ≠ 0.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix {
    mu: ComplexMatrix,
}

impl CoefficientMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mu
    }

    pub fn dim_a(&self) -> usize {
        self.mu.rows()
    }

    pub fn dim_b(&self) -> usize {
        self.mu.cols()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.mu.get(i, j)
    }

    /// Σ_j |μ_ij|², which equals |α_i|² for a valid preparation.
    pub fn row_weight(&self, i: usize) -> f64 {
        (0..self.mu.cols())
            .map(|j| self.mu.get(i, j).norm_sqr())
            .sum()
    }

    /// Σ_ij |μ_ij|², which equals 1 for a valid preparation.
    pub fn total_weight(&self) -> f64 {
        (0..self.mu.rows()).map(|i| self.row_weight(i)).sum()
    }
}

/// Side-by-side comparison of the two descriptions of one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceReport {
    /// p(a)·p_conv(b|a), built from the (declared) local evolution.
    pub conventional_joint: JointTable,
    /// Joint probabilities from the complete entangled state under the
    /// full evolution.
    pub complete_joint: JointTable,
    /// 0.5·Σ_ab |conventional − complete|, in [0, 1].
    pub total_variation: f64,
    /// Largest single-entry difference.
    pub max_entry_gap: f64,
}

fn require_dim(name: &'static str, expected: usize, found: usize) -> Result<(), EngineError> {
    if expected == found {
        Ok(())
    } else {
        Err(EngineError::DimensionMismatch {
            name,
            expected,
            found,
        })
    }
}

/// Collects tolerance-level violations of the conventional-path inputs.
fn validate_conventional_inputs(
    prep: &Preparation,
    operator: &ComplexMatrix,
    basis_b: &MeasurementBasis,
    tol: Tolerance,
) -> Result<(), EngineError> {
    let mut report = prep.validate(tol);
    let residual = basis_b.orthonormality_residual();
    if residual > tol.eps() {
        report.push("basis_b", "basis vectors are not orthonormal", residual);
    }
    let residual = unitarity_residual(operator).expect("operator is square");
    if residual > tol.eps() {
        report.push("evolution.operator", "operator is not unitary", residual);
    }
    if report.is_valid() {
        Ok(())
    } else {
        Err(EngineError::InvalidScenario { report })
    }
}

/// Born-rule conditionals of the conventional description:
/// p(b|a) = |⟨b| V_B |χ_a⟩|².
///
/// Every row is in support: the conventional table conditions on the
/// prepared state itself, so it is defined even for outcomes with zero
/// amplitude. Joint evolutions are rejected; the conventional description
/// has no conditional for them.
pub fn conventional_conditional(
    prep: &Preparation,
    evo: &Evolution,
    basis_b: &MeasurementBasis,
    tol: Tolerance,
) -> Result<ConditionalTable, EngineError> {
    let operator = match evo {
        Evolution::Local(v) => v,
        Evolution::Joint(_) => return Err(EngineError::JointEvolutionNotExpressible),
    };
    require_dim("evolution.operator", prep.dim_b(), operator.rows())?;
    require_dim("basis_b", prep.dim_b(), basis_b.dim())?;
    validate_conventional_inputs(prep, operator, basis_b, tol)?;

    let (dim_a, dim_b) = (prep.dim_a(), prep.dim_b());
    let mut p = vec![0.0; dim_a * dim_b];
    for a in 0..dim_a {
        let rotated = matmul(operator, prep.conditional_state(a))?;
        for b in 0..dim_b {
            let amp = inner(basis_b.vector(b), &rotated)?;
            p[a * dim_b + b] = amp.norm_sqr();
        }
    }
    Ok(ConditionalTable {
        direction: Direction::Predictive,
        dim_a,
        dim_b,
        p,
        support: vec![true; dim_a],
    })
}

/// Coefficient matrix of the complete state in the evolution-adjusted
/// product basis: μ_ij = α_i·⟨j| V_B |χ_i⟩.
pub fn coefficient_matrix(
    prep: &Preparation,
    evo: &Evolution,
    basis_b: &MeasurementBasis,
    tol: Tolerance,
) -> Result<CoefficientMatrix, EngineError> {
    let operator = match evo {
        Evolution::Local(v) => v,
        Evolution::Joint(_) => return Err(EngineError::JointEvolutionNotExpressible),
    };
    require_dim("evolution.operator", prep.dim_b(), operator.rows())?;
    require_dim("basis_b", prep.dim_b(), basis_b.dim())?;
    validate_conventional_inputs(prep, operator, basis_b, tol)?;

    let (dim_a, dim_b) = (prep.dim_a(), prep.dim_b());
    let mut entries = vec![Complex64::ZERO; dim_a * dim_b];
    for i in 0..dim_a {
        let rotated = matmul(operator, prep.conditional_state(i))?;
        for j in 0..dim_b {
            entries[i * dim_b + j] = prep.amplitudes()[i] * inner(basis_b.vector(j), &rotated)?;
        }
    }
    Ok(CoefficientMatrix {
        mu: ComplexMatrix::new(dim_a, dim_b, entries)?,
    })
}

/// Joint probabilities of the complete description:
/// p(a,b) = |⟨a|_A ⊗ ⟨b|_B · U |ψ⟩|², with U = I_A ⊗ V_B for local
/// evolutions and U = U_AB for joint ones.
pub fn joint_distribution(
    state: &BipartiteState,
    evo: &Evolution,
    basis_a: &MeasurementBasis,
    basis_b: &MeasurementBasis,
    tol: Tolerance,
) -> Result<JointTable, EngineError> {
    let (dim_a, dim_b) = (state.dim_a(), state.dim_b());
    require_dim("basis_a", dim_a, basis_a.dim())?;
    require_dim("basis_b", dim_b, basis_b.dim())?;
    let expected = match evo {
        Evolution::Local(_) => dim_b,
        Evolution::Joint(_) => dim_a * dim_b,
    };
    require_dim("evolution.operator", expected, evo.operator().rows())?;

    let mut report = ValidationReport::default();
    for (path, basis) in [("basis_a", basis_a), ("basis_b", basis_b)] {
        let residual = basis.orthonormality_residual();
        if residual > tol.eps() {
            report.push(path, "basis vectors are not orthonormal", residual);
        }
    }
    let residual = unitarity_residual(evo.operator()).expect("operator is square");
    if residual > tol.eps() {
        report.push("evolution.operator", "operator is not unitary", residual);
    }
    if !report.is_valid() {
        return Err(EngineError::InvalidScenario { report });
    }

    let psi = state.vector();
    let evolved = match evo {
        Evolution::Local(v) => {
            // apply V_B block by block; the experimenter factor is untouched
            let mut out = vec![Complex64::ZERO; dim_a * dim_b];
            for i in 0..dim_a {
                for k in 0..dim_b {
                    let mut sum = Complex64::ZERO;
                    for l in 0..dim_b {
                        sum += v.get(k, l) * psi.get(i * dim_b + l, 0);
                    }
                    out[i * dim_b + k] = sum;
                }
            }
            ComplexMatrix::column(out)?
        }
        Evolution::Joint(u) => matmul(u, psi)?,
    };

    let mut p = vec![0.0; dim_a * dim_b];
    for a in 0..dim_a {
        for b in 0..dim_b {
            let outcome = tensor_product(basis_a.vector(a), basis_b.vector(b));
            p[a * dim_b + b] = inner(&outcome, &evolved)?.norm_sqr();
        }
    }
    JointTable::new(dim_a, dim_b, p, tol)
}

/// Reduced density operator of one subsystem: the partial trace of
/// |ψ⟩⟨ψ| over the other.
pub fn reduced_density(state: &BipartiteState, over: Subsystem) -> ComplexMatrix {
    let rho = projector(state.vector()).expect("state is a column");
    partial_trace(&rho, state.dim_a(), state.dim_b(), over)
        .expect("projector side matches dimA*dimB")
}

/// The density operator the conventional description assigns to the
/// system: the classical mixture Σ_a |α_a|²·|χ_a⟩⟨χ_a|.
///
/// For any preparation this equals the reduced density operator of the
/// assembled complete state over the experimenter.
pub fn conventional_mixture(prep: &Preparation) -> ComplexMatrix {
    let mut rho = ComplexMatrix::zeros(prep.dim_b(), prep.dim_b());
    for (alpha, chi) in prep.amplitudes().iter().zip(prep.conditional_states()) {
        let term = projector(chi).expect("states are columns");
        rho = rho
            .add(&term.scale(Complex64::new(alpha.norm_sqr(), 0.0)))
            .expect("same shape");
    }
    rho
}

/// Contrasts the conventional joint p(a)·p_conv(b|a) with the complete
/// joint under the scenario's full evolution.
///
/// For local evolutions the conventional side uses the evolution itself;
/// for joint evolutions it uses the scenario's declared local evolution,
/// the system unitary the conventional experimenter believes in. A joint
/// scenario without one is rejected.
pub fn divergence_report(s: &Scenario, tol: Tolerance) -> Result<DivergenceReport, EngineError> {
    let report = validate_scenario(s, tol);
    if !report.is_valid() {
        return Err(EngineError::InvalidScenario { report });
    }
    let declared = match s.evolution() {
        Evolution::Local(v) => v,
        Evolution::Joint(_) => s
            .declared_local_evolution()
            .ok_or(EngineError::MissingDeclaredEvolution)?,
    };

    let prep = s.preparation();
    let (dim_a, dim_b) = (prep.dim_a(), prep.dim_b());
    let believed = Evolution::Local(declared.clone());
    let born = conventional_conditional(prep, &believed, s.basis_b(), tol)?;
    let weights = prep.outcome_probabilities();
    let mut conventional = vec![0.0; dim_a * dim_b];
    for a in 0..dim_a {
        for b in 0..dim_b {
            let cond = born
                .value(a, b)
                .expect("conventional rows are always supported");
            conventional[a * dim_b + b] = weights[a] * cond;
        }
    }
    let conventional_joint = JointTable::new(dim_a, dim_b, conventional, tol)?;

    let state = assemble_complete_state(prep)?;
    let complete_joint = joint_distribution(&state, s.evolution(), s.basis_a(), s.basis_b(), tol)?;

    let mut total = 0.0;
    let mut gap = 0.0f64;
    for (x, y) in conventional_joint
        .entries()
        .iter()
        .zip(complete_joint.entries())
    {
        let d = (x - y).abs();
        total += d;
        gap = gap.max(d);
    }
    Ok(DivergenceReport {
        conventional_joint,
        complete_joint,
        total_variation: 0.5 * total,
        max_entry_gap: gap,
    })
}

/// Conditional distribution extracted from a joint table; free-function
/// form of [`JointTable::conditional`].
pub fn conditional(joint: &JointTable, direction: Direction) -> ConditionalTable {
    joint.conditional(direction)
}

/// True iff `predictive` and `retrodictive` reproduce `joint` through the
/// product rules p(b|a)·p(a) = p(a,b) = p(a|b)·p(b) within `tol`, using
/// `joint`'s own marginals. Each equality is checked only where its
/// conditioning outcome is in support.
///
/// [`JointTable::bayes_check`] feeds a table's own conditionals through
/// this; passing conditionals from a different table exposes the
/// mismatch.
pub fn bayes_consistent(
    joint: &JointTable,
    predictive: &ConditionalTable,
    retrodictive: &ConditionalTable,
    tol: Tolerance,
) -> bool {
    let same_shape =
        |c: &ConditionalTable| c.dim_a() == joint.dim_a() && c.dim_b() == joint.dim_b();
    if !same_shape(predictive)
        || !same_shape(retrodictive)
        || predictive.direction() != Direction::Predictive
        || retrodictive.direction() != Direction::Retrodictive
    {
        return false;
    }
    let pa = joint.marginal_a();
    let pb = joint.marginal_b();
    for (a, &pa_a) in pa.iter().enumerate() {
        for (b, &pb_b) in pb.iter().enumerate() {
            let target = joint.p(a, b);
            if let Some(cond) = predictive.value(a, b) {
                if (cond * pa_a - target).abs() > tol.eps() {
                    return false;
                }
            }
            if let Some(cond) = retrodictive.value(a, b) {
                if (cond * pb_b - target).abs() > tol.eps() {
                    return false;
                }
            }
        }
    }
    true
}
