//! Validated data model for a bipartite experiment.
//!
//! A [`Preparation`] stores amplitudes α_i over experimenter outcomes
//! together with the conditional system states |χ_i⟩. The assembled
//! complete state is |ψ⟩ = Σ_i α_i |i⟩_A ⊗ |χ_i⟩ on H_A ⊗ H_B, with the
//! experimenter outcome states fixed to the standard basis of H_A. A
//! [`Scenario`] adds the evolution (local to B, or joint on the composite
//! space), the two measurement bases, and optional stage labels.
//!
//! Construction enforces structural well-formedness (shapes, counts,
//! finiteness, dimension caps) and fails hard on violations. Numerical
//! invariants (normalization, orthonormality, unitarity) are checked
//! separately by [`validate_scenario`], which reports every violation with
//! a field path and residual instead of stopping at the first.

use crate::tensor::{
    self, unitarity_residual, vector_norm, ComplexMatrix, Tolerance, MAX_SUBSYSTEM_DIM,
};
use num_complex::Complex64;
use thiserror::Error;

/// Structural errors: inputs that cannot represent an experiment at all.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("preparation needs at least one outcome")]
    EmptyPreparation,
    #[error("got {amplitudes} amplitudes but {states} conditional states")]
    CountMismatch { amplitudes: usize, states: usize },
    #[error("amplitude {index} is not finite")]
    NonFiniteAmplitude { index: usize },
    #[error("conditional state {index} must be a column vector, got {rows}x{cols}")]
    StateShape {
        index: usize,
        rows: usize,
        cols: usize,
    },
    #[error("conditional state {index} has dimension {found}, expected {expected}")]
    StateDimMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("{name} dimension {dim} exceeds the supported maximum {max}")]
    DimTooLarge {
        name: &'static str,
        dim: usize,
        max: usize,
    },
    #[error("basis needs {expected} vectors of dimension {expected}, got {found}")]
    BasisCount { expected: usize, found: usize },
    #[error("basis vector {index} must be a {expected}x1 column, got {rows}x{cols}")]
    BasisVectorShape {
        index: usize,
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("{name} must be {expected}x{expected}, got {rows}x{cols}")]
    OperatorShape {
        name: &'static str,
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("{name} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        name: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("state vector has {found} components, expected dimA*dimB = {expected}")]
    StateLength { expected: usize, found: usize },
    #[error("state vector norm is {norm}, expected 1 within {eps}")]
    StateNotNormalized { norm: f64, eps: f64 },
    #[error("preparation violates invariants: {report}")]
    InvalidPreparation { report: ValidationReport },
    #[error(transparent)]
    Tensor(#[from] tensor::TensorError),
}

/// One violated numerical invariant: where, what, and by how much.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub path: String,
    pub message: String,
    pub residual: Option<f64>,
}

/// Outcome of tolerance-based validation; empty means valid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub(crate) fn push(
        &mut self,
        path: impl Into<String>,
        message: impl Into<String>,
        residual: f64,
    ) {
        self.violations.push(Violation {
            path: path.into(),
            message: message.into(),
            residual: Some(residual),
        });
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "no violations");
        }
        let mut first = true;
        for v in &self.violations {
            if !first {
                write!(f, "; ")?;
            }
            first = false;
            write!(f, "{}: {}", v.path, v.message)?;
            if let Some(r) = v.residual {
                write!(f, " (residual {r:.3e})")?;
            }
        }
        Ok(())
    }
}

/// Preparation stage: amplitudes α_i over experimenter outcomes and the
/// conditional system states |χ_i⟩, one per outcome.
///
/// The conditional states need not be mutually orthogonal. Conventional
/// outcome probabilities p(a) = |α_a|² are derived on demand, not stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Preparation {
    dim_a: usize,
    dim_b: usize,
    amplitudes: Vec<Complex64>,
    conditional_states: Vec<ComplexMatrix>,
}

impl Preparation {
    pub fn new(
        amplitudes: Vec<Complex64>,
        conditional_states: Vec<ComplexMatrix>,
    ) -> Result<Self, ModelError> {
        if amplitudes.is_empty() {
            return Err(ModelError::EmptyPreparation);
        }
        if amplitudes.len() != conditional_states.len() {
            return Err(ModelError::CountMismatch {
                amplitudes: amplitudes.len(),
                states: conditional_states.len(),
            });
        }
        for (i, a) in amplitudes.iter().enumerate() {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(ModelError::NonFiniteAmplitude { index: i });
            }
        }
        for (i, s) in conditional_states.iter().enumerate() {
            if !s.is_column() {
                return Err(ModelError::StateShape {
                    index: i,
                    rows: s.rows(),
                    cols: s.cols(),
                });
            }
        }
        let dim_b = conditional_states[0].rows();
        for (i, s) in conditional_states.iter().enumerate() {
            if s.rows() != dim_b {
                return Err(ModelError::StateDimMismatch {
                    index: i,
                    expected: dim_b,
                    found: s.rows(),
                });
            }
        }
        let dim_a = amplitudes.len();
        for (name, dim) in [("experimenter", dim_a), ("system", dim_b)] {
            if dim > MAX_SUBSYSTEM_DIM {
                return Err(ModelError::DimTooLarge {
                    name,
                    dim,
                    max: MAX_SUBSYSTEM_DIM,
                });
            }
        }
        Ok(Preparation {
            dim_a,
            dim_b,
            amplitudes,
            conditional_states,
        })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn conditional_states(&self) -> &[ComplexMatrix] {
        &self.conditional_states
    }

    pub fn conditional_state(&self, i: usize) -> &ComplexMatrix {
        &self.conditional_states[i]
    }

    /// Conventional outcome probabilities p(a) = |α_a|².
    pub fn outcome_probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Appends normalization violations to `report`, with paths rooted at
    /// `prefix`.
    fn validate_into(&self, tol: Tolerance, prefix: &str, report: &mut ValidationReport) {
        let weight: f64 = self.amplitudes.iter().map(|a| a.norm_sqr()).sum();
        let residual = (weight - 1.0).abs();
        if residual > tol.eps() {
            report.push(
                format!("{prefix}amplitudes"),
                format!("squared amplitudes sum to {weight}, expected 1"),
                residual,
            );
        }
        for (i, s) in self.conditional_states.iter().enumerate() {
            let norm = vector_norm(s).expect("conditional states are columns");
            let residual = (norm - 1.0).abs();
            if residual > tol.eps() {
                report.push(
                    format!("{prefix}conditional_states[{i}]"),
                    format!("state norm is {norm}, expected 1"),
                    residual,
                );
            }
        }
    }

    /// Checks the normalization invariants in isolation.
    pub fn validate(&self, tol: Tolerance) -> ValidationReport {
        let mut report = ValidationReport::default();
        self.validate_into(tol, "preparation.", &mut report);
        report
    }
}

/// A complete orthonormal measurement basis: `dim` column vectors of
/// dimension `dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    dim: usize,
    vectors: Vec<ComplexMatrix>,
}

impl MeasurementBasis {
    pub fn new(vectors: Vec<ComplexMatrix>) -> Result<Self, ModelError> {
        if vectors.is_empty() {
            return Err(ModelError::BasisCount {
                expected: 1,
                found: 0,
            });
        }
        let dim = vectors.len();
        if dim > MAX_SUBSYSTEM_DIM {
            return Err(ModelError::DimTooLarge {
                name: "basis",
                dim,
                max: MAX_SUBSYSTEM_DIM,
            });
        }
        for (i, v) in vectors.iter().enumerate() {
            if !v.is_column() || v.rows() != dim {
                return Err(ModelError::BasisVectorShape {
                    index: i,
                    expected: dim,
                    rows: v.rows(),
                    cols: v.cols(),
                });
            }
        }
        Ok(MeasurementBasis { dim, vectors })
    }

    /// The standard (computational) basis of the given dimension.
    pub fn standard(dim: usize) -> Self {
        assert!(
            (1..=MAX_SUBSYSTEM_DIM).contains(&dim),
            "standard basis dimension {dim} out of range"
        );
        MeasurementBasis {
            dim,
            vectors: (0..dim)
                .map(|i| ComplexMatrix::basis_column(dim, i))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[ComplexMatrix] {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> &ComplexMatrix {
        &self.vectors[k]
    }

    /// True when every vector is a standard basis column in order.
    pub fn is_standard(&self) -> bool {
        self.vectors
            .iter()
            .enumerate()
            .all(|(i, v)| *v == ComplexMatrix::basis_column(self.dim, i))
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for j in 0..self.dim {
            for k in 0..self.dim {
                let g = tensor::inner(&self.vectors[j], &self.vectors[k])
                    .expect("basis vectors share a dimension");
                let target = if j == k {
                    Complex64::ONE
                } else {
                    Complex64::ZERO
                };
                worst = worst.max((g - target).norm());
            }
        }
        worst
    }
}

/// Evolution between preparation and final measurement: either a unitary
/// acting on the system alone (the experimenter is untouched) or an
/// arbitrary joint unitary on the composite space.
#[derive(Debug, Clone, PartialEq)]
pub enum Evolution {
    /// V_B on H_B; the composite evolution is I_A ⊗ V_B.
    Local(ComplexMatrix),
    /// U_AB on H_A ⊗ H_B.
    Joint(ComplexMatrix),
}

impl Evolution {
    pub fn operator(&self) -> &ComplexMatrix {
        match self {
            Evolution::Local(op) | Evolution::Joint(op) => op,
        }
    }

    pub fn is_local(&self) -> bool {
        matches!(self, Evolution::Local(_))
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Evolution::Local(_) => "local",
            Evolution::Joint(_) => "joint",
        }
    }
}

/// The complete state |ψ⟩ on H_A ⊗ H_B as a unit column vector, composite
/// index a·dimB + b.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    dim_a: usize,
    dim_b: usize,
    vector: ComplexMatrix,
}

impl BipartiteState {
    /// Wraps a composite-space column vector, checking shape and that the
    /// norm is 1 within the given tolerance.
    pub fn new(
        dim_a: usize,
        dim_b: usize,
        vector: ComplexMatrix,
        tol: Tolerance,
    ) -> Result<Self, ModelError> {
        for (name, dim) in [("experimenter", dim_a), ("system", dim_b)] {
            if dim == 0 || dim > MAX_SUBSYSTEM_DIM {
                return Err(ModelError::DimTooLarge {
                    name,
                    dim,
                    max: MAX_SUBSYSTEM_DIM,
                });
            }
        }
        if !vector.is_column() || vector.rows() != dim_a * dim_b {
            return Err(ModelError::StateLength {
                expected: dim_a * dim_b,
                found: vector.rows() * vector.cols(),
            });
        }
        let norm = vector_norm(&vector).expect("checked column");
        if (norm - 1.0).abs() > tol.eps() {
            return Err(ModelError::StateNotNormalized {
                norm,
                eps: tol.eps(),
            });
        }
        Ok(BipartiteState {
            dim_a,
            dim_b,
            vector,
        })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn vector(&self) -> &ComplexMatrix {
        &self.vector
    }
}

/// Assembles the complete state |ψ⟩ = Σ_i α_i |i⟩_A ⊗ |χ_i⟩ from a
/// preparation, with |i⟩_A the standard basis of H_A.
///
/// Rejects preparations that fail normalization at the structural
/// tolerance; the error carries the full violation report.
pub fn assemble_complete_state(prep: &Preparation) -> Result<BipartiteState, ModelError> {
    let report = prep.validate(Tolerance::STRUCTURAL);
    if !report.is_valid() {
        return Err(ModelError::InvalidPreparation { report });
    }
    let (dim_a, dim_b) = (prep.dim_a(), prep.dim_b());
    let mut entries = vec![Complex64::ZERO; dim_a * dim_b];
    for (i, (alpha, chi)) in prep
        .amplitudes()
        .iter()
        .zip(prep.conditional_states())
        .enumerate()
    {
        for k in 0..dim_b {
            entries[i * dim_b + k] = alpha * chi.get(k, 0);
        }
    }
    let vector = ComplexMatrix::column(entries)?;
    BipartiteState::new(dim_a, dim_b, vector, Tolerance::STRUCTURAL)
}

/// Optional human-readable names for the preparation and measurement
/// stages. Purely descriptive; dynamics live in [`Evolution`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StageLabels {
    pub stage_a: Option<String>,
    pub stage_b: Option<String>,
}

impl StageLabels {
    pub fn is_empty(&self) -> bool {
        self.stage_a.is_none() && self.stage_b.is_none()
    }
}

/// A full experiment: preparation, evolution, and the two final
/// measurement bases.
///
/// `declared_local_evolution` is the system unitary the conventional
/// description believes in. For local evolutions it is redundant; for
/// joint evolutions it is what the divergence report contrasts against
/// the true dynamics.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    preparation: Preparation,
    evolution: Evolution,
    basis_a: MeasurementBasis,
    basis_b: MeasurementBasis,
    declared_local_evolution: Option<ComplexMatrix>,
    labels: StageLabels,
}

impl Scenario {
    pub fn new(
        preparation: Preparation,
        evolution: Evolution,
        basis_a: MeasurementBasis,
        basis_b: MeasurementBasis,
    ) -> Result<Self, ModelError> {
        if basis_a.dim() != preparation.dim_a() {
            return Err(ModelError::DimensionMismatch {
                name: "basis_a",
                expected: preparation.dim_a(),
                found: basis_a.dim(),
            });
        }
        if basis_b.dim() != preparation.dim_b() {
            return Err(ModelError::DimensionMismatch {
                name: "basis_b",
                expected: preparation.dim_b(),
                found: basis_b.dim(),
            });
        }
        let op = evolution.operator();
        let expected = match &evolution {
            Evolution::Local(_) => preparation.dim_b(),
            Evolution::Joint(_) => preparation.dim_a() * preparation.dim_b(),
        };
        if !op.is_square() || op.rows() != expected {
            return Err(ModelError::OperatorShape {
                name: "evolution.operator",
                expected,
                rows: op.rows(),
                cols: op.cols(),
            });
        }
        Ok(Scenario {
            preparation,
            evolution,
            basis_a,
            basis_b,
            declared_local_evolution: None,
            labels: StageLabels::default(),
        })
    }

    /// Scenario with standard bases on both sides.
    pub fn with_standard_bases(
        preparation: Preparation,
        evolution: Evolution,
    ) -> Result<Self, ModelError> {
        let basis_a = MeasurementBasis::standard(preparation.dim_a());
        let basis_b = MeasurementBasis::standard(preparation.dim_b());
        Scenario::new(preparation, evolution, basis_a, basis_b)
    }

    pub fn with_declared_local_evolution(
        mut self,
        operator: ComplexMatrix,
    ) -> Result<Self, ModelError> {
        let expected = self.preparation.dim_b();
        if !operator.is_square() || operator.rows() != expected {
            return Err(ModelError::OperatorShape {
                name: "declared_local_evolution",
                expected,
                rows: operator.rows(),
                cols: operator.cols(),
            });
        }
        self.declared_local_evolution = Some(operator);
        Ok(self)
    }

    pub fn with_labels(mut self, labels: StageLabels) -> Self {
        self.labels = labels;
        self
    }

    pub fn preparation(&self) -> &Preparation {
        &self.preparation
    }

    pub fn evolution(&self) -> &Evolution {
        &self.evolution
    }

    pub fn basis_a(&self) -> &MeasurementBasis {
        &self.basis_a
    }

    pub fn basis_b(&self) -> &MeasurementBasis {
        &self.basis_b
    }

    pub fn declared_local_evolution(&self) -> Option<&ComplexMatrix> {
        self.declared_local_evolution.as_ref()
    }

    pub fn labels(&self) -> &StageLabels {
        &self.labels
    }

    pub fn dim_a(&self) -> usize {
        self.preparation.dim_a()
    }

    pub fn dim_b(&self) -> usize {
        self.preparation.dim_b()
    }

    pub fn validate(&self, tol: Tolerance) -> ValidationReport {
        validate_scenario(self, tol)
    }
}

/// Checks every numerical invariant of a scenario and reports all
/// violations: amplitude and state normalization, basis orthonormality,
/// and unitarity of the evolution operators. Validation never fails; an
/// empty report means valid.
pub fn validate_scenario(s: &Scenario, tol: Tolerance) -> ValidationReport {
    let mut report = ValidationReport::default();
    s.preparation
        .validate_into(tol, "preparation.", &mut report);
    for (path, basis) in [("basis_a", &s.basis_a), ("basis_b", &s.basis_b)] {
        let residual = basis.orthonormality_residual();
        if residual > tol.eps() {
            report.push(
                path,
                format!("basis vectors are not orthonormal ({residual:.3e} off)"),
                residual,
            );
        }
    }
    let residual = unitarity_residual(s.evolution.operator()).expect("operator is square");
    if residual > tol.eps() {
        report.push(
            "evolution.operator",
            format!("operator is not unitary ({residual:.3e} off)"),
            residual,
        );
    }
    if let Some(op) = &s.declared_local_evolution {
        let residual = unitarity_residual(op).expect("operator is square");
        if residual > tol.eps() {
            report.push(
                "declared_local_evolution",
                format!("operator is not unitary ({residual:.3e} off)"),
                residual,
            );
        }
    }
    report
}
