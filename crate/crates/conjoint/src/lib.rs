//! Measurement statistics for bipartite experimenter–system models.
//!
//! A scenario describes an experimenter `A` preparing a system `B`:
//! preparation outcome `a` occurs with amplitude α_a and leaves `B` in a
//! conditional state |χ_a⟩. Two descriptions of the subsequent evolution
//! and readout are computed side by side:
//!
//! * the conventional account, which conditions on the preparation
//!   outcome and applies the Born rule to |χ_a⟩ alone, and
//! * the complete account, which keeps the record of `a` in the state
//!   |ψ⟩ = Σ_a α_a |a⟩⊗|χ_a⟩ and evolves both parts together.
//!
//! The two agree exactly when the evolution factorizes as 1⊗V. When it
//! does not, the joint table and the conventional table part ways, and
//! [`engine::divergence_report`] quantifies the gap. An independent
//! density-matrix path ([`oracle::enumerate_joint`]) and a seeded sampler
//! ([`oracle::sample_joint`]) cross-check the calculation.
//!
//! Scenario files are strict JSON ([`io::parse_scenario`]) with a
//! canonical writer ([`io::write_scenario`]).

pub mod engine;
pub mod io;
pub mod model;
pub mod oracle;
pub mod random;
pub mod tensor;

#[cfg(test)]
mod test_support;

pub use engine::{
    bayes_consistent, coefficient_matrix, conditional, conventional_conditional,
    conventional_mixture, divergence_report, joint_distribution, reduced_density,
    CoefficientMatrix, ConditionalTable, Direction, DivergenceReport, EngineError, JointTable,
};
pub use io::{
    parse_scenario, parse_scenario_with, write_scenario, Metadata, ParseDiagnostic, ParseOutcome,
    ScenarioDocument, Severity,
};
pub use model::{
    assemble_complete_state, validate_scenario, BipartiteState, Evolution, MeasurementBasis,
    ModelError, Preparation, Scenario, StageLabels, ValidationReport, Violation,
};
pub use oracle::{enumerate_joint, sample_joint, tv_distance, OracleError, RngStream, SampleRun};
pub use tensor::{ComplexMatrix, Subsystem, TensorError, Tolerance};

pub use num_complex::Complex64;
