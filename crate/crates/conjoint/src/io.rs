//! Scenario files: strict parsing with full diagnostics, canonical
//! writing with lossless round-trip.
//!
//! The format is UTF-8 JSON with a fixed vocabulary. Complex numbers are
//! two-element `[re, im]` arrays of finite numbers; vectors are arrays of
//! complex entries; matrices are arrays of row arrays. `format_version`
//! must be present, first, and equal to 1. Parsing is strict: unknown
//! fields are errors, not warnings, because scenario files double as test
//! fixtures and silence is a bug. All diagnostics of a stage are
//! collected, not just the first.
//!
//! ```text
//! {
//!   "format_version": 1,
//!   "metadata": { "name": "...", "description": "..." },          optional
//!   "preparation": {
//!     "amplitudes": [[re, im], ...],
//!     "conditional_states": [[[re, im], ...], ...]
//!   },
//!   "evolution": { "kind": "local" | "joint", "operator": [...] },
//!   "declared_local_evolution": [...],                            optional
//!   "basis_a": [[[re, im], ...], ...],                            optional
//!   "basis_b": [[[re, im], ...], ...],                            optional
//!   "labels": { "stage_a": "...", "stage_b": "..." }              optional
//! }
//! ```
//!
//! Omitted bases default to the standard basis. The writer always emits
//! one canonical rendering: fixed field order, explicit bases, floats at
//! 17 significant digits (which round-trip doubles exactly), negative
//! zero normalized, trailing newline. Writing is idempotent across a
//! parse.

use crate::model::{
    validate_scenario, Evolution, MeasurementBasis, ModelError, Preparation, Scenario, StageLabels,
};
use crate::tensor::{ComplexMatrix, Tolerance};
use num_complex::Complex64;
use serde_json::Value;
use std::fmt::Write as _;

/// The file format version this module reads and writes.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Warning,
    Error,
}

impl std::fmt::Display for Severity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Severity::Warning => write!(f, "warning"),
            Severity::Error => write!(f, "error"),
        }
    }
}

/// One parser or validation finding, located by field path.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseDiagnostic {
    pub severity: Severity,
    pub path: String,
    pub message: String,
    pub residual: Option<f64>,
}

impl std::fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}: {}", self.severity, self.path, self.message)?;
        if let Some(r) = self.residual {
            write!(f, " (residual {r:.3e})")?;
        }
        Ok(())
    }
}

/// Free-form document header.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Metadata {
    pub name: Option<String>,
    pub description: Option<String>,
}

impl Metadata {
    pub fn is_empty(&self) -> bool {
        self.name.is_none() && self.description.is_none()
    }
}

/// A parsed, validated scenario file.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioDocument {
    format_version: u32,
    metadata: Metadata,
    scenario: Scenario,
}

impl ScenarioDocument {
    pub fn new(scenario: Scenario) -> Self {
        ScenarioDocument {
            format_version: FORMAT_VERSION,
            metadata: Metadata::default(),
            scenario,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.metadata.name = Some(name.into());
        self
    }

    pub fn with_description(mut self, description: impl Into<String>) -> Self {
        self.metadata.description = Some(description.into());
        self
    }

    pub fn format_version(&self) -> u32 {
        self.format_version
    }

    pub fn metadata(&self) -> &Metadata {
        &self.metadata
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }
}

/// Result of a parse: the document is withheld whenever any diagnostic
/// has `Error` severity, and present otherwise (warnings allowed).
#[derive(Debug, Clone, PartialEq)]
pub struct ParseOutcome {
    pub document: Option<ScenarioDocument>,
    pub diagnostics: Vec<ParseDiagnostic>,
}

impl ParseOutcome {
    pub fn has_errors(&self) -> bool {
        self.diagnostics
            .iter()
            .any(|d| d.severity == Severity::Error)
    }
}

/// Parses a scenario file at the structural tolerance (1e-10).
pub fn parse_scenario(bytes: &[u8]) -> ParseOutcome {
    parse_scenario_with(bytes, Tolerance::STRUCTURAL)
}

/// Parses a scenario file, checking numerical invariants at `tol`.
pub fn parse_scenario_with(bytes: &[u8], tol: Tolerance) -> ParseOutcome {
    let mut p = Parser::default();
    let document = p.run(bytes, tol);
    let document = if p.has_errors() { None } else { document };
    ParseOutcome {
        document,
        diagnostics: p.diagnostics,
    }
}

#[derive(Default)]
struct Parser {
    diagnostics: Vec<ParseDiagnostic>,
}

const ROOT_FIELDS: [&str; 8] = [
    "format_version",
    "metadata",
    "preparation",
    "evolution",
    "declared_local_evolution",
    "basis_a",
    "basis_b",
    "labels",
];

impl Parser {
    fn error(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.diagnostics.push(ParseDiagnostic {
            severity: Severity::Error,
            path: path.into(),
            message: message.into(),
            residual: None,
        });
    }

    fn error_with_residual(
        &mut self,
        path: impl Into<String>,
        message: impl Into<String>,
        residual: f64,
    ) {
        self.diagnostics.push(ParseDiagnostic {
            severity: Severity::Error,
            path: path.into(),
            message: message.into(),
            residual: Some(residual),
        });
    }

    fn warning(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.diagnostics.push(ParseDiagnostic {
            severity: Severity::Warning,
            path: path.into(),
            message: message.into(),
            residual: None,
        });
    }

    fn has_errors(&self) -> bool {
        self.diagnostics
            .iter()
            .any(|d| d.severity == Severity::Error)
    }

    fn run(&mut self, bytes: &[u8], tol: Tolerance) -> Option<ScenarioDocument> {
        let value: Value = match serde_json::from_slice(bytes) {
            Ok(v) => v,
            Err(e) => {
                self.error("document", format!("invalid syntax: {e}"));
                return None;
            }
        };
        let Some(root) = value.as_object() else {
            self.error("document", "top level must be an object");
            return None;
        };

        for key in root.keys() {
            if !ROOT_FIELDS.contains(&key.as_str()) {
                self.error(key, "unknown field");
            }
        }
        if !root.contains_key("format_version") {
            self.error("format_version", "required field is missing");
        } else {
            if root.keys().next().map(String::as_str) != Some("format_version") {
                self.error("format_version", "must be the first field");
            }
            let v = &root["format_version"];
            if v.as_u64() != Some(FORMAT_VERSION as u64) {
                self.error(
                    "format_version",
                    format!("unsupported value {v}; this parser reads version {FORMAT_VERSION}"),
                );
            }
        }

        let metadata = self.metadata(root.get("metadata"));
        let prep_fields = self.preparation_fields(root.get("preparation"));
        let evo_fields = self.evolution_fields(root.get("evolution"));
        let declared = root
            .get("declared_local_evolution")
            .and_then(|v| self.matrix(v, "declared_local_evolution"));
        let basis_a_vectors = root.get("basis_a").map(|v| self.vector_list(v, "basis_a"));
        let basis_b_vectors = root.get("basis_b").map(|v| self.vector_list(v, "basis_b"));
        let labels = self.labels(root.get("labels"));

        if self.has_errors() {
            return None;
        }

        // structurally assemble the model; shapes were vetted above, so
        // the remaining failures are cross-field inconsistencies
        let (amplitudes, states) = prep_fields?;
        let prep = match Preparation::new(amplitudes, states) {
            Ok(p) => p,
            Err(e) => {
                self.error(preparation_error_path(&e), e.to_string());
                return None;
            }
        };
        let (kind, operator) = evo_fields?;
        let evolution = match kind.as_str() {
            "local" => Evolution::Local(operator),
            _ => Evolution::Joint(operator),
        };
        let basis_a = match basis_a_vectors {
            Some(vectors) => self.build_basis(vectors?, "basis_a")?,
            None => MeasurementBasis::standard(prep.dim_a()),
        };
        let basis_b = match basis_b_vectors {
            Some(vectors) => self.build_basis(vectors?, "basis_b")?,
            None => MeasurementBasis::standard(prep.dim_b()),
        };
        let mut scenario = match Scenario::new(prep, evolution, basis_a, basis_b) {
            Ok(s) => s,
            Err(e) => {
                self.error(scenario_error_path(&e), e.to_string());
                return None;
            }
        };
        if let Some(op) = declared {
            if scenario.evolution().is_local() {
                self.warning(
                    "declared_local_evolution",
                    "redundant for a local evolution; comparisons use the evolution itself",
                );
            }
            scenario = match scenario.with_declared_local_evolution(op) {
                Ok(s) => s,
                Err(e) => {
                    self.error("declared_local_evolution", e.to_string());
                    return None;
                }
            };
        }
        if let Some(labels) = labels {
            scenario = scenario.with_labels(labels);
        }

        let report = validate_scenario(&scenario, tol);
        for v in report.violations() {
            self.error_with_residual(&v.path, &v.message, v.residual.unwrap_or(0.0));
        }

        Some(ScenarioDocument {
            format_version: FORMAT_VERSION,
            metadata,
            scenario,
        })
    }

    fn object<'v>(
        &mut self,
        value: &'v Value,
        path: &str,
        allowed: &[&str],
    ) -> Option<&'v serde_json::Map<String, Value>> {
        let Some(map) = value.as_object() else {
            self.error(path, "must be an object");
            return None;
        };
        for key in map.keys() {
            if !allowed.contains(&key.as_str()) {
                self.error(format!("{path}.{key}"), "unknown field");
            }
        }
        Some(map)
    }

    fn string(&mut self, value: &Value, path: &str) -> Option<String> {
        match value.as_str() {
            Some(s) => Some(s.to_string()),
            None => {
                self.error(path, "must be a string");
                None
            }
        }
    }

    fn complex(&mut self, value: &Value, path: &str) -> Option<Complex64> {
        let parts = value.as_array().filter(|a| a.len() == 2);
        let Some(parts) = parts else {
            self.error(path, "must be a two-element [re, im] array");
            return None;
        };
        let mut out = [0.0; 2];
        for (k, part) in parts.iter().enumerate() {
            match part.as_f64() {
                Some(x) if x.is_finite() => out[k] = x,
                _ => {
                    self.error(path, "components must be finite numbers");
                    return None;
                }
            }
        }
        Some(Complex64::new(out[0], out[1]))
    }

    fn complex_vector(&mut self, value: &Value, path: &str) -> Option<Vec<Complex64>> {
        let Some(items) = value.as_array() else {
            self.error(path, "must be an array of [re, im] entries");
            return None;
        };
        if items.is_empty() {
            self.error(path, "must not be empty");
            return None;
        }
        let mut out = Vec::with_capacity(items.len());
        let mut ok = true;
        for (i, item) in items.iter().enumerate() {
            match self.complex(item, &format!("{path}[{i}]")) {
                Some(z) => out.push(z),
                None => ok = false,
            }
        }
        ok.then_some(out)
    }

    fn column(&mut self, value: &Value, path: &str) -> Option<ComplexMatrix> {
        let entries = self.complex_vector(value, path)?;
        Some(ComplexMatrix::column(entries).expect("vetted non-empty finite entries"))
    }

    fn matrix(&mut self, value: &Value, path: &str) -> Option<ComplexMatrix> {
        let Some(rows) = value.as_array() else {
            self.error(path, "must be an array of row arrays");
            return None;
        };
        if rows.is_empty() {
            self.error(path, "must not be empty");
            return None;
        }
        let mut parsed: Vec<Vec<Complex64>> = Vec::with_capacity(rows.len());
        let mut ok = true;
        for (r, row) in rows.iter().enumerate() {
            match self.complex_vector(row, &format!("{path}[{r}]")) {
                Some(entries) => parsed.push(entries),
                None => ok = false,
            }
        }
        if !ok {
            return None;
        }
        let width = parsed[0].len();
        for (r, row) in parsed.iter().enumerate() {
            if row.len() != width {
                self.error(
                    format!("{path}[{r}]"),
                    format!("row has {} entries, expected {width}", row.len()),
                );
                ok = false;
            }
        }
        if !ok {
            return None;
        }
        let n_rows = parsed.len();
        let flat: Vec<Complex64> = parsed.into_iter().flatten().collect();
        Some(ComplexMatrix::new(n_rows, width, flat).expect("vetted rectangular finite entries"))
    }

    fn vector_list(&mut self, value: &Value, path: &str) -> Option<Vec<ComplexMatrix>> {
        let Some(items) = value.as_array() else {
            self.error(path, "must be an array of vectors");
            return None;
        };
        if items.is_empty() {
            self.error(path, "must not be empty");
            return None;
        }
        let mut out = Vec::with_capacity(items.len());
        let mut ok = true;
        for (i, item) in items.iter().enumerate() {
            match self.column(item, &format!("{path}[{i}]")) {
                Some(v) => out.push(v),
                None => ok = false,
            }
        }
        ok.then_some(out)
    }

    fn metadata(&mut self, value: Option<&Value>) -> Metadata {
        let mut metadata = Metadata::default();
        let Some(value) = value else {
            return metadata;
        };
        let Some(map) = self.object(value, "metadata", &["name", "description"]) else {
            return metadata;
        };
        metadata.name = map
            .get("name")
            .and_then(|v| self.string(v, "metadata.name"));
        metadata.description = map
            .get("description")
            .and_then(|v| self.string(v, "metadata.description"));
        metadata
    }

    #[allow(clippy::type_complexity)]
    fn preparation_fields(
        &mut self,
        value: Option<&Value>,
    ) -> Option<(Vec<Complex64>, Vec<ComplexMatrix>)> {
        let Some(value) = value else {
            self.error("preparation", "required field is missing");
            return None;
        };
        let map = self.object(value, "preparation", &["amplitudes", "conditional_states"])?;
        let amplitudes = match map.get("amplitudes") {
            Some(v) => self.complex_vector(v, "preparation.amplitudes"),
            None => {
                self.error("preparation.amplitudes", "required field is missing");
                None
            }
        };
        let states = match map.get("conditional_states") {
            Some(v) => self.vector_list(v, "preparation.conditional_states"),
            None => {
                self.error(
                    "preparation.conditional_states",
                    "required field is missing",
                );
                None
            }
        };
        Some((amplitudes?, states?))
    }

    fn evolution_fields(&mut self, value: Option<&Value>) -> Option<(String, ComplexMatrix)> {
        let Some(value) = value else {
            self.error("evolution", "required field is missing");
            return None;
        };
        let map = self.object(value, "evolution", &["kind", "operator"])?;
        let kind = match map.get("kind") {
            Some(v) => match self.string(v, "evolution.kind") {
                Some(k) if k == "local" || k == "joint" => Some(k),
                Some(k) => {
                    self.error(
                        "evolution.kind",
                        format!("must be \"local\" or \"joint\", got \"{k}\""),
                    );
                    None
                }
                None => None,
            },
            None => {
                self.error("evolution.kind", "required field is missing");
                None
            }
        };
        let operator = match map.get("operator") {
            Some(v) => self.matrix(v, "evolution.operator"),
            None => {
                self.error("evolution.operator", "required field is missing");
                None
            }
        };
        Some((kind?, operator?))
    }

    fn labels(&mut self, value: Option<&Value>) -> Option<StageLabels> {
        let value = value?;
        let map = self.object(value, "labels", &["stage_a", "stage_b"])?;
        let stage_a = map
            .get("stage_a")
            .and_then(|v| self.string(v, "labels.stage_a"));
        let stage_b = map
            .get("stage_b")
            .and_then(|v| self.string(v, "labels.stage_b"));
        Some(StageLabels { stage_a, stage_b })
    }

    fn build_basis(&mut self, vectors: Vec<ComplexMatrix>, path: &str) -> Option<MeasurementBasis> {
        match MeasurementBasis::new(vectors) {
            Ok(b) => Some(b),
            Err(ModelError::BasisVectorShape { index, .. }) => {
                self.error(
                    format!("{path}[{index}]"),
                    "vector dimension must equal the number of basis vectors",
                );
                None
            }
            Err(e) => {
                self.error(path, e.to_string());
                None
            }
        }
    }
}

fn preparation_error_path(e: &ModelError) -> String {
    match e {
        ModelError::NonFiniteAmplitude { index } => {
            format!("preparation.amplitudes[{index}]")
        }
        ModelError::StateShape { index, .. } | ModelError::StateDimMismatch { index, .. } => {
            format!("preparation.conditional_states[{index}]")
        }
        _ => "preparation".to_string(),
    }
}

fn scenario_error_path(e: &ModelError) -> String {
    match e {
        ModelError::DimensionMismatch { name, .. } | ModelError::OperatorShape { name, .. } => {
            (*name).to_string()
        }
        _ => "document".to_string(),
    }
}

/// 17 significant digits: enough to reproduce any double exactly.
fn fmt_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

fn fmt_complex(z: Complex64) -> String {
    format!("[{}, {}]", fmt_float(z.re), fmt_float(z.im))
}

fn fmt_entries_inline(entries: &[Complex64]) -> String {
    let parts: Vec<String> = entries.iter().map(|&z| fmt_complex(z)).collect();
    format!("[{}]", parts.join(", "))
}

fn fmt_matrix_block(m: &ComplexMatrix, indent: usize) -> String {
    let pad = " ".repeat(indent);
    let inner = " ".repeat(indent + 2);
    let rows: Vec<String> = (0..m.rows())
        .map(|r| {
            let entries: Vec<Complex64> = (0..m.cols()).map(|c| m.get(r, c)).collect();
            format!("{inner}{}", fmt_entries_inline(&entries))
        })
        .collect();
    format!("[\n{}\n{pad}]", rows.join(",\n"))
}

fn fmt_vector_list_block(vectors: &[ComplexMatrix], indent: usize) -> String {
    let pad = " ".repeat(indent);
    let inner = " ".repeat(indent + 2);
    let rows: Vec<String> = vectors
        .iter()
        .map(|v| format!("{inner}{}", fmt_entries_inline(v.entries())))
        .collect();
    format!("[\n{}\n{pad}]", rows.join(",\n"))
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

/// Renders a document in the canonical form: fixed field order, explicit
/// bases, 17-significant-digit floats, trailing newline. The output
/// parses back to an equal document, and writing is idempotent.
pub fn write_scenario(doc: &ScenarioDocument) -> String {
    let mut fields: Vec<String> = Vec::new();
    fields.push(format!("  \"format_version\": {}", doc.format_version));

    let meta = &doc.metadata;
    if !meta.is_empty() {
        let mut lines = Vec::new();
        if let Some(name) = &meta.name {
            lines.push(format!("    \"name\": {}", json_string(name)));
        }
        if let Some(description) = &meta.description {
            lines.push(format!("    \"description\": {}", json_string(description)));
        }
        fields.push(format!("  \"metadata\": {{\n{}\n  }}", lines.join(",\n")));
    }

    let scenario = &doc.scenario;
    let prep = scenario.preparation();
    let mut block = String::new();
    let _ = write!(
        block,
        "  \"preparation\": {{\n    \"amplitudes\": {},\n    \"conditional_states\": {}\n  }}",
        fmt_entries_inline(prep.amplitudes()),
        fmt_vector_list_block(prep.conditional_states(), 4),
    );
    fields.push(block);

    fields.push(format!(
        "  \"evolution\": {{\n    \"kind\": \"{}\",\n    \"operator\": {}\n  }}",
        scenario.evolution().kind_name(),
        fmt_matrix_block(scenario.evolution().operator(), 4),
    ));

    if let Some(op) = scenario.declared_local_evolution() {
        fields.push(format!(
            "  \"declared_local_evolution\": {}",
            fmt_matrix_block(op, 2)
        ));
    }

    fields.push(format!(
        "  \"basis_a\": {}",
        fmt_vector_list_block(scenario.basis_a().vectors(), 2)
    ));
    fields.push(format!(
        "  \"basis_b\": {}",
        fmt_vector_list_block(scenario.basis_b().vectors(), 2)
    ));

    let labels = scenario.labels();
    if !labels.is_empty() {
        let mut lines = Vec::new();
        if let Some(a) = &labels.stage_a {
            lines.push(format!("    \"stage_a\": {}", json_string(a)));
        }
        if let Some(b) = &labels.stage_b {
            lines.push(format!("    \"stage_b\": {}", json_string(b)));
        }
        fields.push(format!("  \"labels\": {{\n{}\n  }}", lines.join(",\n")));
    }

    format!("{{\n{}\n}}\n", fields.join(",\n"))
}
