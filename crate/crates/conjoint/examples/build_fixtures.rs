//! Regenerates the golden fixtures under `fixtures/` in canonical form.
//!
//! ```text
//! cargo run -p conjoint --example build_fixtures
//! ```

use conjoint::random::{random_local_scenario, seeded_rng};
use conjoint::{
    write_scenario, Complex64, ComplexMatrix, Evolution, Preparation, Scenario, ScenarioDocument,
    StageLabels,
};
use std::path::{Path, PathBuf};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ket(entries: &[f64]) -> ComplexMatrix {
    ComplexMatrix::column(entries.iter().map(|&x| c(x, 0.0)).collect()).unwrap()
}

fn real_matrix(dim: usize, rows: &[&[f64]]) -> ComplexMatrix {
    let data = rows
        .iter()
        .flat_map(|r| r.iter().map(|&x| c(x, 0.0)))
        .collect();
    ComplexMatrix::new(dim, dim, data).unwrap()
}

fn bell_preparation() -> Preparation {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Preparation::new(
        vec![c(s, 0.0), c(s, 0.0)],
        vec![ket(&[1.0, 0.0]), ket(&[0.0, 1.0])],
    )
    .unwrap()
}

fn bell() -> ScenarioDocument {
    let scenario = Scenario::with_standard_bases(
        bell_preparation(),
        Evolution::Local(ComplexMatrix::identity(2)),
    )
    .unwrap();
    ScenarioDocument::new(scenario)
        .with_name("bell")
        .with_description("Maximally entangled preparation, no further evolution")
}

fn single_outcome() -> ScenarioDocument {
    let prep = Preparation::new(vec![c(1.0, 0.0)], vec![ket(&[1.0, 0.0])]).unwrap();
    let scenario =
        Scenario::with_standard_bases(prep, Evolution::Local(ComplexMatrix::identity(2))).unwrap();
    ScenarioDocument::new(scenario)
        .with_name("single-outcome")
        .with_description("One preparation outcome; every draw lands in the same cell")
}

fn non_orthogonal() -> ScenarioDocument {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let prep = Preparation::new(
        vec![c(s, 0.0), c(s, 0.0)],
        vec![ket(&[1.0, 0.0]), ket(&[s, s])],
    )
    .unwrap();
    let scenario =
        Scenario::with_standard_bases(prep, Evolution::Local(ComplexMatrix::identity(2))).unwrap();
    ScenarioDocument::new(scenario)
        .with_name("non-orthogonal")
        .with_description("Overlapping conditional states; p(a=0|b=0) = 2/3")
}

fn cnot_interaction() -> ScenarioDocument {
    let flip = real_matrix(
        4,
        &[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ],
    );
    let scenario = Scenario::with_standard_bases(bell_preparation(), Evolution::Joint(flip))
        .unwrap()
        .with_declared_local_evolution(ComplexMatrix::identity(2))
        .unwrap()
        .with_labels(StageLabels {
            stage_a: Some("preparation record".into()),
            stage_b: Some("final readout".into()),
        });
    ScenarioDocument::new(scenario)
        .with_name("cnot-interaction")
        .with_description("Residual controlled flip entangles the record with the system")
}

fn embedded_local_joint() -> ScenarioDocument {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let hadamard = real_matrix(2, &[&[s, s], &[s, -s]]);
    let embedded = conjoint::tensor::tensor_product(&ComplexMatrix::identity(2), &hadamard);
    let scenario = Scenario::with_standard_bases(bell_preparation(), Evolution::Joint(embedded))
        .unwrap()
        .with_declared_local_evolution(hadamard)
        .unwrap();
    ScenarioDocument::new(scenario)
        .with_name("embedded-local-joint")
        .with_description("Joint operator that secretly factorizes as identity times Hadamard")
}

fn random_seeded() -> ScenarioDocument {
    let mut rng = seeded_rng(7);
    let scenario = random_local_scenario(3, 3, &mut rng);
    ScenarioDocument::new(scenario)
        .with_name("random-seeded")
        .with_description("Random 3x3 local scenario drawn from seed 7")
}

fn main() {
    let out_dir: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    std::fs::create_dir_all(&out_dir).unwrap();
    let fixtures = [
        ("bell", bell()),
        ("single-outcome", single_outcome()),
        ("non-orthogonal", non_orthogonal()),
        ("cnot-interaction", cnot_interaction()),
        ("embedded-local-joint", embedded_local_joint()),
        ("random-seeded", random_seeded()),
    ];
    for (name, doc) in fixtures {
        let path = out_dir.join(format!("{name}.scenario"));
        std::fs::write(&path, write_scenario(&doc)).unwrap();
        println!("wrote {}", path.display());
    }
}
