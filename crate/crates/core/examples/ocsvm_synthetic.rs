//! Trains one-class SVMs with a classical and a quantum kernel on the
//! two-blob synthetic set and scores the held-out batch.
//!
//! cargo run --example ocsvm_synthetic

use qkad::data::gen_synthetic;
use qkad::kernels::KernelSpec;
use qkad::metrics::evaluate;
use qkad::ocsvm::OcSvmDetector;
use qkad::qsim::FeatureMapConfig;

fn main() -> qkad::Result<()> {
    let split = gen_synthetic(500, 0)?;
    let labels = split.test.labels.as_ref().expect("test labels");
    let specs = [
        ("rbf", KernelSpec::Rbf { gamma: None }),
        (
            "fidelity (exact)",
            KernelSpec::FidelityExact {
                fmap: FeatureMapConfig::new(2, 1)?,
            },
        ),
        (
            "inversion test",
            KernelSpec::Inversion {
                fmap: FeatureMapConfig::new(2, 1)?,
                shots: 1000,
            },
        ),
    ];
    for (name, spec) in specs {
        let det = OcSvmDetector::fit(&spec, &split.train.features, 0.1, 0)?;
        let scores = det.decision_scores(&split.test.features)?;
        let r = evaluate(labels, &scores)?;
        println!(
            "{name:<17} SVs {:>3}  precision {:.3}  recall {:.3}  F1 {:.3}  AP {:.3}",
            det.model.support_indices.len(),
            r.precision,
            r.recall,
            r.f1,
            r.average_precision
        );
    }
    Ok(())
}
