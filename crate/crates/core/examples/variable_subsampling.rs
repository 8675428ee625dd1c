//! Variable-subsampling ensemble: plan, train, score with mean and max
//! combination, and compare kernel work with a single full model.
//!
//! cargo run --example variable_subsampling

use qkad::data::gen_synthetic;
use qkad::ensemble::{fit, plan, Combine};
use qkad::kernels::KernelSpec;
use qkad::metrics::evaluate;
use qkad::ocsvm::OcSvmDetector;
use qkad::qsim::FeatureMapConfig;

fn main() -> qkad::Result<()> {
    let n = 1000;
    let split = gen_synthetic(n, 3)?;
    let labels = split.test.labels.as_ref().expect("test labels");
    let spec = KernelSpec::Inversion {
        fmap: FeatureMapConfig::new(2, 1)?,
        shots: 1000,
    };

    let p = plan(n, 50, 100, 3)?;
    println!("{} components, sizes {:?}", p.c, p.sizes);

    for combine in [Combine::Average, Combine::Maximum] {
        let e = fit(&p, &split.train.features, &spec, 0.1, combine, 3)?;
        let s = e.score(&split.test.features)?;
        let r = evaluate(labels, &s.combined)?;
        println!(
            "{combine:?}: AP {:.3}, F1 {:.3}; kernel entries train {} / test {}",
            r.average_precision, r.f1, e.train_cost.entries, s.cost.entries
        );
    }

    let full = OcSvmDetector::fit(&spec, &split.train.features, 0.1, 3)?;
    let (k, scores) = full.score(&split.test.features)?;
    let r = evaluate(labels, &scores)?;
    println!(
        "single model: AP {:.3}, F1 {:.3}; kernel entries train {} / test {}",
        r.average_precision,
        r.f1,
        full.kernel.gram().entries(),
        k.entries()
    );
    Ok(())
}
