//! Embeds a 2-feature point with the IQP-style feature map and samples it.
//!
//! cargo run --example feature_map

use qkad::qsim::{apply_feature_map, bitstring, fidelity, sample_bitstrings, FeatureMapConfig};
use qkad::rng::seeded;

fn main() -> qkad::Result<()> {
    let x = [0.1, 0.2];
    for (name, fmap) in [
        ("2λ blocks", FeatureMapConfig::new(2, 3)?),
        ("λ-scaled angles", FeatureMapConfig::scaled(2, 3)?),
    ] {
        let state = apply_feature_map(&fmap, &x)?;
        println!("{name}: {} gates", fmap.circuit(&x)?.len());
        for (i, a) in state.amplitudes().iter().enumerate() {
            println!("  |{}>  {:+.5} {:+.5}i", bitstring(i, 2), a.re, a.im);
        }
        let counts = sample_bitstrings(&state, 1000, &mut seeded(0))?;
        let shown: Vec<String> = counts.iter().map(|(k, v)| format!("{}:{v}", bitstring(*k, 2))).collect();
        println!("  1000 shots -> {}", shown.join(" "));
    }

    let fmap = FeatureMapConfig::new(2, 3)?;
    let a = apply_feature_map(&fmap, &[0.1, 0.2])?;
    let b = apply_feature_map(&fmap, &[0.15, 0.1])?;
    println!("fidelity between (0.1, 0.2) and (0.15, 0.1): {:.6}", fidelity(&a, &b)?);
    Ok(())
}
