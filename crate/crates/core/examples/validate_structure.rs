//! Checks the structure axioms for the canonical φ-basis, for a structure
//! written in a random basis, and for a deliberately broken one.
//!
//! ```bash
//! cargo run --example validate_structure
//! ```

use std::error::Error;

use acbm::structure::{associated_metric, random_structure, signature};
use acbm::{canonical_structure, validate_structure, StructureData};

fn show(label: &str, s: &StructureData) {
    let report = validate_structure(s, 1e-9);
    println!("{label}: valid = {}", report.valid);
    for r in &report.residuals {
        println!("    {:<42} {:.2e}", r.axiom.to_string(), r.residual);
    }
}

fn main() -> Result<(), Box<dyn Error>> {
    let canon = canonical_structure(2)?;
    show("canonical n=2", &canon);
    println!("    signature of g = {:?}", signature(canon.g()));
    println!(
        "    signature of the associated metric = {:?}",
        signature(&associated_metric(&canon))
    );

    show("random basis n=2, seed 5", &random_structure(2, 5)?);

    // Euclidean metric: φ is no longer an anti-isometry on the contact distribution
    let broken = canon.with_metric(canon.identity())?;
    show("canonical phi with Euclidean g", &broken);
    Ok(())
}
