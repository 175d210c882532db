//! In dimension 3 only seven classes survive. Reads the nine coefficients of
//! a random tensor and rebuilds every component from closed forms.
//!
//! ```bash
//! cargo run --example dim3_fast_path
//! ```

use std::error::Error;

use acbm::decomposition::NUM_CLASSES;
use acbm::models::{dim3_component, dim3_lee, Dim3Coefficients};
use acbm::{canonical_structure, component, lee_forms, random_f};

fn main() -> Result<(), Box<dyn Error>> {
    let s = canonical_structure(1)?;
    let f = random_f(&s, 2024);
    println!("{:#?}", Dim3Coefficients::from_tensor(&f)?);

    for i in 1..=NUM_CLASSES {
        let general = component(&s, &f, i)?;
        let fast = dim3_component(&f, i)?;
        println!(
            "F{i:<2} max|general| = {:.3e}  |general - closed form| = {:.1e}",
            general.max_abs(),
            general.max_abs_diff(&fast)
        );
    }

    let fast = dim3_lee(&f)?;
    let general = lee_forms(&s, &f)?;
    println!(
        "θ  = {:?}  (contraction {:?})",
        fast.theta.as_slice(),
        general.theta.as_slice()
    );
    println!(
        "θ* = {:?}  (contraction {:?})",
        fast.theta_star.as_slice(),
        general.theta_star.as_slice()
    );
    println!("ω  = {:?}", fast.omega.as_slice());
    Ok(())
}
