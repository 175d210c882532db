//! Decomposes a random element of 𝓕 into its eleven components and checks the
//! reconstruction and the pairwise orthogonality.
//!
//! ```bash
//! cargo run --example decompose_random -- 7 42
//! ```
//!
//! Arguments: dimension (odd, default 5) and seed (default 0).

use std::error::Error;

use acbm::decomposition::NUM_CLASSES;
use acbm::structure::random_structure;
use acbm::{decompose, inner_product, random_f};

fn main() -> Result<(), Box<dyn Error>> {
    let mut args = std::env::args().skip(1);
    let dim: usize = args.next().map(|a| a.parse()).transpose()?.unwrap_or(5);
    let seed: u64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(0);
    if dim < 3 || dim.is_multiple_of(2) {
        return Err(format!("dimension must be odd and at least 3, got {dim}").into());
    }

    let s = random_structure((dim - 1) / 2, seed)?;
    let f = random_f(&s, seed);
    let d = decompose(&s, &f)?;

    println!("dim {dim}, seed {seed}, max|F| = {:.4}", f.max_abs());
    for i in 1..=NUM_CLASSES {
        let fi = d.get(i);
        println!(
            "  F{i:<2} max|Fi| = {:.4e}   <Fi,Fi> = {:+.4e}",
            fi.max_abs(),
            inner_product(&s, fi, fi)?
        );
    }
    println!("reconstruction residual {:.2e}", d.reconstruction_residual);

    let mut worst: f64 = 0.0;
    for i in 1..=NUM_CLASSES {
        for j in (i + 1)..=NUM_CLASSES {
            worst = worst.max(inner_product(&s, d.get(i), d.get(j))?.abs());
        }
    }
    println!("max |<Fi,Fj>|, i != j: {worst:.2e}");
    Ok(())
}
