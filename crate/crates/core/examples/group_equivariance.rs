//! Acts on a tensor with a random structure-group element and compares
//! "decompose then act" with "act then decompose".
//!
//! ```bash
//! cargo run --example group_equivariance -- 3
//! ```

use std::error::Error;

use acbm::decomposition::NUM_CLASSES;
use acbm::{
    act, canonical_structure, component, inner_product, random_f, random_group_element,
    validate_group_element,
};

fn main() -> Result<(), Box<dyn Error>> {
    let seed: u64 = std::env::args()
        .nth(1)
        .map(|a| a.parse())
        .transpose()?
        .unwrap_or(1);
    let n = 2;
    let s = canonical_structure(n)?;
    let a = random_group_element(n, seed)?;
    let (block_a, block_b) = a.blocks();
    println!("A =\n{block_a}B =\n{block_b}");
    println!(
        "valid group element: {}",
        validate_group_element(&s, a.matrix(), 1e-9)?
    );

    let f = random_f(&s, seed);
    let moved = act(&s, &a, &f)?;
    println!("max|F - λ(a)F| = {:.4}", f.max_abs_diff(&moved));
    println!(
        "<F,F> = {:.12}, <λ(a)F,λ(a)F> = {:.12}",
        inner_product(&s, &f, &f)?,
        inner_product(&s, &moved, &moved)?
    );
    for i in 1..=NUM_CLASSES {
        let lhs = component(&s, &moved, i)?;
        let rhs = act(&s, &a, &component(&s, &f, i)?)?;
        println!(
            "  F{i:<2} |(λ(a)F)_i - λ(a)F_i| = {:.2e}",
            lhs.max_abs_diff(&rhs)
        );
    }
    Ok(())
}
