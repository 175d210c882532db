//! Structure tensor of a left-invariant structure on a Lie group: brackets,
//! Levi-Civita connection through the Koszul formula, then classification.
//!
//! ```bash
//! cargo run --example classify_lie_group -- 1.0 2.0
//! ```
//!
//! The arguments are `a₁ … a_{2n}`; their count fixes `n`.

use std::error::Error;

use acbm::models::{check_jacobi, koszul_connection, lie_family, structure_tensor_from_connection};
use acbm::{classify, ABS_FLOOR, REL_TOL};

fn main() -> Result<(), Box<dyn Error>> {
    let mut a: Vec<f64> = std::env::args()
        .skip(1)
        .map(|s| s.parse())
        .collect::<Result<_, _>>()?;
    if a.is_empty() {
        a = vec![1.0, 2.0];
    }
    if !a.len().is_multiple_of(2) {
        return Err("need an even number of parameters".into());
    }
    let n = a.len() / 2;

    let spec = lie_family(n, &a)?;
    println!("Jacobi identity: {}", check_jacobi(&spec, 1e-12)?);

    let conn = koszul_connection(&spec)?;
    let d = spec.dim();
    println!("nonzero covariant derivatives:");
    for i in 0..d {
        for j in 0..d {
            let v = conn.covariant(i, j);
            let terms: Vec<String> = v
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0.0)
                .map(|(k, c)| format!("{c:+}·E{k}"))
                .collect();
            if !terms.is_empty() {
                println!("  ∇_E{i} E{j} = {}", terms.join(" "));
            }
        }
    }
    println!(
        "torsion residual {:.1e}, metric residual {:.1e}",
        conn.torsion_residual(&spec),
        conn.metric_residual(&spec)
    );

    let f = structure_tensor_from_connection(&spec, &conn)?;
    println!("nonzero F_ijk:");
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                if f.get(i, j, k) != 0.0 {
                    println!("  F{i}{j}{k} = {:+}", f.get(i, j, k));
                }
            }
        }
    }

    let report = classify(&spec.structure, &f, REL_TOL, ABS_FLOOR)?;
    println!("{report}");
    Ok(())
}
