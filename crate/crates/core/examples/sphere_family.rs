//! Sweeps the time-like sphere over `t` and prints the Lee-form values at ξ and
//! the resulting class.
//!
//! ```bash
//! cargo run --example sphere_family
//! ```

use std::error::Error;
use std::f64::consts::FRAC_PI_2;

use acbm::models::sphere_f;
use acbm::{classify, lee_forms, ABS_FLOOR, REL_TOL};

fn main() -> Result<(), Box<dyn Error>> {
    let n = 2;
    println!(
        "{:>8} {:>10} {:>10} {:>10} {:>10}  class",
        "t", "θ(ξ)", "2n cos t", "θ*(ξ)", "2n sin t"
    );
    for k in 0..=8 {
        let t = -FRAC_PI_2 + k as f64 * FRAC_PI_2 / 4.0;
        let (s, f) = sphere_f(n, t)?;
        let lee = lee_forms(&s, &f)?;
        let report = classify(&s, &f, REL_TOL, ABS_FLOOR)?;
        let two_n = 2.0 * n as f64;
        println!(
            "{t:>8.4} {:>10.6} {:>10.6} {:>10.6} {:>10.6}  {}",
            lee.theta_xi(&s),
            two_n * t.cos(),
            lee.theta_star_xi(&s),
            two_n * t.sin(),
            report.class_label()
        );
    }
    Ok(())
}
