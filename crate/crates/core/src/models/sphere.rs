//! The unit time-like sphere, evaluated at a point from its closed-form
//! structure tensor.

use crate::error::{Error, Result};
use crate::fspace::sym_extension;
use crate::structure::{canonical_structure, StructureData};
use crate::tensor::Tensor3;

/// Canonical structure of dimension `2n+1` together with
///
/// ```text
/// F(x,y,z) = −cos t {g(φx,φy)η(z) + g(φx,φz)η(y)}
///            − sin t {g(x,φy)η(z) + g(x,φz)η(y)}.
/// ```
///
/// Any real `t` is accepted; the physically meaningful range is `(−π/2, π/2)`.
pub fn sphere_f(n: usize, t: f64) -> Result<(StructureData, Tensor3)> {
    if !t.is_finite() {
        return Err(Error::InvalidArgument("t must be finite".into()));
    }
    let s = canonical_structure(n)?;
    let g_phi_phi = s.phi().transpose() * s.g() * s.phi();
    let g_x_phi = s.g() * s.phi();
    let f = -t.cos() * &sym_extension(&g_phi_phi, s.eta())
        - t.sin() * &sym_extension(&g_x_phi, s.eta());
    Ok((s, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::classify;
    use crate::fspace::{is_in_f, lee_forms};
    use crate::{ABS_FLOOR, REL_TOL};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn lee_values_follow_t() {
        for n in 1..=3 {
            for k in 0..20 {
                let t = -FRAC_PI_2 + (k as f64 + 0.5) * std::f64::consts::PI / 20.0;
                let (s, f) = sphere_f(n, t).unwrap();
                assert!(is_in_f(&s, &f, 1e-12).unwrap());
                let lee = lee_forms(&s, &f).unwrap();
                let two_n = 2.0 * n as f64;
                assert!((lee.theta_xi(&s) - two_n * t.cos()).abs() <= 1e-12);
                assert!((lee.theta_star_xi(&s) - two_n * t.sin()).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn classes_at_special_values() {
        let (s, f) = sphere_f(1, 0.0).unwrap();
        assert_eq!(
            classify(&s, &f, REL_TOL, ABS_FLOOR).unwrap().present,
            vec![4]
        );
        let lee = lee_forms(&s, &f).unwrap();
        assert_eq!(lee.theta_xi(&s), 2.0);
        assert_eq!(lee.theta_star_xi(&s), 0.0);

        let (s, f) = sphere_f(1, FRAC_PI_2).unwrap();
        assert_eq!(
            classify(&s, &f, REL_TOL, ABS_FLOOR).unwrap().present,
            vec![5]
        );
        assert!((lee_forms(&s, &f).unwrap().theta_star_xi(&s) - 2.0).abs() <= 1e-12);

        let (s, f) = sphere_f(2, 0.7).unwrap();
        let report = classify(&s, &f, REL_TOL, ABS_FLOOR).unwrap();
        assert_eq!(report.present, vec![4, 5]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(sphere_f(0, 0.0).is_err());
        assert!(sphere_f(1, f64::NAN).is_err());
    }
}
