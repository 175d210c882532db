//! Closed forms in dimension 3 on the canonical basis `(ξ, e₁, φe₁)`.
//!
//! Here `𝓕` is 9-dimensional and only seven classes survive: components 2, 3,
//! 6 and 7 vanish identically.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fspace::LeeForms;
use crate::tensor::Tensor3;

/// The nine scalars that determine a tensor of `𝓕` in dimension 3.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Dim3Coefficients {
    pub theta0: f64,
    pub theta_star0: f64,
    pub lambda: f64,
    pub mu: f64,
    pub nu: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub theta1: f64,
    pub theta2: f64,
}

fn check3(f: &Tensor3) -> Result<()> {
    Error::check_dim(3, f.dim())
}

impl Dim3Coefficients {
    /// Reads the coefficients from representative components. Pairs that must
    /// agree on `𝓕` are averaged; [`dim3_consistency_residual`] reports how far
    /// they are apart.
    pub fn from_tensor(f: &Tensor3) -> Result<Self> {
        check3(f)?;
        let c = |i, j, k| f.get(i, j, k);
        Ok(Self {
            theta0: c(1, 1, 0) - c(2, 2, 0),
            theta_star0: c(1, 2, 0) + c(2, 1, 0),
            lambda: 0.5 * (c(1, 0, 1) + c(2, 0, 2)),
            mu: 0.5 * (c(1, 0, 2) - c(2, 0, 1)),
            nu: 0.5 * (c(0, 1, 1) + c(0, 2, 2)),
            omega1: c(0, 0, 1),
            omega2: c(0, 0, 2),
            theta1: c(1, 1, 1),
            theta2: -c(2, 1, 1),
        })
    }

    /// Sum of all seven surviving components.
    pub fn to_tensor(&self) -> Tensor3 {
        [1, 4, 5, 8, 9, 10, 11]
            .iter()
            .map(|&i| self.component(i))
            .fold(Tensor3::zeros(3), |acc, t| acc + t)
    }

    /// The component in class `i` built from the closed forms.
    pub fn component(&self, i: usize) -> Tensor3 {
        // sym(p, q)(y, z) = y^p z^q + y^q z^p
        let sym = |p: usize, q: usize, b: usize, c: usize| -> f64 {
            ((b == p && c == q) as u8 + (b == q && c == p) as u8) as f64
        };
        let horiz = |b: usize, c: usize| ((b == c && b != 0) as u8) as f64;
        match i {
            1 => Tensor3::from_fn(3, |a, b, c| {
                let x = [0.0, self.theta1, -self.theta2][a];
                x * horiz(b, c)
            }),
            4 => Tensor3::from_fn(3, |a, b, c| {
                let x = [0.0, sym(0, 1, b, c), -sym(0, 2, b, c)][a];
                0.5 * self.theta0 * x
            }),
            5 => Tensor3::from_fn(3, |a, b, c| {
                let x = [0.0, sym(0, 2, b, c), sym(0, 1, b, c)][a];
                0.5 * self.theta_star0 * x
            }),
            8 => Tensor3::from_fn(3, |a, b, c| {
                let x = [0.0, sym(0, 1, b, c), sym(0, 2, b, c)][a];
                self.lambda * x
            }),
            9 => Tensor3::from_fn(3, |a, b, c| {
                let x = [0.0, sym(0, 2, b, c), -sym(0, 1, b, c)][a];
                self.mu * x
            }),
            10 => Tensor3::from_fn(
                3,
                |a, b, c| if a == 0 { self.nu * horiz(b, c) } else { 0.0 },
            ),
            11 => Tensor3::from_fn(3, |a, b, c| {
                if a == 0 {
                    self.omega1 * sym(0, 1, b, c) + self.omega2 * sym(0, 2, b, c)
                } else {
                    0.0
                }
            }),
            _ => Tensor3::zeros(3),
        }
    }
}

/// Lee-form components by the dimension-3 index formulas
///
/// ```text
/// θ  = (F₁₁₀ − F₂₂₀, F₁₁₁ − F₂₂₁, F₁₁₂ − F₂₁₁)
/// θ* = (F₁₂₀ + F₂₁₀, F₁₁₂ + F₂₁₁, F₁₁₁ + F₂₂₁)
/// ω  = (0, F₀₀₁, F₀₀₂)
/// ```
///
/// On `𝓕` these agree with [`lee_forms`](crate::fspace::lee_forms).
pub fn dim3_lee(f: &Tensor3) -> Result<LeeForms> {
    check3(f)?;
    let c = |i, j, k| f.get(i, j, k);
    Ok(LeeForms {
        theta: DVector::from_vec(vec![
            c(1, 1, 0) - c(2, 2, 0),
            c(1, 1, 1) - c(2, 2, 1),
            c(1, 1, 2) - c(2, 1, 1),
        ]),
        theta_star: DVector::from_vec(vec![
            c(1, 2, 0) + c(2, 1, 0),
            c(1, 1, 2) + c(2, 1, 1),
            c(1, 1, 1) + c(2, 2, 1),
        ]),
        omega: DVector::from_vec(vec![0.0, c(0, 0, 1), c(0, 0, 2)]),
    })
}

/// Component `i ∈ 1..=11` of `f` through the closed forms; zero for
/// `i ∈ {2, 3, 6, 7}`.
pub fn dim3_component(f: &Tensor3, i: usize) -> Result<Tensor3> {
    if !(1..=11).contains(&i) {
        return Err(Error::InvalidArgument(format!(
            "class index {i} not in 1..=11"
        )));
    }
    Ok(Dim3Coefficients::from_tensor(f)?.component(i))
}

/// Worst violation of the equalities a tensor of `𝓕` satisfies in dimension 3
/// (`F₁₀₁ = F₁₁₀`, `F₀₁₁ = F₀₂₂`, …), including the components that must
/// vanish.
pub fn dim3_consistency_residual(f: &Tensor3) -> Result<f64> {
    let coeffs = Dim3Coefficients::from_tensor(f)?;
    let c = |i, j, k| f.get(i, j, k);
    let pairs = [
        c(1, 0, 1) - c(1, 1, 0),
        c(2, 0, 2) - c(2, 2, 0),
        c(1, 0, 2) - c(1, 2, 0),
        c(2, 0, 1) - c(2, 1, 0),
        c(0, 1, 1) - c(0, 2, 2),
        c(0, 0, 1) - c(0, 1, 0),
        c(0, 0, 2) - c(0, 2, 0),
        c(1, 1, 1) - c(1, 2, 2),
        c(2, 1, 1) - c(2, 2, 2),
        c(2, 2, 1),
        c(1, 1, 2),
    ];
    let named = pairs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(named.max(f.max_abs_diff(&coeffs.to_tensor())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::component;
    use crate::fspace::{lee_forms, random_f};
    use crate::models::sphere_f;
    use crate::structure::canonical_structure;

    #[test]
    fn f8_form_has_no_lee_forms() {
        let mut f = Tensor3::zeros(3);
        for idx in [(1, 0, 1), (1, 1, 0), (2, 0, 2), (2, 2, 0)] {
            f[idx] = 1.0;
        }
        let lee = dim3_lee(&f).unwrap();
        assert_eq!(lee.theta.amax(), 0.0);
        assert_eq!(lee.theta_star.amax(), 0.0);
        assert_eq!(lee.omega.amax(), 0.0);
        let k = Dim3Coefficients::from_tensor(&f).unwrap();
        assert_eq!(k.lambda, 1.0);
        assert_eq!(dim3_consistency_residual(&f).unwrap(), 0.0);
    }

    #[test]
    fn f11_form_omega() {
        let mut f = Tensor3::zeros(3);
        f[(0, 1, 0)] = 1.0;
        f[(0, 0, 1)] = 1.0;
        assert_eq!(dim3_lee(&f).unwrap().omega.as_slice(), &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn lee_matches_contraction() {
        let s = canonical_structure(1).unwrap();
        for seed in 0..100 {
            let f = random_f(&s, seed);
            let fast = dim3_lee(&f).unwrap();
            let general = lee_forms(&s, &f).unwrap();
            assert!((&fast.theta - &general.theta).amax() <= 1e-12);
            assert!((&fast.theta_star - &general.theta_star).amax() <= 1e-12);
            assert!((&fast.omega - &general.omega).amax() <= 1e-12);
        }
    }

    #[test]
    fn fast_path_matches_general_components() {
        let s = canonical_structure(1).unwrap();
        for seed in 0..100 {
            let f = random_f(&s, seed);
            assert!(dim3_consistency_residual(&f).unwrap() <= 1e-12);
            for i in 1..=11 {
                let general = component(&s, &f, i).unwrap();
                let fast = dim3_component(&f, i).unwrap();
                assert!(
                    general.max_abs_diff(&fast) <= 1e-12,
                    "seed {seed}, class {i}"
                );
                if [2, 3, 6, 7].contains(&i) {
                    assert!(general.max_abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn sphere_splits_into_four_and_five() {
        let (_, f) = sphere_f(1, std::f64::consts::FRAC_PI_4).unwrap();
        let sum = dim3_component(&f, 4).unwrap() + dim3_component(&f, 5).unwrap();
        assert!(sum.max_abs_diff(&f) <= 1e-12);
    }

    #[test]
    fn rejects_wrong_dimension() {
        assert!(dim3_lee(&Tensor3::zeros(5)).is_err());
        assert!(dim3_component(&Tensor3::zeros(3), 12).is_err());
    }
}
