//! The space `𝓕` of structure tensors, its inner product and the Lee forms.
//!
//! A `(0,3)`-tensor `F` lies in `𝓕` when
//!
//! ```text
//! F(x,y,z) = F(x,z,y) = F(x,φy,φz) + η(y)F(x,ξ,z) + η(z)F(x,y,ξ).
//! ```
//!
//! All identities are multilinear, so checking them on basis triples is exhaustive.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structure::StructureData;
use crate::tensor::Tensor3;

/// `T(x,y,z) = m(x,y)w(z) + m(x,z)w(y)`, the shape shared by most terms of the
/// decomposition formulas (usually with `w = η`).
pub(crate) fn sym_extension(m: &DMatrix<f64>, w: &DVector<f64>) -> Tensor3 {
    Tensor3::from_fn(w.len(), |a, b, c| m[(a, b)] * w[c] + m[(a, c)] * w[b])
}

/// Worst residuals of the two defining identities of `𝓕`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FSpaceResidual {
    /// `max |F(x,y,z) − F(x,z,y)|`
    pub symmetry: f64,
    /// `max |F(x,y,z) − F(x,φy,φz) − η(y)F(x,ξ,z) − η(z)F(x,y,ξ)|`
    pub phi_compatibility: f64,
}

impl FSpaceResidual {
    pub fn max(&self) -> f64 {
        self.symmetry.max(self.phi_compatibility)
    }

    /// Human-readable name of the first identity violated beyond `tol`.
    pub fn violated(&self, tol: f64) -> Option<String> {
        if !(self.symmetry <= tol) {
            Some(format!(
                "F(x,y,z) = F(x,z,y) violated (residual {:e})",
                self.symmetry
            ))
        } else if !(self.phi_compatibility <= tol) {
            Some(format!(
                "F(x,y,z) = F(x,phi y,phi z) + eta(y)F(x,xi,z) + eta(z)F(x,y,xi) violated (residual {:e})",
                self.phi_compatibility
            ))
        } else {
            None
        }
    }
}

pub fn f_space_residual(s: &StructureData, t: &Tensor3) -> Result<FSpaceResidual> {
    Error::check_dim(s.dim(), t.dim())?;
    let symmetry = t.max_abs_diff(&t.permuted([0, 2, 1]));
    let id = s.identity();
    let f_x_xi_z = t.contract_slot(1, s.xi());
    let f_x_y_xi = t.contract_slot(2, s.xi());
    let eta = s.eta();
    let phi_part = t.pullback(&id, s.phi(), s.phi());
    let rhs = Tensor3::from_fn(s.dim(), |a, b, c| {
        phi_part.get(a, b, c) + eta[b] * f_x_xi_z[(a, c)] + eta[c] * f_x_y_xi[(a, b)]
    });
    Ok(FSpaceResidual {
        symmetry,
        phi_compatibility: t.max_abs_diff(&rhs),
    })
}

/// Membership in `𝓕` with every identity checked on basis triples within `tol`.
pub fn is_in_f(s: &StructureData, t: &Tensor3, tol: f64) -> Result<bool> {
    Ok(f_space_residual(s, t)?.max() <= tol)
}

/// Fails with a precondition error naming the violated identity when `t ∉ 𝓕`.
///
/// The tolerance is relative to the magnitude of `t`.
pub fn require_in_f(s: &StructureData, t: &Tensor3, rel_tol: f64) -> Result<()> {
    let tol = crate::scaled_tol(rel_tol, t.max_abs());
    match f_space_residual(s, t)?.violated(tol) {
        None => Ok(()),
        Some(msg) => Err(Error::Precondition(format!("tensor is not in F: {msg}"))),
    }
}

/// Maps an arbitrary tensor onto `𝓕`.
///
/// With `S` the symmetrization of `t` in its last two slots,
///
/// ```text
/// G(x,y,z) = ½[S(x,hy,hz) + S(x,φy,φz)] + η(y)S(x,hz,ξ) + η(z)S(x,hy,ξ).
/// ```
///
/// `G` always lies in `𝓕`, and `G = t` whenever `t ∈ 𝓕`: there `S = t`,
/// `t(x,ξ,ξ) = 0`, and the horizontal part of the defining identity gives
/// `t(x,hy,hz) = t(x,φy,φz)`.
pub fn embed_into_f(s: &StructureData, t: &Tensor3) -> Result<Tensor3> {
    Error::check_dim(s.dim(), t.dim())?;
    let sym = t.symmetrize_last_two();
    let id = s.identity();
    let h = s.h_matrix();
    let horizontal = sym.pullback(&id, &h, &h) + sym.pullback(&id, s.phi(), s.phi());
    // m[(a, c)] = S(e_a, h e_c, ξ)
    let m = sym.pullback(&id, &h, &id).contract_slot(2, s.xi());
    let mut g = horizontal.scale(0.5);
    g += &sym_extension(&m, s.eta());
    Ok(g)
}

/// Seeded random element of `𝓕`: [`embed_into_f`] of a tensor with entries
/// uniform in `[−1, 1]`.
pub fn random_f(s: &StructureData, seed: u64) -> Tensor3 {
    let mut rng = crate::seeded_rng(seed);
    let raw = Tensor3::from_fn(s.dim(), |_, _, _| rng.random_range(-1.0..=1.0));
    embed_into_f(s, &raw).expect("dimensions agree by construction")
}

/// `⟨F', F''⟩ = g^{iq} g^{jr} g^{ks} F'_{ijk} F''_{qrs}`.
///
/// The metric is indefinite, so this is not a norm: nonzero tensors may have
/// zero or negative square.
pub fn inner_product(s: &StructureData, f1: &Tensor3, f2: &Tensor3) -> Result<f64> {
    Error::check_dim(s.dim(), f1.dim())?;
    Error::check_dim(s.dim(), f2.dim())?;
    let raise = s.g_inv().transpose();
    let raised = f2.pullback(&raise, &raise, &raise);
    Ok(f1
        .comps()
        .iter()
        .zip(raised.comps())
        .map(|(a, b)| a * b)
        .sum())
}

/// The three Lee forms as covectors (components on the basis vectors).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeeForms {
    /// `θ(z) = g^{ij} F(e_i, e_j, z)`, `i, j` over the contact distribution
    pub theta: DVector<f64>,
    /// `θ*(z) = g^{ij} F(e_i, φe_j, z)`, `i, j` over the contact distribution
    pub theta_star: DVector<f64>,
    /// `ω(z) = F(ξ, ξ, z)`
    pub omega: DVector<f64>,
}

impl LeeForms {
    pub fn theta_xi(&self, s: &StructureData) -> f64 {
        self.theta.dot(s.xi())
    }

    pub fn theta_star_xi(&self, s: &StructureData) -> f64 {
        self.theta_star.dot(s.xi())
    }
}

/// Computes `θ`, `θ*` and `ω` by contraction. `f` is expected to lie in `𝓕`;
/// this is not enforced.
///
/// The traces run over a basis `e₁…e_{2n}` of the contact distribution, i.e.
/// with `g⁻¹ − ξ⊗ξ`. Including `ξ` would add `ω` to `θ` and break
/// `θ*∘φ = −θ∘φ²`; for `θ*` it makes no difference since `φξ = 0`.
pub fn lee_forms(s: &StructureData, f: &Tensor3) -> Result<LeeForms> {
    Error::check_dim(s.dim(), f.dim())?;
    let d = s.dim();
    let gi = s.g_inv() - s.xi() * s.xi().transpose();
    let phi = s.phi();
    let f_phi = f.pullback(&s.identity(), phi, &s.identity());
    let trace = |t: &Tensor3, z: usize| -> f64 {
        let mut acc = 0.0;
        for i in 0..d {
            for j in 0..d {
                acc += gi[(i, j)] * t.get(i, j, z);
            }
        }
        acc
    };
    let theta = DVector::from_fn(d, |z, _| trace(f, z));
    let theta_star = DVector::from_fn(d, |z, _| trace(&f_phi, z));
    let xi = s.xi();
    let omega = DVector::from_fn(d, |z, _| {
        let mut acc = 0.0;
        for a in 0..d {
            for b in 0..d {
                acc += xi[a] * xi[b] * f.get(a, b, z);
            }
        }
        acc
    });
    Ok(LeeForms {
        theta,
        theta_star,
        omega,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{canonical_structure, random_structure};

    fn f8_form(lambda: f64) -> Tensor3 {
        let mut t = Tensor3::zeros(3);
        for idx in [(1, 0, 1), (1, 1, 0), (2, 0, 2), (2, 2, 0)] {
            t[idx] = lambda;
        }
        t
    }

    fn f4_form() -> Tensor3 {
        let mut t = Tensor3::zeros(3);
        t[(1, 0, 1)] = 1.0;
        t[(1, 1, 0)] = 1.0;
        t[(2, 0, 2)] = -1.0;
        t[(2, 2, 0)] = -1.0;
        t
    }

    #[test]
    fn membership_examples() {
        let s = canonical_structure(1).unwrap();
        assert!(is_in_f(&s, &Tensor3::zeros(3), 1e-12).unwrap());
        assert!(is_in_f(&s, &f8_form(1.0), 1e-12).unwrap());
        assert!(!is_in_f(&s, &Tensor3::unit(3, 0, 0, 0), 1e-12).unwrap());
    }

    #[test]
    fn membership_dimension_mismatch() {
        let s = canonical_structure(2).unwrap();
        assert!(matches!(
            is_in_f(&s, &Tensor3::zeros(3), 1e-12),
            Err(Error::DimensionMismatch {
                expected: 5,
                found: 3
            })
        ));
    }

    #[test]
    fn embedding_is_identity_on_f() {
        let s = canonical_structure(1).unwrap();
        let t = f8_form(1.0);
        assert!(embed_into_f(&s, &t).unwrap().max_abs_diff(&t) <= 1e-12);
    }

    #[test]
    fn embedding_kills_pure_xi_entry() {
        let s = canonical_structure(1).unwrap();
        let g = embed_into_f(&s, &Tensor3::unit(3, 0, 0, 0)).unwrap();
        assert_eq!(g.max_abs(), 0.0);
    }

    #[test]
    fn embedding_lands_in_f_for_dense_tensors() {
        let mut rng = crate::seeded_rng(99);
        for trial in 0..50 {
            let n = 1 + trial % 3;
            let s = if trial % 2 == 0 {
                canonical_structure(n).unwrap()
            } else {
                random_structure(n, trial as u64).unwrap()
            };
            let t = Tensor3::from_fn(s.dim(), |_, _, _| rng.random_range(-1.0..=1.0));
            let g = embed_into_f(&s, &t).unwrap();
            let r = f_space_residual(&s, &g).unwrap();
            assert!(r.max() <= 1e-12, "trial {trial}: {r:?}");
            // idempotent
            assert!(embed_into_f(&s, &g).unwrap().max_abs_diff(&g) <= 1e-12);
        }
    }

    #[test]
    fn random_f_is_deterministic_and_nonzero() {
        let s = canonical_structure(1).unwrap();
        assert_eq!(random_f(&s, 3), random_f(&s, 3));
        assert_ne!(random_f(&s, 3), random_f(&s, 4));
        for seed in 0..100 {
            let f = random_f(&s, seed);
            assert!(is_in_f(&s, &f, 1e-12).unwrap());
            assert!(f.max_abs() > 1e-6, "seed {seed}");
        }
    }

    #[test]
    fn f_vanishes_on_xi_xi() {
        for n in 1..=3 {
            let s = random_structure(n, 40 + n as u64).unwrap();
            let f = random_f(&s, 7);
            let xi = s.xi();
            for x in 0..s.dim() {
                let mut v = 0.0;
                for a in 0..s.dim() {
                    for b in 0..s.dim() {
                        v += xi[a] * xi[b] * f.get(x, a, b);
                    }
                }
                assert!(v.abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn inner_product_sign_of_timelike_entry() {
        let s = canonical_structure(1).unwrap();
        let f = Tensor3::unit(3, 2, 2, 2);
        assert_eq!(inner_product(&s, &f, &f).unwrap(), -1.0);
    }

    #[test]
    fn inner_product_symmetric_and_bilinear() {
        let s = random_structure(2, 8).unwrap();
        let (a, b, c) = (random_f(&s, 1), random_f(&s, 2), random_f(&s, 3));
        let ab = inner_product(&s, &a, &b).unwrap();
        assert!((ab - inner_product(&s, &b, &a).unwrap()).abs() <= 1e-12 * ab.abs().max(1.0));
        let combo = &a.scale(2.5) + &b.scale(-0.75);
        let lhs = inner_product(&s, &combo, &c).unwrap();
        let rhs =
            2.5 * inner_product(&s, &a, &c).unwrap() - 0.75 * inner_product(&s, &b, &c).unwrap();
        assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0));
    }

    #[test]
    fn lee_forms_of_dim3_examples() {
        let s = canonical_structure(1).unwrap();
        let lf = lee_forms(&s, &f4_form()).unwrap();
        assert_eq!(lf.theta[0], 2.0);
        let lf8 = lee_forms(&s, &f8_form(1.0)).unwrap();
        assert_eq!(lf8.theta.amax(), 0.0);
        assert_eq!(lf8.theta_star.amax(), 0.0);
        assert_eq!(lf8.omega.amax(), 0.0);
    }

    #[test]
    fn lee_form_identities_hold_on_f() {
        for n in 1..=3 {
            let s = random_structure(n, 17 * n as u64).unwrap();
            for seed in 0..10 {
                let f = random_f(&s, seed);
                let lf = lee_forms(&s, &f).unwrap();
                assert!(lf.omega.dot(s.xi()).abs() <= 1e-12);
                // θ*∘φ = −θ∘φ²
                let lhs = s.phi().transpose() * &lf.theta_star;
                let rhs = -(s.phi2().transpose() * &lf.theta);
                assert!((lhs - rhs).amax() <= 1e-12);
            }
        }
    }

    #[test]
    fn lee_forms_are_linear() {
        let s = canonical_structure(2).unwrap();
        let (a, b) = (random_f(&s, 10), random_f(&s, 11));
        let la = lee_forms(&s, &a).unwrap();
        let lb = lee_forms(&s, &b).unwrap();
        let lc = lee_forms(&s, &(&a.scale(3.0) + &b)).unwrap();
        assert!((lc.theta - (la.theta * 3.0 + lb.theta)).amax() <= 1e-12);
        assert!((lc.theta_star - (la.theta_star * 3.0 + lb.theta_star)).amax() <= 1e-12);
    }
}
