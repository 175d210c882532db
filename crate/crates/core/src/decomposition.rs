//! Orthogonal decomposition of `𝓕` into the eleven basic classes.
//!
//! `𝓕 = W₁ ⊕ W₂ ⊕ W₃ ⊕ W₄` through the projectors `p₁…p₄`; then
//! `W₁ = 𝓕₁ ⊕ 𝓕₂ ⊕ 𝓕₃`, `W₂ = 𝓕₄ ⊕ … ⊕ 𝓕₉`, `W₃ = 𝓕₁₀` and `W₄ = 𝓕₁₁`.
//! Within `W₂` the involutions [`op_l`] separate the classes by eigenvalue:
//!
//! | class | `L₁` | `L₂` |
//! |-------|------|------|
//! | 𝓕₄, 𝓕₅, 𝓕₆ | +1 | −1 |
//! | 𝓕₇ | −1 | −1 |
//! | 𝓕₈ | +1 | +1 |
//! | 𝓕₉ | −1 | +1 |
//!
//! Component magnitudes are max-abs of entries; the induced inner product is
//! indefinite and cannot serve as a norm.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fspace::{f_space_residual, lee_forms, require_in_f, sym_extension};
use crate::structure::StructureData;
use crate::tensor::Tensor3;
use crate::{scaled_tol, REL_TOL};

pub const NUM_CLASSES: usize = 11;

fn check_class(i: usize) -> Result<()> {
    if (1..=NUM_CLASSES).contains(&i) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "class index {i} outside 1..=11"
        )))
    }
}

/// Frequently used matrices of a structure, built once per call.
struct Frame<'a> {
    s: &'a StructureData,
    id: DMatrix<f64>,
    phi2: DMatrix<f64>,
    /// `g(φx, φy)`
    g_phi_phi: DMatrix<f64>,
    /// `g(x, φy)`
    g_x_phi: DMatrix<f64>,
}

impl<'a> Frame<'a> {
    fn new(s: &'a StructureData, f: &Tensor3) -> Result<Self> {
        Error::check_dim(s.dim(), f.dim())?;
        Ok(Self {
            s,
            id: s.identity(),
            phi2: s.phi2(),
            g_phi_phi: s.phi().transpose() * s.g() * s.phi(),
            g_x_phi: s.g() * s.phi(),
        })
    }

    fn phi(&self) -> &DMatrix<f64> {
        self.s.phi()
    }

    fn xi(&self) -> &DVector<f64> {
        self.s.xi()
    }

    fn eta(&self) -> &DVector<f64> {
        self.s.eta()
    }

    fn two_n(&self) -> f64 {
        2.0 * self.s.n() as f64
    }

    /// `F(φ²x, φ²y, ξ)`
    fn horizontal_xi(&self, f: &Tensor3) -> DMatrix<f64> {
        f.pullback(&self.phi2, &self.phi2, &self.id)
            .contract_slot(2, self.xi())
    }

    /// `F(φx, φy, ξ)`
    fn phi_xi(&self, f: &Tensor3) -> DMatrix<f64> {
        f.pullback(self.phi(), self.phi(), &self.id)
            .contract_slot(2, self.xi())
    }

    /// `m(x, y) η(z) + m(x, z) η(y)`
    fn eta_ext(&self, m: &DMatrix<f64>) -> Tensor3 {
        sym_extension(m, self.eta())
    }

    /// `T(x,y,z) = η(x) m(y,z)`
    fn eta_first(&self, m: &DMatrix<f64>) -> Tensor3 {
        let eta = self.eta();
        Tensor3::from_fn(eta.len(), |a, b, c| eta[a] * m[(b, c)])
    }

    /// `g(φx,φy)θ(φ²z) + g(x,φy)θ(φz) + g(φx,φz)θ(φ²y) + g(x,φz)θ(φy)`
    fn conformal_part(&self, theta: &DVector<f64>) -> Tensor3 {
        let theta_phi = self.phi().transpose() * theta;
        let theta_phi2 = self.phi2.transpose() * theta;
        sym_extension(&self.g_phi_phi, &theta_phi2) + sym_extension(&self.g_x_phi, &theta_phi)
    }

    fn p1(&self, f: &Tensor3) -> Tensor3 {
        f.pullback(&self.phi2, &self.phi2, &self.phi2).scale(-1.0)
    }

    fn p2(&self, f: &Tensor3) -> Tensor3 {
        // η(y)F(φ²x, ξ, φ²z) + η(z)F(φ²x, φ²y, ξ)
        let m_y = f
            .pullback(&self.phi2, &self.id, &self.phi2)
            .contract_slot(1, self.xi());
        let m_z = self.horizontal_xi(f);
        let eta = self.eta();
        Tensor3::from_fn(eta.len(), |a, b, c| {
            eta[b] * m_y[(a, c)] + eta[c] * m_z[(a, b)]
        })
    }

    fn p3(&self, f: &Tensor3) -> Tensor3 {
        let m = f
            .pullback(&self.id, &self.phi2, &self.phi2)
            .contract_slot(0, self.xi());
        self.eta_first(&m)
    }

    fn p4(&self, f: &Tensor3) -> Tensor3 {
        // −η(x){η(y)F(ξ,ξ,φ²z) + η(z)F(ξ,φ²y,ξ)}
        let xi = self.xi();
        let w = f
            .pullback(&self.id, &self.id, &self.phi2)
            .contract_slot(0, xi)
            .transpose()
            * xi;
        let u = f
            .pullback(&self.id, &self.phi2, &self.id)
            .contract_slot(0, xi)
            * xi;
        let eta = self.eta();
        Tensor3::from_fn(eta.len(), |a, b, c| {
            -eta[a] * (eta[b] * w[c] + eta[c] * u[b])
        })
    }

    /// `F(φ²y, φ²x, ξ)η(z) + F(φ²z, φ²x, ξ)η(y)`
    fn l1(&self, f: &Tensor3) -> Tensor3 {
        self.eta_ext(&self.horizontal_xi(f).transpose())
    }

    /// `F(φx, φy, ξ)η(z) + F(φx, φz, ξ)η(y)`
    fn l2(&self, f: &Tensor3) -> Tensor3 {
        self.eta_ext(&self.phi_xi(f))
    }

    fn component(&self, f: &Tensor3, i: usize) -> Result<Tensor3> {
        let quarter = |m: DMatrix<f64>| self.eta_ext(&(m * 0.25));
        Ok(match i {
            1 => self.f1(f)?,
            2 => {
                let (sym, _) = self.w1_split(f);
                sym - self.f1(f)?
            }
            3 => self.w1_split(f).1,
            4 => self.f4(f)?,
            5 => self.f5(f)?,
            6 => {
                let (a, c) = (self.horizontal_xi(f), self.phi_xi(f));
                let p21 = quarter(&a + a.transpose() - &c - c.transpose());
                p21 - self.f4(f)? - self.f5(f)?
            }
            7 => {
                let (a, c) = (self.horizontal_xi(f), self.phi_xi(f));
                quarter(&a - a.transpose() - &c + c.transpose())
            }
            8 => {
                let (a, c) = (self.horizontal_xi(f), self.phi_xi(f));
                quarter(&a + a.transpose() + &c + c.transpose())
            }
            9 => {
                let (a, c) = (self.horizontal_xi(f), self.phi_xi(f));
                quarter(&a - a.transpose() + &c - c.transpose())
            }
            10 => self.p3(f),
            11 => self.p4(f),
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "class index {i} outside 1..=11"
                )))
            }
        })
    }

    /// `1/2n · conformal_part(θ)`. Only `θ` on horizontal vectors enters, where
    /// it coincides with the Lee form of `p₁(F)`.
    fn f1(&self, f: &Tensor3) -> Result<Tensor3> {
        let theta = lee_forms(self.s, f)?.theta;
        Ok(self.conformal_part(&theta).scale(1.0 / self.two_n()))
    }

    /// Returns `(F₁ + F₂, F₃)`, the two halves of `p₁(F)` split by the cyclic
    /// symmetries.
    fn w1_split(&self, f: &Tensor3) -> (Tensor3, Tensor3) {
        let q = f.pullback(&self.phi2, &self.phi2, &self.phi2);
        // r(u, v, w) = F(φu, φ²v, φw)
        let r = f.pullback(self.phi(), &self.phi2, self.phi());
        let a = &q;
        let a_xzy = q.permuted([0, 2, 1]);
        // F(φ²y, φ²z, φ²x) and F(φ²z, φ²y, φ²x)
        let b = q.permuted([1, 2, 0]);
        let d = q.permuted([2, 1, 0]);
        // F(φy, φ²z, φx) and F(φz, φ²y, φx)
        let c = r.permuted([1, 2, 0]);
        let e = r.permuted([2, 1, 0]);
        let common = a + &a_xzy;
        let odd = &(&b - &c) + &(&d - &e);
        let f12 = (&common + &odd).scale(-0.25);
        let f3 = (&common - &odd).scale(-0.25);
        (f12, f3)
    }

    fn f4(&self, f: &Tensor3) -> Result<Tensor3> {
        let theta_xi = lee_forms(self.s, f)?.theta_xi(self.s);
        Ok(self
            .eta_ext(&self.g_phi_phi)
            .scale(-theta_xi / self.two_n()))
    }

    fn f5(&self, f: &Tensor3) -> Result<Tensor3> {
        let theta_star_xi = lee_forms(self.s, f)?.theta_star_xi(self.s);
        Ok(self
            .eta_ext(&self.g_x_phi)
            .scale(-theta_star_xi / self.two_n()))
    }

    /// Worst residual of the defining identities of class `i`.
    fn class_residual(&self, f: &Tensor3, i: usize) -> Result<f64> {
        let xi = self.xi();
        let lee = lee_forms(self.s, f)?;
        let vertical_slots = || {
            f.contract_slot(0, xi)
                .amax()
                .max(f.contract_slot(1, xi).amax())
        };
        // F(x, y, ξ) and F(φx, φy, ξ)
        let with_xi = f.contract_slot(2, xi);
        let with_xi_phi = self.phi().transpose() * &with_xi * self.phi();
        let eta_form = || f.max_abs_diff(&self.eta_ext(&with_xi));
        let sym = |sign: f64| (&with_xi - with_xi.transpose() * sign).amax();
        let phi_rel = |sign: f64| (&with_xi - &with_xi_phi * sign).amax();
        let lee_zero = || lee.theta.amax().max(lee.theta_star.amax());

        Ok(match i {
            1 => f.max_abs_diff(&self.conformal_part(&lee.theta).scale(1.0 / self.two_n())),
            2 => {
                let s = f.pullback(&self.id, &self.id, self.phi());
                let cyclic = &(&s + &s.permuted([1, 2, 0])) + &s.permuted([2, 0, 1]);
                vertical_slots().max(cyclic.max_abs()).max(lee.theta.amax())
            }
            3 => {
                let cyclic = &(f + &f.permuted([1, 2, 0])) + &f.permuted([2, 0, 1]);
                vertical_slots().max(cyclic.max_abs())
            }
            4 => {
                let c = lee.theta_xi(self.s) / self.two_n();
                f.max_abs_diff(&self.eta_ext(&self.g_phi_phi).scale(-c))
            }
            5 => {
                let c = lee.theta_star_xi(self.s) / self.two_n();
                f.max_abs_diff(&self.eta_ext(&self.g_x_phi).scale(-c))
            }
            6 => eta_form().max(sym(1.0)).max(phi_rel(-1.0)).max(lee_zero()),
            7 => eta_form().max(sym(-1.0)).max(phi_rel(-1.0)),
            8 => eta_form().max(sym(1.0)).max(phi_rel(1.0)),
            9 => eta_form().max(sym(-1.0)).max(phi_rel(1.0)),
            10 => {
                let m = f
                    .pullback(&self.id, self.phi(), self.phi())
                    .contract_slot(0, xi);
                f.max_abs_diff(&self.eta_first(&m))
            }
            11 => {
                // η(x){η(y)ω(z) + η(z)ω(y)}
                let m = self.eta() * lee.omega.transpose() + &lee.omega * self.eta().transpose();
                f.max_abs_diff(&self.eta_first(&m))
            }
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "class index {i} outside 1..=11"
                )))
            }
        })
    }
}

/// `pᵢ(F)` for `i ∈ 1..=4`.
///
/// `p₄` is evaluated from its own closed form; `F = p₁(F) + p₂(F) + p₃(F) + p₄(F)`
/// holds on `𝓕` and is checked by the test suites rather than used here.
pub fn project_w(s: &StructureData, f: &Tensor3, i: usize) -> Result<Tensor3> {
    let fr = Frame::new(s, f)?;
    match i {
        1 => Ok(fr.p1(f)),
        2 => Ok(fr.p2(f)),
        3 => Ok(fr.p3(f)),
        4 => Ok(fr.p4(f)),
        _ => Err(Error::InvalidArgument(format!(
            "subspace index {i} outside 1..=4"
        ))),
    }
}

/// The involutions of `W₂`.
///
/// * `L₁(F)(x,y,z) = F(φ²y, φ²x, ξ)η(z) + F(φ²z, φ²x, ξ)η(y)` (argument swap)
/// * `L₂(F)(x,y,z) = F(φx, φy, ξ)η(z) + F(φx, φz, ξ)η(y)` (φ-conjugation)
///
/// Fails with a precondition error unless `f = p₂(f)`.
pub fn op_l(s: &StructureData, f: &Tensor3, j: usize) -> Result<Tensor3> {
    let fr = Frame::new(s, f)?;
    let tol = scaled_tol(REL_TOL, f.max_abs());
    let off = f.max_abs_diff(&fr.p2(f));
    if !(off <= tol) {
        return Err(Error::Precondition(format!(
            "L operators act on W2 only; |F - p2(F)| = {off:e}"
        )));
    }
    op_l_unchecked(s, f, j)
}

pub fn op_l_unchecked(s: &StructureData, f: &Tensor3, j: usize) -> Result<Tensor3> {
    let fr = Frame::new(s, f)?;
    match j {
        1 => Ok(fr.l1(f)),
        2 => Ok(fr.l2(f)),
        _ => Err(Error::InvalidArgument(format!(
            "L operator index {j} outside 1..=2"
        ))),
    }
}

/// The projection `Fᵢ` of `f` onto the basic class `𝓕ᵢ`, `i ∈ 1..=11`.
///
/// `f` is assumed to lie in `𝓕`; see [`decompose`] for the checked entry point.
pub fn component(s: &StructureData, f: &Tensor3, i: usize) -> Result<Tensor3> {
    check_class(i)?;
    Frame::new(s, f)?.component(f, i)
}

/// All eleven components of an element of `𝓕`.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    /// `components[i - 1]` is `Fᵢ`.
    pub components: Vec<Tensor3>,
    /// Max-abs entry of each component.
    pub magnitudes: [f64; NUM_CLASSES],
    /// `max |F − Σ Fᵢ|`
    pub reconstruction_residual: f64,
}

impl Decomposition {
    /// `Fᵢ` for `i ∈ 1..=11`.
    pub fn get(&self, i: usize) -> &Tensor3 {
        &self.components[i - 1]
    }

    pub fn sum(&self) -> Tensor3 {
        self.components
            .iter()
            .sum::<Option<Tensor3>>()
            .expect("eleven components")
    }
}

/// Decomposes `f` after checking `f ∈ 𝓕` (relative tolerance [`REL_TOL`]).
pub fn decompose(s: &StructureData, f: &Tensor3) -> Result<Decomposition> {
    require_in_f(s, f, REL_TOL)?;
    decompose_unchecked(s, f)
}

/// [`decompose`] without the membership check.
pub fn decompose_unchecked(s: &StructureData, f: &Tensor3) -> Result<Decomposition> {
    let fr = Frame::new(s, f)?;
    let components = (1..=NUM_CLASSES)
        .map(|i| fr.component(f, i))
        .collect::<Result<Vec<_>>>()?;
    let mut magnitudes = [0.0; NUM_CLASSES];
    for (m, c) in magnitudes.iter_mut().zip(&components) {
        *m = c.max_abs();
    }
    let mut out = Decomposition {
        components,
        magnitudes,
        reconstruction_residual: 0.0,
    };
    out.reconstruction_residual = f.max_abs_diff(&out.sum());
    Ok(out)
}

/// Worst residual of the characteristic conditions of class `𝓕ᵢ`.
pub fn class_residual(s: &StructureData, f: &Tensor3, i: usize) -> Result<f64> {
    check_class(i)?;
    Frame::new(s, f)?.class_residual(f, i)
}

/// Whether `f` satisfies the characteristic conditions of `𝓕ᵢ` within `tol`,
/// auxiliary conditions included.
pub fn class_predicate(s: &StructureData, f: &Tensor3, i: usize, tol: f64) -> Result<bool> {
    Ok(class_residual(s, f, i)? <= tol)
}

/// Membership in `Wᵢ` through the vanishing of `f` on `h`/`v` slot patterns.
pub fn is_in_w(s: &StructureData, f: &Tensor3, i: usize, tol: f64) -> Result<bool> {
    let fr = Frame::new(s, f)?;
    let id = &fr.id;
    let h = s.h_matrix();
    let v = s.v_matrix();
    let vanish =
        |a: &DMatrix<f64>, b: &DMatrix<f64>, c: &DMatrix<f64>| f.pullback(a, b, c).max_abs();
    let pattern = match i {
        1 => vanish(&v, id, id)
            .max(vanish(id, &v, id))
            .max(vanish(id, id, &v)),
        2 => vanish(&v, id, id).max(vanish(id, &h, &h)),
        3 => vanish(&h, id, id)
            .max(vanish(id, &v, id))
            .max(vanish(id, id, &v)),
        4 => vanish(&h, id, id).max(vanish(id, &h, &h)),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "subspace index {i} outside 1..=4"
            )))
        }
    };
    Ok(pattern <= tol && f_space_residual(s, f)?.max() <= tol)
}

/// Outcome of [`classify`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    /// Present classes, ascending, as indices `1..=11`.
    pub present: Vec<usize>,
    #[serde(rename = "is_F0")]
    pub is_f0: bool,
    pub magnitudes: [f64; NUM_CLASSES],
    pub reconstruction_residual: f64,
    pub input_magnitude: f64,
    pub tolerances: Tolerances,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub rel_tol: f64,
    pub abs_floor: f64,
}

impl ClassReport {
    /// `"F9 + F10"`, or `"F0"` for the zero tensor.
    pub fn class_label(&self) -> String {
        if self.is_f0 {
            "F0".to_owned()
        } else {
            self.present
                .iter()
                .map(|i| format!("F{i}"))
                .collect::<Vec<_>>()
                .join(" + ")
        }
    }

    pub fn class_names(&self) -> Vec<String> {
        self.present.iter().map(|i| format!("F{i}")).collect()
    }
}

impl fmt::Display for ClassReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "class: {}", self.class_label())?;
        writeln!(f, "F0: {}", self.is_f0)?;
        writeln!(f, "present: [{}]", self.class_names().join(", "))?;
        for (i, m) in self.magnitudes.iter().enumerate() {
            writeln!(f, "  |F{}| = {:e}", i + 1, m)?;
        }
        writeln!(f, "input magnitude: {:e}", self.input_magnitude)?;
        writeln!(
            f,
            "reconstruction residual: {:e}",
            self.reconstruction_residual
        )?;
        write!(
            f,
            "tolerances: rel_tol = {:e}, abs_floor = {:e}",
            self.tolerances.rel_tol, self.tolerances.abs_floor
        )
    }
}

/// Determines which basic classes are present in `f`.
///
/// Class `i` is present iff `max|Fᵢ| > rel_tol · max(max|f|, abs_floor)`. A
/// tensor with `max|f| ≤ abs_floor` is reported as `𝓕₀`.
pub fn classify(
    s: &StructureData,
    f: &Tensor3,
    rel_tol: f64,
    abs_floor: f64,
) -> Result<ClassReport> {
    if !(rel_tol > 0.0) || !(abs_floor >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerances must be positive (rel_tol = {rel_tol}, abs_floor = {abs_floor})"
        )));
    }
    require_in_f(s, f, rel_tol)?;
    let dec = decompose_unchecked(s, f)?;
    let input_magnitude = f.max_abs();
    let threshold = rel_tol * input_magnitude.max(abs_floor);
    let present = if input_magnitude <= abs_floor {
        Vec::new()
    } else {
        (1..=NUM_CLASSES)
            .filter(|&i| dec.magnitudes[i - 1] > threshold)
            .collect()
    };
    Ok(ClassReport {
        is_f0: present.is_empty(),
        present,
        magnitudes: dec.magnitudes,
        reconstruction_residual: dec.reconstruction_residual,
        input_magnitude,
        tolerances: Tolerances { rel_tol, abs_floor },
    })
}
