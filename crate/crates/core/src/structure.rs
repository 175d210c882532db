//! The point-wise almost contact B-metric structure `(φ, ξ, η, g)`.

use std::fmt;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Eigenvalues of `g` with magnitude below this are counted as neither sign.
pub const SIGNATURE_THRESHOLD: f64 = 1e-10;

/// `(φ, ξ, η, g)` on a `(2n+1)`-dimensional space, with the inverse metric cached.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureData {
    n: usize,
    g: DMatrix<f64>,
    g_inv: DMatrix<f64>,
    phi: DMatrix<f64>,
    xi: DVector<f64>,
    eta: DVector<f64>,
}

impl StructureData {
    /// Assembles a structure from its components.
    ///
    /// Only shapes and invertibility of `g` are checked here; the axioms are
    /// checked by [`validate_structure`] so that violating inputs can still be
    /// inspected.
    pub fn new(
        n: usize,
        g: DMatrix<f64>,
        phi: DMatrix<f64>,
        xi: DVector<f64>,
        eta: DVector<f64>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "contact rank n must be at least 1".into(),
            ));
        }
        let dim = 2 * n + 1;
        for (what, rows, cols) in [
            ("g", g.nrows(), g.ncols()),
            ("phi", phi.nrows(), phi.ncols()),
        ] {
            if rows != dim || cols != dim {
                return Err(Error::InvalidArgument(format!(
                    "{what} must be {dim}x{dim}, got {rows}x{cols}"
                )));
            }
        }
        Error::check_dim(dim, xi.len())?;
        Error::check_dim(dim, eta.len())?;
        let all_finite = g
            .iter()
            .chain(phi.iter())
            .chain(xi.iter())
            .chain(eta.iter());
        if all_finite.into_iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite structure entry".into()));
        }
        let g_inv = g.clone().try_inverse().ok_or(Error::SingularMetric)?;
        Ok(Self {
            n,
            g,
            g_inv,
            phi,
            xi,
            eta,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    pub fn g(&self) -> &DMatrix<f64> {
        &self.g
    }

    pub fn g_inv(&self) -> &DMatrix<f64> {
        &self.g_inv
    }

    pub fn phi(&self) -> &DMatrix<f64> {
        &self.phi
    }

    pub fn xi(&self) -> &DVector<f64> {
        &self.xi
    }

    pub fn eta(&self) -> &DVector<f64> {
        &self.eta
    }

    pub fn phi2(&self) -> DMatrix<f64> {
        &self.phi * &self.phi
    }

    /// Matrix of the horizontal projector `h = −φ²`.
    pub fn h_matrix(&self) -> DMatrix<f64> {
        -self.phi2()
    }

    /// Matrix of the vertical projector `v = η ⊗ ξ`.
    pub fn v_matrix(&self) -> DMatrix<f64> {
        &self.xi * self.eta.transpose()
    }

    pub fn identity(&self) -> DMatrix<f64> {
        DMatrix::identity(self.dim(), self.dim())
    }

    /// `g(x, y)` for coordinate vectors.
    pub fn metric(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        (x.transpose() * &self.g * y)[(0, 0)]
    }

    /// The same structure with `g` replaced, e.g. by the associated metric.
    pub fn with_metric(&self, g: DMatrix<f64>) -> Result<Self> {
        Self::new(
            self.n,
            g,
            self.phi.clone(),
            self.xi.clone(),
            self.eta.clone(),
        )
    }

    /// Re-expresses the structure in the basis whose `a`-th vector has old
    /// coordinates `basis.column(a)`.
    pub fn change_basis(&self, basis: &DMatrix<f64>) -> Result<Self> {
        let inv = basis
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidArgument("change of basis is singular".into()))?;
        Self::new(
            self.n,
            basis.transpose() * &self.g * basis,
            &inv * &self.phi * basis,
            &inv * &self.xi,
            basis.transpose() * &self.eta,
        )
    }

    /// Whether every component agrees with [`canonical_structure`] within `tol`.
    pub fn is_canonical(&self, tol: f64) -> bool {
        let c = canonical_structure(self.n).expect("n >= 1 by construction");
        (&self.g - &c.g).amax() <= tol
            && (&self.phi - &c.phi).amax() <= tol
            && (&self.xi - &c.xi).amax() <= tol
            && (&self.eta - &c.eta).amax() <= tol
    }
}

/// The φ-basis structure: `g = diag(1, Iₙ, −Iₙ)`, `φEᵢ = E_{n+i}`,
/// `φE_{n+i} = −Eᵢ`, `ξ = E₀`, `η = E⁰`.
pub fn canonical_structure(n: usize) -> Result<StructureData> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "contact rank n must be at least 1".into(),
        ));
    }
    let dim = 2 * n + 1;
    let g = DMatrix::from_fn(dim, dim, |i, j| match (i == j, i) {
        (false, _) => 0.0,
        (true, 0) => 1.0,
        (true, i) if i <= n => 1.0,
        _ => -1.0,
    });
    let mut phi = DMatrix::zeros(dim, dim);
    for i in 1..=n {
        phi[(n + i, i)] = 1.0;
        phi[(i, n + i)] = -1.0;
    }
    let mut xi = DVector::zeros(dim);
    xi[0] = 1.0;
    let eta = xi.clone();
    StructureData::new(n, g, phi, xi, eta)
}

/// A valid structure in a random (seeded) basis, obtained from the canonical
/// one by a well-conditioned change of basis.
pub fn random_structure(n: usize, seed: u64) -> Result<StructureData> {
    let canon = canonical_structure(n)?;
    let dim = canon.dim();
    let mut rng = crate::seeded_rng(seed);
    let basis = DMatrix::from_fn(dim, dim, |i, j| {
        let diag = if i == j { 2.0 } else { 0.0 };
        diag + rng.random_range(-0.5..=0.5)
    });
    canon.change_basis(&basis)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axiom {
    /// `φξ = 0`
    PhiXi,
    /// `φ² = −Id + η⊗ξ`
    PhiSquared,
    /// `η∘φ = 0`
    EtaPhi,
    /// `η(ξ) = 1`
    EtaXi,
    /// `g(φx, φy) = −g(x, y) + η(x)η(y)`
    BMetric,
    MetricSymmetry,
    MetricInverse,
    /// `g` has `n+1` positive and `n` negative eigenvalues.
    Signature,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::PhiXi => "phi(xi) = 0",
            Axiom::PhiSquared => "phi^2 = -Id + eta(x)xi",
            Axiom::EtaPhi => "eta o phi = 0",
            Axiom::EtaXi => "eta(xi) = 1",
            Axiom::BMetric => "g(phi x, phi y) = -g(x,y) + eta(x)eta(y)",
            Axiom::MetricSymmetry => "g symmetric",
            Axiom::MetricInverse => "g g^-1 = Id",
            Axiom::Signature => "signature (n+1, n)",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomResidual {
    pub axiom: Axiom,
    pub residual: f64,
    /// Basis indices where the worst residual occurs, when meaningful.
    pub at: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub tol: f64,
    /// Axioms whose residual exceeds `tol`.
    pub violations: Vec<AxiomResidual>,
    /// Worst residual of every axiom that was checked.
    pub residuals: Vec<AxiomResidual>,
}

impl ValidationReport {
    pub fn residual(&self, axiom: Axiom) -> Option<&AxiomResidual> {
        self.residuals.iter().find(|r| r.axiom == axiom)
    }

    pub fn violates(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|r| r.axiom == axiom)
    }
}

// ties resolve to the last index in row-major order
fn worst_entry(m: &DMatrix<f64>) -> (f64, Option<(usize, usize)>) {
    let mut best = (0.0, None);
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let v = m[(i, j)].abs();
            if v > 0.0 && v >= best.0 {
                best = (v, Some((i, j)));
            }
        }
    }
    best
}

/// Signed eigenvalue counts `(positive, negative)` of a symmetric matrix.
pub fn signature(g: &DMatrix<f64>) -> (usize, usize) {
    let sym = (g + g.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let pos = eig
        .eigenvalues
        .iter()
        .filter(|&&l| l > SIGNATURE_THRESHOLD)
        .count();
    let neg = eig
        .eigenvalues
        .iter()
        .filter(|&&l| l < -SIGNATURE_THRESHOLD)
        .count();
    (pos, neg)
}

/// Checks every structure axiom on basis vectors and reports the worst residual
/// of each.
pub fn validate_structure(s: &StructureData, tol: f64) -> ValidationReport {
    let n = s.n();
    let id = s.identity();
    let phi = s.phi();
    let xi = s.xi();
    let eta = s.eta();
    let g = s.g();

    let mut residuals = Vec::new();
    let mut push = |axiom, (residual, at): (f64, Option<(usize, usize)>)| {
        residuals.push(AxiomResidual {
            axiom,
            residual,
            at,
        });
    };

    let phi_xi = phi * xi;
    push(Axiom::PhiXi, (phi_xi.amax(), None));

    let eta_xi_outer = xi * eta.transpose();
    push(
        Axiom::PhiSquared,
        worst_entry(&(s.phi2() + &id - eta_xi_outer)),
    );

    let eta_phi = phi.transpose() * eta;
    push(Axiom::EtaPhi, (eta_phi.amax(), None));

    push(Axiom::EtaXi, ((eta.dot(xi) - 1.0).abs(), None));

    let bmetric = phi.transpose() * g * phi + g - eta * eta.transpose();
    push(Axiom::BMetric, worst_entry(&bmetric));

    push(Axiom::MetricSymmetry, worst_entry(&(g - g.transpose())));

    push(Axiom::MetricInverse, worst_entry(&(g * s.g_inv() - &id)));

    let (pos, neg) = signature(g);
    let off = pos.abs_diff(n + 1) + neg.abs_diff(n);
    push(Axiom::Signature, (off as f64, None));

    let violations = residuals
        .iter()
        .filter(|r| !(r.residual <= tol))
        .cloned()
        .collect::<Vec<_>>();
    ValidationReport {
        valid: violations.is_empty(),
        tol,
        violations,
        residuals,
    }
}

/// `g̃(x, y) = g(x, φy) + η(x)η(y)` by components.
pub fn associated_metric(s: &StructureData) -> DMatrix<f64> {
    s.g() * s.phi() + s.eta() * s.eta().transpose()
}

/// `h(x) = −φ²x`.
pub fn h_project(s: &StructureData, x: &DVector<f64>) -> DVector<f64> {
    -(s.phi() * (s.phi() * x))
}

/// `v(x) = η(x)ξ`.
pub fn v_project(s: &StructureData, x: &DVector<f64>) -> DVector<f64> {
    s.xi() * s.eta().dot(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis_vector(dim: usize, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(dim);
        v[i] = 1.0;
        v
    }

    #[test]
    fn canonical_dim3_layout() {
        let s = canonical_structure(1).unwrap();
        assert_eq!(s.dim(), 3);
        assert_eq!(
            s.g(),
            &DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, -1.0]))
        );
        let e1 = basis_vector(3, 1);
        let e2 = basis_vector(3, 2);
        assert_eq!(s.phi() * &e1, e2);
        assert_eq!(s.phi() * &e2, -e1);
        assert_eq!(s.xi(), &basis_vector(3, 0));
    }

    #[test]
    fn canonical_dim5_signature() {
        let s = canonical_structure(2).unwrap();
        assert_eq!(s.dim(), 5);
        assert_eq!(signature(s.g()), (3, 2));
    }

    #[test]
    fn canonical_rejects_zero_rank() {
        assert!(matches!(
            canonical_structure(0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn canonical_structures_validate() {
        for n in 1..=4 {
            let r = validate_structure(&canonical_structure(n).unwrap(), 1e-12);
            assert!(r.valid, "n={n}: {:?}", r.violations);
        }
    }

    #[test]
    fn euclidean_metric_breaks_b_metric_axiom() {
        let c = canonical_structure(1).unwrap();
        let s = c.with_metric(DMatrix::identity(3, 3)).unwrap();
        let r = validate_structure(&s, 1e-12);
        assert!(!r.valid);
        let b = r.residual(Axiom::BMetric).unwrap();
        assert_eq!(b.residual, 2.0);
        assert_eq!(b.at, Some((2, 2)));
        assert!(r.violates(Axiom::Signature));
    }

    #[test]
    fn zero_phi_breaks_phi_squared() {
        let c = canonical_structure(1).unwrap();
        let s = StructureData::new(
            1,
            c.g().clone(),
            DMatrix::zeros(3, 3),
            c.xi().clone(),
            c.eta().clone(),
        )
        .unwrap();
        let r = validate_structure(&s, 1e-12);
        assert!(!r.valid);
        assert!(r.violates(Axiom::PhiSquared));
        assert_eq!(r.residual(Axiom::PhiSquared).unwrap().residual, 1.0);
    }

    #[test]
    fn malformed_dimensions_are_errors() {
        let c = canonical_structure(1).unwrap();
        let bad = StructureData::new(
            1,
            DMatrix::identity(4, 4),
            c.phi().clone(),
            c.xi().clone(),
            c.eta().clone(),
        );
        assert!(matches!(bad, Err(Error::InvalidArgument(_))));
        let bad = StructureData::new(
            1,
            c.g().clone(),
            c.phi().clone(),
            DVector::zeros(2),
            c.eta().clone(),
        );
        assert!(matches!(bad, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn associated_metric_dim3() {
        let s = canonical_structure(1).unwrap();
        let gt = associated_metric(&s);
        let expected =
            DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, -1.0, 0.0]);
        assert_eq!(gt, expected);
    }

    #[test]
    fn associated_metric_is_b_metric() {
        for seed in 0..20 {
            let n = 1 + (seed as usize % 3);
            let s = random_structure(n, seed).unwrap();
            assert!(validate_structure(&s, 1e-10).valid);
            let gt = associated_metric(&s);
            assert!((s.xi().transpose() * &gt * s.xi())[(0, 0)] - 1.0 < 1e-12);
            let st = s.with_metric(gt).unwrap();
            let r = validate_structure(&st, 1e-9);
            assert!(r.valid, "seed {seed}: {:?}", r.violations);
        }
    }

    #[test]
    fn projectors_on_xi_and_e1() {
        let s = canonical_structure(1).unwrap();
        let xi = s.xi().clone();
        assert_eq!(h_project(&s, &xi).amax(), 0.0);
        assert_eq!(v_project(&s, &xi), xi);
        let e1 = basis_vector(3, 1);
        assert_eq!(h_project(&s, &e1), e1);
    }

    #[test]
    fn projectors_are_complementary_idempotents() {
        let s = random_structure(2, 11).unwrap();
        let x = DVector::from_fn(5, |i, _| 0.3 * i as f64 - 0.7);
        let h = h_project(&s, &x);
        let v = v_project(&s, &x);
        assert!((&h + &v - &x).amax() < 1e-12);
        assert!((h_project(&s, &h) - &h).amax() < 1e-12);
        assert!((v_project(&s, &v) - &v).amax() < 1e-12);
        assert!(h_project(&s, &v).amax() < 1e-12);
        assert!(v_project(&s, &h).amax() < 1e-12);
    }

    #[test]
    fn b_metric_identity_on_random_vectors() {
        let s = random_structure(3, 5).unwrap();
        let x = DVector::from_fn(7, |i, _| (i as f64).sin());
        let y = DVector::from_fn(7, |i, _| (i as f64 * 0.7).cos());
        let lhs = s.metric(&(s.phi() * &x), &(s.phi() * &y)) + s.metric(&x, &y)
            - s.eta().dot(&x) * s.eta().dot(&y);
        assert!(lhs.abs() < 1e-12);
    }
}
