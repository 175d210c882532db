//! Left-invariant structures on Lie groups: brackets, the Levi-Civita
//! connection from the Koszul formula, and the resulting structure tensor.

use crate::error::{Error, Result};
use crate::structure::{canonical_structure, StructureData};
use crate::tensor::Tensor3;

/// Structure constants `[E_i, E_j] = Σₖ c[i][j][k] E_k` together with the
/// (left-invariant) almost contact B-metric structure on the algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebraSpec {
    pub structure: StructureData,
    c: Vec<f64>,
}

impl LieAlgebraSpec {
    /// `c` is the flat row-major `dim³` array of structure constants.
    pub fn new(structure: StructureData, c: Vec<f64>) -> Result<Self> {
        let d = structure.dim();
        Error::check_dim(d * d * d, c.len())?;
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "non-finite structure constant".into(),
            ));
        }
        Ok(Self { structure, c })
    }

    /// Builds the constants from `[E_i, E_j]` for `i < j`; the rest follows by
    /// antisymmetry.
    pub fn from_brackets(
        structure: StructureData,
        brackets: &[(usize, usize, Vec<f64>)],
    ) -> Result<Self> {
        let d = structure.dim();
        let mut c = vec![0.0; d * d * d];
        for (i, j, coeffs) in brackets {
            let (i, j) = (*i, *j);
            if i >= d || j >= d {
                return Err(Error::InvalidArgument(format!(
                    "bracket index ({i}, {j}) out of range"
                )));
            }
            if j <= i {
                return Err(Error::InvalidArgument(format!(
                    "bracket [E{i}, E{j}] must have i < j; antisymmetry is implied"
                )));
            }
            Error::check_dim(d, coeffs.len())?;
            for (k, v) in coeffs.iter().enumerate() {
                c[(i * d + j) * d + k] = *v;
                c[(j * d + i) * d + k] = -*v;
            }
        }
        Self::new(structure, c)
    }

    pub fn dim(&self) -> usize {
        self.structure.dim()
    }

    /// Coefficient of `E_k` in `[E_i, E_j]`.
    #[inline]
    pub fn bracket(&self, i: usize, j: usize, k: usize) -> f64 {
        let d = self.dim();
        self.c[(i * d + j) * d + k]
    }

    pub fn constants(&self) -> &[f64] {
        &self.c
    }

    /// Nonzero brackets `[E_i, E_j]` with `i < j`.
    pub fn upper_brackets(&self) -> Vec<(usize, usize, Vec<f64>)> {
        let d = self.dim();
        let mut out = Vec::new();
        for i in 0..d {
            for j in (i + 1)..d {
                let coeffs: Vec<f64> = (0..d).map(|k| self.bracket(i, j, k)).collect();
                if coeffs.iter().any(|&v| v != 0.0) {
                    out.push((i, j, coeffs));
                }
            }
        }
        out
    }

    pub fn antisymmetry_residual(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    worst = worst.max((self.bracket(i, j, k) + self.bracket(j, i, k)).abs());
                }
            }
        }
        worst
    }

    /// Worst component of `[[E_i,E_j],E_k] + [[E_j,E_k],E_i] + [[E_k,E_i],E_j]`.
    pub fn jacobi_residual(&self) -> f64 {
        let d = self.dim();
        let double = |i: usize, j: usize, k: usize, l: usize| -> f64 {
            (0..d)
                .map(|m| self.bracket(i, j, m) * self.bracket(m, k, l))
                .sum()
        };
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let s = double(i, j, k, l) + double(j, k, i, l) + double(k, i, j, l);
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }
}

/// The family on `ℝ^{2n+1}` with only `[E₀, ·]` nonzero:
///
/// ```text
/// [E₀, Eᵢ]     = −aᵢ Eᵢ − a_{n+i} E_{n+i}
/// [E₀, E_{n+i}] = −a_{n+i} Eᵢ + aᵢ E_{n+i}
/// ```
///
/// on the canonical φ-basis structure. `a = (a₁, …, a_{2n})`.
pub fn lie_family(n: usize, a: &[f64]) -> Result<LieAlgebraSpec> {
    let structure = canonical_structure(n)?;
    if a.len() != 2 * n {
        return Err(Error::InvalidArgument(format!(
            "expected {} parameters for n = {n}, got {}",
            2 * n,
            a.len()
        )));
    }
    let d = structure.dim();
    let mut brackets = Vec::with_capacity(2 * n);
    for i in 1..=n {
        let (ai, ani) = (a[i - 1], a[n + i - 1]);
        let mut e_i = vec![0.0; d];
        e_i[i] = -ai;
        e_i[n + i] = -ani;
        let mut e_ni = vec![0.0; d];
        e_ni[i] = -ani;
        e_ni[n + i] = ai;
        brackets.push((0, i, e_i));
        brackets.push((0, n + i, e_ni));
    }
    LieAlgebraSpec::from_brackets(structure, &brackets)
}

/// Whether the Jacobi identity holds on all basis triples within `tol`.
///
/// Fails with a precondition error if the constants are not antisymmetric.
pub fn check_jacobi(spec: &LieAlgebraSpec, tol: f64) -> Result<bool> {
    let anti = spec.antisymmetry_residual();
    if !(anti <= tol) {
        return Err(Error::Precondition(format!(
            "structure constants are not antisymmetric (residual {anti:e})"
        )));
    }
    Ok(spec.jacobi_residual() <= tol)
}

/// Christoffel coefficients `∇_{E_i} E_j = Σₖ gamma[i][j][k] E_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection {
    dim: usize,
    gamma: Vec<f64>,
}

impl Connection {
    #[inline]
    pub fn gamma(&self, i: usize, j: usize, k: usize) -> f64 {
        self.gamma[(i * self.dim + j) * self.dim + k]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `∇_{E_i} E_j` as a coordinate vector.
    pub fn covariant(&self, i: usize, j: usize) -> Vec<f64> {
        (0..self.dim).map(|k| self.gamma(i, j, k)).collect()
    }

    /// Worst component of `∇_{E_i}E_j − ∇_{E_j}E_i − [E_i, E_j]`.
    pub fn torsion_residual(&self, spec: &LieAlgebraSpec) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let t = self.gamma(i, j, k) - self.gamma(j, i, k) - spec.bracket(i, j, k);
                    worst = worst.max(t.abs());
                }
            }
        }
        worst
    }

    /// Worst `|g(∇_{E_i}E_j, E_k) + g(E_j, ∇_{E_i}E_k)|`.
    pub fn metric_residual(&self, spec: &LieAlgebraSpec) -> f64 {
        let d = self.dim;
        let g = spec.structure.g();
        let lowered = |i: usize, j: usize, k: usize| -> f64 {
            (0..d).map(|l| self.gamma(i, j, l) * g[(l, k)]).sum()
        };
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    worst = worst.max((lowered(i, j, k) + lowered(i, k, j)).abs());
                }
            }
        }
        worst
    }
}

/// Levi-Civita connection of the left-invariant metric, from
///
/// ```text
/// 2g(∇_{E_i}E_j, E_k) = g([E_i,E_j],E_k) + g([E_k,E_i],E_j) + g([E_k,E_j],E_i).
/// ```
pub fn koszul_connection(spec: &LieAlgebraSpec) -> Result<Connection> {
    let s = &spec.structure;
    let d = s.dim();
    let g = s.g();
    let g_inv = s.g_inv();
    if !((g * g_inv - s.identity()).amax() <= 1e-9) {
        return Err(Error::SingularMetric);
    }
    // lowered[i][j][k] = g([E_i, E_j], E_k)
    let lowered = Tensor3::from_fn(d, |i, j, k| {
        (0..d).map(|l| spec.bracket(i, j, l) * g[(l, k)]).sum()
    });
    let mut gamma = vec![0.0; d * d * d];
    for i in 0..d {
        for j in 0..d {
            for m in 0..d {
                let mut acc = 0.0;
                for k in 0..d {
                    let rhs = lowered.get(i, j, k) + lowered.get(k, i, j) + lowered.get(k, j, i);
                    acc += g_inv[(m, k)] * rhs;
                }
                gamma[(i * d + j) * d + m] = 0.5 * acc;
            }
        }
    }
    Ok(Connection { dim: d, gamma })
}

/// `F(x, y, z) = g((∇ₓφ)y, z) = g(∇ₓ(φy) − φ∇ₓy, z)` with `φ` constant in the
/// left-invariant frame.
pub fn structure_tensor_from_connection(
    spec: &LieAlgebraSpec,
    conn: &Connection,
) -> Result<Tensor3> {
    let s = &spec.structure;
    let d = s.dim();
    Error::check_dim(d, conn.dim())?;
    let phi = s.phi();
    let g = s.g();
    // nabla_phi[i][j][l]: E_l-coefficient of (∇_{E_i}φ)E_j
    let nabla_phi = Tensor3::from_fn(d, |i, j, l| {
        (0..d)
            .map(|m| phi[(m, j)] * conn.gamma(i, m, l) - conn.gamma(i, j, m) * phi[(l, m)])
            .sum()
    });
    Ok(Tensor3::from_fn(d, |i, j, k| {
        (0..d).map(|l| nabla_phi.get(i, j, l) * g[(l, k)]).sum()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fspace::is_in_f;
    use rand::Rng;

    #[test]
    fn family_brackets_dim3() {
        let spec = lie_family(1, &[2.0, 3.0]).unwrap();
        assert_eq!(
            (0..3).map(|k| spec.bracket(0, 1, k)).collect::<Vec<_>>(),
            vec![0.0, -2.0, -3.0]
        );
        assert_eq!(
            (0..3).map(|k| spec.bracket(0, 2, k)).collect::<Vec<_>>(),
            vec![0.0, -3.0, 2.0]
        );
        assert!((0..3).all(|k| spec.bracket(1, 2, k) == 0.0));
        assert_eq!(spec.bracket(1, 0, 1), 2.0);
    }

    #[test]
    fn family_rejects_wrong_parameter_count() {
        assert!(lie_family(2, &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn jacobi_holds_for_family() {
        let mut rng = crate::seeded_rng(4);
        assert!(check_jacobi(&lie_family(1, &[2.0, 3.0]).unwrap(), 1e-12).unwrap());
        for n in 1..=2 {
            for _ in 0..5 {
                let a: Vec<f64> = (0..2 * n).map(|_| rng.random_range(-2.0..=2.0)).collect();
                assert!(check_jacobi(&lie_family(n, &a).unwrap(), 1e-12).unwrap());
            }
        }
    }

    #[test]
    fn abelian_algebra() {
        let s = canonical_structure(1).unwrap();
        let spec = LieAlgebraSpec::new(s, vec![0.0; 27]).unwrap();
        assert!(check_jacobi(&spec, 1e-12).unwrap());
        let conn = koszul_connection(&spec).unwrap();
        assert!(conn.gamma.iter().all(|&g| g == 0.0));
    }

    #[test]
    fn jacobi_failure_is_detected() {
        // [E1,E2] = E1 and [E0,E1] = E2
        let s = canonical_structure(1).unwrap();
        let spec = LieAlgebraSpec::from_brackets(
            s,
            &[(1, 2, vec![0.0, 1.0, 0.0]), (0, 1, vec![0.0, 0.0, 1.0])],
        )
        .unwrap();
        // brute-force cyclic sum on (E0, E1, E2):
        // [[E0,E1],E2] = [E2,E2] = 0, [[E1,E2],E0] = [E1,E0] = −E2, [[E2,E0],E1] = 0
        assert!((spec.jacobi_residual() - 1.0).abs() < 1e-15);
        assert!(!check_jacobi(&spec, 1e-12).unwrap());
    }

    #[test]
    fn non_antisymmetric_constants_are_rejected() {
        let s = canonical_structure(1).unwrap();
        let mut c = vec![0.0; 27];
        c[5] = 1.0; // c[0][1][2]: [E0, E1] = E2 with no antisymmetric partner
        let spec = LieAlgebraSpec::new(s, c).unwrap();
        assert!(matches!(
            check_jacobi(&spec, 1e-12),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn from_brackets_rejects_lower_entries() {
        let s = canonical_structure(1).unwrap();
        assert!(LieAlgebraSpec::from_brackets(s, &[(2, 1, vec![0.0; 3])]).is_err());
    }

    #[test]
    fn family_connection_values() {
        let (a1, a2) = (1.25, -0.5);
        let spec = lie_family(1, &[a1, a2]).unwrap();
        let conn = koszul_connection(&spec).unwrap();
        assert_eq!(conn.covariant(1, 1), vec![-a1, 0.0, 0.0]);
        assert_eq!(conn.covariant(2, 2), vec![-a1, 0.0, 0.0]);
        assert_eq!(conn.covariant(0, 1), vec![0.0, 0.0, -a2]);
        assert_eq!(conn.covariant(0, 2), vec![0.0, -a2, 0.0]);
        assert_eq!(conn.covariant(1, 0), vec![0.0, a1, 0.0]);
        assert_eq!(conn.covariant(2, 0), vec![0.0, 0.0, -a1]);
        assert_eq!(conn.covariant(1, 2), vec![0.0; 3]);
        assert_eq!(conn.covariant(2, 1), vec![0.0; 3]);
    }

    #[test]
    fn family_structure_tensor() {
        let (a1, a2) = (0.75, 2.0);
        let spec = lie_family(1, &[a1, a2]).unwrap();
        let conn = koszul_connection(&spec).unwrap();
        let f = structure_tensor_from_connection(&spec, &conn).unwrap();
        let mut expected = Tensor3::zeros(3);
        expected[(0, 1, 1)] = -2.0 * a2;
        expected[(0, 2, 2)] = -2.0 * a2;
        expected[(1, 0, 2)] = a1;
        expected[(1, 2, 0)] = a1;
        expected[(2, 0, 1)] = -a1;
        expected[(2, 1, 0)] = -a1;
        assert!(f.max_abs_diff(&expected) <= 1e-12);
        let flat = lie_family(1, &[0.0, 0.0]).unwrap();
        let f0 =
            structure_tensor_from_connection(&flat, &koszul_connection(&flat).unwrap()).unwrap();
        assert_eq!(f0.max_abs(), 0.0);
    }

    #[test]
    fn connection_is_levi_civita_for_random_specs() {
        let mut rng = crate::seeded_rng(12);
        for trial in 0..20 {
            let n = 1 + trial % 3;
            let s = crate::structure::random_structure(n, trial as u64).unwrap();
            let d = s.dim();
            let mut brackets = Vec::new();
            for i in 0..d {
                for j in (i + 1)..d {
                    brackets.push((i, j, (0..d).map(|_| rng.random_range(-2.0..=2.0)).collect()));
                }
            }
            let spec = LieAlgebraSpec::from_brackets(s.clone(), &brackets).unwrap();
            let conn = koszul_connection(&spec).unwrap();
            assert!(
                conn.torsion_residual(&spec) <= 1e-12 * 10.0,
                "trial {trial}"
            );
            assert!(conn.metric_residual(&spec) <= 1e-12 * 10.0, "trial {trial}");
            let f = structure_tensor_from_connection(&spec, &conn).unwrap();
            assert!(
                is_in_f(&s, &f, 1e-9 * f.max_abs().max(1.0)).unwrap(),
                "trial {trial}"
            );
        }
    }
}
