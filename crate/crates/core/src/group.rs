//! The structure group `𝒢 = O(n; ℂ) × 1` and its representation `λ` on tensors.
//!
//! In the ξ-first φ-basis an element is `diag(1, [[A, B], [−B, A]])` with
//! `AᵀA − BᵀB = Iₙ` and `BᵀA + AᵀB = 0`, i.e. `A − iB` is complex orthogonal.
//! The customary layout puts `ξ` last; [`to_xi_last`] performs that permutation.

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::structure::{canonical_structure, StructureData};
use crate::tensor::Tensor3;

/// Tolerance for the self-check of freshly generated elements.
const GENERATION_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    a: DMatrix<f64>,
    a_inv: DMatrix<f64>,
    block_a: DMatrix<f64>,
    block_b: DMatrix<f64>,
}

impl GroupElement {
    /// Assembles `diag(1, [[A, B], [−B, A]])` in the ξ-first basis and checks the
    /// block conditions.
    pub fn from_blocks(block_a: DMatrix<f64>, block_b: DMatrix<f64>) -> Result<Self> {
        let n = block_a.nrows();
        if n == 0 || block_a.shape() != (n, n) || block_b.shape() != (n, n) {
            return Err(Error::InvalidArgument(
                "blocks must be non-empty n x n matrices".into(),
            ));
        }
        let a = assemble(&block_a, &block_b);
        let a_inv = a
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidArgument("block matrix is singular".into()))?;
        let el = Self {
            a,
            a_inv,
            block_a,
            block_b,
        };
        let r = block_residual(&el.block_a, &el.block_b);
        if r > GENERATION_TOL {
            return Err(Error::InvalidArgument(format!(
                "blocks violate A^T A - B^T B = I, B^T A + A^T B = 0 (residual {r:e})"
            )));
        }
        Ok(el)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_blocks(DMatrix::identity(n, n), DMatrix::zeros(n, n))
    }

    /// The element with `A = −Iₙ`, `B = 0`, outside the identity component
    /// when `n` is odd.
    pub fn reflection(n: usize) -> Result<Self> {
        Self::from_blocks(-DMatrix::<f64>::identity(n, n), DMatrix::zeros(n, n))
    }

    pub fn n(&self) -> usize {
        self.block_a.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn inverse_matrix(&self) -> &DMatrix<f64> {
        &self.a_inv
    }

    pub fn blocks(&self) -> (&DMatrix<f64>, &DMatrix<f64>) {
        (&self.block_a, &self.block_b)
    }

    /// Group product `self · other`.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        let n = self.n();
        Error::check_dim(n, other.n())?;
        let prod = &self.a * &other.a;
        Self::from_blocks(
            prod.view((1, 1), (n, n)).into_owned(),
            prod.view((1, n + 1), (n, n)).into_owned(),
        )
    }
}

fn assemble(block_a: &DMatrix<f64>, block_b: &DMatrix<f64>) -> DMatrix<f64> {
    let n = block_a.nrows();
    let mut a = DMatrix::zeros(2 * n + 1, 2 * n + 1);
    a[(0, 0)] = 1.0;
    a.view_mut((1, 1), (n, n)).copy_from(block_a);
    a.view_mut((1, n + 1), (n, n)).copy_from(block_b);
    a.view_mut((n + 1, 1), (n, n)).copy_from(&(-block_b));
    a.view_mut((n + 1, n + 1), (n, n)).copy_from(block_a);
    a
}

fn block_residual(block_a: &DMatrix<f64>, block_b: &DMatrix<f64>) -> f64 {
    let n = block_a.nrows();
    let first =
        block_a.transpose() * block_a - block_b.transpose() * block_b - DMatrix::identity(n, n);
    let second = block_b.transpose() * block_a + block_a.transpose() * block_b;
    first.amax().max(second.amax())
}

/// Moves index 0 (`ξ`) to the last position: `Pᵀ a P`.
pub fn to_xi_last(a: &DMatrix<f64>) -> DMatrix<f64> {
    let d = a.nrows();
    let perm = |i: usize| (i + 1) % d;
    DMatrix::from_fn(d, d, |i, j| a[(perm(i), perm(j))])
}

fn random_skew(n: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    let mut k = DMatrix::zeros(n, n);
    let scale = 1.0 / n as f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let v = rng.random_range(-1.0..=1.0) * scale;
            k[(i, j)] = v;
            k[(j, i)] = -v;
        }
    }
    k
}

/// Seeded element of the identity component of `𝒢`.
///
/// Draws skew-symmetric `K₁, K₂` and exponentiates the real form
/// `[[K₁, −K₂], [K₂, K₁]]` of `K₁ + iK₂`. The result is self-checked before
/// being returned.
pub fn random_group_element(n: usize, seed: u64) -> Result<GroupElement> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "contact rank n must be at least 1".into(),
        ));
    }
    let mut rng = crate::seeded_rng(seed);
    let k1 = random_skew(n, &mut rng);
    let k2 = random_skew(n, &mut rng);
    let mut gen = DMatrix::zeros(2 * n, 2 * n);
    gen.view_mut((0, 0), (n, n)).copy_from(&k1);
    gen.view_mut((0, n), (n, n)).copy_from(&(-&k2));
    gen.view_mut((n, 0), (n, n)).copy_from(&k2);
    gen.view_mut((n, n), (n, n)).copy_from(&k1);
    let e = gen.exp();
    let el = GroupElement::from_blocks(
        e.view((0, 0), (n, n)).into_owned(),
        e.view((0, n), (n, n)).into_owned(),
    )
    .map_err(|err| Error::Internal(format!("generated group element is invalid: {err}")))?;
    let s = canonical_structure(n)?;
    if !validate_group_element(&s, el.matrix(), GENERATION_TOL)? {
        return Err(Error::Internal(
            "generated group element fails validation".into(),
        ));
    }
    Ok(el)
}

/// Checks `aξ = ξ`, `η∘a = η`, `aφ = φa` and `g(ax, ay) = g(x, y)`; for the
/// canonical structure also the block form in the ξ-last layout.
pub fn validate_group_element(s: &StructureData, a: &DMatrix<f64>, tol: f64) -> Result<bool> {
    let d = s.dim();
    if a.shape() != (d, d) {
        return Err(Error::InvalidArgument(format!(
            "group element must be {d}x{d}, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let fixes_xi = (a * s.xi() - s.xi()).amax();
    let keeps_eta = (a.transpose() * s.eta() - s.eta()).amax();
    let commutes = (a * s.phi() - s.phi() * a).amax();
    let isometry = (a.transpose() * s.g() * a - s.g()).amax();
    let mut worst = fixes_xi.max(keeps_eta).max(commutes).max(isometry);
    if s.is_canonical(0.0) {
        worst = worst.max(xi_last_block_residual(a, s.n()));
    }
    Ok(worst <= tol)
}

/// Residual of the block pattern `[[A, B, 0], [−B, A, 0], [0, 0, 1]]` and of
/// the two block conditions.
fn xi_last_block_residual(a: &DMatrix<f64>, n: usize) -> f64 {
    let p = to_xi_last(a);
    let block = |r: usize, c: usize| p.view((r * n, c * n), (n, n)).into_owned();
    let (aa, bb) = (block(0, 0), block(0, 1));
    let pattern = (block(1, 0) + &bb).amax().max((block(1, 1) - &aa).amax());
    let last = 2 * n;
    let border = (0..last)
        .map(|i| p[(i, last)].abs().max(p[(last, i)].abs()))
        .fold((p[(last, last)] - 1.0).abs(), f64::max);
    pattern.max(border).max(block_residual(&aa, &bb))
}

/// `((λa)F)(x,y,z) = F(a⁻¹x, a⁻¹y, a⁻¹z)`.
pub fn act(s: &StructureData, a: &GroupElement, f: &Tensor3) -> Result<Tensor3> {
    Error::check_dim(s.dim(), f.dim())?;
    Error::check_dim(s.dim(), a.matrix().nrows())?;
    let inv = a.inverse_matrix();
    Ok(f.pullback(inv, inv, inv))
}
