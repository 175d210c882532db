//! Point-wise structure-tensor machinery for almost contact B-metric manifolds.
//!
//! Everything here lives in a single tangent space `T_pM` of dimension `2n+1`,
//! equipped with an almost contact structure `(φ, ξ, η)` and a B-metric `g` of
//! signature `(n+1, n)`. The crate provides
//!
//! * [`structure`]: validation of the structure axioms, the canonical φ-basis,
//!   the associated metric and the horizontal/vertical projectors;
//! * [`fspace`]: rank-3 tensors, membership in the space `𝓕` of structure
//!   tensors, the induced inner product and the Lee forms `θ, θ*, ω`;
//! * [`decomposition`]: the projectors `p₁…p₄`, the involutions `L₁, L₂`, the
//!   eleven components `F₁…F₁₁`, the class predicates and the classifier;
//! * [`group`]: structure-group elements and the representation `λ`;
//! * [`models`]: the Lie-group family (via the Koszul formula), the time-like
//!   sphere, and the dimension-3 fast path;
//! * [`io`], [`verify`] and [`cli`]: file formats, property suites and the
//!   command-line front end.
//!
//! Basis convention: index 0 is `ξ`, indices `1..=n` are `e₁…eₙ` and
//! `n+1..=2n` are `φe₁…φeₙ`. Matrices act on column vectors, so `phi[(m, a)]`
//! is the `m`-th coordinate of `φ(e_a)`.

// `!(r <= tol)` is used on purpose so that NaN residuals count as failures
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod decomposition;
pub mod error;
pub mod fspace;
pub mod group;
pub mod io;
pub mod models;
pub mod structure;
pub mod tensor;
pub mod verify;

pub use decomposition::{
    class_predicate, classify, component, decompose, is_in_w, op_l, project_w, ClassReport,
    Decomposition,
};
pub use error::{Error, Result};
pub use fspace::{embed_into_f, inner_product, is_in_f, lee_forms, random_f, LeeForms};
pub use group::{act, random_group_element, validate_group_element, GroupElement};
pub use structure::{
    associated_metric, canonical_structure, h_project, v_project, validate_structure,
    StructureData, ValidationReport,
};
pub use tensor::Tensor3;

/// Absolute tolerance for algebraic identities on exactly representable inputs.
pub const ABS_TOL: f64 = 1e-12;

/// Relative tolerance used for everything that accumulates rounding.
pub const REL_TOL: f64 = 1e-9;

/// Absolute floor below which a tensor is treated as zero by the classifier.
pub const ABS_FLOOR: f64 = 1e-12;

/// Tolerance scaled to the magnitude of the data: `REL_TOL · max(1, scale)`.
pub(crate) fn scaled_tol(rel: f64, scale: f64) -> f64 {
    rel * scale.max(1.0)
}

/// Deterministic generator used for every seeded construction in the crate.
pub fn seeded_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}
