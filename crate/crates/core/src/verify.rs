//! Seeded property suites, run by `acbm verify`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::decomposition::{
    class_residual, classify, component, decompose, project_w, NUM_CLASSES,
};
use crate::error::Result;
use crate::fspace::{f_space_residual, inner_product, lee_forms, random_f};
use crate::group::{act, random_group_element, validate_group_element};
use crate::models::{
    check_jacobi, dim3_component, dim3_consistency_residual, dim3_lee, koszul_connection,
    lie_family, sphere_f, structure_tensor_from_connection, LieAlgebraSpec,
};
use crate::structure::{canonical_structure, random_structure, StructureData};
use crate::tensor::Tensor3;
use crate::{seeded_rng, ABS_FLOOR, ABS_TOL, REL_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Decomposition,
    Group,
    Models,
    Dim3,
}

/// Outcome of one property over all seeds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Worst residual seen (already normalised where the property is relative).
    pub worst: f64,
    pub tol: f64,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub suite: Suite,
    pub seeds: u64,
    pub checks: Vec<Check>,
}

impl Summary {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(
                f,
                "{}  {:<36} worst {:.3e}  tol {:.0e}  ({} samples)",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.worst,
                c.tol,
                c.samples
            )?;
            if let Some(e) = &c.error {
                write!(f, "  error: {e}")?;
            }
            writeln!(f)?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

/// Runs `residual` for every seed and keeps the worst value. An error counts
/// as a failure and stops the check.
fn check(name: &str, tol: f64, seeds: u64, mut residual: impl FnMut(u64) -> Result<f64>) -> Check {
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    let mut error = None;
    for seed in 0..seeds {
        match residual(seed) {
            Ok(r) => {
                samples += 1;
                worst = if r.is_nan() { f64::NAN } else { worst.max(r) };
            }
            Err(e) => {
                error = Some(e.to_string());
                break;
            }
        }
        if worst.is_nan() {
            break;
        }
    }
    Check {
        name: name.to_owned(),
        passed: error.is_none() && worst <= tol,
        worst,
        tol,
        samples,
        error,
    }
}

fn rel(abs: f64, scale: f64) -> f64 {
    abs / scale.abs().max(1.0)
}

/// Dims 3, 5, 7 in turn, on a random structure.
fn sample(seed: u64) -> Result<(StructureData, Tensor3)> {
    let n = 1 + (seed % 3) as usize;
    let s = random_structure(n, seed)?;
    let f = random_f(&s, seed.wrapping_add(10_000));
    Ok((s, f))
}

pub fn run(suite: Suite, seeds: u64) -> Summary {
    let mut checks = Vec::new();
    if matches!(suite, Suite::All | Suite::Decomposition) {
        checks.extend(decomposition_checks(seeds));
    }
    if matches!(suite, Suite::All | Suite::Group) {
        checks.extend(group_checks(seeds));
    }
    if matches!(suite, Suite::All | Suite::Models) {
        checks.extend(model_checks(seeds));
    }
    if matches!(suite, Suite::All | Suite::Dim3) {
        checks.extend(dim3_checks(seeds));
    }
    Summary {
        suite,
        seeds,
        checks,
    }
}

fn decomposition_checks(seeds: u64) -> Vec<Check> {
    vec![
        check("reconstruction", REL_TOL, seeds, |seed| {
            let (s, f) = sample(seed)?;
            let d = decompose(&s, &f)?;
            Ok(rel(d.reconstruction_residual, f.max_abs()))
        }),
        check("orthogonality", REL_TOL, seeds, |seed| {
            let (s, f) = sample(seed)?;
            let d = decompose(&s, &f)?;
            let norm = inner_product(&s, &f, &f)?;
            let mut worst: f64 = 0.0;
            for i in 1..=NUM_CLASSES {
                for j in (i + 1)..=NUM_CLASSES {
                    worst = worst.max(inner_product(&s, d.get(i), d.get(j))?.abs());
                }
            }
            Ok(rel(worst, norm))
        }),
        check("idempotency", REL_TOL, seeds, |seed| {
            let (s, f) = sample(seed)?;
            let mut worst: f64 = 0.0;
            for i in 1..=4 {
                let p = project_w(&s, &f, i)?;
                worst = worst.max(project_w(&s, &p, i)?.max_abs_diff(&p));
            }
            for i in 1..=NUM_CLASSES {
                let c = component(&s, &f, i)?;
                worst = worst.max(component(&s, &c, i)?.max_abs_diff(&c));
            }
            Ok(rel(worst, f.max_abs()))
        }),
        check("projector sum", REL_TOL, seeds, |seed| {
            let (s, f) = sample(seed)?;
            let mut sum = Tensor3::zeros(f.dim());
            for i in 1..=4 {
                sum += &project_w(&s, &f, i)?;
            }
            Ok(rel(sum.max_abs_diff(&f), f.max_abs()))
        }),
        check("self-adjointness", REL_TOL, seeds, |seed| {
            let (s, f) = sample(seed)?;
            let f2 = random_f(&s, seed.wrapping_add(20_000));
            let scale = inner_product(&s, &f, &f)?
                .abs()
                .max(inner_product(&s, &f2, &f2)?.abs());
            let mut worst: f64 = 0.0;
            for i in 1..=4 {
                let a = inner_product(&s, &project_w(&s, &f, i)?, &f2)?;
                let b = inner_product(&s, &f, &project_w(&s, &f2, i)?)?;
                worst = worst.max((a - b).abs());
            }
            Ok(rel(worst, scale))
        }),
        check("class predicates", REL_TOL, seeds, |seed| {
            let (s, f) = sample(seed)?;
            let d = decompose(&s, &f)?;
            let mut worst: f64 = 0.0;
            for i in 1..=NUM_CLASSES {
                worst = worst
                    .max(class_residual(&s, d.get(i), i)?)
                    .max(f_space_residual(&s, d.get(i))?.max());
            }
            Ok(rel(worst, f.max_abs()))
        }),
        check("lee identities", REL_TOL, seeds, |seed| {
            let (s, f) = sample(seed)?;
            let lee = lee_forms(&s, &f)?;
            let omega_xi = lee.omega.dot(s.xi()).abs();
            let phi_rel =
                (s.phi().transpose() * &lee.theta_star + s.phi2().transpose() * &lee.theta).amax();
            Ok(rel(omega_xi.max(phi_rel), f.max_abs()))
        }),
        check("lee vanishing table", REL_TOL, seeds, |seed| {
            let (s, f) = sample(seed)?;
            Ok(rel(lee_table_residual(&s, &f)?, f.max_abs()))
        }),
    ]
}

/// Worst violation of: `p₁` has `θ(ξ) = θ*(ξ) = ω = 0`; `p₂` has
/// `θ∘h = θ*∘h = ω = 0`; `p₃` has `θ = θ* = ω = 0`; `p₄` has `θ = θ* = 0`.
pub fn lee_table_residual(s: &StructureData, f: &Tensor3) -> Result<f64> {
    let h = s.h_matrix();
    let mut worst: f64 = 0.0;
    for i in 1..=4 {
        let lee = lee_forms(s, &project_w(s, f, i)?)?;
        let vals = match i {
            1 => vec![lee.theta_xi(s), lee.theta_star_xi(s), lee.omega.amax()],
            2 => vec![
                (h.transpose() * &lee.theta).amax(),
                (h.transpose() * &lee.theta_star).amax(),
                lee.omega.amax(),
            ],
            3 => vec![lee.theta.amax(), lee.theta_star.amax(), lee.omega.amax()],
            _ => vec![lee.theta.amax(), lee.theta_star.amax()],
        };
        worst = vals.into_iter().fold(worst, |m, v| m.max(v.abs()));
    }
    Ok(worst)
}

fn group_checks(seeds: u64) -> Vec<Check> {
    let n = 2;
    let setup = move |seed: u64| -> Result<_> {
        let s = canonical_structure(n)?;
        let a = random_group_element(n, seed)?;
        let f = random_f(&s, seed.wrapping_add(30_000));
        Ok((s, a, f))
    };
    vec![
        check("group element validity", 0.0, seeds, |seed| {
            let (s, a, _) = setup(seed)?;
            Ok(if validate_group_element(&s, a.matrix(), 1e-9)? {
                0.0
            } else {
                1.0
            })
        }),
        check("p_i equivariance", REL_TOL, seeds, |seed| {
            let (s, a, f) = setup(seed)?;
            let moved = act(&s, &a, &f)?;
            let mut worst: f64 = 0.0;
            for i in 1..=4 {
                let lhs = project_w(&s, &moved, i)?;
                let rhs = act(&s, &a, &project_w(&s, &f, i)?)?;
                worst = worst.max(lhs.max_abs_diff(&rhs));
            }
            Ok(rel(worst, f.max_abs()))
        }),
        check("component equivariance", REL_TOL, seeds, |seed| {
            let (s, a, f) = setup(seed)?;
            let moved = act(&s, &a, &f)?;
            let mut worst: f64 = 0.0;
            for i in 1..=NUM_CLASSES {
                let lhs = component(&s, &moved, i)?;
                let rhs = act(&s, &a, &component(&s, &f, i)?)?;
                worst = worst.max(lhs.max_abs_diff(&rhs));
            }
            Ok(rel(worst, f.max_abs()))
        }),
        check("inner product invariance", REL_TOL, seeds, |seed| {
            let (s, a, f) = setup(seed)?;
            let f2 = random_f(&s, seed.wrapping_add(40_000));
            let before = inner_product(&s, &f, &f2)?;
            let after = inner_product(&s, &act(&s, &a, &f)?, &act(&s, &a, &f2)?)?;
            Ok(rel((after - before).abs(), before))
        }),
        check("representation homomorphism", REL_TOL, seeds, |seed| {
            let (s, a, f) = setup(seed)?;
            let b = random_group_element(n, seed.wrapping_add(50_000))?;
            let lhs = act(&s, &a.compose(&b)?, &f)?;
            let rhs = act(&s, &a, &act(&s, &b, &f)?)?;
            Ok(rel(lhs.max_abs_diff(&rhs), f.max_abs()))
        }),
    ]
}

/// Parameters for the Lie family with a zero pattern cycling through
/// `(≠0, ≠0)`, `(0, ≠0)`, `(≠0, 0)` and `(0, 0)`.
fn family_params(seed: u64) -> (f64, f64) {
    let mut rng = seeded_rng(seed.wrapping_add(60_000));
    let mut draw = || {
        let v: f64 = rng.random_range(0.25..=2.0);
        if rng.random_bool(0.5) {
            -v
        } else {
            v
        }
    };
    let (a1, a2) = (draw(), draw());
    match seed % 4 {
        0 => (a1, a2),
        1 => (0.0, a2),
        2 => (a1, 0.0),
        _ => (0.0, 0.0),
    }
}

fn random_spec(seed: u64) -> Result<LieAlgebraSpec> {
    let n = 1 + (seed % 3) as usize;
    let s = random_structure(n, seed.wrapping_add(70_000))?;
    let d = s.dim();
    let mut rng = seeded_rng(seed.wrapping_add(80_000));
    let mut brackets = Vec::new();
    for i in 0..d {
        for j in (i + 1)..d {
            brackets.push((i, j, (0..d).map(|_| rng.random_range(-2.0..=2.0)).collect()));
        }
    }
    LieAlgebraSpec::from_brackets(s, &brackets)
}

fn model_checks(seeds: u64) -> Vec<Check> {
    vec![
        check("lie family jacobi", 0.0, seeds, |seed| {
            let n = 1 + (seed % 2) as usize;
            let mut rng = seeded_rng(seed);
            let a: Vec<f64> = (0..2 * n).map(|_| rng.random_range(-2.0..=2.0)).collect();
            Ok(if check_jacobi(&lie_family(n, &a)?, ABS_TOL)? {
                0.0
            } else {
                1.0
            })
        }),
        check("lie family connection", ABS_TOL, seeds, |seed| {
            let (a1, a2) = family_params(seed);
            let spec = lie_family(1, &[a1, a2])?;
            let conn = koszul_connection(&spec)?;
            let expected: [((usize, usize), [f64; 3]); 6] = [
                ((1, 1), [-a1, 0.0, 0.0]),
                ((2, 2), [-a1, 0.0, 0.0]),
                ((0, 1), [0.0, 0.0, -a2]),
                ((0, 2), [0.0, -a2, 0.0]),
                ((1, 0), [0.0, a1, 0.0]),
                ((2, 0), [0.0, 0.0, -a1]),
            ];
            let mut worst: f64 = 0.0;
            for ((i, j), v) in expected {
                for (k, e) in v.iter().enumerate() {
                    worst = worst.max((conn.gamma(i, j, k) - e).abs());
                }
            }
            Ok(worst)
        }),
        check("lie family structure tensor", ABS_TOL, seeds, |seed| {
            let (a1, a2) = family_params(seed);
            let spec = lie_family(1, &[a1, a2])?;
            let f = structure_tensor_from_connection(&spec, &koszul_connection(&spec)?)?;
            let mut expected = Tensor3::zeros(3);
            expected[(0, 1, 1)] = -2.0 * a2;
            expected[(0, 2, 2)] = -2.0 * a2;
            expected[(1, 0, 2)] = a1;
            expected[(1, 2, 0)] = a1;
            expected[(2, 0, 1)] = -a1;
            expected[(2, 1, 0)] = -a1;
            Ok(f.max_abs_diff(&expected))
        }),
        check("lie family classes", 0.0, seeds, |seed| {
            let (a1, a2) = family_params(seed);
            let spec = lie_family(1, &[a1, a2])?;
            let f = structure_tensor_from_connection(&spec, &koszul_connection(&spec)?)?;
            let report = classify(&spec.structure, &f, REL_TOL, ABS_FLOOR)?;
            let mut expected = Vec::new();
            if a1 != 0.0 {
                expected.push(9);
            }
            if a2 != 0.0 {
                expected.push(10);
            }
            Ok(if report.present == expected { 0.0 } else { 1.0 })
        }),
        check("koszul levi-civita", REL_TOL, seeds, |seed| {
            let spec = random_spec(seed)?;
            let conn = koszul_connection(&spec)?;
            let f = structure_tensor_from_connection(&spec, &conn)?;
            let in_f = f_space_residual(&spec.structure, &f)?.max();
            Ok(conn
                .torsion_residual(&spec)
                .max(conn.metric_residual(&spec))
                .max(rel(in_f, f.max_abs())))
        }),
        check("sphere lee values", ABS_TOL, seeds, |seed| {
            let n = 1 + (seed % 3) as usize;
            let t = seeded_rng(seed.wrapping_add(90_000)).random_range(-FRAC_PI_2..FRAC_PI_2);
            let (s, f) = sphere_f(n, t)?;
            let lee = lee_forms(&s, &f)?;
            let two_n = 2.0 * n as f64;
            Ok((lee.theta_xi(&s) - two_n * t.cos())
                .abs()
                .max((lee.theta_star_xi(&s) - two_n * t.sin()).abs()))
        }),
        check("sphere classes", 0.0, seeds, |seed| {
            let n = 1 + (seed % 3) as usize;
            let t = seeded_rng(seed.wrapping_add(90_000)).random_range(-FRAC_PI_2..FRAC_PI_2);
            let (s, f) = sphere_f(n, t)?;
            let report = classify(&s, &f, REL_TOL, ABS_FLOOR)?;
            Ok(if report.present.iter().all(|i| [4, 5].contains(i)) {
                0.0
            } else {
                1.0
            })
        }),
    ]
}

fn dim3_checks(seeds: u64) -> Vec<Check> {
    let sample3 = |seed: u64| -> Result<(StructureData, Tensor3)> {
        let s = canonical_structure(1)?;
        let f = random_f(&s, seed.wrapping_add(100_000));
        Ok((s, f))
    };
    vec![
        check("components 2,3,6,7 vanish", ABS_TOL, seeds, |seed| {
            let (s, f) = sample3(seed)?;
            let mut worst: f64 = 0.0;
            for i in [2, 3, 6, 7] {
                worst = worst.max(component(&s, &f, i)?.max_abs());
            }
            Ok(worst)
        }),
        check("fast path matches general", ABS_TOL, seeds, |seed| {
            let (s, f) = sample3(seed)?;
            let mut worst: f64 = 0.0;
            for i in 1..=NUM_CLASSES {
                worst = worst.max(component(&s, &f, i)?.max_abs_diff(&dim3_component(&f, i)?));
            }
            Ok(worst)
        }),
        check("dim3 lee forms", ABS_TOL, seeds, |seed| {
            let (s, f) = sample3(seed)?;
            let fast = dim3_lee(&f)?;
            let general = lee_forms(&s, &f)?;
            Ok((&fast.theta - &general.theta)
                .amax()
                .max((&fast.theta_star - &general.theta_star).amax())
                .max((&fast.omega - &general.omega).amax()))
        }),
        check("dim3 consistency equalities", ABS_TOL, seeds, |seed| {
            let (_, f) = sample3(seed)?;
            dim3_consistency_residual(&f)
        }),
    ]
}
