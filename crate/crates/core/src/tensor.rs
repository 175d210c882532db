//! Dense covariant rank-3 tensors over a fixed basis.

use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// A `(0,3)`-tensor stored by components `T(e_i, e_j, e_k)`, row-major with
/// `i` outermost.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3 {
    dim: usize,
    comps: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            comps: vec![0.0; dim * dim * dim],
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut comps = Vec::with_capacity(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    comps.push(f(i, j, k));
                }
            }
        }
        Self { dim, comps }
    }

    /// Builds a tensor from a flat row-major component array of length `dim³`.
    pub fn from_vec(dim: usize, comps: Vec<f64>) -> Result<Self> {
        Error::check_dim(dim * dim * dim, comps.len())?;
        if let Some(pos) = comps.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite tensor component at flat index {pos}"
            )));
        }
        Ok(Self { dim, comps })
    }

    /// Tensor with a single nonzero component.
    pub fn unit(dim: usize, i: usize, j: usize, k: usize) -> Self {
        let mut t = Self::zeros(dim);
        t[(i, j, k)] = 1.0;
        t
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn comps(&self) -> &[f64] {
        &self.comps
    }

    pub fn into_comps(self) -> Vec<f64> {
        self.comps
    }

    #[inline]
    fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.comps[self.offset(i, j, k)]
    }

    /// Largest absolute component; the magnitude used throughout the crate.
    pub fn max_abs(&self) -> f64 {
        self.comps.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn max_abs_diff(&self, other: &Tensor3) -> f64 {
        assert_eq!(self.dim, other.dim, "tensor dimensions differ");
        self.comps
            .iter()
            .zip(&other.comps)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn scale(&self, s: f64) -> Tensor3 {
        Tensor3 {
            dim: self.dim,
            comps: self.comps.iter().map(|c| c * s).collect(),
        }
    }

    /// `T'(x, y, z) = T(a x, b y, c z)`.
    pub fn pullback(&self, a: &DMatrix<f64>, b: &DMatrix<f64>, c: &DMatrix<f64>) -> Tensor3 {
        let d = self.dim;
        // one mode at a time keeps this O(d⁴)
        let mut t1 = Tensor3::zeros(d);
        for m in 0..d {
            for j in 0..d {
                for p in 0..d {
                    let v = self.get(m, j, p);
                    if v == 0.0 {
                        continue;
                    }
                    for i in 0..d {
                        t1[(i, j, p)] += a[(m, i)] * v;
                    }
                }
            }
        }
        let mut t2 = Tensor3::zeros(d);
        for i in 0..d {
            for n in 0..d {
                for p in 0..d {
                    let v = t1.get(i, n, p);
                    if v == 0.0 {
                        continue;
                    }
                    for j in 0..d {
                        t2[(i, j, p)] += b[(n, j)] * v;
                    }
                }
            }
        }
        let mut t3 = Tensor3::zeros(d);
        for i in 0..d {
            for j in 0..d {
                for p in 0..d {
                    let v = t2.get(i, j, p);
                    if v == 0.0 {
                        continue;
                    }
                    for k in 0..d {
                        t3[(i, j, k)] += c[(p, k)] * v;
                    }
                }
            }
        }
        t3
    }

    /// Reorders the arguments: `T'(x₀, x₁, x₂) = T(x_{order[0]}, x_{order[1]}, x_{order[2]})`.
    ///
    /// `[1, 2, 0]` gives `(x, y, z) ↦ T(y, z, x)`.
    pub fn permuted(&self, order: [usize; 3]) -> Tensor3 {
        Tensor3::from_fn(self.dim, |i, j, k| {
            let idx = [i, j, k];
            self.get(idx[order[0]], idx[order[1]], idx[order[2]])
        })
    }

    /// Contracts slot `slot` (0, 1 or 2) with the vector `v`; the remaining two
    /// slots keep their relative order.
    pub fn contract_slot(&self, slot: usize, v: &DVector<f64>) -> DMatrix<f64> {
        let d = self.dim;
        assert!(slot < 3, "slot index out of range");
        DMatrix::from_fn(d, d, |a, b| {
            (0..d)
                .map(|m| {
                    let t = match slot {
                        0 => self.get(m, a, b),
                        1 => self.get(a, m, b),
                        _ => self.get(a, b, m),
                    };
                    v[m] * t
                })
                .sum()
        })
    }

    /// Symmetrization in the last two slots.
    pub fn symmetrize_last_two(&self) -> Tensor3 {
        Tensor3::from_fn(self.dim, |i, j, k| {
            0.5 * (self.get(i, j, k) + self.get(i, k, j))
        })
    }
}

impl std::ops::Index<(usize, usize, usize)> for Tensor3 {
    type Output = f64;

    fn index(&self, (i, j, k): (usize, usize, usize)) -> &f64 {
        &self.comps[self.offset(i, j, k)]
    }
}

impl std::ops::IndexMut<(usize, usize, usize)> for Tensor3 {
    fn index_mut(&mut self, (i, j, k): (usize, usize, usize)) -> &mut f64 {
        let o = self.offset(i, j, k);
        &mut self.comps[o]
    }
}

impl AddAssign<&Tensor3> for Tensor3 {
    fn add_assign(&mut self, rhs: &Tensor3) {
        assert_eq!(self.dim, rhs.dim, "tensor dimensions differ");
        for (a, b) in self.comps.iter_mut().zip(&rhs.comps) {
            *a += b;
        }
    }
}

impl Add<&Tensor3> for &Tensor3 {
    type Output = Tensor3;

    fn add(self, rhs: &Tensor3) -> Tensor3 {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Tensor3 {
    type Output = Tensor3;

    fn add(mut self, rhs: Tensor3) -> Tensor3 {
        self += &rhs;
        self
    }
}

impl Sub<&Tensor3> for &Tensor3 {
    type Output = Tensor3;

    fn sub(self, rhs: &Tensor3) -> Tensor3 {
        assert_eq!(self.dim, rhs.dim, "tensor dimensions differ");
        Tensor3 {
            dim: self.dim,
            comps: self
                .comps
                .iter()
                .zip(&rhs.comps)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Sub for Tensor3 {
    type Output = Tensor3;

    fn sub(self, rhs: Tensor3) -> Tensor3 {
        &self - &rhs
    }
}

impl Neg for &Tensor3 {
    type Output = Tensor3;

    fn neg(self) -> Tensor3 {
        self.scale(-1.0)
    }
}

impl Mul<&Tensor3> for f64 {
    type Output = Tensor3;

    fn mul(self, rhs: &Tensor3) -> Tensor3 {
        rhs.scale(self)
    }
}

impl<'a> Sum<&'a Tensor3> for Option<Tensor3> {
    fn sum<I: Iterator<Item = &'a Tensor3>>(iter: I) -> Self {
        iter.fold(None, |acc, t| match acc {
            None => Some(t.clone()),
            Some(mut s) => {
                s += t;
                Some(s)
            }
        })
    }
}
