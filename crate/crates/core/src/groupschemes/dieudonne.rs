//! p-torsion Dieudonné modules over a finite field.
//!
//! `F` acts by `x ↦ F·x^{(p)}` and `V` by `x ↦ V·x^{(1/p)}`, where the
//! superscript twists each coordinate. Composites pick up twisted matrices:
//! `F∘V = F·V^{(p)}`, `V∘F = V·F^{(1/p)}`, and `F^e = F·F^{(p)}⋯F^{(p^{e-1})}`.
//!
//! Convention: `α_p = (k, 0, 0)`; the étale datum `Z/p` has `F` bijective
//! and the multiplicative datum `μ_p` has `V` bijective.

use crate::algebra::{FiniteField, Matrix};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct DieudonneModule<K: FiniteField> {
    f: Matrix<K>,
    v: Matrix<K>,
}

/// Entrywise Frobenius.
pub fn twist<K: FiniteField>(m: &Matrix<K>) -> Matrix<K> {
    m.map(m.ctx(), |x| x.frobenius())
}

/// Entrywise p-th root.
pub fn untwist<K: FiniteField>(m: &Matrix<K>) -> Matrix<K> {
    m.map(m.ctx(), |x| x.pth_root())
}

fn twist_vec<K: FiniteField>(v: &[K]) -> Vec<K> {
    v.iter().map(|x| x.frobenius()).collect()
}

fn untwist_vec<K: FiniteField>(v: &[K]) -> Vec<K> {
    v.iter().map(|x| x.pth_root()).collect()
}

impl<K: FiniteField> DieudonneModule<K> {
    pub fn new(f: Matrix<K>, v: Matrix<K>) -> Result<Self> {
        let n = f.rows();
        if f.cols() != n || v.rows() != n || v.cols() != n {
            return Err(Error::ShapeMismatch {
                rows: v.rows(),
                cols: v.cols(),
            });
        }
        let m = DieudonneModule { f, v };
        if !m.fv_is_zero() || !m.vf_is_zero() {
            return Err(Error::FvNotZero);
        }
        Ok(m)
    }

    pub fn alpha_p(ctx: &K::Ctx) -> Self {
        DieudonneModule {
            f: Matrix::zeros(ctx, 1, 1),
            v: Matrix::zeros(ctx, 1, 1),
        }
    }

    pub fn mu_p(ctx: &K::Ctx) -> Self {
        DieudonneModule {
            f: Matrix::zeros(ctx, 1, 1),
            v: Matrix::identity(ctx, 1),
        }
    }

    pub fn constant_p(ctx: &K::Ctx) -> Self {
        DieudonneModule {
            f: Matrix::identity(ctx, 1),
            v: Matrix::zeros(ctx, 1, 1),
        }
    }

    pub fn dim(&self) -> usize {
        self.f.rows()
    }

    pub fn f_matrix(&self) -> &Matrix<K> {
        &self.f
    }

    pub fn v_matrix(&self) -> &Matrix<K> {
        &self.v
    }

    pub fn apply_f(&self, x: &[K]) -> Vec<K> {
        self.f.mul_vec(&twist_vec(x))
    }

    pub fn apply_v(&self, x: &[K]) -> Vec<K> {
        self.v.mul_vec(&untwist_vec(x))
    }

    fn fv_is_zero(&self) -> bool {
        self.f.mul(&twist(&self.v)).is_zero()
    }

    fn vf_is_zero(&self) -> bool {
        self.v.mul(&untwist(&self.f)).is_zero()
    }

    /// Matrix of `F^e`, acting on `x^{(p^e)}`.
    pub fn f_power(&self, e: usize) -> Matrix<K> {
        let mut acc = Matrix::identity(self.f.ctx(), self.dim());
        let mut cur = self.f.clone();
        for _ in 0..e {
            acc = acc.mul(&cur);
            cur = twist(&cur);
        }
        acc
    }

    /// Matrix of `V^e`, acting on `x^{(p^{-e})}`.
    pub fn v_power(&self, e: usize) -> Matrix<K> {
        let mut acc = Matrix::identity(self.v.ctx(), self.dim());
        let mut cur = self.v.clone();
        for _ in 0..e {
            acc = acc.mul(&cur);
            cur = untwist(&cur);
        }
        acc
    }

    /// Basis of `ker F = (ker F)^{(1/p)}` as a subspace.
    pub fn ker_f(&self) -> Vec<Vec<K>> {
        self.f.kernel().iter().map(|b| untwist_vec(b)).collect()
    }

    /// Basis of `ker V = (ker V)^{(p)}`.
    pub fn ker_v(&self) -> Vec<Vec<K>> {
        self.v.kernel().iter().map(|b| twist_vec(b)).collect()
    }

    /// Reduced basis of `ker F ∩ ker V`.
    pub fn ker_f_cap_ker_v(&self) -> Vec<Vec<K>> {
        let ctx = self.f.ctx().clone();
        let n = self.dim();
        let (a, b) = (self.ker_f(), self.ker_v());
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let am = Matrix::from_cols(&ctx, n, &a);
        let neg_b: Vec<Vec<K>> = b.iter().map(|v| v.iter().map(|x| -*x).collect()).collect();
        let stacked = am.hstack(&Matrix::from_cols(&ctx, n, &neg_b));
        let vecs: Vec<Vec<K>> = stacked
            .kernel()
            .iter()
            .map(|sol| am.mul_vec(&sol[..a.len()]))
            .collect();
        if vecs.is_empty() {
            return Vec::new();
        }
        Matrix::from_rows(&ctx, vecs).row_space_basis()
    }

    /// `F` and `V` are both nilpotent.
    pub fn local_local_test(&self) -> bool {
        let n = self.dim();
        self.f_power(n).is_zero() && self.v_power(n).is_zero()
    }

    /// Full flag `0 ⊂ M_1 ⊂ ⋯ ⊂ M_n = M` whose graded pieces are copies of
    /// `α_p`, each step taking the first reduced basis vector of
    /// `ker F ∩ ker V` of the current quotient. Returns reduced bases.
    pub fn alpha_filtration(&self) -> Result<Vec<Vec<Vec<K>>>> {
        let ctx = self.f.ctx().clone();
        let n = self.dim();
        let mut lifts: Vec<Vec<K>> = Vec::new();
        // columns of `frame` are lifts of the current quotient's basis
        let mut frame = Matrix::identity(&ctx, n);
        let mut cur = self.clone();
        let mut flag = Vec::new();
        while cur.dim() > 0 {
            let nvec = cur
                .ker_f_cap_ker_v()
                .into_iter()
                .next()
                .ok_or(Error::NotLocalLocal)?;
            lifts.push(frame.mul_vec(&nvec));
            flag.push(Matrix::from_rows(&ctx, lifts.clone()).row_space_basis());
            let d = cur.dim();
            let pivot = nvec.iter().position(|x| !x.is_zero()).unwrap();
            let mut cols = vec![nvec.clone()];
            for i in (0..d).filter(|&i| i != pivot) {
                cols.push(
                    (0..d)
                        .map(|k| {
                            if k == i {
                                K::one_in(&ctx)
                            } else {
                                K::zero_in(&ctx)
                            }
                        })
                        .collect(),
                );
            }
            let p = Matrix::from_cols(&ctx, d, &cols);
            let pinv = p.inverse().expect("pivot completion is invertible");
            let f2 = pinv.mul(&cur.f).mul(&twist(&p));
            let v2 = pinv.mul(&cur.v).mul(&untwist(&p));
            let rest: Vec<usize> = (1..d).collect();
            let block = |m: &Matrix<K>| {
                Matrix::from_rows(
                    &ctx,
                    rest.iter()
                        .map(|&i| rest.iter().map(|&j| *m.get(i, j)).collect())
                        .collect(),
                )
            };
            frame = frame.mul(&p).select_cols(&rest);
            cur = DieudonneModule {
                f: block(&f2),
                v: block(&v2),
            };
        }
        Ok(flag)
    }
}
