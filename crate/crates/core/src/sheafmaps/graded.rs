//! Morphisms between split bundles as matrices of binary forms.

use std::fmt;

use crate::algebra::{Field, FiniteField, Form, Matrix, RatFunc, RatMatrix};
use crate::bundles::SplitBundle;
use crate::error::{Error, Result};

/// A map `⊕ O(a_j) → ⊕ O(b_i)`. Entry `(i, j)` is a form of degree
/// `b_i - a_j`, or ZERO. The twist lists keep the order of the summands and
/// need not be sorted.
#[derive(Clone, PartialEq)]
pub struct GradedMatrix<K: Field> {
    ctx: K::Ctx,
    source: Vec<i64>,
    target: Vec<i64>,
    entries: Vec<Vec<Form<K>>>,
}

impl<K: Field> GradedMatrix<K> {
    pub fn new(
        ctx: &K::Ctx,
        source: Vec<i64>,
        target: Vec<i64>,
        entries: Vec<Vec<Form<K>>>,
    ) -> Result<Self> {
        let m = GradedMatrix {
            ctx: ctx.clone(),
            source,
            target,
            entries,
        };
        m.validate()?;
        Ok(m)
    }

    /// Without validation; [`GradedMatrix::validate`] reports any defect.
    pub fn from_raw(
        ctx: &K::Ctx,
        source: Vec<i64>,
        target: Vec<i64>,
        entries: Vec<Vec<Form<K>>>,
    ) -> Self {
        GradedMatrix {
            ctx: ctx.clone(),
            source,
            target,
            entries,
        }
    }

    pub fn zero(ctx: &K::Ctx, source: Vec<i64>, target: Vec<i64>) -> Self {
        let entries = vec![vec![Form::zero(); source.len()]; target.len()];
        GradedMatrix {
            ctx: ctx.clone(),
            source,
            target,
            entries,
        }
    }

    pub fn identity(ctx: &K::Ctx, twists: Vec<i64>) -> Self {
        let mut m = Self::zero(ctx, twists.clone(), twists);
        for i in 0..m.source.len() {
            m.entries[i][i] = Form::constant(K::one_in(ctx));
        }
        m
    }

    /// Matrix of constants between two copies of the same twist `a`.
    pub fn constant(ctx: &K::Ctx, a: i64, rows: &Matrix<K>) -> Self {
        let entries = (0..rows.rows())
            .map(|i| {
                (0..rows.cols())
                    .map(|j| Form::constant(rows.get(i, j).clone()))
                    .collect()
            })
            .collect();
        GradedMatrix {
            ctx: ctx.clone(),
            source: vec![a; rows.cols()],
            target: vec![a; rows.rows()],
            entries,
        }
    }

    /// Checks shape and every entry degree.
    pub fn validate(&self) -> Result<()> {
        if self.entries.len() != self.target.len()
            || self.entries.iter().any(|r| r.len() != self.source.len())
        {
            return Err(Error::ShapeMismatch {
                rows: self.entries.len(),
                cols: self.entries.first().map_or(0, |r| r.len()),
            });
        }
        for (i, row) in self.entries.iter().enumerate() {
            for (j, f) in row.iter().enumerate() {
                if let Some(d) = f.degree() {
                    let expected = self.target[i] - self.source[j];
                    if d as i64 != expected {
                        return Err(Error::DegreeMismatch {
                            row: i,
                            col: j,
                            expected,
                            found: d as i64,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn ctx(&self) -> &K::Ctx {
        &self.ctx
    }

    pub fn source(&self) -> &[i64] {
        &self.source
    }

    pub fn target(&self) -> &[i64] {
        &self.target
    }

    pub fn source_bundle(&self) -> SplitBundle {
        SplitBundle::new(self.source.clone())
    }

    pub fn target_bundle(&self) -> SplitBundle {
        SplitBundle::new(self.target.clone())
    }

    pub fn rows(&self) -> usize {
        self.target.len()
    }

    pub fn cols(&self) -> usize {
        self.source.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Form<K> {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<Form<K>>] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<Form<K>> {
        self.entries.iter().map(|r| r[j].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|f| f.is_zero())
    }

    /// `self ∘ rhs`, where `rhs` maps into the source of `self`.
    pub fn compose(&self, rhs: &GradedMatrix<K>) -> Result<Self> {
        if self.source != rhs.target {
            return Err(Error::ShapeMismatch {
                rows: rhs.rows(),
                cols: self.cols(),
            });
        }
        let mut out = Self::zero(&self.ctx, rhs.source.clone(), self.target.clone());
        for i in 0..self.rows() {
            for j in 0..rhs.cols() {
                let mut acc = Form::zero();
                for k in 0..self.cols() {
                    acc = &acc + &(&self.entries[i][k] * &rhs.entries[k][j]);
                }
                out.entries[i][j] = acc;
            }
        }
        Ok(out)
    }

    /// Transpose with negated twists: the dual map `F^∨ → E^∨`.
    pub fn dual(&self) -> Self {
        let entries = (0..self.cols()).map(|j| self.column(j)).collect();
        GradedMatrix {
            ctx: self.ctx.clone(),
            source: self.target.iter().map(|b| -b).collect(),
            target: self.source.iter().map(|a| -a).collect(),
            entries,
        }
    }

    /// `self ⊗ O(n)` on both sides; entries are unchanged.
    pub fn twist(&self, n: i64) -> Self {
        GradedMatrix {
            ctx: self.ctx.clone(),
            source: self.source.iter().map(|a| a + n).collect(),
            target: self.target.iter().map(|b| b + n).collect(),
            entries: self.entries.clone(),
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        GradedMatrix {
            ctx: self.ctx.clone(),
            source: cols.iter().map(|&j| self.source[j]).collect(),
            target: self.target.clone(),
            entries: self
                .entries
                .iter()
                .map(|r| cols.iter().map(|&j| r[j].clone()).collect())
                .collect(),
        }
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        GradedMatrix {
            ctx: self.ctx.clone(),
            source: self.source.clone(),
            target: rows.iter().map(|&i| self.target[i]).collect(),
            entries: rows.iter().map(|&i| self.entries[i].clone()).collect(),
        }
    }

    /// The generic fibre: entries in the affine chart `t = V/U`.
    pub fn dehomogenize(&self) -> RatMatrix<K> {
        let rows = self
            .entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|f| RatFunc::from_poly(f.dehomogenize(), &self.ctx))
                    .collect()
            })
            .collect();
        Matrix::from_rows(&self.ctx, rows)
    }

    /// Rank over the function field.
    pub fn generic_rank(&self) -> usize {
        if self.rows() == 0 || self.cols() == 0 {
            return 0;
        }
        self.dehomogenize().rank()
    }

    /// Constant matrix when every entry has degree 0 or is ZERO.
    pub fn constant_part(&self) -> Option<Matrix<K>> {
        let mut m = Matrix::zeros(&self.ctx, self.rows(), self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                let f = &self.entries[i][j];
                match f.degree() {
                    None => {}
                    Some(0) => m.set(i, j, f.coeffs()[0].clone()),
                    Some(_) => return None,
                }
            }
        }
        Some(m)
    }
}

impl<K: Field> GradedMatrix<K> {
    /// Some `X` with `self ∘ X = rhs`, if one exists. Solved coefficientwise,
    /// one column of `rhs` at a time.
    pub fn solve_right(&self, rhs: &GradedMatrix<K>) -> Option<Self> {
        if self.target != rhs.target {
            return None;
        }
        let ctx = &self.ctx;
        let zero = K::zero_in(ctx);
        let mut out = Self::zero(ctx, rhs.source.clone(), self.source.clone());
        for j in 0..rhs.cols() {
            let s = rhs.source[j];
            // unknown offsets per row of X
            let mut offset = Vec::with_capacity(self.cols());
            let mut count = 0usize;
            for &a in &self.source {
                offset.push(count);
                if a >= s {
                    count += (a - s) as usize + 1;
                }
            }
            let mut eqs: Vec<Vec<K>> = Vec::new();
            for l in 0..self.rows() {
                let d = self.target[l] - s;
                if d < 0 {
                    continue;
                }
                let rc = rhs.entries[l][j].coeffs();
                for e in 0..=d as usize {
                    let mut row = vec![zero.clone(); count + 1];
                    for i in 0..self.cols() {
                        let a = self.source[i];
                        if a < s {
                            continue;
                        }
                        let fc = self.entries[l][i].coeffs();
                        for t in 0..=(a - s) as usize {
                            if e >= t && e - t < fc.len() {
                                row[offset[i] + t] = row[offset[i] + t].clone() + fc[e - t].clone();
                            }
                        }
                    }
                    row[count] = rc.get(e).cloned().unwrap_or(zero.clone());
                    eqs.push(row);
                }
            }
            let mut sol = vec![zero.clone(); count];
            if !eqs.is_empty() {
                let (r, piv) = Matrix::from_rows(ctx, eqs).rref();
                if piv.contains(&count) {
                    return None;
                }
                for (row, &c) in piv.iter().enumerate() {
                    sol[c] = r.get(row, count).clone();
                }
            }
            for i in 0..self.cols() {
                let a = self.source[i];
                if a >= s {
                    let len = (a - s) as usize + 1;
                    out.entries[i][j] = Form::new(sol[offset[i]..offset[i] + len].to_vec());
                }
            }
        }
        Some(out)
    }
}

impl<K: FiniteField> GradedMatrix<K> {
    /// Pull-back along the `e`-fold Frobenius: twists times `p^e`, entries twisted.
    pub fn frobenius_pullback(&self, e: u32) -> Self {
        let q = (K::characteristic(&self.ctx) as i64).pow(e);
        GradedMatrix {
            ctx: self.ctx.clone(),
            source: self.source.iter().map(|a| a * q).collect(),
            target: self.target.iter().map(|b| b * q).collect(),
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(|f| f.frobenius_twist(e)).collect())
                .collect(),
        }
    }
}

impl<K: Field> fmt::Debug for GradedMatrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:?} -> {:?} [", self.source, self.target)?;
        for r in &self.entries {
            writeln!(f, "  {r:?}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{GaloisField, Gf};

    type Form = crate::algebra::Form<Gf>;

    #[test]
    fn validate_examples() {
        let f = GaloisField::prime(3).unwrap();
        let (u, v) = (Form::u(&f), Form::v(&f));
        assert!(GradedMatrix::new(&f, vec![-1, -1], vec![0], vec![vec![u.clone(), v]]).is_ok());
        let one = Form::constant(f.one());
        assert!(GradedMatrix::new(&f, vec![0], vec![0], vec![vec![one.clone()]]).is_ok());
        assert_eq!(
            GradedMatrix::new(&f, vec![1], vec![0], vec![vec![one]]),
            Err(Error::DegreeMismatch {
                row: 0,
                col: 0,
                expected: -1,
                found: 0
            })
        );
        let ok = GradedMatrix::<Gf>::zero(&f, vec![1], vec![0]);
        assert!(ok.validate().is_ok());
        assert!(ok.validate().is_ok());
    }

    #[test]
    fn compose_and_dual() {
        let f = GaloisField::prime(5).unwrap();
        let (u, v) = (Form::u(&f), Form::v(&f));
        let row =
            GradedMatrix::new(&f, vec![-1, -1], vec![0], vec![vec![u.clone(), v.clone()]]).unwrap();
        let col = GradedMatrix::new(&f, vec![-2], vec![-1, -1], vec![vec![v.clone()], vec![-&u]])
            .unwrap();
        assert!(row.compose(&col).unwrap().is_zero());
        let d = row.dual();
        assert!(d.validate().is_ok());
        assert_eq!(d.source(), &[0]);
        assert_eq!(d.dual(), row);
    }

    #[test]
    fn frobenius_pullback_validates() {
        let f = GaloisField::new(2, 2).unwrap();
        let c = f.generator();
        let m = GradedMatrix::new(
            &f,
            vec![-1, 0],
            vec![0],
            vec![vec![Form::monomial(c, 0, 1), Form::constant(c)]],
        )
        .unwrap();
        let fm = m.frobenius_pullback(1);
        assert!(fm.validate().is_ok());
        assert_eq!(fm.source(), &[-2, 0]);
        assert_eq!(fm.entry(0, 1), &Form::constant(c * c));
    }

    #[test]
    fn solve_right_recovers_factor() {
        let f = GaloisField::prime(3).unwrap();
        let (u, v) = (Form::u(&f), Form::v(&f));
        let col =
            GradedMatrix::new(&f, vec![-1], vec![0, 0], vec![vec![v.clone()], vec![-&u]]).unwrap();
        let x = GradedMatrix::new(&f, vec![-3], vec![-1], vec![vec![&u * &v]]).unwrap();
        let rhs = col.compose(&x).unwrap();
        assert_eq!(col.solve_right(&rhs), Some(x));
        let other =
            GradedMatrix::new(&f, vec![-1], vec![0, 0], vec![vec![u.clone()], vec![u]]).unwrap();
        assert_eq!(col.solve_right(&other), None);
    }
}
