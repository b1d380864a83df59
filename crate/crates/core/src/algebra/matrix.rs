//! Dense matrices over a [`Field`] with exact Gaussian elimination.

use std::fmt;

use super::field::Field;
use super::poly::Poly;
use super::ratfunc::RatFunc;

#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    ctx: F::Ctx,
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

/// Matrix over `K(t)`: the generic fibre of a map of split bundles.
pub type RatMatrix<K> = Matrix<RatFunc<K>>;

impl<F: Field> Matrix<F> {
    pub fn zeros(ctx: &F::Ctx, rows: usize, cols: usize) -> Self {
        Matrix {
            ctx: ctx.clone(),
            rows,
            cols,
            data: vec![F::zero_in(ctx); rows * cols],
        }
    }

    pub fn identity(ctx: &F::Ctx, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, F::one_in(ctx));
        }
        m
    }

    pub fn from_rows(ctx: &F::Ctx, rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix {
            ctx: ctx.clone(),
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Matrix with the given vectors as columns; `len` is the column length.
    pub fn from_cols(ctx: &F::Ctx, len: usize, cols: &[Vec<F>]) -> Self {
        let mut m = Self::zeros(ctx, len, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), len, "column length");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: F) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> Vec<F> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn map<G: Field>(&self, ctx: &G::Ctx, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            ctx: ctx.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.ctx, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matrix product shape");
        let mut out = Self::zeros(&self.ctx, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).clone() + a.clone() * b.clone();
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(F::zero_in(&self.ctx), |acc, j| {
                    acc + self.get(i, j).clone() * v[j].clone()
                })
            })
            .collect()
    }

    pub fn hstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows, "hstack rows");
        let mut out = Self::zeros(&self.ctx, self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..rhs.cols {
                out.set(i, self.cols + j, rhs.get(i, j).clone());
            }
        }
        out
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(&self.ctx, self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv().unwrap();
            for j in c..m.cols {
                let v = m.get(r, j).clone() * inv.clone();
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(i, j).clone() - f.clone() * m.get(r, j).clone();
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel in reduced form: one vector per free column,
    /// with a 1 in that column.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![F::zero_in(&self.ctx); self.cols];
            v[free] = F::one_in(&self.ctx);
            for (k, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(k, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(&self.ctx, n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(&self.ctx, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// Determinant by elimination; panics on non-square input.
    pub fn determinant(&self) -> F {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = F::one_in(&self.ctx);
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return F::zero_in(&self.ctx);
            };
            if pr != c {
                for j in 0..n {
                    m.data.swap(pr * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det = det * piv.clone();
            let inv = piv.inv().unwrap();
            for i in c + 1..n {
                let f = m.get(i, c).clone() * inv.clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j).clone() - f.clone() * m.get(c, j).clone();
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// Rows of the reduced echelon form that are nonzero: a canonical basis of
    /// the row space.
    pub fn row_space_basis(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        (0..pivots.len()).map(|i| r.row(i)).collect()
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Clears denominators of a vector over `K(t)`, divides out the content and
/// makes the first nonzero entry monic.
pub fn primitive_part<K: Field>(v: &[RatFunc<K>], ctx: &K::Ctx) -> Vec<Poly<K>> {
    let mut lcm = Poly::one(ctx);
    for x in v {
        let d = x.den();
        let g = lcm.gcd(d);
        lcm = (&lcm * d).div_exact(&g).unwrap();
    }
    let polys: Vec<Poly<K>> = v
        .iter()
        .map(|x| &x.num().clone() * &lcm.div_exact(x.den()).unwrap())
        .collect();
    let content = polys.iter().fold(Poly::zero(), |g, p| g.gcd(p));
    if content.is_zero() {
        return polys;
    }
    let polys: Vec<Poly<K>> = polys
        .iter()
        .map(|p| p.div_exact(&content).unwrap())
        .collect();
    let lead = polys
        .iter()
        .find(|p| !p.is_zero())
        .and_then(|p| p.lead())
        .and_then(|l| l.inv())
        .unwrap();
    polys.iter().map(|p| p.scale(&lead)).collect()
}

/// Kernel of a matrix over `K(t)`, each basis vector returned as a primitive
/// polynomial vector (denominators cleared, content removed, first nonzero
/// entry monic). Empty iff the matrix is injective.
pub fn rat_kernel<K: Field>(m: &RatMatrix<K>) -> Vec<Vec<Poly<K>>> {
    m.kernel()
        .iter()
        .map(|v| primitive_part(v, m.ctx()))
        .collect()
}

/// Dehomogenised polynomial entries viewed in `K(t)`.
pub fn poly_matrix<K: Field>(ctx: &K::Ctx, rows: Vec<Vec<Poly<K>>>) -> RatMatrix<K> {
    let rows = rows
        .into_iter()
        .map(|r| r.into_iter().map(|p| RatFunc::from_poly(p, ctx)).collect())
        .collect();
    Matrix::from_rows(ctx, rows)
}
