//! Homogeneous forms in the coordinates `U, V` of the projective line.
//!
//! A nonzero form of degree `d` stores `d + 1` coefficients, the `i`-th one
//! multiplying `U^{d-i} V^i`. In the affine chart `t = V/U` the coefficient
//! list is exactly the ascending coefficient list of `f(1, t)`, so
//! dehomogenisation is free and rehomogenisation only needs the degree.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{Field, FiniteField};
use super::poly::Poly;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct Form<K: Field> {
    coeffs: Vec<K>,
}

impl<K: Field> Form<K> {
    /// The distinguished zero form, which has no degree.
    pub fn zero() -> Self {
        Form { coeffs: Vec::new() }
    }

    /// Form of degree `coeffs.len() - 1`; an all-zero list gives ZERO.
    pub fn new(coeffs: Vec<K>) -> Self {
        if coeffs.iter().all(|c| c.is_zero()) {
            Form::zero()
        } else {
            Form { coeffs }
        }
    }

    pub fn constant(c: K) -> Self {
        Form::new(vec![c])
    }

    /// `c·U^i V^j`.
    pub fn monomial(c: K, i: usize, j: usize) -> Self {
        if c.is_zero() {
            return Form::zero();
        }
        let zero = K::zero_in(&c.ctx());
        let mut coeffs = vec![zero; i + j + 1];
        coeffs[j] = c;
        Form { coeffs }
    }

    pub fn u(ctx: &K::Ctx) -> Self {
        Form::monomial(K::one_in(ctx), 1, 0)
    }

    pub fn v(ctx: &K::Ctx) -> Self {
        Form::monomial(K::one_in(ctx), 0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `f(1, t)`.
    pub fn dehomogenize(&self) -> Poly<K> {
        Poly::new(self.coeffs.clone())
    }

    /// `U^d · p(V/U)`; fails if `deg p > d`. A negative declared degree only
    /// admits the zero polynomial.
    pub fn homogenize(p: &Poly<K>, degree: i64) -> Result<Self> {
        match p.degree() {
            None => Ok(Form::zero()),
            Some(dp) if degree >= 0 && dp as i64 <= degree => {
                let zero = K::zero_in(&p.lead().unwrap().ctx());
                let mut coeffs = p.coeffs().to_vec();
                coeffs.resize(degree as usize + 1, zero);
                Ok(Form { coeffs })
            }
            Some(dp) => Err(Error::DegreeMismatch {
                row: 0,
                col: 0,
                expected: degree,
                found: dp as i64,
            }),
        }
    }

    /// Power of `U` dividing the form.
    pub fn u_multiplicity(&self) -> Option<usize> {
        let d = self.degree()?;
        Some(d - self.dehomogenize().degree().unwrap())
    }

    pub fn scale(&self, c: &K) -> Self {
        Form::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Scales so that the last nonzero coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.coeffs.iter().rev().find(|c| !c.is_zero()) {
            None => Form::zero(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    pub fn pow(&self, e: usize, ctx: &K::Ctx) -> Self {
        (0..e).fold(Form::constant(K::one_in(ctx)), |acc, _| &acc * self)
    }

    /// Exact quotient `self / g` when `g` divides `self`.
    pub fn div_exact(&self, g: &Form<K>) -> Option<Self> {
        let (Some(d), Some(e)) = (self.degree(), g.degree()) else {
            return if self.is_zero() && !g.is_zero() {
                Some(Form::zero())
            } else {
                None
            };
        };
        if e > d {
            return None;
        }
        let q = self.dehomogenize().div_exact(&g.dehomogenize())?;
        Form::homogenize(&q, (d - e) as i64).ok()
    }

    pub fn eval(&self, u: &K, v: &K) -> Option<K> {
        let d = self.degree()?;
        let ctx = u.ctx();
        let mut acc = K::zero_in(&ctx);
        for (i, c) in self.coeffs.iter().enumerate() {
            let mut term = c.clone();
            for _ in 0..(d - i) {
                term = term * u.clone();
            }
            for _ in 0..i {
                term = term * v.clone();
            }
            acc = acc + term;
        }
        Some(acc)
    }
}

impl<K: FiniteField> Form<K> {
    /// Pull-back along the `e`-fold absolute Frobenius: `Σ c_i^{p^e} U^{p^e(d-i)} V^{p^e i}`.
    pub fn frobenius_twist(&self, e: u32) -> Self {
        let Some(d) = self.degree() else {
            return Form::zero();
        };
        let ctx = self.coeffs[0].ctx();
        let q = (K::characteristic(&ctx) as usize).pow(e);
        let mut coeffs = vec![K::zero_in(&ctx); q * d + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[q * i] = c.frobenius_iter(e);
        }
        Form { coeffs }
    }
}

/// Monic gcd of a list of forms; ZERO inputs are ignored.
pub fn form_gcd<K: Field>(fs: &[Form<K>]) -> Result<Form<K>> {
    let nonzero: Vec<&Form<K>> = fs.iter().filter(|f| !f.is_zero()).collect();
    let first = nonzero.first().ok_or(Error::AllZero)?;
    let ctx = first.coeffs[0].ctx();
    let u_mult = nonzero
        .iter()
        .map(|f| f.u_multiplicity().unwrap())
        .min()
        .unwrap();
    let g = nonzero
        .iter()
        .fold(Poly::zero(), |g, f| g.gcd(&f.dehomogenize()));
    let part = Form::homogenize(&g, g.degree().unwrap() as i64)?;
    Ok(&part * &Form::u(&ctx).pow(u_mult, &ctx))
}

impl<K: Field> fmt::Debug for Form<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(d) = self.degree() else {
            return write!(f, "0");
        };
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let (a, b) = (d - i, i);
            let mono = match (a, b) {
                (0, 0) => String::new(),
                (a, 0) => pow_str("U", a),
                (0, b) => pow_str("V", b),
                (a, b) => format!("{}{}", pow_str("U", a), pow_str("V", b)),
            };
            if mono.is_empty() {
                write!(f, "{c:?}")?;
            } else if c.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{c:?}{mono}")?;
            }
        }
        Ok(())
    }
}

fn pow_str(x: &str, e: usize) -> String {
    if e == 1 {
        x.to_string()
    } else {
        format!("{x}^{e}")
    }
}

impl<K: Field> Mul for &Form<K> {
    type Output = Form<K>;
    fn mul(self, rhs: &Form<K>) -> Form<K> {
        let (Some(d), Some(e)) = (self.degree(), rhs.degree()) else {
            return Form::zero();
        };
        let p = &self.dehomogenize() * &rhs.dehomogenize();
        Form::homogenize(&p, (d + e) as i64).unwrap()
    }
}

impl<K: Field> Add for &Form<K> {
    type Output = Form<K>;
    /// Panics when both summands are nonzero of different degrees.
    fn add(self, rhs: &Form<K>) -> Form<K> {
        match (self.degree(), rhs.degree()) {
            (None, _) => rhs.clone(),
            (_, None) => self.clone(),
            (Some(d), Some(e)) => {
                assert_eq!(d, e, "adding forms of different degrees");
                Form::new(
                    self.coeffs
                        .iter()
                        .zip(&rhs.coeffs)
                        .map(|(a, b)| a.clone() + b.clone())
                        .collect(),
                )
            }
        }
    }
}

impl<K: Field> Neg for &Form<K> {
    type Output = Form<K>;
    fn neg(self) -> Form<K> {
        Form {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl<K: Field> Sub for &Form<K> {
    type Output = Form<K>;
    fn sub(self, rhs: &Form<K>) -> Form<K> {
        self + &(-rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::gf::{GaloisField, Gf};

    fn uv(f: &GaloisField) -> (Form<Gf>, Form<Gf>) {
        (Form::u(f), Form::v(f))
    }

    #[test]
    fn gcd_examples() {
        let f = GaloisField::prime(5).unwrap();
        let (u, v) = uv(&f);
        let uu = &u * &u;
        let vv = &v * &v;
        assert_eq!(form_gcd(&[uu.clone(), &u * &v]).unwrap(), u);
        assert_eq!(form_gcd(&[uu, vv]).unwrap(), Form::constant(f.one()));
        let g = &(&u + &v).scale(&f.int(3)) * &v;
        assert_eq!(form_gcd(&[g.clone(), g.clone()]).unwrap(), g.monic());
        assert_eq!(form_gcd::<Gf>(&[Form::zero()]), Err(Error::AllZero));
    }

    #[test]
    fn frobenius_twist_examples() {
        let f2 = GaloisField::prime(2).unwrap();
        let (u, v) = uv(&f2);
        let s = &u + &v;
        assert_eq!(s.frobenius_twist(1), &(&u * &u) + &(&v * &v));
        assert_eq!(s.frobenius_twist(0), s);
    }

    #[test]
    fn frobenius_twist_is_semilinear_in_extension() {
        // F_9 with generator c: twist(cU) = c^3 U^3, and it equals (cU)^3
        let f9 = GaloisField::new(3, 2).unwrap();
        let c = f9.generator();
        let cu = Form::monomial(c, 1, 0);
        let tw = cu.frobenius_twist(1);
        assert_eq!(tw, Form::monomial(c * c * c, 3, 0));
        assert_eq!(tw, cu.pow(3, &f9));
        assert_ne!(tw, Form::monomial(c, 3, 0));
    }

    #[test]
    fn homogenize_rejects_high_degree() {
        let f = GaloisField::prime(3).unwrap();
        let p = Poly::monomial(f.one(), 2);
        assert!(Form::homogenize(&p, 1).is_err());
        assert_eq!(Form::homogenize(&p, 2).unwrap(), Form::v(&f).pow(2, &f));
        assert!(Form::homogenize(&Poly::<Gf>::zero(), -3).unwrap().is_zero());
    }
}
