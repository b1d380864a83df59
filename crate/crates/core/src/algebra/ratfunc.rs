//! The rational function field `K(t)`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use super::field::Field;
use super::poly::Poly;

/// A reduced fraction with monic denominator.
#[derive(Clone, PartialEq)]
pub struct RatFunc<K: Field> {
    num: Poly<K>,
    den: Poly<K>,
}

impl<K: Field> RatFunc<K> {
    pub fn new(num: Poly<K>, den: Poly<K>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            let ctx = den.lead().unwrap().ctx();
            return RatFunc {
                num,
                den: Poly::one(&ctx),
            };
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g).unwrap();
        let den = den.div_exact(&g).unwrap();
        let l = den.lead().unwrap().inv().unwrap();
        RatFunc {
            num: num.scale(&l),
            den: den.scale(&l),
        }
    }

    pub fn from_poly(p: Poly<K>, ctx: &K::Ctx) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(ctx),
        }
    }

    pub fn num(&self) -> &Poly<K> {
        &self.num
    }

    pub fn den(&self) -> &Poly<K> {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }
}

impl<K: Field> fmt::Debug for RatFunc<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "({:?})/({:?})", self.num, self.den)
        }
    }
}

impl<K: Field> Add for RatFunc<K> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den);
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::new(num, &self.den * &rhs.den)
    }
}

impl<K: Field> Sub for RatFunc<K> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<K: Field> Neg for RatFunc<K> {
    type Output = Self;
    fn neg(self) -> Self {
        RatFunc {
            num: -self.num,
            den: self.den,
        }
    }
}

impl<K: Field> Mul for RatFunc<K> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.num.is_zero() || rhs.num.is_zero() {
            let ctx = self.den.lead().unwrap().ctx();
            return RatFunc::from_poly(Poly::zero(), &ctx);
        }
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl<K: Field> Div for RatFunc<K> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv().expect("division by zero rational function")
    }
}

impl<K: Field> Rem for RatFunc<K> {
    type Output = Self;
    /// Field remainder: always zero.
    fn rem(self, rhs: Self) -> Self {
        assert!(!rhs.num.is_zero(), "remainder by zero");
        let ctx = self.den.lead().unwrap().ctx();
        RatFunc::from_poly(Poly::zero(), &ctx)
    }
}

impl<K: Field> Field for RatFunc<K> {
    type Ctx = K::Ctx;

    fn ctx(&self) -> K::Ctx {
        self.den.lead().unwrap().ctx()
    }

    fn zero_in(ctx: &K::Ctx) -> Self {
        RatFunc::from_poly(Poly::zero(), ctx)
    }

    fn one_in(ctx: &K::Ctx) -> Self {
        RatFunc::from_poly(Poly::one(ctx), ctx)
    }

    fn from_i64(ctx: &K::Ctx, n: i64) -> Self {
        RatFunc::from_poly(Poly::constant(K::from_i64(ctx, n)), ctx)
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(RatFunc::new(self.den.clone(), self.num.clone()))
        }
    }
}
