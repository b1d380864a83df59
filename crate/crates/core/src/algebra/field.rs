//! Scalar field abstraction.
//!
//! Every algebraic layer above this one is generic over [`Field`]. The trait
//! builds on `num_traits::NumOps`, but zero and one are produced from a
//! context value because the finite fields used here are chosen at run time.

use std::fmt::Debug;
use std::hash::Hash;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{NumOps, One, Zero};

pub trait Field: Clone + PartialEq + Debug + NumOps + Neg<Output = Self> {
    /// Run-time description of the field (unit for fields known statically).
    type Ctx: Clone + PartialEq + Debug;

    fn ctx(&self) -> Self::Ctx;
    fn zero_in(ctx: &Self::Ctx) -> Self;
    fn one_in(ctx: &Self::Ctx) -> Self;
    fn from_i64(ctx: &Self::Ctx, n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one_in(&self.ctx())
    }
}

/// A finite field of characteristic p, hence perfect.
pub trait FiniteField: Field + Copy + Eq + Hash {
    fn characteristic(ctx: &Self::Ctx) -> u64;
    fn order(ctx: &Self::Ctx) -> u64;
    /// Element with the given integer encoding in `[0, order)`.
    fn from_index(ctx: &Self::Ctx, index: u64) -> Self;
    fn index(&self) -> u64;
    /// Absolute Frobenius `x ↦ x^p`.
    fn frobenius(&self) -> Self;
    /// Inverse of Frobenius; total because finite fields are perfect.
    fn pth_root(&self) -> Self;

    fn pow(&self, mut e: u64) -> Self {
        let mut base = *self;
        let mut acc = Self::one_in(&self.ctx());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Frobenius iterated `e` times.
    fn frobenius_iter(&self, e: u32) -> Self {
        (0..e).fold(*self, |x, _| x.frobenius())
    }

    fn pth_root_iter(&self, e: u32) -> Self {
        (0..e).fold(*self, |x, _| x.pth_root())
    }

    fn elements(ctx: &Self::Ctx) -> Vec<Self> {
        (0..Self::order(ctx))
            .map(|i| Self::from_index(ctx, i))
            .collect()
    }
}

impl Field for BigRational {
    type Ctx = ();

    fn ctx(&self) -> Self::Ctx {}

    fn zero_in(_: &()) -> Self {
        BigRational::zero()
    }

    fn one_in(_: &()) -> Self {
        BigRational::one()
    }

    fn from_i64(_: &(), n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}
