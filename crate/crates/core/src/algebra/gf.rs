//! Finite fields `F_{p^m}` chosen at run time.
//!
//! Elements of `F_{p^m}` with `m ≥ 2` are polynomials in a fixed generator `α`
//! of degree `m`; the element `c_0 + c_1 α + … + c_{m-1} α^{m-1}` is encoded
//! as the integer `c_0 + c_1 p + … + c_{m-1} p^{m-1}`. The generator is a root
//! of the lexicographically smallest monic primitive polynomial of degree `m`
//! (comparing the encoding of its lower coefficients), so encodings are
//! reproducible across runs.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};
use std::sync::{Mutex, OnceLock};

use super::field::{Field, FiniteField};
use crate::error::{Error, Result};

const MAX_PRIME_FIELD: u64 = 1 << 31;
const MAX_EXTENSION_ORDER: u64 = 1 << 20;

#[derive(Debug)]
struct Tables {
    p: u32,
    m: u32,
    q: u32,
    /// Lower coefficients `f_0 … f_{m-1}` of the monic modulus `x^m + Σ f_i x^i`.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Handle to an interned field descriptor; cheap to copy and compare.
#[derive(Clone, Copy)]
pub struct GaloisField(&'static Tables);

fn registry() -> &'static Mutex<HashMap<(u32, u32), &'static Tables>> {
    static REG: OnceLock<Mutex<HashMap<(u32, u32), &'static Tables>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl GaloisField {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::UnsupportedField {
                p,
                m,
                reason: "extension degree must be at least 1".into(),
            });
        }
        if m == 1 && p >= MAX_PRIME_FIELD {
            return Err(Error::UnsupportedField {
                p,
                m,
                reason: "prime too large".into(),
            });
        }
        let q = p
            .checked_pow(m)
            .filter(|&q| m == 1 || q <= MAX_EXTENSION_ORDER);
        let Some(q) = q else {
            return Err(Error::UnsupportedField {
                p,
                m,
                reason: format!("order exceeds {MAX_EXTENSION_ORDER}"),
            });
        };
        let key = (p as u32, m);
        let mut reg = registry().lock().expect("field registry poisoned");
        if let Some(t) = reg.get(&key) {
            return Ok(GaloisField(t));
        }
        let tables = if m == 1 {
            Tables {
                p: p as u32,
                m,
                q: q as u32,
                modulus: Vec::new(),
                exp: Vec::new(),
                log: Vec::new(),
            }
        } else {
            build_tables(p as u32, m, q as u32)
        };
        let leaked: &'static Tables = Box::leak(Box::new(tables));
        reg.insert(key, leaked);
        Ok(GaloisField(leaked))
    }

    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn p(&self) -> u64 {
        self.0.p as u64
    }

    pub fn m(&self) -> u32 {
        self.0.m
    }

    pub fn order(&self) -> u64 {
        self.0.q as u64
    }

    /// Lower coefficients of the generator polynomial (empty for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn elem(&self, value: u64) -> Result<Gf> {
        if value >= self.order() {
            return Err(Error::ElementOutOfRange {
                value,
                order: self.order(),
            });
        }
        Ok(Gf {
            field: *self,
            v: value as u32,
        })
    }

    /// Reduces an integer into the prime subfield.
    pub fn int(&self, n: i64) -> Gf {
        let p = self.0.p as i64;
        Gf {
            field: *self,
            v: n.rem_euclid(p) as u32,
        }
    }

    pub fn zero(&self) -> Gf {
        Gf { field: *self, v: 0 }
    }

    pub fn one(&self) -> Gf {
        Gf { field: *self, v: 1 }
    }

    /// The generator `α` (for prime fields, the smallest primitive root).
    pub fn generator(&self) -> Gf {
        if self.0.m == 1 {
            let p = self.0.p as u64;
            let g = (1..p.max(2))
                .find(|&g| multiplicative_order(g, p) == p - 1)
                .unwrap_or(1);
            Gf {
                field: *self,
                v: g as u32,
            }
        } else {
            Gf {
                field: *self,
                v: self.0.exp[1],
            }
        }
    }
}

fn multiplicative_order(g: u64, p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let mut x = g % p;
    let mut k = 1;
    while x != 1 {
        x = x * g % p;
        k += 1;
        if k > p {
            return 0;
        }
    }
    k
}

fn build_tables(p: u32, m: u32, q: u32) -> Tables {
    let m_us = m as usize;
    for code in 0..q {
        let mut f = Vec::with_capacity(m_us);
        let mut c = code;
        for _ in 0..m {
            f.push(c % p);
            c /= p;
        }
        if f[0] == 0 {
            continue;
        }
        if let Some((exp, log)) = try_primitive(p, m_us, q, &f) {
            return Tables {
                p,
                m,
                q,
                modulus: f,
                exp,
                log,
            };
        }
    }
    unreachable!("every finite field has a primitive polynomial")
}

/// Powers of `x` modulo `x^m + Σ f_i x^i`; succeeds iff `x` has order `q - 1`.
fn try_primitive(p: u32, m: usize, q: u32, f: &[u32]) -> Option<(Vec<u32>, Vec<u32>)> {
    let mut exp = Vec::with_capacity(q as usize - 1);
    let mut log = vec![u32::MAX; q as usize];
    let mut cur = vec![0u32; m];
    cur[0] = 1;
    for i in 0..(q - 1) {
        let code = encode(&cur, p);
        if log[code as usize] != u32::MAX || code == 0 {
            return None;
        }
        log[code as usize] = i;
        exp.push(code);
        // multiply by x
        let top = cur[m - 1];
        for k in (1..m).rev() {
            cur[k] = (cur[k - 1] + p - (top * f[k] % p)) % p;
        }
        cur[0] = (p - (top * f[0] % p)) % p;
    }
    if encode(&cur, p) != 1 {
        return None;
    }
    log[0] = 0;
    Some((exp, log))
}

fn encode(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.m == other.0.m
    }
}

impl Eq for GaloisField {}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.m == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{}", self.0.p, self.0.m)
        }
    }
}

/// An element of a [`GaloisField`].
#[derive(Clone, Copy)]
pub struct Gf {
    field: GaloisField,
    v: u32,
}

impl Gf {
    pub fn field(&self) -> GaloisField {
        self.field
    }

    pub fn value(&self) -> u64 {
        self.v as u64
    }

    fn t(&self) -> &'static Tables {
        self.field.0
    }

    fn check(&self, other: &Gf) {
        assert!(
            self.field == other.field,
            "mixed-field arithmetic: {:?} vs {:?}",
            self.field,
            other.field
        );
    }

    fn digit_op(&self, other: &Gf, subtract: bool) -> u32 {
        let t = self.t();
        let (p, m) = (t.p, t.m);
        let (mut a, mut b) = (self.v, other.v);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..m {
            let (da, db) = (a % p, b % p);
            let d = if subtract {
                (da + p - db) % p
            } else {
                (da + db) % p
            };
            out += d * place;
            place = place.wrapping_mul(p);
            a /= p;
            b /= p;
        }
        out
    }
}

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.v == other.v
    }
}

impl Eq for Gf {}

impl Hash for Gf {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.t().p.hash(state);
        self.t().m.hash(state);
        self.v.hash(state);
    }
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl fmt::Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Add for Gf {
    type Output = Gf;
    fn add(self, rhs: Gf) -> Gf {
        self.check(&rhs);
        let t = self.t();
        let v = if t.m == 1 {
            ((self.v as u64 + rhs.v as u64) % t.p as u64) as u32
        } else {
            self.digit_op(&rhs, false)
        };
        Gf {
            field: self.field,
            v,
        }
    }
}

impl Sub for Gf {
    type Output = Gf;
    fn sub(self, rhs: Gf) -> Gf {
        self.check(&rhs);
        let t = self.t();
        let v = if t.m == 1 {
            ((self.v as u64 + t.p as u64 - rhs.v as u64) % t.p as u64) as u32
        } else {
            self.digit_op(&rhs, true)
        };
        Gf {
            field: self.field,
            v,
        }
    }
}

impl Neg for Gf {
    type Output = Gf;
    fn neg(self) -> Gf {
        self.field.zero() - self
    }
}

impl Mul for Gf {
    type Output = Gf;
    fn mul(self, rhs: Gf) -> Gf {
        self.check(&rhs);
        let t = self.t();
        let v = if t.m == 1 {
            ((self.v as u64 * rhs.v as u64) % t.p as u64) as u32
        } else if self.v == 0 || rhs.v == 0 {
            0
        } else {
            let l =
                (t.log[self.v as usize] as u64 + t.log[rhs.v as usize] as u64) % (t.q as u64 - 1);
            t.exp[l as usize]
        };
        Gf {
            field: self.field,
            v,
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for Gf {
    type Output = Gf;
    fn div(self, rhs: Gf) -> Gf {
        self * Field::inv(&rhs).expect("division by zero in finite field")
    }
}

impl Rem for Gf {
    type Output = Gf;
    /// Remainder of field division, which is always zero.
    fn rem(self, rhs: Gf) -> Gf {
        assert!(rhs.v != 0, "remainder by zero in finite field");
        self.field.zero()
    }
}

impl Field for Gf {
    type Ctx = GaloisField;

    fn ctx(&self) -> GaloisField {
        self.field
    }

    fn zero_in(ctx: &GaloisField) -> Self {
        ctx.zero()
    }

    fn one_in(ctx: &GaloisField) -> Self {
        ctx.one()
    }

    fn from_i64(ctx: &GaloisField, n: i64) -> Self {
        ctx.int(n)
    }

    fn is_zero(&self) -> bool {
        self.v == 0
    }

    fn is_one(&self) -> bool {
        self.v == 1
    }

    fn inv(&self) -> Option<Self> {
        if self.v == 0 {
            return None;
        }
        let t = self.t();
        if t.m == 1 {
            Some(FiniteField::pow(self, t.p as u64 - 2))
        } else {
            let l = (t.q - 1 - t.log[self.v as usize]) % (t.q - 1);
            Some(Gf {
                field: self.field,
                v: t.exp[l as usize],
            })
        }
    }
}

impl FiniteField for Gf {
    fn characteristic(ctx: &GaloisField) -> u64 {
        ctx.p()
    }

    fn order(ctx: &GaloisField) -> u64 {
        ctx.order()
    }

    fn from_index(ctx: &GaloisField, index: u64) -> Self {
        ctx.elem(index).expect("index out of range")
    }

    fn index(&self) -> u64 {
        self.v as u64
    }

    fn frobenius(&self) -> Self {
        let t = self.t();
        if t.m == 1 || self.v == 0 {
            return *self;
        }
        let l = (t.log[self.v as usize] as u64 * t.p as u64) % (t.q as u64 - 1);
        Gf {
            field: self.field,
            v: t.exp[l as usize],
        }
    }

    fn pth_root(&self) -> Self {
        let t = self.t();
        if t.m == 1 || self.v == 0 {
            return *self;
        }
        // x^{1/p} = x^{p^{m-1}}
        let e = (t.p as u64).pow(t.m - 1) % (t.q as u64 - 1);
        let l = (t.log[self.v as usize] as u64 * e) % (t.q as u64 - 1);
        Gf {
            field: self.field,
            v: t.exp[l as usize],
        }
    }
}
