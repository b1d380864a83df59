//! Slope calculus for split bundles on the projective line and for abstract
//! `(rank, degree, genus)` bundle data on curves of higher genus.
//!
//! On the projective line every bundle is a sum of line bundles, so the
//! splitting type is the canonical representation and the Harder–Narasimhan
//! filtration is obtained by grouping equal twists. For abstract bundles only
//! the data needed for slope inequalities is kept.

use std::fmt;

use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = Rational64;

/// `O(a_1) ⊕ … ⊕ O(a_r)` with `a_1 ≥ … ≥ a_r`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SplitBundle {
    twists: Vec<i64>,
}

/// Harder–Narasimhan type: `(slope, rank)` blocks, slopes strictly decreasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnProfile {
    blocks: Vec<(Rational, u64)>,
}

impl HnProfile {
    pub fn new(blocks: Vec<(Rational, u64)>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::ZeroRank);
        }
        for w in blocks.windows(2) {
            if w[0].0 <= w[1].0 {
                return Err(Error::InvalidArgument(
                    "HN slopes must be strictly decreasing".into(),
                ));
            }
        }
        if blocks.iter().any(|&(_, r)| r == 0) {
            return Err(Error::ZeroRank);
        }
        for &(s, r) in &blocks {
            if !(s * Rational::from_integer(r as i64)).is_integer() {
                return Err(Error::InvalidArgument(format!(
                    "block of rank {r} cannot have slope {s}"
                )));
            }
        }
        Ok(HnProfile { blocks })
    }

    pub fn blocks(&self) -> &[(Rational, u64)] {
        &self.blocks
    }

    pub fn rank(&self) -> u64 {
        self.blocks.iter().map(|b| b.1).sum()
    }

    pub fn degree(&self) -> Rational {
        self.blocks
            .iter()
            .map(|&(s, r)| s * Rational::from_integer(r as i64))
            .sum()
    }

    pub fn mu_max(&self) -> Rational {
        self.blocks[0].0
    }

    pub fn mu_min(&self) -> Rational {
        self.blocks.last().unwrap().0
    }

    pub fn is_semistable(&self) -> bool {
        self.blocks.len() == 1
    }

    /// Profile of the dual bundle.
    pub fn dual(&self) -> Self {
        HnProfile {
            blocks: self.blocks.iter().rev().map(|&(s, r)| (-s, r)).collect(),
        }
    }

    pub fn scale(&self, factor: i64) -> Self {
        HnProfile {
            blocks: self
                .blocks
                .iter()
                .map(|&(s, r)| (s * Rational::from_integer(factor), r))
                .collect(),
        }
    }

    /// Maximal degree of a rank-`k` subsheaf: the HN polygon at `k`.
    pub fn polygon(&self, k: u64) -> Rational {
        let mut left = k;
        let mut acc = Rational::zero();
        for &(s, r) in &self.blocks {
            let take = left.min(r);
            acc += s * Rational::from_integer(take as i64);
            left -= take;
            if left == 0 {
                break;
            }
        }
        acc
    }
}

/// Anything with extreme HN slopes.
pub trait Slopes {
    fn slope(&self) -> Result<Rational>;
    fn mu_max(&self) -> Result<Rational>;
    fn mu_min(&self) -> Result<Rational>;
}

impl SplitBundle {
    pub fn new(mut twists: Vec<i64>) -> Self {
        twists.sort_unstable_by(|a, b| b.cmp(a));
        SplitBundle { twists }
    }

    pub fn trivial(rank: usize) -> Self {
        SplitBundle::new(vec![0; rank])
    }

    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn degree(&self) -> i64 {
        self.twists.iter().sum()
    }

    pub fn hn_filtration(&self) -> Result<HnProfile> {
        if self.twists.is_empty() {
            return Err(Error::ZeroRank);
        }
        let mut blocks: Vec<(Rational, u64)> = Vec::new();
        for &a in &self.twists {
            match blocks.last_mut() {
                Some((s, r)) if *s == Rational::from_integer(a) => *r += 1,
                _ => blocks.push((Rational::from_integer(a), 1)),
            }
        }
        Ok(HnProfile { blocks })
    }

    pub fn is_semistable(&self) -> bool {
        self.twists.windows(2).all(|w| w[0] == w[1])
    }

    pub fn dual(&self) -> Self {
        SplitBundle::new(self.twists.iter().map(|a| -a).collect())
    }

    /// `E ⊗ O(n)`.
    pub fn twist(&self, n: i64) -> Self {
        SplitBundle::new(self.twists.iter().map(|a| a + n).collect())
    }

    pub fn direct_sum(&self, other: &SplitBundle) -> Self {
        SplitBundle::new(self.twists.iter().chain(&other.twists).copied().collect())
    }

    /// Pull-back along the `e`-fold absolute Frobenius in characteristic `p`:
    /// `F^* O(a) = O(p a)`.
    pub fn frobenius_pullback(&self, p: u64, e: u32) -> Self {
        let q = (p as i64).pow(e);
        SplitBundle::new(self.twists.iter().map(|a| a * q).collect())
    }

    /// `μ_min(F^{e*} E) / p^e`, whose limit defines the Frobenius-stabilised
    /// minimal slope.
    pub fn normalized_frobenius_mu_min(&self, p: u64, e: u32) -> Result<Rational> {
        let q = (p as i64).pow(e);
        Ok(self.frobenius_pullback(p, e).mu_min()? / Rational::from_integer(q))
    }

    /// Stabilised minimal slope; on split bundles each normalised term equals
    /// the minimal twist, so the limit is attained at once.
    pub fn mu_bar_min(&self) -> Result<Rational> {
        self.mu_min()
    }

    pub fn mu_bar_max(&self) -> Result<Rational> {
        self.mu_max()
    }

    pub fn positivity_verdict(&self) -> Result<Positivity> {
        let m = *self.twists.last().ok_or(Error::ZeroRank)?;
        Ok(match m {
            m if m > 0 => Positivity::Ample,
            0 => Positivity::Nef,
            _ => Positivity::NotNef,
        })
    }
}

impl Slopes for SplitBundle {
    fn slope(&self) -> Result<Rational> {
        if self.twists.is_empty() {
            return Err(Error::ZeroRank);
        }
        Ok(Rational::new(self.degree(), self.rank() as i64))
    }

    fn mu_max(&self) -> Result<Rational> {
        self.twists
            .first()
            .map(|&a| Rational::from_integer(a))
            .ok_or(Error::ZeroRank)
    }

    fn mu_min(&self) -> Result<Rational> {
        self.twists
            .last()
            .map(|&a| Rational::from_integer(a))
            .ok_or(Error::ZeroRank)
    }
}

impl fmt::Debug for SplitBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.twists)
    }
}

impl fmt::Display for SplitBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twists.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.twists.iter().map(|a| format!("O({a})")).collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// `dim Hom(E, F) = Σ_{i,j} max(0, b_i - a_j + 1)`.
pub fn hom_dimension(e: &SplitBundle, f: &SplitBundle) -> u64 {
    let mut n = 0;
    for &a in e.twists() {
        for &b in f.twists() {
            n += (b - a + 1).max(0) as u64;
        }
    }
    n
}

/// Sufficient criterion for `Hom(E, F) = 0`: `μ_min(E) > μ_max(F)`.
pub fn hom_vanishes<E: Slopes, F: Slopes>(e: &E, f: &F) -> Result<bool> {
    Ok(e.mu_min()? > f.mu_max()?)
}

/// Rank, degree and base-curve genus of a bundle on a curve of arbitrary
/// genus, with an optional HN type. Without an HN type the bundle is treated
/// as semistable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractBundle {
    pub rank: u64,
    pub degree: i64,
    pub genus: u64,
    pub prime: u64,
    pub hn: Option<HnProfile>,
}

/// Interval bounds on the Frobenius-stabilised slopes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuBarBounds {
    /// `[lo, hi]` containing `μ̄_min`.
    pub mu_bar_min: (Rational, Rational),
    /// `[lo, hi]` containing `μ̄_max`.
    pub mu_bar_max: (Rational, Rational),
}

impl MuBarBounds {
    pub fn width(&self) -> Rational {
        self.mu_bar_min.1 - self.mu_bar_min.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Positivity {
    Ample,
    /// Nef but not ample.
    Nef,
    NotNef,
    UnknownWithinBound,
}

impl fmt::Display for Positivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Positivity::Ample => "Ample",
            Positivity::Nef => "Nef",
            Positivity::NotNef => "NotNef",
            Positivity::UnknownWithinBound => "UnknownWithinBound",
        };
        f.write_str(s)
    }
}

impl AbstractBundle {
    pub fn new(rank: u64, degree: i64, genus: u64, prime: u64) -> Result<Self> {
        if rank == 0 {
            return Err(Error::ZeroRank);
        }
        Ok(AbstractBundle {
            rank,
            degree,
            genus,
            prime,
            hn: None,
        })
    }

    pub fn with_hn(mut self, hn: HnProfile) -> Result<Self> {
        if hn.rank() != self.rank || hn.degree() != Rational::from_integer(self.degree) {
            return Err(Error::InvalidArgument(
                "HN profile does not match rank and degree".into(),
            ));
        }
        self.hn = Some(hn);
        Ok(self)
    }

    pub fn profile(&self) -> HnProfile {
        self.hn.clone().unwrap_or_else(|| HnProfile {
            blocks: vec![(Rational::new(self.degree, self.rank as i64), self.rank)],
        })
    }

    /// Pull-back along a degree-`d` étale cover: degree scales by `d`, rank is
    /// unchanged and the genus follows `2g' - 2 = d (2g - 2)`.
    pub fn formal_cover_pullback(&self, d: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument(
                "cover degree must be positive".into(),
            ));
        }
        let twice = d as i64 * (2 * self.genus as i64 - 2) + 2;
        if twice < 0 || twice % 2 != 0 {
            return Err(Error::InvalidCover {
                genus: self.genus,
                degree: d,
            });
        }
        Ok(AbstractBundle {
            rank: self.rank,
            degree: self.degree * d as i64,
            genus: (twice / 2) as u64,
            prime: self.prime,
            hn: self.hn.as_ref().map(|h| h.scale(d as i64)),
        })
    }

    /// Frobenius instability bound: `μ̄` deviates from `μ` by at most
    /// `(rank - 1) · max(0, 2 genus - 2) / p`.
    pub fn mu_bar_bounds(&self) -> Result<MuBarBounds> {
        if self.prime == 0 {
            return Err(Error::InvalidArgument("prime not set".into()));
        }
        let width = Rational::new(
            (self.rank as i64 - 1) * (2 * self.genus as i64 - 2).max(0),
            self.prime as i64,
        );
        let (lo_min, hi_max) = (self.mu_min()?, self.mu_max()?);
        Ok(MuBarBounds {
            mu_bar_min: (lo_min - width, lo_min),
            mu_bar_max: (hi_max, hi_max + width),
        })
    }

    pub fn positivity_verdict(&self) -> Result<Positivity> {
        let b = self.mu_bar_bounds()?;
        let (lo, hi) = b.mu_bar_min;
        Ok(if lo.is_positive() {
            Positivity::Ample
        } else if hi.is_negative() {
            Positivity::NotNef
        } else if lo.is_zero() && hi.is_zero() {
            Positivity::Nef
        } else {
            Positivity::UnknownWithinBound
        })
    }
}

impl Slopes for AbstractBundle {
    fn slope(&self) -> Result<Rational> {
        if self.rank == 0 {
            return Err(Error::ZeroRank);
        }
        Ok(Rational::new(self.degree, self.rank as i64))
    }

    fn mu_max(&self) -> Result<Rational> {
        Ok(self.profile().mu_max())
    }

    fn mu_min(&self) -> Result<Rational> {
        Ok(self.profile().mu_min())
    }
}
