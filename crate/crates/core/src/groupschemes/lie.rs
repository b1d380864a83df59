//! Restricted Lie algebra bundles of height-one group schemes over the line.
//!
//! A bundle `L = ⊕ O(a_i)` carries a p-map, a linear map `F*L → L`, where
//! `F*L = ⊕ O(p·a_i)`. Its entry `(i, j)` has degree `a_i - p·a_j`.

use crate::algebra::{FiniteField, Form, Matrix};
use crate::bundles::SplitBundle;
use crate::error::{Error, Result};
use crate::sheafmaps::{kernel_bundle, GradedMatrix, Subsheaf};

use super::dieudonne::twist;

#[derive(Clone, Debug, PartialEq)]
pub struct RestrictedLieBundle<K: FiniteField> {
    pmap: GradedMatrix<K>,
}

impl<K: FiniteField> RestrictedLieBundle<K> {
    pub fn new(ctx: &K::Ctx, twists: Vec<i64>, pmap: Vec<Vec<Form<K>>>) -> Result<Self> {
        let p = K::characteristic(ctx) as i64;
        let source = twists.iter().map(|a| p * a).collect();
        Ok(RestrictedLieBundle {
            pmap: GradedMatrix::new(ctx, source, twists, pmap)?,
        })
    }

    /// The abelian p-Lie algebra: zero p-map.
    pub fn abelian(ctx: &K::Ctx, twists: Vec<i64>) -> Self {
        let p = K::characteristic(ctx) as i64;
        let source = twists.iter().map(|a| p * a).collect();
        RestrictedLieBundle {
            pmap: GradedMatrix::zero(ctx, source, twists),
        }
    }

    pub fn from_pmap(pmap: GradedMatrix<K>) -> Result<Self> {
        let p = K::characteristic(pmap.ctx()) as i64;
        let expected: Vec<i64> = pmap.target().iter().map(|a| p * a).collect();
        if pmap.source() != expected.as_slice() {
            return Err(Error::ShapeMismatch {
                rows: pmap.rows(),
                cols: pmap.cols(),
            });
        }
        pmap.validate()?;
        Ok(RestrictedLieBundle { pmap })
    }

    pub fn ctx(&self) -> &K::Ctx {
        self.pmap.ctx()
    }

    pub fn twists(&self) -> &[i64] {
        self.pmap.target()
    }

    pub fn bundle(&self) -> SplitBundle {
        SplitBundle::new(self.twists().to_vec())
    }

    pub fn rank(&self) -> usize {
        self.twists().len()
    }

    pub fn pmap(&self) -> &GradedMatrix<K> {
        &self.pmap
    }

    /// `f ∘ φ_self = φ_other ∘ F*f` for `f: self → other`.
    pub fn is_morphism(&self, other: &Self, f: &GradedMatrix<K>) -> bool {
        if f.source() != self.twists() || f.target() != other.twists() {
            return false;
        }
        let lhs = f.compose(&self.pmap).expect("shapes checked");
        let rhs = other
            .pmap
            .compose(&f.frobenius_pullback(1))
            .expect("shapes checked");
        lhs == rhs
    }
}

/// Kernel of an equivariant map with its induced p-map, in the basis of
/// splitting generators of the saturated kernel.
#[derive(Clone, Debug, PartialEq)]
pub struct LieKernel<K: FiniteField> {
    pub lie: RestrictedLieBundle<K>,
    /// The inclusion `ker f → L_1`.
    pub inclusion: GradedMatrix<K>,
}

pub fn lie_kernel<K: FiniteField>(
    f: &GradedMatrix<K>,
    l1: &RestrictedLieBundle<K>,
    l2: &RestrictedLieBundle<K>,
) -> Result<LieKernel<K>> {
    f.validate()?;
    if !l1.is_morphism(l2, f) {
        return Err(Error::NotEquivariant);
    }
    let inclusion = kernel_bundle(f)?.sheaf.generators().clone();
    // φ_1 ∘ F*ι lands in ker f, so it factors through ι
    let rhs = l1.pmap.compose(&inclusion.frobenius_pullback(1))?;
    let psi = inclusion
        .solve_right(&rhs)
        .expect("equivariant maps preserve the saturated kernel");
    Ok(LieKernel {
        lie: RestrictedLieBundle::from_pmap(psi)?,
        inclusion,
    })
}

/// A p-Lie algebra over the constant field: `x ↦ P·x^{(p)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantGroupDatum<K: FiniteField> {
    pmat: Matrix<K>,
}

impl<K: FiniteField> ConstantGroupDatum<K> {
    pub fn new(pmat: Matrix<K>) -> Result<Self> {
        if pmat.rows() != pmat.cols() {
            return Err(Error::ShapeMismatch {
                rows: pmat.rows(),
                cols: pmat.cols(),
            });
        }
        Ok(ConstantGroupDatum { pmat })
    }

    pub fn dim(&self) -> usize {
        self.pmat.rows()
    }

    pub fn pmat(&self) -> &Matrix<K> {
        &self.pmat
    }

    pub fn apply(&self, x: &[K]) -> Vec<K> {
        let tx: Vec<K> = x.iter().map(|c| c.frobenius()).collect();
        self.pmat.mul_vec(&tx)
    }

    /// `h: self → other` commutes with the p-maps: `h·P = P'·h^{(p)}`.
    pub fn is_morphism(&self, other: &Self, h: &Matrix<K>) -> bool {
        h.rows() == other.dim()
            && h.cols() == self.dim()
            && h.mul(&self.pmat) == other.pmat.mul(&twist(h))
    }

    /// Pull-back to a p-Lie bundle with trivial underlying bundle.
    pub fn to_bundle(&self) -> RestrictedLieBundle<K> {
        let pmap = GradedMatrix::constant(self.pmat.ctx(), 0, &self.pmat);
        RestrictedLieBundle::from_pmap(pmap).expect("degree-zero entries")
    }
}

/// A p-Lie bundle with trivial underlying bundle descends to the base field.
pub fn constancy_descend<K: FiniteField>(
    l: &RestrictedLieBundle<K>,
) -> Result<ConstantGroupDatum<K>> {
    if l.twists().iter().any(|&a| a != 0) {
        return Err(Error::NotConstant(l.twists().to_vec()));
    }
    let pmat = l
        .pmap
        .constant_part()
        .expect("entries of a p-map on a trivial bundle are constants");
    ConstantGroupDatum::new(pmat)
}

/// `O^n = S ⊕ C` for a saturated degree-zero subsheaf `S` of the trivial
/// bundle: constant bases of `S` and of a coordinate complement `C`.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeSplit<K: FiniteField> {
    pub sub: Matrix<K>,
    pub complement: Matrix<K>,
}

pub fn free_slope0_split<K: FiniteField>(s: &Subsheaf<K>) -> Result<FreeSplit<K>> {
    let ctx = s.ctx().clone();
    let n = s.ambient().len();
    if s.ambient().iter().any(|&a| a != 0) {
        return Err(Error::NotTrivialAmbient);
    }
    s.require_saturated()?;
    let deg = s.degree();
    if deg != 0 {
        return Err(Error::NotSlopeZero(deg));
    }
    let sections = s.sections(0);
    let constants: Vec<Vec<K>> = sections
        .iter()
        .map(|col| {
            col.iter()
                .map(|f| f.coeffs().first().copied().unwrap_or(K::zero_in(&ctx)))
                .collect()
        })
        .collect();
    let mut basis: Vec<Vec<K>> = if constants.is_empty() {
        Vec::new()
    } else {
        Matrix::from_rows(&ctx, constants).row_space_basis()
    };
    if basis.len() != s.rank() {
        // a degree-zero saturated subsheaf of O^n is trivial
        return Err(Error::NotSlopeZero(deg));
    }
    let sub = Matrix::from_cols(&ctx, n, &basis);
    let mut comp = Vec::new();
    for i in 0..n {
        let mut e = vec![K::zero_in(&ctx); n];
        e[i] = K::one_in(&ctx);
        let mut trial = basis.clone();
        trial.push(e.clone());
        if Matrix::from_rows(&ctx, trial).rank() == basis.len() + 1 {
            basis.push(e.clone());
            comp.push(e);
        }
    }
    Ok(FreeSplit {
        sub,
        complement: Matrix::from_cols(&ctx, n, &comp),
    })
}

/// The Lie algebra `O(-1) ⊂ O²` of the family of `α_p` in the Moret-Bailly
/// family: abelian, included by `(V, -U)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MoretBaillyH<K: FiniteField> {
    pub lie: RestrictedLieBundle<K>,
    pub inclusion: GradedMatrix<K>,
}

pub fn moret_bailly_h<K: FiniteField>(ctx: &K::Ctx) -> MoretBaillyH<K> {
    let (u, v) = (Form::u(ctx), Form::v(ctx));
    let inclusion = GradedMatrix::new(ctx, vec![-1], vec![0, 0], vec![vec![v], vec![-&u]])
        .expect("degree one entries");
    MoretBaillyH {
        lie: RestrictedLieBundle::abelian(ctx, vec![-1]),
        inclusion,
    }
}
