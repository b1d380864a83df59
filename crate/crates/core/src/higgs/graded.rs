//! The graded Higgs bundle `(E ⊕ E^∨, θ)` of a family of abelian varieties:
//! `θ` vanishes on `E^∨` and restricts to the Kodaira–Spencer map
//! `E → E^∨ ⊗ Ω` on `E`.

use crate::algebra::{Field, Form};
use crate::bundles::SplitBundle;
use crate::error::{Error, Result};
use crate::sheafmaps::GradedMatrix;

use super::{semistability_verdict, HiggsBundle, Verdict, Witness, OMEGA};

#[derive(Clone, Debug, PartialEq)]
pub struct GradedHiggs<K: Field> {
    hodge: Vec<i64>,
    ks: GradedMatrix<K>,
    higgs: HiggsBundle<K>,
    symmetric: bool,
}

/// Assembles `(E ⊕ E^∨, θ)` from the twists of `E` and the Kodaira–Spencer
/// matrix, entry `(i, j)` of degree `-a_i - a_j - 2`. Symmetry of `ks` is
/// required unless `skip_symmetry` is set.
pub fn graded_from_hodge<K: Field>(
    ctx: &K::Ctx,
    hodge: &[i64],
    ks: Vec<Vec<Form<K>>>,
    skip_symmetry: bool,
) -> Result<GradedHiggs<K>> {
    let g = hodge.len();
    let target: Vec<i64> = hodge.iter().map(|a| -a + OMEGA).collect();
    let ks = GradedMatrix::new(ctx, hodge.to_vec(), target, ks)?;
    if !skip_symmetry {
        for i in 0..g {
            for j in i + 1..g {
                if ks.entry(i, j) != ks.entry(j, i) {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
    }
    let mut total = hodge.to_vec();
    total.extend(hodge.iter().map(|a| -a));
    let twisted: Vec<i64> = total.iter().map(|c| c + OMEGA).collect();
    let entries = (0..2 * g)
        .map(|i| {
            (0..2 * g)
                .map(|j| {
                    if i >= g && j < g {
                        ks.entry(i - g, j).clone()
                    } else {
                        Form::zero()
                    }
                })
                .collect()
        })
        .collect();
    let theta = GradedMatrix::new(ctx, total, twisted, entries)?;
    let higgs = HiggsBundle::new(theta)?.with_hodge_rank(g);
    Ok(GradedHiggs {
        hodge: hodge.to_vec(),
        ks,
        higgs,
        symmetric: !skip_symmetry,
    })
}

impl<K: Field> GradedHiggs<K> {
    pub fn g(&self) -> usize {
        self.hodge.len()
    }

    pub fn hodge(&self) -> &[i64] {
        &self.hodge
    }

    pub fn hodge_bundle(&self) -> SplitBundle {
        SplitBundle::new(self.hodge.clone())
    }

    /// The Kodaira–Spencer map `E → E^∨ ⊗ Ω`.
    pub fn ks(&self) -> &GradedMatrix<K> {
        &self.ks
    }

    /// The `ks` entries, recovered from the assembled Higgs field.
    pub fn project_ks(&self) -> Vec<Vec<Form<K>>> {
        let g = self.g();
        (0..g)
            .map(|i| {
                (0..g)
                    .map(|j| self.higgs.theta().entry(g + i, j).clone())
                    .collect()
            })
            .collect()
    }

    pub fn higgs(&self) -> &HiggsBundle<K> {
        &self.higgs
    }

    /// Whether symmetry of `ks` was enforced at construction.
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum W2Verdict<K: Field> {
    /// A destabilising Higgs subsheaf: the family admits no lift to `W_2(k)`.
    ObstructionFound(Witness<K>),
    NoObstruction,
}

impl<K: Field> W2Verdict<K> {
    pub fn is_obstructed(&self) -> bool {
        matches!(self, W2Verdict::ObstructionFound(_))
    }
}

/// A `W_2(k)`-liftable principally polarised family has a semistable graded
/// Higgs bundle of slope zero, so instability obstructs lifting.
pub fn w2_rule<K: Field>(h: &GradedHiggs<K>) -> W2Verdict<K> {
    match semistability_verdict(h.higgs()) {
        Verdict::Unstable(w) => W2Verdict::ObstructionFound(w),
        _ => W2Verdict::NoObstruction,
    }
}
