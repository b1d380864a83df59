//! Family descriptors and the combined obstruction report for lifting a
//! family of principally polarised abelian varieties to `W_2(k)`.

use std::fmt;

use crate::algebra::{FiniteField, Form};
use crate::bundles::{AbstractBundle, Positivity, Rational, Slopes, SplitBundle};
use crate::error::{Error, Result};
use crate::higgs::{
    arakelov_pipeline, graded_from_hodge, w2_rule, ArakelovReport, GradedHiggs, W2Verdict,
};

/// Hodge bundle data: an explicit splitting on the line, or numerical data
/// on a curve of any genus.
#[derive(Clone, Debug, PartialEq)]
pub enum HodgeData {
    Split(SplitBundle),
    Abstract(AbstractBundle),
}

impl HodgeData {
    pub fn rank(&self) -> usize {
        match self {
            HodgeData::Split(b) => b.rank(),
            HodgeData::Abstract(b) => b.rank as usize,
        }
    }

    pub fn degree(&self) -> i64 {
        match self {
            HodgeData::Split(b) => b.degree(),
            HodgeData::Abstract(b) => b.degree,
        }
    }

    /// `μ_min`; an abstract bundle without HN data counts as semistable.
    pub fn mu_min(&self) -> Option<Rational> {
        match self {
            HodgeData::Split(b) => b.mu_min().ok(),
            HodgeData::Abstract(b) => b.mu_min().ok(),
        }
    }

    pub fn positivity(&self) -> Result<Positivity> {
        match self {
            HodgeData::Split(b) => b.positivity_verdict(),
            HodgeData::Abstract(b) => b.positivity_verdict(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyDescriptor<K: FiniteField> {
    pub ctx: K::Ctx,
    pub g: usize,
    pub genus: u64,
    pub prime: u64,
    pub hodge: HodgeData,
    /// Kodaira–Spencer matrix on the line, entry `(i, j)` of degree `-a_i - a_j - 2`.
    pub ks: Option<Vec<Vec<Form<K>>>>,
    pub non_isotrivial: bool,
    pub trace_nontrivial: Option<bool>,
}

impl<K: FiniteField> FamilyDescriptor<K> {
    pub fn validate(&self) -> Result<()> {
        let bad = |s: String| Err(Error::InconsistentDescriptor(s));
        if self.g == 0 {
            return bad("relative dimension must be positive".into());
        }
        if K::characteristic(&self.ctx) != self.prime {
            return bad(format!(
                "field has characteristic {}, descriptor says {}",
                K::characteristic(&self.ctx),
                self.prime
            ));
        }
        if self.hodge.rank() != self.g {
            return bad(format!(
                "Hodge bundle has rank {}, expected {}",
                self.hodge.rank(),
                self.g
            ));
        }
        match &self.hodge {
            HodgeData::Split(_) if self.genus != 0 => {
                return bad("split Hodge data is only meaningful on the line".into())
            }
            HodgeData::Abstract(b) if b.genus != self.genus || b.prime != self.prime => {
                return bad("abstract Hodge bundle disagrees on genus or prime".into())
            }
            _ => {}
        }
        if self.ks.is_some() && !matches!(self.hodge, HodgeData::Split(_)) {
            return bad("a Kodaira-Spencer matrix needs split Hodge data".into());
        }
        if self.non_isotrivial && self.hodge.degree() < 1 {
            return bad(format!(
                "non-isotrivial family has Hodge degree {} < 1",
                self.hodge.degree()
            ));
        }
        self.graded_higgs().transpose()?;
        Ok(())
    }

    /// The graded Higgs bundle, when `ks` is given.
    pub fn graded_higgs(&self) -> Option<Result<GradedHiggs<K>>> {
        match (&self.hodge, &self.ks) {
            (HodgeData::Split(b), Some(ks)) => {
                Some(graded_from_hodge(&self.ctx, b.twists(), ks.clone(), false))
            }
            _ => None,
        }
    }
}

/// The Moret-Bailly family over the line: `Lie = O(-p) ⊕ O(1)`, so the Hodge
/// bundle is `O(p) ⊕ O(-1)` and the only entry of `ks` allowed to be nonzero
/// is the constant one on `O(-1)`.
pub fn moret_bailly_family<K: FiniteField>(ctx: &K::Ctx) -> FamilyDescriptor<K> {
    let p = K::characteristic(ctx);
    // the Hodge twists are kept in the order [p, -1]
    let ks = vec![
        vec![Form::zero(), Form::zero()],
        vec![Form::zero(), Form::constant(K::one_in(ctx))],
    ];
    FamilyDescriptor {
        ctx: ctx.clone(),
        g: 2,
        genus: 0,
        prime: p,
        hodge: HodgeData::Split(SplitBundle::new(vec![p as i64, -1])),
        ks: Some(ks),
        non_isotrivial: true,
        trace_nontrivial: None,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PositivityCert {
    pub mu_min: Option<Rational>,
    pub verdict: Positivity,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ArakelovCert {
    pub degree: i64,
    /// `g(γ - 1)`.
    pub stated_bound: i64,
    /// The bound actually forced by liftability: the sharp bound when the
    /// Higgs field is available, `g(γ - 1)` in positive genus, and `0` on the
    /// line, where every sharp bound is at most `0`.
    pub effective_bound: i64,
    pub violated: bool,
    pub report: Option<ArakelovReport>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceExpectation {
    pub expected_not_nef: bool,
    pub confirmed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftVerdict {
    NotW2Liftable,
    Inconclusive,
}

impl fmt::Display for LiftVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LiftVerdict::NotW2Liftable => "NotW2Liftable",
            LiftVerdict::Inconclusive => "Inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct W2Report<K: FiniteField> {
    pub positivity: PositivityCert,
    pub higgs: Option<W2Verdict<K>>,
    pub arakelov: ArakelovCert,
    pub trace: Option<TraceExpectation>,
    pub verdict: LiftVerdict,
}

pub fn w2_obstruction_report<K: FiniteField>(fam: &FamilyDescriptor<K>) -> Result<W2Report<K>> {
    fam.validate()?;
    let positivity = PositivityCert {
        mu_min: fam.hodge.mu_min(),
        verdict: fam.hodge.positivity()?,
    };
    let graded = fam.graded_higgs().transpose()?;
    let higgs = graded.as_ref().map(w2_rule);
    let report = graded.as_ref().map(|h| arakelov_pipeline(h, fam.genus));
    let degree = fam.hodge.degree();
    let stated_bound = fam.g as i64 * (fam.genus as i64 - 1);
    let effective_bound = match report.as_ref().and_then(|r| r.chain.as_ref()) {
        Some(c) => c.sharp_bound,
        None if fam.genus == 0 => 0,
        None => stated_bound,
    };
    let arakelov = ArakelovCert {
        degree,
        stated_bound,
        effective_bound,
        violated: degree > effective_bound,
        report,
    };
    let trace = match (fam.trace_nontrivial, fam.non_isotrivial) {
        (Some(true), true) => {
            let confirmed = positivity.verdict == Positivity::NotNef;
            if matches!(positivity.verdict, Positivity::Nef | Positivity::Ample) {
                return Err(Error::InconsistentDescriptor(format!(
                    "non-trivial trace forces a non-nef Hodge bundle, data says {}",
                    positivity.verdict
                )));
            }
            Some(TraceExpectation {
                expected_not_nef: true,
                confirmed,
            })
        }
        _ => None,
    };
    let obstructed = higgs.as_ref().is_some_and(|h| h.is_obstructed()) || arakelov.violated;
    Ok(W2Report {
        positivity,
        higgs,
        arakelov,
        trace,
        verdict: if obstructed {
            LiftVerdict::NotW2Liftable
        } else {
            LiftVerdict::Inconclusive
        },
    })
}
