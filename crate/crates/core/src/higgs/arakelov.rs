//! Every step of the Arakelov inequality argument, evaluated on concrete data.
//!
//! With `K = ker θ|_E`, `F = θ(E)`, `F'` its saturation in `E^∨ ⊗ Ω` and
//! `G = (E^∨ ⊗ Ω)/F'`:
//!
//! * `deg E = deg K + deg F` and `deg(E^∨ ⊗ Ω) = g(2γ - 2) - deg E = deg F' + deg G`;
//! * since `deg F ≤ deg F'`, `2 deg E ≤ g(2γ - 2) + deg K - deg G` holds always;
//! * semistability gives `deg K ≤ 0` and `rank(G)(2γ - 2) - deg G ≤ 0`;
//! * together, `deg E ≤ (g - rank G)(γ - 1)`.
//!
//! Here `γ` is the genus of the base. The last bound implies `deg E ≤ g(γ - 1)`
//! when `γ ≥ 1` or `rank G = 0`, but not in general on the line: a constant
//! family has `G = E^∨ ⊗ Ω` of full rank and `deg E = 0 > -g`. Both bounds are
//! reported.

use std::fmt;

use crate::algebra::Field;
use crate::bundles::SplitBundle;
use crate::sheafmaps::{exact_triple_analyze, kernel_bundle};

use super::graded::GradedHiggs;
use super::OMEGA;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArakelovStep {
    /// `deg E = deg K + deg F` and `deg(E^∨ ⊗ Ω) = deg F' + deg G`.
    DegreeIdentity,
    /// `deg F ≤ deg F'`.
    Saturation,
    /// `2 deg E ≤ g(2γ - 2) + deg K - deg G`.
    Chain,
    /// `deg K ≤ 0`.
    KernelNonPositive,
    /// `deg(G^∨ ⊗ Ω) = rank(G)(2γ - 2) - deg G ≤ 0`.
    QuotientDualNonPositive,
    /// `G^∨ ⊗ Ω ≅ ker θ`.
    Symmetry,
    /// `deg E ≤ (g - rank G)(γ - 1)`.
    SharpBound,
    /// `deg E ≤ g(γ - 1)`.
    StatedBound,
}

impl fmt::Display for ArakelovStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ArakelovStep::DegreeIdentity => "degree_identity",
            ArakelovStep::Saturation => "saturation",
            ArakelovStep::Chain => "chain",
            ArakelovStep::KernelNonPositive => "kernel_non_positive",
            ArakelovStep::QuotientDualNonPositive => "quotient_dual_non_positive",
            ArakelovStep::Symmetry => "symmetry",
            ArakelovStep::SharpBound => "sharp_bound",
            ArakelovStep::StatedBound => "stated_bound",
        };
        f.write_str(s)
    }
}

/// Quantities of the argument. Splitting types are present on the line only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofChain {
    pub kernel_rank: usize,
    pub kernel_degree: i64,
    pub image_degree: i64,
    pub image_sat_degree: i64,
    pub quotient_rank: usize,
    pub quotient_degree: i64,
    pub ambient_degree: i64,
    pub kernel: Option<SplitBundle>,
    pub image_sat: Option<SplitBundle>,
    pub quotient: Option<SplitBundle>,
    pub chain_lhs: i64,
    pub chain_rhs: i64,
    pub quotient_dual_degree: i64,
    /// `None` when the symmetry of `ks` was not enforced or the data is not split.
    pub symmetry: Option<bool>,
    pub sharp_bound: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArakelovReport {
    pub g: usize,
    pub genus: u64,
    pub degree: i64,
    /// `None` when the Higgs field is not available on a base of genus `> 0`.
    pub chain: Option<ProofChain>,
    pub stated_bound: i64,
}

impl ArakelovReport {
    pub fn stated_holds(&self) -> bool {
        self.degree <= self.stated_bound
    }

    /// Steps whose inequality or identity fails, in argument order.
    pub fn broken_steps(&self) -> Vec<ArakelovStep> {
        let mut out = Vec::new();
        if let Some(c) = &self.chain {
            if self.degree != c.kernel_degree + c.image_degree
                || c.ambient_degree != c.image_sat_degree + c.quotient_degree
            {
                out.push(ArakelovStep::DegreeIdentity);
            }
            if c.image_degree > c.image_sat_degree {
                out.push(ArakelovStep::Saturation);
            }
            if c.chain_lhs > c.chain_rhs {
                out.push(ArakelovStep::Chain);
            }
            if c.kernel_degree > 0 {
                out.push(ArakelovStep::KernelNonPositive);
            }
            if c.quotient_dual_degree > 0 {
                out.push(ArakelovStep::QuotientDualNonPositive);
            }
            if c.symmetry == Some(false) {
                out.push(ArakelovStep::Symmetry);
            }
            if self.degree > c.sharp_bound {
                out.push(ArakelovStep::SharpBound);
            }
        }
        if !self.stated_holds() {
            out.push(ArakelovStep::StatedBound);
        }
        out
    }

    /// The steps that hold unconditionally (identities, saturation, chain).
    pub fn bookkeeping_holds(&self) -> bool {
        !self.broken_steps().iter().any(|s| {
            matches!(
                s,
                ArakelovStep::DegreeIdentity | ArakelovStep::Saturation | ArakelovStep::Chain
            )
        })
    }

    /// Whether the data is consistent with a `W_2(k)`-lift: every step that the
    /// lifting hypothesis forces holds. Without the Higgs field, the stated
    /// bound is used.
    pub fn consistent_with_lift(&self) -> bool {
        match &self.chain {
            Some(c) => {
                c.kernel_degree <= 0
                    && c.quotient_dual_degree <= 0
                    && self.degree <= c.sharp_bound
                    && c.symmetry != Some(false)
            }
            None => self.stated_holds(),
        }
    }
}

/// Runs the argument on `h` over a base of genus `genus`. The Higgs field of
/// `h` lives on the line; on a base of positive genus only a vanishing field
/// carries over, and otherwise the intermediate steps are not evaluated.
pub fn arakelov_pipeline<K: Field>(h: &GradedHiggs<K>, genus: u64) -> ArakelovReport {
    let g = h.g();
    let degree = h.hodge_bundle().degree();
    let stated_bound = g as i64 * (genus as i64 - 1);
    let canonical = 2 * genus as i64 - 2;
    let ambient_degree = g as i64 * canonical - degree;
    let chain = if genus == 0 {
        Some(concrete_chain(h, ambient_degree))
    } else if h.ks().is_zero() {
        let (kr, kd) = (g, degree);
        let (qr, qd) = (g, ambient_degree);
        Some(ProofChain {
            kernel_rank: kr,
            kernel_degree: kd,
            image_degree: 0,
            image_sat_degree: 0,
            quotient_rank: qr,
            quotient_degree: qd,
            ambient_degree,
            kernel: None,
            image_sat: None,
            quotient: None,
            chain_lhs: 2 * degree,
            chain_rhs: g as i64 * canonical + kd - qd,
            quotient_dual_degree: qr as i64 * canonical - qd,
            symmetry: None,
            sharp_bound: (g - qr) as i64 * (genus as i64 - 1),
        })
    } else {
        None
    };
    ArakelovReport {
        g,
        genus,
        degree,
        chain,
        stated_bound,
    }
}

fn concrete_chain<K: Field>(h: &GradedHiggs<K>, ambient_degree: i64) -> ProofChain {
    let g = h.g();
    let triple = exact_triple_analyze(h.ks()).expect("validated Kodaira-Spencer map");
    let quotient = triple.cokernel.clone();
    let qd = quotient.degree();
    let qr = quotient.rank();
    let kd = triple.kernel.degree();
    let symmetry = if h.is_symmetric() {
        let g_dual_omega = SplitBundle::new(quotient.twists().iter().map(|c| -c + OMEGA).collect());
        let transposed = kernel_bundle(&h.ks().dual().twist(OMEGA))
            .expect("validated")
            .splitting;
        Some(g_dual_omega == triple.kernel && transposed == triple.kernel)
    } else {
        None
    };
    ProofChain {
        kernel_rank: triple.kernel.rank(),
        kernel_degree: kd,
        image_degree: triple.image_degree,
        image_sat_degree: triple.image_sat.degree(),
        quotient_rank: qr,
        quotient_degree: qd,
        ambient_degree,
        kernel: Some(triple.kernel),
        image_sat: Some(triple.image_sat),
        quotient: Some(quotient),
        chain_lhs: 2 * h.hodge_bundle().degree(),
        chain_rhs: g as i64 * OMEGA + kd - qd,
        quotient_dual_degree: qr as i64 * OMEGA - qd,
        symmetry,
        sharp_bound: -((g - qr) as i64),
    }
}
