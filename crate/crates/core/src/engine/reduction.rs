//! The two-case reduction loop run on the Lie algebra of an isogeny
//! `φ: B_0 × C → X` from a constant abelian scheme.
//!
//! Only the Lie map `O^g → Lie(X)` and an exponent bound on the order of
//! `ker φ` are tracked. When the Lie map vanishes, `φ` factors through the
//! relative Frobenius and `p^g` leaves the budget. Otherwise its kernel is a
//! constant height-one subgroup of rank `r`, which is divided out, and `p^r`
//! leaves the budget. Running out of budget contradicts finiteness of `ker φ`.

use std::fmt;

use crate::algebra::FiniteField;
use crate::bundles::{Slopes, SplitBundle};
use crate::error::{Error, Result};
use crate::groupschemes::free_slope0_split;
use crate::sheafmaps::{kernel_bundle, GradedMatrix};

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionState<K: FiniteField> {
    g: usize,
    budget_exp: u64,
    lie_phi: GradedMatrix<K>,
}

impl<K: FiniteField> ReductionState<K> {
    /// `lie_phi` maps `O^g` to the Lie algebra, whose twists it fixes.
    pub fn new(budget_exp: u64, lie_phi: GradedMatrix<K>) -> Result<Self> {
        let g = lie_phi.cols();
        check_lie_matrix(&lie_phi, lie_phi.target(), g).map_err(Error::InvalidArgument)?;
        Ok(ReductionState {
            g,
            budget_exp,
            lie_phi,
        })
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn budget_exp(&self) -> u64 {
        self.budget_exp
    }

    pub fn lie_twists(&self) -> &[i64] {
        self.lie_phi.target()
    }

    pub fn lie_target(&self) -> SplitBundle {
        self.lie_phi.target_bundle()
    }

    pub fn lie_phi(&self) -> &GradedMatrix<K> {
        &self.lie_phi
    }
}

fn check_lie_matrix<K: FiniteField>(
    m: &GradedMatrix<K>,
    target: &[i64],
    g: usize,
) -> std::result::Result<(), String> {
    if m.target() != target {
        return Err(format!(
            "target twists {:?}, expected {:?}",
            m.target(),
            target
        ));
    }
    if m.source() != vec![0; g].as_slice() {
        return Err(format!(
            "source twists {:?}, expected {g} trivial summands",
            m.source()
        ));
    }
    if m.rows() != g {
        return Err(format!("Lie algebra has rank {}, expected {g}", m.rows()));
    }
    m.validate().map_err(|e| e.to_string())
}

/// Supplies the Lie map of the next isogeny after each reduction step.
pub trait IsogenyOracle<K: FiniteField> {
    /// `step` is the index of the step about to run, starting at 1.
    fn next(&mut self, step: usize, state: &ReductionState<K>) -> Option<GradedMatrix<K>>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepeatPolicy {
    /// Keep supplying the last matrix.
    RepeatLast,
    /// Start over from the first matrix.
    Cycle,
    /// Supply nothing once the list is used up.
    Once,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ListOracle<K: FiniteField> {
    matrices: Vec<GradedMatrix<K>>,
    policy: RepeatPolicy,
    pos: usize,
}

impl<K: FiniteField> ListOracle<K> {
    pub fn new(matrices: Vec<GradedMatrix<K>>, policy: RepeatPolicy) -> Self {
        ListOracle {
            matrices,
            policy,
            pos: 0,
        }
    }
}

impl<K: FiniteField> IsogenyOracle<K> for ListOracle<K> {
    fn next(&mut self, _step: usize, _state: &ReductionState<K>) -> Option<GradedMatrix<K>> {
        if self.matrices.is_empty() {
            return None;
        }
        let i = match self.policy {
            _ if self.pos < self.matrices.len() => self.pos,
            RepeatPolicy::RepeatLast => self.matrices.len() - 1,
            RepeatPolicy::Cycle => self.pos % self.matrices.len(),
            RepeatPolicy::Once => return None,
        };
        self.pos += 1;
        Some(self.matrices[i].clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Case {
    /// `μ_max(Lie) > 0`: nothing to reduce.
    MuMaxPositive,
    /// The Lie map vanishes: factor through Frobenius.
    FrobeniusFactor,
    /// The Lie map is nonzero: divide out its constant kernel.
    ConstantKernel,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::MuMaxPositive => "mu_max_positive",
            Case::FrobeniusFactor => "case_i",
            Case::ConstantKernel => "case_ii",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReductionVerdict {
    /// `μ_max(Lie(X)) > 0`.
    MuMaxPositive,
    /// Injective Lie map, so `deg Lie(X) ≥ 0`, which a non-isotrivial
    /// family forbids.
    DegreeContradiction,
    /// The kernel order would drop below 1.
    ContradictionReached,
    /// The step limit was hit first.
    StepLimit,
    /// The oracle stopped supplying matrices.
    OracleExhausted,
}

impl fmt::Display for ReductionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReductionVerdict::MuMaxPositive => "MuMaxPositive",
            ReductionVerdict::DegreeContradiction => "DegreeContradiction",
            ReductionVerdict::ContradictionReached => "ContradictionReached",
            ReductionVerdict::StepLimit => "StepLimit",
            ReductionVerdict::OracleExhausted => "OracleExhausted",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub step: usize,
    pub case: Case,
    pub kernel_rank: Option<usize>,
    pub consumed: u64,
    pub budget_before: u64,
    pub budget_after: u64,
    pub verdict: Option<ReductionVerdict>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StepOutcome<K: FiniteField> {
    Next(ReductionState<K>),
    Done(ReductionVerdict),
}

/// One step; `step` is its 1-based index, used in diagnostics.
pub fn reduction_step<K: FiniteField>(
    state: &ReductionState<K>,
    oracle: &mut dyn IsogenyOracle<K>,
    step: usize,
) -> Result<(StepRecord, StepOutcome<K>)> {
    let budget = state.budget_exp;
    let record = |case, kernel_rank, consumed: u64, verdict| StepRecord {
        step,
        case,
        kernel_rank,
        consumed,
        budget_before: budget,
        budget_after: budget.saturating_sub(consumed),
        verdict,
    };
    let lie = state.lie_target();
    if lie.mu_max()? > 0.into() {
        let v = ReductionVerdict::MuMaxPositive;
        return Ok((
            record(Case::MuMaxPositive, None, 0, Some(v)),
            StepOutcome::Done(v),
        ));
    }
    let (case, kernel_rank, consumed) = if state.lie_phi.is_zero() {
        (Case::FrobeniusFactor, None, state.g as u64)
    } else {
        let r = constant_kernel_rank(state, step)?;
        if r == 0 {
            // O^g embeds in Lie(X), so deg Lie(X) >= 0 against non-isotriviality
            let v = ReductionVerdict::DegreeContradiction;
            return Ok((
                record(Case::ConstantKernel, Some(0), 0, Some(v)),
                StepOutcome::Done(v),
            ));
        }
        (Case::ConstantKernel, Some(r), r as u64)
    };
    if consumed > budget {
        let v = ReductionVerdict::ContradictionReached;
        return Ok((
            record(case, kernel_rank, consumed, Some(v)),
            StepOutcome::Done(v),
        ));
    }
    let rec = record(case, kernel_rank, consumed, None);
    let mut next = ReductionState {
        g: state.g,
        budget_exp: budget - consumed,
        lie_phi: state.lie_phi.clone(),
    };
    match oracle.next(step + 1, &next) {
        None => {
            let mut rec = rec;
            rec.verdict = Some(ReductionVerdict::OracleExhausted);
            Ok((rec, StepOutcome::Done(ReductionVerdict::OracleExhausted)))
        }
        Some(m) => {
            check_lie_matrix(&m, state.lie_twists(), state.g).map_err(|reason| {
                Error::OracleDegreeMismatch {
                    step: step + 1,
                    reason,
                }
            })?;
            next.lie_phi = m;
            Ok((rec, StepOutcome::Next(next)))
        }
    }
}

/// Rank of the kernel of a nonzero Lie map into a bundle with `μ_max ≤ 0`,
/// after checking exactly that the map dies in the negative part and that
/// its kernel is a constant subbundle.
fn constant_kernel_rank<K: FiniteField>(state: &ReductionState<K>, step: usize) -> Result<usize> {
    let violated = |reason: String| Error::HomVanishingViolated { step, reason };
    let phi = &state.lie_phi;
    for (i, &b) in phi.target().iter().enumerate() {
        if b < 0 && (0..phi.cols()).any(|j| !phi.entry(i, j).is_zero()) {
            return Err(violated(format!("row {i} maps O into O({b})")));
        }
    }
    let kernel = kernel_bundle(phi)?;
    if kernel.splitting.twists().iter().any(|&c| c != 0) {
        return Err(violated(format!(
            "kernel {} is not constant",
            kernel.splitting
        )));
    }
    if kernel.splitting.rank() == 0 {
        return Ok(0);
    }
    let split = free_slope0_split(&kernel.sheaf).map_err(|e| violated(e.to_string()))?;
    Ok(split.sub.cols())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionRun<K: FiniteField> {
    pub trace: Vec<StepRecord>,
    pub verdict: ReductionVerdict,
    pub final_state: ReductionState<K>,
}

/// Iterates [`reduction_step`] for at most `max_steps` steps. Every step
/// that does not conclude consumes at least one unit of budget, so at most
/// `budget_exp + 1` steps run.
pub fn reduction_run<K: FiniteField>(
    state: ReductionState<K>,
    oracle: &mut dyn IsogenyOracle<K>,
    max_steps: usize,
) -> Result<ReductionRun<K>> {
    if max_steps == 0 {
        return Err(Error::InvalidArgument(
            "max_steps must be at least 1".into(),
        ));
    }
    let mut trace = Vec::new();
    let mut state = state;
    for step in 1..=max_steps {
        let (rec, out) = reduction_step(&state, oracle, step)?;
        trace.push(rec);
        match out {
            StepOutcome::Done(verdict) => {
                return Ok(ReductionRun {
                    trace,
                    verdict,
                    final_state: state,
                })
            }
            StepOutcome::Next(s) => state = s,
        }
    }
    Ok(ReductionRun {
        trace,
        verdict: ReductionVerdict::StepLimit,
        final_state: state,
    })
}

/// The reduction state of the Moret-Bailly family: `Lie(X) = O(-p) ⊕ O(1)`
/// receiving `O²` through `(U V)` on the second summand.
pub fn moret_bailly_state<K: FiniteField>(ctx: &K::Ctx, budget_exp: u64) -> ReductionState<K> {
    use crate::algebra::Form;
    let p = K::characteristic(ctx) as i64;
    let phi = GradedMatrix::new(
        ctx,
        vec![0, 0],
        vec![-p, 1],
        vec![
            vec![Form::zero(), Form::zero()],
            vec![Form::u(ctx), Form::v(ctx)],
        ],
    )
    .expect("degree one entries");
    ReductionState::new(budget_exp, phi).expect("valid fixture")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{GaloisField, Gf, Matrix};

    type Form = crate::algebra::Form<Gf>;

    #[test]
    fn case_one_runs_out_of_budget() {
        let f = GaloisField::prime(3).unwrap();
        let zero = GradedMatrix::<Gf>::zero(&f, vec![0, 0], vec![-1, -1]);
        let s = ReductionState::new(3, zero.clone()).unwrap();
        let mut o = ListOracle::new(vec![zero], RepeatPolicy::RepeatLast);
        let run = reduction_run(s, &mut o, 10).unwrap();
        assert_eq!(run.verdict, ReductionVerdict::ContradictionReached);
        assert_eq!(run.trace.len(), 2);
        assert_eq!(run.trace[0].case, Case::FrobeniusFactor);
        assert_eq!(
            (run.trace[0].budget_before, run.trace[0].budget_after),
            (3, 1)
        );
    }

    #[test]
    fn case_two_divides_constant_kernel() {
        let f = GaloisField::prime(3).unwrap();
        let one = Form::constant(f.one());
        let phi = GradedMatrix::new(
            &f,
            vec![0, 0],
            vec![0, -2],
            vec![vec![one, Form::zero()], vec![Form::zero(), Form::zero()]],
        )
        .unwrap();
        let s = ReductionState::new(2, phi.clone()).unwrap();
        let mut o = ListOracle::new(vec![phi], RepeatPolicy::RepeatLast);
        let run = reduction_run(s, &mut o, 10).unwrap();
        assert_eq!(run.verdict, ReductionVerdict::ContradictionReached);
        assert_eq!(run.trace.len(), 3);
        assert!(run
            .trace
            .iter()
            .all(|r| r.case == Case::ConstantKernel && r.kernel_rank == Some(1)));
    }

    #[test]
    fn moret_bailly_is_immediate() {
        let f = GaloisField::prime(5).unwrap();
        let s = moret_bailly_state::<Gf>(&f, 4);
        assert_eq!(s.lie_target(), SplitBundle::new(vec![1, -5]));
        let mut o = ListOracle::new(vec![], RepeatPolicy::Once);
        let run = reduction_run(s, &mut o, 5).unwrap();
        assert_eq!(run.verdict, ReductionVerdict::MuMaxPositive);
        assert_eq!(run.trace.len(), 1);
    }

    #[test]
    fn injective_constant_map_gives_degree_contradiction() {
        let f = GaloisField::prime(2).unwrap();
        let id = GradedMatrix::constant(&f, 0, &Matrix::identity(&f, 2));
        let s = ReductionState::new(5, id).unwrap();
        let mut o = ListOracle::new(vec![], RepeatPolicy::Once);
        let run = reduction_run(s, &mut o, 5).unwrap();
        assert_eq!(run.verdict, ReductionVerdict::DegreeContradiction);
        assert_eq!(run.trace[0].kernel_rank, Some(0));
        let zero = GradedMatrix::<Gf>::zero(&f, vec![0], vec![-1]);
        let run = reduction_run(ReductionState::new(0, zero).unwrap(), &mut o, 5).unwrap();
        assert_eq!(run.verdict, ReductionVerdict::ContradictionReached);
    }

    #[test]
    fn oracle_degree_checked() {
        let f = GaloisField::prime(3).unwrap();
        let zero = GradedMatrix::<Gf>::zero(&f, vec![0, 0], vec![-1, -1]);
        let wrong = GradedMatrix::<Gf>::zero(&f, vec![0, 0], vec![0, -2]);
        let s = ReductionState::new(5, zero).unwrap();
        let mut o = ListOracle::new(vec![wrong], RepeatPolicy::RepeatLast);
        assert!(matches!(
            reduction_run(s, &mut o, 5),
            Err(Error::OracleDegreeMismatch { step: 2, .. })
        ));
    }
}
