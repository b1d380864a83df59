//! Top-level checkers: the Moret-Bailly fixture, the `W_2(k)`
//! obstruction report, the isogeny reduction loop and Zarhin's trick.

pub mod family;
pub mod reduction;

pub use family::{
    moret_bailly_family, w2_obstruction_report, ArakelovCert, FamilyDescriptor, HodgeData,
    LiftVerdict, PositivityCert, TraceExpectation, W2Report,
};
pub use reduction::{
    moret_bailly_state, reduction_run, reduction_step, Case, IsogenyOracle, ListOracle,
    ReductionRun, ReductionState, ReductionVerdict, RepeatPolicy, StepOutcome, StepRecord,
};

use crate::error::{Error, Result};

/// `Z = X^4 × (X^t)^4` is principally polarised of relative dimension `8g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Zarhin {
    pub dim: usize,
    pub principally_polarized: bool,
    /// `4 deg(Hodge X) + 4 deg(Hodge X^t)`, when both are supplied.
    pub hodge_degree: Option<i64>,
}

pub fn zarkhin(g: usize, hodge_x: Option<i64>, hodge_dual: Option<i64>) -> Result<Zarhin> {
    if g == 0 {
        return Err(Error::InvalidArgument(
            "relative dimension must be positive".into(),
        ));
    }
    Ok(Zarhin {
        dim: 8 * g,
        principally_polarized: true,
        hodge_degree: hodge_x.zip(hodge_dual).map(|(a, b)| 4 * a + 4 * b),
    })
}
