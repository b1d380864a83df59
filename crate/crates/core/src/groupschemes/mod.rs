//! Height-one group schemes: Dieudonné modules of p-torsion groups over the
//! base field and restricted Lie algebra bundles over the line.

pub mod dieudonne;
pub mod lie;

pub use dieudonne::DieudonneModule;
pub use lie::{
    constancy_descend, free_slope0_split, lie_kernel, moret_bailly_h, ConstantGroupDatum,
    FreeSplit, LieKernel, MoretBaillyH, RestrictedLieBundle,
};
