//! Exact slope, Higgs-field and height-one group scheme calculus for vector
//! bundles on the projective line in characteristic `p`.
//!
//! Every layer is generic over the scalar [`algebra::Field`]; the aliases at
//! the crate root fix the scalar to the run-time finite field [`Gf`].

pub mod algebra;
pub mod bundles;
pub mod engine;
pub mod error;
pub mod groupschemes;
pub mod higgs;
pub mod sheafmaps;

pub use algebra::{GaloisField, Gf};
pub use bundles::{
    hom_dimension, hom_vanishes, AbstractBundle, HnProfile, MuBarBounds, Positivity, Rational,
    Slopes, SplitBundle,
};
pub use error::{Error, Result};

pub type Form = algebra::Form<Gf>;
pub type Poly = algebra::Poly<Gf>;
pub type RatFunc = algebra::RatFunc<Gf>;
pub type Matrix = algebra::Matrix<Gf>;
pub type GradedMatrix = sheafmaps::GradedMatrix<Gf>;
pub type Subsheaf = sheafmaps::Subsheaf<Gf>;
pub type HiggsBundle = higgs::HiggsBundle<Gf>;
pub type GradedHiggs = higgs::GradedHiggs<Gf>;
pub type DieudonneModule = groupschemes::DieudonneModule<Gf>;
pub type RestrictedLieBundle = groupschemes::RestrictedLieBundle<Gf>;
pub type ConstantGroupDatum = groupschemes::ConstantGroupDatum<Gf>;
pub type FamilyDescriptor = engine::FamilyDescriptor<Gf>;
pub type ReductionState = engine::ReductionState<Gf>;
pub type ListOracle = engine::ListOracle<Gf>;
