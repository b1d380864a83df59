//! Morphisms of split bundles on the projective line: kernels, images,
//! saturation and cokernels with exact degree bookkeeping.

pub mod graded;
pub mod subsheaf;

pub use graded::GradedMatrix;
pub use subsheaf::{column_in_span, homogenize_columns, maximal_minor_gcd, subsets, Subsheaf};

use crate::algebra::{rat_kernel, Field};
use crate::bundles::SplitBundle;
use crate::error::Result;

/// Saturated kernel of a bundle map together with its splitting type.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelBundle<K: Field> {
    pub sheaf: Subsheaf<K>,
    pub splitting: SplitBundle,
}

/// The kernel of `m` as a saturated subsheaf of its source.
///
/// The generic kernel is computed over the function field, each basis vector
/// is cleared of denominators and content, homogenised at the least possible
/// twist and the resulting subsheaf is saturated.
pub fn kernel_bundle<K: Field>(m: &GradedMatrix<K>) -> Result<KernelBundle<K>> {
    m.validate()?;
    let ctx = m.ctx().clone();
    let source = m.source().to_vec();
    if m.rows() == 0 || m.is_zero() {
        let sheaf = Subsheaf::whole(&ctx, source.clone());
        return Ok(KernelBundle {
            sheaf,
            splitting: SplitBundle::new(source),
        });
    }
    let basis = rat_kernel(&m.dehomogenize());
    if basis.is_empty() {
        return Ok(KernelBundle {
            sheaf: Subsheaf::zero(&ctx, source),
            splitting: SplitBundle::new(vec![]),
        });
    }
    let gens = homogenize_columns(&ctx, &basis, &source);
    let sheaf = Subsheaf::new(gens)?.saturate();
    let splitting = sheaf.splitting_type();
    Ok(KernelBundle { sheaf, splitting })
}

/// Kernel, image and cokernel of a bundle map.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactTriple<K: Field> {
    pub rank: usize,
    pub kernel: SplitBundle,
    pub kernel_sheaf: Subsheaf<K>,
    /// Degree of the image sheaf before saturation.
    pub image_degree: i64,
    pub image_sat: SplitBundle,
    pub image_sheaf: Subsheaf<K>,
    /// Locally free part of the cokernel, `target / image_sat`.
    pub cokernel: SplitBundle,
    /// Length of the torsion of the cokernel, `image_sat / image`.
    pub torsion: u64,
    /// Degree of the saturated image from maximal minors.
    pub image_sat_degree_by_minors: i64,
}

impl<K: Field> ExactTriple<K> {
    /// `deg(source) = deg(kernel) + deg(image)` and the rank analogue.
    pub fn source_additive(&self, source: &SplitBundle) -> bool {
        source.degree() == self.kernel.degree() + self.image_degree
            && source.rank() == self.kernel.rank() + self.rank
    }

    /// `deg(target) = deg(image) + torsion + deg(cokernel)`, ranks likewise.
    pub fn target_additive(&self, target: &SplitBundle) -> bool {
        target.degree() == self.image_degree + self.torsion as i64 + self.cokernel.degree()
            && self.image_sat.degree() == self.image_degree + self.torsion as i64
            && target.rank() == self.image_sat.rank() + self.cokernel.rank()
    }

    /// The two independent saturation-degree computations agree.
    pub fn saturation_consistent(&self) -> bool {
        self.image_sat.degree() == self.image_sat_degree_by_minors
    }
}

pub fn exact_triple_analyze<K: Field>(m: &GradedMatrix<K>) -> Result<ExactTriple<K>> {
    let kernel = kernel_bundle(m)?;
    let image = Subsheaf::new(m.clone())?;
    let image_sheaf = image.saturate();
    let image_sat = image.splitting_type();
    let torsion = image.torsion_length();
    let cokernel = image.quotient_type();
    Ok(ExactTriple {
        rank: image.rank(),
        kernel: kernel.splitting,
        kernel_sheaf: kernel.sheaf,
        image_degree: image_sat.degree() - torsion as i64,
        image_sat_degree_by_minors: image.saturation_degree_by_minors(),
        image_sat,
        image_sheaf,
        cokernel,
        torsion,
    })
}
