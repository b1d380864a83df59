#![allow(dead_code)]

use isoleaf::algebra::{Form, GaloisField, Gf};
use isoleaf::sheafmaps::GradedMatrix;
use rand::Rng;

pub fn random_form<R: Rng>(rng: &mut R, f: &GaloisField, degree: i64, density: f64) -> Form<Gf> {
    if degree < 0 || !rng.gen_bool(density) {
        return Form::zero();
    }
    let coeffs = (0..=degree)
        .map(|_| f.elem(rng.gen_range(0..f.order())).unwrap())
        .collect();
    Form::new(coeffs)
}

pub fn random_twists<R: Rng>(rng: &mut R, max_rank: usize, lo: i64, hi: i64) -> Vec<i64> {
    let r = rng.gen_range(1..=max_rank);
    (0..r).map(|_| rng.gen_range(lo..=hi)).collect()
}

pub fn random_graded<R: Rng>(
    rng: &mut R,
    f: &GaloisField,
    source: Vec<i64>,
    target: Vec<i64>,
    density: f64,
) -> GradedMatrix<Gf> {
    let entries = target
        .iter()
        .map(|b| {
            source
                .iter()
                .map(|a| random_form(rng, f, b - a, density))
                .collect()
        })
        .collect();
    GradedMatrix::new(f, source, target, entries).unwrap()
}

/// Random map whose generic rank is usually deficient: the product of two
/// random maps through a smaller middle bundle.
pub fn random_low_rank<R: Rng>(
    rng: &mut R,
    f: &GaloisField,
    source: Vec<i64>,
    target: Vec<i64>,
) -> GradedMatrix<Gf> {
    let mid_rank = rng.gen_range(1..=source.len().min(target.len()));
    let mid: Vec<i64> = (0..mid_rank).map(|_| rng.gen_range(-4..=4)).collect();
    let a = random_graded(rng, f, source, mid.clone(), 0.8);
    let b = random_graded(rng, f, mid, a.target().to_vec(), 0.8);
    let b = random_graded(rng, f, b.source().to_vec(), target, 0.8);
    b.compose(&a).unwrap()
}
