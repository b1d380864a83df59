mod common;

use common::{random_graded, random_low_rank, random_twists};
use isoleaf::algebra::{GaloisField, Gf, Matrix};
use isoleaf::bundles::SplitBundle;
use isoleaf::sheafmaps::{exact_triple_analyze, kernel_bundle, GradedMatrix, Subsheaf};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn check(m: &GradedMatrix<Gf>) {
    let t = exact_triple_analyze(m).unwrap();
    assert!(t.source_additive(&m.source_bundle()), "{m:?} {t:?}");
    assert!(t.target_additive(&m.target_bundle()), "{m:?} {t:?}");
    assert!(t.saturation_consistent(), "{m:?} {t:?}");
    // kernel columns are annihilated
    assert!(m.compose(t.kernel_sheaf.generators()).unwrap().is_zero());
    assert_eq!(t.kernel_sheaf.splitting_type(), t.kernel);
    let sat = &t.image_sheaf;
    assert_eq!(sat.generators().source_bundle(), t.image_sat);
    assert_eq!(sat.saturate().splitting_type(), t.image_sat);
    assert!(sat.is_saturated());
}

#[test]
fn random_triples_are_additive() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 0..300 {
        let p = [2, 3, 5][n % 3];
        let f = GaloisField::prime(p).unwrap();
        let s = random_twists(&mut rng, 4, -4, 4);
        let t = random_twists(&mut rng, 4, -4, 4);
        let m = if rng.gen_bool(0.5) {
            random_graded(&mut rng, &f, s, t, 0.6)
        } else {
            random_low_rank(&mut rng, &f, s, t)
        };
        check(&m);
    }
}

#[test]
fn constant_maps_between_equal_twists_close_up() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let f = GaloisField::prime(3).unwrap();
    for _ in 0..100 {
        let a = rng.gen_range(-3..=3);
        let (r, s) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let rows = (0..s)
            .map(|_| (0..r).map(|_| f.int(rng.gen_range(0..3))).collect())
            .collect();
        let c = Matrix::from_rows(&f, rows);
        let m = GradedMatrix::constant(&f, a, &c);
        let t = exact_triple_analyze(&m).unwrap();
        let rk = c.rank();
        assert_eq!(t.kernel, SplitBundle::new(vec![a; r - rk]));
        assert_eq!(t.image_sat, SplitBundle::new(vec![a; rk]));
        assert_eq!(t.cokernel, SplitBundle::new(vec![a; s - rk]));
        assert_eq!(t.torsion, 0);
    }
}

#[test]
fn kernel_of_twisted_euler_map() {
    let f = GaloisField::prime(2).unwrap();
    let m = GradedMatrix::new(
        &f,
        vec![0, 0],
        vec![1],
        vec![vec![
            isoleaf::algebra::Form::u(&f),
            isoleaf::algebra::Form::v(&f),
        ]],
    )
    .unwrap();
    let k = kernel_bundle(&m).unwrap();
    assert_eq!(k.splitting, SplitBundle::new(vec![-1]));
    let s: &Subsheaf<Gf> = &k.sheaf;
    assert!(s.is_saturated());
}
