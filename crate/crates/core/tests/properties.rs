use isoleaf::algebra::{Form, GaloisField, Gf, Matrix};
use isoleaf::bundles::{hom_dimension, hom_vanishes, Rational, Slopes, SplitBundle};
use isoleaf::engine::{reduction_run, ListOracle, ReductionState, ReductionVerdict, RepeatPolicy};
use isoleaf::groupschemes::DieudonneModule;
use isoleaf::higgs::{semistability_verdict, HiggsBundle};
use isoleaf::sheafmaps::{GradedMatrix, Subsheaf};
use proptest::prelude::*;

fn twists(max_rank: usize, bound: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-bound..=bound, 1..=max_rank)
}

fn in_span(basis: &[Vec<Gf>], x: &[Gf], f: &GaloisField) -> bool {
    if x.iter().all(|c| *c == f.zero()) {
        return true;
    }
    if basis.is_empty() {
        return false;
    }
    let mut rows = basis.to_vec();
    let r = Matrix::from_rows(f, rows.clone()).rank();
    rows.push(x.to_vec());
    Matrix::from_rows(f, rows).rank() == r
}

/// Unit lower times unit upper triangular, hence invertible.
fn unipotent_product(f: &GaloisField, n: usize, lower: &[u64], upper: &[u64]) -> Matrix<Gf> {
    let tri = |vals: &[u64], lower_part: bool| {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match (i == j, (i > j) == lower_part && i != j) {
                        (true, _) => f.one(),
                        (false, true) => f.elem(vals[i * n + j] % f.order()).unwrap(),
                        _ => f.zero(),
                    })
                    .collect()
            })
            .collect();
        Matrix::from_rows(f, rows)
    };
    tri(lower, true).mul(&tri(upper, false))
}

fn strictly_upper(f: &GaloisField, n: usize, vals: &[u64]) -> Matrix<Gf> {
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if j > i {
                        f.elem(vals[i * n + j] % f.order()).unwrap()
                    } else {
                        f.zero()
                    }
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(f, rows)
}

fn frob(m: &Matrix<Gf>) -> Matrix<Gf> {
    isoleaf::groupschemes::dieudonne::twist(m)
}

fn root(m: &Matrix<Gf>) -> Matrix<Gf> {
    isoleaf::groupschemes::dieudonne::untwist(m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn hn_slopes_decrease_and_cover(t in twists(6, 8)) {
        let e = SplitBundle::new(t);
        let hn = e.hn_filtration().unwrap();
        prop_assert!(hn.blocks().windows(2).all(|w| w[0].0 > w[1].0));
        prop_assert_eq!(hn.rank(), e.rank() as u64);
        prop_assert_eq!(hn.degree(), Rational::from_integer(e.degree()));
        prop_assert_eq!(hn.mu_max(), e.mu_max().unwrap());
        prop_assert_eq!(hn.mu_min(), e.mu_min().unwrap());
        // the polygon is concave and ends at the degree
        let ps: Vec<Rational> = (0..=hn.rank()).map(|k| hn.polygon(k)).collect();
        prop_assert_eq!(ps[hn.rank() as usize], Rational::from_integer(e.degree()));
        for w in ps.windows(3) {
            prop_assert!(w[1] - w[0] >= w[2] - w[1]);
        }
    }

    #[test]
    fn hn_dual_and_twist(t in twists(6, 8), n in -5i64..=5) {
        let e = SplitBundle::new(t);
        prop_assert_eq!(e.dual().hn_filtration().unwrap(), e.hn_filtration().unwrap().dual());
        prop_assert_eq!(e.dual().dual(), e.clone());
        let tw = e.twist(n);
        prop_assert_eq!(tw.mu_min().unwrap(), e.mu_min().unwrap() + Rational::from_integer(n));
        prop_assert_eq!(tw.slope().unwrap(), e.slope().unwrap() + Rational::from_integer(n));
    }

    #[test]
    fn frobenius_scales_slopes(t in twists(5, 6), p in prop::sample::select(vec![2u64, 3, 5, 7]), e in 1u32..=3) {
        let b = SplitBundle::new(t);
        let q = (p as i64).pow(e);
        let pulled = b.frobenius_pullback(p, e).hn_filtration().unwrap();
        prop_assert_eq!(pulled, b.hn_filtration().unwrap().scale(q));
        prop_assert_eq!(b.normalized_frobenius_mu_min(p, e).unwrap(), b.mu_min().unwrap());
    }

    #[test]
    fn hom_dimension_counts_sections(s in twists(3, 4), t in twists(3, 4)) {
        let (e, f) = (SplitBundle::new(s), SplitBundle::new(t));
        let h = hom_dimension(&e, &f);
        // global sections of E^∨ ⊗ F computed by linear algebra
        let field = GaloisField::prime(3).unwrap();
        let ambient: Vec<i64> = e.twists().iter().flat_map(|a| f.twists().iter().map(move |b| b - a)).collect();
        let whole = Subsheaf::<Gf>::whole(&field, ambient);
        prop_assert_eq!(h as usize, whole.section_count(0));
        prop_assert_eq!(h == 0, hom_vanishes(&e, &f).unwrap());
        prop_assert_eq!(hom_dimension(&f.dual(), &e.dual()), h);
    }

    #[test]
    fn zero_higgs_field_follows_the_bundle(t in twists(4, 4)) {
        let field = GaloisField::prime(5).unwrap();
        let b = SplitBundle::new(t);
        let h = HiggsBundle::<Gf>::zero(&field, b.twists().to_vec());
        prop_assert_eq!(!semistability_verdict(&h).is_unstable(), b.is_semistable());
    }

    #[test]
    fn unipotent_modules_have_stable_flags(
        n in 1usize..=4,
        m in 1u32..=2,
        fv in prop::collection::vec(any::<u64>(), 16),
        lo in prop::collection::vec(any::<u64>(), 16),
        up in prop::collection::vec(any::<u64>(), 16),
        v_side in any::<bool>(),
    ) {
        let f = GaloisField::new(2, m).unwrap();
        let nil = strictly_upper(&f, n, &fv);
        let zero = Matrix::zeros(&f, n, n);
        let (fm, vm) = if v_side { (zero, nil) } else { (nil, zero) };
        // change of basis x = P y acts by P^{-1} F P^{(p)} and P^{-1} V P^{(1/p)}
        let p = unipotent_product(&f, n, &lo, &up);
        let pinv = p.inverse().unwrap();
        let d = DieudonneModule::new(pinv.mul(&fm).mul(&frob(&p)), pinv.mul(&vm).mul(&root(&p))).unwrap();
        prop_assert!(d.local_local_test());
        let flag = d.alpha_filtration().unwrap();
        prop_assert_eq!(flag.len(), n);
        for (i, step) in flag.iter().enumerate() {
            prop_assert_eq!(step.len(), i + 1);
            let below: &[Vec<Gf>] = if i == 0 { &[] } else { &flag[i - 1] };
            prop_assert!(below.iter().all(|x| in_span(step, x, &f)));
            for x in step {
                prop_assert!(in_span(below, &d.apply_f(x), &f));
                prop_assert!(in_span(below, &d.apply_v(x), &f));
            }
        }
    }

    #[test]
    fn multiplicative_part_blocks_the_flag(n in 1usize..=3, vals in prop::collection::vec(any::<u64>(), 16)) {
        let f = GaloisField::new(3, 2).unwrap();
        // an invertible F summand is never local-local
        let nil = strictly_upper(&f, n, &vals);
        let mut fm = Matrix::zeros(&f, n + 1, n + 1);
        for i in 0..n {
            for j in 0..n {
                fm.set(i, j, *nil.get(i, j));
            }
        }
        fm.set(n, n, f.one());
        let d = DieudonneModule::new(fm, Matrix::zeros(&f, n + 1, n + 1)).unwrap();
        prop_assert!(!d.local_local_test());
        prop_assert!(d.alpha_filtration().is_err());
    }

    #[test]
    fn reduction_terminates_within_budget(
        zeros in 0usize..=3,
        negs in prop::collection::vec(1i64..=4, 1..=2),
        entries in prop::collection::vec(0i64..3, 64),
        budget in 0u64..=15,
    ) {
        let f = GaloisField::prime(3).unwrap();
        let mut target = vec![0; zeros];
        target.extend(negs.iter().map(|d| -d));
        let g = target.len();
        let mut k = 0;
        let mut lie = || {
            let rows = target
                .iter()
                .map(|&b| {
                    (0..g)
                        .map(|_| {
                            k += 1;
                            if b == 0 { Form::constant(f.int(entries[k % entries.len()])) } else { Form::zero() }
                        })
                        .collect()
                })
                .collect();
            GradedMatrix::new(&f, vec![0; g], target.clone(), rows).unwrap()
        };
        let phi = lie();
        let oracle_maps = vec![lie(), lie()];
        let state = ReductionState::new(budget, phi).unwrap();
        let mut oracle = ListOracle::new(oracle_maps, RepeatPolicy::Cycle);
        let run = reduction_run(state, &mut oracle, 100).unwrap();
        prop_assert!(run.trace.len() as u64 <= budget + 1);
        prop_assert!(matches!(run.verdict, ReductionVerdict::ContradictionReached | ReductionVerdict::DegreeContradiction));
        for w in run.trace.windows(2) {
            prop_assert!(w[1].budget_before < w[0].budget_before);
            prop_assert_eq!(w[1].budget_before, w[0].budget_after);
        }
        let last = run.trace.last().unwrap();
        prop_assert!(last.consumed > last.budget_before || last.kernel_rank == Some(0));
    }

    #[test]
    fn positive_lie_algebra_stops_at_once(t in twists(3, 3), budget in 0u64..=12) {
        let f = GaloisField::prime(2).unwrap();
        let mut target = SplitBundle::new(t).twists().to_vec();
        target[0] = target[0].abs() + 1;
        let g = target.len();
        let phi = GradedMatrix::zero(&f, vec![0; g], target);
        let state = ReductionState::<Gf>::new(budget, phi).unwrap();
        let run = reduction_run(state, &mut ListOracle::new(vec![], RepeatPolicy::Once), 10).unwrap();
        prop_assert_eq!(run.verdict, ReductionVerdict::MuMaxPositive);
        prop_assert_eq!(run.trace.len(), 1);
    }
}
