//! Acceptance gate: one line per criterion, nonzero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use isoleaf::algebra::{Form, GaloisField, Gf, Matrix};
use isoleaf::bundles::{
    hom_dimension, hom_vanishes, AbstractBundle, Rational, Slopes, SplitBundle,
};
use isoleaf::engine::{reduction_run, ListOracle, ReductionState, ReductionVerdict, RepeatPolicy};
use isoleaf::groupschemes::{free_slope0_split, DieudonneModule};
use isoleaf::sheafmaps::{exact_triple_analyze, GradedMatrix, Subsheaf};
use isoleaf_cli::{commands, Document};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))
}

fn random_form(rng: &mut ChaCha8Rng, f: &GaloisField, degree: i64, density: f64) -> Form<Gf> {
    if degree < 0 || !rng.gen_bool(density) {
        return Form::zero();
    }
    Form::new(
        (0..=degree)
            .map(|_| f.int(rng.gen_range(0..f.p() as i64)))
            .collect(),
    )
}

fn random_nonzero_form(rng: &mut ChaCha8Rng, f: &GaloisField, degree: i64) -> Form<Gf> {
    loop {
        let g = random_form(rng, f, degree, 1.0);
        if !g.is_zero() {
            return g;
        }
    }
}

fn random_twists(rng: &mut ChaCha8Rng, max_rank: usize, lo: i64, hi: i64) -> Vec<i64> {
    let r = rng.gen_range(1..=max_rank);
    (0..r).map(|_| rng.gen_range(lo..=hi)).collect()
}

fn random_graded(
    rng: &mut ChaCha8Rng,
    f: &GaloisField,
    source: &[i64],
    target: &[i64],
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
    GradedMatrix::new(f, source.to_vec(), target.to_vec(), entries).unwrap()
}

fn moret_bailly() -> Result<String, String> {
    let start = Instant::now();
    for p in [2u64, 3, 5, 7, 11] {
        let r = commands::cmd_moret_bailly(p).map_err(|e| format!("p = {p}: {e}"))?;
        let j = &r.json;
        let p = p as i64;
        let ints = |v: &Value| -> Vec<i64> {
            v.as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_i64().unwrap())
                .collect()
        };
        let w2 = &j["w2"];
        let checks: [(&str, bool); 12] = [
            ("lie splitting", ints(&j["lie"]) == vec![-p, 1]),
            ("hodge splitting", ints(&j["hodge"]) == vec![p, -1]),
            ("mu_min", w2["positivity"]["mu_min"] == "-1"),
            ("positivity", w2["positivity"]["verdict"] == "NotNef"),
            ("higgs rule", w2["higgs"]["rule"] == "ObstructionFound"),
            ("destabilizer slope", w2["higgs"]["witness"]["slope"] == "1"),
            ("arakelov degree", w2["arakelov"]["degree"] == p - 1),
            ("arakelov bound", w2["arakelov"]["stated_bound"] == -2),
            ("arakelov violated", w2["arakelov"]["violated"] == true),
            (
                "reduction verdict",
                j["reduction"]["verdict"] == "MuMaxPositive",
            ),
            ("reduction steps", j["reduction"]["steps"] == 1),
            (
                "final verdict",
                j["verdict"] == "NotW2Liftable" && w2["verdict"] == "NotW2Liftable",
            ),
        ];
        for (what, ok) in checks {
            ensure(ok, || format!("p = {p}: {what}"))?;
        }
    }
    within(start, Duration::from_secs(1))?;
    Ok("p in {2,3,5,7,11}".into())
}

fn all_split(max_rank: usize, lo: i64, hi: i64) -> Vec<SplitBundle> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(out: &mut Vec<SplitBundle>, cur: &mut Vec<i64>, left: usize, top: i64, lo: i64) {
        if !cur.is_empty() {
            out.push(SplitBundle::new(cur.clone()));
        }
        if left == 0 {
            return;
        }
        for a in (lo..=top).rev() {
            cur.push(a);
            go(out, cur, left - 1, a, lo);
            cur.pop();
        }
    }
    go(&mut out, &mut cur, max_rank, hi, lo);
    out
}

/// Counts the monomials `U^i V^j` of degree `b - a` for every pair of summands.
fn monomial_count(e: &SplitBundle, f: &SplitBundle) -> u64 {
    let mut n = 0;
    for &a in e.twists() {
        for &b in f.twists() {
            let d = b - a;
            n += (0..=d.max(-1)).filter(|i| d - i >= 0).count() as u64;
        }
    }
    n
}

fn hom_grid() -> Result<String, String> {
    let start = Instant::now();
    let bundles = all_split(3, -5, 5);
    let mut pairs = 0u64;
    for e in &bundles {
        for f in &bundles {
            let h = hom_dimension(e, f);
            ensure(h == monomial_count(e, f), || {
                format!("{e} -> {f}: {h} vs oracle")
            })?;
            let crit = hom_vanishes(e, f).unwrap();
            ensure((h == 0) == crit, || {
                format!("{e} -> {f}: hom {h}, criterion {crit}")
            })?;
            ensure(crit == (e.mu_min().unwrap() > f.mu_max().unwrap()), || {
                format!("{e} -> {f}")
            })?;
            pairs += 1;
        }
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!("{} bundles, {pairs} pairs", bundles.len()))
}

fn triples() -> Result<String, String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut deficient = 0;
    for n in 0..1000 {
        let p = [2, 3, 5][n % 3];
        let f = GaloisField::prime(p).unwrap();
        let s = random_twists(&mut rng, 4, -4, 4);
        let t = random_twists(&mut rng, 4, -4, 4);
        let m = if rng.gen_bool(0.5) {
            let density = rng.gen_range(0.3..1.0);
            random_graded(&mut rng, &f, &s, &t, density)
        } else {
            // factor through a smaller middle bundle to force rank drops
            let mid = random_twists(&mut rng, s.len().min(t.len()), -4, 4);
            let a = random_graded(&mut rng, &f, &s, &mid, 0.8);
            let b = random_graded(&mut rng, &f, &mid, &t, 0.8);
            b.compose(&a).unwrap()
        };
        let tr = exact_triple_analyze(&m).map_err(|e| format!("{m:?}: {e}"))?;
        if tr.rank < s.len().min(t.len()) {
            deficient += 1;
        }
        ensure(tr.source_additive(&m.source_bundle()), || {
            format!("source additivity {m:?}")
        })?;
        ensure(tr.target_additive(&m.target_bundle()), || {
            format!("target additivity {m:?}")
        })?;
        ensure(tr.saturation_consistent(), || {
            format!(
                "saturation {} vs minors {} for {m:?}",
                tr.image_sat.degree(),
                tr.image_sat_degree_by_minors
            )
        })?;
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("1000 maps, {deficient} rank-deficient"))
}

fn hn_properties() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..1000 {
        let mut t = random_twists(&mut rng, 6, -6, 6);
        let e = SplitBundle::new(t.clone());
        let hn = e.hn_filtration().unwrap();
        t.shuffle(&mut rng);
        ensure(
            SplitBundle::new(t.clone()).hn_filtration().unwrap() == hn,
            || format!("{t:?}"),
        )?;
        ensure(e.dual().mu_min().unwrap() == -e.mu_max().unwrap(), || {
            format!("dual {e}")
        })?;
        ensure(e.dual().mu_max().unwrap() == -e.mu_min().unwrap(), || {
            format!("dual {e}")
        })?;
        let p = [2u64, 3, 5, 7][rng.gen_range(0..4)];
        let pulled = e.frobenius_pullback(p, 1).hn_filtration().unwrap();
        let scaled: Vec<(Rational, u64)> = hn
            .blocks()
            .iter()
            .map(|(s, r)| (s * Rational::from_integer(p as i64), *r))
            .collect();
        ensure(pulled.blocks() == scaled.as_slice(), || {
            format!("Frobenius {e} p = {p}")
        })?;
        ensure(e.mu_bar_min().unwrap() == e.mu_min().unwrap(), || {
            format!("mu_bar {e}")
        })?;
        ensure(
            e.normalized_frobenius_mu_min(p, 2).unwrap() == e.mu_min().unwrap(),
            || format!("{e}"),
        )?;
        let ranks: u64 = hn.blocks().iter().map(|b| b.1).sum();
        ensure(
            ranks == e.rank() as u64 && hn.degree() == Rational::from_integer(e.degree()),
            || format!("{e}"),
        )?;
        ensure(hn.blocks().windows(2).all(|w| w[0].0 > w[1].0), || {
            format!("{e}")
        })?;
    }
    Ok("1000 bundles".into())
}

fn closure() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 0..500 {
        let p = [2, 3, 5][n % 3];
        let f = GaloisField::prime(p).unwrap();
        let a = rng.gen_range(-4..=4);
        let (r, s) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let density = rng.gen_range(0.0..1.0);
        let rows = (0..s)
            .map(|_| {
                (0..r)
                    .map(|_| {
                        if rng.gen_bool(density) {
                            f.int(rng.gen_range(0..p as i64))
                        } else {
                            f.zero()
                        }
                    })
                    .collect()
            })
            .collect();
        let c = Matrix::from_rows(&f, rows);
        let m = GradedMatrix::constant(&f, a, &c);
        let t = exact_triple_analyze(&m).map_err(|e| e.to_string())?;
        let k = c.rank();
        let pure = |b: &SplitBundle, n: usize| *b == SplitBundle::new(vec![a; n]);
        ensure(pure(&t.kernel, r - k), || {
            format!("kernel {} of rank-{k} {c:?}", t.kernel)
        })?;
        ensure(pure(&t.image_sat, k), || {
            format!("image {} of {c:?}", t.image_sat)
        })?;
        ensure(pure(&t.cokernel, s - k), || {
            format!("cokernel {} of {c:?}", t.cokernel)
        })?;
        ensure(t.torsion == 0 && t.image_degree == a * k as i64, || {
            format!("torsion of {c:?}")
        })?;
    }
    Ok("500 constant maps".into())
}

fn all_matrices(f: &GaloisField, n: usize) -> Vec<Matrix<Gf>> {
    (0..1u32 << (n * n))
        .map(|bits| {
            let rows = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| f.int(((bits >> (i * n + j)) & 1) as i64))
                        .collect()
                })
                .collect();
            Matrix::from_rows(f, rows)
        })
        .collect()
}

fn nilpotent(m: &Matrix<Gf>) -> bool {
    let mut acc = m.clone();
    for _ in 1..m.rows() {
        acc = acc.mul(m);
    }
    acc.is_zero()
}

fn dieudonne() -> Result<String, String> {
    let start = Instant::now();
    let f = GaloisField::prime(2).unwrap();
    let (mut modules, mut local) = (0, 0);
    for n in 1..=3 {
        let ms = all_matrices(&f, n);
        for a in &ms {
            for b in &ms {
                // over F_2 the Frobenius twist is trivial
                if !a.mul(b).is_zero() || !b.mul(a).is_zero() {
                    ensure(DieudonneModule::new(a.clone(), b.clone()).is_err(), || {
                        format!("accepted {a:?} {b:?}")
                    })?;
                    continue;
                }
                let d = DieudonneModule::new(a.clone(), b.clone())
                    .map_err(|e| format!("{a:?} {b:?}: {e}"))?;
                modules += 1;
                let ll = d.local_local_test();
                ensure(ll == (nilpotent(a) && nilpotent(b)), || {
                    format!("nilpotency of {a:?} {b:?}")
                })?;
                let flag = d.alpha_filtration();
                let full = flag.as_ref().is_ok_and(|fl| {
                    fl.len() == n && fl.iter().enumerate().all(|(i, s)| s.len() == i + 1)
                });
                ensure(ll == full, || {
                    format!("{a:?} {b:?}: local-local {ll}, flag {flag:?}")
                })?;
                local += ll as usize;
            }
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{modules} modules, {local} local-local"))
}

fn splitting() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut made = 0;
    while made < 200 {
        let p = [2, 3, 5][made % 3];
        let f = GaloisField::prime(p).unwrap();
        let n = rng.gen_range(1..=4);
        let k = rng.gen_range(1..=n);
        let vecs: Vec<Vec<Gf>> = (0..k)
            .map(|_| (0..n).map(|_| f.int(rng.gen_range(0..p as i64))).collect())
            .collect();
        let span = Matrix::from_cols(&f, n, &vecs);
        let r = span.rank();
        if r == 0 {
            continue;
        }
        let degs: Vec<i64> = (0..k).map(|_| rng.gen_range(0..=3)).collect();
        let forms: Vec<Form<Gf>> = degs
            .iter()
            .map(|&d| random_nonzero_form(&mut rng, &f, d))
            .collect();
        let entries = (0..n)
            .map(|i| (0..k).map(|j| forms[j].scale(&vecs[j][i])).collect())
            .collect();
        let gens =
            GradedMatrix::new(&f, degs.iter().map(|d| -d).collect(), vec![0; n], entries).unwrap();
        let s = Subsheaf::new(gens).map_err(|e| e.to_string())?.saturate();
        let split = free_slope0_split(&s).map_err(|e| format!("{s:?}: {e}"))?;
        ensure(split.sub.cols() == r, || {
            format!("rank {} vs {r}", split.sub.cols())
        })?;
        ensure(split.sub.hstack(&span).rank() == r, || {
            "constant generators leave the span".into()
        })?;
        let full = split.sub.hstack(&split.complement);
        ensure(
            full.rows() == n && full.cols() == n && full.inverse().is_some(),
            || format!("{full:?} not invertible"),
        )?;
        made += 1;
    }
    Ok("200 saturated subsheaves".into())
}

fn reduction_fixtures() -> Vec<(String, ReductionState<Gf>, ListOracle<Gf>)> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut out = Vec::new();
    let mut names: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    names.sort();
    for path in names {
        let name = path.file_stem().unwrap().to_string_lossy().to_string();
        if !name.starts_with("reduction_") {
            continue;
        }
        let doc = Document::parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let (state, oracle) = doc.reduction().unwrap();
        out.push((name, state, oracle));
    }
    out
}

/// Constant Lie maps into `O^z ⊕ (negative part)`, zero on the negative part.
fn synthetic_oracles(rng: &mut ChaCha8Rng) -> Vec<(String, ReductionState<Gf>, ListOracle<Gf>)> {
    let mut out = Vec::new();
    for n in 0..40 {
        let p = [2, 3, 5][n % 3];
        let f = GaloisField::prime(p).unwrap();
        let z = rng.gen_range(0..=3);
        let neg = rng.gen_range(1..=2);
        let mut target = vec![0; z];
        target.extend((0..neg).map(|_| -rng.gen_range(1..=4)));
        let g = target.len();
        let lie = |rng: &mut ChaCha8Rng| {
            let entries = target
                .iter()
                .map(|&b| {
                    (0..g)
                        .map(|_| {
                            if b == 0 {
                                Form::constant(f.int(rng.gen_range(0..p as i64)))
                            } else {
                                Form::zero()
                            }
                        })
                        .collect()
                })
                .collect();
            GradedMatrix::new(&f, vec![0; g], target.clone(), entries).unwrap()
        };
        let phi = lie(rng);
        let matrices = (0..rng.gen_range(1..=3)).map(|_| lie(rng)).collect();
        let policy = [RepeatPolicy::RepeatLast, RepeatPolicy::Cycle][n % 2];
        out.push((
            format!("synthetic {n}"),
            ReductionState::new(0, phi).unwrap(),
            ListOracle::new(matrices, policy),
        ));
    }
    out
}

fn reduction_termination() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut cases = reduction_fixtures();
    let fixtures = cases.len();
    cases.extend(synthetic_oracles(&mut rng));
    let mut runs = 0;
    for (name, state, oracle) in &cases {
        let lie = state.lie_target();
        let positive = lie.mu_max().unwrap() > Rational::from_integer(0);
        for e in 0..=12u64 {
            let start = ReductionState::new(e, state.lie_phi().clone()).unwrap();
            let mut o = oracle.clone();
            let run = match reduction_run(start, &mut o, 64) {
                Ok(r) => r,
                // malformed oracle fixtures are rejected before a verdict
                Err(isoleaf::Error::OracleDegreeMismatch { .. }) if name.contains("bad_oracle") => {
                    continue
                }
                Err(err) => return Err(format!("{name} e = {e}: {err}")),
            };
            runs += 1;
            if positive {
                ensure(
                    run.verdict == ReductionVerdict::MuMaxPositive && run.trace.len() == 1,
                    || {
                        format!(
                            "{name} e = {e}: {:?} after {}",
                            run.verdict,
                            run.trace.len()
                        )
                    },
                )?;
            } else if lie.degree() < 0 {
                ensure(run.trace.len() as u64 <= e + 1, || {
                    format!("{name} e = {e}: {} steps", run.trace.len())
                })?;
                ensure(
                    matches!(
                        run.verdict,
                        ReductionVerdict::ContradictionReached
                            | ReductionVerdict::DegreeContradiction
                    ),
                    || format!("{name} e = {e}: {:?}", run.verdict),
                )?;
            }
        }
    }
    Ok(format!(
        "{fixtures} fixtures and {} synthetic oracles, {runs} runs",
        cases.len() - fixtures
    ))
}

fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

fn langer_barton() -> Result<String, String> {
    let mut cells = 0;
    for g in 1..=5u64 {
        for genus in 0..=3u64 {
            let threshold = g * (g - 1) * (2 * genus).saturating_sub(2) + 1;
            let primes: Vec<u64> = (2..threshold + 200)
                .filter(|&p| is_prime(p) && p >= threshold)
                .take(12)
                .collect();
            let hn =
                isoleaf::bundles::HnProfile::new(vec![(Rational::new(1, g as i64), g)]).unwrap();
            for p in primes {
                let b = AbstractBundle::new(g, 1, genus, p)
                    .unwrap()
                    .with_hn(hn.clone())
                    .unwrap();
                ensure(b.mu_min().unwrap() == Rational::new(1, g as i64), || {
                    "mu_min".into()
                })?;
                let bounds = b.mu_bar_bounds().map_err(|e| e.to_string())?;
                let (lo, hi) = bounds.mu_bar_min;
                ensure(lo > Rational::from_integer(0), || {
                    format!("g {g} genus {genus} p {p}: lower end {lo}")
                })?;
                ensure(hi == Rational::new(1, g as i64), || {
                    format!("upper end {hi}")
                })?;
                cells += 1;
            }
            // the threshold is sharp: at p = threshold - 1 the lower end is 0
            if threshold > 2 {
                let b = AbstractBundle::new(g, 1, genus, threshold - 1)
                    .unwrap()
                    .with_hn(hn)
                    .unwrap();
                let lo = b.mu_bar_bounds().unwrap().mu_bar_min.0;
                ensure(lo == Rational::from_integer(0), || {
                    format!("g {g} genus {genus}: sharpness {lo}")
                })?;
            }
        }
    }
    Ok(format!("{cells} (g, genus, p) cells"))
}

fn main() {
    let criteria: [(&str, Check); 9] = [
        ("Moret-Bailly regression", moret_bailly),
        ("Hom vanishing grid", hom_grid),
        ("degree additivity and saturation", triples),
        ("HN properties", hn_properties),
        ("slope-0 abelian closure", closure),
        ("Dieudonne equivalence over F_2", dieudonne),
        ("free slope-0 splitting", splitting),
        ("reduction termination", reduction_termination),
        ("Langer/Barton bounds", langer_barton),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let t = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail}) [{t:.3}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why} [{t:.3}s]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
