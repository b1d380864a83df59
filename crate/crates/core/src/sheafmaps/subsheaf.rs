//! Subsheaves of split bundles given by generator columns, their saturation
//! and splitting types.
//!
//! The saturation of `S ⊆ E` is the subsheaf of sections of `E` whose value
//! at the generic point lies in the generic span `W` of `S`. Its global
//! sections in twist `d` are therefore the polynomial vectors `v` (entry `i` a
//! form of degree `b_i + d`) annihilated by every row of the left
//! annihilator of `W`, which is a finite linear system over the base field.

use crate::algebra::{form_gcd, rat_kernel, Field, Form, Matrix, Poly, RatFunc};
use crate::bundles::SplitBundle;
use crate::error::{Error, Result};

use super::graded::GradedMatrix;

#[derive(Clone, Debug, PartialEq)]
pub struct Subsheaf<K: Field> {
    generators: GradedMatrix<K>,
    rank: usize,
}

impl<K: Field> Subsheaf<K> {
    /// The image of `generators` in its target.
    pub fn new(generators: GradedMatrix<K>) -> Result<Self> {
        generators.validate()?;
        let rank = generators.generic_rank();
        Ok(Subsheaf { generators, rank })
    }

    pub fn whole(ctx: &K::Ctx, ambient: Vec<i64>) -> Self {
        let rank = ambient.len();
        Subsheaf {
            generators: GradedMatrix::identity(ctx, ambient),
            rank,
        }
    }

    pub fn zero(ctx: &K::Ctx, ambient: Vec<i64>) -> Self {
        Subsheaf {
            generators: GradedMatrix::zero(ctx, vec![], ambient),
            rank: 0,
        }
    }

    pub fn ctx(&self) -> &K::Ctx {
        self.generators.ctx()
    }

    pub fn ambient(&self) -> &[i64] {
        self.generators.target()
    }

    pub fn generators(&self) -> &GradedMatrix<K> {
        &self.generators
    }

    /// Generic rank.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Reduced basis of the generic fibre.
    pub fn generic_basis(&self) -> Vec<Vec<RatFunc<K>>> {
        if self.generators.cols() == 0 {
            return Vec::new();
        }
        self.generators.dehomogenize().transpose().row_space_basis()
    }

    /// Primitive polynomial vectors spanning the left annihilator of the
    /// generic fibre.
    pub fn annihilator(&self) -> Vec<Vec<Poly<K>>> {
        let n = self.ambient().len();
        if self.generators.cols() == 0 {
            return (0..n)
                .map(|i| {
                    (0..n)
                        .map(|k| {
                            if k == i {
                                Poly::one(self.ctx())
                            } else {
                                Poly::zero()
                            }
                        })
                        .collect()
                })
                .collect();
        }
        rat_kernel(&self.generators.dehomogenize().transpose())
    }

    /// Whether a vector over the function field lies in the generic fibre.
    pub fn contains_generic(&self, v: &[RatFunc<K>]) -> bool {
        let ctx = self.ctx();
        self.annihilator().iter().all(|p| {
            p.iter()
                .zip(v)
                .fold(RatFunc::zero_in(ctx), |acc, (a, b)| {
                    acc + RatFunc::from_poly(a.clone(), ctx) * b.clone()
                })
                .is_zero()
        })
    }

    fn layout(&self, d: i64) -> Vec<usize> {
        self.ambient()
            .iter()
            .map(|b| (b + d + 1).max(0) as usize)
            .collect()
    }

    /// Basis of `H^0(S̃(d))`, each section a vector of forms of degree `b_i + d`.
    pub fn sections(&self, d: i64) -> Vec<Vec<Form<K>>> {
        let ctx = self.ctx().clone();
        let lens = self.layout(d);
        let unknowns: usize = lens.iter().sum();
        if unknowns == 0 || self.rank == 0 {
            return Vec::new();
        }
        let ann = self.annihilator();
        let mut offsets = Vec::with_capacity(lens.len());
        let mut acc = 0;
        for &l in &lens {
            offsets.push(acc);
            acc += l;
        }
        let mut rows: Vec<Vec<K>> = Vec::new();
        for p in &ann {
            let top = p
                .iter()
                .zip(&lens)
                .filter(|(q, &l)| !q.is_zero() && l > 0)
                .map(|(q, &l)| q.degree().unwrap() + l - 1)
                .max();
            let Some(top) = top else { continue };
            for k in 0..=top {
                let mut row = vec![K::zero_in(&ctx); unknowns];
                for (i, q) in p.iter().enumerate() {
                    for m in 0..lens[i] {
                        if m <= k {
                            if let Some(c) = q.coeff(k - m) {
                                row[offsets[i] + m] = c.clone();
                            }
                        }
                    }
                }
                rows.push(row);
            }
        }
        let basis = if rows.is_empty() {
            (0..unknowns)
                .map(|u| {
                    (0..unknowns)
                        .map(|k| {
                            if k == u {
                                K::one_in(&ctx)
                            } else {
                                K::zero_in(&ctx)
                            }
                        })
                        .collect()
                })
                .collect()
        } else {
            Matrix::from_rows(&ctx, rows).kernel()
        };
        basis
            .into_iter()
            .map(|x| unflatten(&x, &offsets, &lens))
            .collect()
    }

    pub fn section_count(&self, d: i64) -> usize {
        self.sections(d).len()
    }

    /// Twists from which sections may start and by which every twist of the
    /// saturation has appeared.
    fn twist_window(&self) -> Option<(i64, i64)> {
        let top = *self.ambient().iter().max()?;
        let bottom = (0..self.generators.cols())
            .filter(|&j| self.generators.column(j).iter().any(|f| !f.is_zero()))
            .map(|j| -self.generators.source()[j])
            .max()?;
        Some((-top, bottom.max(-top)))
    }

    /// Splitting type of the saturation, read off from the jumps of
    /// `h(d) = dim H^0(S̃(d))`: `h(d) - h(d-1) = #{j : c_j ≥ -d}`.
    pub fn splitting_type(&self) -> SplitBundle {
        let Some((lo, hi)) = self.twist_window() else {
            return SplitBundle::new(vec![]);
        };
        let mut twists = Vec::new();
        let mut prev = 0;
        for d in lo..=hi {
            let h = self.section_count(d);
            let at_least = h - prev;
            prev = h;
            while twists.len() < at_least {
                twists.push(-d);
            }
            if twists.len() == self.rank {
                break;
            }
        }
        SplitBundle::new(twists)
    }

    /// The saturation, with a splitting generator set: each column is a map
    /// `O(c_k) → E` and together they identify `⊕ O(c_k)` with `S̃`.
    pub fn saturate(&self) -> Subsheaf<K> {
        let ctx = self.ctx().clone();
        let ambient = self.ambient().to_vec();
        let Some((lo, hi)) = self.twist_window() else {
            return Subsheaf::zero(&ctx, ambient);
        };
        let mut twists: Vec<i64> = Vec::new();
        let mut cols: Vec<Vec<Form<K>>> = Vec::new();
        'outer: for d in lo..=hi {
            let lens = self.layout(d);
            let mut span: Vec<Vec<K>> = Vec::new();
            for (c, g) in twists.iter().zip(&cols) {
                let e = (c + d) as usize;
                for m in 0..=e {
                    let mono = Form::monomial(K::one_in(&ctx), e - m, m);
                    let shifted: Vec<Form<K>> = g.iter().map(|f| &mono * f).collect();
                    span.push(flatten(&shifted, &lens, &ctx));
                }
            }
            let mut rank = span.len();
            for s in self.sections(d) {
                let flat = flatten(&s, &lens, &ctx);
                let mut trial = span.clone();
                trial.push(flat.clone());
                if Matrix::from_rows(&ctx, trial.clone()).rank() > rank {
                    span = trial;
                    rank += 1;
                    twists.push(-d);
                    cols.push(normalize(s));
                    if cols.len() == self.rank {
                        break 'outer;
                    }
                }
            }
        }
        let n = ambient.len();
        let entries = (0..n)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        let generators = GradedMatrix::new(&ctx, twists, ambient, entries)
            .expect("saturation generators have valid degrees");
        Subsheaf {
            generators,
            rank: self.rank,
        }
    }

    /// Degree of the saturation from the gcd of maximal minors of an
    /// independent set of generator columns.
    pub fn saturation_degree_by_minors(&self) -> i64 {
        if self.rank == 0 {
            return 0;
        }
        let (_, pivots) = self.generators.dehomogenize().rref();
        let sub = self.generators.select_columns(&pivots);
        let g = maximal_minor_gcd(&sub, self.rank);
        sub.source().iter().sum::<i64>() + g.degree().unwrap() as i64
    }

    /// Length of the torsion of `S̃ / S`: the degree of the gcd of all
    /// `r × r` minors of the generator matrix.
    pub fn torsion_length(&self) -> u64 {
        if self.rank == 0 {
            return 0;
        }
        maximal_minor_gcd(&self.generators, self.rank)
            .degree()
            .unwrap() as u64
    }

    /// Degree of the image sheaf `S` itself.
    pub fn degree(&self) -> i64 {
        self.splitting_type().degree() - self.torsion_length() as i64
    }

    pub fn is_saturated(&self) -> bool {
        self.torsion_length() == 0
    }

    /// The saturated annihilator `(E/S̃)^∨ ⊆ E^∨`.
    pub fn annihilator_sheaf(&self) -> Subsheaf<K> {
        let ctx = self.ctx().clone();
        let dual: Vec<i64> = self.ambient().iter().map(|b| -b).collect();
        let ann = self.annihilator();
        if ann.is_empty() {
            return Subsheaf::zero(&ctx, dual);
        }
        let gens = homogenize_columns(&ctx, &ann, &dual);
        Subsheaf::new(gens).unwrap().saturate()
    }

    /// Splitting type of the quotient bundle `E / S̃`.
    pub fn quotient_type(&self) -> SplitBundle {
        self.annihilator_sheaf().splitting_type().dual()
    }
}

/// Columns `O(-d_k) → ⊕ O(b_i)` from polynomial vectors, with `d_k` the least
/// twist for which every entry homogenises.
pub fn homogenize_columns<K: Field>(
    ctx: &K::Ctx,
    vectors: &[Vec<Poly<K>>],
    ambient: &[i64],
) -> GradedMatrix<K> {
    let mut source = Vec::with_capacity(vectors.len());
    let mut cols = Vec::with_capacity(vectors.len());
    for w in vectors {
        let d = w
            .iter()
            .zip(ambient)
            .filter(|(p, _)| !p.is_zero())
            .map(|(p, b)| p.degree().unwrap() as i64 - b)
            .max()
            .expect("nonzero vector");
        source.push(-d);
        cols.push(
            w.iter()
                .zip(ambient)
                .map(|(p, b)| Form::homogenize(p, b + d).unwrap())
                .collect::<Vec<_>>(),
        );
    }
    let entries = (0..ambient.len())
        .map(|i| cols.iter().map(|c: &Vec<Form<K>>| c[i].clone()).collect())
        .collect();
    GradedMatrix::new(ctx, source, ambient.to_vec(), entries).unwrap()
}

/// Monic gcd of all `r × r` minors of `m`; ZERO-degree minors are skipped.
pub fn maximal_minor_gcd<K: Field>(m: &GradedMatrix<K>, r: usize) -> Form<K> {
    let ctx = m.ctx().clone();
    let generic = m.dehomogenize();
    let mut minors = Vec::new();
    for rows in subsets(m.rows(), r) {
        for cols in subsets(m.cols(), r) {
            let deg: i64 = rows.iter().map(|&i| m.target()[i]).sum::<i64>()
                - cols.iter().map(|&j| m.source()[j]).sum::<i64>();
            let sub = Matrix::from_rows(
                &ctx,
                rows.iter()
                    .map(|&i| cols.iter().map(|&j| generic.get(i, j).clone()).collect())
                    .collect(),
            );
            let det = sub.determinant();
            if det.is_zero() {
                continue;
            }
            debug_assert!(det.is_polynomial());
            minors.push(Form::homogenize(det.num(), deg).expect("minor degree"));
        }
    }
    form_gcd(&minors).expect("generic rank r has a nonzero r-minor")
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn flatten<K: Field>(v: &[Form<K>], lens: &[usize], ctx: &K::Ctx) -> Vec<K> {
    let mut out = Vec::new();
    for (f, &l) in v.iter().zip(lens) {
        let mut c = f.coeffs().to_vec();
        c.resize(l, K::zero_in(ctx));
        out.extend(c);
    }
    out
}

fn unflatten<K: Field>(x: &[K], offsets: &[usize], lens: &[usize]) -> Vec<Form<K>> {
    offsets
        .iter()
        .zip(lens)
        .map(|(&o, &l)| Form::new(x[o..o + l].to_vec()))
        .collect()
}

/// Scales a section so that its first nonzero coefficient is 1.
fn normalize<K: Field>(s: Vec<Form<K>>) -> Vec<Form<K>> {
    let lead = s
        .iter()
        .flat_map(|f| f.coeffs().iter())
        .find(|c| !c.is_zero())
        .and_then(|c| c.inv());
    match lead {
        Some(l) => s.iter().map(|f| f.scale(&l)).collect(),
        None => s,
    }
}

/// Convenience: check that a column set of forms lies in the generic span.
pub fn column_in_span<K: Field>(s: &Subsheaf<K>, col: &[Form<K>]) -> bool {
    let ctx = s.ctx().clone();
    let v: Vec<RatFunc<K>> = col
        .iter()
        .map(|f| RatFunc::from_poly(f.dehomogenize(), &ctx))
        .collect();
    s.contains_generic(&v)
}

impl<K: Field> Subsheaf<K> {
    /// Errors unless the subsheaf is saturated.
    pub fn require_saturated(&self) -> Result<()> {
        if self.is_saturated() {
            Ok(())
        } else {
            Err(Error::NotSaturated)
        }
    }
}
