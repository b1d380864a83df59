//! JSON documents. Every document carries a `kind` tag; forms are written as
//! `{degree, coeffs}` with coefficients as integers in `[0, p^m)`, and any
//! document holding field elements carries a `field` header `{p, m, modulus}`.

use isoleaf::algebra::{Form, Matrix};
use isoleaf::bundles::{AbstractBundle, HnProfile, Rational};
use isoleaf::engine::{FamilyDescriptor, HodgeData, ListOracle, ReductionState, RepeatPolicy};
use isoleaf::groupschemes::{DieudonneModule, RestrictedLieBundle};
use isoleaf::higgs::{graded_from_hodge, GradedHiggs, HiggsBundle};
use isoleaf::sheafmaps::GradedMatrix;
use isoleaf::{GaloisField, Gf, SplitBundle};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDoc {
    pub p: u64,
    #[serde(default = "one")]
    pub m: u32,
    /// Lower coefficients of the monic generator polynomial, for `m ≥ 2`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modulus: Vec<u32>,
}

fn one() -> u32 {
    1
}

impl FieldDoc {
    pub fn of(f: &GaloisField) -> Self {
        FieldDoc {
            p: f.p(),
            m: f.m(),
            modulus: f.modulus().to_vec(),
        }
    }

    pub fn field(&self) -> Result<GaloisField, CliError> {
        let f = GaloisField::new(self.p, self.m).map_err(|e| CliError::invalid("field", e))?;
        if !self.modulus.is_empty() && self.modulus != f.modulus() {
            return Err(CliError::Invalid(format!(
                "field.modulus: expected the fixed generator polynomial {:?}",
                f.modulus()
            )));
        }
        Ok(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormDoc {
    /// `null` for the zero form.
    pub degree: Option<i64>,
    pub coeffs: Vec<i64>,
}

impl FormDoc {
    pub fn of(f: &Form<Gf>) -> Self {
        FormDoc {
            degree: f.degree().map(|d| d as i64),
            coeffs: f.coeffs().iter().map(|c| c.value() as i64).collect(),
        }
    }

    pub fn form(&self, f: &GaloisField, at: &str) -> Result<Form<Gf>, CliError> {
        let bad = |s: String| CliError::Invalid(format!("{at}: {s}"));
        let expected = match self.degree {
            None => 0,
            Some(d) if d < 0 => return Err(bad(format!("negative degree {d}"))),
            Some(d) => d as usize + 1,
        };
        if self.coeffs.len() != expected {
            return Err(bad(format!(
                "{} coefficients for degree {:?}",
                self.coeffs.len(),
                self.degree
            )));
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| {
                u64::try_from(c)
                    .map_err(|_| bad(format!("coefficient {c} is negative")))
                    .and_then(|c| f.elem(c).map_err(|e| bad(e.to_string())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let form = Form::new(coeffs);
        if self.degree.is_some() && form.is_zero() {
            return Err(bad(
                "all coefficients are zero; write the zero form with degree null".into(),
            ));
        }
        Ok(form)
    }
}

pub type FormRows = Vec<Vec<FormDoc>>;

fn forms(f: &GaloisField, rows: &FormRows, at: &str) -> Result<Vec<Vec<Form<Gf>>>, CliError> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, x)| x.form(f, &format!("{at}[{i}][{j}]")))
                .collect()
        })
        .collect()
}

fn form_rows(rows: &[Vec<Form<Gf>>]) -> FormRows {
    rows.iter()
        .map(|r| r.iter().map(FormDoc::of).collect())
        .collect()
}

fn matrix(f: &GaloisField, rows: &[Vec<i64>], at: &str) -> Result<Matrix<Gf>, CliError> {
    let n = rows.len();
    let mut out = Vec::with_capacity(n);
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(CliError::Invalid(format!(
                "{at}[{i}]: expected {n} entries, found {}",
                r.len()
            )));
        }
        let row = r
            .iter()
            .enumerate()
            .map(|(j, &c)| {
                u64::try_from(c)
                    .ok()
                    .and_then(|c| f.elem(c).ok())
                    .ok_or_else(|| {
                        CliError::Invalid(format!(
                            "{at}[{i}][{j}]: {c} is not in [0, {})",
                            f.order()
                        ))
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push(row);
    }
    Ok(Matrix::from_rows(f, out))
}

fn matrix_rows(m: &Matrix<Gf>) -> Vec<Vec<i64>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|c| c.value() as i64).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HnBlockDoc {
    /// `[numerator, denominator]`.
    pub slope: [i64; 2],
    pub rank: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbstractDoc {
    pub rank: u64,
    pub degree: i64,
    pub genus: u64,
    pub prime: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hn: Option<Vec<HnBlockDoc>>,
}

impl AbstractDoc {
    pub fn of(b: &AbstractBundle) -> Self {
        AbstractDoc {
            rank: b.rank,
            degree: b.degree,
            genus: b.genus,
            prime: b.prime,
            hn: b.hn.as_ref().map(|h| {
                h.blocks()
                    .iter()
                    .map(|(s, r)| HnBlockDoc {
                        slope: [*s.numer(), *s.denom()],
                        rank: *r,
                    })
                    .collect()
            }),
        }
    }

    pub fn bundle(&self) -> Result<AbstractBundle, CliError> {
        let b = AbstractBundle::new(self.rank, self.degree, self.genus, self.prime)
            .map_err(|e| CliError::invalid("abstract", e))?;
        let Some(hn) = &self.hn else { return Ok(b) };
        let mut blocks = Vec::new();
        for (i, blk) in hn.iter().enumerate() {
            if blk.slope[1] <= 0 {
                return Err(CliError::Invalid(format!(
                    "abstract.hn[{i}].slope: denominator must be positive"
                )));
            }
            blocks.push((Rational::new(blk.slope[0], blk.slope[1]), blk.rank));
        }
        let profile = HnProfile::new(blocks).map_err(|e| CliError::invalid("abstract.hn", e))?;
        b.with_hn(profile)
            .map_err(|e| CliError::invalid("abstract.hn", e))
    }
}

/// Either `{"twists": [...]}` for a split bundle on the line or
/// `{"abstract": {...}}` for numerical data on a curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twists: Option<Vec<i64>>,
    #[serde(default, rename = "abstract", skip_serializing_if = "Option::is_none")]
    pub abstract_bundle: Option<AbstractDoc>,
}

pub enum BundleData {
    Split(SplitBundle),
    Abstract(AbstractBundle),
}

impl BundleDoc {
    pub fn split(b: &SplitBundle) -> Self {
        BundleDoc {
            twists: Some(b.twists().to_vec()),
            abstract_bundle: None,
        }
    }

    pub fn data(&self) -> Result<BundleData, CliError> {
        match (&self.twists, &self.abstract_bundle) {
            (Some(t), None) if t.is_empty() => {
                Err(CliError::Invalid("twists: bundle has rank zero".into()))
            }
            (Some(t), None) => Ok(BundleData::Split(SplitBundle::new(t.clone()))),
            (None, Some(a)) => Ok(BundleData::Abstract(a.bundle()?)),
            _ => Err(CliError::Invalid(
                "bundle: give exactly one of `twists` and `abstract`".into(),
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepeatDoc {
    RepeatLast,
    Cycle,
    Once,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleDoc {
    pub matrices: Vec<FormRows>,
    pub repeat: RepeatDoc,
}

/// A document. The JSON form is `{"kind": ..., <payload fields>}`; see
/// [`Document::parse`] and [`Document::to_json`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Document {
    Bundle {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        twists: Option<Vec<i64>>,
        #[serde(default, rename = "abstract", skip_serializing_if = "Option::is_none")]
        abstract_bundle: Option<AbstractDoc>,
    },
    GradedMatrix {
        field: FieldDoc,
        source: Vec<i64>,
        target: Vec<i64>,
        entries: FormRows,
    },
    Higgs {
        field: FieldDoc,
        twists: Vec<i64>,
        /// Map `E → E ⊗ Ω`, entry `(i, j)` of degree `a_i - a_j - 2`.
        theta: FormRows,
    },
    GradedHiggs {
        field: FieldDoc,
        hodge: Vec<i64>,
        ks: FormRows,
        #[serde(default)]
        skip_symmetry: bool,
        #[serde(default)]
        genus: u64,
    },
    Dieudonne {
        field: FieldDoc,
        f: Vec<Vec<i64>>,
        v: Vec<Vec<i64>>,
    },
    LieBundle {
        field: FieldDoc,
        twists: Vec<i64>,
        pmap: FormRows,
    },
    Family {
        field: FieldDoc,
        g: usize,
        genus: u64,
        hodge: BundleDoc,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ks: Option<FormRows>,
        non_isotrivial: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        trace_nontrivial: Option<bool>,
    },
    Reduction {
        field: FieldDoc,
        budget_exp: u64,
        lie_target: Vec<i64>,
        /// Map `O^g → Lie`, entry `(i, j)` of degree `b_i`.
        lie_phi: FormRows,
        oracle: OracleDoc,
    },
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Bundle { .. } => "bundle",
            Document::GradedMatrix { .. } => "graded_matrix",
            Document::Higgs { .. } => "higgs",
            Document::GradedHiggs { .. } => "graded_higgs",
            Document::Dieudonne { .. } => "dieudonne",
            Document::LieBundle { .. } => "lie_bundle",
            Document::Family { .. } => "family",
            Document::Reduction { .. } => "reduction",
        }
    }

    /// Parses JSON. Syntax errors report line and column, payload errors the
    /// path of the offending field.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let v: Value = serde_json::from_str(text).map_err(|e| {
            CliError::Invalid(format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        let Value::Object(mut map) = v else {
            return Err(CliError::Invalid("a document must be a JSON object".into()));
        };
        let kind = match map.remove("kind") {
            Some(Value::String(k)) => k,
            Some(_) => return Err(CliError::Invalid("`kind` must be a string".into())),
            None => return Err(CliError::Invalid("missing `kind`".into())),
        };
        let mut outer = Map::new();
        outer.insert(kind.clone(), Value::Object(map));
        serde_path_to_error::deserialize(Value::Object(outer)).map_err(|e| {
            let path = e.path().to_string();
            let field = path
                .strip_prefix(&kind)
                .unwrap_or(&path)
                .trim_start_matches('.');
            let inner = e.into_inner();
            if field.is_empty() {
                CliError::Invalid(format!("{inner}"))
            } else {
                CliError::Invalid(format!("at `{field}`: {inner}"))
            }
        })
    }

    /// The JSON form, keys sorted.
    pub fn to_json(&self) -> Value {
        let Value::Object(outer) = serde_json::to_value(self).expect("serialisable") else {
            unreachable!("struct variants serialise to objects")
        };
        let (kind, payload) = outer.into_iter().next().expect("one variant");
        let Value::Object(mut map) = payload else {
            unreachable!("struct variants serialise to objects")
        };
        map.insert("kind".into(), Value::String(kind));
        Value::Object(map)
    }

    pub fn emit(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serialisable")
    }

    /// Parses every payload into core types and writes it back, dropping
    /// redundant data; the result parses to itself.
    pub fn canonicalize(&self) -> Result<Document, CliError> {
        Ok(match self {
            Document::Bundle { .. } => match self.bundle()? {
                BundleData::Split(b) => Document::Bundle {
                    twists: Some(b.twists().to_vec()),
                    abstract_bundle: None,
                },
                BundleData::Abstract(a) => Document::Bundle {
                    twists: None,
                    abstract_bundle: Some(AbstractDoc::of(&a)),
                },
            },
            Document::GradedMatrix { field, .. } => {
                let m = self.graded_matrix()?;
                Document::GradedMatrix {
                    field: FieldDoc::of(&field.field()?),
                    source: m.source().to_vec(),
                    target: m.target().to_vec(),
                    entries: form_rows(m.entries()),
                }
            }
            Document::Higgs { field, .. } => {
                let h = self.higgs()?;
                Document::Higgs {
                    field: FieldDoc::of(&field.field()?),
                    twists: h.twists().to_vec(),
                    theta: form_rows(h.theta().entries()),
                }
            }
            Document::GradedHiggs {
                field,
                skip_symmetry,
                genus,
                ..
            } => {
                let (h, _) = self.graded_higgs()?;
                Document::GradedHiggs {
                    field: FieldDoc::of(&field.field()?),
                    hodge: h.hodge().to_vec(),
                    ks: form_rows(h.ks().entries()),
                    skip_symmetry: *skip_symmetry,
                    genus: *genus,
                }
            }
            Document::Dieudonne { field, .. } => {
                let d = self.dieudonne()?;
                Document::Dieudonne {
                    field: FieldDoc::of(&field.field()?),
                    f: matrix_rows(d.f_matrix()),
                    v: matrix_rows(d.v_matrix()),
                }
            }
            Document::LieBundle { field, .. } => {
                let l = self.lie_bundle()?;
                Document::LieBundle {
                    field: FieldDoc::of(&field.field()?),
                    twists: l.twists().to_vec(),
                    pmap: form_rows(l.pmap().entries()),
                }
            }
            Document::Family { .. } => Document::of_family(&self.family()?),
            Document::Reduction {
                field,
                budget_exp,
                lie_target,
                lie_phi,
                oracle,
            } => {
                let f = field.field()?;
                self.reduction()?;
                let canon = |rows: &FormRows, at: &str| forms(&f, rows, at).map(|r| form_rows(&r));
                Document::Reduction {
                    field: FieldDoc::of(&f),
                    budget_exp: *budget_exp,
                    lie_target: lie_target.clone(),
                    lie_phi: canon(lie_phi, "lie_phi")?,
                    oracle: OracleDoc {
                        matrices: oracle
                            .matrices
                            .iter()
                            .enumerate()
                            .map(|(k, m)| canon(m, &format!("oracle.matrices[{k}]")))
                            .collect::<Result<_, _>>()?,
                        repeat: oracle.repeat,
                    },
                }
            }
        })
    }

    pub fn of_family(fam: &FamilyDescriptor<Gf>) -> Document {
        let hodge = match &fam.hodge {
            HodgeData::Split(b) => BundleDoc::split(b),
            HodgeData::Abstract(a) => BundleDoc {
                twists: None,
                abstract_bundle: Some(AbstractDoc::of(a)),
            },
        };
        Document::Family {
            field: FieldDoc::of(&fam.ctx),
            g: fam.g,
            genus: fam.genus,
            hodge,
            ks: fam.ks.as_ref().map(|k| form_rows(k)),
            non_isotrivial: fam.non_isotrivial,
            trace_nontrivial: fam.trace_nontrivial,
        }
    }

    pub fn bundle(&self) -> Result<BundleData, CliError> {
        match self {
            Document::Bundle {
                twists,
                abstract_bundle,
            } => BundleDoc {
                twists: twists.clone(),
                abstract_bundle: abstract_bundle.clone(),
            }
            .data(),
            _ => Err(self.wrong_kind("bundle")),
        }
    }

    pub fn graded_matrix(&self) -> Result<GradedMatrix<Gf>, CliError> {
        let Document::GradedMatrix {
            field,
            source,
            target,
            entries,
        } = self
        else {
            return Err(self.wrong_kind("graded_matrix"));
        };
        let f = field.field()?;
        let e = forms(&f, entries, "entries")?;
        GradedMatrix::new(&f, source.clone(), target.clone(), e)
            .map_err(|e| CliError::invalid("entries", e))
    }

    pub fn higgs(&self) -> Result<HiggsBundle<Gf>, CliError> {
        let Document::Higgs {
            field,
            twists,
            theta,
        } = self
        else {
            return Err(self.wrong_kind("higgs"));
        };
        let f = field.field()?;
        let e = forms(&f, theta, "theta")?;
        let target = twists.iter().map(|a| a - 2).collect();
        let m = GradedMatrix::new(&f, twists.clone(), target, e)
            .map_err(|e| CliError::invalid("theta", e))?;
        HiggsBundle::new(m).map_err(|e| CliError::invalid("theta", e))
    }

    /// The graded Higgs bundle with the genus of its base.
    pub fn graded_higgs(&self) -> Result<(GradedHiggs<Gf>, u64), CliError> {
        let Document::GradedHiggs {
            field,
            hodge,
            ks,
            skip_symmetry,
            genus,
        } = self
        else {
            return Err(self.wrong_kind("graded_higgs"));
        };
        let f = field.field()?;
        let e = forms(&f, ks, "ks")?;
        let h = graded_from_hodge(&f, hodge, e, *skip_symmetry)
            .map_err(|e| CliError::invalid("ks", e))?;
        Ok((h, *genus))
    }

    pub fn dieudonne(&self) -> Result<DieudonneModule<Gf>, CliError> {
        let Document::Dieudonne {
            field,
            f: fm,
            v: vm,
        } = self
        else {
            return Err(self.wrong_kind("dieudonne"));
        };
        let f = field.field()?;
        let (a, b) = (matrix(&f, fm, "f")?, matrix(&f, vm, "v")?);
        DieudonneModule::new(a, b).map_err(|e| CliError::invalid("dieudonne", e))
    }

    pub fn lie_bundle(&self) -> Result<RestrictedLieBundle<Gf>, CliError> {
        let Document::LieBundle {
            field,
            twists,
            pmap,
        } = self
        else {
            return Err(self.wrong_kind("lie_bundle"));
        };
        let f = field.field()?;
        let e = forms(&f, pmap, "pmap")?;
        RestrictedLieBundle::new(&f, twists.clone(), e).map_err(|e| CliError::invalid("pmap", e))
    }

    pub fn family(&self) -> Result<FamilyDescriptor<Gf>, CliError> {
        let Document::Family {
            field,
            g,
            genus,
            hodge,
            ks,
            non_isotrivial,
            trace_nontrivial,
        } = self
        else {
            return Err(self.wrong_kind("family"));
        };
        let f = field.field()?;
        if let (Some(t), Some(_)) = (&hodge.twists, ks) {
            if t.windows(2).any(|w| w[0] < w[1]) {
                return Err(CliError::Invalid(
                    "hodge.twists: list the twists in descending order when `ks` is given".into(),
                ));
            }
        }
        let hodge = match hodge.data()? {
            BundleData::Split(b) => HodgeData::Split(b),
            BundleData::Abstract(a) => HodgeData::Abstract(a),
        };
        let ks = ks.as_ref().map(|k| forms(&f, k, "ks")).transpose()?;
        let fam = FamilyDescriptor {
            ctx: f,
            g: *g,
            genus: *genus,
            prime: f.p(),
            hodge,
            ks,
            non_isotrivial: *non_isotrivial,
            trace_nontrivial: *trace_nontrivial,
        };
        fam.validate().map_err(|e| CliError::invalid("family", e))?;
        Ok(fam)
    }

    pub fn reduction(&self) -> Result<(ReductionState<Gf>, ListOracle<Gf>), CliError> {
        let Document::Reduction {
            field,
            budget_exp,
            lie_target,
            lie_phi,
            oracle,
        } = self
        else {
            return Err(self.wrong_kind("reduction"));
        };
        let f = field.field()?;
        let g = lie_target.len();
        let graded = |rows: &FormRows, at: &str| -> Result<GradedMatrix<Gf>, CliError> {
            let e = forms(&f, rows, at)?;
            GradedMatrix::new(&f, vec![0; g], lie_target.clone(), e)
                .map_err(|e| CliError::invalid(at, e))
        };
        let phi = graded(lie_phi, "lie_phi")?;
        let state =
            ReductionState::new(*budget_exp, phi).map_err(|e| CliError::invalid("lie_phi", e))?;
        // oracle matrices are checked by the engine so that the step is reported
        let mut matrices = Vec::new();
        for (k, rows) in oracle.matrices.iter().enumerate() {
            let e = forms(&f, rows, &format!("oracle.matrices[{k}]"))?;
            let cols = e.first().map_or(0, |r| r.len());
            let source = vec![0; cols];
            let target = if e.len() == g {
                lie_target.clone()
            } else {
                vec![0; e.len()]
            };
            matrices.push(unchecked(&f, source, target, e));
        }
        let policy = match oracle.repeat {
            RepeatDoc::RepeatLast => RepeatPolicy::RepeatLast,
            RepeatDoc::Cycle => RepeatPolicy::Cycle,
            RepeatDoc::Once => RepeatPolicy::Once,
        };
        Ok((state, ListOracle::new(matrices, policy)))
    }

    fn wrong_kind(&self, expected: &str) -> CliError {
        CliError::Invalid(format!(
            "expected a `{expected}` document, found `{}`",
            self.kind()
        ))
    }
}

/// Oracle matrices keep their entries even when degrees are wrong, so that
/// the engine reports the offending step.
fn unchecked(
    f: &GaloisField,
    source: Vec<i64>,
    target: Vec<i64>,
    e: Vec<Vec<Form<Gf>>>,
) -> GradedMatrix<Gf> {
    GradedMatrix::new(f, source.clone(), target.clone(), e.clone())
        .unwrap_or_else(|_| GradedMatrix::from_raw(f, source, target, e))
}
