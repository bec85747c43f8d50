//! Scenario files: a JSON description of a configuration and the checks to
//! run on it.
//!
//! The format keeps every number exact.  Coefficients and point coordinates
//! are strings holding an integer or a fraction `"a/b"`; they are parsed into
//! the scenario's field, so the same file runs unchanged over the rationals
//! or a prime field.  Top-level shape:
//!
//! ```json
//! {
//!   "field": {"kind": "Q"},
//!   "ambient_dim": 2,
//!   "sections": [ {"degree": 2, "terms": [{"coeff": "1", "exponents": [2,0,0]}, ...]}, ... ],
//!   "parametrization": {"dim": 1, "degree": 2, "components": [ ... ]},
//!   "points": [ ["1", "0", "1"], ... ],
//!   "splits": [ [0], [0, 1] ],
//!   "det": { "row_degrees": [1, 2, 3], "entries": [[...], [...]], "origin": [...], "split": [3, 7] },
//!   "tasks": [ {"kind": "cb", "degree": 3}, {"kind": "tv", "a": [0, 1]}, ... ]
//! }
//! ```
//!
//! `sections` defines a complete intersection for `cb`, `tv` and `koszul`
//! tasks; the optional `parametrization` attaches the excess locus (its
//! `degree` field is the degree of the equations cutting out the image, the
//! component forms carry their own).  The optional `det` block defines a
//! matrix of forms on the same point set for `det` tasks.  `splits` names
//! default index splits for `tv` tasks; absent, sweeps cover every proper
//! split.  Fields of a task left out fall back to scenario-derived defaults
//! (see [`crate::tasks`]).

use anyhow::{bail, Context};
use cb_core::cb::{CIScenario, ExcessLocus};
use cb_core::detloci::{DetScenario, FormMatrix};
use cb_core::{Field, Form, Parametrization, Scalar};
use serde::{Deserialize, Serialize};

/// Parsed scenario file, one-to-one with the JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub field: FieldSpec,
    pub ambient_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sections: Vec<FormSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parametrization: Option<ParamSpec>,
    pub points: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub splits: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub det: Option<DetSpec>,
    pub tasks: Vec<TaskSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FieldSpec {
    Q,
    Fp { p: u64 },
}

/// A homogeneous form as explicit terms; `exponents` has one entry per
/// variable and must sum to `degree` in every term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormSpec {
    pub degree: usize,
    pub terms: Vec<TermSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub coeff: String,
    pub exponents: Vec<u32>,
}

/// Rational parametrization of the excess locus: `dim + 1` parameters mapping
/// to the ambient space.  `degree` is the degree of the equations cutting out
/// the image (the multiplier bookkeeping needs it); each component records
/// its own degree as a form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamSpec {
    pub dim: usize,
    pub degree: usize,
    pub components: Vec<FormSpec>,
}

/// A matrix of forms on the same marked points, for determinantal checks.
/// `entries` is row-major with `row_degrees.len()` rows; `split` designates
/// the default `Z1` for `det` tasks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetSpec {
    pub row_degrees: Vec<usize>,
    pub entries: Vec<Vec<FormSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<Vec<String>>,
    pub split: Vec<usize>,
}

/// One requested check.  Omitted fields take scenario-derived defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TaskSpec {
    /// Propagation across every omitted point at one degree, optionally with
    /// jets of the given order along the parametrized locus.  With
    /// `expect_fail` the task passes when some omission does not propagate.
    Cb {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        degree: Option<i64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        jet_order: Option<usize>,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        expect_fail: bool,
    },
    /// The cokernel inequality `v2 <= v1` over twists `a` and a set of
    /// splits (default: every proper split).
    Tv {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        a: Option<Vec<i64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        splits: Option<Vec<Vec<usize>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        multiplier: Option<bool>,
    },
    /// The determinantal comparison `c2 <= c1`.  Default `z1` is the `det`
    /// block's designated split; `sweep` runs every singleton and pair
    /// instead.  Expected counts, when given, are checked exactly.
    Det {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        z1: Option<Vec<usize>>,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        sweep: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect_c1: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect_c2: Option<usize>,
    },
    /// Koszul homology over a window of twists.  `expect` defaults to
    /// `"excess"` for the full variant on a scenario with an excess locus
    /// and `"exact"` otherwise.
    Koszul {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        variant: VariantSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        twists: Option<[i64; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect: Option<ExpectSpec>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariantSpec {
    Full,
    Skoda,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpectSpec {
    /// Every position above the bottom has zero homology (and the Skoda tail
    /// image has the predicted dimension).
    Exact,
    /// Some position above the bottom has nonzero homology at every twist.
    Excess,
}

/// The file's scenario data compiled into exact objects.
#[derive(Clone, Debug)]
pub struct LoadedScenario {
    pub name: String,
    pub field: Field,
    pub ci: Option<CIScenario>,
    pub det: Option<DetScenario>,
    pub splits: Option<Vec<Vec<usize>>>,
    pub tasks: Vec<TaskSpec>,
}

impl FieldSpec {
    pub fn to_field(self) -> anyhow::Result<Field> {
        match self {
            FieldSpec::Q => Ok(Field::Q),
            FieldSpec::Fp { p } => Ok(Field::fp(p)?),
        }
    }
}

/// Parse the JSON text of a scenario file.  Syntax and schema errors carry
/// serde's line and column plus the offending field name.
pub fn parse_scenario(text: &str) -> anyhow::Result<ScenarioFile> {
    let file: ScenarioFile = serde_json::from_str(text).context("malformed scenario file")?;
    Ok(file)
}

fn parse_point(field: Field, coords: &[String], what: &str) -> anyhow::Result<Vec<Scalar>> {
    coords
        .iter()
        .enumerate()
        .map(|(k, s)| field.parse(s).with_context(|| format!("{what}[{k}]")))
        .collect()
}

fn build_form(spec: &FormSpec, nvars: usize, field: Field, what: &str) -> anyhow::Result<Form> {
    let mut terms = Vec::with_capacity(spec.terms.len());
    for (k, t) in spec.terms.iter().enumerate() {
        let coeff = field
            .parse(&t.coeff)
            .with_context(|| format!("{what}.terms[{k}].coeff"))?;
        terms.push((t.exponents.clone(), coeff));
    }
    Form::from_terms(nvars, spec.degree, field, terms).with_context(|| what.to_string())
}

impl ScenarioFile {
    /// Compile to exact scenario objects, revalidating every invariant.
    /// `override_field` swaps the base field while keeping all data, which is
    /// how one file is compared across the rationals and a prime field.
    pub fn build(&self, override_field: Option<Field>) -> anyhow::Result<LoadedScenario> {
        let field = match override_field {
            Some(f) => f,
            None => self.field.to_field()?,
        };
        let nvars = self.ambient_dim + 1;
        let name = self.name.clone().unwrap_or_else(|| "scenario".to_string());

        let points: Vec<Vec<Scalar>> = self
            .points
            .iter()
            .enumerate()
            .map(|(j, coords)| parse_point(field, coords, &format!("points[{j}]")))
            .collect::<anyhow::Result<_>>()?;

        let ci = if self.sections.is_empty() {
            if self.parametrization.is_some() {
                bail!("parametrization given without sections");
            }
            None
        } else {
            let sections: Vec<Form> = self
                .sections
                .iter()
                .enumerate()
                .map(|(i, s)| build_form(s, nvars, field, &format!("sections[{i}]")))
                .collect::<anyhow::Result<_>>()?;
            let degrees: Vec<usize> = sections.iter().map(|f| f.degree()).collect();
            let excess = match &self.parametrization {
                None => None,
                Some(p) => {
                    let comps: Vec<Form> = p
                        .components
                        .iter()
                        .enumerate()
                        .map(|(i, c)| {
                            build_form(c, p.dim + 1, field, &format!("parametrization.components[{i}]"))
                        })
                        .collect::<anyhow::Result<_>>()?;
                    let param = Parametrization::new(p.dim, comps, format!("{name}-locus"))
                        .context("parametrization")?;
                    Some(ExcessLocus::new(param, p.degree).context("parametrization.degree")?)
                }
            };
            Some(
                CIScenario::new(name.clone(), field, degrees, sections, excess, points.clone())
                    .context("scenario data fails validation")?,
            )
        };

        let det = match &self.det {
            None => None,
            Some(d) => {
                let mut rows = Vec::with_capacity(d.entries.len());
                for (i, row) in d.entries.iter().enumerate() {
                    let forms: Vec<Form> = row
                        .iter()
                        .enumerate()
                        .map(|(j, e)| {
                            build_form(e, nvars, field, &format!("det.entries[{i}][{j}]"))
                        })
                        .collect::<anyhow::Result<_>>()?;
                    rows.push(forms);
                }
                let matrix = FormMatrix::new(self.ambient_dim, d.row_degrees.clone(), rows)
                    .context("det block fails validation")?;
                let origin = match &d.origin {
                    None => None,
                    Some(coords) => Some(parse_point(field, coords, "det.origin")?),
                };
                let split = cb_core::cb::Split::new(points.len(), d.split.clone())
                    .context("det.split")?;
                Some(
                    DetScenario::new(name.clone(), matrix, points.clone(), origin, split)
                        .context("det block fails validation")?,
                )
            }
        };

        if ci.is_none() && det.is_none() {
            bail!("a scenario needs sections, a det block, or both");
        }
        if let Some(splits) = &self.splits {
            for (k, z1) in splits.iter().enumerate() {
                cb_core::cb::Split::new(self.points.len(), z1.clone())
                    .with_context(|| format!("splits[{k}]"))?;
            }
        }

        Ok(LoadedScenario {
            name,
            field,
            ci,
            det,
            splits: self.splits.clone(),
            tasks: self.tasks.clone(),
        })
    }
}
