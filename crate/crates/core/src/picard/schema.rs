//! JSON encoding of [`CurveModel`].
//!
//! ```json
//! {
//!   "components": [{"id": "c", "genus": 0}],
//!   "points": [
//!     {"label": "cusp", "class": "param",
//!      "branches": [[["0", "0", "1"], ["0", "0", "0", "1"]]],
//!      "incidence": ["c"]},
//!     {"label": "node", "class": "ordinary-2", "incidence": ["c", "c"]}
//!   ],
//!   "connected": true
//! }
//! ```
//!
//! `branches[b][i]` lists the coefficients of coordinate `i` on branch `b`,
//! lowest power first, each as a `"p/q"` string (bare integers are also
//! accepted). A point of class `"general"` carries `unipotent_dim` instead
//! of branches and declares its branch count through `incidence`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{Component, CurveModel, ModelPoint, PointSpec};
use crate::error::{Error, Result};
use crate::local_singularity::SingularPointData;
use crate::rational::{self, Rational};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelJson {
    pub components: Vec<ComponentJson>,
    #[serde(default)]
    pub points: Vec<PointJson>,
    pub connected: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentJson {
    pub id: String,
    pub genus: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointJson {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branches: Option<Vec<Vec<Vec<Coefficient>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unipotent_dim: Option<usize>,
    pub incidence: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Text(String),
    Integer(i64),
}

impl Coefficient {
    fn to_rational(&self) -> Result<Rational> {
        match self {
            Coefficient::Text(s) => rational::parse(s),
            Coefficient::Integer(n) => Ok(rational::int(*n)),
        }
    }
}

/// Parses the ordinary class names `"ordinary"`, `"ordinary-m"` and
/// `"ordinary-<n>"`; returns the declared multiplicity if numeric.
fn ordinary_multiplicity(class: &str) -> Option<Option<usize>> {
    let rest = class.strip_prefix("ordinary")?;
    match rest {
        "" | "-m" => Some(None),
        _ => rest.strip_prefix('-')?.parse().ok().map(Some),
    }
}

fn point_from_json(p: PointJson) -> Result<ModelPoint> {
    let class = p.class.as_deref().unwrap_or(if p.branches.is_some() {
        "param"
    } else {
        ""
    });
    let schema = |msg: &str| Error::Schema(format!("point {:?}: {msg}", p.label));
    let spec = if class == "param" {
        let branches = p
            .branches
            .as_ref()
            .ok_or_else(|| schema("class \"param\" requires branches"))?
            .iter()
            .map(|coords| {
                coords
                    .iter()
                    .map(|c| c.iter().map(Coefficient::to_rational).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let longest = branches.iter().flatten().map(Vec::len).max().unwrap_or(0);
        let point = SingularPointData::from_polynomials(p.label.clone(), branches, longest.max(2))
            .map_err(|e| schema(&e.to_string()))?;
        PointSpec::Parametrized(point)
    } else if class == "general" {
        let unipotent_dim = p
            .unipotent_dim
            .ok_or_else(|| schema("class \"general\" requires unipotent_dim"))?;
        PointSpec::General {
            branch_count: p.incidence.len(),
            unipotent_dim,
        }
    } else if let Some(declared) = ordinary_multiplicity(class) {
        let m = p.incidence.len();
        if declared.is_some_and(|d| d != m) {
            return Err(schema("ordinary multiplicity differs from incidence size"));
        }
        PointSpec::Ordinary(m)
    } else {
        return Err(schema(&format!("unknown class {class:?}")));
    };
    if p.branches.is_some() && class != "param" {
        return Err(schema("branches are only allowed on class \"param\""));
    }
    Ok(ModelPoint {
        label: p.label,
        spec,
        incidence: p.incidence,
    })
}

pub fn model_from_json(doc: ModelJson) -> Result<CurveModel> {
    let components = doc
        .components
        .into_iter()
        .map(|c| Component {
            id: c.id,
            genus: c.genus,
        })
        .collect();
    let points = doc
        .points
        .into_iter()
        .map(point_from_json)
        .collect::<Result<Vec<_>>>()?;
    CurveModel::new(components, points, doc.connected)
}

pub fn parse_model(text: &str) -> Result<CurveModel> {
    let doc: ModelJson =
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    model_from_json(doc)
}

fn point_to_json(p: &ModelPoint) -> PointJson {
    let (class, branches, unipotent_dim) = match &p.spec {
        PointSpec::Ordinary(m) => (format!("ordinary-{m}"), None, None),
        PointSpec::General { unipotent_dim, .. } => ("general".to_string(), None, Some(*unipotent_dim)),
        PointSpec::Parametrized(data) => {
            let polys: Vec<Vec<Vec<Rational>>> = match data.polynomials() {
                Some(p) => p.to_vec(),
                None => data
                    .branches()
                    .iter()
                    .map(|coords| coords.iter().map(|jet| jet.coeffs().to_vec()).collect())
                    .collect(),
            };
            let branches = polys
                .iter()
                .map(|coords| {
                    coords
                        .iter()
                        .map(|c| {
                            let len = c.iter().rposition(|x| !x.is_zero()).map_or(0, |i| i + 1);
                            c[..len]
                                .iter()
                                .map(|x| Coefficient::Text(rational::format(x)))
                                .collect()
                        })
                        .collect()
                })
                .collect();
            ("param".to_string(), Some(branches), None)
        }
    };
    PointJson {
        label: p.label.clone(),
        class: Some(class),
        branches,
        unipotent_dim,
        incidence: p.incidence.clone(),
    }
}

pub fn model_to_json(model: &CurveModel) -> ModelJson {
    ModelJson {
        components: model
            .components()
            .iter()
            .map(|c| ComponentJson {
                id: c.id.clone(),
                genus: c.genus,
            })
            .collect(),
        points: model.points().iter().map(point_to_json).collect(),
        connected: model.is_connected(),
    }
}
