//! Global curve models and the decomposition of Pic⁰ into abelian, torus and
//! unipotent parts.
//!
//! For a connected projective curve `C` with normalization `C̃` and
//! semi-normalization `C′`:
//!
//! - abelian dimension: `Σ g(Z)` over the components of `C̃`;
//! - torus rank: `Σ_p (b_p − 1) − #components + 1`, with `b_p` the number of
//!   branches at `p`;
//! - unipotent dimension: `Σ_p dim m_{C′,p}/m_{C,p}`.

pub mod schema;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::local_singularity::{
    analyze, LocalInvariants, PointClass, SingularPointData, Truncation, ValuationProfile,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub id: String,
    /// Genus of the normalization of this component.
    pub genus: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointSpec {
    /// Ordinary `m`-fold point declared without jets.
    Ordinary(usize),
    Parametrized(SingularPointData),
    /// A point whose unipotent contribution is known in advance.
    General {
        branch_count: usize,
        unipotent_dim: usize,
    },
}

impl PointSpec {
    pub fn branch_count(&self) -> usize {
        match self {
            PointSpec::Ordinary(m) => *m,
            PointSpec::Parametrized(p) => p.branch_count(),
            PointSpec::General { branch_count, .. } => *branch_count,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelPoint {
    pub label: String,
    pub spec: PointSpec,
    /// Component id of each branch, in branch order.
    pub incidence: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveModel {
    components: Vec<Component>,
    points: Vec<ModelPoint>,
    connected: bool,
}

impl CurveModel {
    pub fn new(components: Vec<Component>, points: Vec<ModelPoint>, connected: bool) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidModel("no components".into()));
        }
        let mut ids = BTreeSet::new();
        for c in &components {
            if !ids.insert(c.id.as_str()) {
                return Err(Error::InvalidModel(format!("duplicate component id {:?}", c.id)));
            }
        }
        let mut labels = BTreeSet::new();
        for p in &points {
            if !labels.insert(p.label.as_str()) {
                return Err(Error::InvalidModel(format!("duplicate point label {:?}", p.label)));
            }
            let b = p.spec.branch_count();
            if b != p.incidence.len() {
                return Err(Error::InvalidModel(format!(
                    "point {:?} has {b} branches but {} incidences",
                    p.label,
                    p.incidence.len()
                )));
            }
            if matches!(p.spec, PointSpec::Ordinary(m) if m < 2) {
                return Err(Error::InvalidModel(format!(
                    "ordinary point {:?} needs at least two branches",
                    p.label
                )));
            }
            if let Some(bad) = p.incidence.iter().find(|id| !ids.contains(id.as_str())) {
                return Err(Error::InvalidModel(format!(
                    "point {:?} references unknown component {bad:?}",
                    p.label
                )));
            }
        }
        let model = CurveModel {
            components,
            points,
            connected,
        };
        if connected && model.connected_component_count() != 1 {
            return Err(Error::InvalidModel(
                "declared connected but the incidence graph is not".into(),
            ));
        }
        Ok(model)
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn points(&self) -> &[ModelPoint] {
        &self.points
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    /// Connected components of the graph joining components through
    /// multibranch points.
    pub fn connected_component_count(&self) -> usize {
        let index: BTreeMap<&str, usize> = self
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| (c.id.as_str(), i))
            .collect();
        let mut parent: Vec<usize> = (0..self.components.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for p in &self.points {
            let mut it = p.incidence.iter().map(|id| index[id.as_str()]);
            if let Some(first) = it.next() {
                for other in it {
                    let (a, b) = (find(&mut parent, first), find(&mut parent, other));
                    parent[a] = b;
                }
            }
        }
        (0..parent.len())
            .filter(|&i| find(&mut parent, i) == i)
            .count()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PicardDecomposition {
    #[serde(rename = "abelian")]
    pub abelian_dim: u64,
    #[serde(rename = "torus")]
    pub torus_rank: u64,
    #[serde(rename = "unipotent")]
    pub unipotent_dim: u64,
    pub total: u64,
}

impl PicardDecomposition {
    pub fn new(abelian_dim: u64, torus_rank: u64, unipotent_dim: u64) -> Self {
        PicardDecomposition {
            abelian_dim,
            torus_rank,
            unipotent_dim,
            total: abelian_dim + torus_rank + unipotent_dim,
        }
    }
}

/// Per-point contribution, as reported by the CLI.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointContribution {
    pub label: String,
    pub branches: usize,
    pub class: Option<PointClass>,
    pub torus: u64,
    pub unipotent: u64,
    pub profile: Option<ValuationProfile>,
    pub method: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PicardReport {
    #[serde(flatten)]
    pub decomposition: PicardDecomposition,
    pub points: Vec<PointContribution>,
}

pub fn abelian_dim(model: &CurveModel) -> u64 {
    model.components.iter().map(|c| c.genus).sum()
}

pub fn torus_rank(model: &CurveModel) -> Result<u64> {
    if !model.connected {
        return Err(Error::Disconnected);
    }
    let branch_excess: usize = model
        .points
        .iter()
        .map(|p| p.spec.branch_count() - 1)
        .sum();
    (branch_excess + 1)
        .checked_sub(model.components.len())
        .map(|t| t as u64)
        .ok_or_else(|| Error::Internal("negative torus rank on a connected model".into()))
}

fn point_contribution(point: &ModelPoint, truncation: Truncation) -> Result<PointContribution> {
    let torus = (point.spec.branch_count() - 1) as u64;
    Ok(match &point.spec {
        PointSpec::Ordinary(m) => PointContribution {
            label: point.label.clone(),
            branches: *m,
            class: Some(PointClass::Ordinary(*m)),
            torus,
            unipotent: 0,
            profile: Some(ValuationProfile::default()),
            method: "declared".into(),
        },
        PointSpec::General {
            branch_count,
            unipotent_dim,
        } => PointContribution {
            label: point.label.clone(),
            branches: *branch_count,
            class: None,
            torus,
            unipotent: *unipotent_dim as u64,
            profile: None,
            method: "declared".into(),
        },
        PointSpec::Parametrized(p) => {
            let LocalInvariants {
                class,
                unipotent_dim,
                profile,
                method,
                ..
            } = analyze(p, truncation)?;
            PointContribution {
                label: point.label.clone(),
                branches: p.branch_count(),
                class: Some(class),
                torus,
                unipotent: unipotent_dim as u64,
                profile: Some(profile),
                method: match method {
                    crate::local_singularity::Method::Semigroup => "semigroup".into(),
                    crate::local_singularity::Method::Jets { truncation } => {
                        format!("jets@{truncation}")
                    }
                },
            }
        }
    })
}

pub fn unipotent_dim_total(model: &CurveModel) -> Result<u64> {
    unipotent_dim_total_with(model, Truncation::Auto)
}

pub fn unipotent_dim_total_with(model: &CurveModel, truncation: Truncation) -> Result<u64> {
    model
        .points
        .iter()
        .map(|p| point_contribution(p, truncation).map(|c| c.unipotent))
        .sum()
}

pub fn picard_decompose(model: &CurveModel) -> Result<PicardDecomposition> {
    picard_report(model, Truncation::Auto).map(|r| r.decomposition)
}

pub fn picard_decompose_with(model: &CurveModel, truncation: Truncation) -> Result<PicardDecomposition> {
    picard_report(model, truncation).map(|r| r.decomposition)
}

pub fn picard_report(model: &CurveModel, truncation: Truncation) -> Result<PicardReport> {
    let torus = torus_rank(model)?;
    let points = model
        .points
        .iter()
        .map(|p| point_contribution(p, truncation))
        .collect::<Result<Vec<_>>>()?;
    let unipotent = points.iter().map(|p| p.unipotent).sum();
    Ok(PicardReport {
        decomposition: PicardDecomposition::new(abelian_dim(model), torus, unipotent),
        points,
    })
}

/// Cusp parametrizations of `Γ_α : X^{2α+1} = Y² Z^{2α−1}`:
/// `(t², t^{2α+1})` at `0` and `(t^{2α−1}, t^{2α+1})` at `∞`.
pub fn gamma_alpha_cusps(alpha: usize, order: usize, prefix: &str) -> Result<[SingularPointData; 2]> {
    if alpha < 1 {
        return Err(Error::OutOfRange("α must be at least 1".into()));
    }
    Ok([
        SingularPointData::monomial(format!("{prefix}0"), &[2, 2 * alpha + 1], order)?,
        SingularPointData::monomial(format!("{prefix}inf"), &[2 * alpha - 1, 2 * alpha + 1], order)?,
    ])
}

pub fn build_gamma_alpha(alpha: usize, order: usize) -> Result<CurveModel> {
    let points = gamma_alpha_cusps(alpha, order, "")?
        .into_iter()
        .map(|p| ModelPoint {
            label: p.label().to_string(),
            spec: PointSpec::Parametrized(p),
            incidence: vec!["gamma".into()],
        })
        .collect();
    CurveModel::new(
        vec![Component {
            id: "gamma".into(),
            genus: 0,
        }],
        points,
        true,
    )
}

/// The divisor `D^{k,l} = Σ {p_i}×Γ_β + Σ Γ_α×{q_j}` on `Γ_α × Γ_β` as a
/// curve: `k` copies of `Γ_β`, `l` copies of `Γ_α`, and `k·l` nodes.
pub fn build_dkl(alpha: usize, beta: usize, k: usize, l: usize, order: usize) -> Result<CurveModel> {
    if k < 1 || l < 1 {
        return Err(Error::OutOfRange("k and l must be at least 1".into()));
    }
    let mut components = Vec::new();
    let mut points = Vec::new();
    let mut add_copies = |family: &str, param: usize, count: usize| -> Result<()> {
        for i in 1..=count {
            let id = format!("{family}{i}");
            for p in gamma_alpha_cusps(param, order, &format!("{id}:"))? {
                points.push(ModelPoint {
                    label: p.label().to_string(),
                    spec: PointSpec::Parametrized(p),
                    incidence: vec![id.clone()],
                });
            }
            components.push(Component { id, genus: 0 });
        }
        Ok(())
    };
    add_copies("vert", beta, k)?;
    add_copies("horiz", alpha, l)?;
    for i in 1..=k {
        for j in 1..=l {
            points.push(ModelPoint {
                label: format!("node{i}.{j}"),
                spec: PointSpec::Ordinary(2),
                incidence: vec![format!("vert{i}"), format!("horiz{j}")],
            });
        }
    }
    CurveModel::new(components, points, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn rational_curve(points: Vec<ModelPoint>) -> CurveModel {
        CurveModel::new(
            vec![Component {
                id: "c".into(),
                genus: 0,
            }],
            points,
            true,
        )
        .unwrap()
    }

    fn nodal_point(label: &str) -> ModelPoint {
        ModelPoint {
            label: label.into(),
            spec: PointSpec::Ordinary(2),
            incidence: vec!["c".into(), "c".into()],
        }
    }

    #[test]
    fn torus_rank_examples() {
        assert_eq!(torus_rank(&build_dkl(1, 1, 2, 3, 8).unwrap()).unwrap(), 2);
        assert_eq!(torus_rank(&build_gamma_alpha(3, 8).unwrap()).unwrap(), 0);
        assert_eq!(torus_rank(&rational_curve(vec![nodal_point("n")])).unwrap(), 1);
    }

    #[test]
    fn unipotent_examples() {
        assert_eq!(unipotent_dim_total(&build_gamma_alpha(2, 8).unwrap()).unwrap(), 6);
        assert_eq!(
            unipotent_dim_total(&rational_curve(vec![nodal_point("a"), nodal_point("b")])).unwrap(),
            0
        );
        assert_eq!(unipotent_dim_total(&build_dkl(1, 1, 2, 2, 8).unwrap()).unwrap(), 4);
    }

    #[test]
    fn decomposition_examples() {
        assert_eq!(
            picard_decompose(&build_gamma_alpha(3, 8).unwrap()).unwrap(),
            PicardDecomposition::new(0, 0, 15)
        );
        let smooth = CurveModel::new(
            vec![Component {
                id: "e".into(),
                genus: 4,
            }],
            vec![],
            true,
        )
        .unwrap();
        assert_eq!(picard_decompose(&smooth).unwrap(), PicardDecomposition::new(4, 0, 0));
        assert_eq!(
            picard_decompose(&build_dkl(1, 1, 3, 3, 8).unwrap()).unwrap(),
            PicardDecomposition::new(0, 4, 6)
        );
    }

    #[test]
    fn example_builders() {
        for (alpha, total) in [(1, 1), (2, 6), (5, 45)] {
            let d = picard_decompose(&build_gamma_alpha(alpha, 4).unwrap()).unwrap();
            assert_eq!(d.total, total);
        }
        let cases = [
            ((1, 1, 2, 2), (0, 1, 4)),
            ((1, 1, 1, 1), (0, 0, 2)),
            ((2, 1, 3, 3), (0, 4, 21)),
        ];
        for ((a, b, k, l), (ab, t, u)) in cases {
            let d = picard_decompose(&build_dkl(a, b, k, l, 4).unwrap()).unwrap();
            assert_eq!(d, PicardDecomposition::new(ab, t, u), "{:?}", (a, b, k, l));
        }
        assert!(build_gamma_alpha(0, 4).is_err());
        assert!(build_dkl(1, 1, 0, 2, 4).is_err());
    }

    #[test]
    fn jets_path_agrees_on_gamma_alpha() {
        let model = build_gamma_alpha(2, 4).unwrap();
        let d = picard_decompose_with(&model, Truncation::Fixed(30)).unwrap();
        assert_eq!(d, PicardDecomposition::new(0, 0, 6));
    }

    #[test]
    fn disconnected_is_rejected() {
        let two = vec![
            Component { id: "a".into(), genus: 1 },
            Component { id: "b".into(), genus: 0 },
        ];
        let m = CurveModel::new(two.clone(), vec![], false).unwrap();
        assert_eq!(torus_rank(&m), Err(Error::Disconnected));
        assert_eq!(picard_decompose(&m), Err(Error::Disconnected));
        assert!(matches!(CurveModel::new(two, vec![], true), Err(Error::InvalidModel(_))));
    }

    #[test]
    fn model_validation() {
        let c = vec![Component { id: "c".into(), genus: 0 }];
        let bad_incidence = ModelPoint {
            label: "n".into(),
            spec: PointSpec::Ordinary(2),
            incidence: vec!["c".into()],
        };
        assert!(CurveModel::new(c.clone(), vec![bad_incidence], true).is_err());
        let unknown = ModelPoint {
            label: "n".into(),
            spec: PointSpec::Ordinary(2),
            incidence: vec!["c".into(), "z".into()],
        };
        assert!(CurveModel::new(c.clone(), vec![unknown], true).is_err());
        assert!(CurveModel::new(vec![], vec![], true).is_err());
        let cusp = SingularPointData::from_polynomials(
            "cusp",
            vec![vec![vec![int(0), int(0), int(1)], vec![int(0), int(0), int(0), int(1)]]],
            6,
        )
        .unwrap();
        let ok = ModelPoint {
            label: "cusp".into(),
            spec: PointSpec::Parametrized(cusp),
            incidence: vec!["c".into()],
        };
        let m = CurveModel::new(c, vec![ok], true).unwrap();
        assert_eq!(picard_decompose(&m).unwrap(), PicardDecomposition::new(0, 0, 1));
    }

    #[test]
    fn declared_general_point() {
        let m = rational_curve(vec![ModelPoint {
            label: "g".into(),
            spec: PointSpec::General {
                branch_count: 2,
                unipotent_dim: 3,
            },
            incidence: vec!["c".into(), "c".into()],
        }]);
        assert_eq!(picard_decompose(&m).unwrap(), PicardDecomposition::new(0, 1, 3));
    }
}
