//! Invariants of a single singular point given by branch parametrizations.
//!
//! A point `p` with formal branches `q₁, …, q_b` is described by the maps
//! `t ↦ (x₁(t), …, x_r(t))`, one per branch. The image of the maximal ideal
//! `m_{C,p}` in `∏ k[[t]]` is spanned by the monomials of positive degree in
//! the coordinate tuples; the semi-normalization ideal `∏ m_{C̃,q}` is the
//! space of all tuples of positive valuation. Their quotient has dimension
//! equal to the unipotent contribution of `p` to Pic⁰.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::echelon::{self, Echelon};
use crate::jets::{BranchJetTuple, Jet};
use crate::rational::Rational;
use crate::semigroups::NumericalSemigroup;

/// Upper limit for automatic truncation search.
pub const MAX_AUTO_TRUNCATION: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularPointData {
    label: String,
    /// `branches[b][i]` is coordinate `i` along branch `b`.
    branches: Vec<Vec<Jet>>,
    /// Full coefficient lists when the coordinates are polynomials; allows
    /// re-truncation at any order.
    polynomials: Option<Vec<Vec<Vec<Rational>>>>,
}

impl SingularPointData {
    /// Point from truncated series data; cannot be re-truncated upward.
    pub fn new(label: impl Into<String>, branches: Vec<Vec<Jet>>) -> Result<Self> {
        Self::build(label.into(), branches, None)
    }

    /// Point whose coordinates are polynomials given by coefficient lists.
    pub fn from_polynomials(
        label: impl Into<String>,
        branches: Vec<Vec<Vec<Rational>>>,
        order: usize,
    ) -> Result<Self> {
        if order < 1 {
            return Err(Error::InvalidPoint("truncation order must be positive".into()));
        }
        let jets = Self::jets_from(&branches, order);
        Self::build(label.into(), jets, Some(branches))
    }

    /// Unibranch point `t ↦ (t^e₁, …, t^e_r)`.
    pub fn monomial(label: impl Into<String>, exponents: &[usize], order: usize) -> Result<Self> {
        let coords = exponents
            .iter()
            .map(|&e| {
                let mut c = vec![Rational::zero(); e + 1];
                c[e] = Rational::from_integer(1.into());
                c
            })
            .collect();
        Self::from_polynomials(label, vec![coords], order)
    }

    fn jets_from(polys: &[Vec<Vec<Rational>>], order: usize) -> Vec<Vec<Jet>> {
        polys
            .iter()
            .map(|coords| coords.iter().map(|c| Jet::new(c.clone(), order)).collect())
            .collect()
    }

    fn build(
        label: String,
        branches: Vec<Vec<Jet>>,
        polynomials: Option<Vec<Vec<Vec<Rational>>>>,
    ) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidPoint(format!("{label}: {msg}")));
        if branches.is_empty() {
            return bad("no branches".into());
        }
        let r = branches[0].len();
        if r == 0 {
            return bad("branches need at least one coordinate".into());
        }
        let order = branches[0][0].truncation_order();
        for (b, coords) in branches.iter().enumerate() {
            if coords.len() != r {
                return bad(format!("branch {b} has {} coordinates, expected {r}", coords.len()));
            }
            for (i, x) in coords.iter().enumerate() {
                if x.truncation_order() != order {
                    return bad(format!("branch {b} coordinate {i} has a different truncation"));
                }
                if x.valuation() == Some(0) {
                    return bad(format!(
                        "branch {b} coordinate {i} does not vanish at the point"
                    ));
                }
            }
        }
        Ok(SingularPointData {
            label,
            branches,
            polynomials,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn branches(&self) -> &[Vec<Jet>] {
        &self.branches
    }

    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn coordinate_count(&self) -> usize {
        self.branches[0].len()
    }

    pub fn truncation_order(&self) -> usize {
        self.branches[0][0].truncation_order()
    }

    /// Full coefficient lists, when the point was built from polynomials.
    pub fn polynomials(&self) -> Option<&[Vec<Vec<Rational>>]> {
        self.polynomials.as_deref()
    }

    pub fn is_exact(&self) -> bool {
        self.polynomials.is_some()
    }

    /// The same point at truncation `order`. Growing the order is only
    /// possible for polynomial data.
    pub fn at_order(&self, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidPoint("truncation order must be positive".into()));
        }
        if let Some(polys) = &self.polynomials {
            return Ok(SingularPointData {
                label: self.label.clone(),
                branches: Self::jets_from(polys, order),
                polynomials: Some(polys.clone()),
            });
        }
        let have = self.truncation_order();
        if order > have {
            return Err(Error::InsufficientTruncation {
                label: self.label.clone(),
                have,
                need: order,
            });
        }
        Ok(SingularPointData {
            label: self.label.clone(),
            branches: self
                .branches
                .iter()
                .map(|coords| coords.iter().map(|x| x.truncate(order)).collect())
                .collect(),
            polynomials: None,
        })
    }

    /// Exponents `(e₁, …, e_r)` when the point is `t ↦ (c₁t^e₁, …, c_r t^e_r)`
    /// on a single branch.
    pub fn monomial_exponents(&self) -> Option<Vec<u64>> {
        if self.branch_count() != 1 {
            return None;
        }
        match &self.polynomials {
            Some(polys) => polys[0]
                .iter()
                .map(|c| {
                    let mut nonzero = c.iter().enumerate().filter(|(_, x)| !x.is_zero());
                    match (nonzero.next(), nonzero.next()) {
                        (Some((v, _)), None) => Some(v as u64),
                        _ => None,
                    }
                })
                .collect(),
            None => self.branches[0]
                .iter()
                .map(|x| match (x.term_count(), x.valuation()) {
                    (1, Some(v)) => Some(v as u64),
                    _ => None,
                })
                .collect(),
        }
    }

    /// Coordinate `i` as a tuple over all branches.
    fn coordinate_tuple(&self, i: usize) -> BranchJetTuple {
        BranchJetTuple::new(self.branches.iter().map(|c| c[i].clone()).collect())
            .expect("branches share truncation order")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "m", rename_all = "lowercase")]
pub enum PointClass {
    Smooth,
    /// `m ≥ 2` smooth branches with linearly independent tangents.
    Ordinary(usize),
    /// Anything else; carries the branch count.
    General(usize),
}

impl PointClass {
    pub fn branch_count(&self) -> usize {
        match *self {
            PointClass::Smooth => 1,
            PointClass::Ordinary(m) | PointClass::General(m) => m,
        }
    }
}

/// Pole orders `ν` of the local part of `Lie(Div⁰_{C̃/C})` with the
/// dimension of each graded piece.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationProfile {
    pub orders: BTreeMap<u64, usize>,
    /// Set when the per-order split was read off a valuation filtration of a
    /// multibranch quotient rather than a value semigroup.
    #[serde(default)]
    pub extrapolated: bool,
}

impl ValuationProfile {
    /// Profile with dimension 1 at each listed order.
    pub fn from_gaps(gaps: &[u64]) -> Self {
        ValuationProfile {
            orders: gaps.iter().map(|&g| (g, 1)).collect(),
            extrapolated: false,
        }
    }

    pub fn total(&self) -> usize {
        self.orders.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }
}

pub fn classify_point(p: &SingularPointData) -> Result<PointClass> {
    if p.truncation_order() < 2 {
        return Err(Error::InsufficientTruncation {
            label: p.label.clone(),
            have: p.truncation_order(),
            need: 2,
        });
    }
    let tangents: Vec<Vec<Rational>> = p
        .branches
        .iter()
        .map(|coords| coords.iter().map(|x| x.coeff(1).clone()).collect())
        .collect();
    let smooth = |t: &Vec<Rational>| t.iter().any(|c| !c.is_zero());
    let m = p.branch_count();

    if m == 1 {
        return Ok(if smooth(&tangents[0]) {
            PointClass::Smooth
        } else {
            PointClass::General(1)
        });
    }
    let r = p.coordinate_count();
    if tangents.iter().all(smooth) && echelon::rank(tangents, r) == m {
        Ok(PointClass::Ordinary(m))
    } else {
        Ok(PointClass::General(m))
    }
}

/// Nonzero monomials of positive degree in the coordinate tuples.
fn maximal_ideal_image(p: &SingularPointData) -> Vec<BranchJetTuple> {
    let coords: Vec<BranchJetTuple> = (0..p.coordinate_count())
        .map(|i| p.coordinate_tuple(i))
        .filter(|x| !x.is_zero())
        .collect();
    let mut out = Vec::new();
    // (monomial, index of its last factor); factors taken in non-decreasing order.
    let mut layer: Vec<(BranchJetTuple, usize)> =
        coords.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for (mono, last) in &layer {
            for (j, x) in coords.iter().enumerate().skip(*last) {
                let prod = mono.mul(x);
                if !prod.is_zero() {
                    next.push((prod, j));
                }
            }
        }
        out.extend(layer.into_iter().map(|(m, _)| m));
        layer = next;
    }
    out
}

/// Echelon form of the image of `m_{C,p}` with columns ordered by
/// (power of t, branch) so that a prefix of columns is a valuation
/// truncation. Column 0 of each branch is dropped since it is always zero.
fn ideal_echelon(p: &SingularPointData) -> (Echelon, usize) {
    let m = p.truncation_order();
    let b = p.branch_count();
    let ncols = b * (m - 1);
    let rows = maximal_ideal_image(p)
        .iter()
        .map(|tuple| {
            let mut row = vec![Rational::zero(); ncols];
            for (bi, jet) in tuple.branches().iter().enumerate() {
                for pos in 1..m {
                    row[(pos - 1) * b + bi] = jet.coeff(pos).clone();
                }
            }
            row
        })
        .collect();
    (echelon::row_reduce(rows, ncols), ncols)
}

/// Graded quotient dims of `∏m_{C̃,q} / m_{C,p}` at one truncation,
/// filtered by the minimum valuation over branches.
fn graded_quotient(p: &SingularPointData) -> BTreeMap<u64, usize> {
    let b = p.branch_count();
    let (ech, _) = ideal_echelon(p);
    let mut pivots_at = BTreeMap::<u64, usize>::new();
    for &col in &ech.pivots {
        *pivots_at.entry((col / b + 1) as u64).or_default() += 1;
    }
    (1..p.truncation_order() as u64)
        .filter_map(|nu| {
            let d = b - pivots_at.get(&nu).copied().unwrap_or(0);
            (d > 0).then_some((nu, d))
        })
        .collect()
}

/// `dim ∏m_{C̃,q} / m_{C,p}` computed in the jet space of order `m`, with no
/// stability check.
pub fn quotient_dim_at(p: &SingularPointData, m: usize) -> Result<usize> {
    if m < 2 {
        return Ok(0);
    }
    let q = p.at_order(m)?;
    let (ech, ncols) = ideal_echelon(&q);
    Ok(ncols - ech.rank())
}

/// Quotient dimensions at `m`, `m+1` and `m+2`.
pub fn stability_triple(p: &SingularPointData, m: usize) -> Result<[usize; 3]> {
    Ok([
        quotient_dim_at(p, m)?,
        quotient_dim_at(p, m + 1)?,
        quotient_dim_at(p, m + 2)?,
    ])
}

/// `dim_k m_{C′,p} / m_{C,p}` by row reduction in the jet space of order `m`.
///
/// The same quantity is recomputed at `m+1` and `m+2`; any disagreement is
/// reported as [`Error::UnstableTruncation`]. On a single branch the
/// observed value set must also exhibit its conductor below `m`, since the
/// three-point check alone can pass before the last gap (e.g. `(t³, t⁵)`
/// at `m = 5`).
pub fn unipotent_dim_jets(p: &SingularPointData, m: usize) -> Result<usize> {
    let dims = stability_triple(p, m)?;
    let unstable = dims[0] != dims[1] || dims[1] != dims[2];
    let uncertified = p.branch_count() == 1 && m >= 2 && observed_conductor(p, m)?.is_none();
    if unstable || uncertified {
        return Err(Error::UnstableTruncation {
            label: p.label.clone(),
            truncation: m,
            dims,
        });
    }
    Ok(dims[0])
}

/// Gap count of the value semigroup of a unibranch monomial point.
pub fn unipotent_dim_semigroup(p: &SingularPointData) -> Result<usize> {
    value_semigroup(p)?.gap_count()
}

fn value_semigroup(p: &SingularPointData) -> Result<NumericalSemigroup> {
    let exps = p
        .monomial_exponents()
        .ok_or_else(|| Error::NotMonomialUnibranch(p.label.clone()))?;
    NumericalSemigroup::new(exps)
}

/// Largest usable truncation for the jets path: data order less the two
/// extra orders needed by the stability check.
fn max_truncation(p: &SingularPointData) -> usize {
    if p.is_exact() {
        MAX_AUTO_TRUNCATION
    } else {
        p.truncation_order().saturating_sub(2)
    }
}

/// Conductor read off the observed value set of a unibranch point: the
/// start of the first run of `s` consecutive values, `s` the smallest
/// positive value. `None` if no such run is visible below `m`.
fn observed_conductor(p: &SingularPointData, m: usize) -> Result<Option<usize>> {
    let q = p.at_order(m)?;
    let (ech, _) = ideal_echelon(&q);
    let values: Vec<usize> = ech.pivots.iter().map(|c| c + 1).collect();
    let Some(&s) = values.first() else {
        return Ok(None);
    };
    let mut run = 0;
    for v in 1..m {
        if values.binary_search(&v).is_ok() {
            run += 1;
            if run == s {
                return Ok(Some(v + 1 - s));
            }
        } else {
            run = 0;
        }
    }
    Ok(None)
}

/// Estimate of the conductor used to size the jet space.
///
/// Unibranch monomial points use the semigroup conductor, other unibranch
/// points the observed-value-set certificate, and multibranch points the
/// smallest `M` passing the three-point stability check.
pub fn conductor_estimate(p: &SingularPointData) -> Result<usize> {
    if let Ok(sg) = value_semigroup(p) {
        if sg.is_cofinite() {
            return Ok(sg.conductor()? as usize);
        }
    }
    let limit = max_truncation(p);
    let exhausted = || Error::InsufficientTruncation {
        label: p.label.clone(),
        have: p.truncation_order(),
        need: limit + 3,
    };
    if p.branch_count() == 1 {
        // A visible run stays visible at larger orders, so doubling is safe.
        let mut m = 4.min(limit);
        while m >= 2 {
            if let Some(c) = observed_conductor(p, m)? {
                return Ok(c);
            }
            if m == limit {
                break;
            }
            m = (2 * m).min(limit);
        }
        return Err(exhausted());
    }
    for m in 2..=limit {
        let d = stability_triple(p, m)?;
        if d[0] == d[1] && d[1] == d[2] {
            return Ok(m);
        }
    }
    Err(exhausted())
}

/// Default truncation `2·(conductor estimate) + 2`.
pub fn default_truncation(p: &SingularPointData) -> Result<usize> {
    Ok(2 * conductor_estimate(p)? + 2)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Truncation {
    /// Semigroup fast path where available, else the default truncation.
    #[default]
    Auto,
    /// Jets path at this order for every parametrized point.
    Fixed(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum Method {
    Semigroup,
    Jets { truncation: usize },
}

/// Everything computed for one parametrized point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalInvariants {
    pub label: String,
    pub class: PointClass,
    pub branch_count: usize,
    pub unipotent_dim: usize,
    pub profile: ValuationProfile,
    #[serde(flatten)]
    pub method: Method,
}

fn jets_profile(p: &SingularPointData, m: usize) -> Result<ValuationProfile> {
    let dim = unipotent_dim_jets(p, m)?;
    let orders = graded_quotient(&p.at_order(m)?);
    let profile = ValuationProfile {
        orders,
        extrapolated: p.branch_count() > 1,
    };
    if profile.total() != dim {
        return Err(Error::Internal(format!(
            "{}: graded total {} differs from quotient dim {dim}",
            p.label,
            profile.total()
        )));
    }
    Ok(profile)
}

/// Pole-order profile of the point: the gap set on the fast path, the
/// valuation filtration of the quotient on the jets path.
pub fn valuation_profile(p: &SingularPointData) -> Result<ValuationProfile> {
    Ok(analyze(p, Truncation::Auto)?.profile)
}

pub fn analyze(p: &SingularPointData, truncation: Truncation) -> Result<LocalInvariants> {
    let class = classify_point(p)?;
    let (profile, method) = match truncation {
        Truncation::Auto => match value_semigroup(p) {
            Ok(sg) if sg.is_cofinite() => {
                (ValuationProfile::from_gaps(&sg.gaps()?), Method::Semigroup)
            }
            _ => {
                let m = default_truncation(p)?;
                (jets_profile(p, m)?, Method::Jets { truncation: m })
            }
        },
        Truncation::Fixed(m) => (jets_profile(p, m)?, Method::Jets { truncation: m }),
    };
    Ok(LocalInvariants {
        label: p.label.clone(),
        class,
        branch_count: p.branch_count(),
        unipotent_dim: profile.total(),
        profile,
        method,
    })
}
