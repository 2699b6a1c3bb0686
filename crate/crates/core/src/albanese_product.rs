//! Albanese invariants of `X = Γ_α × Γ_β` and the Gysin map `Alb(C_N) → Alb(X)`.
//!
//! The Lie algebra of `Div⁰_{X̃/X}` has the tensor basis
//! `((Θ_A ∪ {1}) × (Θ_B ∪ {1})) \ {(1,1)}` built from the curve bases
//! `Θ_A`, `Θ_B`; its graded pieces along the rulings through the cusps have
//! dimension `dim Alb(Γ_other) + 1`. Comparing these with the intersection
//! numbers of a curve `C_N ∈ |L^N|`, `L = O(D^{2α+1,2β+1})`, gives the
//! sufficient threshold for surjectivity; comparing total dimensions gives
//! the necessary one.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::local_singularity::ValuationProfile;
use crate::picard::{build_gamma_alpha, picard_report, CurveModel};
use crate::local_singularity::Truncation;
use crate::rational::{self, Rational};

/// `t_q^{−ν}` at point `q`; `slot` separates copies when a graded piece has
/// dimension above one.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PoleSymbol {
    pub point: String,
    pub order: u64,
    pub slot: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ThetaSymbol {
    Pole(PoleSymbol),
    /// `a ⊗ b`; `None` stands for the unit. Never `(None, None)`.
    Tensor(Option<Box<ThetaSymbol>>, Option<Box<ThetaSymbol>>),
}

impl fmt::Display for ThetaSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThetaSymbol::Pole(p) if p.slot == 0 => write!(f, "t_{}^-{}", p.point, p.order),
            ThetaSymbol::Pole(p) => write!(f, "t_{}^-{}#{}", p.point, p.order, p.slot),
            ThetaSymbol::Tensor(a, b) => {
                let show = |x: &Option<Box<ThetaSymbol>>| x.as_ref().map_or("1".to_string(), |s| s.to_string());
                write!(f, "({} ⊗ {})", show(a), show(b))
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ThetaBasis {
    symbols: Vec<ThetaSymbol>,
}

impl ThetaBasis {
    pub fn new(symbols: Vec<ThetaSymbol>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for s in &symbols {
            if matches!(s, ThetaSymbol::Tensor(None, None)) {
                return Err(Error::Internal("unit ⊗ unit in a Θ basis".into()));
            }
            if !seen.insert(s) {
                return Err(Error::Internal(format!("duplicate Θ symbol {s}")));
            }
        }
        Ok(ThetaBasis { symbols })
    }

    /// One symbol per pole order and graded dimension of each profile.
    pub fn from_profiles<'a>(profiles: impl IntoIterator<Item = (&'a str, &'a ValuationProfile)>) -> Result<Self> {
        let mut symbols = Vec::new();
        for (point, profile) in profiles {
            for (&order, &dim) in &profile.orders {
                for slot in 0..dim {
                    symbols.push(ThetaSymbol::Pole(PoleSymbol {
                        point: point.to_string(),
                        order,
                        slot,
                    }));
                }
            }
        }
        Self::new(symbols)
    }

    /// Basis of `Lie(Div⁰_{C̃/C})` for a curve model.
    pub fn for_curve(model: &CurveModel) -> Result<Self> {
        let report = picard_report(model, Truncation::Auto)?;
        let mut profiles = Vec::new();
        for p in &report.points {
            match &p.profile {
                Some(profile) => profiles.push((p.label.as_str(), profile)),
                None if p.unipotent == 0 => {}
                None => {
                    return Err(Error::InvalidModel(format!(
                        "point {:?} declares a unipotent dimension without a profile",
                        p.label
                    )))
                }
            }
        }
        Self::from_profiles(profiles)
    }

    pub fn gamma_alpha(alpha: usize) -> Result<Self> {
        Self::for_curve(&build_gamma_alpha(alpha, 4)?)
    }

    pub fn symbols(&self) -> &[ThetaSymbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// `((A ∪ {1}) × (B ∪ {1})) \ {(1,1)}`.
pub fn product_theta(a: &ThetaBasis, b: &ThetaBasis) -> ThetaBasis {
    let with_unit = |basis: &ThetaBasis| {
        std::iter::once(None)
            .chain(basis.symbols.iter().map(|s| Some(Box::new(s.clone()))))
            .collect::<Vec<_>>()
    };
    let (left, right) = (with_unit(a), with_unit(b));
    let symbols = left
        .iter()
        .flat_map(|x| right.iter().map(move |y| (x.clone(), y.clone())))
        .filter(|(x, y)| x.is_some() || y.is_some())
        .map(|(x, y)| ThetaSymbol::Tensor(x, y))
        .collect();
    ThetaBasis { symbols }
}

pub fn product_albanese_dim(a: u64, b: u64) -> u64 {
    (a + 1) * (b + 1) - 1
}

/// Graded dimensions along the ruling `Γ̃_A × {q}`: each pole order of the
/// second factor's profile at `q` carries `(a + 1)` times its own dimension.
pub fn ruling_graded_dims(a: u64, profile_b: &ValuationProfile) -> BTreeMap<u64, u64> {
    profile_b
        .orders
        .iter()
        .map(|(&nu, &d)| (nu, (a + 1) * d as u64))
        .collect()
}

/// `Γ_α` dimension `α(2α − 1)`.
pub fn gamma_dim(alpha: u64) -> u64 {
    alpha * (2 * alpha - 1)
}

/// Ruling names on `Γ_α × Γ_β`.
pub fn horizontal_ruling(q: &str) -> String {
    format!("A×{{{q}}}")
}

pub fn vertical_ruling(p: &str) -> String {
    format!("{{{p}}}×B")
}

fn gamma_profiles(alpha: usize) -> Result<Vec<(String, ValuationProfile)>> {
    let report = picard_report(&build_gamma_alpha(alpha, 4)?, Truncation::Auto)?;
    report
        .points
        .into_iter()
        .map(|p| {
            let profile = p
                .profile
                .ok_or_else(|| Error::Internal("Γ_α point without a profile".into()))?;
            Ok((p.label, profile))
        })
        .collect()
}

/// Graded dimensions of `Lie(Div⁰_{X̃/X})` on every ruling through a cusp of
/// `X = Γ_α × Γ_β`, keyed by ruling name.
pub fn surface_ruling_profiles(alpha: usize, beta: usize) -> Result<BTreeMap<String, BTreeMap<u64, u64>>> {
    let a = gamma_dim(alpha as u64);
    let b = gamma_dim(beta as u64);
    let mut out = BTreeMap::new();
    for (q, profile) in gamma_profiles(beta)? {
        out.insert(horizontal_ruling(&q), ruling_graded_dims(a, &profile));
    }
    for (p, profile) in gamma_profiles(alpha)? {
        out.insert(vertical_ruling(&p), ruling_graded_dims(b, &profile));
    }
    Ok(out)
}

/// Attributes every element of `Θ_{Γα×Γβ}` to one ruling and pole order:
/// `θ ⊗ t_q^{−ν}` (with `θ` possibly the unit) goes to `Γ̃α × {q}` at `ν`,
/// and the pure first-factor elements `t_p^{−ν} ⊗ 1` go to `{p} × Γ̃β` at `ν`.
pub fn theta_ruling_tally(alpha: usize, beta: usize) -> Result<BTreeMap<String, BTreeMap<u64, u64>>> {
    let basis = product_theta(&ThetaBasis::gamma_alpha(alpha)?, &ThetaBasis::gamma_alpha(beta)?);
    let mut tally: BTreeMap<String, BTreeMap<u64, u64>> = BTreeMap::new();
    for s in basis.symbols() {
        let (ruling, order) = match s {
            ThetaSymbol::Tensor(_, Some(b)) => match b.as_ref() {
                ThetaSymbol::Pole(q) => (horizontal_ruling(&q.point), q.order),
                _ => return Err(Error::Internal("nested tensor in a curve basis".into())),
            },
            ThetaSymbol::Tensor(Some(a), None) => match a.as_ref() {
                ThetaSymbol::Pole(p) => (vertical_ruling(&p.point), p.order),
                _ => return Err(Error::Internal("nested tensor in a curve basis".into())),
            },
            _ => return Err(Error::Internal(format!("unexpected symbol {s}"))),
        };
        *tally.entry(ruling).or_default().entry(order).or_default() += 1;
    }
    Ok(tally)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub ruling: String,
    pub order: u64,
    pub dim: u64,
    pub count: u64,
}

/// Outcome of the restriction-injectivity inequality check. `Satisfied`
/// certifies the numeric sufficient condition only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum CriterionOutcome {
    Satisfied,
    Violated(Violation),
}

impl CriterionOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, CriterionOutcome::Satisfied)
    }
}

/// Checks `counts[η] ≥ dims[η][ν]` for every ruling `η` and order `ν`,
/// scanning rulings and orders in ascending order.
pub fn check_injectivity_criterion(
    profiles: &BTreeMap<String, BTreeMap<u64, u64>>,
    counts: &BTreeMap<String, u64>,
) -> Result<CriterionOutcome> {
    if let Some(missing) = profiles.keys().find(|k| !counts.contains_key(*k)) {
        return Err(Error::MissingCount(missing.clone()));
    }
    for (ruling, dims) in profiles {
        let count = counts[ruling];
        for (&order, &dim) in dims {
            if count < dim {
                return Ok(CriterionOutcome::Violated(Violation {
                    ruling: ruling.clone(),
                    order,
                    dim,
                    count,
                }));
            }
        }
    }
    Ok(CriterionOutcome::Satisfied)
}

/// `#(C̃_N ∩ ruling) = N · 2(α + β + 1)` for `C_N ∈ |O(D^{2α+1,2β+1})^N|`.
pub fn ruling_intersection_count(alpha: u64, beta: u64, n: u64) -> u64 {
    n * 2 * (alpha + beta + 1)
}

/// `dim V_{C_N} = N(α(2α−1)(2β+1) + β(2β−1)(2α+1))`.
pub fn curve_vectorial_dim(alpha: u64, beta: u64, n: u64) -> u64 {
    n * (gamma_dim(alpha) * (2 * beta + 1) + gamma_dim(beta) * (2 * alpha + 1))
}

/// Gysin criterion for `C_N` on `Γ_α × Γ_β` with the standard counts.
pub fn gysin_criterion(alpha: usize, beta: usize, n: u64) -> Result<CriterionOutcome> {
    let profiles = surface_ruling_profiles(alpha, beta)?;
    let count = ruling_intersection_count(alpha as u64, beta as u64, n);
    let counts = profiles.keys().map(|k| (k.clone(), count)).collect();
    check_injectivity_criterion(&profiles, &counts)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GysinReport {
    pub alpha: u64,
    pub beta: u64,
    /// Surjectivity fails for `N < n_low`.
    pub n_low: Rational,
    /// Surjectivity holds for `N ≥ n_suff`.
    pub n_suff: Rational,
    pub n0: u64,
    pub n1: u64,
    pub exact: bool,
    /// Surjectivity guaranteed for `N > esv_bound`; only for `α = β`.
    pub esv_bound: Option<Rational>,
}

fn to_u64(r: num_bigint::BigInt) -> u64 {
    u64::try_from(r).expect("threshold fits in u64")
}

pub fn n_low(alpha: u64, beta: u64) -> Rational {
    let (a, b) = (gamma_dim(alpha), gamma_dim(beta));
    let num = (a + 1) * (b + 1) - 1;
    let den = a * (2 * beta + 1) + b * (2 * alpha + 1);
    rational::ratio(num as i64, den as i64)
}

pub fn n_suff(alpha: u64, beta: u64) -> Rational {
    let den = (2 * (alpha + beta + 1)) as i64;
    let a = rational::ratio(gamma_dim(alpha) as i64 + 1, den);
    let b = rational::ratio(gamma_dim(beta) as i64 + 1, den);
    a.max(b)
}

pub fn esv_bound(alpha: u64) -> Rational {
    let a = gamma_dim(alpha) as i64;
    rational::ratio(2 * (3 * a - 1), 2 * alpha as i64 + 1) + rational::int(1)
}

/// # Panics
/// If `alpha` or `beta` is zero.
pub fn gysin_thresholds(alpha: u64, beta: u64) -> GysinReport {
    assert!(alpha >= 1 && beta >= 1, "α, β must be positive");
    let n_low = n_low(alpha, beta);
    let n_suff = n_suff(alpha, beta);
    // Exclusion is strict (N < n_low), sufficiency non-strict (N ≥ n_suff):
    // both integer thresholds are plain ceilings.
    let n0 = to_u64(rational::ceil_int(&n_low));
    let n1 = to_u64(rational::ceil_int(&n_suff));
    GysinReport {
        alpha,
        beta,
        n_low,
        n_suff,
        n0,
        n1,
        exact: alpha == beta,
        esv_bound: (alpha == beta).then(|| esv_bound(alpha)),
    }
}

/// Checks that for `α = β` the necessary and sufficient integer thresholds
/// coincide, together with the two facts that force it.
pub fn verify_alpha_beta_coincidence(alpha: u64) -> bool {
    let r = gysin_thresholds(alpha, alpha);
    let modulus = 2 * (2 * alpha + 1);
    let not_divisible = !(gamma_dim(alpha) + 1).is_multiple_of(modulus);
    let gap = &r.n_low - &r.n_suff;
    let expected_gap = rational::ratio(1, modulus as i64);
    r.n0 == r.n1 && not_divisible && gap == expected_gap && gap < rational::int(1)
}

/// Smallest integer `N` that the ESV estimate covers.
pub fn esv_first_integer(alpha: u64) -> u64 {
    to_u64(rational::next_int_above(&esv_bound(alpha)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GysinJson {
    pub alpha: u64,
    pub beta: u64,
    #[serde(rename = "N_low")]
    pub n_low: String,
    #[serde(rename = "N_suff")]
    pub n_suff: String,
    #[serde(rename = "N0")]
    pub n0: u64,
    #[serde(rename = "N1")]
    pub n1: u64,
    pub exact: bool,
    pub esv_bound: Option<String>,
}

impl From<&GysinReport> for GysinJson {
    fn from(r: &GysinReport) -> Self {
        GysinJson {
            alpha: r.alpha,
            beta: r.beta,
            n_low: rational::format(&r.n_low),
            n_suff: rational::format(&r.n_suff),
            n0: r.n0,
            n1: r.n1,
            exact: r.exact,
            esv_bound: r.esv_bound.as_ref().map(rational::format),
        }
    }
}

impl TryFrom<&GysinJson> for GysinReport {
    type Error = Error;
    fn try_from(j: &GysinJson) -> Result<Self> {
        Ok(GysinReport {
            alpha: j.alpha,
            beta: j.beta,
            n_low: rational::parse(&j.n_low)?,
            n_suff: rational::parse(&j.n_suff)?,
            n0: j.n0,
            n1: j.n1,
            exact: j.exact,
            esv_bound: j.esv_bound.as_deref().map(rational::parse).transpose()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn basis(n: usize, point: &str) -> ThetaBasis {
        ThetaBasis::new(
            (1..=n as u64)
                .map(|order| {
                    ThetaSymbol::Pole(PoleSymbol {
                        point: point.into(),
                        order,
                        slot: 0,
                    })
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn product_theta_cardinalities() {
        assert_eq!(product_theta(&basis(1, "a"), &basis(1, "b")).len(), 3);
        assert_eq!(product_theta(&basis(6, "a"), &basis(1, "b")).len(), 13);
        let b = basis(4, "b");
        let p = product_theta(&ThetaBasis::default(), &b);
        assert_eq!(p.len(), 4);
        assert!(p
            .symbols()
            .iter()
            .all(|s| matches!(s, ThetaSymbol::Tensor(None, Some(_)))));
    }

    #[test]
    fn theta_rejects_duplicates_and_unit_pair() {
        let s = ThetaSymbol::Pole(PoleSymbol { point: "q".into(), order: 1, slot: 0 });
        assert!(ThetaBasis::new(vec![s.clone(), s]).is_err());
        assert!(ThetaBasis::new(vec![ThetaSymbol::Tensor(None, None)]).is_err());
    }

    #[test]
    fn gamma_basis_size() {
        for alpha in 1..=4 {
            assert_eq!(ThetaBasis::gamma_alpha(alpha).unwrap().len() as u64, gamma_dim(alpha as u64));
        }
    }

    #[test]
    fn product_dim_examples() {
        assert_eq!(product_albanese_dim(1, 1), 3);
        assert_eq!(product_albanese_dim(0, 7), 7);
        assert_eq!(product_albanese_dim(6, 6), 48);
    }

    #[test]
    fn ruling_dims_examples() {
        let p = ValuationProfile::from_gaps(&[1]);
        assert_eq!(ruling_graded_dims(1, &p), BTreeMap::from([(1, 2)]));
        let p = ValuationProfile::from_gaps(&[1, 3, 5]);
        assert!(ruling_graded_dims(0, &p).values().all(|&d| d == 1));
        let p = ValuationProfile::from_gaps(&[1, 2, 4, 7]);
        assert_eq!(
            ruling_graded_dims(6, &p),
            BTreeMap::from([(1, 7), (2, 7), (4, 7), (7, 7)])
        );
    }

    #[test]
    fn criterion_examples() {
        let profiles = BTreeMap::from([("eta".to_string(), BTreeMap::from([(1, 2)]))]);
        let ok = BTreeMap::from([("eta".to_string(), 2)]);
        assert!(check_injectivity_criterion(&profiles, &ok).unwrap().holds());
        let short = BTreeMap::from([("eta".to_string(), 1)]);
        assert_eq!(
            check_injectivity_criterion(&profiles, &short).unwrap(),
            CriterionOutcome::Violated(Violation {
                ruling: "eta".into(),
                order: 1,
                dim: 2,
                count: 1
            })
        );
        assert_eq!(
            check_injectivity_criterion(&profiles, &BTreeMap::new()),
            Err(Error::MissingCount("eta".into()))
        );
        assert!(gysin_criterion(1, 1, 1).unwrap().holds());
        assert_eq!(ruling_intersection_count(1, 1, 1), 6);
    }

    #[test]
    fn threshold_examples() {
        let r = gysin_thresholds(1, 1);
        assert_eq!((r.n_low.clone(), r.n_suff.clone()), (ratio(1, 2), ratio(1, 3)));
        assert_eq!((r.n0, r.n1, r.exact), (1, 1, true));
        assert_eq!(r.esv_bound, Some(ratio(7, 3)));
        assert_eq!(esv_first_integer(1), 3);

        let r = gysin_thresholds(3, 3);
        assert_eq!((r.n_low.clone(), r.n_suff.clone()), (ratio(17, 14), ratio(16, 14)));
        assert_eq!((r.n0, r.n1), (2, 2));

        let r = gysin_thresholds(1, 2);
        assert_eq!((r.n_suff.clone(), r.n1), (ratio(7, 8), 1));
        assert_eq!((r.n_low.clone(), r.n0), (ratio(13, 23), 1));
        assert!(!r.exact);
        assert_eq!(r.esv_bound, None);
    }

    #[test]
    fn simplified_diagonal_formula() {
        for alpha in 1..=12u64 {
            let a = gamma_dim(alpha) as i64;
            assert_eq!(n_low(alpha, alpha), ratio(a + 2, 2 * (2 * alpha as i64 + 1)));
        }
    }

    #[test]
    fn coincidence_examples() {
        assert!(verify_alpha_beta_coincidence(1));
        assert!(verify_alpha_beta_coincidence(4));
        assert_eq!(gysin_thresholds(4, 4).n0, 2);
        assert!(verify_alpha_beta_coincidence(10));
    }

    #[test]
    fn json_round_trip() {
        let r = gysin_thresholds(2, 3);
        let j = GysinJson::from(&r);
        let text = serde_json::to_string(&j).unwrap();
        let back: GysinJson = serde_json::from_str(&text).unwrap();
        assert_eq!(GysinReport::try_from(&back).unwrap(), r);
    }
}
