//! Truncated power series `k[[t]]/(t^M)` over ℚ and tuples of them.
//!
//! A [`Jet`] stores exactly `M` coefficients; everything at order `M` and
//! beyond is unknown. Binary operations truncate to the smaller order, so a
//! valuation read off a result is always a lower bound for the true one.

pub mod echelon;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Jet {
    coeffs: Vec<Rational>,
}

impl Jet {
    /// Builds a jet of order `order` from leading coefficients; missing
    /// entries are zero and entries past `order` are dropped.
    ///
    /// # Panics
    /// If `order == 0`.
    pub fn new(mut coeffs: Vec<Rational>, order: usize) -> Self {
        assert!(order >= 1, "truncation order must be positive");
        coeffs.resize(order, Rational::zero());
        Jet { coeffs }
    }

    pub fn from_ints(coeffs: &[i64], order: usize) -> Self {
        Self::new(coeffs.iter().map(|&c| crate::rational::int(c)).collect(), order)
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(Rational::one(), 0, order)
    }

    /// `c·t^power`, which is the zero jet when `power >= order`.
    pub fn monomial(c: Rational, power: usize, order: usize) -> Self {
        let mut jet = Self::zero(order);
        if power < order {
            jet.coeffs[power] = c;
        }
        jet
    }

    /// `t^power`.
    pub fn t_pow(power: usize, order: usize) -> Self {
        Self::monomial(Rational::one(), power, order)
    }

    pub fn truncation_order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient, `None` for the zero jet
    /// (whose true valuation is only known to be `>= M`).
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Drops coefficients of order `>= order`.
    ///
    /// # Panics
    /// If `order` is zero or exceeds the current truncation order.
    pub fn truncate(&self, order: usize) -> Self {
        assert!(order >= 1 && order <= self.truncation_order());
        Jet {
            coeffs: self.coeffs[..order].to_vec(),
        }
    }

    /// Treats the stored coefficients as a polynomial and re-truncates at an
    /// arbitrary order (padding with zeros when growing).
    pub fn as_polynomial_at(&self, order: usize) -> Self {
        Self::new(self.coeffs.clone(), order)
    }

    /// Number of nonzero stored coefficients.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Jet {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    fn zip_with(&self, rhs: &Jet, f: impl Fn(&Rational, &Rational) -> Rational) -> Jet {
        let m = self.truncation_order().min(rhs.truncation_order());
        Jet {
            coeffs: (0..m).map(|i| f(&self.coeffs[i], &rhs.coeffs[i])).collect(),
        }
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})t")?,
                _ => write!(f, "({c})t^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.truncation_order())
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        jet_mul(self, rhs)
    }
}

/// Truncated Cauchy product; the result has order `min(M_a, M_b)`.
pub fn jet_mul(a: &Jet, b: &Jet) -> Jet {
    let m = a.truncation_order().min(b.truncation_order());
    let mut out = vec![Rational::zero(); m];
    for (i, x) in a.coeffs[..m].iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs[..m - i].iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    Jet { coeffs: out }
}

/// One jet per formal branch through a point, all of the same order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BranchJetTuple {
    branches: Vec<Jet>,
}

impl BranchJetTuple {
    pub fn new(branches: Vec<Jet>) -> Result<Self> {
        let Some(first) = branches.first() else {
            return Err(Error::MixedShapes("a branch tuple needs at least one branch".into()));
        };
        let order = first.truncation_order();
        if branches.iter().any(|b| b.truncation_order() != order) {
            return Err(Error::MixedShapes(
                "branch jets have different truncation orders".into(),
            ));
        }
        Ok(BranchJetTuple { branches })
    }

    pub fn branches(&self) -> &[Jet] {
        &self.branches
    }

    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn truncation_order(&self) -> usize {
        self.branches[0].truncation_order()
    }

    pub fn is_zero(&self) -> bool {
        self.branches.iter().all(Jet::is_zero)
    }

    /// Componentwise product.
    ///
    /// # Panics
    /// If the branch counts differ.
    pub fn mul(&self, rhs: &BranchJetTuple) -> BranchJetTuple {
        assert_eq!(self.branch_count(), rhs.branch_count());
        BranchJetTuple {
            branches: self
                .branches
                .iter()
                .zip(&rhs.branches)
                .map(|(a, b)| jet_mul(a, b))
                .collect(),
        }
    }

    /// Concatenated coefficient vector of length `branch_count · M`.
    pub fn flatten(&self) -> Vec<Rational> {
        self.branches
            .iter()
            .flat_map(|b| b.coeffs.iter().cloned())
            .collect()
    }
}

/// Rank over ℚ of the flattened coefficient vectors.
pub fn span_dimension(vectors: &[BranchJetTuple]) -> Result<usize> {
    let Some(first) = vectors.first() else {
        return Ok(0);
    };
    let (r, m) = (first.branch_count(), first.truncation_order());
    if vectors
        .iter()
        .any(|v| v.branch_count() != r || v.truncation_order() != m)
    {
        return Err(Error::MixedShapes(format!(
            "expected {r} branches of order {m} in every tuple"
        )));
    }
    let rows = vectors.iter().map(BranchJetTuple::flatten).collect();
    Ok(echelon::rank(rows, r * m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn difference_of_squares() {
        let a = Jet::from_ints(&[1, 1], 4);
        let b = Jet::from_ints(&[1, -1], 4);
        assert_eq!(jet_mul(&a, &b), Jet::from_ints(&[1, 0, -1], 4));
    }

    #[test]
    fn monomial_products_and_truncation() {
        assert_eq!(&Jet::t_pow(2, 6) * &Jet::t_pow(3, 6), Jet::t_pow(5, 6));
        assert_eq!(&Jet::t_pow(2, 4) * &Jet::t_pow(3, 4), Jet::zero(4));
    }

    #[test]
    fn mixed_orders_truncate_to_minimum() {
        let p = &Jet::from_ints(&[1, 1, 1, 1, 1], 5) * &Jet::from_ints(&[1, 1], 3);
        assert_eq!(p.truncation_order(), 3);
        assert_eq!(p, Jet::from_ints(&[1, 2, 2], 3));
        assert_eq!((&Jet::one(2) + &Jet::one(7)).truncation_order(), 2);
    }

    #[test]
    fn valuations() {
        assert_eq!(Jet::from_ints(&[0, 0, 0, 1, 2], 6).valuation(), Some(3));
        assert_eq!(Jet::zero(6).valuation(), None);
        assert_eq!(Jet::from_ints(&[7], 3).valuation(), Some(0));
    }

    fn tuple(jets: Vec<Jet>) -> BranchJetTuple {
        BranchJetTuple::new(jets).unwrap()
    }

    #[test]
    fn span_dimension_examples() {
        assert_eq!(span_dimension(&[]).unwrap(), 0);

        let t = Jet::t_pow(1, 3);
        let z = Jet::zero(3);
        let vs = [
            tuple(vec![t.clone(), z.clone()]),
            tuple(vec![z, t.clone()]),
            tuple(vec![t.clone(), t]),
        ];
        assert_eq!(span_dimension(&vs).unwrap(), 2);

        let vs: Vec<_> = [2, 3, 5]
            .iter()
            .map(|&k| tuple(vec![Jet::t_pow(k, 6)]))
            .collect();
        assert_eq!(span_dimension(&vs).unwrap(), 3);
    }

    #[test]
    fn span_dimension_rejects_mixed_shapes() {
        let a = tuple(vec![Jet::t_pow(1, 3)]);
        let b = tuple(vec![Jet::t_pow(1, 4)]);
        let c = tuple(vec![Jet::t_pow(1, 3), Jet::zero(3)]);
        assert!(matches!(span_dimension(&[a.clone(), b]), Err(Error::MixedShapes(_))));
        assert!(matches!(span_dimension(&[a, c]), Err(Error::MixedShapes(_))));
    }

    #[test]
    fn tuple_requires_uniform_order() {
        assert!(BranchJetTuple::new(vec![]).is_err());
        assert!(BranchJetTuple::new(vec![Jet::zero(2), Jet::zero(3)]).is_err());
    }

    #[test]
    fn display() {
        let j = Jet::new(vec![int(0), int(2), int(0), int(-1)], 5);
        assert_eq!(j.to_string(), "(2)t + (-1)t^3 + O(t^5)");
    }
}
