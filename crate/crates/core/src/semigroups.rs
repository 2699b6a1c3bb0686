//! Numerical semigroups: submonoids of ℕ given by generators.
//!
//! The value semigroup of a unibranch monomial point `t ↦ (t^a₁, …, t^a_r)`
//! is `⟨a₁, …, a_r⟩`, and its gaps index a basis of `m_{C̃,p}/m_{C,p}`.

use num_integer::Integer;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NumericalSemigroup {
    /// Sorted and deduplicated. Redundant generators are kept.
    generators: Vec<u64>,
}

impl NumericalSemigroup {
    pub fn new(generators: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut generators: Vec<u64> = generators.into_iter().collect();
        if generators.is_empty() {
            return Err(Error::InvalidGenerators("no generators given".into()));
        }
        if generators.contains(&0) {
            return Err(Error::InvalidGenerators("generators must be positive".into()));
        }
        generators.sort_unstable();
        generators.dedup();
        Ok(NumericalSemigroup { generators })
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn multiplicity(&self) -> u64 {
        self.generators[0]
    }

    pub fn gcd(&self) -> u64 {
        self.generators.iter().fold(0, |g, &a| g.gcd(&a))
    }

    pub fn is_cofinite(&self) -> bool {
        self.gcd() == 1
    }

    pub fn is_member(&self, n: u64) -> bool {
        if n == 0 {
            return true;
        }
        if let Ok(c) = self.conductor() {
            if n >= c {
                return true;
            }
        }
        let n = n as usize;
        let mut member = vec![false; n + 1];
        member[0] = true;
        for k in 1..=n {
            member[k] = self
                .generators
                .iter()
                .any(|&g| (g as usize) <= k && member[k - g as usize]);
        }
        member[n]
    }

    /// Membership table `0..=c+m-1` where `[c, c+m)` is the first run of
    /// `m = multiplicity` consecutive members. Such a run forces every
    /// integer `>= c` into the semigroup.
    fn closure(&self) -> Result<(Vec<bool>, usize)> {
        if !self.is_cofinite() {
            return Err(Error::NonCofinite {
                generators: self.generators.clone(),
                gcd: self.gcd(),
            });
        }
        let m = self.multiplicity() as usize;
        let mut member = vec![true];
        let mut run = 1;
        let mut k = 0;
        while run < m {
            k += 1;
            let is = self
                .generators
                .iter()
                .any(|&g| (g as usize) <= k && member[k - g as usize]);
            member.push(is);
            run = if is { run + 1 } else { 0 };
        }
        let start = k + 1 - m;
        Ok((member, start))
    }

    /// Positive integers outside the semigroup, ascending.
    pub fn gaps(&self) -> Result<Vec<u64>> {
        let (member, start) = self.closure()?;
        Ok((1..start)
            .filter(|&k| !member[k])
            .map(|k| k as u64)
            .collect())
    }

    pub fn gap_count(&self) -> Result<usize> {
        self.gaps().map(|g| g.len())
    }

    /// Smallest `c` with `[c, ∞)` inside the semigroup.
    pub fn conductor(&self) -> Result<u64> {
        Ok(self.gaps()?.last().map_or(0, |&g| g + 1))
    }
}

/// Gap list of `⟨generators⟩`.
pub fn gaps(generators: &[u64]) -> Result<Vec<u64>> {
    NumericalSemigroup::new(generators.iter().copied())?.gaps()
}

pub fn conductor(generators: &[u64]) -> Result<u64> {
    NumericalSemigroup::new(generators.iter().copied())?.conductor()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(g: &[u64]) -> NumericalSemigroup {
        NumericalSemigroup::new(g.iter().copied()).unwrap()
    }

    /// Independent membership test: enumerate all ℕ-combinations up to `bound`.
    fn brute_gaps(g: &[u64], bound: u64) -> Vec<u64> {
        let mut reach = vec![false; bound as usize + 1];
        reach[0] = true;
        for n in 0..=bound as usize {
            if reach[n] {
                for &a in g {
                    if n + a as usize <= bound as usize {
                        reach[n + a as usize] = true;
                    }
                }
            }
        }
        (1..=bound).filter(|&n| !reach[n as usize]).collect()
    }

    #[test]
    fn cusp_family_examples() {
        assert_eq!(s(&[2, 7]).gaps().unwrap(), vec![1, 3, 5]);
        assert_eq!(s(&[3, 5]).gaps().unwrap(), vec![1, 2, 4, 7]);
        assert_eq!(s(&[1]).gaps().unwrap(), Vec::<u64>::new());
        assert_eq!(s(&[3, 4]).gaps().unwrap(), brute_gaps(&[3, 4], 12));
        assert_eq!(s(&[3, 4]).gaps().unwrap(), vec![1, 2, 5]);
    }

    #[test]
    fn conductors() {
        assert_eq!(s(&[2, 7]).conductor().unwrap(), 6);
        assert_eq!(s(&[1]).conductor().unwrap(), 0);
        assert_eq!(s(&[3, 5]).conductor().unwrap(), 8);
        assert_eq!(s(&[4, 5, 6]).conductor().unwrap(), 8);
    }

    #[test]
    fn membership() {
        let g = s(&[2, 7]);
        assert!(!g.is_member(5));
        assert!(g.is_member(9));
        assert!(g.is_member(0));
        assert!(s(&[4, 6]).is_member(0));
        assert!(s(&[4, 6]).is_member(10));
        assert!(!s(&[4, 6]).is_member(11));
    }

    #[test]
    fn non_cofinite_is_rejected() {
        assert!(matches!(
            s(&[4, 6]).gaps(),
            Err(Error::NonCofinite { gcd: 2, .. })
        ));
        assert!(s(&[4, 6]).conductor().is_err());
    }

    #[test]
    fn invalid_generators() {
        assert!(NumericalSemigroup::new([]).is_err());
        assert!(NumericalSemigroup::new([0, 3]).is_err());
    }

    #[test]
    fn duplicates_and_redundant_generators() {
        let a = s(&[3, 3, 5, 6, 5]);
        assert_eq!(a.generators(), &[3, 5, 6]);
        assert_eq!(a.gaps().unwrap(), s(&[3, 5]).gaps().unwrap());
    }

    #[test]
    fn closure_matches_brute_force() {
        for g in [&[5, 7, 9][..], &[6, 10, 15], &[7, 8, 9, 10], &[11, 12]] {
            let c = g.iter().product::<u64>();
            assert_eq!(s(g).gaps().unwrap(), brute_gaps(g, c), "{g:?}");
        }
    }
}
