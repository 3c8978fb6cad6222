use std::collections::BTreeSet;

use num_bigint::BigUint;
use serde::Serialize;

use crate::analyzer::{law, Analyzer, CellPairPmf};
use crate::error::{Error, Result};
use crate::numeric::{is_prime, Rational};
use crate::samplers::SchemeSpec;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CopulaCheck {
    pub equal: bool,
    pub max_discrepancy: Rational,
    /// Cell pair `(z_1, z_2)` attaining the maximum, when positive.
    pub witness: Option<(Vec<u64>, Vec<u64>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndependenceCheck {
    /// All coordinate pairs `(p_1^(i), p_2^(i))` share one law.
    pub identically_distributed: bool,
    /// The joint law factorizes over every subset of coordinates.
    pub independent: bool,
    pub witness: Option<String>,
}

impl IndependenceCheck {
    pub fn holds(&self) -> bool {
        self.identically_distributed && self.independent
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TripleCounts {
    pub lattice: u64,
    pub lhs: u64,
}

impl Analyzer {
    /// Compares the discrete RSJ cell-pair pmf with the LHS cell-pair pmf.
    pub fn copula_equality_check(&self, n: u64, dim: usize) -> Result<CopulaCheck> {
        self.copula_equality_for(&SchemeSpec::rsj(n, dim))
    }

    /// As [`Analyzer::copula_equality_check`] for an arbitrary lattice spec.
    pub fn copula_equality_for(&self, spec: &SchemeSpec) -> Result<CopulaCheck> {
        let spec = spec.validated()?;
        let lattice = law::enumerate_discrete(&spec, self.budget())?;
        let latin = law::enumerate_discrete(&SchemeSpec::lhs(spec.n, spec.dim), self.budget())?;
        let mut best: Option<(Rational, usize)> = None;
        for idx in 0..lattice.len() {
            // |a/A - b/B| with a common denominator A B
            let a = lattice.count_at(idx) as u128 * latin.total() as u128;
            let b = latin.count_at(idx) as u128 * lattice.total() as u128;
            if a != b {
                let diff = Rational::new(a.abs_diff(b), lattice.total() as u128 * latin.total() as u128);
                if best.as_ref().is_none_or(|(d, _)| diff > *d) {
                    best = Some((diff, idx));
                }
            }
        }
        Ok(match best {
            None => CopulaCheck {
                equal: true,
                max_discrepancy: Rational::zero(),
                witness: None,
            },
            Some((d, idx)) => CopulaCheck {
                equal: false,
                max_discrepancy: d,
                witness: Some(lattice.cells(idx)),
            },
        })
    }

    /// Checks that the coordinate pairs of the full RSJ discrete model are
    /// independent and identically distributed.
    pub fn coordinate_independence_check(&self, n: u64, dim: usize) -> Result<IndependenceCheck> {
        self.coordinate_independence_for(&SchemeSpec::rsj(n, dim))
    }

    pub fn coordinate_independence_for(&self, spec: &SchemeSpec) -> Result<IndependenceCheck> {
        let pmf = law::enumerate_discrete(spec, self.budget())?;
        let d = pmf.dim();
        self.budget().check((1u128 << d) * pmf.len() as u128)?;
        Ok(independence(&pmf))
    }

    /// Counts the `N`-point discrete configurations containing both cell
    /// vectors `a` and `b`: shifted rank-1 lattices versus Latin grids.
    pub fn triple_distinguisher(&self, n: u64, dim: usize, a: &[u64], b: &[u64]) -> Result<TripleCounts> {
        if !is_prime(n) {
            return Err(Error::InvalidArgument(format!("N must be prime (got {n})")));
        }
        if dim == 0 || a.len() != dim || b.len() != dim {
            return Err(Error::InvalidArgument(format!("cells must have {dim} coordinates")));
        }
        if let Some(c) = a.iter().chain(b).find(|&&c| c >= n) {
            return Err(Error::InvalidArgument(format!("cell index {c} outside 0..{n}")));
        }
        if let Some(i) = (0..dim).find(|&i| a[i] == b[i]) {
            return Err(Error::InvalidArgument(format!(
                "a and b share cell {} in coordinate {i}; they must differ in every coordinate",
                a[i]
            )));
        }
        Ok(TripleCounts {
            lattice: self.lattice_configurations(n, dim, a, b)?,
            lhs: self.latin_configurations(n, dim, a, b)?,
        })
    }

    fn lattice_configurations(&self, n: u64, dim: usize, a: &[u64], b: &[u64]) -> Result<u64> {
        let gens = (n as u128 - 1).pow(dim as u32);
        let shifts = (n as u128).pow(dim as u32);
        self.budget().check(gens * shifts * n as u128 * dim as u128)?;
        let code = |cells: &[u64]| cells.iter().rev().fold(0u64, |acc, &c| acc * n + c);
        let (ca, cb) = (code(a), code(b));
        let mut sets: BTreeSet<Vec<u64>> = BTreeSet::new();
        let mut g = vec![1u64; dim];
        loop {
            let mut s = vec![0u64; dim];
            loop {
                let mut points: Vec<u64> = (0..n)
                    .map(|k| {
                        let cells: Vec<u64> = (0..dim).map(|i| (k * g[i] + s[i]) % n).collect();
                        code(&cells)
                    })
                    .collect();
                points.sort_unstable();
                if points.binary_search(&ca).is_ok() && points.binary_search(&cb).is_ok() {
                    sets.insert(points);
                }
                if !advance(&mut s, 0, n) {
                    break;
                }
            }
            if !advance(&mut g, 1, n) {
                break;
            }
        }
        Ok(sets.len() as u64)
    }

    fn latin_configurations(&self, n: u64, dim: usize, a: &[u64], b: &[u64]) -> Result<u64> {
        let fact: u128 = (1..=n as u128).product();
        let tuples = fact.checked_pow(dim as u32 - 1).unwrap_or(u128::MAX);
        self.budget()
            .check(fact * n as u128 + tuples.saturating_mul(n as u128 * dim as u128))?;
        let perms = all_permutations(n as usize);
        // A Latin grid is {(k, s_2(k), .., s_d(k))}; distinct permutation
        // tuples give distinct sets.
        let mut choice = vec![0usize; dim - 1];
        let mut count = 0u64;
        loop {
            let contains = |cells: &[u64]| {
                (0..n).any(|k| {
                    k == cells[0]
                        && choice
                            .iter()
                            .enumerate()
                            .all(|(i, &p)| perms[p][k as usize] == cells[i + 1])
                })
            };
            if contains(a) && contains(b) {
                count += 1;
            }
            let mut i = 0;
            loop {
                if i == choice.len() {
                    return Ok(count);
                }
                choice[i] += 1;
                if choice[i] < perms.len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }
}

/// Odometer step over `[lo, n)^len`; false once it wraps.
fn advance(v: &mut [u64], lo: u64, n: u64) -> bool {
    for x in v.iter_mut() {
        *x += 1;
        if *x < n {
            return true;
        }
        *x = lo;
    }
    false
}

fn all_permutations(n: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut p: Vec<u64> = (0..n as u64).collect();
    loop {
        out.push(p.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

fn subsets(d: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..(1 << d)).map(move |mask| (0..d).filter(|&i| mask & (1 << i) != 0).collect())
}

fn independence(pmf: &CellPairPmf) -> IndependenceCheck {
    let d = pmf.dim();
    let nn = (pmf.n() * pmf.n()) as usize;
    let total = BigUint::from(pmf.total());
    let singles: Vec<Vec<u64>> = (0..d).map(|i| pmf.marginal_counts(&[i])).collect();

    let identical = singles.windows(2).all(|w| w[0] == w[1]);
    let mut witness = if identical {
        None
    } else {
        Some("coordinate laws differ".to_string())
    };

    let mut independent = true;
    'outer: for subset in subsets(d).filter(|s| s.len() >= 2) {
        let joint = pmf.marginal_counts(&subset);
        let scale = num_traits::pow(total.clone(), subset.len() - 1);
        for (idx, &count) in joint.iter().enumerate() {
            let mut rest = idx;
            let mut prod = BigUint::from(1u32);
            for &i in &subset {
                prod *= singles[i][rest % nn];
                rest /= nn;
            }
            if BigUint::from(count) * &scale != prod {
                independent = false;
                witness = Some(format!(
                    "coordinates {subset:?}: joint cell-pair index {idx} has probability {} but the product of marginals is {}",
                    Rational::new(count, pmf.total()),
                    Rational::new(
                        num_bigint::BigInt::from(prod),
                        num_bigint::BigInt::from(num_traits::pow(total.clone(), subset.len()))
                    )
                ));
                break 'outer;
            }
        }
    }
    IndependenceCheck {
        identically_distributed: identical,
        independent,
        witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations_enumerated() {
        assert_eq!(all_permutations(1).len(), 1);
        assert_eq!(all_permutations(4).len(), 24);
        let p = all_permutations(3);
        assert_eq!(p[0], vec![0, 1, 2]);
        assert_eq!(p[5], vec![2, 1, 0]);
    }

    #[test]
    fn copula_small() {
        let a = Analyzer::default();
        let c = a.copula_equality_check(3, 2).unwrap();
        assert!(c.equal);
        assert_eq!(c.max_discrepancy, Rational::zero());
        let fixed = SchemeSpec::rsj(5, 2).with_generator(vec![1, 1]);
        let c = a.copula_equality_for(&fixed).unwrap();
        assert!(!c.equal);
        assert!(c.max_discrepancy > Rational::zero());
    }

    #[test]
    fn independence_small() {
        let a = Analyzer::default();
        assert!(a.coordinate_independence_check(3, 2).unwrap().holds());
        let fixed = SchemeSpec::rsj(5, 2).with_generator(vec![1, 1]);
        let c = a.coordinate_independence_for(&fixed).unwrap();
        assert!(c.identically_distributed);
        assert!(!c.independent);
        assert!(c.witness.is_some());
    }

    #[test]
    fn triple_small_and_errors() {
        let a = Analyzer::default();
        assert_eq!(
            a.triple_distinguisher(5, 2, &[0, 0], &[1, 2]).unwrap(),
            TripleCounts { lattice: 1, lhs: 6 }
        );
        assert!(a.triple_distinguisher(5, 2, &[0, 0], &[1, 0]).is_err());
        assert!(a.triple_distinguisher(6, 2, &[0, 0], &[1, 2]).is_err());
        assert!(a.triple_distinguisher(5, 2, &[0, 0], &[1, 7]).is_err());
    }
}
