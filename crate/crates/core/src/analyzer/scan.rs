//! Grid certification of pairwise negative dependence.
//!
//! For the coordinatewise-independent schemes each per-coordinate factor is
//! piecewise bilinear in `(q, r)` with breakpoints on the `1/N` grid, so
//! checking every anchor pair on a grid that refines it (`M` a multiple of
//! `N`) certifies the inequality for all anchored boxes. For other schemes the
//! scan is an exact probe of the listed anchors only.

use std::ops::{Add, Mul};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::analyzer::{Analyzer, PairLaw};
use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::samplers::SchemeSpec;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridDescription {
    pub resolution: u64,
    pub dim: usize,
    pub anchors: String,
    pub pairs_checked: u128,
    /// Whether the grid refines the `1/N` cells, making the scan a certificate.
    pub refines_cells: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    #[serde(rename = "Q")]
    pub q: Vec<Rational>,
    #[serde(rename = "R")]
    pub r: Vec<Rational>,
    pub joint: Rational,
    pub product: Rational,
}

/// One probed anchor pair, for the optional per-pair summary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairRecord {
    #[serde(rename = "Q")]
    pub q: Vec<Rational>,
    #[serde(rename = "R")]
    pub r: Vec<Rational>,
    pub joint: Rational,
    pub product: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DependenceReport {
    pub scheme: SchemeSpec,
    pub grid: GridDescription,
    /// `max(joint - product, 0)` over the probed pairs.
    pub worst_violation: Rational,
    pub violations: Vec<Violation>,
}

impl DependenceReport {
    pub fn is_negatively_dependent(&self) -> bool {
        self.violations.is_empty()
    }
}

trait Scalar: Clone + Send + Sync + Ord + Zero + One + Add<Output = Self> + for<'a> Mul<&'a Self, Output = Self> {
    fn from_big(b: &BigUint) -> Self;
    fn to_big(&self) -> BigUint;
}

impl Scalar for u128 {
    fn from_big(b: &BigUint) -> Self {
        b.to_u128().expect("checked to fit")
    }
    fn to_big(&self) -> BigUint {
        BigUint::from(*self)
    }
}

impl Scalar for BigUint {
    fn from_big(b: &BigUint) -> Self {
        b.clone()
    }
    fn to_big(&self) -> BigUint {
        self.clone()
    }
}

/// Factor tables scaled to a common integer denominator.
struct ScaledTables {
    m: usize,
    dim: usize,
    /// `(weight, per-coordinate table)`; table index `k * m + l`.
    contexts: Vec<(BigUint, Vec<Vec<BigUint>>)>,
    /// Every joint probability equals its scaled value divided by `scale`.
    scale: BigUint,
}

impl ScaledTables {
    fn new(law: &PairLaw, anchors: &[Rational]) -> Result<Self> {
        let raw = law
            .factor_tables(anchors)
            .ok_or_else(|| Error::Unsupported("grid scan over a joint pmf".into()))?;
        let to_big = |x: &BigInt| x.to_biguint().expect("probabilities are nonnegative");
        let mut table_den = BigUint::one();
        let mut weight_den = BigUint::one();
        for (w, tables) in &raw {
            weight_den = weight_den.lcm(&to_big(w.denom()));
            for t in tables.iter().flatten() {
                table_den = table_den.lcm(&to_big(t.denom()));
            }
        }
        let scale_entry = |x: &Rational, den: &BigUint| -> BigUint { to_big(x.numer()) * (den / to_big(x.denom())) };
        let contexts = raw
            .iter()
            .map(|(w, tables)| {
                (
                    scale_entry(w, &weight_den),
                    tables
                        .iter()
                        .map(|t| t.iter().map(|x| scale_entry(x, &table_den)).collect())
                        .collect(),
                )
            })
            .collect();
        let scale = weight_den * num_traits::pow(table_den, law.dim());
        Ok(Self {
            m: anchors.len(),
            dim: law.dim(),
            contexts,
            scale,
        })
    }
}

struct Typed<T> {
    m: usize,
    dim: usize,
    contexts: Vec<(T, Vec<Vec<T>>)>,
    scale: T,
}

impl<T: Scalar> Typed<T> {
    fn from(s: &ScaledTables) -> Self {
        Self {
            m: s.m,
            dim: s.dim,
            contexts: s
                .contexts
                .iter()
                .map(|(w, tables)| {
                    (
                        T::from_big(w),
                        tables.iter().map(|t| t.iter().map(T::from_big).collect()).collect(),
                    )
                })
                .collect(),
            scale: T::from_big(&s.scale),
        }
    }

    fn digits(&self, mut flat: usize) -> Vec<usize> {
        (0..self.dim)
            .map(|_| {
                let k = flat % self.m;
                flat /= self.m;
                k
            })
            .collect()
    }

    fn joint(&self, q: &[usize], r: &[usize]) -> T {
        let mut sum = T::zero();
        for (w, tables) in &self.contexts {
            let mut prod = w.clone();
            for (i, t) in tables.iter().enumerate() {
                prod = prod * &t[q[i] * self.m + r[i]];
                if prod.is_zero() {
                    break;
                }
            }
            sum = sum + prod;
        }
        sum
    }
}

fn big_rational(num: BigUint, den: &BigUint) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den.clone()))
}

impl Analyzer {
    /// Checks `P(p_1 in Q, p_2 in R) <= P(p_1 in Q) P(p_2 in R)` for every pair
    /// of boxes anchored on the grid `{k / M}^d`, exactly.
    pub fn nuod_scan(&self, spec: &SchemeSpec, resolution: u64) -> Result<DependenceReport> {
        self.scan(spec, resolution, None)
    }

    /// As [`Analyzer::nuod_scan`], additionally handing every probed pair to `sink`.
    pub fn nuod_scan_with(
        &self,
        spec: &SchemeSpec,
        resolution: u64,
        sink: &mut dyn FnMut(PairRecord),
    ) -> Result<DependenceReport> {
        self.scan(spec, resolution, Some(sink))
    }

    fn scan(
        &self,
        spec: &SchemeSpec,
        resolution: u64,
        sink: Option<&mut dyn FnMut(PairRecord)>,
    ) -> Result<DependenceReport> {
        let spec = spec.validated()?;
        if resolution == 0 {
            return Err(Error::InvalidArgument("grid resolution must be positive".into()));
        }
        let m = resolution as usize;
        let d = spec.dim;
        let boxes = (m as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
        let pairs = boxes.saturating_mul(boxes);
        let law = PairLaw::enumerated(&spec, self.budget())?;
        let contexts = law.contexts().map_or(1, |c| c.len()) as u128;
        self.budget()
            .check(pairs.saturating_mul(contexts).saturating_mul(d as u128))?;

        let anchors: Vec<Rational> = (0..m).map(|k| Rational::new(k as u64, resolution)).collect();
        let scaled = ScaledTables::new(&law, &anchors)?;
        let fits = scaled.scale.bits() <= 63;
        let (violations, worst) = if fits {
            run_scan(&Typed::<u128>::from(&scaled), &anchors, boxes as usize, sink)
        } else {
            run_scan(&Typed::<BigUint>::from(&scaled), &anchors, boxes as usize, sink)
        };

        Ok(DependenceReport {
            grid: GridDescription {
                resolution,
                dim: d,
                anchors: format!("k/{resolution} for 0 <= k < {resolution}, every coordinate"),
                pairs_checked: pairs,
                refines_cells: resolution.is_multiple_of(spec.n),
            },
            scheme: spec,
            worst_violation: worst,
            violations,
        })
    }
}

fn run_scan<T: Scalar>(
    tables: &Typed<T>,
    anchors: &[Rational],
    boxes: usize,
    sink: Option<&mut dyn FnMut(PairRecord)>,
) -> (Vec<Violation>, Rational) {
    let origin = vec![0usize; tables.dim];
    let first: Vec<T> = (0..boxes).map(|q| tables.joint(&tables.digits(q), &origin)).collect();
    let second: Vec<T> = (0..boxes).map(|r| tables.joint(&origin, &tables.digits(r))).collect();
    let scale_big = tables.scale.to_big();
    let scale_sq = &scale_big * &scale_big;
    let anchor_vec = |digits: &[usize]| -> Vec<Rational> { digits.iter().map(|&k| anchors[k].clone()).collect() };

    // Row of the scan: all pairs (Q, R) with Q fixed. Returns the violating
    // R indices with their scaled joint and product.
    let row = |qf: usize, keep_all: bool| -> Vec<(usize, T, T)> {
        let q = tables.digits(qf);
        let mut out = Vec::new();
        for (rf, marginal) in second.iter().enumerate() {
            let r = tables.digits(rf);
            let joint = tables.joint(&q, &r);
            let product = first[qf].clone() * marginal;
            if keep_all || joint.clone() * &tables.scale > product {
                out.push((rf, joint, product));
            }
        }
        out
    };

    let to_violation = |qf: usize, (rf, joint, product): (usize, T, T)| {
        let joint_r = big_rational(joint.to_big(), &scale_big);
        let product_r = big_rational(product.to_big(), &scale_sq);
        (
            Violation {
                q: anchor_vec(&tables.digits(qf)),
                r: anchor_vec(&tables.digits(rf)),
                joint: joint_r.clone(),
                product: product_r.clone(),
            },
            joint_r > product_r,
        )
    };

    let mut violations = Vec::new();
    match sink {
        Some(sink) => {
            for qf in 0..boxes {
                for entry in row(qf, true) {
                    let (v, violated) = to_violation(qf, entry);
                    sink(PairRecord {
                        q: v.q.clone(),
                        r: v.r.clone(),
                        joint: v.joint.clone(),
                        product: v.product.clone(),
                    });
                    if violated {
                        violations.push(v);
                    }
                }
            }
        }
        None => {
            let rows: Vec<Vec<(usize, T, T)>> = (0..boxes).into_par_iter().map(|qf| row(qf, false)).collect();
            for (qf, entries) in rows.into_iter().enumerate() {
                for entry in entries {
                    violations.push(to_violation(qf, entry).0);
                }
            }
        }
    }
    let worst = violations
        .iter()
        .map(|v| &v.joint - &v.product)
        .max()
        .unwrap_or_else(Rational::zero);
    (violations, worst)
}
