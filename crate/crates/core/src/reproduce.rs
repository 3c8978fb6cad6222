//! The reproduction suite: one exact or statistical check per claim, each
//! reported as a single pass/fail line.

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::analyzer::{stratified_pair_box_prob, Analyzer, AnchoredBox};
use crate::error::Result;
use crate::numeric::{Rational, RngStream};
use crate::samplers::{generate_with, SchemeSpec, Shift, FRAC_BITS};
use crate::variance::{variance_compare, Integrand};

#[derive(Clone, Debug)]
pub struct ReproduceConfig {
    pub analyzer: Analyzer,
    pub seed: u64,
    /// Replications for the variance comparison.
    pub variance_replications: u64,
    /// Replications for the marginal and exchangeability checks.
    pub marginal_replications: u64,
}

impl Default for ReproduceConfig {
    fn default() -> Self {
        Self {
            analyzer: Analyzer::default(),
            seed: 20_240_601,
            variance_replications: 10_000,
            marginal_replications: 100_000,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {}: {} ({:.2} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.seconds
        )
    }
}

pub const CRITERIA: &[(u8, &str)] = &[
    (1, "discrete lattice pair pmf is uniform on distinct cells"),
    (2, "fixed-generator counterexample 1/100 > 4/625"),
    (3, "NUOD certified on corner grids; factor below independence"),
    (4, "lattice copula equals LHS; coordinates iid"),
    (5, "triple distinguisher counts"),
    (6, "unshifted lattice puts mass 1/N on the corner cell"),
    (7, "fixed-distance schemes give conditional probability 1"),
    (8, "stratified closed form matches the stratum-pair oracle"),
    (9, "variance never exceeds Monte Carlo"),
    (10, "uniform marginals and exchangeable points"),
];

pub fn run_all(cfg: &ReproduceConfig) -> Vec<CriterionOutcome> {
    CRITERIA.iter().map(|&(id, _)| run_criterion(id, cfg)).collect()
}

pub fn run_criterion(id: u8, cfg: &ReproduceConfig) -> CriterionOutcome {
    let title = CRITERIA.iter().find(|c| c.0 == id).map_or("unknown criterion", |c| c.1);
    let start = Instant::now();
    let a = &cfg.analyzer;
    let result = match id {
        1 => lattice_pmf_uniform(a),
        2 => counterexample(a),
        3 => nuod_certified(a),
        4 => copula_and_independence(a),
        5 => triple_counts(a),
        6 => no_shift(a),
        7 => fixed_distance(a),
        8 => oracle_agreement(),
        9 => variance_domination(cfg),
        10 => sampling_scheme(cfg),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let (passed, detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionOutcome {
        id,
        title,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

type Check = Result<(bool, String)>;

fn lattice_pmf_uniform(a: &Analyzer) -> Check {
    for n in [3u64, 5, 7] {
        for d in [1usize, 2, 3] {
            let law = a.discrete_pair_pmf(&SchemeSpec::rsj(n, d))?;
            let pmf = law.pmf().expect("joint pmf");
            let per = (n * (n - 1)).pow(d as u32);
            for idx in 0..pmf.len() {
                let (z1, z2) = pmf.cells(idx);
                let distinct = z1.iter().zip(&z2).all(|(x, y)| x != y);
                let ok = if distinct {
                    pmf.count_at(idx) as u128 * per as u128 == pmf.total() as u128
                } else {
                    pmf.count_at(idx) == 0
                };
                if !ok {
                    return Ok((
                        false,
                        format!("N={n} d={d}: cells {z1:?},{z2:?} have probability {}", pmf.prob_at(idx)),
                    ));
                }
            }
        }
    }
    Ok((
        true,
        "pmf = 1/(N(N-1))^d on distinct cells for N in {3,5,7}, d in {1,2,3}".into(),
    ))
}

fn counterexample(a: &Analyzer) -> Check {
    let spec = SchemeSpec::rsj(5, 2).with_generator(vec![1, 1]);
    let q = AnchoredBox::cube(Rational::new(3, 5), 2)?;
    let r = AnchoredBox::cube(Rational::new(4, 5), 2)?;
    let joint = a.pair_box_prob(&spec, &q, &r)?;
    let product = a.marginal_product(&spec, &q, &r)?;
    let ok = joint == Rational::new(1, 100) && product == Rational::new(4, 625) && joint > product;
    Ok((ok, format!("joint {joint}, product {product}")))
}

fn nuod_certified(a: &Analyzer) -> Check {
    let mut specs = Vec::new();
    for n in [2u64, 3, 5, 7] {
        for d in [1usize, 2, 3] {
            specs.push(SchemeSpec::rsj(n, d));
            specs.push(SchemeSpec::lhs(n, d));
        }
    }
    let mut pairs = 0u128;
    for spec in &specs {
        let report = a.nuod_scan(spec, 2 * spec.n)?;
        pairs += report.grid.pairs_checked;
        if let Some(v) = report.violations.first() {
            return Ok((
                false,
                format!("{spec}: violation joint {} > product {}", v.joint, v.product),
            ));
        }
    }
    let grid: Vec<Rational> = (0..50).map(|k| Rational::new(k, 50)).collect();
    for n in 2..=8u64 {
        for q in &grid {
            for r in &grid {
                let f = stratified_pair_box_prob(q, r, n)?;
                let bound = (Rational::one() - q) * (Rational::one() - r);
                if f > bound {
                    return Ok((false, format!("N={n}: factor({q},{r}) = {f} > {bound}")));
                }
            }
        }
    }
    Ok((
        true,
        format!(
            "{} schemes, {pairs} box pairs, zero violations; factor grid 50x50 for N=2..8 clean",
            specs.len()
        ),
    ))
}

fn copula_and_independence(a: &Analyzer) -> Check {
    for n in [3u64, 5] {
        for d in [2usize, 3] {
            let c = a.copula_equality_check(n, d)?;
            if !c.equal {
                return Ok((false, format!("N={n} d={d}: copula discrepancy {}", c.max_discrepancy)));
            }
            let i = a.coordinate_independence_check(n, d)?;
            if !i.holds() {
                return Ok((false, format!("N={n} d={d}: {}", i.witness.unwrap_or_default())));
            }
        }
    }
    Ok((
        true,
        "discrepancy 0 and iid coordinates for N in {3,5}, d in {2,3}".into(),
    ))
}

fn triple_counts(a: &Analyzer) -> Check {
    let mut seen = Vec::new();
    for (n, d) in [(5u64, 2usize), (5, 3), (7, 2)] {
        let zero = vec![0; d];
        let b: Vec<u64> = (1..=d as u64).collect();
        let t = a.triple_distinguisher(n, d, &zero, &b)?;
        let expected: u64 = (1..=n - 2).product::<u64>().pow(d as u32 - 1);
        seen.push(format!("N={n},d={d}: ({}, {})", t.lattice, t.lhs));
        if t.lattice != 1 || t.lhs != expected {
            return Ok((
                false,
                format!("N={n} d={d}: got ({}, {}), expected (1, {expected})", t.lattice, t.lhs),
            ));
        }
    }
    Ok((true, seen.join("; ")))
}

fn no_shift(a: &Analyzer) -> Check {
    let mut seen = Vec::new();
    for (n, d) in [(5u64, 2usize), (3, 3)] {
        let m = a.no_shift_mass(n, d)?;
        let vol = Rational::new(1, n).pow(d as u32);
        seen.push(format!("N={n},d={d}: {m} vs volume {vol}"));
        if m != Rational::new(1, n) || m == vol {
            return Ok((false, seen.join("; ")));
        }
    }
    Ok((true, seen.join("; ")))
}

fn fixed_distance(a: &Analyzer) -> Check {
    let torus = |n| {
        SchemeSpec::rsj(n, 2)
            .with_shift(Shift::ContinuousTorus)
            .with_jitter(false)
    };
    let cases = [
        (torus(5), 5u64),
        (torus(7), 7),
        (SchemeSpec::patterson(5, 2).with_shift(Shift::ContinuousTorus), 5),
    ];
    let mut seen = Vec::new();
    for (spec, n) in cases {
        let p = a.shift_only_conditional(&spec, &Rational::new(1, 2 * n), 1)?;
        seen.push(format!("{} N={n}: {p}", spec.kind.name()));
        if !p.is_one() {
            return Ok((false, seen.join("; ")));
        }
    }
    Ok((true, seen.join("; ")))
}

/// Sum over ordered pairs of distinct strata of the jitter overlap fractions.
pub fn stratum_pair_oracle(q: &Rational, r: &Rational, n: u64) -> Rational {
    let overlap = |cell: u64, x: &Rational| {
        let lo = Rational::new(cell, n);
        let hi = Rational::new(cell + 1, n);
        let start = if *x > lo { x.clone() } else { lo };
        if start >= hi {
            Rational::zero()
        } else {
            (hi - start) * Rational::from(n)
        }
    };
    let mut sum = Rational::zero();
    for a in 0..n {
        for b in (0..n).filter(|&b| b != a) {
            sum = sum + overlap(a, q) * overlap(b, r);
        }
    }
    sum / Rational::from(n * (n - 1))
}

fn oracle_agreement() -> Check {
    let mut points = 0u64;
    for n in 2..=8u64 {
        let grid: Vec<Rational> = (0..4 * n).map(|k| Rational::new(k, 4 * n)).collect();
        for q in &grid {
            for r in &grid {
                let closed = stratified_pair_box_prob(q, r, n)?;
                let oracle = stratum_pair_oracle(q, r, n);
                if closed != oracle {
                    return Ok((false, format!("N={n} q={q} r={r}: closed {closed} vs oracle {oracle}")));
                }
                if closed > (Rational::one() - q) * (Rational::one() - r) {
                    return Ok((false, format!("N={n} q={q} r={r}: {closed} exceeds the product")));
                }
                points += 1;
            }
        }
    }
    Ok((true, format!("{points} grid points agree exactly, all <= (1-q)(1-r)")))
}

fn variance_domination(cfg: &ReproduceConfig) -> Check {
    let root = RngStream::new(cfg.seed).substream(9);
    let mut worst = (f64::NEG_INFINITY, String::new());
    let mut run = 0u64;
    for (n, d) in [(5u64, 2usize), (31, 4)] {
        let fs = [
            Integrand::additive(d),
            Integrand::product(d),
            Integrand::box_indicator(vec![Rational::new(3, 10); d])?,
            Integrand::smooth(d, Rational::one())?,
        ];
        for spec in [SchemeSpec::rsj(n, d), SchemeSpec::lhs(n, d)] {
            for f in &fs {
                let res = variance_compare(f, &spec, cfg.variance_replications, &root.substream(run))?;
                run += 1;
                let ratio = res.est_variance / res.mc_variance;
                let label = format!("{} {} N={n} d={d}", spec.kind.name(), f.name());
                if !res.dominated {
                    return Ok((
                        false,
                        format!(
                            "{label}: variance {:.4e} > MC {:.4e}",
                            res.est_variance, res.mc_variance
                        ),
                    ));
                }
                if ratio > worst.0 {
                    worst = (ratio, label);
                }
            }
        }
    }
    Ok((
        true,
        format!(
            "{run} comparisons, R={}; largest ratio {:.3} ({})",
            cfg.variance_replications, worst.0, worst.1
        ),
    ))
}

#[derive(Default)]
struct Tallies {
    /// `[coord][k]`: first point in `[k/10, 1)`, `k = 1..9`.
    marginal: Vec<[u64; 9]>,
    /// `[coord][point][cell]`.
    table: Vec<Vec<Vec<u64>>>,
}

impl Tallies {
    fn new(n: usize, d: usize) -> Self {
        Self {
            marginal: vec![[0; 9]; d],
            table: vec![vec![vec![0; n]; n]; d],
        }
    }

    fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.marginal.iter_mut().zip(&other.marginal) {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
        for (a, b) in self.table.iter_mut().zip(&other.table) {
            for (ra, rb) in a.iter_mut().zip(b) {
                ra.iter_mut().zip(rb).for_each(|(x, y)| *x += y);
            }
        }
        self
    }
}

fn sampling_scheme(cfg: &ReproduceConfig) -> Check {
    let root = RngStream::new(cfg.seed).substream(10);
    let reps = cfg.marginal_replications;
    let mut notes = Vec::new();
    for (s, spec) in [SchemeSpec::rsj(5, 2), SchemeSpec::lhs(5, 2)].into_iter().enumerate() {
        let (n, d) = (spec.n as usize, spec.dim);
        let stream = root.substream(s as u64);
        let den = (spec.n as u128) << FRAC_BITS;
        let thresholds: Vec<u128> = (1..=9u128).map(|k| (den * k).div_ceil(10)).collect();
        let tallies = (0..reps)
            .into_par_iter()
            .fold(
                || Ok(Tallies::new(n, d)),
                |acc: Result<Tallies>, k| {
                    let mut t = acc?;
                    let set = generate_with(&spec, &mut stream.substream(k))?;
                    for i in 0..d {
                        let x = set.numerator(0, i);
                        for (slot, &th) in t.marginal[i].iter_mut().zip(&thresholds) {
                            *slot += (x >= th) as u64;
                        }
                        for j in 0..n {
                            t.table[i][j][set.cell(j, i) as usize] += 1;
                        }
                    }
                    Ok(t)
                },
            )
            .reduce(|| Ok(Tallies::new(n, d)), |a, b| Ok(a?.merge(b?)))?;

        let mut worst_z: f64 = 0.0;
        let mut worst_chi: f64 = 0.0;
        for i in 0..d {
            for (k, &count) in tallies.marginal[i].iter().enumerate() {
                let p = 1.0 - (k + 1) as f64 / 10.0;
                let sigma = (p * (1.0 - p) / reps as f64).sqrt();
                let z = (count as f64 / reps as f64 - p).abs() / sigma;
                worst_z = worst_z.max(z);
                if z > 4.0 {
                    return Ok((
                        false,
                        format!(
                            "{}: P(p1 in [{}/10,1)) off by {z:.2} sigma in coordinate {i}",
                            spec.kind.name(),
                            k + 1
                        ),
                    ));
                }
            }
            // Point index by cell. Each replication adds a permutation matrix,
            // whose indicator covariance is P x P / (N - 1) with P the centering
            // projection, so X^2 (N - 1) / N is chi-square on (N - 1)^2 dof.
            let expected = reps as f64 / n as f64;
            let pearson: f64 = tallies.table[i]
                .iter()
                .flatten()
                .map(|&o| (o as f64 - expected).powi(2) / expected)
                .sum();
            let chi2 = pearson * (n - 1) as f64 / n as f64;
            let dof = ((n - 1) * (n - 1)) as f64;
            let z = (chi2 - dof) / (2.0 * dof).sqrt();
            worst_chi = worst_chi.max(z.abs());
            if z.abs() > 3.0 {
                return Ok((
                    false,
                    format!(
                        "{}: exchangeability chi-square {chi2:.1} on {dof} dof in coordinate {i}",
                        spec.kind.name()
                    ),
                ));
            }
        }
        notes.push(format!(
            "{} max marginal |z| {worst_z:.2}, max chi-square |z| {worst_chi:.2}",
            spec.kind.name()
        ));
    }
    Ok((true, format!("R={reps}; {}", notes.join(", "))))
}
