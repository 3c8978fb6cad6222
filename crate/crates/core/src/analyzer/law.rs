//! Exact joint laws of a pair of points `(p_1, p_2)`.

use rayon::prelude::*;

use crate::analyzer::{stratified_pair_box_prob, AnchoredBox, Budget};
use crate::error::{Error, Result};
use crate::numeric::{circular_overlap, CircularInterval, Rational};
use crate::samplers::{Generator, SchemeKind, SchemeSpec, Shift};

/// Where a point sits inside its `1/N` cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Placement {
    /// Uniform in the cell, independently per point and coordinate.
    Jitter,
    /// At the cell midpoint.
    Midpoint,
    /// At the lower cell corner.
    Corner,
    /// At the corner (or midpoint, if `midpoint`) rotated by one uniform
    /// shift per coordinate shared by all points.
    Torus { midpoint: bool },
}

impl Placement {
    pub fn for_spec(spec: &SchemeSpec) -> Placement {
        match spec.kind {
            SchemeKind::Stratified1d | SchemeKind::Lhs => Placement::Jitter,
            SchemeKind::Patterson => match spec.shift {
                Shift::ContinuousTorus => Placement::Torus { midpoint: true },
                _ => Placement::Midpoint,
            },
            SchemeKind::RsjLattice => match (spec.shift, spec.jitter) {
                (Shift::ContinuousTorus, _) => Placement::Torus { midpoint: false },
                (_, true) => Placement::Jitter,
                (_, false) => Placement::Corner,
            },
        }
    }

    /// Offset of the point inside its cell, in cell units, where fixed.
    fn base(self) -> Rational {
        match self {
            Placement::Midpoint | Placement::Torus { midpoint: true } => Rational::new(1, 2),
            _ => Rational::zero(),
        }
    }

    /// Probability that a point in `cell` lies in `[anchor, 1)` (non-torus).
    fn cell_mass(self, cell: u64, anchor: &Rational, n: u64) -> Rational {
        let scaled = Rational::from(n) * anchor;
        match self {
            Placement::Jitter => (Rational::from(cell + 1) - scaled).clamp01(),
            Placement::Midpoint | Placement::Corner => {
                let pos = Rational::from(cell) + self.base();
                if pos >= scaled {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }
            Placement::Torus { .. } => unreachable!("torus factors are not separable"),
        }
    }

    /// `P(p_1 in [q, 1), p_2 in [r, 1))` for one coordinate given the cells.
    fn pair_factor(self, cells: (u64, u64), q: &Rational, r: &Rational, n: u64) -> Rational {
        match self {
            Placement::Torus { .. } => {
                let nn = Rational::from(n);
                let pos1 = (Rational::from(cells.0) + self.base()) / &nn;
                let pos2 = (Rational::from(cells.1) + self.base()) / &nn;
                let one = Rational::one();
                // p = pos + t (mod 1) lies in [q, 1) iff t lies in the arc [q - pos, 1 - pos).
                let a = CircularInterval::new(q - &pos1, &one - q).expect("anchor in [0, 1)");
                let b = CircularInterval::new(r - &pos2, &one - r).expect("anchor in [0, 1)");
                circular_overlap(&a, &b)
            }
            _ => self.cell_mass(cells.0, q, n) * self.cell_mass(cells.1, r, n),
        }
    }
}

/// Law of the cell pair `(c_1, c_2)` in one coordinate, as counts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoordLaw {
    n: u64,
    counts: Vec<u64>,
    total: u64,
}

impl CoordLaw {
    fn empty(n: u64) -> Self {
        Self {
            n,
            counts: vec![0; (n * n) as usize],
            total: 0,
        }
    }

    /// Uniform on ordered pairs of distinct cells.
    pub fn uniform_distinct(n: u64) -> Self {
        let mut law = Self::empty(n);
        for c1 in 0..n {
            for c2 in 0..n {
                if c1 != c2 {
                    law.add(c1, c2);
                }
            }
        }
        law
    }

    fn add(&mut self, c1: u64, c2: u64) {
        self.counts[(c1 * self.n + c2) as usize] += 1;
        self.total += 1;
    }

    pub fn prob(&self, c1: u64, c2: u64) -> Rational {
        Rational::new(self.counts[(c1 * self.n + c2) as usize], self.total)
    }

    /// Cell pairs with positive probability.
    pub fn support(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        let n = self.n;
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(move |(k, _)| (k as u64 / n, k as u64 % n))
    }

    fn factor(&self, placement: Placement, q: &Rational, r: &Rational) -> Rational {
        let sum: Rational = self
            .counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(k, &c)| {
                let cells = (k as u64 / self.n, k as u64 % self.n);
                Rational::from(c) * placement.pair_factor(cells, q, r, self.n)
            })
            .sum();
        sum / Rational::from(self.total)
    }
}

/// Conditional on the latent indices, coordinates are independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Context {
    pub weight: Rational,
    pub coords: Vec<CoordLaw>,
}

/// Exact joint law of the cell pairs over all `d` coordinates, as counts over
/// a common total. Cell pair `(z_1, z_2)` is stored at
/// `sum_i (z_1[i] * N + z_2[i]) * (N^2)^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellPairPmf {
    n: u64,
    dim: usize,
    counts: Vec<u64>,
    total: u64,
}

impl CellPairPmf {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn count_at(&self, index: usize) -> u64 {
        self.counts[index]
    }

    pub fn index(&self, z1: &[u64], z2: &[u64]) -> usize {
        let nn = self.n * self.n;
        let mut idx = 0u64;
        for i in (0..self.dim).rev() {
            idx = idx * nn + z1[i] * self.n + z2[i];
        }
        idx as usize
    }

    /// Inverse of [`CellPairPmf::index`].
    pub fn cells(&self, index: usize) -> (Vec<u64>, Vec<u64>) {
        let nn = self.n * self.n;
        let mut rest = index as u64;
        let mut z1 = Vec::with_capacity(self.dim);
        let mut z2 = Vec::with_capacity(self.dim);
        for _ in 0..self.dim {
            let pair = rest % nn;
            rest /= nn;
            z1.push(pair / self.n);
            z2.push(pair % self.n);
        }
        (z1, z2)
    }

    pub fn prob(&self, z1: &[u64], z2: &[u64]) -> Rational {
        Rational::new(self.counts[self.index(z1, z2)], self.total)
    }

    pub fn prob_at(&self, index: usize) -> Rational {
        Rational::new(self.counts[index], self.total)
    }

    /// Sum of two partial enumerations of the same model.
    pub fn merge(&self, other: &Self) -> Result<Self> {
        if self.n != other.n || self.dim != other.dim {
            return Err(Error::InvalidArgument("cannot merge pmfs of different shapes".into()));
        }
        Ok(Self {
            n: self.n,
            dim: self.dim,
            counts: self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect(),
            total: self.total + other.total,
        })
    }

    /// Marginal counts on the coordinates in `subset`, indexed like a pmf of
    /// dimension `subset.len()`.
    pub fn marginal_counts(&self, subset: &[usize]) -> Vec<u64> {
        let nn = (self.n * self.n) as usize;
        let mut out = vec![0u64; nn.pow(subset.len() as u32)];
        for (idx, &c) in self.counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mut target = 0usize;
            for &i in subset.iter().rev() {
                target = target * nn + (idx / nn.pow(i as u32)) % nn;
            }
            out[target] += c;
        }
        out
    }

    /// Probability that point 1 lies in the cell vector `z1`.
    pub fn first_point_cell_prob(&self, z1: &[u64]) -> Rational {
        let mut count = 0u64;
        for (idx, &c) in self.counts.iter().enumerate() {
            if c > 0 && self.cells(idx).0 == z1 {
                count += c;
            }
        }
        Rational::new(count, self.total)
    }
}

#[derive(Clone, Debug)]
enum Repr {
    /// Product of per-coordinate stratified closed forms.
    Stratified,
    /// Mixture over latent contexts of coordinatewise-independent laws.
    Mixture(Vec<Context>),
    /// Full joint cell-pair pmf.
    Joint(CellPairPmf),
}

/// Joint law of `(p_1, p_2)` for a scheme, exact.
#[derive(Clone, Debug)]
pub struct PairLaw {
    n: u64,
    dim: usize,
    placement: Placement,
    repr: Repr,
}

impl PairLaw {
    /// Closed form `prod_i P(p_1^(i) >= q_i, p_2^(i) >= r_i)` with stratified
    /// factors; valid for simple stratified sampling, LHS and the full RSJ
    /// lattice.
    pub fn closed_form(spec: &SchemeSpec) -> Result<Self> {
        let spec = spec.validated()?;
        let ok = matches!(spec.kind, SchemeKind::Stratified1d | SchemeKind::Lhs) || spec.is_full_rsj();
        if !ok {
            return Err(Error::Unsupported(format!(
                "no closed form for {spec}; use the enumerated law"
            )));
        }
        need_pair(spec.n)?;
        Ok(Self {
            n: spec.n,
            dim: spec.dim,
            placement: Placement::Jitter,
            repr: Repr::Stratified,
        })
    }

    /// Law obtained by enumerating the randomization conditionally on the
    /// pair of lattice indices (or directly from the cell law for Latin
    /// schemes). Contexts with identical coordinate laws are merged.
    pub fn enumerated(spec: &SchemeSpec, budget: Budget) -> Result<Self> {
        let spec = spec.validated()?;
        need_pair(spec.n)?;
        let n = spec.n;
        let placement = Placement::for_spec(&spec);
        let contexts = match spec.kind {
            SchemeKind::Stratified1d | SchemeKind::Lhs | SchemeKind::Patterson => {
                budget.check(spec.dim as u128 * (n as u128 * n as u128))?;
                vec![Context {
                    weight: Rational::one(),
                    coords: vec![CoordLaw::uniform_distinct(n); spec.dim],
                }]
            }
            SchemeKind::RsjLattice => {
                let gens = generator_choices(&spec);
                let shifts = shift_choices(&spec);
                let per_context: u128 = gens.iter().map(|g| g.len() as u128).sum::<u128>() * shifts.len() as u128;
                budget.check(n as u128 * (n as u128 - 1) * per_context)?;
                let weight = Rational::new(1, n * (n - 1));
                let mut contexts: Vec<Context> = Vec::new();
                for m1 in 0..n {
                    for m2 in (0..n).filter(|&m2| m2 != m1) {
                        let coords: Vec<CoordLaw> = gens
                            .iter()
                            .map(|choices| {
                                let mut law = CoordLaw::empty(n);
                                for &g in choices {
                                    for &s in &shifts {
                                        law.add((m1 * g + s) % n, (m2 * g + s) % n);
                                    }
                                }
                                law
                            })
                            .collect();
                        match contexts.iter_mut().find(|c| c.coords == coords) {
                            Some(c) => c.weight = &c.weight + &weight,
                            None => contexts.push(Context {
                                weight: weight.clone(),
                                coords,
                            }),
                        }
                    }
                }
                contexts
            }
        };
        Ok(Self {
            n,
            dim: spec.dim,
            placement,
            repr: Repr::Mixture(contexts),
        })
    }

    /// Closed form where available, enumeration otherwise.
    pub fn for_spec(spec: &SchemeSpec, budget: Budget) -> Result<Self> {
        let spec = spec.validated()?;
        if matches!(spec.kind, SchemeKind::Stratified1d | SchemeKind::Lhs) || spec.is_full_rsj() {
            Self::closed_form(&spec)
        } else {
            Self::enumerated(&spec, budget)
        }
    }

    pub fn from_pmf(pmf: CellPairPmf, placement: Placement) -> Self {
        Self {
            n: pmf.n,
            dim: pmf.dim,
            placement,
            repr: Repr::Joint(pmf),
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn placement(&self) -> Placement {
        self.placement
    }

    pub fn pmf(&self) -> Option<&CellPairPmf> {
        match &self.repr {
            Repr::Joint(p) => Some(p),
            _ => None,
        }
    }

    pub fn contexts(&self) -> Option<&[Context]> {
        match &self.repr {
            Repr::Mixture(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_closed_form(&self) -> bool {
        matches!(self.repr, Repr::Stratified)
    }

    /// Per-coordinate factor tables `T[k][l] = P(p_1^(i) >= a_k, p_2^(i) >= a_l)`
    /// for each context, over the anchors `a`. `None` for a joint pmf, which
    /// does not factorize.
    pub(crate) fn factor_tables(&self, anchors: &[Rational]) -> Option<Vec<(Rational, Vec<Vec<Rational>>)>> {
        let m = anchors.len();
        let table = |f: &dyn Fn(&Rational, &Rational) -> Rational| -> Vec<Rational> {
            let mut t = Vec::with_capacity(m * m);
            for q in anchors {
                for r in anchors {
                    t.push(f(q, r));
                }
            }
            t
        };
        match &self.repr {
            Repr::Stratified => {
                let t = table(&|q, r| stratified_pair_box_prob(q, r, self.n).expect("validated"));
                Some(vec![(Rational::one(), vec![t; self.dim])])
            }
            Repr::Mixture(contexts) => Some(
                contexts
                    .iter()
                    .map(|c| {
                        let tables = c
                            .coords
                            .iter()
                            .map(|law| table(&|q, r| law.factor(self.placement, q, r)))
                            .collect();
                        (c.weight.clone(), tables)
                    })
                    .collect(),
            ),
            Repr::Joint(_) => None,
        }
    }

    fn check_boxes(&self, q: &AnchoredBox, r: &AnchoredBox) -> Result<()> {
        if q.dim() != self.dim || r.dim() != self.dim {
            return Err(Error::InvalidArgument(format!(
                "boxes of dimension {} and {} for a {}-dimensional law",
                q.dim(),
                r.dim(),
                self.dim
            )));
        }
        Ok(())
    }

    /// `P(p_1 in Q, p_2 in R)`.
    pub fn box_prob(&self, q: &AnchoredBox, r: &AnchoredBox) -> Result<Rational> {
        self.check_boxes(q, r)?;
        let (qa, ra) = (q.anchor(), r.anchor());
        Ok(match &self.repr {
            Repr::Stratified => (0..self.dim)
                .map(|i| stratified_pair_box_prob(&qa[i], &ra[i], self.n))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .product(),
            Repr::Mixture(contexts) => contexts
                .iter()
                .map(|c| {
                    let prod: Rational = c
                        .coords
                        .iter()
                        .enumerate()
                        .map(|(i, law)| law.factor(self.placement, &qa[i], &ra[i]))
                        .product();
                    &c.weight * prod
                })
                .sum(),
            Repr::Joint(pmf) => {
                if matches!(self.placement, Placement::Torus { .. }) {
                    return Err(Error::Unsupported("torus placement over a joint pmf".into()));
                }
                let n = self.n;
                let factors: Vec<Vec<Rational>> = (0..self.dim)
                    .map(|i| {
                        (0..n * n)
                            .map(|k| self.placement.pair_factor((k / n, k % n), &qa[i], &ra[i], n))
                            .collect()
                    })
                    .collect();
                let nn = (n * n) as usize;
                let mut sum = Rational::zero();
                for (idx, &c) in pmf.counts.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let mut term = Rational::from(c);
                    let mut rest = idx;
                    for f in &factors {
                        term = term * &f[rest % nn];
                        rest /= nn;
                        if term.is_zero() {
                            break;
                        }
                    }
                    sum = sum + term;
                }
                sum / Rational::from(pmf.total)
            }
        })
    }

    /// `P(p_1 in Q) * P(p_2 in R)` under this law's own marginals.
    pub fn marginal_product(&self, q: &AnchoredBox, r: &AnchoredBox) -> Result<Rational> {
        let full = AnchoredBox::full(self.dim);
        Ok(self.box_prob(q, &full)? * self.box_prob(&full, r)?)
    }
}

fn need_pair(n: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument("pair laws need N >= 2".into()));
    }
    Ok(())
}

/// Possible generator values per coordinate.
fn generator_choices(spec: &SchemeSpec) -> Vec<Vec<u64>> {
    match &spec.generator {
        Generator::Random => vec![(1..spec.n).collect(); spec.dim],
        Generator::Fixed(g) => g.iter().map(|&x| vec![x]).collect(),
    }
}

/// Possible grid shifts per coordinate; the torus shift is integrated
/// analytically instead.
fn shift_choices(spec: &SchemeSpec) -> Vec<u64> {
    match spec.shift {
        Shift::Grid => (0..spec.n).collect(),
        Shift::None | Shift::ContinuousTorus => vec![0],
    }
}

/// Exhaustive joint enumeration of the discrete model (no jitter): every
/// generator, every grid shift and every ordered pair of distinct lattice
/// indices, without assuming independence across coordinates.
pub(crate) fn enumerate_discrete(spec: &SchemeSpec, budget: Budget) -> Result<CellPairPmf> {
    let spec = spec.validated()?;
    need_pair(spec.n)?;
    let n = spec.n;
    let d = spec.dim;
    let cells = (n as u128 * n as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    budget.check(cells)?;
    let size = cells as usize;
    match spec.kind {
        SchemeKind::Stratified1d | SchemeKind::Lhs | SchemeKind::Patterson => {
            let per = n * (n - 1);
            let total = (per as u128).pow(d as u32);
            let total = u64::try_from(total).map_err(|_| Error::BudgetExceeded {
                required: total,
                budget: budget.limit(),
            })?;
            let mut pmf = CellPairPmf {
                n,
                dim: d,
                counts: vec![0; size],
                total,
            };
            for idx in 0..size {
                let (z1, z2) = pmf.cells(idx);
                if z1.iter().zip(&z2).all(|(a, b)| a != b) {
                    pmf.counts[idx] = 1;
                }
            }
            Ok(pmf)
        }
        SchemeKind::RsjLattice => {
            let plan = LatticePlan::new(&spec, budget)?;
            let parts = rayon::current_num_threads().max(1) as u64 * 4;
            let pmf = plan
                .partitions(parts)
                .into_par_iter()
                .map(|range| plan.enumerate(range))
                .reduce_with(|a, b| a.merge(&b).expect("same shape"))
                .expect("at least one partition");
            Ok(pmf)
        }
    }
}

/// Enumeration of the unjittered lattice model, split by generator index.
pub(crate) struct LatticePlan {
    n: u64,
    dim: usize,
    gens: Vec<Vec<u64>>,
    shift_tuples: Vec<Vec<u64>>,
    gen_count: u64,
}

impl LatticePlan {
    pub(crate) fn new(spec: &SchemeSpec, budget: Budget) -> Result<Self> {
        let spec = spec.validated()?;
        need_pair(spec.n)?;
        if spec.kind != SchemeKind::RsjLattice {
            return Err(Error::InvalidArgument("lattice enumeration needs an rsj spec".into()));
        }
        if spec.shift == Shift::ContinuousTorus {
            return Err(Error::Unsupported(
                "the discrete model needs a grid shift or no shift".into(),
            ));
        }
        let (n, d) = (spec.n, spec.dim);
        let cells = (n as u128 * n as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
        budget.check(cells)?;
        let gens = generator_choices(&spec);
        let shifts = shift_choices(&spec);
        let gen_count: u128 = gens.iter().map(|g| g.len() as u128).product();
        let shift_count = (shifts.len() as u128).pow(d as u32);
        let pairs = n as u128 * (n as u128 - 1);
        budget.check(gen_count * shift_count * pairs * d as u128)?;
        let per_coord = vec![shifts; d];
        let shift_tuples = (0..shift_count as u64).map(|k| odometer(k, &per_coord)).collect();
        Ok(Self {
            n,
            dim: d,
            gens,
            shift_tuples,
            gen_count: gen_count as u64,
        })
    }

    /// Splits the generator index space into at most `parts` ranges.
    pub(crate) fn partitions(&self, parts: u64) -> Vec<std::ops::Range<u64>> {
        let parts = parts.clamp(1, self.gen_count);
        let step = self.gen_count.div_ceil(parts);
        (0..parts)
            .map(|p| p * step..((p + 1) * step).min(self.gen_count))
            .filter(|r| !r.is_empty())
            .collect()
    }

    /// Counts for the generators with indices in `range`.
    pub(crate) fn enumerate(&self, range: std::ops::Range<u64>) -> CellPairPmf {
        let (n, d) = (self.n, self.dim);
        let nn = n * n;
        let size = (nn as usize).pow(d as u32);
        let mut counts = vec![0u64; size];
        let mut total = 0u64;
        for gidx in range {
            let g = odometer(gidx, &self.gens);
            for s in &self.shift_tuples {
                for m1 in 0..n {
                    for m2 in (0..n).filter(|&m2| m2 != m1) {
                        let mut idx = 0u64;
                        for i in (0..d).rev() {
                            let c1 = (m1 * g[i] + s[i]) % n;
                            let c2 = (m2 * g[i] + s[i]) % n;
                            idx = idx * nn + c1 * n + c2;
                        }
                        counts[idx as usize] += 1;
                        total += 1;
                    }
                }
            }
        }
        CellPairPmf {
            n,
            dim: d,
            counts,
            total,
        }
    }
}

/// The `k`-th element of the product of `choices`, first coordinate fastest.
fn odometer(mut k: u64, choices: &[Vec<u64>]) -> Vec<u64> {
    choices
        .iter()
        .map(|c| {
            let len = c.len() as u64;
            let v = c[(k % len) as usize];
            k /= len;
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn index_roundtrip() {
        let pmf = enumerate_discrete(&SchemeSpec::rsj(3, 3), Budget::default()).unwrap();
        for idx in [0usize, 5, 100, pmf.len() - 1] {
            let (z1, z2) = pmf.cells(idx);
            assert_eq!(pmf.index(&z1, &z2), idx);
        }
    }

    #[test]
    fn full_rsj_contexts_collapse() {
        let law = PairLaw::enumerated(&SchemeSpec::rsj(5, 2), Budget::default()).unwrap();
        let ctx = law.contexts().unwrap();
        assert_eq!(ctx.len(), 1);
        assert_eq!(ctx[0].weight, Rational::one());
        assert_eq!(ctx[0].coords[0], CoordLaw::uniform_distinct(5));
    }

    #[test]
    fn fixed_generator_keeps_contexts() {
        let spec = SchemeSpec::rsj(5, 2).with_generator(vec![1, 1]);
        let law = PairLaw::enumerated(&spec, Budget::default()).unwrap();
        assert!(law.contexts().unwrap().len() > 1);
    }

    #[test]
    fn torus_factor_full_anchor() {
        // with q = r = 0 every factor is 1
        let p = Placement::Torus { midpoint: false };
        assert_eq!(
            p.pair_factor((0, 3), &Rational::zero(), &Rational::zero(), 5),
            Rational::one()
        );
        // single point marginal is the arc length
        assert_eq!(p.pair_factor((2, 4), &q(3, 10), &Rational::zero(), 5), q(7, 10));
    }

    #[test]
    fn jitter_cell_mass() {
        let p = Placement::Jitter;
        assert_eq!(p.cell_mass(1, &q(3, 10), 4), q(4, 5));
        assert_eq!(p.cell_mass(0, &q(3, 10), 4), Rational::zero());
        assert_eq!(p.cell_mass(2, &q(3, 10), 4), Rational::one());
    }

    #[test]
    fn budget_is_enforced() {
        let err = enumerate_discrete(&SchemeSpec::rsj(7, 3), Budget::new(1000)).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
        let err = PairLaw::enumerated(&SchemeSpec::rsj(7, 3), Budget::new(10)).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn merge_requires_same_shape() {
        let a = enumerate_discrete(&SchemeSpec::rsj(3, 1), Budget::default()).unwrap();
        let b = enumerate_discrete(&SchemeSpec::rsj(3, 2), Budget::default()).unwrap();
        assert!(a.merge(&b).is_err());
        let m = a.merge(&a).unwrap();
        assert_eq!(m.total(), 2 * a.total());
        assert_eq!(m.prob_at(1), a.prob_at(1));
    }
}
