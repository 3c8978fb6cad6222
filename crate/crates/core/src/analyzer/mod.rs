//! Exact pairwise-dependence analysis.
//!
//! Every probability here is a [`Rational`] obtained by exhaustive
//! enumeration or by a closed form; nothing is sampled.

mod ablation;
mod anchored;
mod law;
mod scan;
mod stratified;
mod structure;

pub use anchored::AnchoredBox;
pub use law::{CellPairPmf, Context, CoordLaw, PairLaw, Placement};
pub use scan::{DependenceReport, GridDescription, PairRecord, Violation};
pub use stratified::stratified_pair_box_prob;
pub use structure::{CopulaCheck, IndependenceCheck, TripleCounts};

use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::samplers::SchemeSpec;

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Cap on elementary terms an exact computation may visit. Operations above
/// the cap fail with [`Error::BudgetExceeded`]; they never fall back to
/// sampling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(u64);

impl Budget {
    pub fn new(limit: u64) -> Self {
        Self(limit)
    }

    /// Reads `ND_BUDGET`, falling back to the default.
    pub fn from_env() -> Result<Self> {
        match std::env::var("ND_BUDGET") {
            Ok(v) => v
                .trim()
                .parse()
                .map(Self)
                .map_err(|_| Error::Parse(format!("ND_BUDGET={v:?} is not an integer"))),
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn limit(self) -> u64 {
        self.0
    }

    pub fn check(self, required: u128) -> Result<()> {
        if required > self.0 as u128 {
            Err(Error::BudgetExceeded {
                required,
                budget: self.0,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self(DEFAULT_BUDGET)
    }
}

/// Entry point for the exact analyses, carrying the enumeration budget.
#[derive(Clone, Copy, Debug, Default)]
pub struct Analyzer {
    budget: Budget,
}

impl Analyzer {
    pub fn new(budget: Budget) -> Self {
        Self { budget }
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    /// Exhaustive cell-pair pmf of the discrete model (jitter ignored).
    ///
    /// For the lattice this visits every generator in `(F*)^d` (or the fixed
    /// one), every shift in `F^d` (or none) and every ordered index pair.
    pub fn discrete_pair_pmf(&self, spec: &SchemeSpec) -> Result<PairLaw> {
        let pmf = law::enumerate_discrete(spec, self.budget)?;
        Ok(PairLaw::from_pmf(pmf, Placement::for_spec(&spec.validated()?)))
    }

    /// The discrete lattice enumeration split into `parts` partial pmfs by
    /// generator; merging them in any order gives the full pmf.
    pub fn discrete_pmf_partitions(&self, spec: &SchemeSpec, parts: u64) -> Result<Vec<CellPairPmf>> {
        let plan = law::LatticePlan::new(spec, self.budget)?;
        Ok(plan.partitions(parts).into_iter().map(|r| plan.enumerate(r)).collect())
    }

    /// Closed form for the schemes that have one, enumeration otherwise.
    pub fn pair_law(&self, spec: &SchemeSpec) -> Result<PairLaw> {
        PairLaw::for_spec(spec, self.budget)
    }

    /// Enumerated law, even where a closed form exists.
    pub fn enumerated_pair_law(&self, spec: &SchemeSpec) -> Result<PairLaw> {
        PairLaw::enumerated(spec, self.budget)
    }

    /// Exact `P(p_1 in Q, p_2 in R)`.
    pub fn pair_box_prob(&self, spec: &SchemeSpec, q: &AnchoredBox, r: &AnchoredBox) -> Result<Rational> {
        self.pair_law(spec)?.box_prob(q, r)
    }

    /// Exact `P(p_1 in Q) P(p_2 in R)` under the scheme's own marginals.
    pub fn marginal_product(&self, spec: &SchemeSpec, q: &AnchoredBox, r: &AnchoredBox) -> Result<Rational> {
        self.pair_law(spec)?.marginal_product(q, r)
    }
}
