use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::samplers::{SchemeKind, SchemeSpec, Shift};

/// Bits of sub-cell resolution carried by every coordinate.
pub const FRAC_BITS: u32 = 53;

/// `N` points in `[0, 1)^d`, stored exactly.
///
/// Coordinate `(j, i)` is `numerator(j, i) / (N * 2^53)`, so the integer part
/// of `numerator >> 53` is the `1/N` cell and the low 53 bits the offset
/// inside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    spec: SchemeSpec,
    seed: Option<u64>,
    coords: Vec<u128>,
}

impl PointSet {
    /// Assembles a point set and re-checks every structural invariant the
    /// scheme guarantees.
    pub fn from_parts(spec: SchemeSpec, seed: Option<u64>, coords: Vec<u128>) -> Result<Self> {
        let spec = spec.validated()?;
        let set = Self { spec, seed, coords };
        set.check()?;
        Ok(set)
    }

    pub(crate) fn new_unchecked(spec: SchemeSpec, seed: Option<u64>, coords: Vec<u128>) -> Self {
        Self { spec, seed, coords }
    }

    fn check(&self) -> Result<()> {
        let (n, d) = (self.n(), self.dim());
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if self.coords.len() != n * d {
            return bad(format!(
                "expected {} coordinates for {n} points in dimension {d}, found {}",
                n * d,
                self.coords.len()
            ));
        }
        let den = self.denominator();
        if let Some(c) = self.coords.iter().find(|&&c| c >= den) {
            return bad(format!("coordinate numerator {c} outside [0, 1)"));
        }
        let latin = matches!(self.spec.kind, SchemeKind::Stratified1d | SchemeKind::Lhs)
            || (self.spec.kind == SchemeKind::Patterson && self.spec.shift == Shift::None);
        if latin && !self.is_latin() {
            return bad("Latin property violated: some coordinate misses a stratum".into());
        }
        if self.spec.kind == SchemeKind::Patterson && self.spec.shift == Shift::None {
            let half = 1u128 << (FRAC_BITS - 1);
            if self.coords.iter().any(|c| c & ((1u128 << FRAC_BITS) - 1) != half) {
                return bad("lattice sampling coordinates must be stratum midpoints".into());
            }
        }
        if self.spec.kind == SchemeKind::RsjLattice
            && !self.spec.jitter
            && self.spec.shift != Shift::ContinuousTorus
            && !self.on_grid()
        {
            return bad("unjittered lattice points must lie on the 1/N grid".into());
        }
        Ok(())
    }

    pub fn spec(&self) -> &SchemeSpec {
        &self.spec
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn n(&self) -> usize {
        self.spec.n as usize
    }

    pub fn dim(&self) -> usize {
        self.spec.dim
    }

    pub fn denominator(&self) -> u128 {
        (self.spec.n as u128) << FRAC_BITS
    }

    pub fn numerators(&self) -> &[u128] {
        &self.coords
    }

    pub fn numerator(&self, point: usize, coord: usize) -> u128 {
        self.coords[point * self.dim() + coord]
    }

    /// Zero-based stratum index of a coordinate.
    pub fn cell(&self, point: usize, coord: usize) -> u64 {
        (self.numerator(point, coord) >> FRAC_BITS) as u64
    }

    pub fn coordinate(&self, point: usize, coord: usize) -> Rational {
        Rational::new(self.numerator(point, coord), self.denominator())
    }

    pub fn value(&self, point: usize, coord: usize) -> f64 {
        self.numerator(point, coord) as f64 / self.denominator() as f64
    }

    pub fn point(&self, point: usize) -> Vec<f64> {
        (0..self.dim()).map(|i| self.value(point, i)).collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.n()).map(move |j| self.point(j))
    }

    /// Every coordinate hits each of the `N` strata exactly once.
    pub fn is_latin(&self) -> bool {
        let n = self.n();
        (0..self.dim()).all(|i| {
            let mut seen = vec![false; n];
            (0..n).all(|j| {
                let c = self.cell(j, i) as usize;
                c < n && !std::mem::replace(&mut seen[c], true)
            })
        })
    }

    /// All coordinates are multiples of `1/N`.
    pub fn on_grid(&self) -> bool {
        let mask = (1u128 << FRAC_BITS) - 1;
        self.coords.iter().all(|c| c & mask == 0)
    }
}
