//! Point-set generators for every scheme, including the lattice ablations.
//!
//! Randomness is consumed in a pinned order so that a `(spec, seed)` pair
//! always reproduces the same points:
//!
//! * stratified / LHS: one permutation per coordinate, then the in-cell
//!   offsets point by point;
//! * Patterson: torus shift (if any), then one permutation per coordinate;
//! * RSJ lattice: generator, shift, permutation, then jitters point by point.

mod io;
mod pointset;
mod spec;

pub use io::{read_csv, read_json, write_csv, write_json};
pub use pointset::{PointSet, FRAC_BITS};
pub use spec::{Generator, SchemeKind, SchemeSpec, Shift};

use crate::error::{Error, Result};
use crate::numeric::rng::permutation;
use crate::numeric::{Randomness, RngStream};

/// Generates the point set for `spec` from a fresh stream seeded with `seed`.
pub fn generate(spec: &SchemeSpec, seed: u64) -> Result<PointSet> {
    let spec = spec.validated()?;
    let coords = sample_coords(&spec, &mut RngStream::new(seed));
    Ok(PointSet::new_unchecked(spec, Some(seed), coords))
}

/// Generates from an arbitrary randomness source. The returned set records
/// no seed.
pub fn generate_with<R: Randomness + ?Sized>(spec: &SchemeSpec, rng: &mut R) -> Result<PointSet> {
    let spec = spec.validated()?;
    let coords = sample_coords(&spec, rng);
    Ok(PointSet::new_unchecked(spec, None, coords))
}

/// One point in each stratum `[(j-1)/N, j/N)`, strata visited in uniform random order.
pub fn stratified_1d(n: u64, rng: &mut RngStream) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::InvalidSpec("N must be at least 1".into()));
    }
    generate_with(&SchemeSpec::stratified(n), rng)
}

pub fn lhs(n: u64, dim: usize, rng: &mut RngStream) -> Result<PointSet> {
    generate_with(&SchemeSpec::lhs(n, dim), rng)
}

/// Lattice sampling: LHS with every in-cell offset fixed at the midpoint.
pub fn patterson(n: u64, dim: usize, rng: &mut RngStream) -> Result<PointSet> {
    generate_with(&SchemeSpec::patterson(n, dim), rng)
}

/// The rank-1 lattice `{(j - 1) g mod 1}` in index order, `g = generator / N`.
pub fn rank1_lattice_points(generator: &[u64], n: u64) -> Result<PointSet> {
    let spec = SchemeSpec::rsj(n, generator.len())
        .with_generator(generator.to_vec())
        .with_shift(Shift::None)
        .with_jitter(false)
        .validated()?;
    let Generator::Fixed(g) = &spec.generator else {
        unreachable!("fixed generator survives validation")
    };
    let coords = (0..n)
        .flat_map(|j| g.iter().map(move |&gi| ((j * gi % n) as u128) << FRAC_BITS))
        .collect();
    Ok(PointSet::new_unchecked(spec, None, coords))
}

/// Randomly shifted and jittered rank-1 lattice, honoring the ablation flags.
pub fn rsj_rank1(spec: &SchemeSpec, rng: &mut RngStream) -> Result<PointSet> {
    if spec.kind != SchemeKind::RsjLattice {
        return Err(Error::InvalidSpec(format!(
            "rsj_rank1 needs an rsj spec, got {}",
            spec.kind.name()
        )));
    }
    generate_with(spec, rng)
}

/// Draws coordinates for an already validated spec.
fn sample_coords<R: Randomness + ?Sized>(spec: &SchemeSpec, rng: &mut R) -> Vec<u128> {
    let n = spec.n;
    let d = spec.dim;
    let den = (n as u128) << FRAC_BITS;
    let mut coords = vec![0u128; n as usize * d];
    match spec.kind {
        SchemeKind::Stratified1d | SchemeKind::Lhs => {
            let perms: Vec<Vec<u64>> = (0..d).map(|_| permutation(n as usize, rng)).collect();
            for j in 0..n as usize {
                for i in 0..d {
                    let offset = rng.fraction53() as u128;
                    coords[j * d + i] = ((perms[i][j] as u128) << FRAC_BITS) + offset;
                }
            }
        }
        SchemeKind::Patterson => {
            let shift = draw_shift(spec, rng);
            let perms: Vec<Vec<u64>> = (0..d).map(|_| permutation(n as usize, rng)).collect();
            for j in 0..n as usize {
                for i in 0..d {
                    let mid = ((2 * perms[i][j] as u128 + 1) << (FRAC_BITS - 1)) + shift[i];
                    coords[j * d + i] = mid % den;
                }
            }
        }
        SchemeKind::RsjLattice => {
            let g: Vec<u64> = match &spec.generator {
                Generator::Random => (0..d).map(|_| 1 + rng.below(n - 1)).collect(),
                Generator::Fixed(g) => g.clone(),
            };
            let shift = draw_shift(spec, rng);
            let perm = permutation(n as usize, rng);
            for (j, &m) in perm.iter().enumerate() {
                for i in 0..d {
                    let lattice = ((m as u128 * g[i] as u128) % n as u128) << FRAC_BITS;
                    let jitter = if spec.jitter { rng.fraction53() as u128 } else { 0 };
                    coords[j * d + i] = (lattice + shift[i] + jitter) % den;
                }
            }
        }
    }
    coords
}

/// Per-coordinate shift as a numerator over `N * 2^53`.
fn draw_shift<R: Randomness + ?Sized>(spec: &SchemeSpec, rng: &mut R) -> Vec<u128> {
    let n = spec.n as u128;
    (0..spec.dim)
        .map(|_| match spec.shift {
            Shift::Grid => (rng.below(spec.n) as u128) << FRAC_BITS,
            Shift::ContinuousTorus => rng.fraction53() as u128 * n,
            Shift::None => 0,
        })
        .collect()
}
