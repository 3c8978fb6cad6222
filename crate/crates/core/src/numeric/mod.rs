//! Exact arithmetic substrate: prime-field residues, rationals, circle geometry
//! and the deterministic random stream shared by every sampler.

mod circle;
mod rational;
mod residue;
pub(crate) mod rng;

pub use circle::{circular_overlap, torus_dist, CircularInterval};
pub use rational::Rational;
pub use residue::{is_prime, mod_inverse, Residue};
pub use rng::{Randomness, RngStream};
