use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::is_prime;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SchemeKind {
    /// One-dimensional simple stratified sampling.
    #[serde(rename = "stratified")]
    Stratified1d,
    /// Latin hypercube sampling.
    #[serde(rename = "lhs")]
    Lhs,
    /// Patterson's lattice sampling: Latin cells, midpoint offsets.
    #[serde(rename = "patterson")]
    Patterson,
    /// Randomly shifted and jittered rank-1 lattice.
    #[serde(rename = "rsj")]
    RsjLattice,
}

impl SchemeKind {
    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Stratified1d => "stratified",
            SchemeKind::Lhs => "lhs",
            SchemeKind::Patterson => "patterson",
            SchemeKind::RsjLattice => "rsj",
        }
    }
}

impl FromStr for SchemeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stratified" | "stratified1d" => Ok(SchemeKind::Stratified1d),
            "lhs" => Ok(SchemeKind::Lhs),
            "patterson" => Ok(SchemeKind::Patterson),
            "rsj" | "rsj_lattice" => Ok(SchemeKind::RsjLattice),
            _ => Err(Error::Parse(format!(
                "unknown scheme {s:?} (expected stratified, lhs, patterson or rsj)"
            ))),
        }
    }
}

/// How the generating vector of a rank-1 lattice is chosen.
///
/// Fixed coordinates are field elements `k` standing for `k / N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    Random,
    Fixed(Vec<u64>),
}

impl Serialize for Generator {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Generator::Random => serializer.serialize_str("random"),
            Generator::Fixed(g) => g.serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for Generator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Name(String),
            Vector(Vec<u64>),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Name(s) if s == "random" => Ok(Generator::Random),
            Repr::Name(s) => Err(serde::de::Error::custom(format!(
                "generator must be \"random\" or an integer vector, got {s:?}"
            ))),
            Repr::Vector(v) => Ok(Generator::Fixed(v)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Shift {
    /// Uniform on the `1/N` grid.
    #[serde(rename = "grid")]
    Grid,
    /// Uniform on the whole torus `[0, 1)^d`.
    #[serde(rename = "torus")]
    ContinuousTorus,
    #[serde(rename = "none")]
    None,
}

impl Shift {
    pub fn name(self) -> &'static str {
        match self {
            Shift::Grid => "grid",
            Shift::ContinuousTorus => "torus",
            Shift::None => "none",
        }
    }
}

impl FromStr for Shift {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grid" => Ok(Shift::Grid),
            "torus" | "continuous_torus" => Ok(Shift::ContinuousTorus),
            "none" => Ok(Shift::None),
            _ => Err(Error::Parse(format!(
                "unknown shift {s:?} (expected grid, torus or none)"
            ))),
        }
    }
}

/// Declarative description of a sampling scheme, including ablation flags.
///
/// Fields a kind does not use are normalized to that kind's defaults by
/// [`SchemeSpec::validated`]. Patterson sampling additionally accepts a
/// continuous torus shift, which rotates the midpoint set uniformly.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SchemeSpec {
    pub kind: SchemeKind,
    pub n: u64,
    pub dim: usize,
    pub generator: Generator,
    pub shift: Shift,
    pub jitter: bool,
}

impl SchemeSpec {
    pub fn stratified(n: u64) -> Self {
        Self {
            kind: SchemeKind::Stratified1d,
            n,
            dim: 1,
            generator: Generator::Random,
            shift: Shift::None,
            jitter: true,
        }
    }

    pub fn lhs(n: u64, dim: usize) -> Self {
        Self {
            kind: SchemeKind::Lhs,
            dim,
            ..Self::stratified(n)
        }
    }

    pub fn patterson(n: u64, dim: usize) -> Self {
        Self {
            kind: SchemeKind::Patterson,
            jitter: false,
            ..Self::lhs(n, dim)
        }
    }

    /// The full randomization: random generator, grid shift, jitter.
    pub fn rsj(n: u64, dim: usize) -> Self {
        Self {
            kind: SchemeKind::RsjLattice,
            n,
            dim,
            generator: Generator::Random,
            shift: Shift::Grid,
            jitter: true,
        }
    }

    pub fn with_generator(mut self, g: Vec<u64>) -> Self {
        self.generator = Generator::Fixed(g);
        self
    }

    pub fn with_shift(mut self, shift: Shift) -> Self {
        self.shift = shift;
        self
    }

    pub fn with_jitter(mut self, jitter: bool) -> Self {
        self.jitter = jitter;
        self
    }

    /// Checks invariants and returns the normalized spec.
    pub fn validated(&self) -> Result<Self> {
        if self.n == 0 {
            return Err(Error::InvalidSpec("N must be at least 1".into()));
        }
        if self.dim == 0 {
            return Err(Error::InvalidSpec("dimension must be at least 1".into()));
        }
        let mut spec = self.clone();
        match spec.kind {
            SchemeKind::Stratified1d | SchemeKind::Lhs => {
                if spec.kind == SchemeKind::Stratified1d && spec.dim != 1 {
                    return Err(Error::InvalidSpec(
                        "stratified sampling is one-dimensional (dim must be 1)".into(),
                    ));
                }
                spec.generator = Generator::Random;
                spec.shift = Shift::None;
                spec.jitter = true;
            }
            SchemeKind::Patterson => {
                spec.generator = Generator::Random;
                spec.jitter = false;
                if spec.shift == Shift::Grid {
                    spec.shift = Shift::None;
                }
            }
            SchemeKind::RsjLattice => {
                if !is_prime(spec.n) {
                    return Err(Error::InvalidSpec(format!("N must be prime for rsj (got {})", spec.n)));
                }
                if let Generator::Fixed(g) = &mut spec.generator {
                    if g.len() != spec.dim {
                        return Err(Error::InvalidSpec(format!(
                            "generator has {} coordinates but dim is {}",
                            g.len(),
                            spec.dim
                        )));
                    }
                    for (index, c) in g.iter_mut().enumerate() {
                        *c %= spec.n;
                        if *c == 0 {
                            return Err(Error::DegenerateGenerator { index, modulus: spec.n });
                        }
                    }
                }
                if spec.shift == Shift::ContinuousTorus && spec.jitter {
                    return Err(Error::Unsupported("continuous torus shift combined with jitter".into()));
                }
            }
        }
        Ok(spec)
    }

    pub fn is_full_rsj(&self) -> bool {
        self.kind == SchemeKind::RsjLattice
            && self.generator == Generator::Random
            && self.shift == Shift::Grid
            && self.jitter
    }

    /// Whether every point is marginally uniform on `[0, 1)^d`.
    pub fn is_sampling_scheme(&self) -> bool {
        match self.kind {
            SchemeKind::Stratified1d | SchemeKind::Lhs => true,
            SchemeKind::Patterson => self.shift == Shift::ContinuousTorus,
            SchemeKind::RsjLattice => match self.shift {
                Shift::Grid => self.jitter,
                Shift::ContinuousTorus => true,
                Shift::None => false,
            },
        }
    }
}

impl fmt::Display for SchemeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={} dim={}", self.kind.name(), self.n, self.dim)?;
        if self.kind == SchemeKind::RsjLattice {
            match &self.generator {
                Generator::Random => write!(f, " generator=random")?,
                Generator::Fixed(g) => {
                    let parts: Vec<String> = g.iter().map(u64::to_string).collect();
                    write!(f, " generator={}", parts.join(","))?
                }
            }
        }
        if matches!(self.kind, SchemeKind::RsjLattice | SchemeKind::Patterson) {
            write!(f, " shift={}", self.shift.name())?;
        }
        if self.kind == SchemeKind::RsjLattice {
            write!(f, " jitter={}", if self.jitter { "on" } else { "off" })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rsj_requires_prime() {
        let err = SchemeSpec::rsj(6, 2).validated().unwrap_err();
        assert!(err.to_string().contains("N must be prime"), "{err}");
        assert!(SchemeSpec::rsj(2, 3).validated().is_ok());
    }

    #[test]
    fn degenerate_generator_rejected() {
        let err = SchemeSpec::rsj(5, 2)
            .with_generator(vec![1, 5])
            .validated()
            .unwrap_err();
        assert!(matches!(err, Error::DegenerateGenerator { index: 1, modulus: 5 }));
        let err = SchemeSpec::rsj(5, 2).with_generator(vec![1]).validated().unwrap_err();
        assert!(matches!(err, Error::InvalidSpec(_)));
    }

    #[test]
    fn stratified_is_one_dimensional() {
        let mut s = SchemeSpec::stratified(4);
        s.dim = 2;
        assert!(s.validated().is_err());
        assert!(SchemeSpec::stratified(0).validated().is_err());
    }

    #[test]
    fn unused_fields_normalized() {
        let s = SchemeSpec::lhs(4, 2)
            .with_generator(vec![1, 2])
            .with_shift(Shift::Grid)
            .with_jitter(false)
            .validated()
            .unwrap();
        assert_eq!(s, SchemeSpec::lhs(4, 2));
        let p = SchemeSpec::patterson(5, 2).with_shift(Shift::Grid).validated().unwrap();
        assert_eq!(p.shift, Shift::None);
    }

    #[test]
    fn serde_shapes() {
        let s = SchemeSpec::rsj(5, 2).with_generator(vec![1, 1]);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(
            json,
            r#"{"kind":"rsj","n":5,"dim":2,"generator":[1,1],"shift":"grid","jitter":true}"#
        );
        let back: SchemeSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        let r: SchemeSpec =
            serde_json::from_str(r#"{"kind":"rsj","n":5,"dim":2,"generator":"random","shift":"torus","jitter":false}"#)
                .unwrap();
        assert_eq!(r.shift, Shift::ContinuousTorus);
        assert_eq!(r.generator, Generator::Random);
    }

    #[test]
    fn sampling_scheme_flags() {
        assert!(SchemeSpec::rsj(5, 2).is_sampling_scheme());
        assert!(!SchemeSpec::rsj(5, 2).with_shift(Shift::None).is_sampling_scheme());
        assert!(!SchemeSpec::rsj(5, 2).with_jitter(false).is_sampling_scheme());
        assert!(!SchemeSpec::patterson(5, 2).is_sampling_scheme());
        assert!(SchemeSpec::lhs(5, 2).is_sampling_scheme());
    }
}
