use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{Randomness, Rational, RngStream};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Monotone {
    Increasing,
    Decreasing,
    None,
}

type Evaluator = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A test function on `[0,1)^d` with known monotonicity and, where
/// available, exact moments under the uniform law.
#[derive(Clone)]
pub struct Integrand {
    name: String,
    arity: usize,
    evaluator: Evaluator,
    monotone: Vec<Monotone>,
    exact_mean: Option<Rational>,
    exact_variance: Option<Rational>,
}

impl fmt::Debug for Integrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Integrand")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .field("monotone", &self.monotone)
            .field("exact_mean", &self.exact_mean)
            .field("exact_variance", &self.exact_variance)
            .finish()
    }
}

pub const LIBRARY: &[&str] = &["constant", "additive", "product", "box", "smooth"];

impl Integrand {
    pub fn new(
        name: impl Into<String>,
        arity: usize,
        evaluator: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        monotone: Vec<Monotone>,
    ) -> Self {
        Self {
            name: name.into(),
            arity,
            evaluator: Arc::new(evaluator),
            monotone,
            exact_mean: None,
            exact_variance: None,
        }
    }

    pub fn with_moments(mut self, mean: Rational, variance: Rational) -> Self {
        self.exact_mean = Some(mean);
        self.exact_variance = Some(variance);
        self
    }

    /// `f = c`.
    pub fn constant(dim: usize, c: Rational) -> Self {
        let v = c.to_f64();
        Self::new(
            format!("constant:{c}"),
            dim,
            move |_| v,
            vec![Monotone::Increasing; dim],
        )
        .with_moments(c, Rational::zero())
    }

    /// `f(u) = sum_i u_i`.
    pub fn additive(dim: usize) -> Self {
        Self::new("additive", dim, |u| u.iter().sum(), vec![Monotone::Increasing; dim])
            .with_moments(Rational::new(dim as i64, 2), Rational::new(dim as i64, 12))
    }

    /// `f(u) = prod_i u_i`.
    pub fn product(dim: usize) -> Self {
        let mean = Rational::new(1, 2).pow(dim as u32);
        let var = Rational::new(1, 3).pow(dim as u32) - Rational::new(1, 4).pow(dim as u32);
        Self::new("product", dim, |u| u.iter().product(), vec![Monotone::Increasing; dim]).with_moments(mean, var)
    }

    /// Indicator of the box `[x, 1)`.
    pub fn box_indicator(anchor: Vec<Rational>) -> Result<Self> {
        if anchor.is_empty() || anchor.iter().any(|x| x.is_negative() || *x >= Rational::one()) {
            return Err(Error::InvalidArgument("box anchor must lie in [0, 1)^d".into()));
        }
        let dim = anchor.len();
        let vol: Rational = anchor.iter().map(|x| Rational::one() - x).product();
        let var = &vol * &(Rational::one() - &vol);
        let name = format!(
            "box:{}",
            anchor.iter().map(Rational::to_string).collect::<Vec<_>>().join(",")
        );
        let xs: Vec<f64> = anchor.iter().map(Rational::to_f64).collect();
        Ok(Self::new(
            name,
            dim,
            move |u| {
                if u.iter().zip(&xs).all(|(a, x)| a >= x) {
                    1.0
                } else {
                    0.0
                }
            },
            vec![Monotone::Increasing; dim],
        )
        .with_moments(vol, var))
    }

    /// `f(u) = prod_i (1 + alpha (u_i - 1/2))` for `alpha` in `(0, 2)`.
    pub fn smooth(dim: usize, alpha: Rational) -> Result<Self> {
        if alpha <= Rational::zero() || alpha >= Rational::from(2u64) {
            return Err(Error::InvalidArgument(format!("smooth alpha {alpha} outside (0, 2)")));
        }
        let second = Rational::one() + &alpha * &alpha / Rational::from(12u64);
        let var = second.pow(dim as u32) - Rational::one();
        let a = alpha.to_f64();
        Ok(Self::new(
            format!("smooth:{alpha}"),
            dim,
            move |u| u.iter().map(|x| 1.0 + a * (x - 0.5)).product(),
            vec![Monotone::Increasing; dim],
        )
        .with_moments(Rational::one(), var))
    }

    /// Parses `name[:param]` from [`LIBRARY`]. `box:x` takes one anchor for
    /// every coordinate or a comma list; `smooth:alpha` and `constant:c` take
    /// a rational.
    pub fn by_name(spec: &str, dim: usize) -> Result<Self> {
        let (name, param) = match spec.split_once(':') {
            Some((n, p)) => (n.trim(), Some(p.trim())),
            None => (spec.trim(), None),
        };
        let rational = |p: &str| p.parse::<Rational>();
        match name {
            "constant" => Ok(Self::constant(dim, param.map_or(Ok(Rational::one()), rational)?)),
            "additive" => Ok(Self::additive(dim)),
            "product" => Ok(Self::product(dim)),
            "box" => {
                let anchor = match param {
                    None => vec![Rational::new(3, 10); dim],
                    Some(p) => {
                        let xs = p.split(',').map(rational).collect::<Result<Vec<_>>>()?;
                        match xs.len() {
                            1 => vec![xs[0].clone(); dim],
                            k if k == dim => xs,
                            k => {
                                return Err(Error::InvalidArgument(format!(
                                    "box anchor has {k} entries, expected 1 or {dim}"
                                )))
                            }
                        }
                    }
                };
                Self::box_indicator(anchor)
            }
            "smooth" => Self::smooth(dim, param.map_or(Ok(Rational::one()), rational)?),
            other => Err(Error::InvalidArgument(format!(
                "unknown integrand {other:?}; available: {}",
                LIBRARY.join(", ")
            ))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn monotone_flags(&self) -> &[Monotone] {
        &self.monotone
    }

    pub fn exact_mean(&self) -> Option<&Rational> {
        self.exact_mean.as_ref()
    }

    pub fn exact_variance(&self) -> Option<&Rational> {
        self.exact_variance.as_ref()
    }

    pub fn eval(&self, u: &[f64]) -> f64 {
        debug_assert_eq!(u.len(), self.arity);
        (self.evaluator)(u)
    }

    pub fn is_monotone(&self) -> bool {
        self.monotone.iter().all(|m| *m != Monotone::None)
    }

    /// Random probes: raise one flagged coordinate and check `f` moves the
    /// right way. Returns the first offending point.
    pub fn check_monotone(&self, probes: usize, rng: &mut RngStream) -> Result<()> {
        let d = self.arity;
        let mut u = vec![0.0; d];
        for _ in 0..probes {
            u.iter_mut().for_each(|x| *x = rng.uniform());
            let i = rng.below(d as u64) as usize;
            let base = self.eval(&u);
            let mut v = u.clone();
            v[i] += (1.0 - u[i]) * rng.uniform();
            let moved = self.eval(&v);
            let ok = match self.monotone[i] {
                Monotone::Increasing => moved >= base,
                Monotone::Decreasing => moved <= base,
                Monotone::None => true,
            };
            if !ok {
                return Err(Error::InvalidSpec(format!(
                    "{} is not {:?} in coordinate {i}: f({u:?}) = {base} but f({v:?}) = {moved}",
                    self.name, self.monotone[i]
                )));
            }
        }
        Ok(())
    }
}

/// The standard battery at dimension `dim`.
pub fn integrand_library(dim: usize) -> Vec<Integrand> {
    vec![
        Integrand::constant(dim, Rational::one()),
        Integrand::additive(dim),
        Integrand::product(dim),
        Integrand::box_indicator(vec![Rational::new(3, 10); dim]).expect("valid anchor"),
        Integrand::smooth(dim, Rational::one()).expect("valid alpha"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_moments() {
        let a = Integrand::additive(4);
        assert_eq!(a.exact_mean(), Some(&Rational::from(2u64)));
        assert_eq!(a.exact_variance(), Some(&Rational::new(1, 3)));
        let p = Integrand::product(2);
        assert_eq!(p.exact_mean(), Some(&Rational::new(1, 4)));
        assert_eq!(p.exact_variance(), Some(&Rational::new(7, 144)));
        let b = Integrand::by_name("box:0.3", 3).unwrap();
        assert_eq!(b.exact_mean(), Some(&Rational::new(343, 1000)));
        let s = Integrand::smooth(1, Rational::one()).unwrap();
        assert_eq!(s.exact_variance(), Some(&Rational::new(1, 12)));
    }

    #[test]
    fn evaluation() {
        assert_eq!(Integrand::additive(3).eval(&[0.1, 0.2, 0.3]), 0.1 + 0.2 + 0.3);
        let b = Integrand::by_name("box:1/2,1/4", 2).unwrap();
        assert_eq!(b.eval(&[0.5, 0.25]), 1.0);
        assert_eq!(b.eval(&[0.49, 0.9]), 0.0);
        assert_eq!(Integrand::by_name("constant:5/2", 2).unwrap().eval(&[0.0, 0.0]), 2.5);
    }

    #[test]
    fn library_is_monotone() {
        let mut rng = RngStream::new(9);
        for f in integrand_library(3) {
            assert!(f.is_monotone());
            f.check_monotone(1000, &mut rng).unwrap();
        }
        let bad = Integrand::new("bump", 1, |u| -u[0], vec![Monotone::Increasing]);
        assert!(bad.check_monotone(1000, &mut rng).is_err());
    }

    #[test]
    fn unknown_name_lists_library() {
        let err = Integrand::by_name("sine", 2).unwrap_err().to_string();
        assert!(err.contains("additive") && err.contains("smooth"), "{err}");
        assert!(Integrand::by_name("smooth:2", 2).is_err());
        assert!(Integrand::by_name("box:0.1,0.2,0.3", 2).is_err());
    }
}
