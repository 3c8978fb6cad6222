use crate::error::{Error, Result};
use crate::numeric::Rational;

/// Arc `[start, start + length)` on the unit circle `R/Z`.
///
/// When `start + length > 1` the arc wraps through `0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircularInterval {
    start: Rational,
    length: Rational,
}

impl CircularInterval {
    /// `start` is reduced mod 1; `length` must lie in `[0, 1]`.
    pub fn new(start: Rational, length: Rational) -> Result<Self> {
        if length.is_negative() || length > Rational::one() {
            return Err(Error::InvalidArgument(format!("arc length {length} outside [0, 1]")));
        }
        Ok(Self {
            start: start.fract_mod1(),
            length,
        })
    }

    pub fn full() -> Self {
        Self {
            start: Rational::zero(),
            length: Rational::one(),
        }
    }

    pub fn start(&self) -> &Rational {
        &self.start
    }

    pub fn length(&self) -> &Rational {
        &self.length
    }

    /// The arc as at most two half-open pieces of `[0, 1)`.
    fn pieces(&self) -> Vec<(Rational, Rational)> {
        let end = &self.start + &self.length;
        let one = Rational::one();
        if end <= one {
            vec![(self.start.clone(), end)]
        } else {
            vec![(self.start.clone(), one.clone()), (Rational::zero(), end - one)]
        }
    }
}

/// Lebesgue measure of `a ∩ b` on the circle.
pub fn circular_overlap(a: &CircularInterval, b: &CircularInterval) -> Rational {
    let mut total = Rational::zero();
    for (a0, a1) in a.pieces() {
        for (b0, b1) in b.pieces() {
            let lo = a0.clone().max(b0.clone());
            let hi = a1.clone().min(b1);
            if hi > lo {
                total = total + (hi - lo);
            }
        }
    }
    total
}

/// Shorter arc length between `x` and `y` on the circle, in `[0, 1/2]`.
pub fn torus_dist(x: &Rational, y: &Rational) -> Rational {
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    let direct = hi - lo;
    let around = Rational::one() - &direct;
    direct.min(around)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn arc(s: Rational, l: Rational) -> CircularInterval {
        CircularInterval::new(s, l).unwrap()
    }

    #[test]
    fn dist_examples() {
        assert_eq!(torus_dist(&q(0, 1), &q(1, 2)), q(1, 2));
        assert_eq!(torus_dist(&q(3, 7), &q(3, 7)), q(0, 1));
        assert_eq!(torus_dist(&q(1, 10), &q(9, 10)), q(2, 10));
    }

    #[test]
    fn dist_grid_properties() {
        let grid: Vec<Rational> = (0..20).map(|k| q(k, 20)).collect();
        let half = q(1, 2);
        for x in &grid {
            for y in &grid {
                let dxy = torus_dist(x, y);
                assert!(dxy <= half);
                assert_eq!(dxy, torus_dist(y, x));
                for z in &grid {
                    assert!(dxy <= torus_dist(x, z) + torus_dist(z, y));
                }
            }
        }
    }

    #[test]
    fn overlap_examples() {
        let a = arc(q(0, 1), q(1, 2));
        let b = arc(q(1, 4), q(1, 2));
        assert_eq!(circular_overlap(&a, &b), q(1, 4));
        assert_eq!(circular_overlap(&a, &a), q(1, 2));

        // [3/4, 1/4) wraps through zero
        let wrap = arc(q(3, 4), q(1, 2));
        let small = arc(q(0, 1), q(1, 8));
        assert_eq!(circular_overlap(&wrap, &small), q(1, 8));
    }

    #[test]
    fn overlap_symmetric_and_full() {
        let grid: Vec<Rational> = (0..12).map(|k| q(k, 12)).collect();
        let full = CircularInterval::full();
        for s in &grid {
            for l in &grid {
                let a = arc(s.clone(), l.clone());
                assert_eq!(circular_overlap(&a, &full), l.clone());
                for t in &grid {
                    let b = arc(t.clone(), q(5, 12));
                    let ab = circular_overlap(&a, &b);
                    assert_eq!(ab, circular_overlap(&b, &a));
                    assert!(ab <= l.clone().min(q(5, 12)));
                }
            }
        }
    }

    #[test]
    fn start_reduced_and_length_checked() {
        let a = arc(q(5, 4), q(1, 2));
        assert_eq!(a.start(), &q(1, 4));
        assert!(CircularInterval::new(q(0, 1), q(3, 2)).is_err());
        assert!(CircularInterval::new(q(0, 1), q(-1, 2)).is_err());
    }
}
