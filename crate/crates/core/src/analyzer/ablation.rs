use crate::analyzer::{law, Analyzer, AnchoredBox, PairLaw};
use crate::error::{Error, Result, Witness};
use crate::numeric::{torus_dist, Rational};
use crate::samplers::{SchemeKind, SchemeSpec, Shift};

impl Analyzer {
    /// `P(p_1 in [0, 1/N)^d)` for the lattice without a shift.
    pub fn no_shift_mass(&self, n: u64, dim: usize) -> Result<Rational> {
        let spec = SchemeSpec::rsj(n, dim).with_shift(Shift::None);
        let pmf = law::enumerate_discrete(&spec, self.budget())?;
        Ok(pmf.first_point_cell_prob(&vec![0; dim]))
    }

    /// `P(p_1 in Q | p_2 in R)` with `Q = [eps/2, 1)` and `R = [1 - eps/2, 1)`
    /// in coordinate `coord` and unrestricted elsewhere.
    ///
    /// Needs a continuous torus shift and no jitter. Fails with
    /// [`Error::HypothesisViolated`] if two points can be within `eps` of each
    /// other in that coordinate.
    pub fn shift_only_conditional(&self, spec: &SchemeSpec, epsilon: &Rational, coord: usize) -> Result<Rational> {
        let spec = spec.validated()?;
        let torus = spec.shift == Shift::ContinuousTorus && !spec.jitter;
        if !torus || !matches!(spec.kind, SchemeKind::RsjLattice | SchemeKind::Patterson) {
            return Err(Error::InvalidArgument(format!(
                "needs an rsj or patterson spec with shift=torus and jitter=off (got {spec})"
            )));
        }
        if *epsilon <= Rational::zero() || *epsilon > Rational::new(1, 2) {
            return Err(Error::InvalidArgument(format!("epsilon {epsilon} outside (0, 1/2]")));
        }
        if coord >= spec.dim {
            return Err(Error::InvalidArgument(format!(
                "coordinate {coord} outside 0..{}",
                spec.dim
            )));
        }

        let law = PairLaw::enumerated(&spec, self.budget())?;
        let nn = Rational::from(spec.n);
        for ctx in law.contexts().expect("enumerated law is a mixture") {
            for (c1, c2) in ctx.coords[coord].support() {
                // the shared shift and offset cancel in the distance
                let dist = torus_dist(&(Rational::from(c1) / &nn), &(Rational::from(c2) / &nn));
                if dist <= *epsilon {
                    return Err(Error::HypothesisViolated(Box::new(Witness {
                        coordinate: coord,
                        cells: (c1, c2),
                        distance: dist,
                        epsilon: epsilon.clone(),
                    })));
                }
            }
        }

        let half = epsilon / &Rational::from(2u64);
        let anchored = |a: Rational| {
            let mut anchor = vec![Rational::zero(); spec.dim];
            anchor[coord] = a;
            AnchoredBox::new(anchor)
        };
        let q = anchored(half.clone())?;
        let r = anchored(Rational::one() - &half)?;
        let joint = law.box_prob(&q, &r)?;
        let p_r = law.box_prob(&AnchoredBox::full(spec.dim), &r)?;
        Ok(joint / p_r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_shift_mass_is_one_over_n() {
        let a = Analyzer::default();
        assert_eq!(a.no_shift_mass(5, 2).unwrap(), Rational::new(1, 5));
        assert_eq!(a.no_shift_mass(3, 3).unwrap(), Rational::new(1, 3));
        assert_eq!(a.no_shift_mass(7, 1).unwrap(), Rational::new(1, 7));
    }

    fn torus(n: u64) -> SchemeSpec {
        SchemeSpec::rsj(n, 2)
            .with_shift(Shift::ContinuousTorus)
            .with_jitter(false)
    }

    #[test]
    fn conditional_is_one() {
        let a = Analyzer::default();
        assert_eq!(
            a.shift_only_conditional(&torus(5), &Rational::new(1, 10), 1).unwrap(),
            Rational::one()
        );
        assert_eq!(
            a.shift_only_conditional(&torus(7), &Rational::new(1, 14), 1).unwrap(),
            Rational::one()
        );
        let patterson = SchemeSpec::patterson(5, 2).with_shift(Shift::ContinuousTorus);
        assert_eq!(
            a.shift_only_conditional(&patterson, &Rational::new(1, 10), 0).unwrap(),
            Rational::one()
        );
    }

    #[test]
    fn hypothesis_and_argument_errors() {
        let a = Analyzer::default();
        let err = a
            .shift_only_conditional(&torus(5), &Rational::new(1, 5), 1)
            .unwrap_err();
        assert!(matches!(err, Error::HypothesisViolated(_)), "{err}");
        assert!(a
            .shift_only_conditional(&SchemeSpec::rsj(5, 2), &Rational::new(1, 10), 1)
            .is_err());
        assert!(a.shift_only_conditional(&torus(5), &Rational::zero(), 1).is_err());
        assert!(a.shift_only_conditional(&torus(5), &Rational::new(1, 10), 2).is_err());
    }
}
