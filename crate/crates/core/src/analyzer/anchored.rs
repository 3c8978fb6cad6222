use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::Rational;

/// The box `[anchor, 1)` anchored at the upper corner of the unit cube.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Rational>", into = "Vec<Rational>")]
pub struct AnchoredBox {
    anchor: Vec<Rational>,
}

impl AnchoredBox {
    pub fn new(anchor: Vec<Rational>) -> Result<Self> {
        if anchor.is_empty() {
            return Err(Error::InvalidArgument(
                "anchored box needs at least one coordinate".into(),
            ));
        }
        let one = Rational::one();
        if let Some(a) = anchor.iter().find(|a| a.is_negative() || **a >= one) {
            return Err(Error::InvalidArgument(format!("anchor coordinate {a} outside [0, 1)")));
        }
        Ok(Self { anchor })
    }

    /// `[0, 1)^d`.
    pub fn full(dim: usize) -> Self {
        Self {
            anchor: vec![Rational::zero(); dim],
        }
    }

    /// `[a, 1)^d`.
    pub fn cube(a: Rational, dim: usize) -> Result<Self> {
        Self::new(vec![a; dim])
    }

    pub fn dim(&self) -> usize {
        self.anchor.len()
    }

    pub fn anchor(&self) -> &[Rational] {
        &self.anchor
    }

    /// Lebesgue measure `prod (1 - anchor_i)`.
    pub fn volume(&self) -> Rational {
        self.anchor.iter().map(|a| Rational::one() - a).product()
    }

    pub fn contains(&self, point: &[Rational]) -> bool {
        point.len() == self.dim() && point.iter().zip(&self.anchor).all(|(x, a)| x >= a)
    }
}

impl TryFrom<Vec<Rational>> for AnchoredBox {
    type Error = Error;
    fn try_from(v: Vec<Rational>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<AnchoredBox> for Vec<Rational> {
    fn from(b: AnchoredBox) -> Self {
        b.anchor
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn volume_and_validation() {
        let b = AnchoredBox::cube(Rational::new(3, 5), 2).unwrap();
        assert_eq!(b.volume(), Rational::new(4, 25));
        assert_eq!(AnchoredBox::full(3).volume(), Rational::one());
        assert!(AnchoredBox::new(vec![Rational::one()]).is_err());
        assert!(AnchoredBox::new(vec![Rational::new(-1, 2)]).is_err());
        assert!(AnchoredBox::new(vec![]).is_err());
        assert!(b.contains(&[Rational::new(3, 5), Rational::new(4, 5)]));
        assert!(!b.contains(&[Rational::new(1, 5), Rational::new(4, 5)]));
    }

    #[test]
    fn serde_as_list() {
        let b = AnchoredBox::cube(Rational::new(3, 5), 2).unwrap();
        assert_eq!(serde_json::to_string(&b).unwrap(), r#"["3/5","3/5"]"#);
        let bad: std::result::Result<AnchoredBox, _> = serde_json::from_str(r#"["1"]"#);
        assert!(bad.is_err());
    }
}
