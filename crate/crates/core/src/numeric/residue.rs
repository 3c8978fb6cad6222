use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Trial-division primality test. Moduli in this crate stay small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// An element of the prime field `F_N = {0, .., N-1}`.
///
/// Stores the field-scaled integer; the `1/N` rescaling onto the torus happens
/// only when points are materialized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    /// Builds `value mod modulus`, rejecting composite moduli.
    pub fn new(value: u64, modulus: u64) -> Result<Self> {
        if !is_prime(modulus) {
            return Err(Error::NotPrime(modulus));
        }
        Ok(Self {
            value: value % modulus,
            modulus,
        })
    }

    pub fn from_signed(value: i64, modulus: u64) -> Result<Self> {
        let m = modulus as i128;
        let v = (value as i128).rem_euclid(m.max(1)) as u64;
        Self::new(v, modulus)
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inverse(self) -> Result<Self> {
        if self.value == 0 {
            return Err(Error::NoInverse(self.value, self.modulus));
        }
        let (mut old_r, mut r) = (self.value as i128, self.modulus as i128);
        let (mut old_s, mut s) = (1i128, 0i128);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        debug_assert_eq!(old_r, 1);
        let m = self.modulus as i128;
        Ok(Self {
            value: old_s.rem_euclid(m) as u64,
            modulus: self.modulus,
        })
    }

    fn same_field(self, other: Self) {
        assert_eq!(self.modulus, other.modulus, "residues from different fields");
    }
}

/// Inverse of a nonzero residue.
pub fn mod_inverse(a: Residue) -> Result<Residue> {
    a.inverse()
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Self) -> Self {
        self.same_field(rhs);
        let v = (self.value as u128 + rhs.value as u128) % self.modulus as u128;
        Self {
            value: v as u64,
            modulus: self.modulus,
        }
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Self {
        Self {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Self) -> Self {
        self.same_field(rhs);
        let v = (self.value as u128 * rhs.value as u128) % self.modulus as u128;
        Self {
            value: v as u64,
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(257));
        assert!(!is_prime(91));
    }

    #[test]
    fn inverse_examples() {
        let inv = |a, n| mod_inverse(Residue::new(a, n).unwrap()).unwrap().value();
        assert_eq!(inv(3, 5), 2);
        assert_eq!(inv(1, 11), 1);
        assert_eq!(inv(4, 7), 2);
    }

    #[test]
    fn inverse_exhaustive() {
        for n in [2u64, 3, 5, 7, 11, 13] {
            for a in 1..n {
                let r = Residue::new(a, n).unwrap();
                assert_eq!((r * r.inverse().unwrap()).value(), 1, "a={a} n={n}");
            }
        }
    }

    #[test]
    fn zero_has_no_inverse() {
        let zero = Residue::new(0, 7).unwrap();
        assert!(matches!(mod_inverse(zero), Err(Error::NoInverse(0, 7))));
    }

    #[test]
    fn composite_modulus_rejected() {
        assert!(matches!(Residue::new(1, 6), Err(Error::NotPrime(6))));
        assert!(matches!(Residue::new(0, 1), Err(Error::NotPrime(1))));
    }

    #[test]
    fn field_ops() {
        let a = Residue::new(3, 7).unwrap();
        let b = Residue::new(5, 7).unwrap();
        assert_eq!((a + b).value(), 1);
        assert_eq!((a - b).value(), 5);
        assert_eq!((-a).value(), 4);
        assert_eq!(Residue::from_signed(-1, 7).unwrap().value(), 6);
    }
}
