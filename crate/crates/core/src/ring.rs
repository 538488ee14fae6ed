use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::KhError;

/// Coefficient ring for homology and cobordism arithmetic.
///
/// Elements are always carried as `BigInt`; over `F_p` they are kept
/// reduced to `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coefficients {
    Integers,
    Prime(u32),
}

impl Coefficients {
    pub fn is_field(&self) -> bool {
        matches!(self, Coefficients::Prime(_))
    }

    pub fn reduce(&self, x: BigInt) -> BigInt {
        match self {
            Coefficients::Integers => x,
            Coefficients::Prime(p) => x.mod_floor(&BigInt::from(*p)),
        }
    }

    pub fn from_i64(&self, x: i64) -> BigInt {
        self.reduce(BigInt::from(x))
    }

    pub fn is_unit(&self, x: &BigInt) -> bool {
        match self {
            Coefficients::Integers => x.abs().is_one(),
            Coefficients::Prime(_) => !x.is_zero(),
        }
    }

    /// Inverse of a unit. Panics on non-units.
    pub fn inverse(&self, x: &BigInt) -> BigInt {
        assert!(self.is_unit(x), "inverse of non-unit {x}");
        match self {
            Coefficients::Integers => x.clone(),
            Coefficients::Prime(p) => {
                let p = BigInt::from(*p);
                let e = x.extended_gcd(&p);
                e.x.mod_floor(&p)
            }
        }
    }

    pub fn neg(&self, x: &BigInt) -> BigInt {
        self.reduce(-x)
    }

    /// Absolute value of the canonical representative, used for l1 norms.
    pub fn abs(&self, x: &BigInt) -> BigInt {
        x.abs()
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Integers => write!(f, "Z"),
            Coefficients::Prime(2) => write!(f, "F2"),
            Coefficients::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for Coefficients {
    type Err = KhError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let prime = |p: u32| {
            if is_prime(p as u64) {
                Ok(Coefficients::Prime(p))
            } else {
                Err(KhError::Parse(format!("{p} is not a prime")))
            }
        };
        match s {
            "Z" | "z" => Ok(Coefficients::Integers),
            "F2" | "f2" => Ok(Coefficients::Prime(2)),
            _ => {
                let rest = s
                    .strip_prefix("Fp:")
                    .or_else(|| s.strip_prefix("fp:"))
                    .or_else(|| s.strip_prefix('F'))
                    .ok_or_else(|| KhError::Parse(format!("unknown coefficients '{s}'")))?;
                let p: u32 = rest
                    .parse()
                    .map_err(|_| KhError::Parse(format!("bad prime in '{s}'")))?;
                prime(p)
            }
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Factor a positive integer into (prime, exponent) pairs by trial division.
pub fn factor(n: &BigInt) -> Vec<(u64, u32)> {
    assert!(n.is_positive());
    let mut n = n.clone();
    let mut out = vec![];
    let mut d: u64 = 2;
    while BigInt::from(d) * BigInt::from(d) <= n {
        let bd = BigInt::from(d);
        let mut e = 0;
        while (&n % &bd).is_zero() {
            n /= &bd;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !n.is_one() {
        let p: u64 = n.try_into().expect("prime factor exceeds u64");
        out.push((p, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_mod_p() {
        let f = Coefficients::Prime(7);
        for x in 1..7 {
            let x = BigInt::from(x);
            let y = f.inverse(&x);
            assert_eq!(f.reduce(x * y), BigInt::one());
        }
    }

    #[test]
    fn parse_coefficients() {
        assert_eq!("Z".parse::<Coefficients>().unwrap(), Coefficients::Integers);
        assert_eq!("F2".parse::<Coefficients>().unwrap(), Coefficients::Prime(2));
        assert_eq!("Fp:5".parse::<Coefficients>().unwrap(), Coefficients::Prime(5));
        assert!("Fp:4".parse::<Coefficients>().is_err());
    }

    #[test]
    fn factor_small() {
        assert_eq!(factor(&BigInt::from(12)), vec![(2, 2), (3, 1)]);
        assert_eq!(factor(&BigInt::from(97)), vec![(97, 1)]);
        assert!(factor(&BigInt::from(1)).is_empty());
    }
}
