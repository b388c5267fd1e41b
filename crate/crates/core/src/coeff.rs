//! Coefficient rings: the integers and their residue rings.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Base ring of every presented algebra.
///
/// Residue rings are handled by the Gröbner engine as integer presentations
/// with the modulus adjoined as a constant relation, so all coefficient
/// arithmetic happens over the integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoefficientRing {
    Integers,
    IntegersMod(u64),
}

impl CoefficientRing {
    pub fn integers_mod(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidRing(format!("modulus {m} must be at least 2")));
        }
        Ok(CoefficientRing::IntegersMod(m))
    }

    /// The prime field with `p` elements; fails unless `p` is prime.
    pub fn prime_field(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidRing(format!("{p} is not prime")));
        }
        Ok(CoefficientRing::IntegersMod(p))
    }

    /// 0 for the integers.
    pub fn characteristic(&self) -> u64 {
        match self {
            CoefficientRing::Integers => 0,
            CoefficientRing::IntegersMod(m) => *m,
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self, CoefficientRing::IntegersMod(m) if is_prime(*m))
    }

    pub fn modulus(&self) -> Option<BigInt> {
        match self {
            CoefficientRing::Integers => None,
            CoefficientRing::IntegersMod(m) => Some(BigInt::from(*m)),
        }
    }

    /// Canonical representative: identity over ℤ, `[0, m)` over ℤ/m.
    pub fn normalize(&self, c: &BigInt) -> BigInt {
        match self {
            CoefficientRing::Integers => c.clone(),
            CoefficientRing::IntegersMod(m) => c.mod_floor(&BigInt::from(*m)),
        }
    }

    pub fn is_zero(&self, c: &BigInt) -> bool {
        self.normalize(c).is_zero()
    }

    /// The ring receiving both `self` and `other` (ℤ/gcd of the characteristics).
    pub fn join(&self, other: &CoefficientRing) -> CoefficientRing {
        let g = self.characteristic().gcd(&other.characteristic());
        if g == 0 {
            CoefficientRing::Integers
        } else {
            CoefficientRing::IntegersMod(g)
        }
    }

    /// Whether the structure map `self -> other` exists.
    pub fn maps_into(&self, other: &CoefficientRing) -> bool {
        let (a, b) = (self.characteristic(), other.characteristic());
        a == 0 || (b != 0 && a % b == 0)
    }

    /// Short textual name: `Z`, `Z/4`, `F2`.
    pub fn name(&self) -> String {
        match self {
            CoefficientRing::Integers => "Z".into(),
            CoefficientRing::IntegersMod(m) if is_prime(*m) => format!("F{m}"),
            CoefficientRing::IntegersMod(m) => format!("Z/{m}"),
        }
    }

    /// Parses `Z`, `ZZ`, `Z/m`, `F<p>`, `GF(p)`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "Z" || t == "ZZ" {
            return Ok(CoefficientRing::Integers);
        }
        let num = |x: &str| -> Result<u64> {
            x.trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidRing(format!("unknown coefficient ring `{t}`")))
        };
        if let Some(rest) = t.strip_prefix("Z/") {
            let m = num(rest)?;
            if m == 0 {
                return Ok(CoefficientRing::Integers);
            }
            return CoefficientRing::integers_mod(m);
        }
        if let Some(rest) = t.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')) {
            return CoefficientRing::prime_field(num(rest)?);
        }
        if let Some(rest) = t.strip_prefix('F') {
            return CoefficientRing::prime_field(num(rest)?);
        }
        Err(Error::InvalidRing(format!("unknown coefficient ring `{t}`")))
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Extended gcd with a nonnegative gcd: returns `(g, u, v)` with `u*a + v*b = g`.
pub(crate) fn xgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}
