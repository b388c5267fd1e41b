//! Sparse multivariate polynomials with integer coefficients.
//!
//! A `Polynomial` does not know its coefficient ring; residue-ring
//! reduction is applied by [`crate::ring::PolyRing::normalize`].

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use serde::{Deserialize, Serialize};

use crate::monomial::{Monomial, MonomialOrder};

#[derive(Serialize, Deserialize)]
struct PolyParts {
    nvars: usize,
    terms: Vec<(Vec<u32>, BigInt)>,
}

impl From<Polynomial> for PolyParts {
    fn from(p: Polynomial) -> Self {
        PolyParts { nvars: p.nvars, terms: p.terms.into_iter().map(|(m, c)| (m.0, c)).collect() }
    }
}

impl From<PolyParts> for Polynomial {
    fn from(p: PolyParts) -> Self {
        Polynomial::from_terms(p.nvars, p.terms.into_iter().map(|(m, c)| (Monomial(m), c)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "PolyParts", from = "PolyParts")]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::term(Monomial::one(nvars), c.into())
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(Monomial::var(nvars, i, 1), BigInt::one())
    }

    pub fn term(m: Monomial, c: BigInt) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { nvars, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut p = Polynomial::zero(nvars);
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// The constant value, if the polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: &BigInt) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.mul(mono), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.nvars);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Coefficients reduced into `[0, m)`, zero terms dropped.
    pub fn reduce_mod(&self, m: &BigInt) -> Polynomial {
        Polynomial::from_terms(
            self.nvars,
            self.terms.iter().map(|(mono, c)| (mono.clone(), c.mod_floor(m))),
        )
    }

    /// Substitutes `images[i]` for variable `i`. All images share one ambient.
    pub fn substitute(&self, images: &[Polynomial], target_nvars: usize) -> Polynomial {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let mut cache: Vec<Vec<Polynomial>> = vec![Vec::new(); self.nvars];
        let mut out = Polynomial::zero(target_nvars);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target_nvars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let powers = &mut cache[i];
                if powers.is_empty() {
                    powers.push(Polynomial::one(target_nvars));
                }
                while powers.len() <= e as usize {
                    let next = &powers[powers.len() - 1] * &images[i];
                    powers.push(next);
                }
                t = &t * &powers[e as usize];
            }
            out = out + t;
        }
        out
    }

    /// Re-indexes variables: variable `i` becomes variable `positions[i]` of a
    /// ring with `target_nvars` variables.
    pub fn embed(&self, positions: &[usize], target_nvars: usize) -> Polynomial {
        assert_eq!(positions.len(), self.nvars);
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0; target_nvars];
            for (i, &k) in m.0.iter().enumerate() {
                e[positions[i]] += k;
            }
            (Monomial(e), c.clone())
        });
        Polynomial::from_terms(target_nvars, terms)
    }

    /// Drops variables outside `keep` (which must not occur).
    pub fn restrict(&self, keep: std::ops::Range<usize>) -> Polynomial {
        let n = keep.len();
        let terms = self.terms.iter().map(|(m, c)| {
            debug_assert!(m.only_in(keep.clone()));
            (Monomial(m.0[keep.clone()].to_vec()), c.clone())
        });
        Polynomial::from_terms(n, terms)
    }

    pub fn uses_only(&self, range: std::ops::Range<usize>) -> bool {
        self.terms.keys().all(|m| m.only_in(range.clone()))
    }

    /// Largest term under `order`.
    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let terms = self.terms.iter().filter(|(m, _)| m.0[i] > 0).map(|(m, c)| {
            let mut e = m.0.clone();
            let k = e[i];
            e[i] -= 1;
            (Monomial(e), c * BigInt::from(k))
        });
        Polynomial::from_terms(self.nvars, terms)
    }

    /// Exact division; `None` if `divisor` does not divide `self` over ℤ.
    pub fn exact_div(&self, divisor: &Polynomial) -> Option<Polynomial> {
        let order = MonomialOrder::Grevlex;
        let (dm, dc) = divisor.leading_term(order)?;
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term(order) {
            if !dm.divides(m) {
                return None;
            }
            let (q, r) = c.div_rem(&dc);
            if !r.is_zero() {
                return None;
            }
            let mono = dm.quotient_of(m);
            rem = rem - divisor.mul_monomial(&mono, &q);
            quot.add_term(mono, q);
        }
        Some(quot)
    }

    /// Human-readable form using `names`; terms in descending grevlex order.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|a, b| MonomialOrder::Grevlex.cmp(b.0, a.0));
        let mut s = String::new();
        for (k, (m, c)) in ts.into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[i].clone()),
                    _ => factors.push(format!("{}^{}", names[i], e)),
                }
            }
            if factors.is_empty() {
                let _ = write!(s, "{a}");
            } else {
                if !a.is_one() {
                    let _ = write!(s, "{a}*");
                }
                s.push_str(&factors.join("*"));
            }
        }
        s
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(mut self, rhs: Polynomial) -> Polynomial {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
        self
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&BigInt::from(-1))
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}
