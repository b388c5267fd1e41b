//! Ideals of an ambient polynomial ring and the decision procedures built on
//! their strong Gröbner bases.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::groebner::GroebnerBasis;
use crate::monomial::MonomialOrder;
use crate::poly::Polynomial;
use crate::ring::PolyRing;

/// Ideal membership queries.
#[derive(Clone, Debug)]
pub enum Compare<'a> {
    Member(&'a Polynomial),
    Contains,
    Equal,
}

/// Result of [`Ideal::compare`]; `witness` holds cofactors for a successful
/// membership query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub holds: bool,
    pub witness: Option<Vec<Polynomial>>,
}

/// Colon, saturation and radical queries of [`Ideal::colon_saturate_radical`].
#[derive(Clone, Copy, Debug)]
pub enum ColonQuery {
    Colon,
    ColonPower(u32),
    Saturate,
    RadicalMember,
}

#[derive(Clone, Debug)]
pub enum ColonResult {
    Ideal(Ideal),
    Member(bool),
}

#[derive(Clone)]
pub struct Ideal {
    ring: Arc<PolyRing>,
    gens: Vec<Polynomial>,
    gb: OnceLock<Arc<GroebnerBasis>>,
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.ring)
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.canonical_generators().iter().map(|g| self.ring.render(g)).collect();
        write!(f, "({})", gens.join(", "))
    }
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.gb().elements() == other.gb().elements()
    }
}

impl Eq for Ideal {}

/// Generators over ℤ, with the modulus adjoined for residue rings.
fn integral_gens(ring: &PolyRing, gens: &[Polynomial]) -> Vec<Polynomial> {
    let mut out: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if let Some(m) = ring.coeffs().modulus() {
        out.push(Polynomial::constant(ring.nvars(), m));
    }
    out
}

/// `A ∩ B` over ℤ via `t·A + (1 - t)·B`, eliminating `t`.
fn raw_intersect(nvars: usize, a: &[Polynomial], b: &[Polynomial]) -> Vec<Polynomial> {
    let n = nvars + 1;
    let lift = |p: &Polynomial| p.embed(&(1..n).collect::<Vec<_>>(), n);
    let t = Polynomial::var(n, 0);
    let one_minus_t = Polynomial::one(n) - t.clone();
    let mut gens: Vec<Polynomial> = a.iter().map(|p| &t * &lift(p)).collect();
    gens.extend(b.iter().map(|p| &one_minus_t * &lift(p)));
    let gb = GroebnerBasis::compute(n, &gens, MonomialOrder::Block { elim: 1 });
    gb.elements().iter().filter(|p| p.uses_only(1..n)).map(|p| p.restrict(1..n)).collect()
}

impl Ideal {
    pub fn new(ring: Arc<PolyRing>, gens: Vec<Polynomial>) -> Result<Self> {
        for g in &gens {
            ring.check(g)?;
        }
        let gens = gens.iter().map(|g| ring.normalize(g)).filter(|g| !g.is_zero()).collect();
        Ok(Ideal { ring, gens, gb: OnceLock::new() })
    }

    pub fn zero(ring: Arc<PolyRing>) -> Self {
        Ideal { ring, gens: Vec::new(), gb: OnceLock::new() }
    }

    pub fn unit(ring: Arc<PolyRing>) -> Self {
        let one = ring.one();
        Ideal { ring, gens: vec![one], gb: OnceLock::new() }
    }

    pub fn principal(ring: Arc<PolyRing>, g: Polynomial) -> Result<Self> {
        Ideal::new(ring, vec![g])
    }

    /// Parses generator strings in `ring`.
    pub fn parse(ring: Arc<PolyRing>, gens: &[&str]) -> Result<Self> {
        let ps = gens.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>>>()?;
        Ideal::new(ring, ps)
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    /// The reduced strong basis under grevlex, computed once.
    pub fn gb(&self) -> &Arc<GroebnerBasis> {
        self.gb.get_or_init(|| {
            GroebnerBasis::compute(self.ring.nvars(), &integral_gens(&self.ring, &self.gens), MonomialOrder::Grevlex)
        })
    }

    pub fn gb_in(&self, order: MonomialOrder) -> Arc<GroebnerBasis> {
        if order == MonomialOrder::Grevlex {
            return self.gb().clone();
        }
        GroebnerBasis::compute(self.ring.nvars(), &integral_gens(&self.ring, &self.gens), order)
    }

    /// Basis elements as elements of the coefficient ring: sorted, with the
    /// modulus (and its multiples) dropped.
    pub fn canonical_generators(&self) -> Vec<Polynomial> {
        self.gb()
            .elements()
            .iter()
            .map(|p| self.ring.normalize(p))
            .filter(|p| !p.is_zero())
            .collect()
    }

    pub fn is_unit(&self) -> bool {
        self.gb().is_unit_ideal() || self.contains_poly(&self.ring.one())
    }

    pub fn is_zero(&self) -> bool {
        self.canonical_generators().is_empty()
    }

    pub fn normal_form(&self, p: &Polynomial) -> Result<Polynomial> {
        self.ring.check(p)?;
        Ok(self.ring.normalize(&self.gb().normal_form(p)))
    }

    pub fn contains_poly(&self, p: &Polynomial) -> bool {
        self.ring.normalize(&self.gb().normal_form(p)).is_zero()
    }

    fn same_ambient(&self, other: &Ideal) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::AmbientMismatch(format!("{} vs {}", self.ring, other.ring)));
        }
        Ok(())
    }

    /// Cofactors `c` with `p = Σ c_j * generators()[j]` in the ring.
    pub fn membership_certificate(&self, p: &Polynomial) -> Result<Option<Vec<Polynomial>>> {
        self.ring.check(p)?;
        if !self.contains_poly(p) {
            return Ok(None);
        }
        let gens = integral_gens(&self.ring, &self.gens);
        let tracked = GroebnerBasis::compute_tracked(self.ring.nvars(), &gens, MonomialOrder::Grevlex);
        let cof = tracked.express(p).expect("normal form is zero");
        Ok(Some(cof.into_iter().take(self.gens.len()).map(|c| self.ring.normalize(&c)).collect()))
    }

    pub fn compare(&self, other: &Ideal, mode: Compare<'_>) -> Result<Comparison> {
        match mode {
            Compare::Member(p) => {
                let w = self.membership_certificate(p)?;
                Ok(Comparison { holds: w.is_some(), witness: w })
            }
            Compare::Contains => {
                self.same_ambient(other)?;
                Ok(Comparison { holds: self.contains(other), witness: None })
            }
            Compare::Equal => {
                self.same_ambient(other)?;
                Ok(Comparison { holds: self == other, witness: None })
            }
        }
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Ideal) -> bool {
        other.gens.iter().all(|g| self.contains_poly(g))
    }

    /// First generator of `other` outside `self`.
    pub fn first_outside(&self, other: &Ideal) -> Option<Polynomial> {
        other.gens.iter().find(|g| !self.contains_poly(g)).cloned()
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal { ring: self.ring.clone(), gens, gb: OnceLock::new() }
    }

    pub fn with(&self, extra: impl IntoIterator<Item = Polynomial>) -> Ideal {
        let mut gens = self.gens.clone();
        gens.extend(extra.into_iter().map(|g| self.ring.normalize(&g)).filter(|g| !g.is_zero()));
        Ideal { ring: self.ring.clone(), gens, gb: OnceLock::new() }
    }

    pub fn product(&self, other: &Ideal) -> Ideal {
        let gens = self.gens.iter().flat_map(|a| other.gens.iter().map(move |b| a * b)).collect::<Vec<_>>();
        Ideal::new(self.ring.clone(), gens).expect("same ring")
    }

    /// `I ∩ C[x_{k+1}, ...]`, presented in the ring without the first `k` variables.
    pub fn eliminate(&self, first_k: usize) -> Result<Ideal> {
        let n = self.ring.nvars();
        if first_k > n {
            return Err(Error::OutOfRange(format!("cannot eliminate {first_k} of {n} variables")));
        }
        let sub = self.ring.drop_front(first_k);
        if first_k == 0 {
            return Ok(Ideal { ring: sub, gens: self.gens.clone(), gb: OnceLock::new() });
        }
        let gb = self.gb_in(MonomialOrder::Block { elim: first_k });
        let gens = gb.elements().iter().filter(|p| p.uses_only(first_k..n)).map(|p| p.restrict(first_k..n)).collect();
        Ideal::new(sub, gens)
    }

    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        self.same_ambient(other)?;
        let n = self.ring.nvars();
        let a = integral_gens(&self.ring, &self.gens);
        let b = integral_gens(&other.ring, &other.gens);
        Ideal::new(self.ring.clone(), raw_intersect(n, &a, &b))
    }

    /// `(I : g)`; the unit ideal when `g = 0`.
    pub fn colon(&self, g: &Polynomial) -> Result<Ideal> {
        self.ring.check(g)?;
        let g = self.ring.normalize(g);
        if g.is_zero() {
            return Ok(Ideal::unit(self.ring.clone()));
        }
        let n = self.ring.nvars();
        let inter = raw_intersect(n, &integral_gens(&self.ring, &self.gens), std::slice::from_ref(&g));
        let quotients = inter
            .iter()
            .map(|p| p.exact_div(&g).expect("elements of (g) are multiples of g"))
            .collect();
        Ideal::new(self.ring.clone(), quotients)
    }

    /// `(I : g^n)` as `n` successive colons by `g`; the low-degree
    /// eliminations are far cheaper over `ℤ` than one by `g^n`.
    pub fn colon_power(&self, g: &Polynomial, n: u32) -> Result<Ideal> {
        let mut cur = self.clone();
        for _ in 0..n {
            let next = cur.colon(g)?;
            if next == cur {
                break;
            }
            cur = next;
        }
        Ok(cur)
    }

    /// `(I : g^∞)` together with the first index `k` where `(I : g^k)` stabilizes.
    pub fn saturate(&self, g: &Polynomial) -> Result<(Ideal, u32)> {
        let mut cur = self.clone();
        let mut k = 0;
        loop {
            let next = cur.colon(g)?;
            if next == cur {
                return Ok((cur, k));
            }
            cur = next;
            k += 1;
        }
    }

    /// `g ∈ √I`, decided by `1 ∈ I + (1 - t·g)`.
    pub fn radical_member(&self, g: &Polynomial) -> Result<bool> {
        self.ring.check(g)?;
        let t_name = self.ring.fresh_name("t");
        let big = self.ring.prepend(&[t_name]);
        let mut gens: Vec<Polynomial> = self.gens.iter().map(|p| self.ring.shift(p, 1)).collect();
        let t = big.var(0);
        gens.push(big.one() - &t * &self.ring.shift(g, 1));
        Ok(Ideal::new(big, gens)?.is_unit())
    }

    pub fn colon_saturate_radical(&self, g: &Polynomial, mode: ColonQuery) -> Result<ColonResult> {
        Ok(match mode {
            ColonQuery::Colon => ColonResult::Ideal(self.colon(g)?),
            ColonQuery::ColonPower(n) => ColonResult::Ideal(self.colon_power(g, n)?),
            ColonQuery::Saturate => ColonResult::Ideal(self.saturate(g)?.0),
            ColonQuery::RadicalMember => ColonResult::Member(self.radical_member(g)?),
        })
    }

    /// Image of the ideal under a ring change; generators are substituted.
    pub fn map_into(&self, target: Arc<PolyRing>, images: &[Polynomial]) -> Result<Ideal> {
        let gens = self.gens.iter().map(|g| g.substitute(images, target.nvars())).collect();
        Ideal::new(target, gens)
    }

    pub fn is_constant_free(&self) -> bool {
        !self.canonical_generators().iter().any(|g| g.as_constant().is_some_and(|c| !c.is_zero()))
    }
}

/// Groebner basis of the generators under `order` (defaults to grevlex).
pub fn groebner_basis(ring: Arc<PolyRing>, gens: Vec<Polynomial>, order: Option<MonomialOrder>) -> Result<Ideal> {
    let ideal = Ideal::new(ring, gens)?;
    if let Some(o) = order {
        let _ = ideal.gb_in(o);
    } else {
        let _ = ideal.gb();
    }
    Ok(ideal)
}
