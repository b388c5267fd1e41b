//! Finitely presented algebras `C[x_1..x_k]/J` and their homomorphisms.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use crate::coeff::{is_prime, CoefficientRing};
use crate::error::{Error, Result};
use crate::groebner::GroebnerBasis;
use crate::ideal::Ideal;
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::Polynomial;
use crate::ring::PolyRing;

pub struct PresentedAlgebra {
    relations: Ideal,
}

impl fmt::Debug for PresentedAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PresentedAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.relations.is_zero() {
            write!(f, "{}", self.ring())
        } else {
            write!(f, "{}/{}", self.ring(), self.relations)
        }
    }
}

impl PartialEq for PresentedAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.relations == other.relations
    }
}

impl Eq for PresentedAlgebra {}

impl PresentedAlgebra {
    /// The quotient by `relations`; its basis is computed here, once.
    pub fn from_ideal(relations: Ideal) -> Arc<Self> {
        let _ = relations.gb();
        Arc::new(PresentedAlgebra { relations })
    }

    pub fn new(ring: Arc<PolyRing>, relations: Vec<Polynomial>) -> Result<Arc<Self>> {
        Ok(PresentedAlgebra::from_ideal(Ideal::new(ring, relations)?))
    }

    pub fn present(coeffs: CoefficientRing, vars: &[&str], relations: &[&str]) -> Result<Arc<Self>> {
        let ring = PolyRing::new(coeffs, vars.iter().map(|s| s.to_string()).collect())?;
        Ok(PresentedAlgebra::from_ideal(Ideal::parse(ring, relations)?))
    }

    /// Parses `C[x,y]/(r1, r2)` or `C[x]`; `C` is as in [`CoefficientRing::parse`].
    pub fn from_presentation(text: &str) -> Result<Arc<Self>> {
        let t = text.trim();
        let bad = |m: &str| Error::Parse { column: 1, message: format!("{m} in presentation `{t}`") };
        let open = t.find('[').ok_or_else(|| bad("expected `[`"))?;
        let close = t.find(']').ok_or_else(|| bad("expected `]`"))?;
        if close < open {
            return Err(bad("unbalanced brackets"));
        }
        let coeffs = CoefficientRing::parse(&t[..open])?;
        let vars: Vec<&str> = t[open + 1..close].split(',').map(str::trim).filter(|v| !v.is_empty()).collect();
        let rest = t[close + 1..].trim();
        let rels = if rest.is_empty() {
            Vec::new()
        } else {
            let inner = rest
                .strip_prefix('/')
                .map(str::trim)
                .and_then(|r| r.strip_prefix('('))
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| bad("expected `/(relations)`"))?;
            split_top_level(inner)
        };
        let rels: Vec<&str> = rels.iter().map(String::as_str).collect();
        PresentedAlgebra::present(coeffs, &vars, &rels)
    }

    pub fn polynomial_ring(ring: Arc<PolyRing>) -> Arc<Self> {
        PresentedAlgebra::from_ideal(Ideal::zero(ring))
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        self.relations.ring()
    }

    pub fn coeffs(&self) -> &CoefficientRing {
        self.ring().coeffs()
    }

    pub fn nvars(&self) -> usize {
        self.ring().nvars()
    }

    pub fn relations(&self) -> &Ideal {
        &self.relations
    }

    /// `1 ∈ J`.
    pub fn is_zero_algebra(&self) -> bool {
        self.relations.is_unit()
    }

    /// Ideal of the ambient ring generated by `J` and `extra`.
    pub fn ideal(&self, extra: impl IntoIterator<Item = Polynomial>) -> Ideal {
        self.relations.with(extra)
    }

    pub fn quotient(&self, extra: impl IntoIterator<Item = Polynomial>) -> Arc<Self> {
        PresentedAlgebra::from_ideal(self.ideal(extra))
    }

    /// Canonical representative of the class of `p`.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        self.ring().normalize(&self.relations.gb().normal_form(p))
    }

    pub fn parse(&self, src: &str) -> Result<Polynomial> {
        Ok(self.reduce(&self.ring().parse(src)?))
    }

    pub fn is_zero_elem(&self, p: &Polynomial) -> bool {
        self.reduce(p).is_zero()
    }

    pub fn elements_equal(&self, a: &Polynomial, b: &Polynomial) -> bool {
        self.is_zero_elem(&(a.clone() - b.clone()))
    }

    pub fn render(&self, p: &Polynomial) -> String {
        self.ring().render(p)
    }

    pub fn var(&self, i: usize) -> Polynomial {
        self.ring().var(i)
    }

    pub fn is_unit(&self, z: &Polynomial) -> bool {
        self.ideal([z.clone()]).is_unit()
    }

    /// `(J : z)` in the ambient ring; its image in `A` is `ann_A(z)`.
    pub fn annihilator(&self, z: &Polynomial) -> Result<Ideal> {
        self.relations.colon(z)
    }

    /// The prime `p` when the coefficients are `𝔽_p`.
    pub fn char_p(&self) -> Result<u64> {
        match self.coeffs() {
            CoefficientRing::IntegersMod(p) if is_prime(*p) => Ok(*p),
            c => Err(Error::NotApplicable(format!("Frobenius needs prime characteristic, got {c}"))),
        }
    }

    fn not_zero_algebra(&self) -> Result<()> {
        if self.is_zero_algebra() {
            return Err(Error::NotApplicable(format!("{self} is the zero algebra")));
        }
        Ok(())
    }

    /// Krull dimension over a field: the size of a maximal set of variables
    /// containing no leading monomial of the relations.
    pub fn krull_dim(&self) -> Result<usize> {
        if !self.coeffs().is_field() {
            return Err(Error::NotApplicable(format!("Krull dimension needs field coefficients, got {}", self.coeffs())));
        }
        self.not_zero_algebra()?;
        let n = self.nvars();
        if n > 24 {
            return Err(Error::OutOfRange(format!("{n} variables")));
        }
        let leads: Vec<u32> = self
            .relations
            .canonical_generators()
            .iter()
            .filter_map(|g| g.leading_term(MonomialOrder::Grevlex).map(|(m, _)| support(m)))
            .collect();
        Ok((0u32..1 << n)
            .filter(|&s| leads.iter().all(|&l| l & !s != 0))
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap_or(0))
    }

    /// Krull dimension for any coefficient ring: over `ℤ` it is
    /// `max(dim A⊗ℚ + 1, dim A/pA)` with `p` ranging over the primes dividing
    /// a leading coefficient of the strong basis (other fibres have the
    /// generic leading monomials); over `ℤ/m` the maximum over `p | m`.
    pub fn dimension(&self) -> Result<usize> {
        if self.coeffs().is_field() {
            return self.krull_dim();
        }
        self.not_zero_algebra()?;
        let n = self.nvars();
        let gb = self.relations.gb();
        let mut primes: Vec<u64> = Vec::new();
        let mut add_primes = |c: &BigInt| {
            let mut m = c.magnitude().clone();
            let mut d = 2u64;
            while m > num_bigint::BigUint::one() {
                let db = num_bigint::BigUint::from(d);
                if (&m % &db).is_zero() {
                    if !primes.contains(&d) {
                        primes.push(d);
                    }
                    while (&m % &db).is_zero() {
                        m /= &db;
                    }
                }
                d += 1;
            }
        };
        let mut generic: Option<usize> = None;
        let leads = gb.leading_terms();
        for (_, c) in &leads {
            add_primes(c);
        }
        if !leads.iter().any(|(m, _)| m.is_one()) {
            let masks: Vec<u32> = leads.iter().map(|(m, _)| support(m)).collect();
            generic = (0u32..1 << n).filter(|&s| masks.iter().all(|&l| l & !s != 0)).map(|s| s.count_ones() as usize).max();
        }
        let mut best = generic.map(|d| d + 1);
        for p in primes {
            let fibre = self.ring().with_coeffs(CoefficientRing::IntegersMod(p));
            let a = PresentedAlgebra::new(fibre, self.relations.generators().to_vec())?;
            if let Ok(d) = a.krull_dim() {
                best = Some(best.map_or(d, |b| b.max(d)));
            }
        }
        best.ok_or_else(|| Error::NotApplicable(format!("{self} is the zero algebra")))
    }

    /// Frobenius endomorphism `x_i ↦ x_i^p`.
    pub fn frobenius(self: &Arc<Self>) -> Result<AlgebraMap> {
        let p = self.char_p()? as u32;
        let images = (0..self.nvars()).map(|i| self.var(i).pow(p)).collect();
        AlgebraMap::new(self.clone(), self.clone(), images)
    }

    pub fn frobenius_kernel(self: &Arc<Self>) -> Result<Ideal> {
        self.frobenius()?.kernel()
    }

    /// Reduced iff Frobenius is injective; prime characteristic only.
    pub fn is_reduced(self: &Arc<Self>) -> Result<bool> {
        Ok(self.relations.contains(&self.frobenius_kernel()?))
    }

    /// A pseudo-random element: up to `terms` monomials of degree at most
    /// `max_deg`, coefficients in `[-bound, bound]`, reduced.
    pub fn random_element<R: Rng>(&self, rng: &mut R, terms: usize, max_deg: u32, bound: i64) -> Polynomial {
        let n = self.nvars();
        let mut p = self.ring().zero();
        for _ in 0..rng.gen_range(0..=terms) {
            let mut e = vec![0u32; n];
            let mut budget = rng.gen_range(0..=max_deg);
            while budget > 0 && n > 0 {
                e[rng.gen_range(0..n)] += 1;
                budget -= 1;
            }
            p.add_term(Monomial(e), BigInt::from(rng.gen_range(-bound..=bound)));
        }
        self.reduce(&p)
    }
}

fn support(m: &Monomial) -> u32 {
    m.0.iter().enumerate().filter(|(_, &e)| e > 0).fold(0, |acc, (i, _)| acc | 1 << i)
}

/// A homomorphism given by the images of the source variables. Construction
/// verifies that every source relation maps to zero.
#[derive(Clone)]
pub struct AlgebraMap {
    source: Arc<PresentedAlgebra>,
    target: Arc<PresentedAlgebra>,
    images: Vec<Polynomial>,
    graph: OnceLock<Arc<GroebnerBasis>>,
}

impl fmt::Debug for AlgebraMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for AlgebraMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .source
            .ring()
            .vars()
            .iter()
            .zip(&self.images)
            .map(|(v, p)| format!("{v} -> {}", self.target.render(p)))
            .collect();
        write!(f, "{} -> {} [{}]", self.source, self.target, parts.join(", "))
    }
}

impl AlgebraMap {
    pub fn new(source: Arc<PresentedAlgebra>, target: Arc<PresentedAlgebra>, images: Vec<Polynomial>) -> Result<Self> {
        if !source.coeffs().maps_into(target.coeffs()) {
            return Err(Error::InvalidRing(format!("no structure map {} -> {}", source.coeffs(), target.coeffs())));
        }
        if images.len() != source.nvars() {
            return Err(Error::OutOfRange(format!(
                "{} images for {} source variables",
                images.len(),
                source.nvars()
            )));
        }
        for p in &images {
            target.ring().check(p)?;
        }
        let images = images.iter().map(|p| target.reduce(p)).collect();
        let map = AlgebraMap { source, target, images, graph: OnceLock::new() };
        for rel in map.source.relations().generators() {
            let image = map.apply(rel);
            if !image.is_zero() {
                return Err(Error::IllDefinedMap {
                    relation: map.source.render(rel),
                    image: map.target.render(&image),
                });
            }
        }
        Ok(map)
    }

    pub fn parse(source: Arc<PresentedAlgebra>, target: Arc<PresentedAlgebra>, images: &[&str]) -> Result<Self> {
        let ps = images.iter().map(|s| target.ring().parse(s)).collect::<Result<Vec<_>>>()?;
        AlgebraMap::new(source, target, ps)
    }

    pub fn identity(a: Arc<PresentedAlgebra>) -> Self {
        let images = (0..a.nvars()).map(|i| a.var(i)).collect();
        AlgebraMap::new(a.clone(), a, images).expect("identity is well defined")
    }

    pub fn source(&self) -> &Arc<PresentedAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PresentedAlgebra> {
        &self.target
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    /// Always true: maps only exist once verified.
    pub fn verified(&self) -> bool {
        true
    }

    pub fn apply(&self, a: &Polynomial) -> Polynomial {
        self.target.reduce(&a.substitute(&self.images, self.target.nvars()))
    }

    /// The ideal of the target ambient generated by the images of `ideal`
    /// together with the target relations.
    pub fn extend_ideal(&self, ideal: &Ideal) -> Ideal {
        self.target.ideal(ideal.generators().iter().map(|g| self.apply(g)))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &AlgebraMap) -> Result<AlgebraMap> {
        if *self.target != *next.source {
            return Err(Error::AmbientMismatch(format!("cannot compose into {} from {}", next.source, self.target)));
        }
        let images = self.images.iter().map(|p| next.apply(p)).collect();
        AlgebraMap::new(self.source.clone(), next.target.clone(), images)
    }

    /// Ring with target variables first, then the source variables, over the
    /// target coefficients.
    fn graph_ring(&self) -> Arc<PolyRing> {
        self.source.ring().with_coeffs(self.target.coeffs().clone()).prepend(self.target.ring().vars())
    }

    fn graph_gens(&self, target_ideal: &[Polynomial]) -> (Arc<PolyRing>, Vec<Polynomial>) {
        let ring = self.graph_ring();
        let (m, n) = (self.target.nvars(), self.source.nvars());
        let tr = self.target.ring();
        let mut gens: Vec<Polynomial> = target_ideal.iter().map(|p| tr.widen(p, n)).collect();
        for (i, img) in self.images.iter().enumerate() {
            gens.push(ring.var(m + i) - tr.widen(img, n));
        }
        if let Some(md) = ring.coeffs().modulus() {
            gens.push(Polynomial::constant(m + n, md));
        }
        (ring, gens)
    }

    fn graph_basis(&self) -> &Arc<GroebnerBasis> {
        self.graph.get_or_init(|| {
            let (ring, gens) = self.graph_gens(self.target.relations().generators());
            GroebnerBasis::compute(ring.nvars(), &gens, MonomialOrder::Block { elim: self.target.nvars() })
        })
    }

    fn contract(&self, gb: &GroebnerBasis) -> Ideal {
        let (m, n) = (self.target.nvars(), self.source.nvars());
        let gens = gb.elements().iter().filter(|p| p.uses_only(m..m + n)).map(|p| p.restrict(m..m + n));
        self.source.ideal(gens)
    }

    /// Preimage of the target relations, as an ideal of the source ambient.
    pub fn kernel(&self) -> Result<Ideal> {
        Ok(self.contract(self.graph_basis()))
    }

    /// Preimage of an ideal `K ⊇ J_target` of the target ambient.
    pub fn preimage_ideal(&self, k: &Ideal) -> Result<Ideal> {
        if k.ring().vars() != self.target.ring().vars() {
            return Err(Error::AmbientMismatch(format!("{} is not an ideal of {}", k, self.target.ring())));
        }
        let mut gens = k.generators().to_vec();
        gens.extend(self.target.relations().generators().iter().cloned());
        let (ring, gens) = self.graph_gens(&gens);
        let gb = GroebnerBasis::compute(ring.nvars(), &gens, MonomialOrder::Block { elim: self.target.nvars() });
        Ok(self.contract(&gb))
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.source.relations().contains(&self.kernel()?))
    }

    /// A deterministic preimage of `b` (normal form in the source), if any.
    pub fn image_member(&self, b: &Polynomial) -> Result<Option<Polynomial>> {
        self.target.ring().check(b)?;
        let (m, n) = (self.target.nvars(), self.source.nvars());
        let r = self.graph_basis().normal_form(&self.target.ring().widen(b, n));
        if !r.uses_only(m..m + n) {
            return Ok(None);
        }
        Ok(Some(self.source.reduce(&r.restrict(m..m + n))))
    }

    pub fn preimage(&self, b: &Polynomial) -> Result<Polynomial> {
        self.image_member(b)?.ok_or_else(|| Error::NoPreimage(self.target.render(b)))
    }

    pub fn is_surjective(&self) -> Result<bool> {
        for i in 0..self.target.nvars() {
            if self.image_member(&self.target.var(i))?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `A ⊗_R S` with its coprojections.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub algebra: Arc<PresentedAlgebra>,
    pub left: AlgebraMap,
    pub right: AlgebraMap,
}

/// Pushout of `f: R -> A` and `g: R -> S`, presented on the variables of `A`
/// followed by those of `S`.
pub fn tensor_pushout(f: &AlgebraMap, g: &AlgebraMap) -> Result<Pushout> {
    if *f.source != *g.source {
        return Err(Error::AmbientMismatch(format!("pushout needs a common source, got {} and {}", f.source, g.source)));
    }
    let (a, s) = (&f.target, &g.target);
    let coeffs = a.coeffs().join(s.coeffs());
    let ring = a.ring().with_coeffs(coeffs).append(s.ring().vars());
    let (na, ns) = (a.nvars(), s.nvars());
    let left_pos: Vec<usize> = (0..na).collect();
    let right_pos: Vec<usize> = (na..na + ns).collect();
    let into_left = |p: &Polynomial| p.embed(&left_pos, na + ns);
    let into_right = |p: &Polynomial| p.embed(&right_pos, na + ns);
    let mut rels: Vec<Polynomial> = a.relations().generators().iter().map(into_left).collect();
    rels.extend(s.relations().generators().iter().map(into_right));
    for (fi, gi) in f.images.iter().zip(&g.images) {
        rels.push(into_left(fi) - into_right(gi));
    }
    let algebra = PresentedAlgebra::new(ring, rels)?;
    let left = AlgebraMap::new(a.clone(), algebra.clone(), (0..na).map(|i| algebra.var(i)).collect())?;
    let right = AlgebraMap::new(s.clone(), algebra.clone(), (na..na + ns).map(|i| algebra.var(i)).collect())?;
    Ok(Pushout { algebra, left, right })
}

/// The relative Frobenius `B ⊗_{A,φ} A -> B` of `f: A -> B`.
#[derive(Clone, Debug)]
pub struct RelativeFrobenius {
    pub map: AlgebraMap,
    pub injective: bool,
    pub surjective: bool,
}

impl RelativeFrobenius {
    pub fn is_iso(&self) -> bool {
        self.injective && self.surjective
    }
}

pub fn relative_frobenius(f: &AlgebraMap) -> Result<RelativeFrobenius> {
    let p = f.target.char_p()? as u32;
    f.source.char_p()?;
    let frob_a = f.source.frobenius()?;
    let po = tensor_pushout(f, &frob_a)?;
    let b = &f.target;
    let mut images: Vec<Polynomial> = (0..b.nvars()).map(|i| b.var(i).pow(p)).collect();
    images.extend(f.images.iter().cloned());
    let map = AlgebraMap::new(po.algebra, b.clone(), images)?;
    Ok(RelativeFrobenius { injective: map.is_injective()?, surjective: map.is_surjective()?, map })
}

pub fn relative_frobenius_iso(f: &AlgebraMap) -> Result<bool> {
    Ok(relative_frobenius(f)?.is_iso())
}

/// How an étale algebra over `A` is built.
///
/// `Localization(g)`: `A[w]/(g·w - 1)` with `g` in the ambient of `A`.
/// `StandardEtale { h, g }`: `A[z, w]/(h, g·w - 1)` with `h`, `g` in the
/// ambient of `A` extended by `z` (last); `h` is monic in `z` and `h'` must be
/// a unit. Without `g`, no `w` is adjoined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EtaleCertificate {
    Localization(Polynomial),
    Zariskization,
    StandardEtale { h: Polynomial, g: Option<Polynomial> },
}

impl EtaleCertificate {
    pub fn kind(&self) -> &'static str {
        match self {
            EtaleCertificate::Localization(_) => "localization",
            EtaleCertificate::Zariskization => "zariskization",
            EtaleCertificate::StandardEtale { .. } => "standard_etale",
        }
    }

    /// The structure map `A -> A'` described by the certificate.
    pub fn construct(&self, a: &Arc<PresentedAlgebra>) -> Result<AlgebraMap> {
        let n = a.nvars();
        let (ring, rels) = match self {
            EtaleCertificate::Zariskization => {
                return Err(Error::NotApplicable("a Zariskization is not finitely presented".into()))
            }
            EtaleCertificate::Localization(g) => {
                a.ring().check(g)?;
                let ring = a.ring().append(&[a.ring().fresh_name("w")]);
                let w = ring.var(n);
                let rel = &a.ring().widen(g, 1) * &w - ring.one();
                (ring, vec![rel])
            }
            EtaleCertificate::StandardEtale { h, g } => {
                let zr = a.ring().append(&["z".to_string()]);
                zr.check(h)?;
                if !monic_in_last(h) {
                    return Err(Error::InvalidCertificate(format!("`{}` is not monic in {}", zr.render(h), zr.vars()[n])));
                }
                match g {
                    None => (zr, vec![h.clone()]),
                    Some(g) => {
                        zr.check(g)?;
                        let ring = zr.append(&[zr.fresh_name("w")]);
                        let w = ring.var(n + 1);
                        let rel = &zr.widen(g, 1) * &w - ring.one();
                        (ring, vec![zr.widen(h, 1), rel])
                    }
                }
            }
        };
        let extra = ring.nvars() - n;
        let mut all: Vec<Polynomial> = a.relations().generators().iter().map(|p| a.ring().widen(p, extra)).collect();
        all.extend(rels);
        let target = PresentedAlgebra::new(ring, all)?;
        if let EtaleCertificate::StandardEtale { h, .. } = self {
            let dh = h.derivative(n);
            let dh = if extra == 2 { dh.embed(&(0..n + 1).collect::<Vec<_>>(), n + 2) } else { dh };
            if !target.is_unit(&dh) {
                return Err(Error::InvalidCertificate(format!(
                    "derivative `{}` is not a unit in {}",
                    target.render(&dh),
                    target
                )));
            }
        }
        AlgebraMap::new(a.clone(), target.clone(), (0..n).map(|i| target.var(i)).collect())
    }
}

fn monic_in_last(h: &Polynomial) -> bool {
    let z = h.nvars() - 1;
    let Some(d) = h.terms().map(|(m, _)| m.0[z]).max() else { return false };
    let top: Vec<_> = h.terms().filter(|(m, _)| m.0[z] == d).collect();
    top.len() == 1 && top[0].0 .0.iter().enumerate().all(|(i, &e)| i == z || e == 0) && top[0].1.is_one()
}

/// Outcome of [`etale_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaleCheck {
    pub valid: bool,
    pub reason: String,
}

/// Validates `cert` against `f`: the target of `f` must be the algebra the
/// certificate constructs, with `f` the structure map.
pub fn etale_check(cert: &EtaleCertificate, f: &AlgebraMap) -> Result<EtaleCheck> {
    if let EtaleCertificate::Zariskization = cert {
        return Ok(EtaleCheck { valid: true, reason: "zariskization accepted by certificate".into() });
    }
    let built = match cert.construct(&f.source) {
        Ok(m) => m,
        Err(Error::InvalidCertificate(r)) => return Ok(EtaleCheck { valid: false, reason: r }),
        Err(e) => return Err(e),
    };
    let t = &f.target;
    let fail = |reason: String| Ok(EtaleCheck { valid: false, reason });
    if t.nvars() != built.target.nvars() || t.coeffs() != built.target.coeffs() {
        return fail(format!("target {} does not match {}", t, built.target));
    }
    let rels = Ideal::new(t.ring().clone(), built.target.relations().generators().to_vec())?;
    if rels != *t.relations() {
        return fail(format!("relations of {} differ from {}", t, built.target));
    }
    if let Some(i) = (0..f.images.len()).find(|&i| !t.elements_equal(&f.images[i], &built.images[i])) {
        return fail(format!("`{}` is not the structure map image", t.render(&f.images[i])));
    }
    Ok(EtaleCheck { valid: true, reason: format!("{} certificate verified", cert.kind()) })
}

/// For each target generator `y_j`, a polynomial in `T, x_1..x_k` (with `T`
/// first) that is monic in `T` and vanishes at `T = y_j` after mapping the
/// source variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralityCertificate {
    pub equations: Vec<Polynomial>,
}

impl IntegralityCertificate {
    fn ambient(f: &AlgebraMap) -> Arc<PolyRing> {
        f.source.ring().prepend(&[f.source.ring().fresh_name("T")])
    }

    pub fn check(&self, f: &AlgebraMap) -> Result<()> {
        let t = &f.target;
        if self.equations.len() != t.nvars() {
            return Err(Error::InvalidCertificate(format!(
                "{} equations for {} generators",
                self.equations.len(),
                t.nvars()
            )));
        }
        let ring = IntegralityCertificate::ambient(f);
        for (j, eq) in self.equations.iter().enumerate() {
            ring.check(eq)?;
            if !monic_in_first(eq) {
                return Err(Error::InvalidCertificate(format!("`{}` is not monic", ring.render(eq))));
            }
            let mut images = vec![t.var(j)];
            images.extend(f.images.iter().cloned());
            if !t.is_zero_elem(&eq.substitute(&images, t.nvars())) {
                return Err(Error::InvalidCertificate(format!(
                    "`{}` does not vanish at {}",
                    ring.render(eq),
                    t.ring().vars()[j]
                )));
            }
        }
        Ok(())
    }

    /// Finds monic equations from the kernel of `A[T] -> B, T ↦ y_j`.
    pub fn search(f: &AlgebraMap) -> Result<Option<Self>> {
        let ring = IntegralityCertificate::ambient(f);
        let n = f.source.nvars();
        let rels = f.source.relations().generators().iter().map(|p| f.source.ring().shift(p, 1)).collect();
        let src = PresentedAlgebra::new(ring.clone(), rels)?;
        let mut equations = Vec::new();
        for j in 0..f.target.nvars() {
            let mut images = vec![f.target.var(j)];
            images.extend(f.images.iter().cloned());
            let ev = AlgebraMap::new(src.clone(), f.target.clone(), images)?;
            let ker = ev.kernel()?;
            let gb = ker.gb_in(MonomialOrder::Block { elim: 1 });
            let found = gb.elements().iter().find(|p| {
                let q = ring.normalize(p);
                !q.uses_only(1..n + 1) && monic_in_first(&q)
            });
            match found {
                Some(p) => equations.push(ring.normalize(p)),
                None => return Ok(None),
            }
        }
        Ok(Some(IntegralityCertificate { equations }))
    }
}

fn monic_in_first(h: &Polynomial) -> bool {
    let Some(d) = h.terms().map(|(m, _)| m.0[0]).max() else { return false };
    let top: Vec<_> = h.terms().filter(|(m, _)| m.0[0] == d).collect();
    d > 0 && top.len() == 1 && top[0].0 .0[1..].iter().all(|&e| e == 0) && top[0].1.is_one()
}

impl PartialEq for AlgebraMap {
    fn eq(&self, other: &Self) -> bool {
        *self.source == *other.source
            && *self.target == *other.target
            && self.images.iter().zip(&other.images).all(|(a, b)| self.target.elements_equal(a, b))
    }
}

/// Splits on commas outside parentheses.
fn split_top_level(s: &str) -> Vec<String> {
    let (mut out, mut cur, mut depth) = (Vec::new(), String::new(), 0i32);
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur).trim().to_string());
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

#[cfg(test)]
mod tests {
    #[test]
    fn presentations_parse() {
        let a = PresentedAlgebra::from_presentation("Z[y]/(3y,y^2)").unwrap();
        assert_eq!(a.nvars(), 1);
        assert!(a.is_zero_elem(&a.parse("3*y").unwrap()));
        let b = PresentedAlgebra::from_presentation("F2[x, y]").unwrap();
        assert!(b.relations().is_zero());
        let c = PresentedAlgebra::from_presentation("Z[x]/((x+1)^2, 2)").unwrap();
        assert!(c.is_zero_elem(&c.parse("x^2 + 1").unwrap()));
        assert!(PresentedAlgebra::from_presentation("Z[x").is_err());
    }

    use super::*;

    fn alg(c: CoefficientRing, vars: &[&str], rels: &[&str]) -> Arc<PresentedAlgebra> {
        PresentedAlgebra::present(c, vars, rels).unwrap()
    }

    const Z: CoefficientRing = CoefficientRing::Integers;
    const F2: CoefficientRing = CoefficientRing::IntegersMod(2);

    #[test]
    fn maps_are_verified() {
        let r1 = alg(Z, &["x"], &["x^2 - 2"]);
        let r2 = alg(Z, &["u"], &["u^4 - 2"]);
        assert!(AlgebraMap::parse(r1.clone(), r2.clone(), &["u^2"]).is_ok());
        let err = AlgebraMap::parse(r1.clone(), r2, &["u^3"]).unwrap_err();
        assert_eq!(err, Error::IllDefinedMap { relation: "x^2 - 2".into(), image: "2*u^2 - 2".into() });
        let zz = alg(Z, &[], &[]);
        let t0 = AlgebraMap::new(zz, r1, vec![]).unwrap();
        assert_eq!(t0.preimage(&t0.target().ring().one()).unwrap(), Polynomial::one(0));
    }

    #[test]
    fn kernel_image_preimage() {
        let f = alg(F2, &[], &[]);
        let r0 = alg(F2, &["x"], &["x^2"]);
        let t0 = AlgebraMap::new(f.clone(), r0.clone(), vec![]).unwrap();
        assert!(t0.is_injective().unwrap());
        let r1 = alg(F2, &["u"], &["u^4"]);
        let t1 = AlgebraMap::parse(r0.clone(), r1.clone(), &["u^2"]).unwrap();
        assert_eq!(t1.preimage(&r1.parse("u^2").unwrap()).unwrap(), r0.parse("x").unwrap());
        assert!(t1.image_member(&r1.parse("u").unwrap()).unwrap().is_none());
        assert!(t1.is_injective().unwrap());
    }

    #[test]
    fn units_and_annihilators() {
        let a = alg(Z, &["x"], &["x^2 - 2"]);
        assert!(a.is_unit(&a.parse("1 + x").unwrap()));
        assert!(!a.is_unit(&a.parse("0").unwrap()));
        let b = alg(Z, &["y"], &["3*y", "y^2"]);
        let ann = b.annihilator(&b.parse("y").unwrap()).unwrap();
        assert_eq!(ann, Ideal::parse(b.ring().clone(), &["3", "y"]).unwrap());
    }

    #[test]
    fn pushouts() {
        let zz = alg(Z, &[], &[]);
        let a = alg(Z, &["x"], &["x^2 - 2"]);
        let f2 = alg(F2, &[], &[]);
        let f = AlgebraMap::new(zz.clone(), a.clone(), vec![]).unwrap();
        let g = AlgebraMap::new(zz.clone(), f2, vec![]).unwrap();
        let po = tensor_pushout(&f, &g).unwrap();
        assert_eq!(*po.algebra, *alg(F2, &["x"], &["x^2"]));
        let inv3 = alg(Z, &["s"], &["3*s - 1"]);
        let po = tensor_pushout(&f, &AlgebraMap::new(zz, inv3, vec![]).unwrap()).unwrap();
        assert_eq!(*po.algebra, *alg(Z, &["x", "s"], &["x^2 - 2", "3*s - 1"]));
        let id = AlgebraMap::identity(a.clone());
        let po = tensor_pushout(&id, &id).unwrap();
        assert!(po.left.is_injective().unwrap() && po.left.is_surjective().unwrap());
    }

    #[test]
    fn frobenius_tools() {
        let a = alg(F2, &["x"], &["x^2"]);
        assert!(!a.is_reduced().unwrap());
        assert!(a.frobenius_kernel().unwrap().contains_poly(&a.var(0)));
        assert!(alg(F2, &["x"], &[]).is_reduced().unwrap());
        assert!(matches!(alg(Z, &["x"], &[]).is_reduced(), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn etale_certificates() {
        let base = alg(F2, &["u"], &[]);
        let zr = base.ring().append(&["z".into()]);
        let cert = EtaleCertificate::StandardEtale { h: zr.parse("z^2 + z + u").unwrap(), g: None };
        let f = cert.construct(&base).unwrap();
        assert_eq!(**f.target(), *alg(F2, &["u", "z"], &["z^2 + z + u"]));
        assert!(etale_check(&cert, &f).unwrap().valid);
        assert!(relative_frobenius_iso(&f).unwrap());
        let bad = EtaleCertificate::StandardEtale { h: zr.parse("z^2 + u").unwrap(), g: None };
        assert!(!etale_check(&bad, &f).unwrap().valid);
        assert!(!relative_frobenius_iso(&AlgebraMap::parse(base.clone(), alg(F2, &["v"], &[]), &["v^2"]).unwrap()).unwrap());
        assert!(relative_frobenius_iso(&AlgebraMap::identity(base.clone())).unwrap());
    }

    #[test]
    fn integrality() {
        let a = alg(Z, &["x"], &["x^2 - 2"]);
        let b = alg(Z, &["u"], &["u^4 - 2"]);
        let f = AlgebraMap::parse(a, b, &["u^2"]).unwrap();
        let cert = IntegralityCertificate::search(&f).unwrap().unwrap();
        cert.check(&f).unwrap();
        let ring = IntegralityCertificate::ambient(&f);
        let wrong = IntegralityCertificate { equations: vec![ring.parse("T^2 - x - 1").unwrap()] };
        assert!(matches!(wrong.check(&f), Err(Error::InvalidCertificate(_))));
    }

    #[test]
    fn dimensions() {
        assert_eq!(alg(F2, &["x"], &[]).krull_dim().unwrap(), 1);
        assert_eq!(alg(F2, &["x", "y"], &["x*y"]).krull_dim().unwrap(), 1);
        assert_eq!(alg(F2, &["x"], &["x^4"]).krull_dim().unwrap(), 0);
        assert!(matches!(alg(Z, &["x"], &[]).krull_dim(), Err(Error::NotApplicable(_))));
        assert!(matches!(alg(F2, &["x"], &["1"]).krull_dim(), Err(Error::NotApplicable(_))));
        assert_eq!(alg(Z, &["x"], &["x^4 - 2"]).dimension().unwrap(), 1);
        assert_eq!(alg(Z, &["x"], &[]).dimension().unwrap(), 2);
        assert_eq!(alg(Z, &["y"], &["3*y", "y^2"]).dimension().unwrap(), 1);
        assert_eq!(alg(Z, &["x", "y"], &["3*y"]).dimension().unwrap(), 2);
        assert_eq!(alg(Z, &["x"], &["4", "2*x"]).dimension().unwrap(), 1);
        assert_eq!(alg(CoefficientRing::IntegersMod(4), &["x"], &[]).dimension().unwrap(), 1);
    }
}
