//! Principal pairs `(A, f)`: torsion, the cyclic presentations
//! `gr^n = A/C_n` with `C_n = (J + (f^{n+1})) : f^n`, maps between them, and
//! the Zariskization oracle.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraMap, IntegralityCertificate, PresentedAlgebra};
use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::poly::Polynomial;
use crate::report::{ConditionReport, Verdict};
use crate::ring::PolyRing;

pub struct PrincipalPair {
    algebra: Arc<PresentedAlgebra>,
    f: Polynomial,
    torsion: OnceLock<(Ideal, u32)>,
    ladder: Mutex<BTreeMap<u32, Ideal>>,
}

impl fmt::Debug for PrincipalPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PrincipalPair {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "({}, {})", self.algebra, self.algebra.render(&self.f))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionAnalysis {
    pub torsion: Ideal,
    /// First `k` with `(J : f^k) = (J : f^{k+1})`.
    pub index: u32,
    pub small_torsion: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPiece {
    pub degree: u32,
    pub ideal: Ideal,
}

impl GradedPiece {
    pub fn is_zero(&self) -> bool {
        self.ideal.is_unit()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrnLemma {
    pub iso: bool,
    pub cond3: bool,
    pub agree: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Exactness {
    pub ex1: bool,
    /// `None` without small torsion.
    pub ex2: Option<bool>,
}

impl PrincipalPair {
    pub fn new(algebra: Arc<PresentedAlgebra>, f: Polynomial) -> Result<Arc<Self>> {
        algebra.ring().check(&f)?;
        let f = algebra.reduce(&f);
        Ok(Arc::new(PrincipalPair { algebra, f, torsion: OnceLock::new(), ladder: Mutex::new(BTreeMap::new()) }))
    }

    pub fn parse(algebra: Arc<PresentedAlgebra>, f: &str) -> Result<Arc<Self>> {
        let f = algebra.parse(f)?;
        PrincipalPair::new(algebra, f)
    }

    pub fn algebra(&self) -> &Arc<PresentedAlgebra> {
        &self.algebra
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        self.algebra.ring()
    }

    pub fn f(&self) -> &Polynomial {
        &self.f
    }

    pub fn relations(&self) -> &Ideal {
        self.algebra.relations()
    }

    /// `f = 0` in `A`, or `A = 0`.
    pub fn is_degenerate(&self) -> bool {
        self.f.is_zero() || self.algebra.is_zero_algebra()
    }

    fn applicable(&self) -> Result<()> {
        if self.is_degenerate() {
            return Err(Error::NotApplicable(format!("degenerate pair {self}")));
        }
        Ok(())
    }

    /// `J + (f)`.
    pub fn ideal(&self) -> Ideal {
        self.algebra.ideal([self.f.clone()])
    }

    /// `A/(f)`.
    pub fn quotient(&self) -> Arc<PresentedAlgebra> {
        PresentedAlgebra::from_ideal(self.ideal())
    }

    /// `(J : f^n)`.
    pub fn bounded_torsion(&self, n: u32) -> Ideal {
        self.relations().colon_power(&self.f, n).expect("same ring")
    }

    fn saturation(&self) -> &(Ideal, u32) {
        self.torsion.get_or_init(|| self.relations().saturate(&self.f).expect("same ring"))
    }

    /// `T = (J : f^∞)`.
    pub fn torsion(&self) -> &Ideal {
        &self.saturation().0
    }

    pub fn saturation_index(&self) -> u32 {
        self.saturation().1
    }

    /// `f·T ⊆ J`.
    pub fn small_torsion(&self) -> bool {
        self.torsion().generators().iter().all(|t| self.relations().contains_poly(&(&self.f * t)))
    }

    pub fn torsion_analysis(&self) -> TorsionAnalysis {
        TorsionAnalysis {
            torsion: self.torsion().clone(),
            index: self.saturation_index(),
            small_torsion: self.small_torsion(),
        }
    }

    /// `C_n`; `C_0 = J + (f)`.
    pub fn c(&self, n: u32) -> Ideal {
        if let Some(c) = self.ladder.lock().expect("ladder lock").get(&n) {
            return c.clone();
        }
        let c = self.algebra.ideal([self.f.pow(n + 1)]).colon_power(&self.f, n).expect("same ring");
        self.ladder.lock().expect("ladder lock").entry(n).or_insert(c).clone()
    }

    pub fn gr_piece(&self, n: u32) -> GradedPiece {
        GradedPiece { degree: n, ideal: self.c(n) }
    }

    /// Multiplication `gr^n -> gr^{n+1}` bijective versus
    /// `(J : f^{n+1}) ⊆ (J : f^n) + (f) + J`.
    pub fn grn_lemma_check(&self, n: u32) -> Result<GrnLemma> {
        if n == 0 {
            return Err(Error::OutOfRange("degree must be at least 1".into()));
        }
        self.applicable()?;
        let iso = self.c(n) == self.c(n + 1);
        let rhs = self.bounded_torsion(n).with([self.f.clone()]);
        let cond3 = rhs.contains(&self.bounded_torsion(n + 1));
        Ok(GrnLemma { iso, cond3, agree: iso == cond3 })
    }

    pub fn exactness_check(&self) -> Result<Exactness> {
        self.applicable()?;
        let ann = self.bounded_torsion(1);
        let ex1 = self.c(1) == ann.with([self.f.clone()]);
        let ex2 = if self.small_torsion() {
            let t = self.torsion();
            let inter = t.intersect(&self.ideal())?;
            Some(*t == ann && self.relations().contains(&inter))
        } else {
            None
        };
        Ok(Exactness { ex1, ex2 })
    }

    /// Nilpotence of `f`; for finitely presented algebras over `ℤ` or `ℤ/m`
    /// this is the Zariskian property.
    pub fn is_zariskian(&self) -> bool {
        self.relations().radical_member(&self.f).expect("same ring")
    }

    /// Whether `z` dies in `(1 + fA)^{-1} A`, i.e. `z ∈ (f·z) + J`.
    pub fn kernel_member(&self, z: &Polynomial) -> bool {
        self.kernel_member_with(z, &self.f)
    }

    fn kernel_member_with(&self, z: &Polynomial, f: &Polynomial) -> bool {
        self.algebra.ideal([f * z]).contains_poly(z)
    }

    fn check_denominator(&self, s: &Polynomial) -> Result<()> {
        let one = self.ring().one();
        if !self.ideal().contains_poly(&(s.clone() - one)) {
            return Err(Error::MalformedDenominator(self.algebra.render(s)));
        }
        Ok(())
    }

    /// `x/s = y/t` in the Zariskization; `s, t ∈ 1 + fA`.
    pub fn fractions_equal(&self, x: &Polynomial, s: &Polynomial, y: &Polynomial, t: &Polynomial) -> Result<bool> {
        self.check_denominator(s)?;
        self.check_denominator(t)?;
        Ok(self.kernel_member(&(x * t - y * s)))
    }

    /// The kernel of `A -> (1 + fA)^{-1} A` is unchanged when `f` is replaced
    /// by `f^n`, on the given sample.
    pub fn power_invariance(&self, n: u32, sample: &[Polynomial]) -> bool {
        let fnn = self.f.pow(n);
        sample.iter().all(|z| self.kernel_member(z) == self.kernel_member_with(z, &fnn))
    }

    /// The graded-piece lemma for `1 ≤ n ≤ n_max`, both exactness statements,
    /// and power invariance for `n ∈ {2, 3}` on a seeded random sample.
    /// A degenerate pair yields a single n/a entry.
    pub fn lemma_report(&self, n_max: u32, sample_size: usize, seed: u64) -> ConditionReport {
        let mut report = ConditionReport::new();
        if let Err(e) = self.applicable() {
            report.not_applicable("grn", None, e.to_string());
            return report;
        }
        for n in 1..=n_max {
            let g = self.grn_lemma_check(n).expect("applicable");
            let note = format!("iso={}, cond3={}", g.iso, g.cond3);
            if g.agree {
                report.push("grn", Some(n as usize), Verdict::Pass, None, Some(note));
            } else {
                report.push("grn", Some(n as usize), Verdict::Fail, Some(format!("degree {n}: {note}")), None);
            }
        }
        let ex = self.exactness_check().expect("applicable");
        report.record("ex1", None, (!ex.ex1).then(|| format!("C_1 != (J : f) + (f) + J = {}", self.bounded_torsion(1).with([self.f.clone()]))));
        match ex.ex2 {
            None => report.not_applicable("ex2", None, "torsion is not small"),
            Some(ok) => report.record("ex2", None, (!ok).then(|| format!("T ∩ (f) + J not in J, T = {}", self.torsion()))),
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sample: Vec<Polynomial> =
            (0..sample_size).map(|_| self.algebra.random_element(&mut rng, 3, 3, 4)).collect();
        for n in [2, 3] {
            let bad = sample.iter().find(|z| {
                self.kernel_member(z) != self.kernel_member_with(z, &self.f.pow(n))
            });
            let outcome = bad.map(|z| format!("{} with f^{n}", self.algebra.render(z)));
            report.push(
                "power-invariance",
                Some(n as usize),
                Verdict::from_bool(outcome.is_none()),
                outcome,
                Some(format!("sample of {sample_size}, seed {seed}")),
            );
        }
        report
    }
}

/// A ring map `A/(f) -> B/(g)` given by a lift `Φ̂` of the ambient variables.
#[derive(Clone, Debug)]
pub struct PairMap {
    source: Arc<PrincipalPair>,
    target: Arc<PrincipalPair>,
    lift: Vec<Polynomial>,
}

impl PairMap {
    pub fn new(source: Arc<PrincipalPair>, target: Arc<PrincipalPair>, lift: Vec<Polynomial>) -> Result<Self> {
        // Verified by constructing the quotient map.
        AlgebraMap::new(source.quotient(), target.quotient(), lift.clone())?;
        let lift = lift.iter().map(|p| target.ring().normalize(p)).collect();
        Ok(PairMap { source, target, lift })
    }

    pub fn identity(pair: Arc<PrincipalPair>) -> Self {
        let lift = (0..pair.ring().nvars()).map(|i| pair.ring().var(i)).collect();
        PairMap { source: pair.clone(), target: pair, lift }
    }

    pub fn source(&self) -> &Arc<PrincipalPair> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PrincipalPair> {
        &self.target
    }

    pub fn lift(&self) -> &[Polynomial] {
        &self.lift
    }

    /// `Φ̂(a)` in the target ambient.
    pub fn apply(&self, a: &Polynomial) -> Polynomial {
        self.target.ring().normalize(&a.substitute(&self.lift, self.target.ring().nvars()))
    }

    fn ambient_map(&self, k: &Ideal) -> Result<AlgebraMap> {
        AlgebraMap::new(
            PresentedAlgebra::polynomial_ring(self.source.ring().clone()),
            PresentedAlgebra::from_ideal(k.clone()),
            self.lift.clone(),
        )
    }

    /// `Φ̂^{-1}(K)` for an ideal `K` of the target ambient.
    pub fn preimage(&self, k: &Ideal) -> Result<Ideal> {
        let pre = self.ambient_map(k)?.kernel()?;
        Ideal::new(self.source.ring().clone(), pre.generators().to_vec())
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.source.ideal().contains(&self.preimage(&self.target.ideal())?))
    }

    pub fn is_surjective(&self) -> Result<bool> {
        let m = self.ambient_map(&self.target.ideal())?;
        for i in 0..self.target.ring().nvars() {
            if m.image_member(&self.target.ring().var(i))?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Assignment `z ↦ y` on generators of the source torsion ideal.
#[derive(Clone, Debug)]
pub struct TorsionMap {
    source: Arc<PrincipalPair>,
    target: Arc<PrincipalPair>,
    assignments: Vec<(Polynomial, Polynomial)>,
}

impl TorsionMap {
    pub fn new(source: Arc<PrincipalPair>, target: Arc<PrincipalPair>, assignments: Vec<(Polynomial, Polynomial)>) -> Result<Self> {
        for (z, y) in &assignments {
            if !source.torsion().contains_poly(z) {
                return Err(Error::Precondition(format!("`{}` is not torsion", source.algebra().render(z))));
            }
            if !target.torsion().contains_poly(y) {
                return Err(Error::Precondition(format!("`{}` is not torsion", target.algebra().render(y))));
            }
        }
        let zs = Ideal::new(source.ring().clone(), assignments.iter().map(|(z, _)| z.clone()).collect())?;
        if let Some(t) = source.relations().sum(&zs).first_outside(source.torsion()) {
            return Err(Error::Precondition(format!("torsion generator `{}` unassigned", source.algebra().render(&t))));
        }
        Ok(TorsionMap { source, target, assignments })
    }

    /// Generators of `T` outside `J`.
    pub fn torsion_generators(pair: &PrincipalPair) -> Vec<Polynomial> {
        pair.torsion().canonical_generators().into_iter().filter(|z| !pair.relations().contains_poly(z)).collect()
    }

    pub fn zero(source: Arc<PrincipalPair>, target: Arc<PrincipalPair>) -> Self {
        let zero = target.ring().zero();
        let assignments = TorsionMap::torsion_generators(&source).into_iter().map(|z| (z, zero.clone())).collect();
        TorsionMap { source, target, assignments }
    }

    pub fn identity(pair: Arc<PrincipalPair>) -> Self {
        let assignments = TorsionMap::torsion_generators(&pair).into_iter().map(|z| (z.clone(), z)).collect();
        TorsionMap { source: pair.clone(), target: pair, assignments }
    }

    pub fn assignments(&self) -> &[(Polynomial, Polynomial)] {
        &self.assignments
    }

    /// The assigned image of `z`, up to the target relations.
    pub fn image_of(&self, z: &Polynomial) -> Option<&Polynomial> {
        self.assignments.iter().find(|(a, _)| self.source.algebra().elements_equal(a, z)).map(|(_, y)| y)
    }

    /// Agreement on every assigned generator of `self`.
    pub fn agrees_with(&self, other: &TorsionMap) -> bool {
        self.assignments.iter().all(|(z, y)| {
            other.image_of(z).is_some_and(|w| self.target.algebra().elements_equal(y, w))
        })
    }

    /// First generator where `Φ̂(z) ≢ y` modulo `(g) + J_B`.
    pub fn square_violation(&self, phi0: &PairMap) -> Option<Polynomial> {
        let tgt = self.target.ideal();
        self.assignments
            .iter()
            .find(|(z, y)| !tgt.contains_poly(&(phi0.apply(z) - y.clone())))
            .map(|(z, _)| z.clone())
    }

    /// `T_A ∩ Φ̂^{-1}((g) + J_B) ⊆ J_A`.
    pub fn is_injective(&self, phi0: &PairMap) -> Result<bool> {
        let k = phi0.preimage(&self.target.ideal())?;
        Ok(self.source.relations().contains(&self.source.torsion().intersect(&k)?))
    }

    /// `T_B ⊆ (images) + J_B`; the image is an ideal when `Φ⁰` is surjective.
    pub fn is_surjective(&self) -> bool {
        let img = self.target.algebra().ideal(self.assignments.iter().map(|(_, y)| y.clone()));
        img.contains(self.target.torsion())
    }

    /// A torsion generator of the target outside the image, if any.
    pub fn surjectivity_witness(&self) -> Option<Polynomial> {
        let img = self.target.algebra().ideal(self.assignments.iter().map(|(_, y)| y.clone()));
        TorsionMap::torsion_generators(&self.target).into_iter().find(|t| !img.contains_poly(t))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeCheck {
    pub degree: u32,
    pub well_defined: bool,
    pub injective: bool,
    /// A generator of `C_n^A` whose image leaves the target piece.
    pub witness: Option<Polynomial>,
}

/// `Φⁿ(a·fⁿ) = Φ̂(a)·b₁ⁿ`, where `b₁` represents `Φ¹(f mod I²)` (default `g`).
#[derive(Clone, Debug)]
pub struct GradedMapFamily {
    phi0: PairMap,
    b1: Polynomial,
    degrees: Vec<DegreeCheck>,
    cartesian: Option<bool>,
}

impl GradedMapFamily {
    pub fn new(phi0: PairMap, b1: Option<Polynomial>, n_max: u32) -> Result<Self> {
        let (src, tgt) = (phi0.source.clone(), phi0.target.clone());
        let b1 = b1.unwrap_or_else(|| tgt.f().clone());
        tgt.ring().check(&b1)?;
        if !tgt.ideal().contains_poly(&b1) {
            return Err(Error::Precondition(format!("`{}` is not in the target ideal", tgt.algebra().render(&b1))));
        }
        let mut degrees = Vec::new();
        for n in 0..=n_max {
            let d = tgt.algebra().ideal([tgt.f().pow(n + 1)]).colon_power(&b1, n)?;
            let c = src.c(n);
            let witness = c.generators().iter().find(|g| !d.contains_poly(&phi0.apply(g))).cloned();
            let injective = witness.is_none() && c.contains(&phi0.preimage(&d)?);
            degrees.push(DegreeCheck { degree: n, well_defined: witness.is_none(), injective, witness });
        }
        Ok(GradedMapFamily { phi0, b1, degrees, cartesian: None })
    }

    pub fn phi0(&self) -> &PairMap {
        &self.phi0
    }

    pub fn b1(&self) -> &Polynomial {
        &self.b1
    }

    pub fn degrees(&self) -> &[DegreeCheck] {
        &self.degrees
    }

    pub fn n_max(&self) -> u32 {
        self.degrees.len() as u32 - 1
    }

    pub fn is_well_defined(&self) -> bool {
        self.degrees.iter().all(|d| d.well_defined)
    }

    pub fn is_injective(&self) -> bool {
        self.degrees.iter().all(|d| d.injective)
    }

    /// Whether the torsion square is cartesian; set by [`extend_to_graded`].
    pub fn cartesian(&self) -> Option<bool> {
        self.cartesian
    }

    /// `b₁ ≡ g` modulo `(g²) + J_B`.
    pub fn anchor_holds(&self) -> bool {
        let tgt = &self.phi0.target;
        let g = tgt.f();
        tgt.algebra().ideal([g.pow(2)]).contains_poly(&(self.b1.clone() - g.clone()))
    }
}

fn require_small_torsion(pair: &PrincipalPair) -> Result<()> {
    if !pair.small_torsion() {
        return Err(Error::Precondition(format!("{pair} does not have small torsion")));
    }
    Ok(())
}

/// Extends `Φ⁰` along a torsion map whose square commutes.
pub fn extend_to_graded(phi0: &PairMap, tor: &TorsionMap, n_max: u32) -> Result<GradedMapFamily> {
    require_small_torsion(&phi0.source)?;
    require_small_torsion(&phi0.target)?;
    if let Some(z) = tor.square_violation(phi0) {
        return Err(Error::DiagramViolation(phi0.source.algebra().render(&z)));
    }
    let mut family = GradedMapFamily::new(phi0.clone(), None, n_max)?;
    let (src, tgt) = (&phi0.source, &phi0.target);
    let pre = phi0.preimage(&tgt.torsion().sum(&tgt.ideal()))?;
    family.cartesian = Some(src.torsion().sum(&src.ideal()).contains(&pre));
    Ok(family)
}

/// Recovers the torsion map of a graded family with `Φ¹(f) ≡ g`.
pub fn restrict_to_torsion(family: &GradedMapFamily) -> Result<TorsionMap> {
    let (src, tgt) = (family.phi0.source.clone(), family.phi0.target.clone());
    require_small_torsion(&src)?;
    require_small_torsion(&tgt)?;
    if !family.anchor_holds() {
        return Err(Error::AnchorViolation(format!(
            "Φ¹ sends {} to {}, not {} modulo the square",
            src.algebra().render(src.f()),
            tgt.algebra().render(&family.b1),
            tgt.algebra().render(tgt.f())
        )));
    }
    let inter = tgt.torsion().intersect(&tgt.ideal())?;
    if let Some(w) = tgt.relations().first_outside(&inter) {
        return Err(Error::ExactnessViolation(format!("`{}` is torsion and divisible", tgt.algebra().render(&w))));
    }
    let map = decompose_torsion(&family.phi0)?;
    if let Some(z) = map.square_violation(&family.phi0) {
        return Err(Error::DiagramViolation(map.source.algebra().render(&z)));
    }
    Ok(map)
}

/// The torsion map forced by `Φ̂`: each torsion generator `z` of the source
/// goes to the torsion part `y` of `Φ̂(z) = y + g·c`.
pub fn decompose_torsion(phi0: &PairMap) -> Result<TorsionMap> {
    let (src, tgt) = (phi0.source.clone(), phi0.target.clone());
    let tgens = TorsionMap::torsion_generators(&tgt);
    let mut gens = tgens.clone();
    gens.push(tgt.f().clone());
    gens.extend(tgt.relations().generators().iter().cloned());
    let split = Ideal::new(tgt.ring().clone(), gens)?;
    let mut assignments = Vec::new();
    for z in TorsionMap::torsion_generators(&src) {
        let w = phi0.apply(&z);
        let cof = split.membership_certificate(&w)?.ok_or_else(|| {
            Error::ExactnessViolation(format!(
                "image `{}` of torsion element `{}` has no torsion part",
                tgt.algebra().render(&w),
                src.algebra().render(&z)
            ))
        })?;
        let y = tgens.iter().zip(&cof).fold(tgt.ring().zero(), |acc, (t, c)| acc + c * t);
        assignments.push((z, tgt.algebra().reduce(&y)));
    }
    Ok(TorsionMap { source: src, target: tgt, assignments })
}

/// Checks the comparison `B ⊗_A A^Zar -> B^Zar` along an integral map
/// `φ: A -> B`, where `(A, f0)` is `pair` and the target pair is generated by
/// `φ(f0)`. A declared target generator must give the same ideal.
pub fn intzar_check(
    pair: &PrincipalPair,
    phi: &AlgebraMap,
    cert: &IntegralityCertificate,
    declared: Option<&Polynomial>,
    sample_size: usize,
    seed: u64,
) -> Result<ConditionReport> {
    if **phi.source() != **pair.algebra() {
        return Err(Error::AmbientMismatch(format!("{} is not the source of {}", pair.algebra(), phi)));
    }
    cert.check(phi).map_err(|e| Error::Precondition(e.to_string()))?;
    let b = phi.target().clone();
    let g = phi.apply(pair.f());
    let jb = b.ideal([g.clone()]);
    if let Some(d) = declared {
        if b.ideal([d.clone()]) != jb {
            return Err(Error::Precondition(format!(
                "not adic: ({}) differs from the extended ideal ({})",
                b.render(d),
                b.render(&g)
            )));
        }
    }
    let target_pair = PrincipalPair::new(b.clone(), g.clone())?;
    let ambient_a = PresentedAlgebra::polynomial_ring(pair.ring().clone());
    let lift = phi.images().to_vec();
    // Left route: some s ∈ 1 + f0·A with φ(s)·z = 0.
    let dies_left = |z: &Polynomial| -> Result<bool> {
        let ann = b.relations().colon(z)?;
        let m = AlgebraMap::new(ambient_a.clone(), PresentedAlgebra::from_ideal(ann), lift.clone())?;
        Ok(pair.algebra().ideal([pair.f().clone()]).sum(&m.kernel()?).is_unit())
    };
    // Inverting t is possible after inverting φ(1 + f0·A).
    let invertible_left = |t: &Polynomial| -> Result<bool> {
        let m = AlgebraMap::new(ambient_a.clone(), PresentedAlgebra::from_ideal(b.ideal([t.clone()])), lift.clone())?;
        Ok(pair.algebra().ideal([pair.f().clone()]).sum(&m.kernel()?).is_unit())
    };
    let mut report = ConditionReport::new();
    report.pass_with("intzar.adic", None, "ideal of definition extends");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = pair.algebra();
    let mut eq_failure = None;
    let mut frac_failure = None;
    for _ in 0..sample_size {
        let x = b.random_element(&mut rng, 3, 3, 3);
        let y = b.random_element(&mut rng, 3, 3, 3);
        let s = a.reduce(&(a.ring().one() + pair.f() * &a.random_element(&mut rng, 2, 2, 3)));
        let t = a.reduce(&(a.ring().one() + pair.f() * &a.random_element(&mut rng, 2, 2, 3)));
        let z = &x * &phi.apply(&t) - &y * &phi.apply(&s);
        let left = dies_left(&z)?;
        let right = target_pair.kernel_member(&z);
        if left != right && eq_failure.is_none() {
            eq_failure = Some(format!("{} (left {left}, right {right})", b.render(&z)));
        }
        let den = b.reduce(&(b.ring().one() + &g * &b.random_element(&mut rng, 2, 2, 3)));
        if !invertible_left(&den)? && frac_failure.is_none() {
            frac_failure = Some(format!("denominator {}", b.render(&den)));
        }
    }
    report.record("intzar.equality", None, eq_failure);
    report.record("intzar.fractions", None, frac_failure);
    report.provenance(format!("intzar sampled {sample_size} fractions, seed {seed}"));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::CoefficientRing;
    use crate::report::Verdict;

    const Z: CoefficientRing = CoefficientRing::Integers;
    const F2: CoefficientRing = CoefficientRing::IntegersMod(2);

    fn pair(c: CoefficientRing, vars: &[&str], rels: &[&str], f: &str) -> Arc<PrincipalPair> {
        PrincipalPair::parse(PresentedAlgebra::present(c, vars, rels).unwrap(), f).unwrap()
    }

    fn ideal(p: &PrincipalPair, gens: &[&str]) -> Ideal {
        Ideal::parse(p.ring().clone(), gens).unwrap()
    }

    #[test]
    fn torsion_examples() {
        let p = pair(Z, &["y"], &["3*y", "y^2"], "3");
        let t = p.torsion_analysis();
        assert_eq!(t.torsion, ideal(&p, &["y"]));
        assert!(t.small_torsion);
        let z = pair(Z, &[], &[], "2");
        assert!(z.torsion().is_zero() && z.small_torsion());
        let n = pair(F2, &["x"], &["x^4"], "x");
        assert!(n.torsion().is_unit());
        assert!(!n.small_torsion());
    }

    #[test]
    fn graded_pieces() {
        let z = pair(Z, &[], &[], "3");
        for n in 0..4 {
            assert_eq!(z.c(n), ideal(&z, &["3"]));
        }
        let p = pair(Z, &["y"], &["3*y", "y^2"], "3");
        assert_eq!(p.c(0), ideal(&p, &["3", "y^2"]));
        assert_eq!(p.c(1), ideal(&p, &["3", "y"]));
        assert_eq!(p.gr_piece(3).ideal, ideal(&p, &["3", "y"]));
    }

    #[test]
    fn lemma_checks() {
        let p = pair(Z, &["y"], &["3*y", "y^2"], "3");
        assert_eq!(p.grn_lemma_check(1).unwrap(), GrnLemma { iso: true, cond3: true, agree: true });
        let n = pair(F2, &["x"], &["x^4"], "x");
        // gr^3 = F2·x^3 while gr^4 = 0.
        assert_eq!(n.grn_lemma_check(3).unwrap(), GrnLemma { iso: false, cond3: false, agree: true });
        assert_eq!(n.grn_lemma_check(4).unwrap(), GrnLemma { iso: true, cond3: true, agree: true });
        assert!(n.grn_lemma_check(0).is_err());
        let d = pair(Z, &["y"], &["y^2"], "y");
        assert!(d.exactness_check().unwrap().ex1);
        assert_eq!(p.exactness_check().unwrap(), Exactness { ex1: true, ex2: Some(true) });
        assert_eq!(pair(Z, &[], &[], "3").exactness_check().unwrap().ex2, Some(true));
        assert!(matches!(pair(Z, &["y"], &[], "0").grn_lemma_check(1), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn graded_families() {
        let p = pair(Z, &["y"], &["3*y", "y^2"], "3");
        let id = PairMap::identity(p.clone());
        let tor = TorsionMap::identity(p.clone());
        let fam = extend_to_graded(&id, &tor, 4).unwrap();
        assert!(fam.is_well_defined() && fam.is_injective());
        assert_eq!(fam.cartesian(), Some(true));
        let back = restrict_to_torsion(&fam).unwrap();
        assert!(back.agrees_with(&tor) && tor.agrees_with(&back));
        let bad = GradedMapFamily::new(id.clone(), Some(p.ring().constant(9)), 2).unwrap();
        assert!(matches!(restrict_to_torsion(&bad), Err(Error::AnchorViolation(_))));
        let zero = TorsionMap::zero(p.clone(), p.clone());
        assert!(matches!(extend_to_graded(&id, &zero, 2), Err(Error::DiagramViolation(_))));
    }

    #[test]
    fn frobenius_factored_family() {
        let a = pair(F2, &["x1"], &[], "x1");
        let b = pair(F2, &["x0"], &[], "x0");
        let phi0 = PairMap::new(a.clone(), b.clone(), vec![b.ring().zero()]).unwrap();
        let fam = extend_to_graded(&phi0, &TorsionMap::zero(a, b), 4).unwrap();
        assert!(fam.is_well_defined() && fam.is_injective());
        assert!(restrict_to_torsion(&fam).unwrap().assignments().is_empty());
    }

    #[test]
    fn zariskization_oracle() {
        assert!(pair(CoefficientRing::IntegersMod(8), &["x"], &["x^2 - 2"], "x").is_zariskian());
        assert!(!pair(Z, &["x"], &["x^2 - 2"], "x").is_zariskian());
        let p = pair(Z, &["z"], &["z*(1 - 3*z)"], "3");
        let z = p.ring().var(0);
        assert!(p.kernel_member(&z));
        let one = p.ring().one();
        assert!(p.fractions_equal(&z, &one, &p.ring().zero(), &one).unwrap());
        assert!(p.power_invariance(2, &[z.clone(), one.clone()]));
        assert!(matches!(p.fractions_equal(&z, &p.ring().constant(2), &z, &one), Err(Error::MalformedDenominator(_))));
    }

    #[test]
    fn intzar() {
        let zz = pair(Z, &[], &[], "2");
        let b = PresentedAlgebra::present(Z, &["x"], &["x^2 - 2"]).unwrap();
        let phi = AlgebraMap::new(zz.algebra().clone(), b.clone(), vec![]).unwrap();
        let cert = IntegralityCertificate::search(&phi).unwrap().unwrap();
        let r = intzar_check(&zz, &phi, &cert, None, 8, 7).unwrap();
        assert_eq!(r.overall(), Verdict::Pass, "{r}");
        let x = b.var(0);
        assert!(matches!(intzar_check(&zz, &phi, &cert, Some(&x), 8, 7), Err(Error::Precondition(_))));
        let id = AlgebraMap::identity(zz.algebra().clone());
        let cert = IntegralityCertificate::search(&id).unwrap().unwrap();
        assert_eq!(intzar_check(&zz, &id, &cert, None, 8, 7).unwrap().overall(), Verdict::Pass);
    }
}
