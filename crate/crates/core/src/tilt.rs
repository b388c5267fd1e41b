//! Small tilts truncated at depth `m`.
//!
//! A depth-`m` element at level `i` is a sequence `(a_0, ..., a_m)` with
//! `a_j ∈ R_{i+j}/I_0` and `F_{i+j}(a_{j+1}) = a_j`. Such a sequence is
//! determined by `a_m`, so the depth-`m` tilt is modelled on `R_{i+m}/I_0`
//! with the 0-th projection `G = F_i ∘ ... ∘ F_{i+m-1}`.

use std::fmt;

use crate::algebra::{AlgebraMap, PresentedAlgebra};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::report::ConditionReport;
use crate::tower::{ideal_difference, FrobeniusProjection, Tower};
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TiltElement {
    level: usize,
    components: Vec<Polynomial>,
}

impl TiltElement {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn depth(&self) -> usize {
        self.components.len() - 1
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }
}

/// The depth-`m` small tilt of a tower at level `i`.
#[derive(Clone, Debug)]
pub struct SmallTilt {
    tower: Tower,
    level: usize,
    projections: Vec<FrobeniusProjection>,
    quotients: Vec<Arc<PresentedAlgebra>>,
    f_flat: TiltElement,
}

impl SmallTilt {
    pub fn new(tower: &Tower, level: usize, depth: usize) -> Result<Self> {
        if level + depth > tower.top() {
            return Err(Error::OutOfRange(format!(
                "depth {depth} at level {level} exceeds the truncation at level {}",
                tower.top()
            )));
        }
        let projections =
            (level..level + depth).map(|j| tower.frobenius_projection(j)).collect::<Result<Vec<_>>>()?;
        let quotients = (level..=level + depth).map(|j| tower.derived()[j].quotient.clone()).collect();
        let mut tilt = SmallTilt {
            tower: tower.clone(),
            level,
            projections,
            quotients,
            f_flat: TiltElement { level, components: Vec::new() },
        };
        tilt.f_flat = tilt.construct_f_flat()?;
        Ok(tilt)
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn depth(&self) -> usize {
        self.projections.len()
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    /// `R_{i+j}/I_0`.
    pub fn component_ring(&self, j: usize) -> &Arc<PresentedAlgebra> {
        &self.quotients[j]
    }

    /// `(0, f_1, F^{-1}(f_1), ...)`, by successive normal-form preimages.
    fn construct_f_flat(&self) -> Result<TiltElement> {
        let q0 = &self.quotients[0];
        let mut components = vec![q0.ring().zero()];
        if self.depth() == 0 {
            return Ok(TiltElement { level: self.level, components });
        }
        let f1 = self
            .tower
            .derived()
            .get(self.level + 1)
            .and_then(|d| d.f1.clone())
            .ok_or_else(|| Error::Precondition("the tilt generator needs f1".into()))?;
        components.push(self.quotients[1].reduce(&f1));
        for j in 2..=self.depth() {
            let prev = &components[j - 1];
            let pre = self.projections[j - 1].map.image_member(prev)?.ok_or_else(|| {
                Error::NoPreimage(format!(
                    "compatibility step {j}: {} has no preimage under F_{}",
                    self.quotients[j - 1].render(prev),
                    self.level + j - 1
                ))
            })?;
            components.push(pre);
        }
        Ok(TiltElement { level: self.level, components })
    }

    /// Generator of the kernel of the 0-th projection.
    pub fn f_flat(&self) -> &TiltElement {
        &self.f_flat
    }

    /// Builds an element, verifying `F(a_{j+1}) = a_j` at every step.
    pub fn element(&self, components: Vec<Polynomial>) -> Result<TiltElement> {
        if components.len() != self.depth() + 1 {
            return Err(Error::OutOfRange(format!("{} components at depth {}", components.len(), self.depth())));
        }
        let components: Vec<_> = components.iter().enumerate().map(|(j, a)| self.quotients[j].reduce(a)).collect();
        for j in 0..self.depth() {
            let image = self.projections[j].apply(&components[j + 1]);
            if !self.quotients[j].elements_equal(&image, &components[j]) {
                return Err(Error::DiagramViolation(format!(
                    "compatibility step {j}: F({}) = {} but a_{j} = {}",
                    self.quotients[j + 1].render(&components[j + 1]),
                    self.quotients[j].render(&image),
                    self.quotients[j].render(&components[j])
                )));
            }
        }
        Ok(TiltElement { level: self.level, components })
    }

    /// The unique compatible sequence with last component `top`.
    pub fn from_top(&self, top: &Polynomial) -> TiltElement {
        let m = self.depth();
        let mut components = vec![self.quotients[m].reduce(top)];
        for j in (0..m).rev() {
            let next = self.quotients[j].reduce(&self.projections[j].apply(&components[0]));
            components.insert(0, next);
        }
        TiltElement { level: self.level, components }
    }

    fn zip(&self, a: &TiltElement, b: &TiltElement, op: impl Fn(&Polynomial, &Polynomial) -> Polynomial) -> TiltElement {
        let components = (0..=self.depth()).map(|j| self.quotients[j].reduce(&op(&a.components[j], &b.components[j]))).collect();
        TiltElement { level: self.level, components }
    }

    pub fn add(&self, a: &TiltElement, b: &TiltElement) -> TiltElement {
        self.zip(a, b, |x, y| x.clone() + y.clone())
    }

    pub fn mul(&self, a: &TiltElement, b: &TiltElement) -> TiltElement {
        self.zip(a, b, |x, y| x * y)
    }

    pub fn neg(&self, a: &TiltElement) -> TiltElement {
        self.zip(a, a, |x, _| -x.clone())
    }

    pub fn one(&self) -> TiltElement {
        self.from_top(&self.quotients[self.depth()].ring().one())
    }

    pub fn zero(&self) -> TiltElement {
        self.from_top(&self.quotients[self.depth()].ring().zero())
    }

    /// Componentwise equality: "equal to depth `m`".
    pub fn equal(&self, a: &TiltElement, b: &TiltElement) -> bool {
        (0..=self.depth()).all(|j| self.quotients[j].elements_equal(&a.components[j], &b.components[j]))
    }

    /// Whether every step of `a` is compatible.
    pub fn is_compatible(&self, a: &TiltElement) -> bool {
        (0..self.depth()).all(|j| {
            self.quotients[j].elements_equal(&self.projections[j].apply(&a.components[j + 1]), &a.components[j])
        })
    }

    /// `G: R_{i+m}/I_0 -> R_i/I_0`.
    pub fn projection(&self) -> Result<AlgebraMap> {
        let m = self.depth();
        let mut g = AlgebraMap::identity(self.quotients[m].clone());
        for f in self.projections.iter().rev() {
            g = g.then(&f.map)?;
        }
        Ok(g)
    }

    /// Surjectivity of `G` and `ker G = (f♭)`, exactly at depth `m`.
    pub fn isomres(&self) -> Result<ConditionReport> {
        let mut r = ConditionReport::new();
        let g = self.projection()?;
        let q0 = &self.quotients[0];
        let missing = (0..q0.nvars()).find(|&k| !matches!(g.image_member(&q0.var(k)), Ok(Some(_))));
        let top = &self.quotients[self.depth()];
        let kernel = g.kernel()?;
        let expected = top.ideal([self.f_flat.components[self.depth()].clone()]);
        let witness = match missing {
            Some(k) => Some(format!("{} is not hit by the 0-th projection", q0.ring().vars()[k])),
            None => ideal_difference(&kernel, &expected).map(|w| format!("kernel differs at {}", top.render(&w))),
        };
        r.record("isomres", Some(self.level), witness);
        r.provenance(format!("verified to depth {}", self.depth()));
        Ok(r)
    }

    pub fn render(&self, a: &TiltElement) -> String {
        let parts: Vec<String> = (0..=self.depth()).map(|j| self.quotients[j].render(&a.components[j])).collect();
        format!("({})", parts.join(", "))
    }
}

impl fmt::Display for SmallTilt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "small tilt at level {} to depth {}", self.level, self.depth())
    }
}

impl Tower {
    pub fn small_tilt(&self, level: usize, depth: usize) -> Result<SmallTilt> {
        SmallTilt::new(self, level, depth)
    }

    /// Degree-0 and degree-`n` comparisons of `gr(R_i)` with the graded tilt.
    ///
    /// Degree `n` compares `G^{-1}(C_n + I_0)` with `((f♭^{n+1}) + I_0 + J) : f♭^n`
    /// in `R_{i+m}`, which is exact for `n < p^m`; the ladder `C_n = C_1` on the
    /// `R_i` side carries the comparison to all higher degrees.
    pub fn tilt_gr_comparison(&self, level: usize, depth: usize, n_max: u32) -> Result<ConditionReport> {
        let tilt = self.small_tilt(level, depth)?;
        let mut report = tilt.isomres()?;
        let pair = &self.derived()[level].pair0;
        if depth == 0 {
            report.pass_with("gr-tilt", Some(level), "degree 0 only");
            return Ok(report);
        }
        let c1 = pair.c(1);
        let ladder = (2..=n_max).find(|&n| pair.c(n) != c1);
        report.record("ladder", Some(level), ladder.map(|n| format!("C_{n} != C_1 on R_{level}")));
        let top_level = level + depth;
        let r_top = self.level(top_level);
        let f0_top = self.derived()[top_level].f0.clone();
        let fb = tilt.f_flat.components[depth].clone();
        let g = tilt.projection()?;
        let bound = self.p().saturating_pow(depth as u32).saturating_sub(1).min(n_max as u64).max(1) as u32;
        let mut witness = None;
        for n in 1..=bound {
            let tilt_side = r_top.ideal([fb.pow(n + 1), f0_top.clone()]).colon_power(&fb, n)?;
            let target = PresentedAlgebra::from_ideal(self.derived()[level].quotient.relations().sum(&pair.c(n)));
            let pre = AlgebraMap::new(g.source().clone(), target, g.images().to_vec())?.kernel()?;
            let tilt_side = tilt.quotients[depth].ideal(tilt_side.generators().iter().cloned());
            if let Some(w) = ideal_difference(&pre, &tilt_side) {
                witness = Some(format!("degree {n}: {}", r_top.render(&w)));
                break;
            }
        }
        report.record("gr-tilt", Some(level), witness);
        report.provenance(format!("graded comparison in degrees 0..={bound}, verified to depth {depth}"));
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{self, Family, FAMILIES};
    use crate::report::Verdict;
    use crate::tower::ZariskianSemantics;

    const C: ZariskianSemantics = ZariskianSemantics::Computed;

    #[test]
    fn char2_tilt_generator() {
        let t = corpus::family(Family::Char2, 3, C);
        let tilt = t.small_tilt(0, 2).unwrap();
        assert_eq!(tilt.render(tilt.f_flat()), "(0, x1, x2)");
        assert!(tilt.is_compatible(tilt.f_flat()));
        assert_eq!(tilt.component_ring(2).relations().generators().len(), 1);
    }

    #[test]
    fn mixed_tilt_generator() {
        let t = corpus::family(Family::Mixed(2), 3, C);
        let tilt = t.small_tilt(0, 2).unwrap();
        assert_eq!(tilt.render(tilt.f_flat()), "(0, x, x)");
    }

    #[test]
    fn depth_zero_collapses() {
        let t = corpus::family(Family::Mixed(2), 3, C);
        let tilt = t.small_tilt(1, 0).unwrap();
        assert_eq!(tilt.f_flat().components().len(), 1);
        assert!(tilt.f_flat().components()[0].is_zero());
        assert_eq!(tilt.isomres().unwrap().verdict("isomres"), Verdict::Pass);
        let r = t.tilt_gr_comparison(1, 0, 4).unwrap();
        assert_eq!(r.verdict("gr-tilt"), Verdict::Pass);
    }

    #[test]
    fn arithmetic_preserves_compatibility() {
        let t = corpus::family(Family::Torsion, 3, C);
        let tilt = t.small_tilt(0, 3).unwrap();
        let q = tilt.component_ring(3);
        let a = tilt.from_top(&(q.var(0) + q.var(1).pow(3)));
        let b = tilt.from_top(&(q.var(1) + q.ring().one()));
        for x in [tilt.add(&a, &b), tilt.mul(&a, &b), tilt.neg(&a), tilt.mul(&tilt.f_flat().clone(), &a)] {
            assert!(tilt.is_compatible(&x));
        }
        assert!(tilt.equal(&tilt.mul(&a, &tilt.one()), &a));
        assert!(tilt.equal(&tilt.add(&a, &tilt.neg(&a)), &tilt.zero()));
    }

    #[test]
    fn incompatible_components_are_rejected() {
        let t = corpus::family(Family::Char2, 3, C);
        let tilt = t.small_tilt(0, 1).unwrap();
        let q1 = tilt.component_ring(1);
        let bad = tilt.element(vec![tilt.component_ring(0).ring().one(), q1.var(0)]);
        assert!(matches!(bad, Err(Error::DiagramViolation(_))));
        assert!(matches!(t.small_tilt(2, 2), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn comparisons_pass_on_corpus() {
        for f in FAMILIES {
            let t = corpus::family(f, 3, C);
            let r = t.tilt_gr_comparison(0, 3, 4).unwrap();
            for c in ["isomres", "ladder", "gr-tilt"] {
                assert_eq!(r.verdict(c), Verdict::Pass, "{} {c}\n{r}", f.name());
            }
        }
    }
}
