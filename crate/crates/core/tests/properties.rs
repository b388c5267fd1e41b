//! Property tests for the symbolic kernel, principal pairs and towers.

use std::sync::Arc;

use perftower::corpus::{self, FAMILIES};
use perftower::report::Verdict;
use perftower::tower::ZariskianSemantics;
use perftower::{CoefficientRing, Ideal, PolyRing, Polynomial, PresentedAlgebra, PrincipalPair};
use proptest::prelude::*;

const RINGS: [CoefficientRing; 4] =
    [CoefficientRing::IntegersMod(2), CoefficientRing::IntegersMod(3), CoefficientRing::IntegersMod(4), CoefficientRing::Integers];

/// Polynomial text in `x, y` with small coefficients and degrees.
fn poly_text() -> impl Strategy<Value = String> {
    small_poly_text(4, 3, 5)
}

/// At most `terms` terms, each of total degree at most `degree` with
/// coefficient at most `coeff` in absolute value.
fn small_poly_text(degree: u32, terms: usize, coeff: i64) -> impl Strategy<Value = String> {
    let term = (-coeff..=coeff, 0..=degree, 0..=degree).prop_filter("total degree", move |(_, a, b)| a + b <= degree);
    prop::collection::vec(term, 1..=terms).prop_map(|terms| {
        terms.into_iter().fold(String::from("0"), |s, (c, a, b)| {
            let sign = if c < 0 { '-' } else { '+' };
            format!("{s} {sign} {}*x^{a}*y^{b}", c.abs())
        })
    })
}

fn ring(c: &CoefficientRing) -> Arc<PolyRing> {
    PolyRing::new(c.clone(), vec!["x".into(), "y".into()]).unwrap()
}

fn parse(r: &PolyRing, s: &str) -> Polynomial {
    r.parse(s).unwrap()
}

fn membership_case(c: &CoefficientRing, gens: &[String], p: &str, cofs: &[String]) -> Result<(), TestCaseError> {
    let r = ring(c);
    let gens: Vec<Polynomial> = gens.iter().map(|g| parse(&r, g)).collect();
    let ideal = Ideal::new(r.clone(), gens.clone()).unwrap();
    let p = parse(&r, p);
    // Membership is exactly vanishing of the normal form.
    prop_assert_eq!(ideal.contains_poly(&p), ideal.normal_form(&p).unwrap().is_zero());
    // A combination of the generators is a member, with reconstructing cofactors.
    let combo = gens.iter().zip(cofs).fold(r.zero(), |acc, (g, c)| acc + g * &parse(&r, c));
    prop_assert!(ideal.contains_poly(&combo));
    let cert = ideal.membership_certificate(&combo).unwrap().expect("member");
    let rebuilt = ideal.generators().iter().zip(&cert).fold(r.zero(), |acc, (g, c)| acc + g * c);
    prop_assert!(r.normalize(&(rebuilt - combo)).is_zero());
    // Normal forms are idempotent and differ from the input by a member.
    let nf = ideal.normal_form(&p).unwrap();
    prop_assert_eq!(ideal.normal_form(&nf).unwrap(), nf.clone());
    prop_assert!(ideal.contains_poly(&(p - nf)));
    Ok(())
}

macro_rules! membership_suite {
    ($name:ident, $ring:expr) => {
        proptest! {
            #![proptest_config(ProptestConfig::with_cases(500))]
            #[test]
            fn $name(
                gens in prop::collection::vec(poly_text(), 1..3),
                p in poly_text(),
                cofs in prop::collection::vec(poly_text(), 2),
            ) {
                membership_case(&$ring, &gens, &p, &cofs)?;
            }
        }
    };
}

membership_suite!(membership_is_normal_form_zero_over_f2, CoefficientRing::IntegersMod(2));
membership_suite!(membership_is_normal_form_zero_over_f3, CoefficientRing::IntegersMod(3));
membership_suite!(membership_is_normal_form_zero_over_z4, CoefficientRing::IntegersMod(4));
membership_suite!(membership_is_normal_form_zero_over_z, CoefficientRing::Integers);

fn pair_of(c: usize, rels: &[String], f: &str) -> Option<Arc<PrincipalPair>> {
    let r = ring(&RINGS[c]);
    let a = PresentedAlgebra::new(r.clone(), rels.iter().map(|s| parse(&r, s)).collect()).ok()?;
    let pair = PrincipalPair::new(a, parse(&r, f)).ok()?;
    (!pair.is_degenerate()).then_some(pair)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn ideal_operations_are_consistent(c in 0usize..4, a in poly_text(), b in poly_text(), g in poly_text()) {
        let r = ring(&RINGS[c]);
        let i = Ideal::new(r.clone(), vec![parse(&r, &a)]).unwrap();
        let j = Ideal::new(r.clone(), vec![parse(&r, &b)]).unwrap();
        let g = parse(&r, &g);
        let meet = i.intersect(&j).unwrap();
        prop_assert!(i.contains(&meet) && j.contains(&meet));
        prop_assert!(meet.contains(&i.product(&j)));
        let colon = i.colon(&g).unwrap();
        prop_assert!(colon.contains(&i));
        prop_assert!(colon.generators().iter().all(|h| i.contains_poly(&(h * &g))));
        prop_assert!(i.sum(&j).contains(&i));
    }

    /// Multiplication by `f` on `gr^n` versus the colon criterion, and both
    /// exactness statements, on random pairs over the four coefficient rings.
    #[test]
    fn graded_piece_and_exactness_lemmas(c in 0usize..4, rels in prop::collection::vec(small_poly_text(2, 3, 3), 0..3), f in small_poly_text(2, 2, 3)) {
        let Some(pair) = pair_of(c, &rels, &f) else { return Ok(()) };
        for n in 1..=4 {
            let g = pair.grn_lemma_check(n).unwrap();
            prop_assert!(g.agree, "{}: n = {}, iso = {}, cond3 = {}", pair, n, g.iso, g.cond3);
        }
        let ex = pair.exactness_check().unwrap();
        prop_assert!(ex.ex1, "ex1 on {}", pair);
        prop_assert_eq!(ex.ex2.is_some(), pair.small_torsion());
        prop_assert_ne!(ex.ex2, Some(false), "ex2 on {}", pair);
    }

    /// `C_0 ⊆ C_1 ⊆ C_2 ⊆ ...`.
    #[test]
    fn graded_pieces_increase(c in 0usize..4, rels in prop::collection::vec(small_poly_text(2, 3, 3), 0..3), f in small_poly_text(2, 2, 3)) {
        let Some(pair) = pair_of(c, &rels, &f) else { return Ok(()) };
        for n in 0..4 {
            prop_assert!(pair.c(n + 1).contains(&pair.c(n)));
        }
    }

    #[test]
    fn rendering_round_trips(c in 0usize..4, p in poly_text()) {
        let r = ring(&RINGS[c]);
        let p = parse(&r, &p);
        prop_assert_eq!(parse(&r, &r.render(&p)), p);
    }
}

/// `F_i` is `p`-semilinear over `t̄_i` and `t̄_i ∘ F_i` is the Frobenius.
#[test]
fn frobenius_projections_are_semilinear_sections() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for family in FAMILIES {
        let t = corpus::family(family, 3, ZariskianSemantics::Declared);
        for i in 0..t.top() {
            assert_eq!(t.frobenius_identity_violation(i).unwrap(), None, "{} level {i}", family.name());
            let qi = &t.derived()[i].quotient;
            let qn = &t.derived()[i + 1].quotient;
            let sample: Vec<_> =
                (0..12).map(|_| (qi.random_element(&mut rng, 3, 2, 3), qn.random_element(&mut rng, 3, 2, 3))).collect();
            assert_eq!(t.semilinearity_violation(i, &sample).unwrap(), None, "{} level {i}", family.name());
        }
    }
}

/// Parallel and sequential runs merge to identical reports.
#[test]
fn parallel_and_sequential_reports_agree() {
    let run = |parallel: bool| {
        perftower::par::set_parallel(parallel);
        FAMILIES
            .iter()
            .map(|&f| corpus::family(f, 3, ZariskianSemantics::Computed).theorem_a_report(4))
            .collect::<Vec<_>>()
    };
    let seq = run(false);
    let par = run(true);
    assert_eq!(seq, par);
    assert!(seq.iter().all(|r| r.verdict("g") == Verdict::Pass));
}
