//! Strong Gröbner bases over the integers.
//!
//! Buchberger's algorithm extended to a Euclidean coefficient ring: a
//! critical pair contributes an S-polynomial (the lcm-of-coefficients
//! combination cancelling the leading terms) and, when neither leading
//! coefficient divides the other, a G-polynomial whose leading coefficient
//! is their gcd. Product and chain criteria prune S-pairs only. Residue rings ℤ/m are handled by adjoining the constant `m`
//! to the generators before calling into this module, which makes the
//! annihilator pairs of ℤ/m ordinary S-pairs against `m`.
//!
//! Reduction of a term `c·M` uses every basis element whose leading monomial
//! divides `M` and replaces `c` by its remainder in `[0, lc)`. On a reduced
//! strong basis with positive leading coefficients this gives unique normal
//! forms.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::coeff::xgcd;
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::Polynomial;

type Terms = Vec<(Monomial, BigInt)>;

/// A polynomial stored as a term list sorted in descending order, with
/// optional cofactors expressing it through the input generators.
#[derive(Clone, Debug)]
struct Elem {
    terms: Terms,
    cof: Option<Vec<Polynomial>>,
}

fn sorted_terms(p: &Polynomial, order: MonomialOrder) -> Terms {
    let mut t: Terms = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    t.sort_by(|a, b| order.cmp(&b.0, &a.0));
    t
}

fn to_poly(nvars: usize, t: &Terms) -> Polynomial {
    Polynomial::from_terms(nvars, t.iter().cloned())
}

/// `a - c·mono·b` for descending term lists.
fn sub_scaled(a: &Terms, c: &BigInt, mono: &Monomial, b: &Terms, order: MonomialOrder) -> Terms {
    let mut out: Terms = Vec::with_capacity(a.len() + b.len());
    let mut xs = a.iter().peekable();
    let mut ys = b.iter().map(|(m, v)| (m.mul(mono), v * c)).peekable();
    loop {
        let ord = match (xs.peek(), ys.peek()) {
            (Some(x), Some(y)) => order.cmp(&x.0, &y.0),
            (Some(_), None) => std::cmp::Ordering::Greater,
            (None, Some(_)) => std::cmp::Ordering::Less,
            (None, None) => break,
        };
        match ord {
            std::cmp::Ordering::Greater => out.push(xs.next().unwrap().clone()),
            std::cmp::Ordering::Less => {
                let (m, v) = ys.next().unwrap();
                out.push((m, -v));
            }
            std::cmp::Ordering::Equal => {
                let x = xs.next().unwrap();
                let (m, v) = ys.next().unwrap();
                let d = &x.1 - v;
                if !d.is_zero() {
                    out.push((m, d));
                }
            }
        }
    }
    out
}

fn cof_sub(a: &mut [Polynomial], c: &BigInt, mono: &Monomial, b: &[Polynomial]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x = x.clone() - y.mul_monomial(mono, c);
    }
}

fn cof_scale(a: &mut [Polynomial], c: &BigInt) {
    for x in a.iter_mut() {
        *x = x.scale(c);
    }
}

/// Fully reduces `p` by `basis`: every term ends with a coefficient below
/// the leading coefficient of each basis element whose leading monomial
/// divides it.
fn reduce(mut p: Elem, basis: &[Elem], order: MonomialOrder) -> Elem {
    let mut done: Terms = Vec::new();
    loop {
        let Some((m, c)) = p.terms.first().cloned() else { break };
        let mut c = c;
        loop {
            let mut changed = false;
            for b in basis {
                let (bm, bc) = &b.terms[0];
                if !bm.divides(&m) {
                    continue;
                }
                let q = c.div_floor(bc);
                if q.is_zero() {
                    continue;
                }
                let mono = bm.quotient_of(&m);
                p.terms = sub_scaled(&p.terms, &q, &mono, &b.terms, order);
                if let (Some(pc), Some(bcf)) = (p.cof.as_mut(), b.cof.as_ref()) {
                    cof_sub(pc, &q, &mono, bcf);
                }
                c -= &q * bc;
                changed = true;
                if c.is_zero() {
                    break;
                }
            }
            if !changed || c.is_zero() {
                break;
            }
        }
        if !c.is_zero() {
            // the current leading term is irreducible: move it out
            let t = p.terms.remove(0);
            debug_assert_eq!(t.1, c);
            done.push(t);
        }
    }
    // p.terms is now empty, so p.cof describes the remainder
    Elem { terms: done, cof: p.cof }
}

fn normalize_sign(e: &mut Elem) {
    if let Some((_, c)) = e.terms.first() {
        if c.is_negative() {
            for t in e.terms.iter_mut() {
                t.1 = -t.1.clone();
            }
            if let Some(cf) = e.cof.as_mut() {
                cof_scale(cf, &BigInt::from(-1));
            }
        }
    }
}

/// S- and G-polynomials of a critical pair.
fn pair_polys(f: &Elem, g: &Elem, order: MonomialOrder, want_s: bool) -> (Option<Elem>, Option<Elem>) {
    let (fm, fc) = &f.terms[0];
    let (gm, gc) = &g.terms[0];
    let l = fm.lcm(gm);
    let mf = fm.quotient_of(&l);
    let mg = gm.quotient_of(&l);
    let lc = fc.lcm(gc);
    let a = &lc / fc;
    let b = &lc / gc;
    let zero_f = Elem { terms: Vec::new(), cof: f.cof.as_ref().map(|c| vec![Polynomial::zero(0); c.len()]) };
    let combine = |x: &BigInt, y: &BigInt| -> Elem {
        // x*mf*f + y*mg*g
        let mut e = zero_f.clone();
        e.terms = sub_scaled(&e.terms, &-x, &mf, &f.terms, order);
        e.terms = sub_scaled(&e.terms, &-y, &mg, &g.terms, order);
        if let (Some(ec), Some(fcf), Some(gcf)) = (e.cof.as_mut(), f.cof.as_ref(), g.cof.as_ref()) {
            for (k, slot) in ec.iter_mut().enumerate() {
                *slot = fcf[k].mul_monomial(&mf, x) + gcf[k].mul_monomial(&mg, y);
            }
        }
        e
    };
    let s = want_s.then(|| combine(&a, &-b));
    let g_poly = if !fc.is_multiple_of(gc) && !gc.is_multiple_of(fc) {
        let (_, u, v) = xgcd(fc, gc);
        Some(combine(&u, &v))
    } else {
        None
    };
    (s, g_poly)
}

/// Inputs to a basis computation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Key {
    nvars: usize,
    order: MonomialOrder,
    gens: Vec<Polynomial>,
}

/// A reduced strong Gröbner basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    nvars: usize,
    order: MonomialOrder,
    elems: Vec<Polynomial>,
    sorted: Vec<Terms>,
}

/// A basis together with cofactors: `elems[k] = Σ_j cofactors[k][j] * gens[j]`.
#[derive(Clone, Debug)]
pub struct TrackedBasis {
    pub basis: GroebnerBasis,
    pub cofactors: Vec<Vec<Polynomial>>,
}

/// Persistent storage for computed bases, keyed by the canonical input text.
pub trait BasisStore: Send + Sync {
    fn load(&self, key: &str) -> Option<Vec<Polynomial>>;
    fn save(&self, key: &str, basis: &[Polynomial]);
}

fn store_slot() -> &'static RwLock<Option<Arc<dyn BasisStore>>> {
    static SLOT: OnceLock<RwLock<Option<Arc<dyn BasisStore>>>> = OnceLock::new();
    SLOT.get_or_init(|| RwLock::new(None))
}

/// Installs (or removes) the process-wide persistent basis store.
pub fn set_basis_store(store: Option<Arc<dyn BasisStore>>) {
    *store_slot().write().unwrap() = store;
}

fn memo() -> &'static Mutex<HashMap<Key, Arc<GroebnerBasis>>> {
    static MEMO: OnceLock<Mutex<HashMap<Key, Arc<GroebnerBasis>>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Drops every in-process memoized basis, so the next computation runs cold.
pub fn clear_memo() {
    memo().lock().unwrap().clear();
}

/// Canonical text of a basis request; equal requests give equal keys.
pub fn canonical_key(nvars: usize, order: MonomialOrder, gens: &[Polynomial]) -> String {
    let mut s = format!("n={nvars};o={};", order.tag());
    for g in gens {
        s.push('[');
        for (m, c) in g.terms() {
            s.push_str(&format!("{:?}:{};", m.0, c));
        }
        s.push(']');
    }
    s
}

impl GroebnerBasis {
    fn from_elems(nvars: usize, order: MonomialOrder, elems: Vec<Polynomial>) -> Self {
        let sorted = elems.iter().map(|p| sorted_terms(p, order)).collect();
        GroebnerBasis { nvars, order, elems, sorted }
    }

    /// Computes the reduced strong basis of the ideal generated by `gens`.
    /// Results are memoized in-process and, when a store is installed,
    /// persisted across processes.
    pub fn compute(nvars: usize, gens: &[Polynomial], order: MonomialOrder) -> Arc<GroebnerBasis> {
        let mut gens: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
        gens.sort_by(|a, b| canonical_key(nvars, order, std::slice::from_ref(a)).cmp(&canonical_key(nvars, order, std::slice::from_ref(b))));
        gens.dedup();
        let key = Key { nvars, order, gens };
        if let Some(hit) = memo().lock().unwrap().get(&key) {
            return hit.clone();
        }
        let text = canonical_key(nvars, order, &key.gens);
        let store = store_slot().read().unwrap().clone();
        let mut result = None;
        if let Some(st) = store.as_ref() {
            if let Some(elems) = st.load(&text) {
                let candidate = GroebnerBasis::from_elems(nvars, order, elems);
                if candidate.validates_against(&key.gens) {
                    result = Some(candidate);
                }
            }
        }
        let basis = match result {
            Some(b) => b,
            None => {
                let b = buchberger(nvars, &key.gens, order, false).basis;
                if let Some(st) = store.as_ref() {
                    st.save(&text, &b.elems);
                }
                b
            }
        };
        let arc = Arc::new(basis);
        memo().lock().unwrap().insert(key, arc.clone());
        arc
    }

    /// Computes a basis with cofactors in terms of `gens` (in input order).
    pub fn compute_tracked(nvars: usize, gens: &[Polynomial], order: MonomialOrder) -> TrackedBasis {
        buchberger(nvars, gens, order, true)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elems
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.elems.iter().any(|e| e.as_constant().is_some_and(|c| c.is_one()))
    }

    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        let basis: Vec<Elem> = self.sorted.iter().map(|t| Elem { terms: t.clone(), cof: None }).collect();
        let r = reduce(Elem { terms: sorted_terms(p, self.order), cof: None }, &basis, self.order);
        to_poly(self.nvars, &r.terms)
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.normal_form(p).is_zero()
    }

    /// Leading monomials of the basis elements, paired with their coefficients.
    pub fn leading_terms(&self) -> Vec<(Monomial, BigInt)> {
        self.sorted.iter().map(|t| t[0].clone()).collect()
    }

    /// Checks that the stored elements form a strong basis containing `gens`.
    fn validates_against(&self, gens: &[Polynomial]) -> bool {
        if self.elems.iter().any(|e| e.nvars() != self.nvars || e.is_zero()) {
            return false;
        }
        if !gens.iter().all(|g| self.contains(g)) {
            return false;
        }
        let basis: Vec<Elem> = self.sorted.iter().map(|t| Elem { terms: t.clone(), cof: None }).collect();
        for i in 0..basis.len() {
            for j in 0..i {
                let (s, g) = pair_polys(&basis[i], &basis[j], self.order, true);
                if !reduce(s.expect("requested"), &basis, self.order).terms.is_empty() {
                    return false;
                }
                if let Some(g) = g {
                    if !reduce(g, &basis, self.order).terms.is_empty() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// With `criteria`, an element whose leading term is strongly divisible by a
/// later element's stops spawning pairs (chain criterion through the later
/// element), and S-polynomials of pairs with coprime leading monomials and
/// coprime leading coefficients are skipped (product criterion). G-polynomials
/// are always formed.
fn buchberger(nvars: usize, gens: &[Polynomial], order: MonomialOrder, track: bool) -> TrackedBasis {
    buchberger_with(nvars, gens, order, track, true)
}

fn strongly_divides(a: &(Monomial, BigInt), b: &(Monomial, BigInt)) -> bool {
    a.0.divides(&b.0) && b.1.is_multiple_of(&a.1)
}

fn buchberger_with(nvars: usize, gens: &[Polynomial], order: MonomialOrder, track: bool, criteria: bool) -> TrackedBasis {
    let ngens = gens.len();
    let unit_cof = |k: usize| -> Option<Vec<Polynomial>> {
        track.then(|| (0..ngens).map(|j| if j == k { Polynomial::one(nvars) } else { Polynomial::zero(nvars) }).collect())
    };
    let mut basis: Vec<Elem> = Vec::new();
    let mut retired: Vec<bool> = Vec::new();
    let mut pairs: BTreeSet<(u64, Vec<u32>, usize, usize)> = BTreeSet::new();

    let add = |e: Elem, basis: &mut Vec<Elem>, retired: &mut Vec<bool>, pairs: &mut BTreeSet<(u64, Vec<u32>, usize, usize)>| {
        let mut e = e;
        normalize_sign(&mut e);
        let n = basis.len();
        for (i, b) in basis.iter().enumerate() {
            if retired[i] {
                continue;
            }
            let l = b.terms[0].0.lcm(&e.terms[0].0);
            pairs.insert((l.degree(), l.0.clone(), i, n));
        }
        // Pairs (i, k) for later k follow from (i, n) and (n, k).
        if criteria {
            for (i, b) in basis.iter().enumerate() {
                if !retired[i] && strongly_divides(&e.terms[0], &b.terms[0]) {
                    retired[i] = true;
                }
            }
        }
        basis.push(e);
        retired.push(false);
    };

    for (k, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let e = Elem { terms: sorted_terms(g, order), cof: unit_cof(k) };
        let r = reduce(e, &basis, order);
        if !r.terms.is_empty() {
            add(r, &mut basis, &mut retired, &mut pairs);
        }
    }

    while let Some((_, _, i, j)) = pairs.pop_first() {
        let (ti, tj) = (&basis[i].terms[0], &basis[j].terms[0]);
        let coprime = ti.0.lcm(&tj.0).degree() == ti.0.degree() + tj.0.degree() && ti.1.gcd(&tj.1).is_one();
        let (s, g) = pair_polys(&basis[i], &basis[j], order, !(criteria && coprime));
        if let Some(g) = g {
            let r = reduce(g, &basis, order);
            if !r.terms.is_empty() {
                add(r, &mut basis, &mut retired, &mut pairs);
            }
        }
        if let Some(s) = s {
            let r = reduce(s, &basis, order);
            if !r.terms.is_empty() {
                add(r, &mut basis, &mut retired, &mut pairs);
            }
        }
    }

    // minimize: drop elements whose leading term is divisible by another's
    let lt: Vec<(Monomial, BigInt)> = basis.iter().map(|e| e.terms[0].clone()).collect();
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let divides = lt[j].0.divides(&lt[i].0) && lt[i].1.is_multiple_of(&lt[j].1);
            let same = lt[j] == lt[i];
            if divides && (!same || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let minimal: Vec<Elem> = basis.into_iter().zip(keep).filter(|(_, k)| *k).map(|(e, _)| e).collect();

    // tail reduction against the minimal basis
    let mut reduced = Vec::with_capacity(minimal.len());
    for (k, e) in minimal.iter().enumerate() {
        let head = e.terms[0].clone();
        let tail = Elem { terms: e.terms[1..].to_vec(), cof: e.cof.clone() };
        let others: Vec<Elem> = minimal.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, x)| x.clone()).collect();
        // cofactors: reduce() carries e's full cofactors, which stay valid
        // since only the tail is rewritten
        let r = reduce(tail, &others, order);
        let mut terms = vec![head];
        terms.extend(r.terms);
        reduced.push(Elem { terms, cof: r.cof });
    }
    reduced.sort_by(|a, b| {
        order.cmp(&a.terms[0].0, &b.terms[0].0).then_with(|| a.terms[0].1.cmp(&b.terms[0].1))
    });

    let elems: Vec<Polynomial> = reduced.iter().map(|e| to_poly(nvars, &e.terms)).collect();
    let cofactors = reduced.into_iter().map(|e| e.cof.unwrap_or_default()).collect();
    TrackedBasis { basis: GroebnerBasis::from_elems(nvars, order, elems), cofactors }
}

impl TrackedBasis {
    /// Divides `p` by the basis; on success returns cofactors with
    /// `p = Σ_j c_j * gens[j]`.
    pub fn express(&self, p: &Polynomial) -> Option<Vec<Polynomial>> {
        let nvars = self.basis.nvars;
        let ngens = self.cofactors.first().map(Vec::len).unwrap_or(0);
        let order = self.basis.order;
        let basis: Vec<Elem> = self
            .basis
            .sorted
            .iter()
            .zip(&self.cofactors)
            .map(|(t, c)| Elem { terms: t.clone(), cof: Some(c.clone()) })
            .collect();
        // track -p's reduction: p - Σ q_k b_k = r, so cof(r) = -Σ q_k cof(b_k)
        let start = Elem { terms: sorted_terms(p, order), cof: Some(vec![Polynomial::zero(nvars); ngens]) };
        let r = reduce(start, &basis, order);
        if !r.terms.is_empty() {
            return None;
        }
        Some(r.cof.unwrap().into_iter().map(|c| -c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    fn vars(n: &[&str]) -> Vec<String> {
        n.iter().map(|s| s.to_string()).collect()
    }

    fn gb(src: &[&str], names: &[&str], order: MonomialOrder) -> Arc<GroebnerBasis> {
        let v = vars(names);
        let gens: Vec<_> = src.iter().map(|s| parse_polynomial(s, &v).unwrap()).collect();
        GroebnerBasis::compute(v.len(), &gens, order)
    }

    fn render(b: &GroebnerBasis, names: &[&str]) -> Vec<String> {
        let v = vars(names);
        b.elements().iter().map(|p| p.render(&v)).collect()
    }

    #[test]
    fn gcd_combination_over_integers() {
        let b = gb(&["2*x", "3*x"], &["x"], MonomialOrder::Grevlex);
        assert_eq!(render(&b, &["x"]), vec!["x"]);
    }

    #[test]
    fn empty_input_is_zero_ideal() {
        let b = gb(&[], &["x"], MonomialOrder::Grevlex);
        assert!(b.elements().is_empty());
        assert!(!b.contains(&Polynomial::one(1)));
    }

    #[test]
    fn mod_two_basis() {
        // over F2: (x^2 - y, y^2) lex x > y
        let b = gb(&["x^2 - y", "y^2", "2"], &["x", "y"], MonomialOrder::Lex);
        assert_eq!(render(&b, &["x", "y"]), vec!["2", "y^2", "x^2 + y"]);
        let x4 = parse_polynomial("x^4", &vars(&["x", "y"])).unwrap();
        assert!(b.contains(&x4));
        let x3 = parse_polynomial("x^3", &vars(&["x", "y"])).unwrap();
        assert_eq!(b.normal_form(&x3).render(&vars(&["x", "y"])), "x*y");
    }

    #[test]
    fn prime_in_ideal_with_cofactors() {
        let v = vars(&["x"]);
        let gens = vec![parse_polynomial("x^3 - 3", &v).unwrap(), parse_polynomial("x", &v).unwrap()];
        let t = GroebnerBasis::compute_tracked(1, &gens, MonomialOrder::Grevlex);
        let three = Polynomial::constant(1, 3);
        let cof = t.express(&three).expect("3 is a member");
        let recomb = gens.iter().zip(&cof).fold(Polynomial::zero(1), |acc, (g, c)| acc + g * c);
        assert_eq!(recomb, three);
    }

    #[test]
    fn basis_is_idempotent() {
        let b = gb(&["3*y*x - y", "x^2*y^2 + 6", "9"], &["x", "y"], MonomialOrder::Grevlex);
        let again = GroebnerBasis::compute(2, b.elements(), MonomialOrder::Grevlex);
        assert_eq!(b.elements(), again.elements());
    }

    #[test]
    fn store_roundtrip_is_validated() {
        let b = gb(&["x^2 - 2", "4"], &["x"], MonomialOrder::Grevlex);
        assert!(b.validates_against(&[parse_polynomial("x^2-2", &vars(&["x"])).unwrap()]));
        let bogus = GroebnerBasis::from_elems(1, MonomialOrder::Grevlex, vec![Polynomial::var(1, 0)]);
        assert!(!bogus.validates_against(&[Polynomial::one(1)]));
    }

    mod criteria {
        use super::*;
        use proptest::prelude::*;

        fn poly(nvars: usize) -> impl Strategy<Value = Polynomial> {
            prop::collection::vec((prop::collection::vec(0u32..4, nvars), -6i64..=6), 1..4).prop_map(move |ts| {
                Polynomial::from_terms(nvars, ts.into_iter().map(|(e, c)| (Monomial(e), BigInt::from(c))))
            })
        }

        fn order() -> impl Strategy<Value = MonomialOrder> {
            prop_oneof![Just(MonomialOrder::Lex), Just(MonomialOrder::Grevlex), Just(MonomialOrder::Block { elim: 1 })]
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(400))]

            /// The pair criteria do not change the reduced strong basis.
            #[test]
            fn criteria_preserve_the_reduced_basis(
                gens in prop::collection::vec(poly(2), 2..4),
                modulus in prop_oneof![Just(0i64), Just(4), Just(6), Just(3)],
                order in order(),
            ) {
                let mut gens = gens;
                if modulus != 0 {
                    gens.push(Polynomial::constant(2, modulus));
                }
                let plain = buchberger_with(2, &gens, order, false, false).basis;
                let fast = buchberger_with(2, &gens, order, false, true).basis;
                prop_assert_eq!(plain.elements(), fast.elements());
            }
        }
    }

}
