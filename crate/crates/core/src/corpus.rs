//! The shipped tower families and their standard mutations, with the verdicts
//! each is predicted to produce.
//!
//! Every mutation is designed to break exactly one condition while keeping the
//! tower well defined; all other predicted verdicts match the unmutated family.

use crate::error::Result;
use crate::report::Verdict;
use crate::tower::{Tower, ZariskianSemantics};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `F_2[x_i]`, `x_i -> x_{i+1}^2`.
    Char2,
    /// `Z[x]/(x^{p^i} - p)`, `x -> x^p`.
    Mixed(u64),
    /// `F_2[x_i, y_i]/(x_i y_i)`, `x_i -> x_{i+1}^2`, `y_i -> y_{i+1}^2`.
    Torsion,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mutation {
    /// Top level gains `x^{p^N - p} = 0`, so `t̄_{N-1}` acquires a kernel.
    BreakB,
    /// Top level gains a free variable outside the image.
    BreakC,
    /// A free variable `w` with `w -> w^p`, except `w -> w` on the last transition.
    BreakD,
    /// `I_1` no longer has `p`-th power `I_0 R_1`.
    BreakF1,
    /// Levels `i ≥ 1` gain `w` with `w^{p^i} = 0`, enlarging the Frobenius kernel.
    BreakF2,
    /// Level 0 loses its torsion while level 1 keeps it.
    BreakTorsion,
}

pub const FAMILIES: [Family; 4] = [Family::Char2, Family::Mixed(2), Family::Mixed(3), Family::Torsion];

pub const MUTATIONS: [Mutation; 6] = [
    Mutation::BreakB,
    Mutation::BreakC,
    Mutation::BreakD,
    Mutation::BreakF1,
    Mutation::BreakF2,
    Mutation::BreakTorsion,
];

impl Family {
    pub fn name(self) -> String {
        match self {
            Family::Char2 => "char2".into(),
            Family::Mixed(p) => format!("mixed_p{p}"),
            Family::Torsion => "torsion_family".into(),
        }
    }

    pub fn p(self) -> u64 {
        match self {
            Family::Mixed(p) => p,
            _ => 2,
        }
    }
}

impl Mutation {
    pub fn name(self) -> &'static str {
        match self {
            Mutation::BreakB => "break-b",
            Mutation::BreakC => "break-c",
            Mutation::BreakD => "break-d",
            Mutation::BreakF1 => "break-f-1",
            Mutation::BreakF2 => "break-f-2",
            Mutation::BreakTorsion => "break-torsion",
        }
    }
}

/// A tower in textual form; see [`Tower::from_strings`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerText {
    pub coeffs: String,
    pub vars: Vec<Vec<String>>,
    pub relations: Vec<Vec<String>>,
    pub transitions: Vec<Vec<String>>,
    pub f0: String,
    pub f1: String,
    pub p: u64,
}

impl TowerText {
    pub fn build(&self, semantics: ZariskianSemantics) -> Result<Tower> {
        let vars: Vec<Vec<&str>> = self.vars.iter().map(|v| v.iter().map(String::as_str).collect()).collect();
        let rels: Vec<Vec<&str>> = self.relations.iter().map(|v| v.iter().map(String::as_str).collect()).collect();
        let levels: Vec<(&str, &[&str], &[&str])> =
            (0..vars.len()).map(|i| (self.coeffs.as_str(), &vars[i][..], &rels[i][..])).collect();
        let images: Vec<Vec<&str>> = self.transitions.iter().map(|v| v.iter().map(String::as_str).collect()).collect();
        let images: Vec<&[&str]> = images.iter().map(|v| &v[..]).collect();
        Tower::from_strings(&levels, &images, &self.f0, Some(&self.f1), semantics, self.p)
    }

    fn top(&self) -> usize {
        self.vars.len() - 1
    }
}

fn strings<const N: usize>(xs: [String; N]) -> Vec<String> {
    xs.into()
}

/// The unmutated family with levels `0..=top`.
pub fn family_text(family: Family, top: usize) -> TowerText {
    let p = family.p();
    let n = top + 1;
    let (coeffs, vars, relations, transitions, f0, f1) = match family {
        Family::Char2 => (
            "F2",
            (0..n).map(|i| strings([format!("x{i}")])).collect(),
            vec![Vec::new(); n],
            (0..top).map(|i| strings([format!("x{}^2", i + 1)])).collect(),
            "x0".to_string(),
            "x1".to_string(),
        ),
        Family::Mixed(p) => (
            "Z",
            vec![strings(["x".to_string()]); n],
            (0..n).map(|i| strings([format!("x^{} - {p}", p.pow(i as u32))])).collect(),
            vec![strings([format!("x^{p}")]); top],
            p.to_string(),
            "x".to_string(),
        ),
        Family::Torsion => (
            "F2",
            (0..n).map(|i| strings([format!("x{i}"), format!("y{i}")])).collect(),
            (0..n).map(|i| strings([format!("x{i}*y{i}")])).collect(),
            (0..top).map(|i| strings([format!("x{}^2", i + 1), format!("y{}^2", i + 1)])).collect(),
            "x0".to_string(),
            "x1".to_string(),
        ),
    };
    TowerText { coeffs: coeffs.into(), vars, relations, transitions, f0, f1, p }
}

/// The family with `mutation` applied.
pub fn mutated_text(family: Family, mutation: Mutation, top: usize) -> TowerText {
    let mut t = family_text(family, top);
    let p = t.p;
    let n = t.top();
    let x = |t: &TowerText, i: usize| t.vars[i][0].clone();
    match mutation {
        Mutation::BreakB => {
            let e = p.pow(n as u32) - p;
            let xn = x(&t, n);
            t.relations[n].push(format!("{xn}^{e}"));
        }
        Mutation::BreakC => t.vars[n].push("w".into()),
        Mutation::BreakD => {
            for v in &mut t.vars {
                v.push("w".into());
            }
            for (i, im) in t.transitions.iter_mut().enumerate() {
                im.push(if i + 1 == n { "w".into() } else { format!("w^{p}") });
            }
        }
        Mutation::BreakF1 => match family {
            Family::Mixed(p) => {
                for i in 1..=n {
                    t.relations[i] = vec![format!("x^{} - {}", p.pow(i as u32), p * p)];
                }
                t.transitions[0] = vec![p.to_string()];
            }
            _ => t.f1 = "x1 + x1^2".into(),
        },
        Mutation::BreakF2 => {
            for i in 1..=n {
                t.vars[i].push("w".into());
                t.relations[i].push(format!("w^{}", p.pow(i as u32)));
            }
            for im in t.transitions.iter_mut().skip(1) {
                im.push(format!("w^{p}"));
            }
        }
        Mutation::BreakTorsion => match family {
            Family::Torsion => t.relations[0].clear(),
            Family::Char2 => {
                for i in 0..=n {
                    t.vars[i].push(format!("y{i}"));
                    if i > 0 {
                        t.relations[i].push(format!("x{i}*y{i}"));
                    }
                }
                for (i, im) in t.transitions.iter_mut().enumerate() {
                    im.push(format!("y{}^2", i + 1));
                }
            }
            Family::Mixed(p) => {
                for i in 0..=n {
                    t.vars[i].push("y".into());
                    if i > 0 {
                        t.relations[i].push("x*y".into());
                    }
                }
                for im in &mut t.transitions {
                    im.push(format!("y^{p}"));
                }
            }
        },
    }
    t
}

pub fn family(family: Family, top: usize, semantics: ZariskianSemantics) -> Tower {
    family_text(family, top).build(semantics).expect("corpus families are well defined")
}

pub fn mutated(family: Family, mutation: Mutation, top: usize, semantics: ZariskianSemantics) -> Tower {
    mutated_text(family, mutation, top).build(semantics).expect("corpus mutations are well defined")
}

/// Conditions reported by [`Tower::theorem_a_report`].
pub const REPORTED: [&str; 11] = ["a", "b", "c", "d", "e", "f-1", "f-2", "*", "g", "g'", "theorem-a"];

/// Predicted aggregate verdicts.
///
/// `(∗)` is the degree-1 anchor, so it fails exactly when the torsion break
/// leaves `Φ¹` ill defined; under computed semantics this also removes the
/// premise of the equivalence.
pub fn predicted(mutation: Option<Mutation>, semantics: ZariskianSemantics) -> Vec<(&'static str, Verdict)> {
    use Verdict::*;
    let computed = semantics == ZariskianSemantics::Computed;
    let mut out: Vec<(&'static str, Verdict)> = REPORTED
        .iter()
        .map(|c| (*c, if *c == "e" && computed { Fail } else { Pass }))
        .collect();
    let mut set = |c: &str, v: Verdict| {
        out.iter_mut().find(|(k, _)| *k == c).expect("known condition").1 = v;
    };
    let broken = match mutation {
        None => return out,
        Some(Mutation::BreakTorsion) => {
            set("*", Fail);
            set("g", Fail);
            set("g'", Fail);
            if computed {
                set("theorem-a", NotApplicable);
            }
            return out;
        }
        Some(Mutation::BreakB) => "b",
        Some(Mutation::BreakC) => "c",
        Some(Mutation::BreakD) => "d",
        Some(Mutation::BreakF1) => "f-1",
        Some(Mutation::BreakF2) => "f-2",
    };
    set(broken, Fail);
    for c in ["g", "g'", "theorem-a"] {
        set(c, NotApplicable);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn texts_build() {
        for f in FAMILIES {
            family(f, 3, ZariskianSemantics::Computed);
            for m in MUTATIONS {
                mutated(f, m, 3, ZariskianSemantics::Computed);
            }
        }
    }

    #[test]
    fn mutations_flip_exactly_the_predicted_verdicts() {
        for sem in [ZariskianSemantics::Computed, ZariskianSemantics::Declared] {
            for f in FAMILIES {
                for m in std::iter::once(None).chain(MUTATIONS.map(Some)) {
                    let tower = match m {
                        None => family(f, 3, sem),
                        Some(m) => mutated(f, m, 3, sem),
                    };
                    let report = tower.theorem_a_report(3);
                    assert!(report.flags.is_empty(), "{} {m:?}: {report}", f.name());
                    for (c, v) in predicted(m, sem) {
                        assert_eq!(report.verdict(c), v, "{} {m:?} {sem} condition {c}\n{report}", f.name());
                    }
                }
            }
        }
    }
}
