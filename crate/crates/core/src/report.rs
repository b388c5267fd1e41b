//! Per-condition verdicts with witnesses.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// Fail dominates pass, pass dominates not-applicable.
    pub fn combine(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Pass, _) | (_, Pass) => Pass,
            _ => NotApplicable,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "n/a",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub condition: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// An ordered list of verdicts. Every failing entry carries a witness.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub entries: Vec<Entry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub provenance: Vec<String>,
}

impl ConditionReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, condition: &str, level: Option<usize>, verdict: Verdict, witness: Option<String>, note: Option<String>) {
        debug_assert!(verdict != Verdict::Fail || witness.is_some(), "fail without witness: {condition}");
        self.entries.push(Entry { condition: condition.to_string(), level, verdict, witness, note });
    }

    pub fn pass(&mut self, condition: &str, level: Option<usize>) {
        self.push(condition, level, Verdict::Pass, None, None);
    }

    pub fn pass_with(&mut self, condition: &str, level: Option<usize>, note: impl Into<String>) {
        self.push(condition, level, Verdict::Pass, None, Some(note.into()));
    }

    pub fn fail(&mut self, condition: &str, level: Option<usize>, witness: impl Into<String>) {
        self.push(condition, level, Verdict::Fail, Some(witness.into()), None);
    }

    pub fn not_applicable(&mut self, condition: &str, level: Option<usize>, note: impl Into<String>) {
        self.push(condition, level, Verdict::NotApplicable, None, Some(note.into()));
    }

    /// Records `Ok(None)` as pass and `Ok(Some(w))` as fail with witness `w`.
    pub fn record(&mut self, condition: &str, level: Option<usize>, outcome: Option<String>) {
        match outcome {
            None => self.pass(condition, level),
            Some(w) => self.fail(condition, level, w),
        }
    }

    pub fn extend(&mut self, other: ConditionReport) {
        self.entries.extend(other.entries);
        self.flags.extend(other.flags);
        for p in other.provenance {
            if !self.provenance.contains(&p) {
                self.provenance.push(p);
            }
        }
    }

    pub fn flag(&mut self, flag: impl Into<String>) {
        self.flags.push(flag.into());
    }

    pub fn provenance(&mut self, note: impl Into<String>) {
        let note = note.into();
        if !self.provenance.contains(&note) {
            self.provenance.push(note);
        }
    }

    /// Aggregate verdict of every entry named `condition` (all levels).
    pub fn verdict(&self, condition: &str) -> Verdict {
        self.entries
            .iter()
            .filter(|e| e.condition == condition)
            .fold(Verdict::NotApplicable, |acc, e| acc.combine(e.verdict))
    }

    pub fn verdict_at(&self, condition: &str, level: usize) -> Verdict {
        self.entries
            .iter()
            .filter(|e| e.condition == condition && e.level == Some(level))
            .fold(Verdict::NotApplicable, |acc, e| acc.combine(e.verdict))
    }

    pub fn overall(&self) -> Verdict {
        self.entries.iter().fold(Verdict::NotApplicable, |acc, e| acc.combine(e.verdict))
    }

    pub fn any_fail(&self) -> bool {
        self.entries.iter().any(|e| e.verdict == Verdict::Fail)
    }

    pub fn conditions(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for e in &self.entries {
            if !out.contains(&e.condition) {
                out.push(e.condition.clone());
            }
        }
        out
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            let level = e.level.map(|l| format!("[{l}]")).unwrap_or_default();
            write!(f, "{:<4} {}{}", e.verdict.label(), e.condition, level)?;
            if let Some(w) = &e.witness {
                write!(f, "  witness: {w}")?;
            }
            if let Some(n) = &e.note {
                write!(f, "  ({n})")?;
            }
            writeln!(f)?;
        }
        for flag in &self.flags {
            writeln!(f, "FLAG {flag}")?;
        }
        for p in &self.provenance {
            writeln!(f, "note: {p}")?;
        }
        Ok(())
    }
}
