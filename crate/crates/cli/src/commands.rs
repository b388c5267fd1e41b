//! Sub-command dispatch and report rendering.

use std::fmt::Write as _;
use std::sync::Arc;

use perftower::report::{ConditionReport, Verdict};
use perftower::tower::Tower;
use perftower::{Error as CoreError, PrincipalPair};
use serde::Serialize;

use crate::description::{Body, Description, TowerDescription};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Check,
    TheoremA,
    Gr,
    Tilt,
    Basechange,
    Zariskize,
    Dim,
    Lemmas,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::TheoremA => "theorem-a",
            Command::Gr => "gr",
            Command::Tilt => "tilt",
            Command::Basechange => "basechange",
            Command::Zariskize => "zariskize",
            Command::Dim => "dim",
            Command::Lemmas => "lemmas",
        }
    }
}

/// Effective parameters after merging flags over the description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Settings {
    pub n_max: u32,
    pub depth: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    pub sample_size: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Row {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    pub value: String,
}

/// The machine-readable report. Timing is kept out so that reports are
/// byte-identical across runs; the text rendering adds it.
#[derive(Clone, Debug, Serialize)]
pub struct Output {
    pub command: String,
    pub input: String,
    pub parameters: Settings,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub semantics: Option<String>,
    pub table: Vec<Row>,
    pub report: ConditionReport,
    pub exit_status: i32,
}

fn row(label: impl Into<String>, level: Option<usize>, value: impl ToString) -> Row {
    Row { label: label.into(), level, value: value.to_string() }
}

pub fn execute(cmd: Command, input: &str, desc: &Description, settings: &Settings) -> Result<Output, CoreError> {
    let (table, report, semantics) = match &desc.body {
        Body::Pair(pair) => {
            let (table, report) = on_pair(cmd, pair, settings)?;
            (table, report, None)
        }
        Body::Tower(t) => {
            let (table, report) = on_tower(cmd, t, settings)?;
            (table, report, Some(t.tower.semantics().name().to_string()))
        }
    };
    let exit_status = if report.any_fail() { 1 } else { 0 };
    Ok(Output {
        command: cmd.name().to_string(),
        input: input.to_string(),
        parameters: settings.clone(),
        semantics,
        table,
        report,
        exit_status,
    })
}

fn on_pair(cmd: Command, pair: &Arc<PrincipalPair>, s: &Settings) -> Result<(Vec<Row>, ConditionReport), CoreError> {
    match cmd {
        Command::Gr => Ok(gr_table(pair, None, s.n_max)),
        Command::Lemmas => Ok((vec![row("pair", None, pair)], pair.lemma_report(s.n_max, s.sample_size, s.seed))),
        other => Err(CoreError::NotApplicable(format!("`{}` needs a tower description", other.name()))),
    }
}

fn gr_table(pair: &PrincipalPair, level: Option<usize>, n_max: u32) -> (Vec<Row>, ConditionReport) {
    let mut table = vec![row("A", level, pair.algebra()), row("f", level, pair.algebra().render(pair.f()))];
    for n in 0..=n_max {
        table.push(row(format!("C_{n}"), level, pair.c(n)));
    }
    for n in 0..=n_max {
        let piece = pair.gr_piece(n);
        let value = if piece.is_zero() { "0".to_string() } else { format!("A/{}", piece.ideal) };
        table.push(row(format!("gr^{n}"), level, value));
    }
    let mut report = ConditionReport::new();
    let t = pair.torsion_analysis();
    // Torsion is an ideal of the ambient ring containing J; J itself is zero in A.
    let torsion = if t.torsion == *pair.relations() { "0".to_string() } else { t.torsion.to_string() };
    table.push(row("torsion", level, &torsion));
    table.push(row("saturation index", level, t.index));
    let note = format!("torsion {torsion}");
    if t.small_torsion {
        report.pass_with("small-torsion", level, note);
    } else {
        report.push("small-torsion", level, Verdict::NotApplicable, None, Some(format!("{note} is not killed by f")));
    }
    (table, report)
}

fn level_of(tower: &Tower, s: &Settings) -> Result<usize, CoreError> {
    let i = s.level.unwrap_or(0);
    if i > tower.top() {
        return Err(CoreError::OutOfRange(format!("level {i} beyond top level {}", tower.top())));
    }
    Ok(i)
}

fn level_rows(tower: &Tower) -> Vec<Row> {
    tower.levels().iter().enumerate().map(|(i, r)| row("R", Some(i), r)).collect()
}

fn on_tower(cmd: Command, d: &TowerDescription, s: &Settings) -> Result<(Vec<Row>, ConditionReport), CoreError> {
    let tower = &d.tower;
    match cmd {
        Command::Check => {
            let axioms = tower.check_axioms();
            let g = tower.check_g_given(&axioms);
            let gp = tower.check_g_prime_given(&axioms, s.n_max);
            let mut report = axioms;
            report.extend(g);
            report.extend(gp);
            Ok((level_rows(tower), report))
        }
        Command::TheoremA => Ok((level_rows(tower), tower.theorem_a_report(s.n_max))),
        Command::Gr => {
            let i = level_of(tower, s)?;
            Ok(gr_table(&tower.derived()[i].pair0, Some(i), s.n_max))
        }
        Command::Tilt => {
            let i = level_of(tower, s)?;
            let depth = s.depth.min(tower.top() - i);
            let tilt = tower.small_tilt(i, depth)?;
            let mut table = vec![row("f_flat", Some(i), tilt.render(tilt.f_flat()))];
            table.push(row("depth", Some(i), depth));
            let mut report = tower.tilt_gr_comparison(i, depth, s.n_max)?;
            if depth < s.depth {
                report.provenance(format!("depth capped at {depth} by the top level"));
            }
            Ok((table, report))
        }
        Command::Basechange => {
            let cert = d
                .etale
                .as_ref()
                .ok_or_else(|| CoreError::Precondition("basechange needs an étale certificate".into()))?;
            let (bc, report) = tower.base_change_by(cert, s.n_max)?;
            Ok((level_rows(&bc), report))
        }
        Command::Zariskize => {
            let (z, report) = tower.zariskize(d.integrality.as_deref(), s.n_max)?;
            let mut table = level_rows(&z);
            table.push(row("semantics", None, z.semantics().name()));
            Ok((table, report))
        }
        Command::Dim => {
            let report = tower.structural_props(s.n_max);
            Ok((level_rows(tower), report))
        }
        Command::Lemmas => {
            let i = level_of(tower, s)?;
            let pair = &tower.derived()[i].pair0;
            Ok((vec![row("pair", Some(i), pair)], pair.lemma_report(s.n_max, s.sample_size, s.seed)))
        }
    }
}

fn level_tag(level: Option<usize>) -> String {
    level.map_or_else(String::new, |l| format!("[{l}]"))
}

/// Human-readable rendering; verdicts match the JSON rendering.
pub fn render_text(out: &Output, seconds: f64) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "perftower {} {}", out.command, out.input);
    let p = &out.parameters;
    let _ = writeln!(s, "n_max={} depth={} sample_size={} seed={}", p.n_max, p.depth, p.sample_size, p.seed);
    if let Some(sem) = &out.semantics {
        let _ = writeln!(s, "semantics: {sem}");
    }
    if !out.table.is_empty() {
        s.push('\n');
        for r in &out.table {
            let _ = writeln!(s, "  {}{} = {}", r.label, level_tag(r.level), r.value);
        }
    }
    s.push('\n');
    for e in &out.report.entries {
        let _ = write!(s, "  {:<18} {:<4} {}", format!("({})", e.condition), level_tag(e.level), e.verdict);
        if let Some(w) = &e.witness {
            let _ = write!(s, "  witness: {w}");
        }
        if let Some(n) = &e.note {
            let _ = write!(s, "  ({n})");
        }
        s.push('\n');
    }
    if out.command == "theorem-a" {
        let g = out.report.verdict("g");
        let gp = out.report.verdict("g'");
        let agreement = match out.report.verdict("theorem-a") {
            Verdict::Pass => "agree",
            Verdict::Fail => "DISAGREE",
            Verdict::NotApplicable => "premise not met",
        };
        let _ = writeln!(s, "\nagreement: (g) {g}, (g') {gp}: {agreement}");
    }
    for f in &out.report.flags {
        let _ = writeln!(s, "FLAG {f}");
    }
    for note in &out.report.provenance {
        let _ = writeln!(s, "note: {note}");
    }
    let _ = writeln!(s, "\nresult: {} (exit {}) in {seconds:.2}s", out.report.overall(), out.exit_status);
    s
}

pub fn render_json(out: &Output) -> String {
    let mut s = serde_json::to_string_pretty(out).expect("report serializes");
    s.push('\n');
    s
}
