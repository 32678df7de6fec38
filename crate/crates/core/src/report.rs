//! Machine-readable reports, the runs that produce them, and replay.
//!
//! Every report embeds the normalized input it was computed from together
//! with its SHA-256 digest, so [`replay`] needs nothing but the report. All
//! keys are always present (absent values are `null`), and apart from
//! `timing` a report depends only on its input, command and budget.

use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::algebra::{Budget, FiniteAlgebra};
use crate::clone::{
    find_jonsson_tarski, find_p, find_subtraction, verify_jonsson_tarski, verify_p,
    verify_subtraction, CloneError, Outcome, TermSearch,
};
use crate::fincat::{
    audit_designations, audit_weak_limits, check_property, check_property_via_coproducts,
    check_unital_via_punctual, replay_witness, CheckError, CheckOptions, DesignationAudit,
    FiniteCategory, MissingPolicy, Mode, ObjId, Property, Verdict, WeakLimitAudit, Witness,
};
use crate::format::{
    parse_algebra, parse_category, write_algebra, write_category, Diagnostics,
    DEFAULT_MAX_COMPOSE_LINES,
};
use crate::term::parse_term;
use crate::varcat::{
    build_free_subcategory, build_model_category, coalgebra_arity, concrete_to_abstract,
    cross_validate, is_coalgebra_structure, replay_concrete, CrossValidationOptions,
    FragmentBounds, ModelCategoryFragment,
};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_NAME: &str = "catprop";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TermKind {
    /// Jónsson-Tarski term `x+0 = x = 0+x`.
    Jt,
    /// Subtraction term `s(x,0) = x`, `s(x,x) = 0`.
    Sub,
    /// `p(x,0,0) = x`, `p(x,x,y) = y`.
    P,
}

impl TermKind {
    pub fn for_property(p: Property) -> Self {
        match p {
            Property::Unital => TermKind::Jt,
            Property::Subtractive => TermKind::Sub,
            Property::StronglyUnital => TermKind::P,
        }
    }

    pub fn property(self) -> Property {
        match self {
            TermKind::Jt => Property::Unital,
            TermKind::Sub => Property::Subtractive,
            TermKind::P => Property::StronglyUnital,
        }
    }

    pub fn arity(self) -> usize {
        match self {
            TermKind::P => 3,
            _ => 2,
        }
    }

    fn search(self, a: &FiniteAlgebra, budget: &Budget) -> Result<TermSearch, CloneError> {
        match self {
            TermKind::Jt => find_jonsson_tarski(a, budget),
            TermKind::Sub => find_subtraction(a, budget),
            TermKind::P => find_p(a, budget),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputKind {
    Algebra,
    Category,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Input {
    pub kind: InputKind,
    pub name: String,
    /// SHA-256 of `text`.
    pub sha256: String,
    /// The input in normal form.
    pub text: String,
}

fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl Input {
    pub fn algebra(a: &FiniteAlgebra) -> Self {
        let text = write_algebra(a);
        Self {
            kind: InputKind::Algebra,
            name: a.name().to_string(),
            sha256: digest(&text),
            text,
        }
    }

    /// Fails only when the category exceeds the writer's size limit.
    pub fn category(cat: &FiniteCategory) -> Result<Self, ReportError> {
        let text = write_category(cat, DEFAULT_MAX_COMPOSE_LINES)
            .map_err(|e| ReportError::Input(e.to_string()))?;
        Ok(Self {
            kind: InputKind::Category,
            name: cat.name().to_string(),
            sha256: digest(&text),
            text,
        })
    }
}

/// How strict or weak category checks are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CategoryMethod {
    /// The defining condition, quantified over all objects.
    #[default]
    Definition,
    /// Strict unitality through punctual spans and strong epimorphisms.
    Punctual,
    /// The criteria on designated coproducts.
    Coproducts,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    CheckAlgebra {
        properties: Vec<Property>,
    },
    FindTerm {
        kind: TermKind,
    },
    CheckCategory {
        properties: Vec<Property>,
        mode: Mode,
        method: CategoryMethod,
        missing: MissingPolicy,
    },
    Audit {
        weak_limits: bool,
        designations: bool,
    },
    CrossValidate {
        options: CrossValidationOptions,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    TermSearch,
    Coalgebra,
    FreeSubcategory,
    ModelFragment,
    Definition,
    Punctual,
    Coproducts,
    /// Cross-validated answer for the variety.
    Combined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub property: Property,
    pub route: Route,
    pub kind: Option<TermKind>,
    pub mode: Option<Mode>,
    pub method: Option<String>,
    pub outcome: Outcome,
    /// For searches: whether the search space was exhausted.
    pub saturated: Option<bool>,
    pub explored: Option<usize>,
    /// Witness term in prefix notation.
    pub term: Option<String>,
    pub arity: Option<usize>,
    pub witness: Option<Witness>,
    pub witness_text: Option<String>,
    pub examined: Option<usize>,
    pub skipped: Vec<[ObjId; 2]>,
    pub consistent: Option<bool>,
}

impl Entry {
    fn new(property: Property, route: Route, outcome: Outcome) -> Self {
        Self {
            property,
            route,
            kind: None,
            mode: None,
            method: None,
            outcome,
            saturated: None,
            explored: None,
            term: None,
            arity: None,
            witness: None,
            witness_text: None,
            examined: None,
            skipped: Vec::new(),
            consistent: None,
        }
    }

    fn from_search(
        a: &FiniteAlgebra,
        property: Property,
        route: Route,
        search: &TermSearch,
    ) -> Self {
        let mut e = Self::new(property, route, search.outcome());
        e.saturated = Some(!matches!(search, TermSearch::Inconclusive { .. }));
        match search {
            TermSearch::Found(op) => {
                e.term = Some(op.term.display(a.signature()).to_string());
                e.arity = Some(op.arity);
            }
            TermSearch::Inconclusive { explored } => e.explored = Some(*explored),
            TermSearch::Absent => {}
        }
        e
    }

    fn from_verdict(cat: &FiniteCategory, route: Route, v: &Verdict) -> Self {
        let mut e = Self::new(v.property, route, v.outcome);
        e.mode = Some(v.mode);
        e.method = Some(v.method.clone());
        e.witness_text = v.witness.as_ref().map(|w| describe_witness(cat, w));
        e.witness = v.witness.clone();
        e.examined = Some(v.examined);
        e.skipped = v.skipped.clone();
        e
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Positive,
    Negative,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Positive => 0,
            Status::Negative => 1,
            Status::Inconclusive => 2,
        }
    }

    /// A definite negative answer dominates; otherwise any undecided answer
    /// makes the whole run inconclusive.
    pub fn combine(outcomes: impl IntoIterator<Item = Outcome>) -> Self {
        let mut status = Status::Positive;
        for o in outcomes {
            match o.truth() {
                Some(false) => return Status::Negative,
                None => status = Status::Inconclusive,
                Some(true) => {}
            }
        }
        status
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditSection {
    pub weak_limits: Option<WeakLimitAudit>,
    pub designations: Option<DesignationAudit>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    pub command: Command,
    pub input: Input,
    pub budget: Budget,
    pub status: Status,
    pub entries: Vec<Entry>,
    /// How the model-fragment route is read in cross-validation.
    pub fragment_role: Option<String>,
    pub fragment_bounds: Option<FragmentBounds>,
    pub free_bounds: Option<FragmentBounds>,
    pub consistent: Option<bool>,
    pub audit: Option<AuditSection>,
    pub notes: Vec<String>,
    pub timing: Timing,
}

impl Report {
    fn new(command: Command, input: Input, budget: Budget, started: Instant) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            tool: TOOL_NAME.to_string(),
            version: TOOL_VERSION.to_string(),
            command,
            input,
            budget,
            status: Status::Positive,
            entries: Vec::new(),
            fragment_role: None,
            fragment_bounds: None,
            free_bounds: None,
            consistent: None,
            audit: None,
            notes: Vec::new(),
            timing: Timing {
                elapsed_ms: started.elapsed().as_millis() as u64,
            },
        }
    }

    fn finish(mut self, started: Instant) -> Self {
        if self.status == Status::Positive && self.audit.is_none() {
            let decisive: Vec<Outcome> = if matches!(self.command, Command::CrossValidate { .. }) {
                self.entries
                    .iter()
                    .filter(|e| e.route == Route::Combined)
                    .map(|e| e.outcome)
                    .collect()
            } else {
                self.entries.iter().map(|e| e.outcome).collect()
            };
            self.status = Status::combine(decisive);
        }
        self.timing.elapsed_ms = started.elapsed().as_millis() as u64;
        self
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn entry(&self, property: Property, route: Route) -> Option<&Entry> {
        self.entries
            .iter()
            .find(|e| e.property == property && e.route == route)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportError {
    #[error("{0}")]
    Parse(#[from] Diagnostics),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Clone(#[from] CloneError),
    #[error("{0}")]
    Input(String),
}

/// Term-level decision of each property for the variety generated by `a`.
pub fn check_algebra(
    a: &FiniteAlgebra,
    properties: &[Property],
    budget: &Budget,
) -> Result<Report, ReportError> {
    let started = Instant::now();
    let command = Command::CheckAlgebra {
        properties: properties.to_vec(),
    };
    let mut report = Report::new(command, Input::algebra(a), *budget, started);
    for &p in properties {
        let kind = TermKind::for_property(p);
        let search = kind.search(a, budget)?;
        let mut e = Entry::from_search(a, p, Route::TermSearch, &search);
        e.kind = Some(kind);
        report.entries.push(e);
    }
    Ok(report.finish(started))
}

pub fn find_term(
    a: &FiniteAlgebra,
    kind: TermKind,
    budget: &Budget,
) -> Result<Report, ReportError> {
    let started = Instant::now();
    let mut report = Report::new(
        Command::FindTerm { kind },
        Input::algebra(a),
        *budget,
        started,
    );
    let search = kind.search(a, budget)?;
    let mut e = Entry::from_search(a, kind.property(), Route::TermSearch, &search);
    e.kind = Some(kind);
    report.entries.push(e);
    Ok(report.finish(started))
}

fn category_verdict(
    cat: &FiniteCategory,
    property: Property,
    mode: Mode,
    method: CategoryMethod,
    options: CheckOptions,
) -> Result<(Route, Verdict), ReportError> {
    Ok(match method {
        CategoryMethod::Definition => (
            Route::Definition,
            check_property(cat, property, mode, options)?,
        ),
        CategoryMethod::Punctual => {
            if property != Property::Unital || mode != Mode::Strict {
                return Err(ReportError::Input(
                    "the punctual-span method applies to strict unitality only".into(),
                ));
            }
            (Route::Punctual, check_unital_via_punctual(cat, options)?)
        }
        CategoryMethod::Coproducts => (
            Route::Coproducts,
            check_property_via_coproducts(cat, property)?,
        ),
    })
}

/// Pairs without a product either abort strict checks or are skipped and
/// listed in each entry, according to `missing`.
pub fn check_category(
    cat: &FiniteCategory,
    properties: &[Property],
    mode: Mode,
    method: CategoryMethod,
    missing: MissingPolicy,
) -> Result<Report, ReportError> {
    let started = Instant::now();
    let command = Command::CheckCategory {
        properties: properties.to_vec(),
        mode,
        method,
        missing,
    };
    let mut report = Report::new(command, Input::category(cat)?, Budget::default(), started);
    for &p in properties {
        let (route, verdict) = category_verdict(cat, p, mode, method, CheckOptions { missing })?;
        report
            .entries
            .push(Entry::from_verdict(cat, route, &verdict));
    }
    Ok(report.finish(started))
}

pub fn audit(
    cat: &FiniteCategory,
    weak_limits: bool,
    designations: bool,
) -> Result<Report, ReportError> {
    let started = Instant::now();
    let command = Command::Audit {
        weak_limits,
        designations,
    };
    let mut report = Report::new(command, Input::category(cat)?, Budget::default(), started);
    let weak = weak_limits.then(|| audit_weak_limits(cat)).transpose()?;
    let desig = designations.then(|| audit_designations(cat));
    let ok =
        weak.as_ref().is_none_or(WeakLimitAudit::passes) && desig.as_ref().is_none_or(|d| d.all_ok);
    report.status = if ok {
        Status::Positive
    } else {
        Status::Negative
    };
    report.audit = Some(AuditSection {
        weak_limits: weak,
        designations: desig,
    });
    Ok(report.finish(started))
}

pub fn cross_validate_report(a: &FiniteAlgebra, options: &CrossValidationOptions) -> Report {
    let started = Instant::now();
    let cv = cross_validate(a, options);
    let mut report = Report::new(
        Command::CrossValidate { options: *options },
        Input::algebra(a),
        options.budget,
        started,
    );
    // Witnesses are described against the categories they refer to, which
    // the cross-validation run does not hand back; rebuild them only when a
    // witness needs describing.
    let free = || {
        build_free_subcategory(a, options.free_rank, &options.budget, options.max_morphisms).ok()
    };
    let fragment = || build_model_category(std::slice::from_ref(a), options.fragment).ok();
    let (mut free_cat, mut model) = (None, None);
    for row in &cv.rows {
        let p = row.property;
        let kind = TermKind::for_property(p);
        let mut term = Entry::new(p, Route::TermSearch, row.term);
        term.kind = Some(kind);
        term.saturated = Some(row.term != Outcome::Inconclusive);
        term.term = row.term_witness.clone();
        term.arity = row.term_witness.as_ref().map(|_| kind.arity());
        let mut coalgebra = Entry::new(p, Route::Coalgebra, row.coalgebra);
        coalgebra.saturated = Some(row.coalgebra != Outcome::Inconclusive);
        coalgebra.term = row.coalgebra_witness.clone();
        coalgebra.arity = row.coalgebra_witness.as_ref().map(|_| coalgebra_arity(p));
        let mut free_entry = Entry::new(p, Route::FreeSubcategory, row.free_subcategory);
        free_entry.mode = Some(Mode::Weak);
        if let Some(w) = &row.free_witness {
            let cat = free_cat.get_or_insert_with(free);
            free_entry.witness_text = cat.as_ref().map(|f| describe_witness(&f.category, w));
            free_entry.witness = Some(w.clone());
        }
        let mut frag_entry = Entry::new(p, Route::ModelFragment, row.fragment);
        frag_entry.mode = Some(Mode::Strict);
        if let Some(w) = &row.fragment_witness {
            let cat = model.get_or_insert_with(fragment);
            frag_entry.witness_text = cat.as_ref().map(|f| describe_witness(&f.category, w));
            frag_entry.witness = Some(w.clone());
        }
        let mut combined = Entry::new(p, Route::Combined, row.verdict);
        combined.consistent = Some(row.consistent);
        report
            .entries
            .extend([term, coalgebra, free_entry, frag_entry, combined]);
    }
    report.fragment_role = Some(cv.fragment_role);
    report.fragment_bounds = cv.fragment_bounds;
    report.free_bounds = cv.free_bounds;
    report.consistent = Some(cv.consistent);
    report.notes = cv.notes;
    report.finish(started)
}

/// One line per witness, naming morphisms and objects.
pub fn describe_witness(cat: &FiniteCategory, w: &Witness) -> String {
    let m = |f: usize| cat.morphism_name(f).to_string();
    let o = |x: usize| cat.object_name(x).to_string();
    match w {
        Witness::ProperMono {
            product,
            left,
            right,
            mono,
        } => format!(
            "{} and {} into {} both factor through the non-invertible mono {}",
            m(*left),
            m(*right),
            o(product.apex),
            m(*mono)
        ),
        Witness::NotWeakProduct {
            left,
            right,
            test_object,
            test_left,
            test_right,
            ..
        } => format!(
            "({}, {}) is not a weak product: the pair ({}, {}) out of {} does not factor through it",
            m(*left),
            m(*right),
            m(*test_left),
            m(*test_right),
            o(*test_object)
        ),
        Witness::NotLeftPunctual { d, c, e, t, relation } => format!(
            "the reflexive {} d={}, c={} (reflexivity {}) is right punctual via {} but has no left section",
            if *relation { "relation" } else { "graph" },
            m(*d),
            m(*c),
            m(*e),
            m(*t)
        ),
        Witness::NotStrongEpi {
            factorization,
            mono,
            top,
            bottom,
            ..
        } => format!(
            "the comparison map {} has no diagonal filler for the square ({}, {}) against the mono {}",
            m(*factorization),
            m(*top),
            m(*bottom),
            m(*mono)
        ),
        Witness::Subalgebra {
            object,
            generators,
            generated,
            missing,
        } => format!(
            "in {} the subalgebra generated by {:?} is {:?}, which misses {}",
            o(*object),
            generators,
            generated,
            missing
        ),
        Witness::Relation { object, pairs, missing } => format!(
            "on {} the least reflexive relation containing 0×X is {:?}, which misses ({}, {})",
            o(*object),
            pairs,
            missing[0],
            missing[1]
        ),
    }
}

/// Human-readable rendering of a report.
pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let command = match &report.command {
        Command::CheckAlgebra { .. } => "check-algebra",
        Command::FindTerm { .. } => "find-term",
        Command::CheckCategory { .. } => "check-category",
        Command::Audit { .. } => "audit",
        Command::CrossValidate { .. } => "cross-validate",
    };
    let _ = writeln!(
        out,
        "{} {} on {} (sha256 {})",
        report.tool,
        command,
        report.input.name,
        &report.input.sha256[..12]
    );
    for e in &report.entries {
        let route = serde_json::to_value(e.route).expect("route serializes");
        let route = route.as_str().unwrap_or_default();
        let _ = write!(
            out,
            "  {:<16} {:<16} {:<12}",
            e.property.name(),
            route,
            e.outcome.to_string()
        );
        if let Some(t) = &e.term {
            let _ = write!(out, " {t}");
        }
        if e.saturated == Some(true) && e.outcome == Outcome::Absent {
            let _ = write!(out, " (saturated)");
        }
        if let Some(n) = e.explored {
            let _ = write!(out, " (budget reached after {n})");
        }
        if !e.skipped.is_empty() {
            let _ = write!(
                out,
                " ({} object pairs skipped for lack of a product)",
                e.skipped.len()
            );
        }
        if let Some(c) = e.consistent {
            let _ = write!(out, " {}", if c { "consistent" } else { "INCONSISTENT" });
        }
        if let Some(w) = &e.witness_text {
            let _ = write!(out, "\n      {w}");
        }
        out.push('\n');
    }
    if let Some(audit) = &report.audit {
        if let Some(w) = &audit.weak_limits {
            let _ = writeln!(
                out,
                "  weak limits: weakly lex {}, zigzag complete {} ({} split spans)",
                w.weakly_lex, w.zigzag_complete, w.split_spans
            );
        }
        if let Some(d) = &audit.designations {
            let _ = writeln!(out, "  designations valid: {}", d.all_ok);
        }
    }
    if let Some(role) = &report.fragment_role {
        let _ = writeln!(out, "  model fragment role: {role}");
    }
    let bounds = [
        ("free subcategory", &report.free_bounds),
        ("model fragment", &report.fragment_bounds),
    ];
    for (label, b) in bounds {
        if let Some(b) = b {
            let _ = writeln!(
                out,
                "  {label} bounds: max power {}, {} objects, {} morphisms",
                b.max_power, b.objects, b.morphisms
            );
        }
    }
    for n in &report.notes {
        let _ = writeln!(out, "  note: {n}");
    }
    let _ = writeln!(
        out,
        "status: {:?} (exit {}), {} ms",
        report.status,
        report.status.exit_code(),
        report.timing.elapsed_ms
    );
    out
}

/// What [`replay`] re-established.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ReplaySummary {
    /// Witness terms re-verified by deciding their identities.
    pub terms: usize,
    /// Negative search answers reproduced by searching again.
    pub absences: usize,
    /// Counterexamples re-checked against their category.
    pub counterexamples: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("replay failed:\n  {}", .0.join("\n  "))]
pub struct ReplayError(pub Vec<String>);

enum Subject {
    Algebra(FiniteAlgebra),
    Category(Box<FiniteCategory>),
}

fn verify_term(a: &FiniteAlgebra, e: &Entry) -> Result<(), String> {
    let text = e.term.as_deref().ok_or("a found entry has no term")?;
    let term = parse_term(text, a.signature()).map_err(|err| format!("term `{text}`: {err}"))?;
    let arity = e.arity.ok_or("a found entry has no arity")?;
    if term.arity() > arity {
        return Err(format!("term `{text}` uses more than {arity} variables"));
    }
    let checked = match (e.route, e.kind) {
        (Route::TermSearch, Some(TermKind::Jt)) => {
            verify_jonsson_tarski(a, &term).map_err(|e| e.to_string())
        }
        (Route::TermSearch, Some(TermKind::Sub)) => {
            verify_subtraction(a, &term).map_err(|e| e.to_string())
        }
        (Route::TermSearch, Some(TermKind::P)) => verify_p(a, &term).map_err(|e| e.to_string()),
        (Route::Coalgebra, _) => {
            let table = term.table(a, arity).map_err(|e| e.to_string())?;
            if is_coalgebra_structure(a, e.property, &table) {
                Ok(())
            } else {
                Err("the fold equations fail".into())
            }
        }
        _ => Err("term entry without a kind".into()),
    };
    checked.map_err(|err| format!("term `{text}`: {err}"))
}

fn replay_entry(
    report: &Report,
    subject: &Subject,
    e: &Entry,
    free: &mut Option<Result<ModelCategoryFragment, String>>,
    model: &mut Option<Result<ModelCategoryFragment, String>>,
    summary: &mut ReplaySummary,
) -> Result<(), String> {
    match (subject, e.route, e.outcome) {
        (_, Route::Combined, _) | (_, _, Outcome::Holds | Outcome::Inconclusive) => Ok(()),
        (Subject::Algebra(a), Route::TermSearch | Route::Coalgebra, Outcome::Found) => {
            verify_term(a, e)?;
            summary.terms += 1;
            Ok(())
        }
        (Subject::Algebra(a), Route::TermSearch, Outcome::Absent) => {
            let kind = e.kind.ok_or("term entry without a kind")?;
            let again = kind.search(a, &report.budget).map_err(|e| e.to_string())?;
            if again.outcome() != Outcome::Absent {
                return Err(format!(
                    "searching again for a {kind:?} term gives {}",
                    again.outcome()
                ));
            }
            summary.absences += 1;
            Ok(())
        }
        (Subject::Algebra(a), Route::Coalgebra, Outcome::Absent) => {
            let again = crate::varcat::coalgebra_structure(a, e.property, &report.budget)
                .map_err(|e| e.to_string())?;
            if again.outcome() != Outcome::Absent {
                return Err(format!(
                    "searching again for a coalgebra gives {}",
                    again.outcome()
                ));
            }
            summary.absences += 1;
            Ok(())
        }
        (Subject::Algebra(a), Route::FreeSubcategory | Route::ModelFragment, Outcome::Fails) => {
            let Command::CrossValidate { options } = &report.command else {
                return Err("fragment entries belong to cross-validation reports".into());
            };
            let witness = e
                .witness
                .as_ref()
                .ok_or("failing entry without a witness")?;
            if e.route == Route::FreeSubcategory {
                let f = free
                    .get_or_insert_with(|| {
                        build_free_subcategory(
                            a,
                            options.free_rank,
                            &options.budget,
                            options.max_morphisms,
                        )
                        .map_err(|e| e.to_string())
                    })
                    .as_ref()?;
                replay_witness(&f.category, e.property, Mode::Weak, witness)?;
            } else {
                let f = model
                    .get_or_insert_with(|| {
                        build_model_category(std::slice::from_ref(a), options.fragment)
                            .map_err(|e| e.to_string())
                    })
                    .as_ref()?;
                replay_concrete(f, e.property, witness)?;
                if let Some(abstract_witness) = concrete_to_abstract(f, e.property, witness) {
                    replay_witness(&f.category, e.property, Mode::Strict, &abstract_witness)?;
                }
            }
            summary.counterexamples += 1;
            Ok(())
        }
        (
            Subject::Category(cat),
            Route::Definition | Route::Punctual | Route::Coproducts,
            Outcome::Fails,
        ) => {
            let witness = e
                .witness
                .as_ref()
                .ok_or("failing entry without a witness")?;
            let mode = e.mode.ok_or("category entry without a mode")?;
            replay_witness(cat, e.property, mode, witness)?;
            summary.counterexamples += 1;
            Ok(())
        }
        _ => Err(format!(
            "entry {:?}/{} does not fit the report's input",
            e.route, e.outcome
        )),
    }
}

/// Re-verifies every witness in `report` from its embedded input.
pub fn replay(report: &Report) -> Result<ReplaySummary, ReplayError> {
    let fail = |msg: String| ReplayError(vec![msg]);
    if digest(&report.input.text) != report.input.sha256 {
        return Err(fail("the embedded input does not match its digest".into()));
    }
    let subject = match report.input.kind {
        InputKind::Algebra => parse_algebra(&report.input.text).map(Subject::Algebra),
        InputKind::Category => parse_category(&report.input.text).map(|c| Subject::Category(Box::new(c))),
    }
    .map_err(|e| fail(format!("embedded input: {e}")))?;
    let mut summary = ReplaySummary::default();
    let (mut free, mut model) = (None, None);
    let mut errors = Vec::new();
    for (i, e) in report.entries.iter().enumerate() {
        if let Err(msg) = replay_entry(report, &subject, e, &mut free, &mut model, &mut summary) {
            errors.push(format!(
                "entry {i} ({} via {:?}): {msg}",
                e.property, e.route
            ));
        }
    }
    if errors.is_empty() {
        Ok(summary)
    } else {
        Err(ReplayError(errors))
    }
}
