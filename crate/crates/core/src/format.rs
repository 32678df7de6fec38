//! Line-oriented text formats for algebras and categories.
//!
//! Algebra files:
//!
//! ```text
//! # comment
//! algebra z2 size 2
//! zero e
//! op e arity 0
//! 0
//! op mul arity 2
//! 0 1
//! 1 0
//! ```
//!
//! Each `op` block is followed by `size^arity` entries in row-major tuple
//! order, spread over any number of lines. Category files:
//!
//! ```text
//! category retract
//! objects 0 X
//! morphism 1_0 0 0
//! identity 0 1_0
//! compose g f = h
//! designate zero 0
//! designate product X Y P p1 p2
//! designate coproduct X Y S i1 i2
//! designate regepi r
//! ```
//!
//! Composites with identities may be omitted. The writers emit a normal form
//! that parses back to the same structure and is stable under a second
//! round trip.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::algebra::{validate_algebra, AlgebraError, AlgebraSpec, Elem, FiniteAlgebra, OpSpec};
use crate::fincat::{
    validate_category, CategoryError, CategorySpec, CompositionSpec, DesignationKind,
    DesignationSpec, FiniteCategory, IdentitySpec, MorphismSpec,
};

/// A problem tied to a source line (1-based; 0 when no single line applies).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            f.write_str(&self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

/// Every diagnostic produced while reading one file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct Diagnostics(pub Vec<Diagnostic>);

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_char('\n')?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

fn diag(line: usize, message: impl Into<String>) -> Diagnostic {
    Diagnostic {
        line,
        message: message.into(),
    }
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = content.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn number<T: std::str::FromStr>(word: &str, line: usize, what: &str) -> Result<T, Diagnostic> {
    word.parse()
        .map_err(|_| diag(line, format!("expected {what}, found `{word}`")))
}

struct OpBlock {
    line: usize,
    spec: OpSpec,
}

/// Reads an algebra file into a raw description, without validating tables.
pub fn parse_algebra_spec(text: &str) -> Result<(AlgebraSpec, Vec<usize>), Diagnostics> {
    let mut errors = Vec::new();
    let mut header: Option<(String, usize)> = None;
    let mut zero = None;
    let mut blocks: Vec<OpBlock> = Vec::new();
    for (line, words) in lines(text) {
        match words[0] {
            "algebra" => {
                if header.is_some() {
                    errors.push(diag(line, "second `algebra` header"));
                } else if words.len() != 4 || words[2] != "size" {
                    errors.push(diag(line, "expected `algebra <name> size <n>`"));
                } else {
                    match number(words[3], line, "a carrier size") {
                        Ok(n) => header = Some((words[1].to_string(), n)),
                        Err(e) => errors.push(e),
                    }
                }
            }
            "zero" => {
                if words.len() != 2 {
                    errors.push(diag(line, "expected `zero <symbol>`"));
                } else {
                    zero = Some(words[1].to_string());
                }
            }
            "op" => {
                if words.len() != 4 || words[2] != "arity" {
                    errors.push(diag(line, "expected `op <name> arity <k>`"));
                    continue;
                }
                match number(words[3], line, "an arity") {
                    Ok(arity) => blocks.push(OpBlock {
                        line,
                        spec: OpSpec {
                            name: words[1].to_string(),
                            arity,
                            table: Vec::new(),
                        },
                    }),
                    Err(e) => errors.push(e),
                }
            }
            _ => {
                let Some(block) = blocks.last_mut() else {
                    errors.push(diag(
                        line,
                        format!("unexpected `{}` before the first `op` block", words[0]),
                    ));
                    continue;
                };
                for w in words {
                    match number::<Elem>(w, line, "a table entry") {
                        Ok(v) => block.spec.table.push(v),
                        Err(e) => errors.push(e),
                    }
                }
            }
        }
    }
    let Some((name, size)) = header else {
        errors.push(diag(1, "missing `algebra <name> size <n>` header"));
        return Err(Diagnostics(errors));
    };
    if !errors.is_empty() {
        return Err(Diagnostics(errors));
    }
    let op_lines = blocks.iter().map(|b| b.line).collect();
    let spec = AlgebraSpec {
        name,
        size,
        ops: blocks.into_iter().map(|b| b.spec).collect(),
        zero,
    };
    Ok((spec, op_lines))
}

/// Parses and validates an algebra file.
pub fn parse_algebra(text: &str) -> Result<FiniteAlgebra, Diagnostics> {
    let (spec, op_lines) = parse_algebra_spec(text)?;
    validate_algebra(&spec).map_err(|errors| {
        let line_of = |op: &str| {
            spec.ops
                .iter()
                .position(|o| o.name == op)
                .map_or(0, |i| op_lines[i])
        };
        Diagnostics(
            errors
                .into_iter()
                .map(|e| {
                    let line = match &e {
                        AlgebraError::TableShapeMismatch { op, .. }
                        | AlgebraError::EntryOutOfRange { op, .. }
                        | AlgebraError::NotPointed { op, .. } => line_of(op),
                        AlgebraError::DuplicateSymbol(op) => line_of(op),
                        _ => 0,
                    };
                    diag(line, e.to_string())
                })
                .collect(),
        )
    })
}

/// Normal form: header, zero line, then one block per operation sorted by
/// name, one table row (last argument varying) per line.
pub fn write_algebra(a: &FiniteAlgebra) -> String {
    let spec = a.to_spec();
    let mut out = String::new();
    let _ = writeln!(out, "algebra {} size {}", spec.name, spec.size);
    if let Some(z) = &spec.zero {
        let _ = writeln!(out, "zero {z}");
    }
    let mut ops = spec.ops;
    ops.sort_by(|x, y| x.name.cmp(&y.name));
    for op in ops {
        let _ = writeln!(out, "op {} arity {}", op.name, op.arity);
        let row = if op.arity == 0 { 1 } else { spec.size };
        for chunk in op.table.chunks(row) {
            let words: Vec<String> = chunk.iter().map(Elem::to_string).collect();
            let _ = writeln!(out, "{}", words.join(" "));
        }
    }
    out
}

/// Reads a category file into a raw description.
pub fn parse_category_spec(text: &str) -> Result<CategorySpec, Diagnostics> {
    let mut errors = Vec::new();
    let mut spec = CategorySpec::default();
    let mut seen_objects = false;
    for (line, w) in lines(text) {
        let arity_error = |shape: &str| diag(line, format!("expected `{shape}`"));
        match w[0] {
            "category" if w.len() == 2 => spec.name = w[1].to_string(),
            "category" => errors.push(arity_error("category <name>")),
            "objects" => {
                if seen_objects {
                    errors.push(diag(line, "second `objects` line"));
                }
                seen_objects = true;
                spec.objects.extend(w[1..].iter().map(|s| s.to_string()));
            }
            "morphism" if w.len() == 4 => spec.morphisms.push(MorphismSpec {
                name: w[1].into(),
                dom: w[2].into(),
                cod: w[3].into(),
                line,
            }),
            "morphism" => errors.push(arity_error("morphism <name> <dom> <cod>")),
            "identity" if w.len() == 3 => spec.identities.push(IdentitySpec {
                object: w[1].into(),
                morphism: w[2].into(),
                line,
            }),
            "identity" => errors.push(arity_error("identity <object> <morphism>")),
            "compose" if w.len() == 5 && w[3] == "=" => spec.compositions.push(CompositionSpec {
                g: w[1].into(),
                f: w[2].into(),
                h: w[4].into(),
                line,
            }),
            "compose" => errors.push(arity_error("compose <g> <f> = <h>")),
            "designate" => {
                let kind = match (w.get(1).copied(), w.len()) {
                    (Some("zero"), 3) => Some(DesignationKind::Zero {
                        object: w[2].into(),
                    }),
                    (Some("product"), 7) => Some(DesignationKind::Product {
                        left: w[2].into(),
                        right: w[3].into(),
                        apex: w[4].into(),
                        p1: w[5].into(),
                        p2: w[6].into(),
                    }),
                    (Some("coproduct"), 7) => Some(DesignationKind::Coproduct {
                        left: w[2].into(),
                        right: w[3].into(),
                        apex: w[4].into(),
                        i1: w[5].into(),
                        i2: w[6].into(),
                    }),
                    (Some("regepi"), 3) => Some(DesignationKind::RegularEpi {
                        morphism: w[2].into(),
                    }),
                    _ => None,
                };
                match kind {
                    Some(kind) => spec.designations.push(DesignationSpec { kind, line }),
                    None => errors.push(diag(
                        line,
                        "expected `designate zero|product|coproduct|regepi ...` with the right number of names",
                    )),
                }
            }
            other => errors.push(diag(line, format!("unknown directive `{other}`"))),
        }
    }
    if !seen_objects {
        errors.push(diag(0, "missing `objects` line"));
    }
    if errors.is_empty() {
        Ok(spec)
    } else {
        Err(Diagnostics(errors))
    }
}

fn category_line(e: &CategoryError) -> usize {
    match e {
        CategoryError::UnknownObject { line, .. }
        | CategoryError::UnknownMorphism { line, .. }
        | CategoryError::DuplicateName { line, .. }
        | CategoryError::CompositionMismatch { line, .. }
        | CategoryError::BadDesignation { line, .. } => *line,
        _ => 0,
    }
}

/// Parses and validates a category file.
pub fn parse_category(text: &str) -> Result<FiniteCategory, Diagnostics> {
    let spec = parse_category_spec(text)?;
    validate_category(&spec).map_err(|errors| {
        Diagnostics(
            errors
                .iter()
                .map(|e| diag(category_line(e), e.to_string()))
                .collect(),
        )
    })
}

/// The category would need more `compose` lines than the writer allows.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("the category has {lines} non-identity composites, more than the limit of {limit}")]
pub struct TooLarge {
    pub lines: usize,
    pub limit: usize,
}

/// Default cap on `compose` lines emitted by [`write_category`].
pub const DEFAULT_MAX_COMPOSE_LINES: usize = 2_000_000;

/// Normal form: objects and morphisms in id order, identities in object
/// order, every composite of two non-identity morphisms ordered by
/// `(f, g)` ids, then designations.
pub fn write_category(cat: &FiniteCategory, max_compose_lines: usize) -> Result<String, TooLarge> {
    let m = cat.morphism_count();
    let composable: usize = (0..m)
        .filter(|&f| !cat.is_identity(f))
        .map(|f| {
            cat.objects()
                .flat_map(|z| cat.hom(cat.cod(f), z).iter())
                .filter(|&&g| !cat.is_identity(g))
                .count()
        })
        .sum();
    if composable > max_compose_lines {
        return Err(TooLarge {
            lines: composable,
            limit: max_compose_lines,
        });
    }
    let name = |f: usize| cat.morphism_name(f);
    let obj = |x: usize| cat.object_name(x);
    let mut out = String::new();
    if !cat.name().is_empty() {
        let _ = writeln!(
            out,
            "category {}",
            cat.name().replace(char::is_whitespace, "_")
        );
    }
    let objects: Vec<&str> = cat.objects().map(obj).collect();
    let _ = writeln!(out, "objects {}", objects.join(" "));
    for f in 0..m {
        let _ = writeln!(
            out,
            "morphism {} {} {}",
            name(f),
            obj(cat.dom(f)),
            obj(cat.cod(f))
        );
    }
    for x in cat.objects() {
        let _ = writeln!(out, "identity {} {}", obj(x), name(cat.identity(x)));
    }
    for f in (0..m).filter(|&f| !cat.is_identity(f)) {
        for z in cat.objects() {
            for &g in cat.hom(cat.cod(f), z) {
                if !cat.is_identity(g) {
                    let _ = writeln!(
                        out,
                        "compose {} {} = {}",
                        name(g),
                        name(f),
                        name(cat.compose(g, f))
                    );
                }
            }
        }
    }
    let d = cat.designations();
    if let Some(z) = d.zero {
        let _ = writeln!(out, "designate zero {}", obj(z));
    }
    for (&(x, y), cone) in &d.products {
        let _ = writeln!(
            out,
            "designate product {} {} {} {} {}",
            obj(x),
            obj(y),
            obj(cone.apex),
            name(cone.left),
            name(cone.right)
        );
    }
    for (&(x, y), cone) in &d.coproducts {
        let _ = writeln!(
            out,
            "designate coproduct {} {} {} {} {}",
            obj(x),
            obj(y),
            obj(cone.apex),
            name(cone.left),
            name(cone.right)
        );
    }
    for &e in d.regular_epis.iter().flatten() {
        let _ = writeln!(out, "designate regepi {}", name(e));
    }
    Ok(out)
}
