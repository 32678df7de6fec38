//! Finite pointed algebras.
//!
//! The carrier of an algebra of size `n` is `0..n`. Element `0` is the point:
//! the distinguished nullary symbol always evaluates to it, and every
//! operation maps the all-zero tuple back to `0`, so the generated variety is
//! pointed.

mod free;
mod hom;

pub use free::{
    free_algebra, search_free, substitute_vector, FreeAlgebra, FreeClosure, FreeSearch,
};
pub use hom::{enumerate_homs, find_isomorphism, is_homomorphism, Homomorphism};

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tuples::{checked_pow, for_each_fresh_tuple, tuple_index};

/// Carrier element.
pub type Elem = u32;

/// Default element-count cap for closures.
pub const DEFAULT_MAX_ELEMENTS: usize = 100_000;
/// Default cap on the number of entries of a single generated operation table.
pub const DEFAULT_MAX_TABLE_ENTRIES: usize = 10_000_000;

/// Resource caps for closure computations.
///
/// Running into a cap is never reported as a negative answer: callers turn it
/// into an inconclusive outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_elements: usize,
    pub max_table_entries: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_elements: DEFAULT_MAX_ELEMENTS,
            max_table_entries: DEFAULT_MAX_TABLE_ENTRIES,
        }
    }
}

impl Budget {
    pub fn with_max_elements(max_elements: usize) -> Self {
        Self {
            max_elements,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OpSymbol {
    pub name: String,
    pub arity: usize,
}

/// Operation symbols with a distinguished nullary symbol naming the point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    ops: Vec<OpSymbol>,
    zero: usize,
}

impl Signature {
    pub fn new(ops: Vec<OpSymbol>, zero: usize) -> Result<Self, AlgebraError> {
        let mut names = BTreeSet::new();
        for op in &ops {
            if !names.insert(op.name.as_str()) {
                return Err(AlgebraError::DuplicateSymbol(op.name.clone()));
            }
        }
        match ops.get(zero) {
            Some(op) if op.arity == 0 => Ok(Self { ops, zero }),
            _ => Err(AlgebraError::NoZeroConstant),
        }
    }

    pub fn ops(&self) -> &[OpSymbol] {
        &self.ops
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn zero_name(&self) -> &str {
        &self.ops[self.zero].name
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|op| op.name == name)
    }

    pub fn arity(&self, op: usize) -> usize {
        self.ops[op].arity
    }
}

/// A validated finite pointed algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    name: String,
    signature: Signature,
    size: usize,
    tables: Vec<Vec<Elem>>,
}

/// One operation of an unvalidated algebra description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpSpec {
    pub name: String,
    pub arity: usize,
    pub table: Vec<Elem>,
}

/// Raw algebra description, as produced by the parser or by hand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub name: String,
    pub size: usize,
    pub ops: Vec<OpSpec>,
    /// Name of the nullary symbol interpreted as the point. When absent, the
    /// unique nullary symbol is used if there is exactly one.
    pub zero: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("no nullary symbol designated as zero")]
    NoZeroConstant,
    #[error("carrier must have at least one element")]
    EmptyCarrier,
    #[error("duplicate operation symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("operation `{op}` of arity {arity} needs {expected} table entries, found {found}")]
    TableShapeMismatch {
        op: String,
        arity: usize,
        expected: usize,
        found: usize,
    },
    #[error("operation `{op}` has entry {value} at position {position}, outside 0..{size}")]
    EntryOutOfRange {
        op: String,
        position: usize,
        value: Elem,
        size: usize,
    },
    #[error(
        "operation `{op}` sends the all-zero tuple to {value}; the point must be a subalgebra"
    )]
    NotPointed { op: String, value: Elem },
    #[error("signatures differ")]
    SignatureMismatch,
    #[error("closure exceeded the budget of {cap} elements")]
    BudgetExceeded { cap: usize },
    #[error("element {0} is outside the carrier")]
    ElementOutOfRange(Elem),
}

/// Checks a raw description and returns the validated algebra, or every
/// violation found.
pub fn validate_algebra(spec: &AlgebraSpec) -> Result<FiniteAlgebra, Vec<AlgebraError>> {
    let mut errors = Vec::new();
    if spec.size == 0 {
        errors.push(AlgebraError::EmptyCarrier);
    }

    let mut seen = BTreeSet::new();
    for op in &spec.ops {
        if !seen.insert(op.name.as_str()) {
            errors.push(AlgebraError::DuplicateSymbol(op.name.clone()));
        }
    }

    let zero = match &spec.zero {
        Some(name) => spec
            .ops
            .iter()
            .position(|op| &op.name == name && op.arity == 0),
        None => {
            let nullary: Vec<usize> = (0..spec.ops.len())
                .filter(|&i| spec.ops[i].arity == 0)
                .collect();
            (nullary.len() == 1).then(|| nullary[0])
        }
    };
    if zero.is_none() {
        errors.push(AlgebraError::NoZeroConstant);
    }

    for op in &spec.ops {
        let expected = checked_pow(spec.size, op.arity).unwrap_or(usize::MAX);
        if op.table.len() != expected {
            errors.push(AlgebraError::TableShapeMismatch {
                op: op.name.clone(),
                arity: op.arity,
                expected,
                found: op.table.len(),
            });
            continue;
        }
        if let Some((position, &value)) = op
            .table
            .iter()
            .enumerate()
            .find(|(_, &v)| v as usize >= spec.size)
        {
            errors.push(AlgebraError::EntryOutOfRange {
                op: op.name.clone(),
                position,
                value,
                size: spec.size,
            });
            continue;
        }
        // the all-zero tuple sits at index 0 in row-major order
        if spec.size > 0 && op.table[0] != 0 {
            errors.push(AlgebraError::NotPointed {
                op: op.name.clone(),
                value: op.table[0],
            });
        }
    }

    if !errors.is_empty() {
        return Err(errors);
    }
    let ops = spec
        .ops
        .iter()
        .map(|op| OpSymbol {
            name: op.name.clone(),
            arity: op.arity,
        })
        .collect();
    let signature = Signature::new(ops, zero.expect("checked above")).map_err(|e| vec![e])?;
    Ok(FiniteAlgebra {
        name: spec.name.clone(),
        signature,
        size: spec.size,
        tables: spec.ops.iter().map(|op| op.table.clone()).collect(),
    })
}

impl FiniteAlgebra {
    /// Builds an algebra from tables already known to be valid.
    pub(crate) fn from_parts(
        name: String,
        signature: Signature,
        size: usize,
        tables: Vec<Vec<Elem>>,
    ) -> Self {
        debug_assert_eq!(signature.ops().len(), tables.len());
        Self {
            name,
            signature,
            size,
            tables,
        }
    }

    /// The one-element algebra over `signature`.
    pub fn trivial(signature: &Signature) -> Self {
        let tables = signature.ops().iter().map(|_| vec![0]).collect();
        Self::from_parts("1".to_string(), signature.clone(), 1, tables)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn table(&self, op: usize) -> &[Elem] {
        &self.tables[op]
    }

    /// Applies operation `op` to `args`.
    pub fn apply(&self, op: usize, args: &[Elem]) -> Elem {
        self.tables[op][tuple_index(self.size, args)]
    }

    /// Back to a raw description (ops in signature order).
    pub fn to_spec(&self) -> AlgebraSpec {
        AlgebraSpec {
            name: self.name.clone(),
            size: self.size,
            ops: self
                .signature
                .ops()
                .iter()
                .zip(&self.tables)
                .map(|(op, table)| OpSpec {
                    name: op.name.clone(),
                    arity: op.arity,
                    table: table.clone(),
                })
                .collect(),
            zero: Some(self.signature.zero_name().to_string()),
        }
    }
}

impl fmt::Display for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (size {})", self.name, self.size)
    }
}

/// Pairs `(x, y)` of a product carrier are encoded as `x * |b| + y`.
pub fn pair_index(b_size: usize, x: Elem, y: Elem) -> Elem {
    (x as usize * b_size + y as usize) as Elem
}

/// Componentwise product `a × b` with row-major pairing.
pub fn product_algebra(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
) -> Result<FiniteAlgebra, AlgebraError> {
    if a.signature != b.signature {
        return Err(AlgebraError::SignatureMismatch);
    }
    let size = a.size * b.size;
    let mut tables = Vec::with_capacity(a.tables.len());
    for (op, symbol) in a.signature.ops().iter().enumerate() {
        let arity = symbol.arity;
        let entries =
            checked_pow(size, arity).ok_or(AlgebraError::BudgetExceeded { cap: usize::MAX })?;
        let mut table = Vec::with_capacity(entries);
        let mut left = vec![0; arity];
        let mut right = vec![0; arity];
        let mut tuple = vec![0; arity];
        for index in 0..entries {
            crate::tuples::tuple_at(size, index, &mut tuple);
            for i in 0..arity {
                left[i] = tuple[i] / b.size as Elem;
                right[i] = tuple[i] % b.size as Elem;
            }
            table.push(pair_index(b.size, a.apply(op, &left), b.apply(op, &right)));
        }
        tables.push(table);
    }
    Ok(FiniteAlgebra::from_parts(
        format!("{}*{}", a.name, b.name),
        a.signature.clone(),
        size,
        tables,
    ))
}

/// Left and right projection maps of `product_algebra(a, b)`.
pub fn product_projections(a: &FiniteAlgebra, b: &FiniteAlgebra) -> (Vec<Elem>, Vec<Elem>) {
    let n = b.size as Elem;
    let size = (a.size * b.size) as Elem;
    (
        (0..size).map(|p| p / n).collect(),
        (0..size).map(|p| p % n).collect(),
    )
}

/// Least subuniverse containing `seed` and the point, sorted ascending.
pub fn subalgebra_closure(a: &FiniteAlgebra, seed: &[Elem]) -> Result<Vec<Elem>, AlgebraError> {
    let mut member = vec![false; a.size];
    let mut elements: Vec<Elem> = Vec::new();
    let push = |x: Elem, member: &mut Vec<bool>, elements: &mut Vec<Elem>| {
        if !member[x as usize] {
            member[x as usize] = true;
            elements.push(x);
        }
    };
    for &x in seed {
        if x as usize >= a.size {
            return Err(AlgebraError::ElementOutOfRange(x));
        }
    }
    push(0, &mut member, &mut elements);
    for &x in seed {
        push(x, &mut member, &mut elements);
    }
    let mut done = 0;
    let mut args = Vec::new();
    while done < elements.len() {
        let total = elements.len();
        for (op, symbol) in a.signature.ops().iter().enumerate() {
            if symbol.arity == 0 {
                let value = a.apply(op, &[]);
                push(value, &mut member, &mut elements);
                continue;
            }
            let snapshot = elements[..total].to_vec();
            for_each_fresh_tuple(total, done, symbol.arity, |tuple| {
                args.clear();
                args.extend(tuple.iter().map(|&i| snapshot[i]));
                let value = a.apply(op, &args);
                push(value, &mut member, &mut elements);
                true
            });
        }
        done = total;
    }
    elements.sort_unstable();
    Ok(elements)
}

/// The subalgebra on a closed subset, with elements renumbered in ascending
/// order. Returns the algebra and the inclusion map.
pub fn induced_subalgebra(
    a: &FiniteAlgebra,
    subset: &[Elem],
    name: String,
) -> (FiniteAlgebra, Vec<Elem>) {
    let mut position = vec![Elem::MAX; a.size];
    for (i, &x) in subset.iter().enumerate() {
        position[x as usize] = i as Elem;
    }
    let size = subset.len();
    let mut tables = Vec::new();
    let mut tuple = Vec::new();
    let mut args = Vec::new();
    for (op, symbol) in a.signature.ops().iter().enumerate() {
        let entries = checked_pow(size, symbol.arity).expect("subalgebra table fits");
        let mut table = Vec::with_capacity(entries);
        tuple.resize(symbol.arity, 0);
        for index in 0..entries {
            crate::tuples::tuple_at(size, index, &mut tuple);
            args.clear();
            args.extend(tuple.iter().map(|&i| subset[i as usize]));
            let value = position[a.apply(op, &args) as usize];
            debug_assert_ne!(value, Elem::MAX, "subset is not closed");
            table.push(value);
        }
        tables.push(table);
    }
    (
        FiniteAlgebra::from_parts(name, a.signature.clone(), size, tables),
        subset.to_vec(),
    )
}

/// All subuniverses of `a`, each sorted, in order of discovery from the
/// bottom subalgebra upwards.
pub fn enumerate_subuniverses(
    a: &FiniteAlgebra,
    cap: usize,
) -> Result<Vec<Vec<Elem>>, AlgebraError> {
    let bottom = subalgebra_closure(a, &[])?;
    let mut found: Vec<Vec<Elem>> = vec![bottom.clone()];
    let mut seen: BTreeSet<Vec<Elem>> = BTreeSet::from([bottom]);
    let mut next = 0;
    while next < found.len() {
        let current = found[next].clone();
        next += 1;
        for x in 0..a.size as Elem {
            if current.binary_search(&x).is_ok() {
                continue;
            }
            let mut seed = current.clone();
            seed.push(x);
            let closed = subalgebra_closure(a, &seed)?;
            if seen.insert(closed.clone()) {
                if found.len() >= cap {
                    return Err(AlgebraError::BudgetExceeded { cap });
                }
                found.push(closed);
            }
        }
    }
    Ok(found)
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn z2_group_is_valid() {
        let a = z2();
        assert_eq!(a.size(), 2);
        assert_eq!(a.apply(1, &[1, 1]), 0);
    }

    #[test]
    fn out_of_range_entry_is_reported() {
        let errs = validate_algebra(&spec("bad", 2, &[("e", 0, &[0]), ("f", 1, &[0, 5])], "e"))
            .unwrap_err();
        assert!(matches!(
            errs[0],
            AlgebraError::EntryOutOfRange { value: 5, .. }
        ));
    }

    #[test]
    fn missing_zero_is_reported() {
        let mut s = spec("bad", 2, &[("f", 1, &[0, 1])], "e");
        let errs = validate_algebra(&s).unwrap_err();
        assert!(errs.contains(&AlgebraError::NoZeroConstant));
        s.zero = None;
        let errs = validate_algebra(&s).unwrap_err();
        assert!(errs.contains(&AlgebraError::NoZeroConstant));
    }

    #[test]
    fn wrong_table_length_is_reported() {
        let errs = validate_algebra(&spec(
            "bad",
            2,
            &[("e", 0, &[0]), ("m", 2, &[0, 1, 1])],
            "e",
        ))
        .unwrap_err();
        assert!(matches!(
            errs[0],
            AlgebraError::TableShapeMismatch {
                expected: 4,
                found: 3,
                ..
            }
        ));
    }

    #[test]
    fn non_pointed_operation_is_rejected() {
        let errs = validate_algebra(&spec("neg", 2, &[("e", 0, &[0]), ("not", 1, &[1, 0])], "e"))
            .unwrap_err();
        assert!(matches!(errs[0], AlgebraError::NotPointed { value: 1, .. }));
    }

    #[test]
    fn product_of_z2_with_itself() {
        let p = product_algebra(&z2(), &z2()).unwrap();
        assert_eq!(p.size(), 4);
        let (l, r) = product_projections(&z2(), &z2());
        assert!(is_homomorphism(&p, &z2(), &l));
        assert!(is_homomorphism(&p, &z2(), &r));
    }

    #[test]
    fn product_join_is_componentwise() {
        let p = product_algebra(&join(), &join()).unwrap();
        let (x, y) = (pair_index(2, 1, 0), pair_index(2, 0, 1));
        assert_eq!(p.apply(1, &[x, y]), pair_index(2, 1, 1));
    }

    #[test]
    fn product_rejects_other_signatures() {
        assert_eq!(
            product_algebra(&z2(), &join()).unwrap_err(),
            AlgebraError::SignatureMismatch
        );
    }

    #[test]
    fn closure_examples() {
        let p = product_algebra(&z2(), &z2()).unwrap();
        assert_eq!(
            subalgebra_closure(&p, &[pair_index(2, 1, 1)]).unwrap(),
            vec![0, 3]
        );
        assert_eq!(subalgebra_closure(&p, &[]).unwrap(), vec![0]);
        assert_eq!(subalgebra_closure(&join(), &[1]).unwrap(), vec![0, 1]);
        assert!(subalgebra_closure(&join(), &[2]).is_err());
    }

    #[test]
    fn subuniverses_of_klein_four() {
        let p = product_algebra(&z2(), &z2()).unwrap();
        let subs = enumerate_subuniverses(&p, 100).unwrap();
        // trivial, three lines, whole group
        assert_eq!(subs.len(), 5);
    }
}
