//! Term operations of a finite algebra, generated breadth-first by term depth,
//! and searches for the Jónsson-Tarski, subtraction and strongly unital terms.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Budget, Elem, FiniteAlgebra};
use crate::term::{Term, TermError};
use crate::tuples::{checked_pow, for_each_fresh_tuple, tuple_at, tuple_index};

/// A `k`-ary operation on the carrier together with a term realizing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermOperation {
    pub arity: usize,
    pub table: Vec<Elem>,
    pub term: Term,
}

impl TermOperation {
    /// Evaluates `term` over all `arity`-tuples.
    pub fn from_term(a: &FiniteAlgebra, term: Term, arity: usize) -> Result<Self, CloneError> {
        let table = term.table(a, arity)?;
        Ok(Self { arity, table, term })
    }

    /// Re-evaluates the witness term and compares it with the table.
    pub fn is_coherent(&self, a: &FiniteAlgebra) -> bool {
        self.term
            .table(a, self.arity)
            .is_ok_and(|t| t == self.table)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CloneError {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("operation tables of arity {arity} exceed the table budget")]
    TableTooLarge { arity: usize },
}

/// All term operations of one arity, grouped by the depth at which they first
/// appear; each group is sorted by table.
#[derive(Debug, Clone)]
pub struct CloneClosure {
    pub arity: usize,
    pub levels: Vec<Vec<TermOperation>>,
    pub saturated: bool,
}

impl CloneClosure {
    pub fn operations(&self) -> impl Iterator<Item = &TermOperation> {
        self.levels.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Result of a term search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermSearch {
    Found(TermOperation),
    /// The clone saturated and no operation satisfies the equations.
    Absent,
    /// The budget ran out before saturation.
    Inconclusive {
        explored: usize,
    },
}

impl TermSearch {
    pub fn is_found(&self) -> bool {
        matches!(self, TermSearch::Found(_))
    }

    pub fn outcome(&self) -> Outcome {
        match self {
            TermSearch::Found(_) => Outcome::Found,
            TermSearch::Absent => Outcome::Absent,
            TermSearch::Inconclusive { .. } => Outcome::Inconclusive,
        }
    }
}

/// Three-valued result shared by every decision procedure in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Found,
    Absent,
    Holds,
    Fails,
    Inconclusive,
}

impl Outcome {
    /// `Some(true)` for found/holds, `Some(false)` for absent/fails.
    pub fn truth(self) -> Option<bool> {
        match self {
            Outcome::Found | Outcome::Holds => Some(true),
            Outcome::Absent | Outcome::Fails => Some(false),
            Outcome::Inconclusive => None,
        }
    }
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Outcome::Found => "found",
            Outcome::Absent => "absent",
            Outcome::Holds => "holds",
            Outcome::Fails => "fails",
            Outcome::Inconclusive => "inconclusive",
        })
    }
}

enum Walk {
    Stopped(TermOperation),
    Saturated,
    Exhausted,
}

/// Breadth-first generation of the `k`-ary clone. `visit` sees each finished
/// level in table order and may stop the walk by returning an operation.
fn walk_clone(
    a: &FiniteAlgebra,
    k: usize,
    budget: &Budget,
    levels: &mut Vec<Vec<TermOperation>>,
    mut visit: impl FnMut(&[TermOperation]) -> Option<TermOperation>,
) -> Result<Walk, CloneError> {
    let n = a.size();
    let width = checked_pow(n, k)
        .filter(|&w| w <= budget.max_table_entries)
        .ok_or(CloneError::TableTooLarge { arity: k })?;
    let sig = a.signature();

    let mut seen: HashSet<Vec<Elem>> = HashSet::new();
    let mut all: Vec<TermOperation> = Vec::new();
    let mut level: Vec<TermOperation> = Vec::new();
    let mut tuple = vec![0; k];
    for i in 0..k {
        let table: Vec<Elem> = (0..width)
            .map(|c| {
                tuple_at(n, c, &mut tuple);
                tuple[i]
            })
            .collect();
        if seen.insert(table.clone()) {
            level.push(TermOperation {
                arity: k,
                table,
                term: Term::Var(i),
            });
        }
    }
    for (op, symbol) in sig.ops().iter().enumerate() {
        if symbol.arity == 0 {
            let table = vec![a.apply(op, &[]); width];
            if seen.insert(table.clone()) {
                level.push(TermOperation {
                    arity: k,
                    table,
                    term: Term::App(op, Vec::new()),
                });
            }
        }
    }

    loop {
        level.sort_by(|x, y| x.table.cmp(&y.table));
        if let Some(hit) = visit(&level) {
            levels.push(level);
            return Ok(Walk::Stopped(hit));
        }
        let fresh_from = all.len();
        all.extend(level.iter().cloned());
        levels.push(level);
        if all.len() > budget.max_elements {
            return Ok(Walk::Exhausted);
        }

        let mut next: Vec<TermOperation> = Vec::new();
        let mut over_budget = false;
        let mut args = Vec::new();
        for (op, symbol) in sig.ops().iter().enumerate() {
            if symbol.arity == 0 || over_budget {
                continue;
            }
            for_each_fresh_tuple(all.len(), fresh_from, symbol.arity, |picked| {
                let table: Vec<Elem> = (0..width)
                    .map(|c| {
                        args.clear();
                        args.extend(picked.iter().map(|&i| all[i].table[c]));
                        a.apply(op, &args)
                    })
                    .collect();
                if seen.contains(&table) {
                    return true;
                }
                seen.insert(table.clone());
                let term = Term::App(op, picked.iter().map(|&i| all[i].term.clone()).collect());
                next.push(TermOperation {
                    arity: k,
                    table,
                    term,
                });
                if all.len() + next.len() > budget.max_elements {
                    over_budget = true;
                    return false;
                }
                true
            });
        }
        if over_budget {
            return Ok(Walk::Exhausted);
        }
        if next.is_empty() {
            return Ok(Walk::Saturated);
        }
        level = next;
    }
}

/// All `k`-ary term operations, with `saturated = false` when the element
/// budget stopped the generation early.
pub fn clone_closure(
    a: &FiniteAlgebra,
    k: usize,
    budget: &Budget,
) -> Result<CloneClosure, CloneError> {
    let mut levels = Vec::new();
    let walk = walk_clone(a, k, budget, &mut levels, |_| None)?;
    Ok(CloneClosure {
        arity: k,
        levels,
        saturated: matches!(walk, Walk::Saturated),
    })
}

/// Finds a minimum-depth term operation whose table satisfies `accept`,
/// preferring the least table among those of that depth.
pub fn search_clone(
    a: &FiniteAlgebra,
    k: usize,
    budget: &Budget,
    mut accept: impl FnMut(&[Elem]) -> bool,
) -> Result<TermSearch, CloneError> {
    let mut levels = Vec::new();
    let walk = walk_clone(a, k, budget, &mut levels, |level| {
        level.iter().find(|op| accept(&op.table)).cloned()
    })?;
    Ok(match walk {
        Walk::Stopped(op) => TermSearch::Found(op),
        Walk::Saturated => TermSearch::Absent,
        Walk::Exhausted => TermSearch::Inconclusive {
            explored: levels.iter().map(Vec::len).sum(),
        },
    })
}

/// `t(x,0) = x` and `t(0,y) = y`.
pub fn is_jonsson_tarski_table(n: usize, t: &[Elem]) -> bool {
    (0..n).all(|x| t[x * n] as usize == x && t[x] as usize == x)
}

/// `s(x,0) = x` and `s(x,x) = 0`.
pub fn is_subtraction_table(n: usize, s: &[Elem]) -> bool {
    (0..n).all(|x| s[x * n] as usize == x && s[x * n + x] == 0)
}

/// `p(x,0,0) = x` and `p(x,x,y) = y`.
pub fn is_p_table(n: usize, p: &[Elem]) -> bool {
    (0..n).all(|x| {
        p[x * n * n] as usize == x && (0..n).all(|y| p[x * n * n + x * n + y] as usize == y)
    })
}

pub fn find_jonsson_tarski(a: &FiniteAlgebra, budget: &Budget) -> Result<TermSearch, CloneError> {
    let n = a.size();
    search_clone(a, 2, budget, |t| is_jonsson_tarski_table(n, t))
}

pub fn find_subtraction(a: &FiniteAlgebra, budget: &Budget) -> Result<TermSearch, CloneError> {
    let n = a.size();
    search_clone(a, 2, budget, |t| is_subtraction_table(n, t))
}

pub fn find_p(a: &FiniteAlgebra, budget: &Budget) -> Result<TermSearch, CloneError> {
    let n = a.size();
    search_clone(a, 3, budget, |t| is_p_table(n, t))
}

/// Outcome of checking an equation on every assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdentityVerdict {
    Holds,
    /// The lexicographically first assignment where the sides differ.
    Fails {
        counterexample: Vec<Elem>,
    },
}

impl IdentityVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, IdentityVerdict::Holds)
    }
}

/// Checks `lhs = rhs` over all assignments of the variables of either side.
pub fn decide_identity(
    a: &FiniteAlgebra,
    lhs: &Term,
    rhs: &Term,
) -> Result<IdentityVerdict, CloneError> {
    lhs.check(a.signature())?;
    rhs.check(a.signature())?;
    let vars = lhs.arity().max(rhs.arity());
    let total = checked_pow(a.size(), vars).ok_or(CloneError::TableTooLarge { arity: vars })?;
    let mut tuple = vec![0; vars];
    for i in 0..total {
        tuple_at(a.size(), i, &mut tuple);
        if lhs.eval(a, &tuple) != rhs.eval(a, &tuple) {
            return Ok(IdentityVerdict::Fails {
                counterexample: tuple,
            });
        }
    }
    Ok(IdentityVerdict::Holds)
}

fn require(a: &FiniteAlgebra, lhs: Term, rhs: Term, label: &str) -> Result<(), CloneError> {
    match decide_identity(a, &lhs, &rhs)? {
        IdentityVerdict::Holds => Ok(()),
        IdentityVerdict::Fails { counterexample } => Err(CloneError::PreconditionViolated(
            format!("{label} fails at {counterexample:?}"),
        )),
    }
}

fn x(i: usize) -> Term {
    Term::Var(i)
}

/// Checks the two equations of a strongly unital term.
pub fn verify_p(a: &FiniteAlgebra, p: &Term) -> Result<(), CloneError> {
    let zero = Term::zero(a.signature());
    require(
        a,
        p.substitute(&[x(0), zero.clone(), zero]),
        x(0),
        "p(x,0,0) = x",
    )?;
    require(a, p.substitute(&[x(0), x(0), x(1)]), x(1), "p(x,x,y) = y")
}

pub fn verify_jonsson_tarski(a: &FiniteAlgebra, t: &Term) -> Result<(), CloneError> {
    let zero = Term::zero(a.signature());
    require(a, t.substitute(&[x(0), zero.clone()]), x(0), "x+0 = x")?;
    require(a, t.substitute(&[zero, x(0)]), x(0), "0+x = x")
}

pub fn verify_subtraction(a: &FiniteAlgebra, s: &Term) -> Result<(), CloneError> {
    let zero = Term::zero(a.signature());
    require(a, s.substitute(&[x(0), zero.clone()]), x(0), "s(x,0) = x")?;
    require(a, s.substitute(&[x(0), x(0)]), zero, "s(x,x) = 0")
}

/// `+(x,y) = p(x,0,y)` and `s(x,y) = p(x,y,0)`, both re-verified on `a`.
pub fn derive_from_p(
    a: &FiniteAlgebra,
    p: &TermOperation,
) -> Result<(TermOperation, TermOperation), CloneError> {
    if p.arity != 3 {
        return Err(CloneError::PreconditionViolated(format!(
            "p has arity {}",
            p.arity
        )));
    }
    verify_p(a, &p.term)?;
    let zero = Term::zero(a.signature());
    let plus = p.term.substitute(&[x(0), zero.clone(), x(1)]);
    let minus = p.term.substitute(&[x(0), x(1), zero]);
    verify_jonsson_tarski(a, &plus)?;
    verify_subtraction(a, &minus)?;
    Ok((
        TermOperation::from_term(a, plus, 2)?,
        TermOperation::from_term(a, minus, 2)?,
    ))
}

/// `p(x,y,z) = +(s(x,y), z)`, re-verified on `a`.
pub fn compose_p(
    a: &FiniteAlgebra,
    plus: &TermOperation,
    minus: &TermOperation,
) -> Result<TermOperation, CloneError> {
    verify_jonsson_tarski(a, &plus.term)?;
    verify_subtraction(a, &minus.term)?;
    let s = minus.term.substitute(&[x(0), x(1)]);
    let p = plus.term.substitute(&[s, x(2)]);
    verify_p(a, &p)?;
    TermOperation::from_term(a, p, 3)
}

/// Looks up an operation's value at a tuple.
pub fn table_value(n: usize, table: &[Elem], tuple: &[Elem]) -> Elem {
    table[tuple_index(n, tuple)]
}
