//! Free algebras `F(k)` of the variety generated by a finite algebra `A`,
//! realized as the subalgebra of `A^(n^k)` generated by the `k` projection
//! vectors. An element is the evaluation vector of a `k`-ary term operation
//! over all `k`-tuples in row-major order.

use std::collections::HashMap;

use super::{AlgebraError, Budget, Elem, FiniteAlgebra};
use crate::term::Term;
use crate::tuples::{checked_pow, for_each_fresh_tuple, tuple_at, tuple_index};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Derivation {
    Generator(usize),
    Apply(usize, Vec<usize>),
}

/// The generated set of evaluation vectors, in discovery order.
#[derive(Debug, Clone)]
pub struct FreeClosure {
    rank: usize,
    vectors: Vec<Vec<Elem>>,
    derivations: Vec<Derivation>,
}

impl FreeClosure {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Elem>] {
        &self.vectors
    }

    fn term(&self, index: usize, memo: &mut Vec<Option<Term>>) -> Term {
        if let Some(t) = &memo[index] {
            return t.clone();
        }
        let t = match &self.derivations[index] {
            Derivation::Generator(i) => Term::Var(*i),
            Derivation::Apply(op, args) => {
                let args = args.iter().map(|&j| self.term(j, memo)).collect();
                Term::App(*op, args)
            }
        };
        memo[index] = Some(t.clone());
        t
    }

    /// A term whose evaluation vector is element `index`.
    pub fn term_of(&self, index: usize) -> Term {
        let mut memo = vec![None; self.vectors.len()];
        self.term(index, &mut memo)
    }
}

/// Outcome of a closure run with an early-stop predicate.
#[derive(Debug, Clone)]
pub enum FreeSearch {
    /// The predicate accepted this element before saturation.
    Found { vector: Vec<Elem>, term: Term },
    /// Closure saturated without the predicate accepting anything.
    Saturated(FreeClosure),
    /// The element cap was reached first.
    Exceeded { cap: usize },
}

enum Step {
    Continue,
    Stop(FreeSearch),
}

struct Builder<'b, F> {
    closure: FreeClosure,
    index: HashMap<Vec<Elem>, usize>,
    budget: &'b Budget,
    accept: F,
}

impl<F: FnMut(&[Elem]) -> bool> Builder<'_, F> {
    fn insert(&mut self, vector: Vec<Elem>, derivation: Derivation) -> Step {
        if self.index.contains_key(&vector) {
            return Step::Continue;
        }
        if self.closure.vectors.len() >= self.budget.max_elements {
            return Step::Stop(FreeSearch::Exceeded {
                cap: self.budget.max_elements,
            });
        }
        let id = self.closure.vectors.len();
        self.index.insert(vector.clone(), id);
        self.closure.vectors.push(vector);
        self.closure.derivations.push(derivation);
        if (self.accept)(&self.closure.vectors[id]) {
            return Step::Stop(FreeSearch::Found {
                vector: self.closure.vectors[id].clone(),
                term: self.closure.term_of(id),
            });
        }
        Step::Continue
    }
}

/// Generates `F(rank)` inside `A^(n^rank)`, calling `accept` on every new
/// element and stopping at the first accepted one.
pub fn search_free(
    a: &FiniteAlgebra,
    rank: usize,
    budget: &Budget,
    accept: impl FnMut(&[Elem]) -> bool,
) -> Result<FreeSearch, AlgebraError> {
    let n = a.size();
    let width = checked_pow(n, rank)
        .filter(|&w| w <= budget.max_table_entries)
        .ok_or(AlgebraError::BudgetExceeded {
            cap: budget.max_table_entries,
        })?;

    let mut builder = Builder {
        closure: FreeClosure {
            rank,
            vectors: Vec::new(),
            derivations: Vec::new(),
        },
        index: HashMap::new(),
        budget,
        accept,
    };

    for (op, symbol) in a.signature().ops().iter().enumerate() {
        if symbol.arity == 0 {
            let v = vec![a.apply(op, &[]); width];
            if let Step::Stop(outcome) = builder.insert(v, Derivation::Apply(op, Vec::new())) {
                return Ok(outcome);
            }
        }
    }
    let mut tuple = vec![0; rank];
    for i in 0..rank {
        let v = (0..width)
            .map(|c| {
                tuple_at(n, c, &mut tuple);
                tuple[i]
            })
            .collect();
        if let Step::Stop(outcome) = builder.insert(v, Derivation::Generator(i)) {
            return Ok(outcome);
        }
    }

    let mut done = 0;
    let mut args = Vec::new();
    while done < builder.closure.vectors.len() {
        let total = builder.closure.vectors.len();
        for (op, symbol) in a.signature().ops().iter().enumerate() {
            if symbol.arity == 0 {
                continue;
            }
            let mut stopped = None;
            for_each_fresh_tuple(total, done, symbol.arity, |picked| {
                let vector: Vec<Elem> = (0..width)
                    .map(|c| {
                        args.clear();
                        args.extend(picked.iter().map(|&j| builder.closure.vectors[j][c]));
                        a.apply(op, &args)
                    })
                    .collect();
                match builder.insert(vector, Derivation::Apply(op, picked.to_vec())) {
                    Step::Continue => true,
                    Step::Stop(outcome) => {
                        stopped = Some(outcome);
                        false
                    }
                }
            });
            if let Some(outcome) = stopped {
                return Ok(outcome);
            }
        }
        done = total;
    }
    Ok(FreeSearch::Saturated(builder.closure))
}

/// A saturated free algebra together with its presentation inside `A^(n^k)`.
#[derive(Debug, Clone)]
pub struct FreeAlgebra {
    algebra: FiniteAlgebra,
    base: usize,
    closure: FreeClosure,
    /// carrier index → position in `closure`
    order: Vec<usize>,
    generators: Vec<Elem>,
}

/// Builds `F(k)`; elements are sorted lexicographically by evaluation vector,
/// so element `0` is the constant zero vector.
pub fn free_algebra(
    a: &FiniteAlgebra,
    k: usize,
    budget: &Budget,
) -> Result<FreeAlgebra, AlgebraError> {
    let closure = match search_free(a, k, budget, |_| false)? {
        FreeSearch::Saturated(c) => c,
        FreeSearch::Exceeded { cap } => return Err(AlgebraError::BudgetExceeded { cap }),
        FreeSearch::Found { .. } => unreachable!("predicate never accepts"),
    };
    let n = a.size();
    let mut order: Vec<usize> = (0..closure.len()).collect();
    order.sort_by(|&i, &j| closure.vectors[i].cmp(&closure.vectors[j]));
    let lookup: HashMap<&[Elem], Elem> = order
        .iter()
        .enumerate()
        .map(|(rank, &i)| (closure.vectors[i].as_slice(), rank as Elem))
        .collect();

    let size = closure.len();
    let width = closure.vectors.first().map_or(1, Vec::len);
    let mut tables = Vec::new();
    for (op, symbol) in a.signature().ops().iter().enumerate() {
        let entries = checked_pow(size, symbol.arity)
            .filter(|&e| e <= budget.max_table_entries)
            .ok_or(AlgebraError::BudgetExceeded {
                cap: budget.max_table_entries,
            })?;
        let mut table = Vec::with_capacity(entries);
        let mut tuple = vec![0; symbol.arity];
        let mut args = vec![0; symbol.arity];
        let mut vector = vec![0; width];
        for e in 0..entries {
            tuple_at(size, e, &mut tuple);
            for (c, slot) in vector.iter_mut().enumerate() {
                for (arg, &t) in args.iter_mut().zip(&tuple) {
                    *arg = closure.vectors[order[t as usize]][c];
                }
                *slot = a.apply(op, &args);
            }
            table.push(lookup[vector.as_slice()]);
        }
        tables.push(table);
    }
    let mut tuple = vec![0; k];
    let generators = (0..k)
        .map(|i| {
            let projection: Vec<Elem> = (0..width)
                .map(|c| {
                    tuple_at(n, c, &mut tuple);
                    tuple[i]
                })
                .collect();
            lookup[projection.as_slice()]
        })
        .collect();
    let algebra = FiniteAlgebra::from_parts(
        format!("F{k}({})", a.name()),
        a.signature().clone(),
        size,
        tables,
    );
    Ok(FreeAlgebra {
        algebra,
        base: n,
        closure,
        order,
        generators,
    })
}

impl FreeAlgebra {
    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn rank(&self) -> usize {
        self.closure.rank
    }

    pub fn size(&self) -> usize {
        self.algebra.size()
    }

    /// Size of the generating algebra `A`.
    pub fn base(&self) -> usize {
        self.base
    }

    /// Evaluation vector of carrier element `x`.
    pub fn vector(&self, x: Elem) -> &[Elem] {
        &self.closure.vectors[self.order[x as usize]]
    }

    /// Carrier indices of the free generators `x1..xk`.
    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    /// Carrier element with the given evaluation vector.
    pub fn element_of(&self, vector: &[Elem]) -> Option<Elem> {
        self.order
            .binary_search_by(|&i| self.closure.vectors[i].as_slice().cmp(vector))
            .ok()
            .map(|x| x as Elem)
    }

    /// A term over `x1..xk` denoting carrier element `x`.
    pub fn term_of(&self, x: Elem) -> Term {
        self.closure.term_of(self.order[x as usize])
    }

    /// Image of `x` under the homomorphism out of `F(k)` that sends generator
    /// `i` to `images[i]`, where every image is an evaluation vector of equal
    /// length over `A`.
    pub fn substitute(&self, x: Elem, images: &[&[Elem]]) -> Vec<Elem> {
        substitute_vector(self.base, self.vector(x), images)
    }
}

/// Evaluates the term operation with evaluation vector `table` coordinatewise
/// on `images`.
pub fn substitute_vector(base: usize, table: &[Elem], images: &[&[Elem]]) -> Vec<Elem> {
    let width = images.first().map_or(1, |v| v.len());
    let mut tuple = vec![0; images.len()];
    (0..width)
        .map(|c| {
            for (slot, img) in tuple.iter_mut().zip(images) {
                *slot = img[c];
            }
            table[tuple_index(base, &tuple)]
        })
        .collect()
}
