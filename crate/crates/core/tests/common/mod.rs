//! Brute-force reference implementations. They share nothing with the
//! library beyond reading operation tables, and are only fit for tiny
//! inputs.

#![allow(dead_code)]

use std::collections::BTreeSet;

use catprop_core::algebra::{validate_algebra, AlgebraSpec, FiniteAlgebra, OpSpec};

pub type Func = Vec<u32>;

/// Value of variable `i` in the `t`-th assignment of `k` variables over
/// `n` elements, first variable most significant.
pub fn var_value(n: usize, k: usize, t: usize, i: usize) -> u32 {
    ((t / n.pow((k - 1 - i) as u32)) % n) as u32
}

fn index(n: usize, args: &[u32]) -> usize {
    args.iter().fold(0, |acc, &a| acc * n + a as usize)
}

/// Every `k`-ary term operation, as value vectors over all assignments,
/// by closing the projections under the basic operations.
pub fn naive_clone(a: &FiniteAlgebra, k: usize) -> BTreeSet<Func> {
    let n = a.size();
    let width = n.pow(k as u32);
    let mut funcs: BTreeSet<Func> = (0..k)
        .map(|i| (0..width).map(|t| var_value(n, k, t, i)).collect())
        .collect();
    let ops: Vec<(usize, Vec<u32>)> = a
        .signature()
        .ops()
        .iter()
        .enumerate()
        .map(|(i, op)| (op.arity, a.table(i).to_vec()))
        .collect();
    loop {
        let current: Vec<Func> = funcs.iter().cloned().collect();
        let before = funcs.len();
        for (arity, table) in &ops {
            let mut choice = vec![0usize; *arity];
            'tuples: loop {
                let f: Func = (0..width)
                    .map(|t| {
                        let args: Vec<u32> = choice.iter().map(|&c| current[c][t]).collect();
                        table[index(n, &args)]
                    })
                    .collect();
                funcs.insert(f);
                for slot in choice.iter_mut().rev() {
                    *slot += 1;
                    if *slot < current.len() {
                        continue 'tuples;
                    }
                    *slot = 0;
                }
                break;
            }
        }
        if funcs.len() == before {
            return funcs;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Jt,
    Sub,
    P,
}

impl Kind {
    pub fn arity(self) -> usize {
        if self == Kind::P {
            3
        } else {
            2
        }
    }
}

/// The defining equations of each characteristic term, checked pointwise.
pub fn satisfies(n: usize, kind: Kind, f: &[u32]) -> bool {
    let at = |args: &[u32]| f[index(n, args)];
    let n = n as u32;
    match kind {
        Kind::Jt => (0..n).all(|x| at(&[x, 0]) == x && at(&[0, x]) == x),
        Kind::Sub => (0..n).all(|x| at(&[x, 0]) == x && at(&[x, x]) == 0),
        Kind::P => (0..n).all(|x| at(&[x, 0, 0]) == x && (0..n).all(|y| at(&[x, x, y]) == y)),
    }
}

pub fn has_term(a: &FiniteAlgebra, kind: Kind) -> bool {
    naive_clone(a, kind.arity())
        .iter()
        .any(|f| satisfies(a.size(), kind, f))
}

pub fn is_hom(a: &FiniteAlgebra, b: &FiniteAlgebra, map: &[u32]) -> bool {
    a.signature().ops().iter().enumerate().all(|(i, op)| {
        let width = a.size().pow(op.arity as u32);
        (0..width).all(|t| {
            let args: Vec<u32> = (0..op.arity)
                .map(|j| var_value(a.size(), op.arity, t, j))
                .collect();
            let image: Vec<u32> = args.iter().map(|&x| map[x as usize]).collect();
            map[a.table(i)[t] as usize] == b.table(i)[index(b.size(), &image)]
        })
    })
}

/// All homomorphisms, by trying every map.
pub fn naive_homs(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Vec<Vec<u32>> {
    let (na, nb) = (a.size(), b.size());
    (0..nb.pow(na as u32))
        .map(|t| {
            (0..na)
                .map(|i| var_value(nb, na, t, i))
                .collect::<Vec<u32>>()
        })
        .filter(|m| is_hom(a, b, m))
        .collect()
}

/// Least subset containing `seed` and closed under every operation.
pub fn naive_closure(a: &FiniteAlgebra, seed: &[u32]) -> BTreeSet<u32> {
    let mut set: BTreeSet<u32> = seed.iter().copied().collect();
    loop {
        let before = set.len();
        let elems: Vec<u32> = set.iter().copied().collect();
        for (i, op) in a.signature().ops().iter().enumerate() {
            let width = elems.len().pow(op.arity as u32);
            for t in 0..width {
                let args: Vec<u32> = (0..op.arity)
                    .map(|j| elems[var_value(elems.len(), op.arity, t, j) as usize])
                    .collect();
                set.insert(a.table(i)[index(a.size(), &args)]);
            }
        }
        if set.len() == before {
            return set;
        }
    }
}

pub fn algebra(name: &str, size: usize, ops: &[(&str, usize, Vec<u32>)]) -> FiniteAlgebra {
    let mut all = vec![OpSpec {
        name: "z".into(),
        arity: 0,
        table: vec![0],
    }];
    all.extend(ops.iter().map(|(op, arity, table)| OpSpec {
        name: op.to_string(),
        arity: *arity,
        table: table.clone(),
    }));
    validate_algebra(&AlgebraSpec {
        name: name.into(),
        size,
        ops: all,
        zero: Some("z".into()),
    })
    .expect("valid test algebra")
}

pub fn corpus_algebra(name: &str) -> FiniteAlgebra {
    catprop_core::corpus::algebras()
        .into_iter()
        .find(|a| a.name() == name)
        .unwrap_or_else(|| panic!("no bundled algebra {name}"))
}
