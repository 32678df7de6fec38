//! Row-major tuple indexing shared by operation tables, free algebras and
//! clone tables.

/// Index of `tuple` in a row-major table over a carrier of size `base`.
pub fn tuple_index(base: usize, tuple: &[u32]) -> usize {
    tuple.iter().fold(0, |acc, &t| acc * base + t as usize)
}

/// Inverse of [`tuple_index`]: fills `out` with the tuple at `index`.
pub fn tuple_at(base: usize, mut index: usize, out: &mut [u32]) {
    for slot in out.iter_mut().rev() {
        *slot = (index % base) as u32;
        index /= base;
    }
}

/// `base^exp`, or `None` on overflow.
pub fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Calls `f` on every tuple of length `arity` over `0..total` that contains at
/// least one index `>= fresh_from`.
///
/// Tuples are grouped by the position of their first fresh entry; within a
/// group the order is lexicographic. Used by semi-naive closure loops.
pub fn for_each_fresh_tuple(
    total: usize,
    fresh_from: usize,
    arity: usize,
    mut f: impl FnMut(&[usize]) -> bool,
) -> bool {
    if arity == 0 || fresh_from >= total {
        return true;
    }
    let mut tuple = vec![0usize; arity];
    for pivot in 0..arity {
        if pivot > 0 && fresh_from == 0 {
            // every tuple was already produced with pivot 0
            break;
        }
        let lo = |i: usize| if i == pivot { fresh_from } else { 0 };
        let hi = |i: usize| if i < pivot { fresh_from } else { total };
        if (0..arity).any(|i| lo(i) >= hi(i)) {
            continue;
        }
        for (i, slot) in tuple.iter_mut().enumerate() {
            *slot = lo(i);
        }
        loop {
            if !f(&tuple) {
                return false;
            }
            let mut exhausted = true;
            for pos in (0..arity).rev() {
                tuple[pos] += 1;
                if tuple[pos] < hi(pos) {
                    exhausted = false;
                    break;
                }
                tuple[pos] = lo(pos);
            }
            if exhausted {
                break;
            }
        }
    }
    true
}

/// Calls `f` on every tuple of length `arity` over `0..base` in row-major order.
pub fn for_each_tuple(base: usize, arity: usize, mut f: impl FnMut(&[u32])) {
    let Some(count) = checked_pow(base, arity) else {
        return;
    };
    let mut tuple = vec![0u32; arity];
    for index in 0..count {
        tuple_at(base, index, &mut tuple);
        f(&tuple);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn index_round_trip() {
        let mut out = [0u32; 3];
        for i in 0..27 {
            tuple_at(3, i, &mut out);
            assert_eq!(tuple_index(3, &out), i);
        }
    }

    #[test]
    fn fresh_tuples_cover_exactly_once() {
        for (total, fresh, arity) in [(4, 2, 2), (3, 0, 3), (5, 4, 3), (3, 1, 1), (2, 2, 2)] {
            let mut seen = Vec::new();
            for_each_fresh_tuple(total, fresh, arity, |t| {
                seen.push(t.to_vec());
                true
            });
            let unique: BTreeSet<_> = seen.iter().cloned().collect();
            assert_eq!(
                unique.len(),
                seen.len(),
                "duplicates for {total},{fresh},{arity}"
            );
            let mut expected = BTreeSet::new();
            for_each_tuple(total, arity, |t| {
                if t.iter().any(|&x| x as usize >= fresh) {
                    expected.insert(t.iter().map(|&x| x as usize).collect::<Vec<_>>());
                }
            });
            assert_eq!(unique, expected);
        }
    }
}
