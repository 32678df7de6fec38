use serde::{Deserialize, Serialize};

use super::{FiniteCategory, MorId, ObjId};

/// Left cancellation: `f · u = f · v` forces `u = v` for every pair of
/// morphisms into the domain of `f`.
pub(crate) fn cancels(cat: &FiniteCategory, f: MorId) -> bool {
    if let Some(map) = cat.map_of(f) {
        // injective maps cancel in any concrete category
        let mut seen = vec![false; map.iter().map(|&y| y as usize + 1).max().unwrap_or(0)];
        if map
            .iter()
            .all(|&y| !std::mem::replace(&mut seen[y as usize], true))
        {
            return true;
        }
    }
    let (c, d) = (cat.dom(f), cat.cod(f));
    cat.objects().all(|w| {
        let mut hit = vec![false; cat.hom(w, d).len()];
        cat.hom(w, c)
            .iter()
            .all(|&u| !std::mem::replace(&mut hit[cat.position(cat.compose(f, u))], true))
    })
}

pub fn is_mono(cat: &FiniteCategory, f: MorId) -> bool {
    cat.mono_flags()[f]
}

/// A section `s` with `f · s = 1`, if any.
pub fn is_split_epi(cat: &FiniteCategory, f: MorId) -> Option<MorId> {
    let (x, y) = (cat.dom(f), cat.cod(f));
    let one = cat.identity(y);
    cat.hom(y, x)
        .iter()
        .copied()
        .find(|&s| cat.compose(f, s) == one)
}

pub fn is_iso(cat: &FiniteCategory, f: MorId) -> bool {
    let (x, y) = (cat.dom(f), cat.cod(f));
    cat.hom(y, x)
        .iter()
        .any(|&g| cat.compose(g, f) == cat.identity(x) && cat.compose(f, g) == cat.identity(y))
}

/// A commutative square `m · top = bottom · e` with `m` mono for which no
/// diagonal exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrongEpiFailure {
    pub mono: MorId,
    pub top: MorId,
    pub bottom: MorId,
}

/// The least failing square for the lifting property of `e` against monos,
/// ordered by mono id then by `bottom` id.
pub fn strong_epi_failure(cat: &FiniteCategory, e: MorId) -> Option<StrongEpiFailure> {
    let (b, p) = (cat.dom(e), cat.cod(e));
    let monos = cat.mono_flags();
    for m in (0..cat.morphism_count()).filter(|&m| monos[m]) {
        let (c, d) = (cat.dom(m), cat.cod(m));
        // image of hom(-, C) under m, indexed by position in hom(-, D)
        let through = |source: ObjId| {
            let mut hit = vec![None; cat.hom(source, d).len()];
            for &u in cat.hom(source, c) {
                hit[cat.position(cat.compose(m, u))].get_or_insert(u);
            }
            hit
        };
        let from_b = through(b);
        let from_p = through(p);
        for &v in cat.hom(p, d) {
            if let Some(top) = from_b[cat.position(cat.compose(v, e))] {
                if from_p[cat.position(v)].is_none() {
                    return Some(StrongEpiFailure {
                        mono: m,
                        top,
                        bottom: v,
                    });
                }
            }
        }
    }
    None
}

pub fn is_strong_epi(cat: &FiniteCategory, e: MorId) -> bool {
    strong_epi_failure(cat, e).is_none()
}

/// Is `e` a coequalizer of the parallel pair `u, v`?
pub(crate) fn coequalizes(cat: &FiniteCategory, e: MorId, u: MorId, v: MorId) -> bool {
    if cat.compose(e, u) != cat.compose(e, v) {
        return false;
    }
    let (b, c) = (cat.dom(e), cat.cod(e));
    cat.objects().all(|d| {
        let mut count = vec![0u32; cat.hom(b, d).len()];
        for &k in cat.hom(c, d) {
            count[cat.position(cat.compose(k, e))] += 1;
        }
        cat.hom(b, d)
            .iter()
            .all(|&h| cat.compose(h, u) != cat.compose(h, v) || count[cat.position(h)] == 1)
    })
}

/// A parallel pair that `e` coequalizes, searched by enumeration.
pub fn coequalized_pair(cat: &FiniteCategory, e: MorId) -> Option<(MorId, MorId)> {
    let b = cat.dom(e);
    for a in cat.objects() {
        let hom = cat.hom(a, b);
        for (i, &u) in hom.iter().enumerate() {
            for &v in &hom[i..] {
                if coequalizes(cat, e, u, v) {
                    return Some((u, v));
                }
            }
        }
    }
    None
}

/// Regular epi: membership in the designated class if the category has one,
/// otherwise a coequalizer of some parallel pair.
pub fn is_regular_epi(cat: &FiniteCategory, e: MorId) -> bool {
    match &cat.designations().regular_epis {
        Some(set) => set.contains(&e),
        None => coequalized_pair(cat, e).is_some(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismFlags {
    pub mono: bool,
    pub split_epi: bool,
    pub strong_epi: bool,
    pub regular_epi: bool,
}

pub fn classify_morphism(cat: &FiniteCategory, f: MorId) -> MorphismFlags {
    MorphismFlags {
        mono: is_mono(cat, f),
        split_epi: is_split_epi(cat, f).is_some(),
        strong_epi: is_strong_epi(cat, f),
        regular_epi: is_regular_epi(cat, f),
    }
}

/// Every mono through which both `a` and `b` factor is an isomorphism.
/// On failure returns the least offending mono.
pub fn is_jointly_strongly_epic(cat: &FiniteCategory, a: MorId, b: MorId) -> Result<(), MorId> {
    let p = cat.cod(a);
    debug_assert_eq!(p, cat.cod(b));
    let monos = cat.mono_flags();
    let mut candidates: Vec<MorId> = cat
        .objects()
        .flat_map(|c| cat.hom(c, p).iter().copied())
        .filter(|&m| monos[m])
        .collect();
    candidates.sort_unstable();
    for m in candidates {
        if cat.factor_through(m, a).is_some()
            && cat.factor_through(m, b).is_some()
            && !is_iso(cat, m)
        {
            return Err(m);
        }
    }
    Ok(())
}
