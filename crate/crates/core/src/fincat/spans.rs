use serde::{Deserialize, Serialize};

use super::{CheckError, FiniteCategory, MorId, ObjId, ZeroStructure};

/// `X <-f- Z -g-> Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub left: MorId,
    pub right: MorId,
}

/// Sections found for a span; each is the least by id.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanFlags {
    /// `s: X → Z` with `f·s = 1`, `g·s = 0`.
    pub left_section: Option<MorId>,
    /// `t: Y → Z` with `g·t = 1`, `f·t = 0`.
    pub right_section: Option<MorId>,
    /// `s: X → Z` with `f·s = 1`.
    pub splitting: Option<MorId>,
}

impl SpanFlags {
    pub fn punctual(&self) -> bool {
        self.left_section.is_some() && self.right_section.is_some()
    }

    pub fn left_punctual(&self) -> bool {
        self.left_section.is_some()
    }

    pub fn right_punctual(&self) -> bool {
        self.right_section.is_some()
    }

    pub fn split_right_punctual(&self) -> bool {
        self.splitting.is_some() && self.right_section.is_some()
    }
}

pub(crate) fn left_section(
    cat: &FiniteCategory,
    zs: &ZeroStructure,
    f: MorId,
    g: MorId,
) -> Option<MorId> {
    let (z, x, y) = (cat.dom(f), cat.cod(f), cat.cod(g));
    let (one, zero) = (cat.identity(x), zs.zero(x, y));
    cat.hom(x, z)
        .iter()
        .copied()
        .find(|&s| cat.compose(f, s) == one && cat.compose(g, s) == zero)
}

pub(crate) fn right_section(
    cat: &FiniteCategory,
    zs: &ZeroStructure,
    f: MorId,
    g: MorId,
) -> Option<MorId> {
    left_section(cat, zs, g, f)
}

pub fn classify_span(cat: &FiniteCategory, span: Span) -> Result<SpanFlags, CheckError> {
    let zs = cat.zero_structure().ok_or(CheckError::NoZeroObject)?;
    let (f, g) = (span.left, span.right);
    Ok(SpanFlags {
        left_section: left_section(cat, zs, f, g),
        right_section: right_section(cat, zs, f, g),
        splitting: super::is_split_epi(cat, f),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReflexiveKind {
    Graph,
    Relation,
}

/// `d, c: G → X` with a common section `e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReflexiveStructure {
    pub apex: ObjId,
    pub d: MorId,
    pub c: MorId,
    pub e: MorId,
    pub kind: ReflexiveKind,
}

/// A common section of `d` and `c`.
pub(crate) fn reflexivity(cat: &FiniteCategory, d: MorId, c: MorId) -> Option<MorId> {
    let (g, x) = (cat.dom(d), cat.cod(d));
    let one = cat.identity(x);
    cat.hom(x, g)
        .iter()
        .copied()
        .find(|&e| cat.compose(d, e) == one && cat.compose(c, e) == one)
}

/// `u ↦ (d·u, c·u)` is injective on every `hom(W, G)`.
pub(crate) fn jointly_monic(cat: &FiniteCategory, d: MorId, c: MorId) -> bool {
    let (g, x) = (cat.dom(d), cat.cod(d));
    cat.objects().all(|w| {
        let n = cat.hom(w, x).len();
        let mut hit = vec![false; n * n];
        cat.hom(w, g).iter().all(|&u| {
            let i = cat.position(cat.compose(d, u)) * n + cat.position(cat.compose(c, u));
            !std::mem::replace(&mut hit[i], true)
        })
    })
}

/// Reflexive graphs (or relations) on `x`, ordered by `d` then `c`.
pub fn enumerate_reflexive(
    cat: &FiniteCategory,
    x: ObjId,
    kind: ReflexiveKind,
) -> Result<Vec<ReflexiveStructure>, CheckError> {
    cat.zero_structure().ok_or(CheckError::NoZeroObject)?;
    let mut out = Vec::new();
    for apex in cat.objects() {
        let legs = cat.hom(apex, x);
        for &d in legs {
            for &c in legs {
                let Some(e) = reflexivity(cat, d, c) else {
                    continue;
                };
                if kind == ReflexiveKind::Relation && !jointly_monic(cat, d, c) {
                    continue;
                }
                out.push(ReflexiveStructure {
                    apex,
                    d,
                    c,
                    e,
                    kind,
                });
            }
        }
    }
    out.sort_by_key(|r| (r.d, r.c));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::validate_category;
    use super::*;

    #[test]
    fn zero_apex_span_is_not_punctual() {
        let cat = validate_category(&retract()).unwrap();
        let zs = cat.zero_structure().unwrap();
        let (o, x, y) = (0, 1, 2);
        let flags = classify_span(
            &cat,
            Span {
                left: zs.zero(o, x),
                right: zs.zero(o, y),
            },
        )
        .unwrap();
        assert!(!flags.punctual() && !flags.right_punctual() && !flags.left_punctual());
    }

    #[test]
    fn diagonal_is_a_reflexive_relation() {
        let cat = validate_category(&retract()).unwrap();
        for x in cat.objects() {
            let one = cat.identity(x);
            let rels = enumerate_reflexive(&cat, x, ReflexiveKind::Relation).unwrap();
            assert!(rels.iter().any(|r| r.d == one && r.c == one && r.e == one));
        }
    }

    #[test]
    fn retraction_spans() {
        let cat = validate_category(&retract()).unwrap();
        let zs = cat.zero_structure().unwrap();
        let (x, y) = (1, 2);
        let r = cat.find_morphism("r").unwrap();
        // X <-r- Y -0-> X : left punctual through i
        let flags = classify_span(
            &cat,
            Span {
                left: r,
                right: zs.zero(y, x),
            },
        )
        .unwrap();
        assert_eq!(flags.left_section, cat.find_morphism("i"));
        assert!(!flags.right_punctual());
        assert_eq!(flags.splitting, cat.find_morphism("i"));
    }
}
