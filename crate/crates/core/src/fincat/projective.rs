use serde::{Deserialize, Serialize};

use super::classify::{coequalizes, is_regular_epi, is_strong_epi};
use super::limits::strict_pullback;
use super::{FiniteCategory, MorId, ObjId};

/// Which epimorphisms projectivity is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EpiClass {
    /// Designated regular epis, or coequalizers when none are designated.
    #[default]
    Regular,
    Strong,
}

fn in_class(cat: &FiniteCategory, e: MorId, class: EpiClass) -> bool {
    match class {
        EpiClass::Regular => is_regular_epi(cat, e),
        EpiClass::Strong => is_strong_epi(cat, e),
    }
}

fn class_members(cat: &FiniteCategory, class: EpiClass) -> Vec<MorId> {
    (0..cat.morphism_count())
        .filter(|&e| in_class(cat, e, class))
        .collect()
}

fn lifting_failure(cat: &FiniteCategory, p: ObjId, epis: &[MorId]) -> Option<(MorId, MorId)> {
    for &e in epis {
        let (a, b) = (cat.dom(e), cat.cod(e));
        let mut reached = vec![false; cat.hom(p, b).len()];
        for &l in cat.hom(p, a) {
            reached[cat.position(cat.compose(e, l))] = true;
        }
        if let Some(i) = reached.iter().position(|&r| !r) {
            return Some((e, cat.hom(p, b)[i]));
        }
    }
    None
}

/// Every morphism out of `p` lifts along every epi of the class. On failure
/// returns the epi and the morphism that does not lift.
pub fn is_projective(
    cat: &FiniteCategory,
    p: ObjId,
    class: EpiClass,
) -> Result<(), (MorId, MorId)> {
    match lifting_failure(cat, p, &class_members(cat, class)) {
        Some(f) => Err(f),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftingFailure {
    pub object: ObjId,
    pub epi: MorId,
    pub morphism: MorId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverEntry {
    pub object: ObjId,
    /// A small object and an epi of the class from it onto `object`.
    pub cover: Option<(ObjId, MorId)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    pub valid: bool,
    pub non_projective: Vec<LiftingFailure>,
    pub covers: Vec<CoverEntry>,
    /// Zero object of the full subcategory on the small objects.
    pub small_zero: Option<ObjId>,
    pub big_zero: Option<ObjId>,
    /// A pointed small subcategory forces a pointed ambient category.
    pub pointedness_consistent: bool,
    /// Epis of the class whose kernel pair does not exist in the category.
    pub missing_kernel_pairs: Vec<MorId>,
    /// Epis of the class that do not coequalize their kernel pair.
    pub not_kernel_coequalizers: Vec<MorId>,
}

/// Checks that the full subcategory on `small` is a projective cover of
/// `cat`: small objects are projective and every object is covered.
/// Kernel pairs are audited and reported but do not affect `valid`.
pub fn validate_projective_cover(
    cat: &FiniteCategory,
    small: &[ObjId],
    class: EpiClass,
) -> CoverReport {
    let epis = class_members(cat, class);
    let non_projective: Vec<LiftingFailure> = small
        .iter()
        .filter_map(|&p| {
            lifting_failure(cat, p, &epis).map(|(epi, morphism)| LiftingFailure {
                object: p,
                epi,
                morphism,
            })
        })
        .collect();
    let covers: Vec<CoverEntry> = cat
        .objects()
        .map(|object| CoverEntry {
            object,
            cover: small.iter().find_map(|&s| {
                cat.hom(s, object)
                    .iter()
                    .copied()
                    .find(|e| epis.binary_search(e).is_ok())
                    .map(|e| (s, e))
            }),
        })
        .collect();
    let small_zero = small.iter().copied().find(|&z| {
        small
            .iter()
            .all(|&x| cat.hom(z, x).len() == 1 && cat.hom(x, z).len() == 1)
    });
    let big_zero = cat.zero_structure().map(|z| z.object);
    let mut missing_kernel_pairs = Vec::new();
    let mut not_kernel_coequalizers = Vec::new();
    for &e in &epis {
        match strict_pullback(cat, e, e) {
            None => missing_kernel_pairs.push(e),
            Some(cone) => {
                if !coequalizes(cat, e, cone.left, cone.right) {
                    not_kernel_coequalizers.push(e);
                }
            }
        }
    }
    CoverReport {
        valid: non_projective.is_empty() && covers.iter().all(|c| c.cover.is_some()),
        non_projective,
        covers,
        small_zero,
        big_zero,
        pointedness_consistent: small_zero.is_none() || big_zero.is_some(),
        missing_kernel_pairs,
        not_kernel_coequalizers,
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::validate_category;
    use super::*;

    #[test]
    fn zero_object_is_projective() {
        let cat = validate_category(&retract()).unwrap();
        assert!(is_projective(&cat, 0, EpiClass::Regular).is_ok());
    }

    #[test]
    fn zero_alone_does_not_cover() {
        let cat = validate_category(&retract()).unwrap();
        let report = validate_projective_cover(&cat, &[0], EpiClass::Regular);
        assert!(!report.valid);
        assert!(report.pointedness_consistent);
        assert_eq!(report.small_zero, Some(0));
    }

    #[test]
    fn retract_covers_through_y() {
        // r: Y -> X is a split epi, so Y covers X; Y is projective.
        let cat = validate_category(&retract()).unwrap();
        let report = validate_projective_cover(&cat, &[0, 2], EpiClass::Regular);
        assert!(report.non_projective.is_empty(), "{report:?}");
        assert!(report.valid, "{report:?}");
    }
}
