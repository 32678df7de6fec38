use serde::{Deserialize, Serialize};

use super::check::CheckError;
use super::classify::{coequalized_pair, is_strong_epi};
use super::limits::{coproduct_violation, is_weak_product, product_violation, zigzag_weak_limit};
use super::spans::right_section;
use super::{is_split_epi, FiniteCategory, MorId, ObjId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakLimitAudit {
    /// First pair (in id order) without a weak product.
    pub missing_weak_product: Option<[ObjId; 2]>,
    /// First parallel pair without a weak equalizer.
    pub missing_weak_equalizer: Option<[MorId; 2]>,
    /// Weak terminal object, weak binary products and weak equalizers exist.
    pub weakly_lex: bool,
    /// Number of split right punctual spans examined.
    pub split_spans: usize,
    /// First split right punctual span `(f, g)` whose zigzag
    /// `f·d = f·h, g·h = g·c` has no weak limit.
    pub missing_zigzag: Option<[MorId; 2]>,
    /// Every split right punctual span has the zigzag weak limit.
    pub zigzag_complete: bool,
}

impl WeakLimitAudit {
    /// The category has the weak limits that the decomposition of weak
    /// strong unitality into weak unitality and weak subtractivity uses.
    pub fn passes(&self) -> bool {
        self.weakly_lex || self.zigzag_complete
    }
}

fn has_weak_product(cat: &FiniteCategory, x: ObjId, y: ObjId) -> bool {
    cat.objects().any(|p| {
        cat.objects()
            .all(|a| cat.hom(a, p).len() >= cat.hom(a, x).len() * cat.hom(a, y).len())
            && cat
                .hom(p, x)
                .iter()
                .any(|&p1| cat.hom(p, y).iter().any(|&p2| is_weak_product(cat, p1, p2)))
    })
}

fn has_weak_equalizer(cat: &FiniteCategory, u: MorId, v: MorId) -> bool {
    let x = cat.dom(u);
    let equalized = |a: ObjId| -> Vec<MorId> {
        cat.hom(a, x)
            .iter()
            .copied()
            .filter(|&h| cat.compose(u, h) == cat.compose(v, h))
            .collect()
    };
    let needed: Vec<Vec<MorId>> = cat.objects().map(equalized).collect();
    cat.objects().any(|e_obj| {
        needed[e_obj].iter().any(|&e| {
            cat.objects().all(|a| {
                needed[a]
                    .iter()
                    .all(|&h| cat.factor_through(e, h).is_some())
            })
        })
    })
}

/// Audits weak finite limits, and separately the zigzag weak limits over
/// split right punctual spans.
pub fn audit_weak_limits(cat: &FiniteCategory) -> Result<WeakLimitAudit, CheckError> {
    let zs = cat.zero_structure().ok_or(CheckError::NoZeroObject)?;
    let mut missing_weak_product = None;
    'products: for x in cat.objects() {
        for y in x..cat.object_count() {
            if !has_weak_product(cat, x, y) {
                missing_weak_product = Some([x, y]);
                break 'products;
            }
        }
    }
    let mut missing_weak_equalizer = None;
    'equalizers: for x in cat.objects() {
        for y in cat.objects() {
            let hom = cat.hom(x, y);
            for (i, &u) in hom.iter().enumerate() {
                for &v in &hom[i + 1..] {
                    if !has_weak_equalizer(cat, u, v) {
                        missing_weak_equalizer = Some([u, v]);
                        break 'equalizers;
                    }
                }
            }
        }
    }
    let mut split_spans = 0;
    let mut missing_zigzag = None;
    'spans: for f in 0..cat.morphism_count() {
        if is_split_epi(cat, f).is_none() {
            continue;
        }
        let z = cat.dom(f);
        for y in cat.objects() {
            for &g in cat.hom(z, y) {
                if right_section(cat, zs, f, g).is_none() {
                    continue;
                }
                split_spans += 1;
                if zigzag_weak_limit(cat, f, g).is_none() {
                    missing_zigzag = Some([f, g]);
                    break 'spans;
                }
            }
        }
    }
    Ok(WeakLimitAudit {
        weakly_lex: missing_weak_product.is_none() && missing_weak_equalizer.is_none(),
        missing_weak_product,
        missing_weak_equalizer,
        split_spans,
        zigzag_complete: missing_zigzag.is_none(),
        missing_zigzag,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularEpiCheck {
    pub morphism: MorId,
    pub strong_epi: bool,
    pub coequalizer: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignationAudit {
    pub zero: Option<bool>,
    /// `(left, right, universal)` per designated product.
    pub products: Vec<(ObjId, ObjId, bool)>,
    pub coproducts: Vec<(ObjId, ObjId, bool)>,
    pub regular_epis: Vec<RegularEpiCheck>,
    pub all_ok: bool,
}

/// Re-checks every designation: zero object, universal properties of
/// products and coproducts, and that designated regular epis are strong
/// epis and coequalizers.
pub fn audit_designations(cat: &FiniteCategory) -> DesignationAudit {
    let d = cat.designations();
    let zero = d.zero.map(|z| {
        cat.objects()
            .all(|x| cat.hom(z, x).len() == 1 && cat.hom(x, z).len() == 1)
    });
    let products: Vec<_> = d
        .products
        .iter()
        .map(|(&(x, y), &cone)| (x, y, product_violation(cat, cone).is_none()))
        .collect();
    let coproducts: Vec<_> = d
        .coproducts
        .iter()
        .map(|(&(x, y), &cone)| (x, y, coproduct_violation(cat, cone).is_none()))
        .collect();
    let regular_epis: Vec<_> = d
        .regular_epis
        .iter()
        .flatten()
        .map(|&e| RegularEpiCheck {
            morphism: e,
            strong_epi: is_strong_epi(cat, e),
            coequalizer: coequalized_pair(cat, e).is_some(),
        })
        .collect();
    let all_ok = zero != Some(false)
        && products.iter().all(|p| p.2)
        && coproducts.iter().all(|p| p.2)
        && regular_epis.iter().all(|r| r.strong_epi && r.coequalizer);
    DesignationAudit {
        zero,
        products,
        coproducts,
        regular_epis,
        all_ok,
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::validate_category;
    use super::*;

    #[test]
    fn one_object_category_is_weakly_lex() {
        let cat = validate_category(&one_object()).unwrap();
        let audit = audit_weak_limits(&cat).unwrap();
        assert!(audit.weakly_lex && audit.zigzag_complete);
    }

    #[test]
    fn nontrivial_category_lacks_weak_products() {
        let cat = validate_category(&retract()).unwrap();
        let audit = audit_weak_limits(&cat).unwrap();
        assert!(!audit.weakly_lex);
        assert!(audit.missing_weak_product.is_some());
    }
}
