use serde::{Deserialize, Serialize};

use super::{Cone, FiniteCategory, MorId, ObjId};
use std::collections::HashSet;

/// First test object from which factorizations through the product cone are
/// missing or not unique.
pub(crate) fn product_violation(cat: &FiniteCategory, cone: Cone) -> Option<ObjId> {
    let (x, y) = (cat.cod(cone.left), cat.cod(cone.right));
    cat.objects().find(|&a| {
        let (hx, hy) = (cat.hom(a, x).len(), cat.hom(a, y).len());
        let hp = cat.hom(a, cone.apex);
        if hp.len() != hx * hy {
            return true;
        }
        let mut hit = vec![false; hx * hy];
        hp.iter().any(|&w| {
            let i = cat.position(cat.compose(cone.left, w)) * hy
                + cat.position(cat.compose(cone.right, w));
            std::mem::replace(&mut hit[i], true)
        })
    })
}

pub(crate) fn coproduct_violation(cat: &FiniteCategory, cone: Cone) -> Option<ObjId> {
    let (x, y) = (cat.dom(cone.left), cat.dom(cone.right));
    cat.objects().find(|&a| {
        let (hx, hy) = (cat.hom(x, a).len(), cat.hom(y, a).len());
        let hs = cat.hom(cone.apex, a);
        if hs.len() != hx * hy {
            return true;
        }
        let mut hit = vec![false; hx * hy];
        hs.iter().any(|&w| {
            let i = cat.position(cat.compose(w, cone.left)) * hy
                + cat.position(cat.compose(w, cone.right));
            std::mem::replace(&mut hit[i], true)
        })
    })
}

pub fn is_strict_product(cat: &FiniteCategory, x: ObjId, y: ObjId, cone: Cone) -> bool {
    cat.dom(cone.left) == cone.apex
        && cat.dom(cone.right) == cone.apex
        && cat.cod(cone.left) == x
        && cat.cod(cone.right) == y
        && product_violation(cat, cone).is_none()
}

pub fn is_strict_coproduct(cat: &FiniteCategory, x: ObjId, y: ObjId, cone: Cone) -> bool {
    cat.cod(cone.left) == cone.apex
        && cat.cod(cone.right) == cone.apex
        && cat.dom(cone.left) == x
        && cat.dom(cone.right) == y
        && coproduct_violation(cat, cone).is_none()
}

/// The designated product of `x` and `y`, or else the first product cone
/// found by enumeration.
pub fn find_strict_product(cat: &FiniteCategory, x: ObjId, y: ObjId) -> Option<Cone> {
    if let Some(&cone) = cat.designations().products.get(&(x, y)) {
        return Some(cone);
    }
    for p in cat.objects() {
        let sized = cat
            .objects()
            .all(|a| cat.hom(a, p).len() == cat.hom(a, x).len() * cat.hom(a, y).len());
        if !sized {
            continue;
        }
        for &p1 in cat.hom(p, x) {
            for &p2 in cat.hom(p, y) {
                let cone = Cone {
                    apex: p,
                    left: p1,
                    right: p2,
                };
                if product_violation(cat, cone).is_none() {
                    return Some(cone);
                }
            }
        }
    }
    None
}

/// The least test pair `(a, x, y)` with `x: A → X`, `y: A → Y` that does not
/// factor as `(f·w, g·w)`; `None` when `(f, g)` is a weak product.
pub fn weak_product_failure(
    cat: &FiniteCategory,
    f: MorId,
    g: MorId,
) -> Option<(ObjId, MorId, MorId)> {
    let (z, x, y) = (cat.dom(f), cat.cod(f), cat.cod(g));
    for a in cat.objects() {
        let (hx, hy) = (cat.hom(a, x), cat.hom(a, y));
        if hx.is_empty() || hy.is_empty() {
            continue;
        }
        let mut covered = vec![false; hx.len() * hy.len()];
        for &w in cat.hom(a, z) {
            covered[cat.position(cat.compose(f, w)) * hy.len() + cat.position(cat.compose(g, w))] =
                true;
        }
        if let Some(i) = covered.iter().position(|&c| !c) {
            return Some((a, hx[i / hy.len()], hy[i % hy.len()]));
        }
    }
    None
}

pub fn is_weak_product(cat: &FiniteCategory, f: MorId, g: MorId) -> bool {
    weak_product_failure(cat, f, g).is_none()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub strict_product: Option<Cone>,
    pub weak_products: Vec<Cone>,
}

/// The product of `x` and `y` (if any) and every weak product cone.
pub fn limits(cat: &FiniteCategory, x: ObjId, y: ObjId) -> Limits {
    let mut weak_products = Vec::new();
    for p in cat.objects() {
        let big_enough = cat
            .objects()
            .all(|a| cat.hom(a, p).len() >= cat.hom(a, x).len() * cat.hom(a, y).len());
        if !big_enough {
            continue;
        }
        for &p1 in cat.hom(p, x) {
            for &p2 in cat.hom(p, y) {
                if is_weak_product(cat, p1, p2) {
                    weak_products.push(Cone {
                        apex: p,
                        left: p1,
                        right: p2,
                    });
                }
            }
        }
    }
    Limits {
        strict_product: find_strict_product(cat, x, y),
        weak_products,
    }
}

/// Cones over the cospan `f: X → Z ← Y :g` from `a`, as pairs `(u, v)`.
fn pullback_cones(cat: &FiniteCategory, f: MorId, g: MorId, a: ObjId) -> Vec<(MorId, MorId)> {
    let (x, y) = (cat.dom(f), cat.dom(g));
    let mut cones = Vec::new();
    for &u in cat.hom(a, x) {
        let fu = cat.compose(f, u);
        for &v in cat.hom(a, y) {
            if cat.compose(g, v) == fu {
                cones.push((u, v));
            }
        }
    }
    cones
}

fn pullback_candidates(cat: &FiniteCategory, f: MorId, g: MorId, exact: bool) -> Vec<Cone> {
    let counts: Vec<usize> = cat
        .objects()
        .map(|a| pullback_cones(cat, f, g, a).len())
        .collect();
    let mut found = Vec::new();
    for p in cat.objects() {
        let fits = cat.objects().all(|a| {
            let h = cat.hom(a, p).len();
            if exact {
                h == counts[a]
            } else {
                h >= counts[a]
            }
        });
        if !fits {
            continue;
        }
        for (u, v) in pullback_cones(cat, f, g, p) {
            let universal = cat.objects().all(|a| {
                let images: HashSet<(MorId, MorId)> = cat
                    .hom(a, p)
                    .iter()
                    .map(|&w| (cat.compose(u, w), cat.compose(v, w)))
                    .collect();
                images.len() == counts[a]
            });
            if universal {
                found.push(Cone {
                    apex: p,
                    left: u,
                    right: v,
                });
                if exact {
                    return found;
                }
            }
        }
    }
    found
}

/// All weak pullbacks of the cospan `f: X → Z ← Y :g`.
pub fn weak_pullbacks(cat: &FiniteCategory, f: MorId, g: MorId) -> Vec<Cone> {
    pullback_candidates(cat, f, g, false)
}

/// A pullback of `f` and `g`, if one exists.
pub fn strict_pullback(cat: &FiniteCategory, f: MorId, g: MorId) -> Option<Cone> {
    pullback_candidates(cat, f, g, true).into_iter().next()
}

/// A weak limit of the zigzag `Z --f--> X <--f-- Z --g--> Y <--g-- Z`, i.e. an
/// object `G` with `d, h, c: G → Z`, `f·d = f·h`, `g·h = g·c`, through which
/// every such triple factors. This is the weak pullback of `<f,g>` along
/// `f × g` with the products eliminated.
pub fn zigzag_weak_limit(cat: &FiniteCategory, f: MorId, g: MorId) -> Option<(ObjId, [MorId; 3])> {
    let z = cat.dom(f);
    let (x, y) = (cat.cod(f), cat.cod(g));
    let cone_count = |a: ObjId| -> usize {
        let mut by_f = vec![0usize; cat.hom(a, x).len()];
        let mut by_g = vec![0usize; cat.hom(a, y).len()];
        for &w in cat.hom(a, z) {
            by_f[cat.position(cat.compose(f, w))] += 1;
            by_g[cat.position(cat.compose(g, w))] += 1;
        }
        cat.hom(a, z)
            .iter()
            .map(|&h| by_f[cat.position(cat.compose(f, h))] * by_g[cat.position(cat.compose(g, h))])
            .sum()
    };
    let counts: Vec<usize> = cat.objects().map(cone_count).collect();
    for apex in cat.objects() {
        if cat.objects().any(|a| cat.hom(a, apex).len() < counts[a]) {
            continue;
        }
        let legs = cat.hom(apex, z);
        for &h in legs {
            let (fh, gh) = (cat.compose(f, h), cat.compose(g, h));
            for &d in legs.iter().filter(|&&d| cat.compose(f, d) == fh) {
                for &c in legs.iter().filter(|&&c| cat.compose(g, c) == gh) {
                    let universal = cat.objects().all(|a| {
                        let images: HashSet<[MorId; 3]> = cat
                            .hom(a, apex)
                            .iter()
                            .map(|&w| [cat.compose(d, w), cat.compose(h, w), cat.compose(c, w)])
                            .collect();
                        images.len() == counts[a]
                    });
                    if universal {
                        return Some((apex, [d, h, c]));
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::validate_category;
    use super::*;

    #[test]
    fn one_object_products() {
        let cat = validate_category(&one_object()).unwrap();
        let l = limits(&cat, 0, 0);
        let cone = l.strict_product.unwrap();
        assert_eq!(cone.apex, 0);
        assert!(l.weak_products.contains(&cone));
    }

    #[test]
    fn retract_has_no_product_of_x_with_itself() {
        let cat = validate_category(&retract()).unwrap();
        let (o, x, y) = (0, 1, 2);
        assert!(find_strict_product(&cat, x, x).is_none());
        assert!(find_strict_product(&cat, x, y).is_none());
        let cone = find_strict_product(&cat, x, o).unwrap();
        assert_eq!(cone.apex, x);
        assert!(limits(&cat, x, x).weak_products.is_empty());
    }

    #[test]
    fn zero_object_gives_weak_pullbacks_of_zero_maps() {
        let cat = validate_category(&retract()).unwrap();
        let zs = cat.zero_structure().unwrap();
        let (x, y) = (1, 2);
        // pullback of X → 0 ← Y is a product, which does not exist
        assert!(strict_pullback(&cat, zs.zero(x, 0), zs.zero(y, 0)).is_none());
        // pullback of 1_Y along itself is Y
        let one = cat.identity(y);
        let pb = strict_pullback(&cat, one, one).unwrap();
        assert_eq!(pb.apex, y);
        assert!(!weak_pullbacks(&cat, one, one).is_empty());
    }
}
