use std::collections::{BTreeSet, HashMap};

use super::ModelCategoryFragment;
use crate::algebra::{subalgebra_closure, Elem, FiniteAlgebra};
use crate::fincat::{Cone, Mode, MorId, ObjId, Property, Verdict, Witness};
use crate::tuples::for_each_tuple;

/// Elements of the product apex that generate the subalgebra in question:
/// both axes for unitality, the diagonal and the right axis otherwise.
fn seed(property: Property, left: &[Elem], right: &[Elem]) -> Vec<Elem> {
    (0..left.len())
        .filter(|&e| match property {
            Property::Unital => left[e] == 0 || right[e] == 0,
            _ => left[e] == right[e] || left[e] == 0,
        })
        .map(|e| e as Elem)
        .collect()
}

/// The pairs checked for `property`, in id order.
fn scope(fragment: &ModelCategoryFragment, property: Property) -> Vec<(ObjId, ObjId)> {
    let cat = &fragment.category;
    match property {
        Property::Unital => cat
            .objects()
            .flat_map(|x| cat.objects().map(move |y| (x, y)))
            .collect(),
        _ => cat.objects().map(|x| (x, x)).collect(),
    }
}

/// The three defining conditions evaluated on carriers, for every pair of
/// objects whose product is realized in the fragment:
///
/// * unital: the axes `X×0 ∪ 0×Y` generate `X×Y`;
/// * strongly unital: the diagonal and `0×X` generate `X×X`;
/// * subtractive: the subalgebra generated by the diagonal and `0×X`, which
///   is the least reflexive relation containing `0×X`, contains `X×0`.
pub fn check_concrete(fragment: &ModelCategoryFragment, property: Property) -> Verdict {
    let method = match property {
        Property::Unital => "axes generate the product",
        Property::Subtractive => "least right punctual reflexive relation contains X×0",
        Property::StronglyUnital => "diagonal and right axis generate the square",
    };
    let mut verdict = Verdict::new(property, Mode::Strict, method);
    let products = &fragment.category.designations().products;
    for (x, y) in scope(fragment, property) {
        let Some(&cone) = products.get(&(x, y)) else {
            verdict.skipped.push([x, y]);
            continue;
        };
        verdict.examined += 1;
        let apex = fragment.algebra(cone.apex);
        let (left, right) = (fragment.map(cone.left), fragment.map(cone.right));
        let generators = seed(property, left, right);
        let generated = subalgebra_closure(apex, &generators).expect("seed lies in the carrier");
        let member = |e: usize| generated.binary_search(&(e as Elem)).is_ok();
        match property {
            Property::Subtractive => {
                if let Some(e) = (0..apex.size()).find(|&e| right[e] == 0 && !member(e)) {
                    let mut pairs: Vec<[Elem; 2]> = generated
                        .iter()
                        .map(|&g| [left[g as usize], right[g as usize]])
                        .collect();
                    pairs.sort_unstable();
                    return verdict.fail(Witness::Relation {
                        object: x,
                        pairs,
                        missing: [left[e], 0],
                    });
                }
            }
            _ => {
                if let Some(missing) = (0..apex.size()).find(|&e| !member(e)) {
                    return verdict.fail(Witness::Subalgebra {
                        object: cone.apex,
                        generators,
                        generated,
                        missing: missing as Elem,
                    });
                }
            }
        }
    }
    verdict
}

/// Designated product cones with the given apex whose seed for `property`
/// equals `generators`.
fn cones_with_seed(
    fragment: &ModelCategoryFragment,
    property: Property,
    apex: ObjId,
    generators: &[Elem],
) -> Option<(ObjId, ObjId, Cone)> {
    fragment
        .category
        .designations()
        .products
        .iter()
        .filter(|(&(x, y), cone)| cone.apex == apex && (property == Property::Unital || x == y))
        .find(|(_, cone)| {
            seed(property, fragment.map(cone.left), fragment.map(cone.right)) == generators
        })
        .map(|(&(x, y), &cone)| (x, y, cone))
}

/// The least morphism into `target` that is injective with image `image`.
fn inclusion_onto(
    fragment: &ModelCategoryFragment,
    target: ObjId,
    image: &BTreeSet<Elem>,
) -> Option<MorId> {
    let cat = &fragment.category;
    let mut found: Vec<MorId> = cat
        .objects()
        .filter(|&c| fragment.algebra(c).size() == image.len())
        .flat_map(|c| cat.hom(c, target).iter().copied())
        .filter(|&m| {
            let map = fragment.map(m);
            map.iter().copied().collect::<BTreeSet<_>>() == *image
        })
        .collect();
    found.sort_unstable();
    found.first().copied()
}

/// `x ↦ (a(x), b(x))` as a morphism into the apex of `cone`.
fn pairing(
    fragment: &ModelCategoryFragment,
    cone: Cone,
    source: ObjId,
    a: &[Elem],
    b: &[Elem],
) -> Option<MorId> {
    let (left, right) = (fragment.map(cone.left), fragment.map(cone.right));
    let index: HashMap<(Elem, Elem), Elem> = (0..left.len())
        .map(|e| ((left[e], right[e]), e as Elem))
        .collect();
    let map: Vec<Elem> = a.iter().zip(b).map(|(&u, &v)| index[&(u, v)]).collect();
    fragment.category.morphism_with_map(source, cone.apex, &map)
}

/// Translates a concrete witness into the abstract witness that the fincat
/// checker would accept for the same failure. Requires the generated
/// subalgebra (or relation) to be an object of the fragment.
pub fn concrete_to_abstract(
    fragment: &ModelCategoryFragment,
    property: Property,
    witness: &Witness,
) -> Option<Witness> {
    let cat = &fragment.category;
    let zs = cat.zero_structure()?;
    match witness {
        Witness::Subalgebra {
            object,
            generators,
            generated,
            ..
        } => {
            let (x, y, cone) = cones_with_seed(fragment, property, *object, generators)?;
            let ident =
                |o: ObjId| -> Vec<Elem> { (0..fragment.algebra(o).size() as Elem).collect() };
            let zeros = |o: ObjId| vec![0 as Elem; fragment.algebra(o).size()];
            let left = match property {
                Property::Unital => pairing(fragment, cone, x, &ident(x), &zeros(x))?,
                _ => pairing(fragment, cone, x, &ident(x), &ident(x))?,
            };
            let right = pairing(fragment, cone, y, &zeros(y), &ident(y))?;
            let mono = inclusion_onto(fragment, *object, &generated.iter().copied().collect())?;
            Some(Witness::ProperMono {
                product: cone,
                left,
                right,
                mono,
            })
        }
        Witness::Relation { object, pairs, .. } => {
            let x = *object;
            let cone = *cat.designations().products.get(&(x, x))?;
            let (l, r) = (fragment.map(cone.left), fragment.map(cone.right));
            let wanted: BTreeSet<[Elem; 2]> = pairs.iter().copied().collect();
            let image: BTreeSet<Elem> = (0..l.len())
                .filter(|&e| wanted.contains(&[l[e], r[e]]))
                .map(|e| e as Elem)
                .collect();
            let m = inclusion_onto(fragment, cone.apex, &image)?;
            let g = cat.dom(m);
            let (d, c) = (cat.compose(cone.left, m), cat.compose(cone.right, m));
            let one = cat.identity(x);
            let e = cat
                .hom(x, g)
                .iter()
                .copied()
                .find(|&e| cat.compose(d, e) == one && cat.compose(c, e) == one)?;
            let t = cat
                .hom(x, g)
                .iter()
                .copied()
                .find(|&t| cat.compose(d, t) == zs.zero(x, x) && cat.compose(c, t) == one)?;
            Some(Witness::NotLeftPunctual {
                d,
                c,
                e,
                t,
                relation: true,
            })
        }
        _ => None,
    }
}

fn ensure(condition: bool, message: &str) -> Result<(), String> {
    if condition {
        Ok(())
    } else {
        Err(message.to_string())
    }
}

/// Is `set` (sorted) closed under every operation of `a`?
fn closed(a: &FiniteAlgebra, set: &[Elem]) -> bool {
    a.signature().ops().iter().enumerate().all(|(op, symbol)| {
        let mut ok = true;
        let mut args = vec![0; symbol.arity];
        for_each_tuple(set.len(), symbol.arity, |tuple| {
            if ok {
                for (slot, &i) in args.iter_mut().zip(tuple) {
                    *slot = set[i as usize];
                }
                ok = set.binary_search(&a.apply(op, &args)).is_ok();
            }
        });
        ok
    })
}

/// Is the relation closed under the componentwise operations of `a`?
fn closed_relation(a: &FiniteAlgebra, pairs: &BTreeSet<[Elem; 2]>) -> bool {
    let list: Vec<[Elem; 2]> = pairs.iter().copied().collect();
    a.signature().ops().iter().enumerate().all(|(op, symbol)| {
        let mut ok = true;
        let (mut xs, mut ys) = (vec![0; symbol.arity], vec![0; symbol.arity]);
        for_each_tuple(list.len(), symbol.arity, |tuple| {
            if ok {
                for (k, &i) in tuple.iter().enumerate() {
                    xs[k] = list[i as usize][0];
                    ys[k] = list[i as usize][1];
                }
                ok = pairs.contains(&[a.apply(op, &xs), a.apply(op, &ys)]);
            }
        });
        ok
    })
}

/// Re-verifies a concrete failure witness directly on the carriers: the
/// claimed set contains the seed and is closed under the operations but
/// misses the stated element, so the generated subalgebra is proper.
pub fn replay_concrete(
    fragment: &ModelCategoryFragment,
    property: Property,
    witness: &Witness,
) -> Result<(), String> {
    match witness {
        Witness::Subalgebra {
            object,
            generators,
            generated,
            missing,
        } => {
            ensure(
                property != Property::Subtractive,
                "subalgebra witnesses refute unital properties",
            )?;
            ensure(*object < fragment.category.object_count(), "unknown object")?;
            cones_with_seed(fragment, property, *object, generators)
                .ok_or("the generators are not the seed of a designated product")?;
            let apex = fragment.algebra(*object);
            ensure(
                generated.windows(2).all(|w| w[0] < w[1]),
                "generated set is not sorted",
            )?;
            ensure(
                generated.iter().all(|&g| (g as usize) < apex.size()),
                "element outside the carrier",
            )?;
            ensure(
                generators
                    .iter()
                    .all(|g| generated.binary_search(g).is_ok()),
                "generated set misses a generator",
            )?;
            ensure(
                generated.binary_search(&0).is_ok(),
                "generated set misses the point",
            )?;
            ensure(closed(apex, generated), "generated set is not a subalgebra")?;
            ensure(
                (*missing as usize) < apex.size(),
                "missing element outside the carrier",
            )?;
            ensure(
                generated.binary_search(missing).is_err(),
                "the missing element is generated",
            )
        }
        Witness::Relation {
            object,
            pairs,
            missing,
        } => {
            ensure(
                property == Property::Subtractive,
                "relation witnesses refute subtractivity",
            )?;
            ensure(*object < fragment.category.object_count(), "unknown object")?;
            ensure(
                fragment
                    .category
                    .designations()
                    .products
                    .contains_key(&(*object, *object)),
                "the square of the object is not in the fragment",
            )?;
            let a = fragment.algebra(*object);
            let n = a.size() as Elem;
            let set: BTreeSet<[Elem; 2]> = pairs.iter().copied().collect();
            ensure(
                set.iter().all(|p| p[0] < n && p[1] < n),
                "pair outside the carrier",
            )?;
            ensure(
                (0..n).all(|x| set.contains(&[x, x])),
                "relation is not reflexive",
            )?;
            ensure(
                (0..n).all(|x| set.contains(&[0, x])),
                "relation does not contain 0×X",
            )?;
            ensure(
                closed_relation(a, &set),
                "relation is not a subalgebra of X×X",
            )?;
            ensure(
                missing[1] == 0 && missing[0] < n,
                "missing pair is not in X×0",
            )?;
            ensure(
                !set.contains(missing),
                "the missing pair is in the relation",
            )
        }
        _ => Err("not a concrete witness".into()),
    }
}
