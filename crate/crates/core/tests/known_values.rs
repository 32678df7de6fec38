mod common;

use std::collections::BTreeSet;

use catprop_core::algebra::{
    enumerate_homs, free_algebra, pair_index, product_algebra, subalgebra_closure,
    validate_algebra, AlgebraError, AlgebraSpec, Budget, FiniteAlgebra, OpSpec,
};
use catprop_core::clone::{
    clone_closure, decide_identity, derive_from_p, find_jonsson_tarski, find_p, find_subtraction,
    Outcome, TermSearch,
};
use catprop_core::fincat::{
    check_property, check_property_via_coproducts, check_unital_via_punctual, classify_morphism,
    enumerate_reflexive, is_jointly_strongly_epic, is_strict_coproduct, is_weak_product,
    CheckOptions, MissingPolicy, Mode, Property, ReflexiveKind,
};
use catprop_core::term::parse_term;
use catprop_core::varcat::{
    build_free_subcategory, build_model_category, coalgebra_structure, cross_validate,
    CrossValidationOptions, FragmentOptions, ModelCategoryFragment, DEFAULT_MAX_MORPHISMS,
};
use common::*;

fn budget() -> Budget {
    Budget::default()
}

fn fragment(a: &FiniteAlgebra, max_power: usize) -> ModelCategoryFragment {
    build_model_category(
        std::slice::from_ref(a),
        FragmentOptions {
            max_power,
            ..FragmentOptions::default()
        },
    )
    .unwrap()
}

/// Object of `f` isomorphic to the given power of the generator, found by size.
fn object_of_size(f: &ModelCategoryFragment, size: usize) -> usize {
    let matches: Vec<usize> = f
        .category
        .objects()
        .filter(|&x| f.algebra(x).size() == size)
        .collect();
    assert_eq!(matches.len(), 1, "exactly one object of size {size}");
    matches[0]
}

#[test]
fn validation_errors() {
    let spec = |ops: Vec<OpSpec>, zero: Option<&str>| AlgebraSpec {
        name: "t".into(),
        size: 2,
        ops,
        zero: zero.map(String::from),
    };
    let op = |name: &str, arity, table: Vec<u32>| OpSpec {
        name: name.into(),
        arity,
        table,
    };
    let errors = validate_algebra(&spec(
        vec![op("e", 0, vec![0]), op("m", 2, vec![0, 1, 5, 0])],
        Some("e"),
    ))
    .unwrap_err();
    assert!(errors
        .iter()
        .any(|e| matches!(e, AlgebraError::EntryOutOfRange { value: 5, .. })));
    let errors = validate_algebra(&spec(vec![op("m", 2, vec![0, 1, 1, 0])], None)).unwrap_err();
    assert!(errors
        .iter()
        .any(|e| matches!(e, AlgebraError::NoZeroConstant)));
    let z2 = corpus_algebra("z2");
    assert_eq!(z2.size(), 2);
}

#[test]
fn products_and_subalgebras() {
    let z2 = corpus_algebra("z2");
    let zz = product_algebra(&z2, &z2).unwrap();
    assert_eq!(zz.size(), 4);
    let diag = pair_index(2, 1, 1);
    let closed = subalgebra_closure(&zz, &[diag]).unwrap();
    assert_eq!(closed, vec![pair_index(2, 0, 0), diag]);
    assert_eq!(
        closed.iter().copied().collect::<BTreeSet<_>>(),
        naive_closure(&zz, &[0, diag])
    );
    assert_eq!(subalgebra_closure(&zz, &[]).unwrap(), vec![0]);
    let join = corpus_algebra("join");
    assert_eq!(subalgebra_closure(&join, &[1]).unwrap(), vec![0, 1]);
}

#[test]
fn homomorphism_counts_match_brute_force() {
    let z2 = corpus_algebra("z2");
    let homs = enumerate_homs(&z2, &z2).unwrap();
    assert_eq!(homs.len(), 2);
    let maps: Vec<Vec<u32>> = homs.iter().map(|h| h.map.clone()).collect();
    assert_eq!(maps, naive_homs(&z2, &z2));
    let trivial = FiniteAlgebra::trivial(z2.signature());
    assert_eq!(enumerate_homs(&z2, &trivial).unwrap().len(), 1);
    for name in ["z3", "join", "subtraction", "pointed-set"] {
        let a = corpus_algebra(name);
        let aa = product_algebra(&a, &a).unwrap();
        for (x, y) in [(&a, &aa), (&aa, &a), (&a, &a)] {
            let maps: Vec<Vec<u32>> = enumerate_homs(x, y)
                .unwrap()
                .into_iter()
                .map(|h| h.map)
                .collect();
            assert_eq!(maps, naive_homs(x, y), "{name}");
        }
    }
}

#[test]
fn free_algebra_sizes_match_clone_sizes() {
    let cases = [
        ("z2", 1, 2),
        ("join", 2, 4),
        ("subtraction", 3, 38),
        ("pointed-set", 3, 4),
        ("z3", 2, 9),
    ];
    for (name, k, expected) in cases {
        let a = corpus_algebra(name);
        let oracle = naive_clone(&a, k).len() + usize::from(k == 0);
        assert_eq!(oracle, expected, "{name} oracle");
        assert_eq!(
            free_algebra(&a, k, &budget()).unwrap().size(),
            expected,
            "{name}"
        );
    }
    let z2 = corpus_algebra("z2");
    assert_eq!(free_algebra(&z2, 0, &budget()).unwrap().size(), 1);
    let s3 = corpus_algebra("s3");
    assert_eq!(
        free_algebra(&s3, 2, &budget()).unwrap().size(),
        naive_clone(&s3, 2).len()
    );
}

#[test]
fn clone_closures() {
    let join = corpus_algebra("join");
    let c = clone_closure(&join, 2, &budget()).unwrap();
    assert!(c.saturated);
    let tables: BTreeSet<Vec<u32>> = c.operations().map(|op| op.table.clone()).collect();
    assert_eq!(tables.len(), 4);
    let mut oracle = naive_clone(&join, 2);
    oracle.insert(vec![0; 4]);
    assert_eq!(tables, oracle);
    let pset = corpus_algebra("pointed-set");
    assert_eq!(
        clone_closure(&pset, 2, &budget())
            .unwrap()
            .operations()
            .count(),
        3
    );
}

#[test]
fn identities() {
    let z2 = corpus_algebra("z2");
    let t = |s: &str, a: &FiniteAlgebra| parse_term(s, a.signature()).unwrap();
    assert!(
        decide_identity(&z2, &t("mul(x1, x2)", &z2), &t("mul(x2, x1)", &z2))
            .unwrap()
            .holds()
    );
    let join = corpus_algebra("join");
    let verdict = decide_identity(&join, &t("join(x1, x2)", &join), &t("x1", &join)).unwrap();
    assert!(!verdict.holds());
    assert_eq!(format!("{verdict:?}"), "Fails { counterexample: [0, 1] }");
    let any = t("join(x1, join(x2, zero))", &join);
    assert!(decide_identity(&join, &any, &any).unwrap().holds());
}

fn outcome(r: TermSearch) -> Outcome {
    r.outcome()
}

#[test]
fn term_searches_agree_with_brute_force() {
    for name in ["z2", "z3", "join", "subtraction", "pointed-set"] {
        let a = corpus_algebra(name);
        for (kind, found) in [
            (
                Kind::Jt,
                outcome(find_jonsson_tarski(&a, &budget()).unwrap()),
            ),
            (Kind::Sub, outcome(find_subtraction(&a, &budget()).unwrap())),
            (Kind::P, outcome(find_p(&a, &budget()).unwrap())),
        ] {
            let expected = if has_term(&a, kind) {
                Outcome::Found
            } else {
                Outcome::Absent
            };
            assert_eq!(found, expected, "{name} {kind:?}");
        }
    }
    // arity 2 is within reach of the oracle for S3 as well
    let s3 = corpus_algebra("s3");
    assert_eq!(
        outcome(find_jonsson_tarski(&s3, &budget()).unwrap()),
        Outcome::Found
    );
    assert!(has_term(&s3, Kind::Jt) && has_term(&s3, Kind::Sub));
}

#[test]
fn named_witnesses() {
    let show = |a: &FiniteAlgebra, r: TermSearch| match r {
        TermSearch::Found(op) => op.term.display(a.signature()).to_string(),
        other => panic!("{other:?}"),
    };
    let z2 = corpus_algebra("z2");
    assert_eq!(
        show(&z2, find_jonsson_tarski(&z2, &budget()).unwrap()),
        "mul(x1, x2)"
    );
    let sub = corpus_algebra("subtraction");
    assert_eq!(
        show(&sub, find_subtraction(&sub, &budget()).unwrap()),
        "sub(x1, x2)"
    );
    let z3 = corpus_algebra("z3");
    let s = find_subtraction(&z3, &budget()).unwrap();
    let TermSearch::Found(op) = s else { panic!() };
    // s(x,y) = x·y⁻¹ as a table
    let expected: Vec<u32> = (0..9).map(|t| ((t / 3 + 3 - t % 3) % 3) as u32).collect();
    assert_eq!(op.table, expected);

    let TermSearch::Found(p) = find_p(&z2, &budget()).unwrap() else {
        panic!()
    };
    let xor3: Vec<u32> = (0..8).map(|t: u32| t.count_ones() % 2).collect();
    assert_eq!(p.table, xor3);
    let (plus, minus) = derive_from_p(&z2, &p).unwrap();
    assert_eq!(plus.table, vec![0, 1, 1, 0]);
    assert_eq!(minus.table, vec![0, 1, 1, 0]);
}

#[test]
fn coalgebra_structures_match_term_searches() {
    for name in ["z2", "z3", "join", "subtraction", "pointed-set"] {
        let a = corpus_algebra(name);
        for (property, kind) in [
            (Property::Unital, Kind::Jt),
            (Property::Subtractive, Kind::Sub),
            (Property::StronglyUnital, Kind::P),
        ] {
            let found = coalgebra_structure(&a, property, &budget())
                .unwrap()
                .outcome();
            let expected = if has_term(&a, kind) {
                Outcome::Found
            } else {
                Outcome::Absent
            };
            assert_eq!(found, expected, "{name} {property}");
        }
    }
}

#[test]
fn joint_strong_epis_in_fragments() {
    let pset = corpus_algebra("pointed-set");
    let f = fragment(&pset, 2);
    let cat = &f.category;
    let (x, xx) = (object_of_size(&f, 2), object_of_size(&f, 4));
    let axes = |left: bool| {
        let map: Vec<u32> = (0..2)
            .map(|a| {
                if left {
                    pair_index(2, a, 0)
                } else {
                    pair_index(2, 0, a)
                }
            })
            .collect();
        cat.morphism_with_map(x, xx, &map).unwrap()
    };
    let mono = is_jointly_strongly_epic(cat, axes(true), axes(false)).unwrap_err();
    let image: BTreeSet<u32> = f.map(mono).iter().copied().collect();
    assert!(!image.contains(&pair_index(2, 1, 1)));

    let z2 = corpus_algebra("z2");
    let f = fragment(&z2, 2);
    let cat = &f.category;
    let (x, xx) = (object_of_size(&f, 2), object_of_size(&f, 4));
    let l = cat
        .morphism_with_map(x, xx, &[0, pair_index(2, 1, 0)])
        .unwrap();
    let r = cat
        .morphism_with_map(x, xx, &[0, pair_index(2, 0, 1)])
        .unwrap();
    assert!(is_jointly_strongly_epic(cat, l, r).is_ok());
    assert!(is_jointly_strongly_epic(cat, cat.identity(xx), l).is_ok());
}

#[test]
fn morphism_classes_match_set_maps() {
    for name in ["z2", "join", "pointed-set"] {
        let f = fragment(&corpus_algebra(name), 2);
        let cat = &f.category;
        for m in 0..cat.morphism_count() {
            let map = f.map(m);
            let target = f.algebra(cat.cod(m)).size();
            let injective = map.iter().collect::<BTreeSet<_>>().len() == map.len();
            let surjective = map.iter().collect::<BTreeSet<_>>().len() == target;
            let flags = classify_morphism(cat, m);
            assert_eq!(flags.mono, injective, "{name} {}", cat.morphism_name(m));
            if surjective {
                assert!(
                    flags.strong_epi && flags.regular_epi,
                    "{name} {}",
                    cat.morphism_name(m)
                );
            }
            if flags.strong_epi {
                assert!(surjective, "{name} {}", cat.morphism_name(m));
            }
        }
    }
}

#[test]
fn reflexive_relations_on_z2() {
    let z2 = corpus_algebra("z2");
    let f = fragment(&z2, 2);
    let x = object_of_size(&f, 2);
    let relations = enumerate_reflexive(&f.category, x, ReflexiveKind::Relation).unwrap();
    let images: BTreeSet<BTreeSet<(u32, u32)>> = relations
        .iter()
        .map(|r| {
            let (d, c) = (f.map(r.d), f.map(r.c));
            d.iter().copied().zip(c.iter().copied()).collect()
        })
        .collect();
    // oracle: subuniverses of Z2×Z2 containing the diagonal
    let zz = product_algebra(&z2, &z2).unwrap();
    let mut oracle = BTreeSet::new();
    for bits in 0u32..16 {
        let subset: Vec<u32> = (0..4).filter(|i| bits >> i & 1 == 1).collect();
        let contains_diagonal =
            subset.contains(&pair_index(2, 0, 0)) && subset.contains(&pair_index(2, 1, 1));
        if contains_diagonal && naive_closure(&zz, &subset) == subset.iter().copied().collect() {
            oracle.insert(
                subset
                    .iter()
                    .map(|&p| (p / 2, p % 2))
                    .collect::<BTreeSet<_>>(),
            );
        }
    }
    assert_eq!(images, oracle);
    assert_eq!(oracle.len(), 2);
}

#[test]
fn category_checks_on_fragments() {
    let skip = CheckOptions {
        missing: MissingPolicy::Skip,
    };
    let pset = fragment(&corpus_algebra("pointed-set"), 2);
    let v = check_property(&pset.category, Property::Unital, Mode::Strict, skip).unwrap();
    assert_eq!(v.outcome, Outcome::Fails);
    assert_eq!(
        check_unital_via_punctual(&pset.category, skip)
            .unwrap()
            .outcome,
        Outcome::Fails
    );
    let z2 = fragment(&corpus_algebra("z2"), 2);
    for p in Property::ALL {
        assert!(
            check_property(&z2.category, p, Mode::Strict, skip)
                .unwrap()
                .holds(),
            "{p}"
        );
    }
    assert!(check_unital_via_punctual(&z2.category, skip)
        .unwrap()
        .holds());
}

#[test]
fn free_subcategories() {
    let options = (3, DEFAULT_MAX_MORPHISMS);
    let expect = [
        ("z2", [true, true, true]),
        ("join", [true, false, false]),
        ("subtraction", [false, true, false]),
        ("pointed-set", [false, false, false]),
    ];
    for (name, truths) in expect {
        let f =
            build_free_subcategory(&corpus_algebra(name), options.0, &budget(), options.1).unwrap();
        for (p, t) in Property::ALL.into_iter().zip(truths) {
            let v = check_property_via_coproducts(&f.category, p).unwrap();
            assert_eq!(v.holds(), t, "{name} {p}");
        }
    }

    let join = corpus_algebra("join");
    let f = build_free_subcategory(&join, 2, &budget(), DEFAULT_MAX_MORPHISMS).unwrap();
    let sizes: Vec<usize> = f.algebras.iter().map(FiniteAlgebra::size).collect();
    assert_eq!(sizes, [1, 2, 4]);
    let cat = &f.category;
    let (f1, f2) = (1, 2);
    let cone = cat.designations().coproducts[&(f1, f1)];
    assert!(is_strict_coproduct(cat, f1, f1, cone));
    // the fold span F(1) <- F(2) -> F(1) out of the coproduct is a weak product
    let zero = cat.zero_structure().unwrap();
    let fold = |a, b| {
        cat.hom(f2, f1)
            .iter()
            .copied()
            .find(|&w| cat.compose(w, cone.left) == a && cat.compose(w, cone.right) == b)
            .unwrap()
    };
    let id = cat.identity(f1);
    assert!(is_weak_product(
        cat,
        fold(id, zero.zero(f1, f1)),
        fold(zero.zero(f1, f1), id)
    ));
}

#[test]
fn cross_validation_examples() {
    let report = cross_validate(&corpus_algebra("z2"), &CrossValidationOptions::default());
    assert!(report.consistent);
    for row in &report.rows {
        assert_eq!(
            [row.term, row.coalgebra, row.free_subcategory, row.fragment],
            [
                Outcome::Found,
                Outcome::Found,
                Outcome::Holds,
                Outcome::Holds
            ]
        );
    }
    let report = cross_validate(&corpus_algebra("join"), &CrossValidationOptions::default());
    let verdicts: Vec<Outcome> = report.rows.iter().map(|r| r.verdict).collect();
    assert_eq!(verdicts, [Outcome::Holds, Outcome::Fails, Outcome::Fails]);
    assert!(report.consistent);
}

#[test]
fn shallow_free_subcategory_cannot_confirm_strong_unitality() {
    let a = corpus_algebra("subtraction");
    let f = build_free_subcategory(&a, 2, &budget(), DEFAULT_MAX_MORPHISMS).unwrap();
    let v = check_property_via_coproducts(&f.category, Property::StronglyUnital).unwrap();
    // F(1)+F(1)+F(1) is missing, so the ternary span is never looked at
    assert!(v.holds());
    assert!(!v.skipped.is_empty());

    let options = CrossValidationOptions {
        free_rank: 2,
        ..CrossValidationOptions::default()
    };
    let report = cross_validate(&a, &options);
    let row = report.row(Property::StronglyUnital);
    assert_eq!(row.free_subcategory, Outcome::Inconclusive);
    assert_eq!(row.verdict, Outcome::Fails);
    assert!(report.consistent);
    assert!(report.notes.iter().any(|n| n.contains("rank 2")));
}
