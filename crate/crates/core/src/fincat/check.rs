//! The unital, subtractive and strongly unital checkers, strict and weak,
//! together with the punctual-span and coproduct characterizations.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::classify::{cancels, is_iso, is_jointly_strongly_epic, strong_epi_failure};
use super::limits::{
    find_strict_product, is_strict_coproduct, is_strict_product, weak_product_failure,
};
use super::spans::{jointly_monic, left_section, reflexivity, right_section};
use super::{Cone, FiniteCategory, MorId, ObjId, ZeroStructure};
use crate::algebra::Elem;
use crate::clone::Outcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Unital,
    Subtractive,
    StronglyUnital,
}

impl Property {
    pub const ALL: [Property; 3] = [
        Property::Unital,
        Property::Subtractive,
        Property::StronglyUnital,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Unital => "unital",
            Property::Subtractive => "subtractive",
            Property::StronglyUnital => "strongly-unital",
        }
    }
}

impl std::fmt::Display for Property {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unital" => Ok(Property::Unital),
            "subtractive" => Ok(Property::Subtractive),
            "strongly-unital" | "strongly_unital" => Ok(Property::StronglyUnital),
            other => Err(format!("unknown property `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Strict,
    Weak,
}

/// What strict checks do about a pair of objects without a product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MissingPolicy {
    #[default]
    Error,
    /// Leave the pair out and list it in the verdict.
    Skip,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CheckOptions {
    pub missing: MissingPolicy,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum CheckError {
    #[error("the category has no zero object")]
    NoZeroObject,
    #[error("missing products: no product of `{left}` and `{right}`")]
    MissingProducts { left: String, right: String },
    #[error("the category has no designated coproducts")]
    MissingCoproducts,
}

/// Evidence attached to a verdict. Morphism and object fields are ids of the
/// checked category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// Both legs into the product factor through a mono that is not
    /// invertible.
    ProperMono {
        product: Cone,
        left: MorId,
        right: MorId,
        mono: MorId,
    },
    /// A span that had to be a weak product, and a test pair out of
    /// `test_object` that does not factor through it.
    NotWeakProduct {
        left: MorId,
        right: MorId,
        sections: Option<[MorId; 2]>,
        coproduct: Option<Cone>,
        test_object: ObjId,
        test_left: MorId,
        test_right: MorId,
    },
    /// A right punctual reflexive graph (or relation) with no left section.
    NotLeftPunctual {
        d: MorId,
        c: MorId,
        e: MorId,
        t: MorId,
        relation: bool,
    },
    /// A punctual span whose comparison map to the product admits a square
    /// against a mono with no diagonal.
    NotStrongEpi {
        left: MorId,
        right: MorId,
        sections: [MorId; 2],
        product: Cone,
        factorization: MorId,
        mono: MorId,
        top: MorId,
        bottom: MorId,
    },
    /// Concrete unital checks: the subalgebra of `object` generated by the
    /// given elements misses `missing`.
    Subalgebra {
        object: ObjId,
        generators: Vec<Elem>,
        generated: Vec<Elem>,
        missing: Elem,
    },
    /// Concrete subtractive check: the least reflexive relation on `object`
    /// containing `{0} × X`, given by its pairs, misses `(missing, 0)`.
    Relation {
        object: ObjId,
        pairs: Vec<[Elem; 2]>,
        missing: [Elem; 2],
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub property: Property,
    pub mode: Mode,
    pub method: String,
    pub outcome: Outcome,
    pub witness: Option<Witness>,
    /// Object pairs left out for lack of a product or coproduct.
    pub skipped: Vec<[ObjId; 2]>,
    /// Number of instances of the defining condition that were examined.
    pub examined: usize,
}

impl Verdict {
    pub(crate) fn new(property: Property, mode: Mode, method: &str) -> Self {
        Self {
            property,
            mode,
            method: method.to_string(),
            outcome: Outcome::Holds,
            witness: None,
            skipped: Vec::new(),
            examined: 0,
        }
    }

    pub(crate) fn fail(mut self, witness: Witness) -> Self {
        self.outcome = Outcome::Fails;
        self.witness = Some(witness);
        self
    }

    pub fn holds(&self) -> bool {
        self.outcome == Outcome::Holds
    }
}

fn zero(cat: &FiniteCategory) -> Result<&ZeroStructure, CheckError> {
    cat.zero_structure().ok_or(CheckError::NoZeroObject)
}

/// The unique `w: Z → P` with `cone.left · w = a` and `cone.right · w = b`.
fn pair_into(cat: &FiniteCategory, cone: Cone, a: MorId, b: MorId) -> Option<MorId> {
    cat.hom(cat.dom(a), cone.apex)
        .iter()
        .copied()
        .find(|&w| cat.compose(cone.left, w) == a && cat.compose(cone.right, w) == b)
}

/// The unique `w: S → T` with `w · cone.left = a` and `w · cone.right = b`.
fn copair(cat: &FiniteCategory, cone: Cone, a: MorId, b: MorId) -> Option<MorId> {
    cat.hom(cone.apex, cat.cod(a))
        .iter()
        .copied()
        .find(|&w| cat.compose(w, cone.left) == a && cat.compose(w, cone.right) == b)
}

/// Products for the listed pairs, honoring the missing-product policy.
fn products_for(
    cat: &FiniteCategory,
    pairs: impl Iterator<Item = (ObjId, ObjId)>,
    options: CheckOptions,
    verdict: &mut Verdict,
) -> Result<Vec<(ObjId, ObjId, Cone)>, CheckError> {
    let mut found = Vec::new();
    for (x, y) in pairs {
        match find_strict_product(cat, x, y) {
            Some(cone) => found.push((x, y, cone)),
            None if options.missing == MissingPolicy::Skip => verdict.skipped.push([x, y]),
            None => {
                return Err(CheckError::MissingProducts {
                    left: cat.object_name(x).to_string(),
                    right: cat.object_name(y).to_string(),
                })
            }
        }
    }
    Ok(found)
}

fn all_pairs(cat: &FiniteCategory) -> impl Iterator<Item = (ObjId, ObjId)> + '_ {
    cat.objects()
        .flat_map(move |x| cat.objects().map(move |y| (x, y)))
}

/// Evaluates one of the six defining conditions exhaustively.
pub fn check_property(
    cat: &FiniteCategory,
    property: Property,
    mode: Mode,
    options: CheckOptions,
) -> Result<Verdict, CheckError> {
    let zs = zero(cat)?;
    match (property, mode) {
        (Property::Unital, Mode::Strict) => strict_jointly_epic(cat, zs, property, options, false),
        (Property::StronglyUnital, Mode::Strict) => {
            strict_jointly_epic(cat, zs, property, options, true)
        }
        (Property::Subtractive, mode) => Ok(subtractive(cat, zs, mode)),
        (Property::Unital, Mode::Weak) => Ok(weak_spans(cat, zs, property)),
        (Property::StronglyUnital, Mode::Weak) => Ok(weak_spans(cat, zs, property)),
    }
}

fn strict_jointly_epic(
    cat: &FiniteCategory,
    zs: &ZeroStructure,
    property: Property,
    options: CheckOptions,
    diagonal: bool,
) -> Result<Verdict, CheckError> {
    let method = if diagonal {
        "diagonal and right axis jointly strongly epic"
    } else {
        "axes jointly strongly epic"
    };
    let mut verdict = Verdict::new(property, Mode::Strict, method);
    let pairs: Vec<(ObjId, ObjId)> = if diagonal {
        cat.objects().map(|x| (x, x)).collect()
    } else {
        all_pairs(cat).collect()
    };
    let products = products_for(cat, pairs.into_iter(), options, &mut verdict)?;
    for (x, y, cone) in products {
        let left = if diagonal {
            pair_into(cat, cone, cat.identity(x), cat.identity(x))
        } else {
            pair_into(cat, cone, cat.identity(x), zs.zero(x, y))
        }
        .expect("product pairing exists");
        let right =
            pair_into(cat, cone, zs.zero(y, x), cat.identity(y)).expect("product pairing exists");
        verdict.examined += 1;
        if let Err(mono) = is_jointly_strongly_epic(cat, left, right) {
            return Ok(verdict.fail(Witness::ProperMono {
                product: cone,
                left,
                right,
                mono,
            }));
        }
    }
    Ok(verdict)
}

/// Every right punctual reflexive graph (strict: relation) is left punctual.
fn subtractive(cat: &FiniteCategory, zs: &ZeroStructure, mode: Mode) -> Verdict {
    let relation = mode == Mode::Strict;
    let method = if relation {
        "right punctual reflexive relations are left punctual"
    } else {
        "right punctual reflexive graphs are left punctual"
    };
    let mut verdict = Verdict::new(Property::Subtractive, mode, method);
    for d in 0..cat.morphism_count() {
        let (g, x) = (cat.dom(d), cat.cod(d));
        for &c in cat.hom(g, x) {
            let Some(e) = reflexivity(cat, d, c) else {
                continue;
            };
            let Some(t) = right_section(cat, zs, d, c) else {
                continue;
            };
            if relation && !jointly_monic(cat, d, c) {
                continue;
            }
            verdict.examined += 1;
            if left_section(cat, zs, d, c).is_none() {
                return verdict.fail(Witness::NotLeftPunctual {
                    d,
                    c,
                    e,
                    t,
                    relation,
                });
            }
        }
    }
    verdict
}

/// Weak unital: punctual spans are weak products. Weak strongly unital:
/// split right punctual spans are weak products.
fn weak_spans(cat: &FiniteCategory, zs: &ZeroStructure, property: Property) -> Verdict {
    let split = property == Property::StronglyUnital;
    let method = if split {
        "split right punctual spans are weak products"
    } else {
        "punctual spans are weak products"
    };
    let mut verdict = Verdict::new(property, Mode::Weak, method);
    for f in 0..cat.morphism_count() {
        let (z, x) = (cat.dom(f), cat.cod(f));
        let splitting = if split {
            match super::is_split_epi(cat, f) {
                Some(s) => Some(s),
                None => continue,
            }
        } else {
            None
        };
        for g in 0..cat.morphism_count() {
            if cat.dom(g) != z {
                continue;
            }
            let Some(t) = right_section(cat, zs, f, g) else {
                continue;
            };
            let s = match splitting {
                Some(s) => s,
                None => match left_section(cat, zs, f, g) {
                    Some(s) => s,
                    None => continue,
                },
            };
            verdict.examined += 1;
            if let Some((a, tx, ty)) = weak_product_failure(cat, f, g) {
                debug_assert_eq!(cat.cod(tx), x);
                return verdict.fail(Witness::NotWeakProduct {
                    left: f,
                    right: g,
                    sections: Some([s, t]),
                    coproduct: None,
                    test_object: a,
                    test_left: tx,
                    test_right: ty,
                });
            }
        }
    }
    verdict
}

/// Strict unitality through punctual spans: the comparison map of every
/// punctual span into the product of its feet is a strong epi.
pub fn check_unital_via_punctual(
    cat: &FiniteCategory,
    options: CheckOptions,
) -> Result<Verdict, CheckError> {
    let zs = zero(cat)?;
    let mut verdict = Verdict::new(
        Property::Unital,
        Mode::Strict,
        "punctual spans induce strong epis to the product",
    );
    let products = products_for(cat, all_pairs(cat), options, &mut verdict)?;
    let n = cat.object_count();
    let mut product_of = vec![None; n * n];
    for (x, y, cone) in products {
        product_of[x * n + y] = Some(cone);
    }
    for f in 0..cat.morphism_count() {
        let (z, x) = (cat.dom(f), cat.cod(f));
        for g in 0..cat.morphism_count() {
            if cat.dom(g) != z {
                continue;
            }
            let y = cat.cod(g);
            let Some(cone) = product_of[x * n + y] else {
                continue;
            };
            let (Some(s), Some(t)) = (left_section(cat, zs, f, g), right_section(cat, zs, f, g))
            else {
                continue;
            };
            verdict.examined += 1;
            let k = pair_into(cat, cone, f, g).expect("product pairing exists");
            if let Some(fail) = strong_epi_failure(cat, k) {
                return Ok(verdict.fail(Witness::NotStrongEpi {
                    left: f,
                    right: g,
                    sections: [s, t],
                    product: cone,
                    factorization: k,
                    mono: fail.mono,
                    top: fail.top,
                    bottom: fail.bottom,
                }));
            }
        }
    }
    Ok(verdict)
}

/// The coproduct characterizations: canonical spans out of designated
/// coproducts. Pairs without a designated coproduct are skipped and listed.
pub fn check_property_via_coproducts(
    cat: &FiniteCategory,
    property: Property,
) -> Result<Verdict, CheckError> {
    let zs = zero(cat)?;
    let coproducts = &cat.designations().coproducts;
    if coproducts.is_empty() {
        return Err(CheckError::MissingCoproducts);
    }
    let method = match property {
        Property::Unital => "canonical span out of X+Y is a weak product",
        Property::Subtractive => "right punctual graph on X+X is left punctual",
        Property::StronglyUnital => {
            "spans <1|0>, <1|1> out of X+X and <1 0 0>, <1|1>+1 out of X+X+X are weak products"
        }
    };
    let mut verdict = Verdict::new(property, Mode::Weak, method);
    let pairs: Vec<(ObjId, ObjId)> = match property {
        Property::Unital => all_pairs(cat).collect(),
        _ => cat.objects().map(|x| (x, x)).collect(),
    };
    for (x, y) in pairs {
        let Some(&cone) = coproducts.get(&(x, y)) else {
            verdict.skipped.push([x, y]);
            continue;
        };
        verdict.examined += 1;
        let fold_left =
            copair(cat, cone, cat.identity(x), zs.zero(y, x)).expect("coproduct copairing exists");
        let witness = match property {
            Property::Unital => {
                let fold_right =
                    copair(cat, cone, zs.zero(x, y), cat.identity(y)).expect("copairing exists");
                weak_product_failure(cat, fold_left, fold_right).map(|(a, tx, ty)| {
                    Witness::NotWeakProduct {
                        left: fold_left,
                        right: fold_right,
                        sections: None,
                        coproduct: Some(cone),
                        test_object: a,
                        test_left: tx,
                        test_right: ty,
                    }
                })
            }
            Property::Subtractive => {
                let fold =
                    copair(cat, cone, cat.identity(x), cat.identity(x)).expect("copairing exists");
                left_section(cat, zs, fold_left, fold).is_none().then_some(
                    Witness::NotLeftPunctual {
                        d: fold_left,
                        c: fold,
                        e: cone.left,
                        t: cone.right,
                        relation: false,
                    },
                )
            }
            Property::StronglyUnital => {
                let fold =
                    copair(cat, cone, cat.identity(x), cat.identity(x)).expect("copairing exists");
                weak_product_failure(cat, fold_left, fold).map(|(a, tx, ty)| {
                    Witness::NotWeakProduct {
                        left: fold_left,
                        right: fold,
                        sections: None,
                        coproduct: Some(cone),
                        test_object: a,
                        test_left: tx,
                        test_right: ty,
                    }
                })
            }
        };
        if let Some(w) = witness {
            return Ok(verdict.fail(w));
        }
    }
    if property == Property::StronglyUnital {
        if let Some(w) = ternary_spans(cat, zs, &mut verdict) {
            return Ok(verdict.fail(w));
        }
    }
    Ok(verdict)
}

/// The split right punctual span `X <- (X+X)+X -> X+X` with legs `<1 0 0>`
/// and `<1|1> + 1`, sections `i1` and `i23`, wherever both coproducts are
/// designated. Its weak-product property is what produces the ternary
/// coalgebra map, and it is the only place where that map is visible when
/// the category stops at three-fold coproducts of a generator.
fn ternary_spans(
    cat: &FiniteCategory,
    zs: &ZeroStructure,
    verdict: &mut Verdict,
) -> Option<Witness> {
    let coproducts = &cat.designations().coproducts;
    for x in cat.objects() {
        let Some(&two) = coproducts.get(&(x, x)) else {
            continue;
        };
        let Some(&three) = coproducts.get(&(two.apex, x)) else {
            continue;
        };
        verdict.examined += 1;
        let one = cat.identity(x);
        let fold_left = copair(cat, two, one, zs.zero(x, x)).expect("copairing exists");
        let fold = copair(cat, two, one, one).expect("copairing exists");
        let f = copair(cat, three, fold_left, zs.zero(x, x)).expect("copairing exists");
        let g =
            copair(cat, three, cat.compose(two.left, fold), two.right).expect("copairing exists");
        let s = cat.compose(three.left, two.left);
        let t = copair(cat, two, cat.compose(three.left, two.right), three.right)
            .expect("copairing exists");
        if let Some((a, tx, ty)) = weak_product_failure(cat, f, g) {
            return Some(Witness::NotWeakProduct {
                left: f,
                right: g,
                sections: Some([s, t]),
                coproduct: None,
                test_object: a,
                test_left: tx,
                test_right: ty,
            });
        }
    }
    None
}

fn ensure(condition: bool, message: &str) -> Result<(), String> {
    if condition {
        Ok(())
    } else {
        Err(message.to_string())
    }
}

fn no_factorization(
    cat: &FiniteCategory,
    f: MorId,
    g: MorId,
    a: ObjId,
    x: MorId,
    y: MorId,
) -> Result<(), String> {
    ensure(
        cat.dom(x) == a && cat.dom(y) == a,
        "test pair does not start at the test object",
    )?;
    ensure(
        cat.cod(x) == cat.cod(f) && cat.cod(y) == cat.cod(g),
        "test pair has the wrong codomains",
    )?;
    let factors = cat
        .hom(a, cat.dom(f))
        .iter()
        .any(|&w| cat.compose(f, w) == x && cat.compose(g, w) == y);
    ensure(!factors, "the test pair factors through the span")
}

/// Re-establishes an abstract failure witness from first principles against
/// `cat`: the shape of the witness is checked and the non-existence claims
/// are re-decided by exhaustive search.
pub fn replay_witness(
    cat: &FiniteCategory,
    property: Property,
    mode: Mode,
    witness: &Witness,
) -> Result<(), String> {
    let m = cat.morphism_count();
    let zs = cat
        .zero_structure()
        .ok_or("the category has no zero object")?;
    let valid = |f: MorId| f < m;
    match *witness {
        Witness::ProperMono {
            product,
            left,
            right,
            mono,
        } => {
            ensure(
                [product.left, product.right, left, right, mono]
                    .into_iter()
                    .all(valid),
                "unknown morphism",
            )?;
            ensure(
                mode == Mode::Strict,
                "proper-mono witnesses refute strict properties",
            )?;
            let (x, y) = (cat.cod(product.left), cat.cod(product.right));
            ensure(is_strict_product(cat, x, y, product), "not a product cone")?;
            let expected_left = match property {
                Property::Unital => (cat.identity(x), zs.zero(x, y)),
                Property::StronglyUnital => {
                    ensure(x == y, "strong unitality concerns X×X")?;
                    (cat.identity(x), cat.identity(x))
                }
                Property::Subtractive => return Err("proper-mono witness for subtractivity".into()),
            };
            ensure(
                cat.dom(left) == x && cat.cod(left) == product.apex,
                "left leg has the wrong type",
            )?;
            ensure(
                (
                    cat.compose(product.left, left),
                    cat.compose(product.right, left),
                ) == expected_left,
                "left leg is not the expected pairing",
            )?;
            ensure(
                cat.dom(right) == y && cat.cod(right) == product.apex,
                "right leg has the wrong type",
            )?;
            ensure(
                (
                    cat.compose(product.left, right),
                    cat.compose(product.right, right),
                ) == (zs.zero(y, x), cat.identity(y)),
                "right leg is not <0,1>",
            )?;
            ensure(
                cat.cod(mono) == product.apex,
                "mono does not land in the product",
            )?;
            ensure(cancels(cat, mono), "not a mono")?;
            ensure(!is_iso(cat, mono), "the mono is an isomorphism")?;
            ensure(
                cat.factor_through(mono, left).is_some()
                    && cat.factor_through(mono, right).is_some(),
                "a leg does not factor through the mono",
            )
        }
        Witness::NotWeakProduct {
            left,
            right,
            sections,
            coproduct,
            test_object,
            test_left,
            test_right,
        } => {
            ensure(
                [left, right, test_left, test_right].into_iter().all(valid)
                    && test_object < cat.object_count(),
                "unknown morphism or object",
            )?;
            ensure(
                mode == Mode::Weak,
                "weak-product witnesses refute weak properties",
            )?;
            ensure(cat.dom(left) == cat.dom(right), "not a span")?;
            let (x, y) = (cat.cod(left), cat.cod(right));
            match (sections, coproduct) {
                (Some([s, t]), None) => {
                    ensure(valid(s) && valid(t), "unknown section")?;
                    ensure(
                        cat.dom(s) == x && cat.dom(t) == y,
                        "sections have the wrong type",
                    )?;
                    ensure(
                        cat.cod(s) == cat.dom(left) && cat.cod(t) == cat.dom(left),
                        "sections miss the apex",
                    )?;
                    ensure(cat.compose(left, s) == cat.identity(x), "f·s != 1")?;
                    ensure(cat.compose(right, t) == cat.identity(y), "g·t != 1")?;
                    ensure(cat.compose(left, t) == zs.zero(y, x), "f·t != 0")?;
                    match property {
                        Property::Unital => {
                            ensure(cat.compose(right, s) == zs.zero(x, y), "g·s != 0")?
                        }
                        Property::StronglyUnital => {}
                        Property::Subtractive => {
                            return Err("span witness for subtractivity".into())
                        }
                    }
                }
                (None, Some(cone)) => {
                    ensure(
                        is_strict_coproduct(cat, cat.dom(cone.left), cat.dom(cone.right), cone),
                        "not a coproduct",
                    )?;
                    ensure(
                        cat.dom(left) == cone.apex,
                        "span does not start at the coproduct",
                    )?;
                    let (a, b) = (cat.compose(left, cone.left), cat.compose(left, cone.right));
                    let (c, d) = (
                        cat.compose(right, cone.left),
                        cat.compose(right, cone.right),
                    );
                    let (sx, sy) = (cat.dom(cone.left), cat.dom(cone.right));
                    ensure(
                        a == cat.identity(sx) && b == zs.zero(sy, sx),
                        "left leg is not <1|0>",
                    )?;
                    match property {
                        Property::Unital => ensure(
                            c == zs.zero(sx, sy) && d == cat.identity(sy),
                            "right leg is not <0|1>",
                        )?,
                        Property::StronglyUnital => ensure(
                            sx == sy && c == cat.identity(sx) && d == cat.identity(sy),
                            "right leg is not <1|1>",
                        )?,
                        Property::Subtractive => {
                            return Err("span witness for subtractivity".into())
                        }
                    }
                }
                _ => return Err("a weak-product witness needs sections or a coproduct".into()),
            }
            no_factorization(cat, left, right, test_object, test_left, test_right)
        }
        Witness::NotLeftPunctual {
            d,
            c,
            e,
            t,
            relation,
        } => {
            ensure([d, c, e, t].into_iter().all(valid), "unknown morphism")?;
            ensure(
                property == Property::Subtractive,
                "graph witnesses refute subtractivity",
            )?;
            ensure(
                relation == (mode == Mode::Strict),
                "relation flag does not match the mode",
            )?;
            let (g, x) = (cat.dom(d), cat.cod(d));
            ensure(cat.dom(c) == g && cat.cod(c) == x, "legs are not parallel")?;
            ensure(
                cat.dom(e) == x && cat.cod(e) == g,
                "reflexivity has the wrong type",
            )?;
            ensure(
                cat.compose(d, e) == cat.identity(x) && cat.compose(c, e) == cat.identity(x),
                "not reflexive",
            )?;
            ensure(
                cat.dom(t) == x && cat.cod(t) == g,
                "right section has the wrong type",
            )?;
            ensure(
                cat.compose(c, t) == cat.identity(x) && cat.compose(d, t) == zs.zero(x, x),
                "not right punctual",
            )?;
            if relation {
                ensure(jointly_monic(cat, d, c), "legs are not jointly monic")?;
            }
            let left_punctual = cat.hom(x, g).iter().any(|&s| {
                cat.compose(d, s) == cat.identity(x) && cat.compose(c, s) == zs.zero(x, x)
            });
            ensure(!left_punctual, "the graph is left punctual")
        }
        Witness::NotStrongEpi {
            left,
            right,
            sections: [s, t],
            product,
            factorization,
            mono,
            top,
            bottom,
        } => {
            ensure(
                [
                    left,
                    right,
                    s,
                    t,
                    product.left,
                    product.right,
                    factorization,
                    mono,
                    top,
                    bottom,
                ]
                .into_iter()
                .all(valid),
                "unknown morphism",
            )?;
            ensure(
                property == Property::Unital && mode == Mode::Strict,
                "strong-epi witnesses refute strict unitality",
            )?;
            let (x, y) = (cat.cod(left), cat.cod(right));
            ensure(is_strict_product(cat, x, y, product), "not a product cone")?;
            ensure(
                cat.dom(s) == x && cat.dom(t) == y,
                "sections have the wrong type",
            )?;
            ensure(
                cat.compose(left, s) == cat.identity(x)
                    && cat.compose(right, t) == cat.identity(y)
                    && cat.compose(left, t) == zs.zero(y, x)
                    && cat.compose(right, s) == zs.zero(x, y),
                "not punctual",
            )?;
            ensure(
                cat.dom(factorization) == cat.dom(left)
                    && cat.compose(product.left, factorization) == left
                    && cat.compose(product.right, factorization) == right,
                "not the comparison map",
            )?;
            ensure(cancels(cat, mono), "not a mono")?;
            ensure(
                cat.dom(top) == cat.dom(left)
                    && cat.cod(top) == cat.dom(mono)
                    && cat.dom(bottom) == product.apex
                    && cat.cod(bottom) == cat.cod(mono),
                "square has the wrong shape",
            )?;
            ensure(
                cat.compose(mono, top) == cat.compose(bottom, factorization),
                "square does not commute",
            )?;
            ensure(
                cat.factor_through(mono, bottom).is_none(),
                "a diagonal exists",
            )
        }
        Witness::Subalgebra { .. } | Witness::Relation { .. } => {
            Err("concrete witnesses are replayed against the algebra payloads".into())
        }
    }
}
