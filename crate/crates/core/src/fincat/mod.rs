//! Finite categories given by explicit composition, with optional zero,
//! product, coproduct and regular-epi designations.

mod audit;
mod check;
mod classify;
mod limits;
mod projective;
mod spans;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::Elem;

pub use audit::{audit_designations, audit_weak_limits, DesignationAudit, WeakLimitAudit};
pub use check::{
    check_property, check_property_via_coproducts, check_unital_via_punctual, replay_witness,
    CheckError, CheckOptions, MissingPolicy, Mode, Property, Verdict, Witness,
};
pub use classify::{
    classify_morphism, is_iso, is_jointly_strongly_epic, is_mono, is_regular_epi, is_split_epi,
    is_strong_epi, strong_epi_failure, MorphismFlags, StrongEpiFailure,
};
pub use limits::{
    find_strict_product, is_strict_coproduct, is_strict_product, is_weak_product, limits,
    weak_product_failure, weak_pullbacks, zigzag_weak_limit, Limits,
};
pub use projective::{is_projective, validate_projective_cover, CoverReport, EpiClass};
pub use spans::{
    classify_span, enumerate_reflexive, ReflexiveKind, ReflexiveStructure, Span, SpanFlags,
};

pub type ObjId = usize;
pub type MorId = usize;

const UNDEFINED: MorId = MorId::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismInfo {
    pub name: String,
    pub dom: ObjId,
    pub cod: ObjId,
}

/// Apex and two legs. For a product the legs are projections out of the
/// apex; for a coproduct they are injections into it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cone {
    pub apex: ObjId,
    pub left: MorId,
    pub right: MorId,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Designations {
    pub zero: Option<ObjId>,
    pub products: BTreeMap<(ObjId, ObjId), Cone>,
    pub coproducts: BTreeMap<(ObjId, ObjId), Cone>,
    pub regular_epis: Option<BTreeSet<MorId>>,
}

#[derive(Debug, Clone)]
enum Composition {
    /// Dense `M × M` table indexed by `g * M + f`.
    Table(Vec<MorId>),
    /// Morphisms are maps between finite carriers; composites are looked up
    /// by their map in the target hom-set.
    Concrete {
        maps: Vec<Vec<Elem>>,
        index: Vec<HashMap<Vec<Elem>, MorId>>,
    },
}

/// The zero object together with the zero morphism between every pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroStructure {
    pub object: ObjId,
    objects: usize,
    zeros: Vec<MorId>,
}

impl ZeroStructure {
    pub fn zero(&self, x: ObjId, y: ObjId) -> MorId {
        self.zeros[x * self.objects + y]
    }
}

#[derive(Debug, Clone, Default)]
struct Cache {
    zero: OnceLock<Option<ZeroStructure>>,
    monos: OnceLock<Vec<bool>>,
}

#[derive(Debug, Clone)]
pub struct FiniteCategory {
    name: String,
    objects: Vec<String>,
    morphisms: Vec<MorphismInfo>,
    identities: Vec<MorId>,
    homs: Vec<Vec<MorId>>,
    position: Vec<usize>,
    composition: Composition,
    designations: Designations,
    cache: Cache,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum CategoryError {
    #[error("line {line}: unknown object `{name}`")]
    UnknownObject { name: String, line: usize },
    #[error("line {line}: unknown morphism `{name}`")]
    UnknownMorphism { name: String, line: usize },
    #[error("line {line}: `{name}` is declared twice")]
    DuplicateName { name: String, line: usize },
    #[error("object `{object}` has no identity")]
    MissingIdentity { object: String },
    #[error("identity law fails: {detail}")]
    IdentityViolation { detail: String },
    #[error("composite {g} . {f} is not defined")]
    CompositionUndefined { g: String, f: String },
    #[error("line {line}: bad composite {g} . {f} = {h}: {reason}")]
    CompositionMismatch {
        g: String,
        f: String,
        h: String,
        reason: String,
        line: usize,
    },
    #[error("associativity fails: ({h} . {g}) . {f} != {h} . ({g} . {f})")]
    AssociativityViolation { h: String, g: String, f: String },
    #[error("line {line}: bad designation `{what}`: {reason}")]
    BadDesignation {
        what: String,
        reason: String,
        line: usize,
    },
}

/// A raw, unvalidated category description. `line` fields are source
/// positions used in diagnostics (0 when not read from a file).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategorySpec {
    pub name: String,
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismSpec>,
    pub identities: Vec<IdentitySpec>,
    pub compositions: Vec<CompositionSpec>,
    pub designations: Vec<DesignationSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismSpec {
    pub name: String,
    pub dom: String,
    pub cod: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentitySpec {
    pub object: String,
    pub morphism: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositionSpec {
    pub g: String,
    pub f: String,
    pub h: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum DesignationKind {
    Zero {
        object: String,
    },
    Product {
        left: String,
        right: String,
        apex: String,
        p1: String,
        p2: String,
    },
    Coproduct {
        left: String,
        right: String,
        apex: String,
        i1: String,
        i2: String,
    },
    RegularEpi {
        morphism: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignationSpec {
    pub kind: DesignationKind,
    pub line: usize,
}

struct Names {
    objects: HashMap<String, ObjId>,
    morphisms: HashMap<String, MorId>,
}

impl Names {
    fn object(&self, name: &str, line: usize) -> Result<ObjId, CategoryError> {
        self.objects
            .get(name)
            .copied()
            .ok_or_else(|| CategoryError::UnknownObject {
                name: name.to_string(),
                line,
            })
    }

    fn morphism(&self, name: &str, line: usize) -> Result<MorId, CategoryError> {
        self.morphisms
            .get(name)
            .copied()
            .ok_or_else(|| CategoryError::UnknownMorphism {
                name: name.to_string(),
                line,
            })
    }
}

/// Validates a category description: names, identities, totality of
/// composition on composable pairs, identity and associativity laws, and the
/// universal properties of every designation.
pub fn validate_category(spec: &CategorySpec) -> Result<FiniteCategory, Vec<CategoryError>> {
    let mut errors = Vec::new();
    let mut names = Names {
        objects: HashMap::new(),
        morphisms: HashMap::new(),
    };
    for (i, o) in spec.objects.iter().enumerate() {
        if names.objects.insert(o.clone(), i).is_some() {
            errors.push(CategoryError::DuplicateName {
                name: o.clone(),
                line: 0,
            });
        }
    }
    let mut morphisms = Vec::new();
    for m in &spec.morphisms {
        let ends = (names.object(&m.dom, m.line), names.object(&m.cod, m.line));
        match ends {
            (Ok(dom), Ok(cod)) => {
                if names
                    .morphisms
                    .insert(m.name.clone(), morphisms.len())
                    .is_some()
                {
                    errors.push(CategoryError::DuplicateName {
                        name: m.name.clone(),
                        line: m.line,
                    });
                    continue;
                }
                morphisms.push(MorphismInfo {
                    name: m.name.clone(),
                    dom,
                    cod,
                });
            }
            (a, b) => errors.extend(a.err().into_iter().chain(b.err())),
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }

    let n_obj = spec.objects.len();
    let mut identities = vec![UNDEFINED; n_obj];
    for id in &spec.identities {
        let (o, m) = match (
            names.object(&id.object, id.line),
            names.morphism(&id.morphism, id.line),
        ) {
            (Ok(o), Ok(m)) => (o, m),
            (a, b) => {
                errors.extend(a.err().into_iter().chain(b.err()));
                continue;
            }
        };
        if morphisms[m].dom != o || morphisms[m].cod != o {
            errors.push(CategoryError::IdentityViolation {
                detail: format!(
                    "`{}` is not an endomorphism of `{}`",
                    id.morphism, id.object
                ),
            });
        } else if identities[o] != UNDEFINED && identities[o] != m {
            errors.push(CategoryError::IdentityViolation {
                detail: format!("`{}` has two identities", id.object),
            });
        } else {
            identities[o] = m;
        }
    }
    for (o, &id) in identities.iter().enumerate() {
        if id == UNDEFINED {
            errors.push(CategoryError::MissingIdentity {
                object: spec.objects[o].clone(),
            });
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }

    let m = morphisms.len();
    let mut table = vec![UNDEFINED; m * m];
    for c in &spec.compositions {
        let ids = (
            names.morphism(&c.g, c.line),
            names.morphism(&c.f, c.line),
            names.morphism(&c.h, c.line),
        );
        let (g, f, h) = match ids {
            (Ok(g), Ok(f), Ok(h)) => (g, f, h),
            (a, b, c) => {
                errors.extend(a.err().into_iter().chain(b.err()).chain(c.err()));
                continue;
            }
        };
        let mismatch = |reason: &str| CategoryError::CompositionMismatch {
            g: c.g.clone(),
            f: c.f.clone(),
            h: c.h.clone(),
            reason: reason.to_string(),
            line: c.line,
        };
        if morphisms[f].cod != morphisms[g].dom {
            errors.push(mismatch("the pair is not composable"));
        } else if morphisms[h].dom != morphisms[f].dom || morphisms[h].cod != morphisms[g].cod {
            errors.push(mismatch("the composite has the wrong domain or codomain"));
        } else if table[g * m + f] != UNDEFINED && table[g * m + f] != h {
            errors.push(mismatch("conflicts with an earlier composite"));
        } else {
            table[g * m + f] = h;
        }
    }
    // composites with identities are implied
    for (f, info) in morphisms.iter().enumerate() {
        for (slot, expected) in [
            (identities[info.cod] * m + f, f),
            (f * m + identities[info.dom], f),
        ] {
            if table[slot] == UNDEFINED {
                table[slot] = expected;
            } else if table[slot] != expected {
                errors.push(CategoryError::IdentityViolation {
                    detail: format!(
                        "composite of `{}` with an identity is not `{}`",
                        info.name, info.name
                    ),
                });
            }
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }

    let mut cat = FiniteCategory::assemble(
        spec.name.clone(),
        spec.objects.clone(),
        morphisms,
        identities,
        Composition::Table(table),
    );
    errors.extend(cat.check_table_laws());
    if !errors.is_empty() {
        return Err(errors);
    }

    for d in &spec.designations {
        if let Err(e) = install_designation(&mut cat, &names, d) {
            errors.push(e);
        }
    }
    if errors.is_empty() {
        Ok(cat)
    } else {
        Err(errors)
    }
}

fn install_designation(
    cat: &mut FiniteCategory,
    names: &Names,
    d: &DesignationSpec,
) -> Result<(), CategoryError> {
    let line = d.line;
    match &d.kind {
        DesignationKind::Zero { object } => {
            let z = names.object(object, line)?;
            cat.designate_zero(z)
                .map_err(|reason| CategoryError::BadDesignation {
                    what: format!("zero {object}"),
                    reason,
                    line,
                })
        }
        DesignationKind::Product {
            left,
            right,
            apex,
            p1,
            p2,
        } => {
            let (x, y) = (names.object(left, line)?, names.object(right, line)?);
            let cone = Cone {
                apex: names.object(apex, line)?,
                left: names.morphism(p1, line)?,
                right: names.morphism(p2, line)?,
            };
            cat.designate_product(x, y, cone)
                .map_err(|reason| CategoryError::BadDesignation {
                    what: format!("product {left} {right}"),
                    reason,
                    line,
                })
        }
        DesignationKind::Coproduct {
            left,
            right,
            apex,
            i1,
            i2,
        } => {
            let (x, y) = (names.object(left, line)?, names.object(right, line)?);
            let cone = Cone {
                apex: names.object(apex, line)?,
                left: names.morphism(i1, line)?,
                right: names.morphism(i2, line)?,
            };
            cat.designate_coproduct(x, y, cone)
                .map_err(|reason| CategoryError::BadDesignation {
                    what: format!("coproduct {left} {right}"),
                    reason,
                    line,
                })
        }
        DesignationKind::RegularEpi { morphism } => {
            let f = names.morphism(morphism, line)?;
            cat.designations
                .regular_epis
                .get_or_insert_with(BTreeSet::new)
                .insert(f);
            Ok(())
        }
    }
}

/// Hom-sets of a concrete category: for every ordered pair of objects the
/// list of carrier maps, indexed by `dom * objects + cod`.
pub struct ConcreteHoms {
    pub names: Vec<String>,
    pub sizes: Vec<usize>,
    pub maps: Vec<Vec<Vec<Elem>>>,
}

impl FiniteCategory {
    fn assemble(
        name: String,
        objects: Vec<String>,
        morphisms: Vec<MorphismInfo>,
        identities: Vec<MorId>,
        composition: Composition,
    ) -> Self {
        let n = objects.len();
        let mut homs = vec![Vec::new(); n * n];
        let mut position = vec![0; morphisms.len()];
        for (f, info) in morphisms.iter().enumerate() {
            let hom = &mut homs[info.dom * n + info.cod];
            position[f] = hom.len();
            hom.push(f);
        }
        Self {
            name,
            objects,
            morphisms,
            identities,
            homs,
            position,
            composition,
            designations: Designations::default(),
            cache: Cache::default(),
        }
    }

    /// Builds a concrete category whose morphisms are the given carrier maps.
    /// Every hom-set must contain the identity and be closed under
    /// composition.
    pub fn concrete(name: impl Into<String>, homs: ConcreteHoms) -> Result<Self, CategoryError> {
        let n = homs.names.len();
        let mut morphisms = Vec::new();
        let mut maps = Vec::new();
        let mut index = vec![HashMap::new(); n * n];
        for dom in 0..n {
            for cod in 0..n {
                for map in &homs.maps[dom * n + cod] {
                    let id = morphisms.len();
                    if index[dom * n + cod].insert(map.clone(), id).is_some() {
                        return Err(CategoryError::DuplicateName {
                            name: format!("{map:?}"),
                            line: 0,
                        });
                    }
                    morphisms.push(MorphismInfo {
                        name: format!("m{id}"),
                        dom,
                        cod,
                    });
                    maps.push(map.clone());
                }
            }
        }
        let mut identities = Vec::with_capacity(n);
        for (o, &size) in homs.sizes.iter().enumerate() {
            let id: Vec<Elem> = (0..size as Elem).collect();
            match index[o * n + o].get(&id) {
                Some(&m) => identities.push(m),
                None => {
                    return Err(CategoryError::MissingIdentity {
                        object: homs.names[o].clone(),
                    })
                }
            }
        }
        Ok(Self::assemble(
            name.into(),
            homs.names,
            morphisms,
            identities,
            Composition::Concrete { maps, index },
        ))
    }

    fn check_table_laws(&self) -> Vec<CategoryError> {
        let mut errors = Vec::new();
        let Composition::Table(table) = &self.composition else {
            return errors;
        };
        let m = self.morphisms.len();
        for f in 0..m {
            for &g in self.out_of(self.cod(f)) {
                if table[g * m + f] == UNDEFINED {
                    errors.push(CategoryError::CompositionUndefined {
                        g: self.morphisms[g].name.clone(),
                        f: self.morphisms[f].name.clone(),
                    });
                }
            }
        }
        if !errors.is_empty() {
            return errors;
        }
        for f in 0..m {
            for &g in self.out_of(self.cod(f)) {
                let gf = table[g * m + f];
                for &h in self.out_of(self.cod(g)) {
                    if table[table[h * m + g] * m + f] != table[h * m + gf] {
                        errors.push(CategoryError::AssociativityViolation {
                            h: self.morphisms[h].name.clone(),
                            g: self.morphisms[g].name.clone(),
                            f: self.morphisms[f].name.clone(),
                        });
                        return errors;
                    }
                }
            }
        }
        errors
    }

    /// All morphisms with domain `x`, grouped by codomain.
    fn out_of(&self, x: ObjId) -> impl Iterator<Item = &MorId> + '_ {
        (0..self.objects.len()).flat_map(move |y| self.hom(x, y).iter())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> std::ops::Range<ObjId> {
        0..self.objects.len()
    }

    pub fn object_name(&self, x: ObjId) -> &str {
        &self.objects[x]
    }

    pub fn morphism(&self, f: MorId) -> &MorphismInfo {
        &self.morphisms[f]
    }

    pub fn morphism_name(&self, f: MorId) -> &str {
        &self.morphisms[f].name
    }

    pub fn find_object(&self, name: &str) -> Option<ObjId> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn find_morphism(&self, name: &str) -> Option<MorId> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    pub fn dom(&self, f: MorId) -> ObjId {
        self.morphisms[f].dom
    }

    pub fn cod(&self, f: MorId) -> ObjId {
        self.morphisms[f].cod
    }

    pub fn identity(&self, x: ObjId) -> MorId {
        self.identities[x]
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.identities[self.dom(f)] == f
    }

    /// Morphisms `x → y` in increasing id order.
    pub fn hom(&self, x: ObjId, y: ObjId) -> &[MorId] {
        &self.homs[x * self.objects.len() + y]
    }

    /// Index of `f` within its hom-set.
    pub fn position(&self, f: MorId) -> usize {
        self.position[f]
    }

    /// The carrier map of `f` in a concrete category.
    pub fn map_of(&self, f: MorId) -> Option<&[Elem]> {
        match &self.composition {
            Composition::Concrete { maps, .. } => Some(&maps[f]),
            Composition::Table(_) => None,
        }
    }

    pub fn is_concrete(&self) -> bool {
        matches!(self.composition, Composition::Concrete { .. })
    }

    /// Morphism in the hom-set `x → y` with the given carrier map.
    pub fn morphism_with_map(&self, x: ObjId, y: ObjId, map: &[Elem]) -> Option<MorId> {
        match &self.composition {
            Composition::Concrete { index, .. } => {
                index[x * self.objects.len() + y].get(map).copied()
            }
            Composition::Table(_) => None,
        }
    }

    /// `g · f`, i.e. first `f` then `g`.
    pub fn compose(&self, g: MorId, f: MorId) -> MorId {
        debug_assert_eq!(
            self.cod(f),
            self.dom(g),
            "composing non-composable morphisms"
        );
        match &self.composition {
            Composition::Table(table) => table[g * self.morphisms.len() + f],
            Composition::Concrete { maps, index } => {
                let gm = &maps[g];
                let composite: Vec<Elem> = maps[f].iter().map(|&x| gm[x as usize]).collect();
                index[self.dom(f) * self.objects.len() + self.cod(g)][&composite]
            }
        }
    }

    /// Composes a path given in diagrammatic order reversed: `compose_all(&[h, g, f]) = h·g·f`.
    pub fn compose_all(&self, path: &[MorId]) -> MorId {
        let (&last, rest) = path.split_last().expect("empty path");
        rest.iter().rev().fold(last, |acc, &g| self.compose(g, acc))
    }

    pub fn designations(&self) -> &Designations {
        &self.designations
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Installs a zero object after checking it is initial and terminal.
    pub fn designate_zero(&mut self, z: ObjId) -> Result<(), String> {
        for x in self.objects() {
            if self.hom(z, x).len() != 1 || self.hom(x, z).len() != 1 {
                return Err(format!(
                    "`{}` is not both initial and terminal (see `{}`)",
                    self.objects[z], self.objects[x]
                ));
            }
        }
        self.designations.zero = Some(z);
        self.cache.zero = OnceLock::new();
        Ok(())
    }

    /// Installs a product cone after checking its universal property.
    pub fn designate_product(&mut self, x: ObjId, y: ObjId, cone: Cone) -> Result<(), String> {
        if self.dom(cone.left) != cone.apex || self.dom(cone.right) != cone.apex {
            return Err("projections must start at the apex".into());
        }
        if self.cod(cone.left) != x || self.cod(cone.right) != y {
            return Err("projections must end at the factors".into());
        }
        if let Some(a) = limits::product_violation(self, cone) {
            return Err(format!(
                "factorizations from `{}` are not unique or do not exist",
                self.objects[a]
            ));
        }
        self.designations.products.insert((x, y), cone);
        Ok(())
    }

    /// Installs a coproduct cocone after checking its universal property.
    pub fn designate_coproduct(&mut self, x: ObjId, y: ObjId, cone: Cone) -> Result<(), String> {
        if self.cod(cone.left) != cone.apex || self.cod(cone.right) != cone.apex {
            return Err("injections must end at the apex".into());
        }
        if self.dom(cone.left) != x || self.dom(cone.right) != y {
            return Err("injections must start at the summands".into());
        }
        if let Some(a) = limits::coproduct_violation(self, cone) {
            return Err(format!(
                "factorizations into `{}` are not unique or do not exist",
                self.objects[a]
            ));
        }
        self.designations.coproducts.insert((x, y), cone);
        Ok(())
    }

    /// Installs the regular-epi class without checking it; see
    /// [`audit_designations`].
    pub fn designate_regular_epis(&mut self, epis: BTreeSet<MorId>) {
        self.designations.regular_epis = Some(epis);
    }

    /// The zero object (designated, else the first object that is both
    /// initial and terminal) and all zero morphisms.
    pub fn zero_structure(&self) -> Option<&ZeroStructure> {
        self.cache
            .zero
            .get_or_init(|| {
                let n = self.objects.len();
                let z = self.designations.zero.or_else(|| {
                    self.objects().find(|&z| {
                        self.objects()
                            .all(|x| self.hom(z, x).len() == 1 && self.hom(x, z).len() == 1)
                    })
                })?;
                let mut zeros = Vec::with_capacity(n * n);
                for x in 0..n {
                    for y in 0..n {
                        zeros.push(self.compose(self.hom(z, y)[0], self.hom(x, z)[0]));
                    }
                }
                Some(ZeroStructure {
                    object: z,
                    objects: n,
                    zeros,
                })
            })
            .as_ref()
    }

    pub(crate) fn mono_flags(&self) -> &[bool] {
        self.cache.monos.get_or_init(|| {
            (0..self.morphism_count())
                .map(|f| classify::cancels(self, f))
                .collect()
        })
    }

    /// Morphisms `w` with `g · w = target` where `w` ranges over `hom(dom target, dom g)`.
    pub fn factor_through(&self, g: MorId, target: MorId) -> Option<MorId> {
        self.hom(self.dom(target), self.dom(g))
            .iter()
            .copied()
            .find(|&w| self.compose(g, w) == target)
    }
}

/// Zero structure of `cat`, if it has a zero object.
pub fn zero_structure(cat: &FiniteCategory) -> Option<&ZeroStructure> {
    cat.zero_structure()
}
