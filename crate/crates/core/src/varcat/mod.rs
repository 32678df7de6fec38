//! Finite categories of algebras: product-closed fragments of the model
//! category of a variety and full subcategories of free algebras, plus the
//! concrete property checks and the cross-validation of all decision routes.

mod coalgebra;
mod concrete;
mod cross;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{
    enumerate_homs, enumerate_subuniverses, find_isomorphism, free_algebra, induced_subalgebra,
    product_algebra, AlgebraError, Budget, Elem, FiniteAlgebra, FreeAlgebra,
};
use crate::fincat::{
    audit_designations, is_mono, is_strong_epi, CategoryError, ConcreteHoms, Cone,
    DesignationAudit, FiniteCategory, MorId, ObjId,
};
use crate::tuples::{checked_pow, tuple_at};

pub use coalgebra::{coalgebra_arity, coalgebra_structure, is_coalgebra_structure};
pub use concrete::{check_concrete, concrete_to_abstract, replay_concrete};
pub use cross::{
    cross_validate, required_free_rank, CrossValidationOptions, CrossValidationReport, PropertyRow,
    FRAGMENT_ROLE,
};

/// Cap on the subuniverses enumerated per object.
const MAX_SUBUNIVERSES: usize = 4096;

/// Default cap on the number of morphisms of a built category.
pub const DEFAULT_MAX_MORPHISMS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VarcatError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("at least one generating algebra is required")]
    NoGenerators,
    #[error("the fragment needs more than {cap} {what}")]
    BudgetExceeded { what: String, cap: usize },
    #[error("invalid fragment: {0}")]
    Construction(String),
}

impl From<CategoryError> for VarcatError {
    fn from(e: CategoryError) -> Self {
        VarcatError::Construction(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FragmentOptions {
    /// Largest number of generator factors in a product object.
    pub max_power: usize,
    /// Largest carrier admitted as an object.
    pub max_size: usize,
    pub include_subalgebras: bool,
    pub max_morphisms: usize,
}

impl Default for FragmentOptions {
    fn default() -> Self {
        Self {
            max_power: 2,
            max_size: 16,
            include_subalgebras: true,
            max_morphisms: DEFAULT_MAX_MORPHISMS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FragmentKind {
    Models,
    Free,
}

/// What a fragment contains, so that a verdict on it is never read as a
/// verdict on the whole variety.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FragmentBounds {
    pub kind: FragmentKind,
    /// Product power for model fragments, largest free rank otherwise.
    pub max_power: usize,
    pub max_size: Option<usize>,
    pub include_subalgebras: bool,
    pub objects: usize,
    pub morphisms: usize,
}

/// A concrete category whose objects are algebras and whose morphisms are all
/// homomorphisms between them.
#[derive(Debug, Clone)]
pub struct ModelCategoryFragment {
    pub category: FiniteCategory,
    pub algebras: Vec<FiniteAlgebra>,
    pub bounds: FragmentBounds,
}

impl ModelCategoryFragment {
    pub fn algebra(&self, x: ObjId) -> &FiniteAlgebra {
        &self.algebras[x]
    }

    pub fn map(&self, f: MorId) -> &[Elem] {
        self.category.map_of(f).expect("fragments are concrete")
    }
}

struct Pool {
    objects: Vec<(FiniteAlgebra, usize)>,
}

impl Pool {
    /// Adds `a` unless an isomorphic object is present; keeps the least power.
    fn add(&mut self, a: FiniteAlgebra, power: usize) -> bool {
        for (b, p) in &mut self.objects {
            if b.size() == a.size() && find_isomorphism(&a, b).is_some() {
                *p = (*p).min(power);
                return false;
            }
        }
        self.objects.push((a, power));
        true
    }
}

fn unique_names(algebras: &[FiniteAlgebra]) -> Vec<String> {
    let mut seen = BTreeSet::new();
    algebras
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let mut name = a.name().replace(char::is_whitespace, "");
            if name.is_empty() || !seen.insert(name.clone()) {
                name = format!("{name}#{i}");
                seen.insert(name.clone());
            }
            name
        })
        .collect()
}

/// Builds a fragment of the variety generated by `generators`: the trivial
/// algebra and the generators, closed under binary products within the
/// power and size bounds and, optionally, under subalgebras; isomorphic
/// copies are dropped. Morphisms are all homomorphisms.
pub fn build_model_category(
    generators: &[FiniteAlgebra],
    options: FragmentOptions,
) -> Result<ModelCategoryFragment, VarcatError> {
    let first = generators.first().ok_or(VarcatError::NoGenerators)?;
    if generators
        .iter()
        .any(|g| g.signature() != first.signature())
    {
        return Err(AlgebraError::SignatureMismatch.into());
    }
    let mut pool = Pool {
        objects: Vec::new(),
    };
    pool.add(FiniteAlgebra::trivial(first.signature()).with_name("1"), 0);
    for g in generators {
        if g.size() <= options.max_size {
            pool.add(g.clone(), 1);
        }
    }
    let mut sub_done = 0;
    loop {
        let before = pool.objects.len();
        let n = pool.objects.len();
        for i in 0..n {
            for j in i..n {
                let (a, pa) = &pool.objects[i];
                let (b, pb) = &pool.objects[j];
                if a.size() == 1 || b.size() == 1 || pa + pb > options.max_power {
                    continue;
                }
                if a.size().saturating_mul(b.size()) > options.max_size {
                    continue;
                }
                let power = pa + pb;
                let name = format!("({}x{})", a.name(), b.name());
                let p = product_algebra(a, b)?.with_name(name);
                pool.add(p, power);
            }
        }
        if options.include_subalgebras {
            while sub_done < pool.objects.len() {
                let (a, power) = pool.objects[sub_done].clone();
                sub_done += 1;
                for sub in enumerate_subuniverses(&a, MAX_SUBUNIVERSES)? {
                    if sub.len() == a.size() || sub.len() == 1 {
                        continue;
                    }
                    let label: Vec<String> = sub.iter().map(Elem::to_string).collect();
                    let (s, _) =
                        induced_subalgebra(&a, &sub, format!("{}[{}]", a.name(), label.join(",")));
                    pool.add(s, power);
                }
            }
        }
        if pool.objects.len() == before {
            break;
        }
    }
    let algebras: Vec<FiniteAlgebra> = pool.objects.into_iter().map(|(a, _)| a).collect();
    let n = algebras.len();
    let mut maps = Vec::with_capacity(n * n);
    let mut total = 0usize;
    for x in &algebras {
        for y in &algebras {
            let homs: Vec<Vec<Elem>> = enumerate_homs(x, y)?.into_iter().map(|h| h.map).collect();
            total += homs.len();
            if total > options.max_morphisms {
                return Err(VarcatError::BudgetExceeded {
                    what: "morphisms".into(),
                    cap: options.max_morphisms,
                });
            }
            maps.push(homs);
        }
    }
    let bounds = FragmentBounds {
        kind: FragmentKind::Models,
        max_power: options.max_power,
        max_size: Some(options.max_size),
        include_subalgebras: options.include_subalgebras,
        objects: n,
        morphisms: total,
    };
    let name = format!(
        "models({})",
        generators
            .iter()
            .map(|g| g.name())
            .collect::<Vec<_>>()
            .join(",")
    );
    assemble(name, algebras, maps, bounds)
}

/// Builds the concrete category, then installs the zero object, every
/// product realized by an object, and the surjections as regular epis.
fn assemble(
    name: String,
    algebras: Vec<FiniteAlgebra>,
    maps: Vec<Vec<Vec<Elem>>>,
    bounds: FragmentBounds,
) -> Result<ModelCategoryFragment, VarcatError> {
    let homs = ConcreteHoms {
        names: unique_names(&algebras),
        sizes: algebras.iter().map(FiniteAlgebra::size).collect(),
        maps,
    };
    let mut category = FiniteCategory::concrete(name, homs)?;
    let zero = algebras
        .iter()
        .position(|a| a.size() == 1)
        .ok_or_else(|| VarcatError::Construction("no trivial algebra".into()))?;
    category
        .designate_zero(zero)
        .map_err(VarcatError::Construction)?;
    designate_products(&mut category, &algebras)?;
    let surjections: BTreeSet<MorId> = (0..category.morphism_count())
        .filter(|&f| {
            let map = category.map_of(f).expect("concrete");
            let mut hit = vec![false; algebras[category.cod(f)].size()];
            map.iter().for_each(|&y| hit[y as usize] = true);
            hit.into_iter().all(|h| h)
        })
        .collect();
    category.designate_regular_epis(surjections);
    Ok(ModelCategoryFragment {
        category,
        algebras,
        bounds,
    })
}

fn designate_products(
    category: &mut FiniteCategory,
    algebras: &[FiniteAlgebra],
) -> Result<(), VarcatError> {
    let n = algebras.len();
    for x in 0..n {
        for y in 0..n {
            let (a, b) = (&algebras[x], &algebras[y]);
            if a.size() == 1 || b.size() == 1 {
                // X×1 is X itself, with the identity and the zero map as legs
                let apex = if a.size() == 1 { y } else { x };
                let leg = |to: ObjId| {
                    let map = if to == apex {
                        (0..algebras[apex].size() as Elem).collect()
                    } else {
                        vec![0; algebras[apex].size()]
                    };
                    category
                        .morphism_with_map(apex, to, &map)
                        .expect("identity and zero maps exist")
                };
                let cone = Cone {
                    apex,
                    left: leg(x),
                    right: leg(y),
                };
                category
                    .designate_product(x, y, cone)
                    .map_err(VarcatError::Construction)?;
                continue;
            }
            let product = product_algebra(a, b)?;
            let Some((z, iso)) = (0..n)
                .filter(|&z| algebras[z].size() == product.size())
                .find_map(|z| find_isomorphism(&algebras[z], &product).map(|iso| (z, iso)))
            else {
                continue;
            };
            let width = b.size() as Elem;
            let left: Vec<Elem> = iso.iter().map(|&p| p / width).collect();
            let right: Vec<Elem> = iso.iter().map(|&p| p % width).collect();
            let cone = Cone {
                apex: z,
                left: category
                    .morphism_with_map(z, x, &left)
                    .expect("projection is a homomorphism"),
                right: category
                    .morphism_with_map(z, y, &right)
                    .expect("projection is a homomorphism"),
            };
            category
                .designate_product(x, y, cone)
                .map_err(VarcatError::Construction)?;
        }
    }
    Ok(())
}

/// Map `F(m) → F(n)` sending generator `i` of the source to `images[i]`.
fn free_hom(source: &FreeAlgebra, target: &FreeAlgebra, images: &[Elem]) -> Vec<Elem> {
    let width = target.vector(0).len();
    let vectors: Vec<&[Elem]> = images.iter().map(|&x| target.vector(x)).collect();
    (0..source.size() as Elem)
        .map(|e| {
            let image = if vectors.is_empty() {
                vec![source.vector(e)[0]; width]
            } else {
                source.substitute(e, &vectors)
            };
            target
                .element_of(&image)
                .expect("free algebras are closed under substitution")
        })
        .collect()
}

/// The full subcategory on `F(0), …, F(max_rank)`, with coproducts
/// `F(m) + F(n) = F(m + n)` designated whenever `m + n ≤ max_rank`.
pub fn build_free_subcategory(
    a: &FiniteAlgebra,
    max_rank: usize,
    budget: &Budget,
    max_morphisms: usize,
) -> Result<ModelCategoryFragment, VarcatError> {
    let frees: Vec<FreeAlgebra> = (0..=max_rank)
        .map(|k| free_algebra(a, k, budget))
        .collect::<Result<_, _>>()?;
    let mut total = 0usize;
    for target in &frees {
        for m in 0..=max_rank {
            total = checked_pow(target.size(), m)
                .and_then(|c| total.checked_add(c))
                .filter(|&t| t <= max_morphisms)
                .ok_or_else(|| VarcatError::BudgetExceeded {
                    what: "morphisms".into(),
                    cap: max_morphisms,
                })?;
        }
    }
    let mut maps = Vec::new();
    for source in &frees {
        for target in &frees {
            let m = source.rank();
            let count = checked_pow(target.size(), m).expect("checked above");
            let mut images = vec![0; m];
            let mut homs: Vec<Vec<Elem>> = (0..count)
                .map(|i| {
                    tuple_at(target.size(), i, &mut images);
                    free_hom(source, target, &images)
                })
                .collect();
            homs.sort_unstable();
            maps.push(homs);
        }
    }
    let algebras: Vec<FiniteAlgebra> = frees
        .iter()
        .enumerate()
        .map(|(k, f)| f.algebra().clone().with_name(format!("F{k}")))
        .collect();
    let bounds = FragmentBounds {
        kind: FragmentKind::Free,
        max_power: max_rank,
        max_size: None,
        include_subalgebras: false,
        objects: frees.len(),
        morphisms: total,
    };
    let mut fragment = assemble(format!("free({})", a.name()), algebras, maps, bounds)?;
    for m in 0..=max_rank {
        for n in 0..=max_rank - m {
            let sum = &frees[m + n];
            let gens = sum.generators();
            let i1 = free_hom(&frees[m], sum, &gens[..m]);
            let i2 = free_hom(&frees[n], sum, &gens[m..]);
            let cat = &fragment.category;
            let cone = Cone {
                apex: m + n,
                left: cat
                    .morphism_with_map(m, m + n, &i1)
                    .expect("injection is a homomorphism"),
                right: cat
                    .morphism_with_map(n, m + n, &i2)
                    .expect("injection is a homomorphism"),
            };
            fragment
                .category
                .designate_coproduct(m, n, cone)
                .map_err(VarcatError::Construction)?;
        }
    }
    Ok(fragment)
}

/// Checks the designations against the carrier maps: categorical monos are
/// exactly the injective homomorphisms, and surjections are strong epis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FragmentAudit {
    pub designations: DesignationAudit,
    /// Morphisms where injectivity and categorical monicity disagree.
    pub mono_mismatches: Vec<MorId>,
    /// Surjections that fail the strong-epi lifting test.
    pub surjections_not_strong: Vec<MorId>,
    pub all_ok: bool,
}

pub fn audit_fragment(fragment: &ModelCategoryFragment) -> FragmentAudit {
    let cat = &fragment.category;
    let injective = |f: MorId| {
        let map = fragment.map(f);
        let mut seen = BTreeSet::new();
        map.iter().all(|y| seen.insert(*y))
    };
    let mono_mismatches: Vec<MorId> = (0..cat.morphism_count())
        .filter(|&f| injective(f) != is_mono(cat, f))
        .collect();
    let surjections_not_strong: Vec<MorId> = cat
        .designations()
        .regular_epis
        .iter()
        .flatten()
        .copied()
        .filter(|&e| !is_strong_epi(cat, e))
        .collect();
    let designations = audit_designations(cat);
    // Surjections need not coequalize a pair inside a truncated fragment, so
    // only the universal properties and the strong-epi test count here.
    let designations_ok = designations.zero != Some(false)
        && designations.products.iter().all(|p| p.2)
        && designations.coproducts.iter().all(|p| p.2);
    FragmentAudit {
        all_ok: designations_ok && mono_mismatches.is_empty() && surjections_not_strong.is_empty(),
        designations,
        mono_mismatches,
        surjections_not_strong,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures::*;

    #[test]
    fn z2_fragment_objects_and_homs() {
        let f = build_model_category(&[z2()], FragmentOptions::default()).unwrap();
        let sizes: Vec<usize> = f.algebras.iter().map(FiniteAlgebra::size).collect();
        assert_eq!(sizes, vec![1, 2, 4]);
        let cat = &f.category;
        assert_eq!(cat.hom(1, 1).len(), 2);
        assert_eq!(cat.hom(1, 2).len(), 4);
        assert_eq!(cat.hom(2, 2).len(), 16);
        assert!(cat.designations().products.contains_key(&(1, 1)));
        assert!(audit_fragment(&f).all_ok);
    }

    #[test]
    fn trivial_generator_gives_terminal_category() {
        let one = FiniteAlgebra::trivial(z2().signature());
        let f = build_model_category(&[one], FragmentOptions::default()).unwrap();
        assert_eq!(f.category.object_count(), 1);
        assert_eq!(f.category.morphism_count(), 1);
    }

    #[test]
    fn signature_mismatch_is_rejected() {
        let err = build_model_category(&[z2(), join()], FragmentOptions::default()).unwrap_err();
        assert_eq!(err, VarcatError::Algebra(AlgebraError::SignatureMismatch));
    }

    #[test]
    fn morphism_budget() {
        let options = FragmentOptions {
            max_morphisms: 10,
            ..FragmentOptions::default()
        };
        assert!(matches!(
            build_model_category(&[z2()], options),
            Err(VarcatError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn free_subcategory_sizes_and_coproducts() {
        for (a, sizes) in [(z2(), [1, 2, 4]), (join(), [1, 2, 4])] {
            let f =
                build_free_subcategory(&a, 2, &Budget::default(), DEFAULT_MAX_MORPHISMS).unwrap();
            let got: Vec<usize> = f.algebras.iter().map(FiniteAlgebra::size).collect();
            assert_eq!(got, sizes);
            let cop = f.category.designations().coproducts[&(1, 1)];
            assert_eq!(cop.apex, 2);
            assert!(audit_fragment(&f)
                .designations
                .coproducts
                .iter()
                .all(|c| c.2));
        }
    }
}
