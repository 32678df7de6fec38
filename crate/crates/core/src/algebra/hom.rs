use super::{AlgebraError, Elem, FiniteAlgebra};
use crate::tuples::{for_each_fresh_tuple, for_each_tuple};

/// A homomorphism between two algebras over the same signature.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Homomorphism {
    pub map: Vec<Elem>,
    pub injective: bool,
    pub surjective: bool,
}

impl Homomorphism {
    pub(crate) fn new(map: Vec<Elem>, target_size: usize) -> Self {
        let mut hit = vec![false; target_size];
        for &y in &map {
            hit[y as usize] = true;
        }
        let image = hit.iter().filter(|&&h| h).count();
        Self {
            injective: image == map.len(),
            surjective: image == target_size,
            map,
        }
    }
}

/// Does `map` commute with every operation table?
pub fn is_homomorphism(source: &FiniteAlgebra, target: &FiniteAlgebra, map: &[Elem]) -> bool {
    if map.len() != source.size() || source.signature() != target.signature() {
        return false;
    }
    if map.iter().any(|&y| y as usize >= target.size()) {
        return false;
    }
    let mut image = Vec::new();
    for (op, symbol) in source.signature().ops().iter().enumerate() {
        let mut ok = true;
        for_each_tuple(source.size(), symbol.arity, |tuple| {
            if !ok {
                return;
            }
            image.clear();
            image.extend(tuple.iter().map(|&x| map[x as usize]));
            let lhs = map[source.apply(op, tuple) as usize];
            ok = lhs == target.apply(op, &image);
        });
        if !ok {
            return false;
        }
    }
    true
}

/// How every element of an algebra is reached from a small generating set.
struct DerivationPlan {
    generators: Vec<Elem>,
    /// (operation, argument elements, result), in evaluation order.
    steps: Vec<(usize, Vec<Elem>, Elem)>,
}

impl DerivationPlan {
    fn new(a: &FiniteAlgebra) -> Self {
        let mut plan = Self {
            generators: Vec::new(),
            steps: Vec::new(),
        };
        let mut reached = vec![false; a.size()];
        let mut order: Vec<Elem> = Vec::new();
        for (op, symbol) in a.signature().ops().iter().enumerate() {
            if symbol.arity == 0 {
                let v = a.apply(op, &[]);
                if !reached[v as usize] {
                    reached[v as usize] = true;
                    order.push(v);
                    plan.steps.push((op, Vec::new(), v));
                }
            }
        }
        let mut done = 0;
        loop {
            // semi-naive saturation of what has been reached so far
            while done < order.len() {
                let total = order.len();
                for (op, symbol) in a.signature().ops().iter().enumerate() {
                    if symbol.arity == 0 {
                        continue;
                    }
                    let snapshot = order[..total].to_vec();
                    for_each_fresh_tuple(total, done, symbol.arity, |tuple| {
                        let args: Vec<Elem> = tuple.iter().map(|&i| snapshot[i]).collect();
                        let v = a.apply(op, &args);
                        if !reached[v as usize] {
                            reached[v as usize] = true;
                            order.push(v);
                            plan.steps.push((op, args, v));
                        }
                        true
                    });
                }
                done = total;
            }
            // greedily add the least unreached element as a generator
            match (0..a.size()).find(|&x| !reached[x]) {
                Some(x) => {
                    reached[x] = true;
                    order.push(x as Elem);
                    plan.generators.push(x as Elem);
                }
                None => return plan,
            }
        }
    }

    /// Extends an assignment of generator images to a full map, or `None` when
    /// the extension is inconsistent with the target tables.
    fn extend(
        &self,
        source: &FiniteAlgebra,
        target: &FiniteAlgebra,
        images: &[Elem],
    ) -> Option<Vec<Elem>> {
        let mut map = vec![Elem::MAX; source.size()];
        for (&g, &y) in self.generators.iter().zip(images) {
            map[g as usize] = y;
        }
        let mut args = Vec::new();
        for (op, sources, result) in &self.steps {
            args.clear();
            args.extend(sources.iter().map(|&x| map[x as usize]));
            let value = target.apply(*op, &args);
            let slot = &mut map[*result as usize];
            if *slot != Elem::MAX && *slot != value {
                return None;
            }
            *slot = value;
        }
        is_homomorphism(source, target, &map).then_some(map)
    }
}

fn for_each_hom(
    source: &FiniteAlgebra,
    target: &FiniteAlgebra,
    mut visit: impl FnMut(Vec<Elem>) -> bool,
) -> Result<(), AlgebraError> {
    if source.signature() != target.signature() {
        return Err(AlgebraError::SignatureMismatch);
    }
    let plan = DerivationPlan::new(source);
    let mut images = vec![0 as Elem; plan.generators.len()];
    let m = target.size();
    loop {
        if let Some(map) = plan.extend(source, target, &images) {
            if !visit(map) {
                return Ok(());
            }
        }
        // next assignment
        let mut pos = images.len();
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            images[pos] += 1;
            if (images[pos] as usize) < m {
                break;
            }
            images[pos] = 0;
        }
    }
}

/// All homomorphisms `source → target`, sorted lexicographically by map.
pub fn enumerate_homs(
    source: &FiniteAlgebra,
    target: &FiniteAlgebra,
) -> Result<Vec<Homomorphism>, AlgebraError> {
    let mut maps = Vec::new();
    for_each_hom(source, target, |map| {
        maps.push(map);
        true
    })?;
    maps.sort_unstable();
    maps.dedup();
    Ok(maps
        .into_iter()
        .map(|map| Homomorphism::new(map, target.size()))
        .collect())
}

/// Some isomorphism `source → target`, if the two are isomorphic.
pub fn find_isomorphism(source: &FiniteAlgebra, target: &FiniteAlgebra) -> Option<Vec<Elem>> {
    if source.size() != target.size() || source.signature() != target.signature() {
        return None;
    }
    let mut found = None;
    let _ = for_each_hom(source, target, |map| {
        let mut hit = vec![false; target.size()];
        for &y in &map {
            hit[y as usize] = true;
        }
        if hit.iter().all(|&h| h) {
            found = Some(map);
            false
        } else {
            true
        }
    });
    found
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{product_algebra, product_projections, FiniteAlgebra};
    use super::*;

    fn brute_force_homs(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Vec<Vec<Elem>> {
        let mut out = Vec::new();
        for_each_tuple(b.size(), a.size(), |map| {
            if is_homomorphism(a, b, map) {
                out.push(map.to_vec());
            }
        });
        out
    }

    #[test]
    fn z2_endomorphisms() {
        let homs = enumerate_homs(&z2(), &z2()).unwrap();
        let maps: Vec<_> = homs.iter().map(|h| h.map.clone()).collect();
        assert_eq!(maps, vec![vec![0, 0], vec![0, 1]]);
        assert!(homs[1].injective && homs[1].surjective);
    }

    #[test]
    fn exactly_one_hom_into_trivial() {
        for a in [z2(), z3(), join(), subtraction(), pointed_set()] {
            let t = FiniteAlgebra::trivial(a.signature());
            assert_eq!(enumerate_homs(&a, &t).unwrap().len(), 1);
        }
    }

    #[test]
    fn matches_brute_force() {
        let algebras = [z2(), join(), subtraction(), pointed_set()];
        for a in &algebras {
            let sq = product_algebra(a, a).unwrap();
            for (x, y) in [(a, &sq), (&sq, a), (&sq, &sq), (a, a)] {
                let fast: Vec<_> = enumerate_homs(x, y)
                    .unwrap()
                    .into_iter()
                    .map(|h| h.map)
                    .collect();
                assert_eq!(fast, brute_force_homs(x, y));
                assert!(fast.iter().all(|m| m[0] == 0));
            }
        }
        let z3sq = product_algebra(&z3(), &z3()).unwrap();
        let fast: Vec<_> = enumerate_homs(&z3sq, &z3())
            .unwrap()
            .into_iter()
            .map(|h| h.map)
            .collect();
        assert_eq!(fast, brute_force_homs(&z3sq, &z3()));
    }

    #[test]
    fn pairing_bijection_with_product() {
        let a = join();
        let sq = product_algebra(&a, &a).unwrap();
        let (l, r) = product_projections(&a, &a);
        for source in [a.clone(), sq.clone()] {
            let into_product = enumerate_homs(&source, &sq).unwrap();
            let into_factor = enumerate_homs(&source, &a).unwrap();
            assert_eq!(into_product.len(), into_factor.len() * into_factor.len());
            let mut pairs: Vec<_> = into_product
                .iter()
                .map(|h| {
                    let left: Vec<Elem> = h.map.iter().map(|&p| l[p as usize]).collect();
                    let right: Vec<Elem> = h.map.iter().map(|&p| r[p as usize]).collect();
                    (left, right)
                })
                .collect();
            pairs.sort();
            pairs.dedup();
            assert_eq!(pairs.len(), into_product.len());
        }
    }

    #[test]
    fn isomorphism_detection() {
        let a = z2();
        let sq = product_algebra(&a, &a).unwrap();
        assert!(find_isomorphism(&a, &a).is_some());
        assert!(find_isomorphism(&a, &sq).is_none());
        assert!(find_isomorphism(&z2(), &join()).is_none());
    }
}
