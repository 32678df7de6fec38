use crate::algebra::{
    search_free, substitute_vector, AlgebraError, Budget, Elem, FiniteAlgebra, FreeSearch,
};
use crate::clone::{TermOperation, TermSearch};
use crate::fincat::Property;
use crate::tuples::{checked_pow, tuple_at};

/// Generator vectors of `F(rank)` inside `A^(n^rank)`.
fn generators(n: usize, rank: usize) -> Vec<Vec<Elem>> {
    let width = checked_pow(n, rank).expect("small rank");
    let mut tuple = vec![0; rank];
    let mut gens = vec![Vec::with_capacity(width); rank];
    for c in 0..width {
        tuple_at(n, c, &mut tuple);
        for (g, &t) in gens.iter_mut().zip(&tuple) {
            g.push(t);
        }
    }
    gens
}

fn fold_equations(a: &FiniteAlgebra, kind: Property) -> impl Fn(&[Elem]) -> bool {
    let n = a.size();
    let x = generators(n, 1).remove(0);
    let zero = vec![0; n];
    let [y1, y2]: [Vec<Elem>; 2] = generators(n, 2).try_into().expect("two generators");
    move |v: &[Elem]| {
        let fold = |images: &[&[Elem]]| substitute_vector(n, v, images);
        match kind {
            Property::Unital => fold(&[&x, &zero]) == x && fold(&[&zero, &x]) == x,
            Property::Subtractive => fold(&[&x, &zero]) == x && fold(&[&x, &x]) == zero,
            Property::StronglyUnital => {
                fold(&[&x, &zero, &zero]) == x && fold(&[&y1, &y1, &y2]) == y2
            }
        }
    }
}

/// Arity of the term operation describing a coalgebra structure of `kind`.
pub fn coalgebra_arity(kind: Property) -> usize {
    if kind == Property::StronglyUnital {
        3
    } else {
        2
    }
}

/// Whether a term operation of arity [`coalgebra_arity`] (given by its table,
/// which is also its vector in the free algebra) is a coalgebra structure.
pub fn is_coalgebra_structure(a: &FiniteAlgebra, kind: Property, table: &[Elem]) -> bool {
    checked_pow(a.size(), coalgebra_arity(kind)) == Some(table.len())
        && fold_equations(a, kind)(table)
}

/// Searches the homomorphisms `F(1) → F(1)+F(1)` (or `F(1) → F(1)+F(1)+F(1)`
/// for strong unitality) for a coalgebra structure. Such a homomorphism is
/// the image of the generator, an element of `F(2)` (resp. `F(3)`); each
/// fold map is substitution of free-algebra elements for the generators, so
/// the fold equations are checked by substituting vectors.
///
/// * unital: `<1|0>·+ = 1 = <0|1>·+`
/// * subtractive: `<1|0>·s = 1`, `<1|1>·s = 0`
/// * strongly unital: `<1|0|0>·p = 1`, `(<1|1>+1)·p = i2` in `F(2)`
pub fn coalgebra_structure(
    a: &FiniteAlgebra,
    kind: Property,
    budget: &Budget,
) -> Result<TermSearch, AlgebraError> {
    let rank = coalgebra_arity(kind);
    let accept = fold_equations(a, kind);
    match search_free(a, rank, budget, accept) {
        Ok(FreeSearch::Found { vector, term }) => Ok(TermSearch::Found(TermOperation {
            arity: rank,
            table: vector,
            term,
        })),
        Ok(FreeSearch::Saturated(_)) => Ok(TermSearch::Absent),
        Ok(FreeSearch::Exceeded { cap }) | Err(AlgebraError::BudgetExceeded { cap }) => {
            Ok(TermSearch::Inconclusive { explored: cap })
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures::*;
    use crate::clone::Outcome;

    fn run(a: &FiniteAlgebra, kind: Property) -> TermSearch {
        coalgebra_structure(a, kind, &Budget::default()).unwrap()
    }

    #[test]
    fn z2_is_a_unital_coalgebra() {
        let TermSearch::Found(op) = run(&z2(), Property::Unital) else {
            panic!()
        };
        assert!(op.is_coherent(&z2()));
        assert_eq!(op.table, vec![0, 1, 1, 0]);
    }

    #[test]
    fn join_is_not_subtractive() {
        assert_eq!(
            run(&join(), Property::Subtractive).outcome(),
            Outcome::Absent
        );
        assert_eq!(run(&join(), Property::Unital).outcome(), Outcome::Found);
    }

    #[test]
    fn subtraction_algebra() {
        let a = subtraction();
        let TermSearch::Found(op) = run(&a, Property::Subtractive) else {
            panic!()
        };
        assert_eq!(op.term.display(a.signature()).to_string(), "sub(x1, x2)");
        assert_eq!(run(&a, Property::Unital).outcome(), Outcome::Absent);
        assert_eq!(run(&a, Property::StronglyUnital).outcome(), Outcome::Absent);
    }

    #[test]
    fn z2_strongly_unital() {
        let TermSearch::Found(op) = run(&z2(), Property::StronglyUnital) else {
            panic!()
        };
        assert!(crate::clone::is_p_table(2, &op.table));
        assert!(is_coalgebra_structure(
            &z2(),
            Property::StronglyUnital,
            &op.table
        ));
        assert!(!is_coalgebra_structure(&z2(), Property::Unital, &op.table));
    }
}
