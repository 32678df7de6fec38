use serde::{Deserialize, Serialize};

use super::{
    build_free_subcategory, build_model_category, check_concrete, coalgebra_structure,
    FragmentBounds, FragmentOptions, DEFAULT_MAX_MORPHISMS,
};
use crate::algebra::{Budget, FiniteAlgebra};
use crate::clone::{find_jonsson_tarski, find_p, find_subtraction, Outcome, TermSearch};
use crate::fincat::{check_property_via_coproducts, Property, Witness};

/// How the model-fragment leg is read: a counterexample on the fragment
/// refutes the property for the variety, while a pass only shows that the
/// fragment agrees with a positive answer and never decides the property.
pub const FRAGMENT_ROLE: &str = "consistency-probe";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossValidationOptions {
    pub budget: Budget,
    /// Largest free algebra in the free subcategory.
    pub free_rank: usize,
    pub max_morphisms: usize,
    pub fragment: FragmentOptions,
}

impl Default for CrossValidationOptions {
    fn default() -> Self {
        Self {
            budget: Budget::default(),
            free_rank: 3,
            max_morphisms: DEFAULT_MAX_MORPHISMS,
            fragment: FragmentOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyRow {
    pub property: Property,
    /// Clone search for the characteristic term.
    pub term: Outcome,
    pub term_witness: Option<String>,
    /// Coalgebra structure on the free algebra on one generator.
    pub coalgebra: Outcome,
    pub coalgebra_witness: Option<String>,
    /// Coproduct criterion on the free subcategory.
    pub free_subcategory: Outcome,
    pub free_witness: Option<Witness>,
    /// Concrete check on the model fragment.
    pub fragment: Outcome,
    pub fragment_witness: Option<Witness>,
    /// Combined answer for the variety.
    pub verdict: Outcome,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossValidationReport {
    pub algebra: String,
    pub options: CrossValidationOptions,
    pub fragment_role: String,
    pub fragment_bounds: Option<FragmentBounds>,
    pub free_bounds: Option<FragmentBounds>,
    pub rows: Vec<PropertyRow>,
    pub notes: Vec<String>,
    pub consistent: bool,
}

impl CrossValidationReport {
    pub fn row(&self, property: Property) -> &PropertyRow {
        self.rows
            .iter()
            .find(|r| r.property == property)
            .expect("every property has a row")
    }
}

type Leg = (Outcome, Option<String>);

/// Number of generators in the largest coproduct the coproduct criterion
/// inspects. Below it the free subcategory can only refute.
pub fn required_free_rank(property: Property) -> usize {
    match property {
        Property::StronglyUnital => 3,
        _ => 2,
    }
}

fn term_leg(
    a: &FiniteAlgebra,
    result: Result<TermSearch, String>,
    notes: &mut Vec<String>,
    what: &str,
) -> Leg {
    match result {
        Ok(TermSearch::Found(op)) => (
            Outcome::Found,
            Some(op.term.display(a.signature()).to_string()),
        ),
        Ok(other) => (other.outcome(), None),
        Err(e) => {
            notes.push(format!("{what}: {e}"));
            (Outcome::Inconclusive, None)
        }
    }
}

/// Agreement rule: the term, coalgebra and free-subcategory legs decide the
/// property and must agree when conclusive; a fragment failure must be
/// matched by negative answers only.
fn consistent(decisive: &[Outcome], fragment: Outcome) -> bool {
    let truths: Vec<bool> = decisive.iter().filter_map(|o| o.truth()).collect();
    let agree = truths.windows(2).all(|w| w[0] == w[1]);
    let probe = fragment != Outcome::Fails || truths.iter().all(|&t| !t);
    agree && probe
}

fn combined(decisive: &[Outcome], fragment: Outcome) -> Outcome {
    match decisive.iter().find_map(|o| o.truth()) {
        Some(true) => Outcome::Holds,
        Some(false) => Outcome::Fails,
        None if fragment == Outcome::Fails => Outcome::Fails,
        None => Outcome::Inconclusive,
    }
}

/// Runs every route for all three properties and compares the answers.
pub fn cross_validate(
    a: &FiniteAlgebra,
    options: &CrossValidationOptions,
) -> CrossValidationReport {
    let budget = options.budget;
    let (terms, coalgebras, free, models) = std::thread::scope(|s| {
        let terms = s.spawn(|| {
            [
                find_jonsson_tarski(a, &budget),
                find_subtraction(a, &budget),
                find_p(a, &budget),
            ]
            .map(|r| r.map_err(|e| e.to_string()))
        });
        let coalgebras = s.spawn(|| {
            Property::ALL.map(|p| coalgebra_structure(a, p, &budget).map_err(|e| e.to_string()))
        });
        let free = s.spawn(|| {
            build_free_subcategory(a, options.free_rank, &budget, options.max_morphisms).map(|f| {
                let verdicts = Property::ALL.map(|p| check_property_via_coproducts(&f.category, p));
                (f.bounds, verdicts)
            })
        });
        let models = s.spawn(|| {
            build_model_category(std::slice::from_ref(a), options.fragment).map(|f| {
                let verdicts = Property::ALL.map(|p| check_concrete(&f, p));
                (f.bounds, verdicts)
            })
        });
        (
            terms.join().expect("term search"),
            coalgebras.join().expect("coalgebra search"),
            free.join().expect("free subcategory"),
            models.join().expect("model fragment"),
        )
    });

    let mut notes = Vec::new();
    let (free_bounds, free_verdicts) = match free {
        Ok((bounds, verdicts)) => (Some(bounds), Some(verdicts)),
        Err(e) => {
            notes.push(format!("free subcategory not built: {e}"));
            (None, None)
        }
    };
    let (fragment_bounds, fragment_verdicts) = match models {
        Ok((bounds, verdicts)) => (Some(bounds), Some(verdicts)),
        Err(e) => {
            notes.push(format!("model fragment not built: {e}"));
            (None, None)
        }
    };
    let mut rows = Vec::new();
    for (i, (term, coalgebra)) in terms.into_iter().zip(coalgebras).enumerate() {
        let property = Property::ALL[i];
        let (term, term_witness) =
            term_leg(a, term, &mut notes, &format!("{property} term search"));
        let (coalgebra, coalgebra_witness) = term_leg(
            a,
            coalgebra,
            &mut notes,
            &format!("{property} coalgebra search"),
        );
        let (free_subcategory, free_witness) = match &free_verdicts {
            Some(v) => match &v[i] {
                Ok(verdict)
                    if verdict.outcome == Outcome::Holds
                        && options.free_rank < required_free_rank(property) =>
                {
                    notes.push(format!(
                        "{property} on the free subcategory: rank {} is below {}, a pass is not decisive",
                        options.free_rank,
                        required_free_rank(property)
                    ));
                    (Outcome::Inconclusive, None)
                }
                Ok(verdict) => (verdict.outcome, verdict.witness.clone()),
                Err(e) => {
                    notes.push(format!("{property} on the free subcategory: {e}"));
                    (Outcome::Inconclusive, None)
                }
            },
            None => (Outcome::Inconclusive, None),
        };
        let (fragment, fragment_witness) = match &fragment_verdicts {
            Some(v) => (v[i].outcome, v[i].witness.clone()),
            None => (Outcome::Inconclusive, None),
        };
        let decisive = [term, coalgebra, free_subcategory];
        rows.push(PropertyRow {
            property,
            term,
            term_witness,
            coalgebra,
            coalgebra_witness,
            free_subcategory,
            free_witness,
            fragment,
            fragment_witness,
            verdict: combined(&decisive, fragment),
            consistent: consistent(&decisive, fragment),
        });
    }
    CrossValidationReport {
        algebra: a.name().to_string(),
        options: *options,
        fragment_role: FRAGMENT_ROLE.to_string(),
        fragment_bounds,
        free_bounds,
        consistent: rows.iter().all(|r| r.consistent),
        rows,
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures::*;

    fn matrix(a: &FiniteAlgebra) -> [Outcome; 3] {
        let report = cross_validate(a, &CrossValidationOptions::default());
        assert!(report.consistent, "{report:#?}");
        Property::ALL.map(|p| report.row(p).verdict)
    }

    #[test]
    fn property_matrix() {
        use Outcome::{Fails as N, Holds as Y};
        assert_eq!(matrix(&z2()), [Y, Y, Y]);
        assert_eq!(matrix(&join()), [Y, N, N]);
        assert_eq!(matrix(&subtraction()), [N, Y, N]);
        assert_eq!(matrix(&pointed_set()), [N, N, N]);
    }

    #[test]
    fn z2_all_legs_positive() {
        let report = cross_validate(&z2(), &CrossValidationOptions::default());
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
        assert_eq!(report.fragment_role, "consistency-probe");
    }

    #[test]
    fn consistency_rule() {
        use Outcome::*;
        assert!(consistent(&[Absent, Absent, Fails], Holds));
        assert!(consistent(&[Found, Inconclusive, Holds], Holds));
        assert!(!consistent(&[Found, Absent, Holds], Holds));
        assert!(!consistent(&[Found, Found, Holds], Fails));
        assert!(consistent(
            &[Inconclusive, Inconclusive, Inconclusive],
            Fails
        ));
    }
}
