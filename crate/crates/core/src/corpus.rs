//! Inputs bundled with the tool.

use crate::algebra::FiniteAlgebra;
use crate::fincat::FiniteCategory;
use crate::format::{parse_algebra, parse_category};
use crate::varcat::{build_model_category, FragmentOptions, VarcatError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusFile {
    pub file: &'static str,
    pub text: &'static str,
}

macro_rules! bundled {
    ($($file:literal),* $(,)?) => {
        [$(CorpusFile { file: $file, text: include_str!(concat!("../corpus/", $file)) }),*]
    };
}

pub const ALGEBRA_FILES: [CorpusFile; 6] = bundled!(
    "z2.alg",
    "z3.alg",
    "s3.alg",
    "join.alg",
    "subtraction.alg",
    "pointed-set.alg",
);

pub const CATEGORY_FILES: [CorpusFile; 2] = bundled!("point.cat", "retract.cat");

pub fn files() -> impl Iterator<Item = CorpusFile> {
    ALGEBRA_FILES.into_iter().chain(CATEGORY_FILES)
}

pub fn find(file: &str) -> Option<CorpusFile> {
    files().find(|f| {
        f.file == file
            || f.file
                .rsplit_once('.')
                .is_some_and(|(stem, _)| stem == file)
    })
}

pub fn algebras() -> Vec<FiniteAlgebra> {
    ALGEBRA_FILES
        .iter()
        .map(|f| parse_algebra(f.text).unwrap_or_else(|e| panic!("bundled {}: {e}", f.file)))
        .collect()
}

/// The handcrafted categories.
pub fn categories() -> Vec<FiniteCategory> {
    CATEGORY_FILES
        .iter()
        .map(|f| parse_category(f.text).unwrap_or_else(|e| panic!("bundled {}: {e}", f.file)))
        .collect()
}

/// Largest carrier for which [`model_categories`] builds a fragment.
pub const MODEL_FRAGMENT_MAX_CARRIER: usize = 3;

/// Model-category fragments of the small bundled algebras, named
/// `models(<algebra>)`, with products, subalgebras and surjections designated.
pub fn model_categories(options: FragmentOptions) -> Result<Vec<FiniteCategory>, VarcatError> {
    algebras()
        .into_iter()
        .filter(|a| a.size() <= MODEL_FRAGMENT_MAX_CARRIER)
        .map(|a| {
            let name = format!("models({})", a.name());
            build_model_category(&[a], options).map(|f| f.category.with_name(name))
        })
        .collect()
}
