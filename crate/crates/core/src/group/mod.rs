//! Elements of free products of free abelian groups: normal forms, the word
//! problem, cyclic reduction, classification and conjugacy criteria.

mod conjugacy;
mod element;
mod spec;

pub use conjugacy::{
    classify, cyclic_reduce, free_product_conjugacy, peripheral_csp, ClassKind, Classification,
};
pub use element::{parse_word, DisplayNf, Exponents, Letter, NormalForm, Syllable, Word};
pub use spec::{Factor, GenId, GroupSpec};

/// Parses and normalizes in one step.
pub fn parse_element(text: &str, spec: &GroupSpec) -> crate::Result<NormalForm> {
    Ok(parse_word(text, spec)?.normalize(spec))
}
