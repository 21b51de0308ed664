//! Conjugacy search in free products of free abelian groups, viewed as
//! relatively hyperbolic groups, together with the path geometry of their
//! Cayley graphs and coned-off Cayley graphs.

pub mod cayley;
pub mod constants;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod group;
pub mod solver;

pub use cayley::{ball_rel, ball_x, dist_rel, dist_x, geodesic_rel, geodesic_x, Ball, EdgeLabel, Metric, Path};
pub use constants::{
    bound_hyperbolic, bound_parabolic, bound_relative, measure, ExtNat, HypConstants, MeasureParams, Rational,
};
pub use error::{Error, Result};
pub use experiment::{experiment_growth, ExperimentParams, ExperimentRecord, ExperimentReport};
pub use geometry::{ConjugacyDiagram, LemmaReport, SymmetricPair};
pub use solver::{
    build_diagram, check_component_bounds, check_lemma_middle, oracle_min_conjugator, parabolic_csp, solve_csp,
    verify_conjugation, CspOutcome, NotConjugateReason, Searcher,
};
pub use group::{
    classify, cyclic_reduce, free_product_conjugacy, parse_element, parse_word, peripheral_csp,
    ClassKind, Classification, Factor, GenId, GroupSpec, Letter, NormalForm, Syllable, Word,
};

/// Default ceiling on enumeration radii (balls, conjugator searches).
pub const DEFAULT_ENUMERATION_CAP: usize = 12;
