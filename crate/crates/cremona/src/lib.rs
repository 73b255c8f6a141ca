//! Exact birational geometry over QQ and finite fields: rational maps given
//! by tuples of rational functions, their composition and inversion
//! certificates, word-problem evaluation over generator systems, reduction
//! mod good primes, and finite permutation models measured in normalized
//! Hamming distance.

pub mod birat;
pub mod chunk;
pub mod error;
pub mod field;
pub mod poly;
pub mod ratfun;
pub mod sofic;
pub mod specialize;
pub mod syntax;
pub mod word;

pub use birat::{certify_inverse, BirationalTuple, CremonaElement};
pub use chunk::{
    chunk_of_elements, chunk_of_subtable, cyclic_table, folner_to_sofic, injective_rep_search,
    is_eps_morphism, is_expansive, parse_chunk, sigma_upper, validate_chunk, Chunk, FiniteMap,
    FolnerRecord, FolnerWitness, DEFAULT_SEARCH_CAP,
};
pub use error::{Error, Result, Span};
pub use field::{FieldSpec, Scalar};
pub use poly::{Monomial, Polynomial};
pub use ratfun::RationalFunction;
pub use sofic::{
    build_perm, build_perm_seeded, defect_report, hamming, profile_points, singular_count,
    DefectReport, HammingFrac, PermutationRep, PointTable, ProfileCertificate, ProfileSummary,
};
pub use specialize::{
    choose_prime, compute_bad_primes, make_plan, reduce_tuple, specialize_chunk,
    SpecializationPlan,
};
pub use syntax::{parse_map_expr, render_tuple};
pub use word::{
    evaluate_word, is_identity_word, parse_word, semigroup_words_equal, GeneratorSystem, GroupWord,
};
