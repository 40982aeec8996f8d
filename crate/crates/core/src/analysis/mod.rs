pub mod embedding;
pub mod identity;
pub mod verify;

pub use embedding::{embedding_constant, extract_embedding, EmbeddingCheck, EmbeddingError, EmbeddingSpec, EmbeddingVector};
pub use identity::{
    builtin_identity, identity_check, orbit_forms, rule_to_identity, IdentityError, IdentityReport, IdentityTerm,
    MultiPoly, SymmetricIdentity, BUILTIN_IDENTITIES,
};
pub use verify::{
    sharpness, verify_degree_exactness, verify_exactness, verify_index_exactness, verify_invariants,
    ExactnessReport, InvariantReport, SharpnessReport, SurdSum, VerifyError, Witness,
};
