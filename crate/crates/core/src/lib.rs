//! Coxeter diagrams: classification of special subgroups, Moussong's
//! hyperbolicity criterion with explicit witnesses, and enumeration of
//! diagrams up to isomorphism for exhaustive verification campaigns.
//!
//! ```
//! use coxdiag::{classify, is_hyperbolic, CoxeterLabel, CoxeterSystem};
//!
//! let triangle = CoxeterSystem::cycle(&[CoxeterLabel::THREE; 3]);
//! assert_eq!(classify(&triangle)[0].1.name().as_deref(), Some("~A2"));
//! assert!(!is_hyperbolic(&triangle).is_hyperbolic());
//! ```

pub mod canon;
pub mod classify;
pub mod enumerate;
pub mod error;
pub mod experiments;
pub mod field;
pub mod gram;
pub mod hyperbolic;
pub mod system;
pub mod threshold;

pub use canon::{
    canonical_code, canonical_form, canonical_representative, CanonicalCode, MAX_CANON_RANK,
};
pub use classify::{
    classify, classify_irreducible, crystallographic_table, has_affine_parabolic, is_k_spherical,
    is_spherical, max_spherical_rank, AffineType, SphericalType, TypeClass,
};
pub use enumerate::MAX_MINIMAL_INFINITE_RANK;
pub use enumerate::{
    enumerate_diagrams, enumerate_levels, enumerate_minimal_infinite, enumerate_quasi_minimal,
    minimal_infinite_subsets, with_jobs, Census, ClassRecord, EnumFilter, LabelSet,
};
pub use error::{CoreError, Result};
pub use experiments::{
    verify_engine_agreement, verify_lemma_dynkin, verify_size_bounds, AgreementScope, Claim,
    Counterexample, LemmaMode, Report, Verdict, MAX_AGREEMENT_RANK,
};
pub use field::Biquadratic;
pub use gram::{gram_matrix, signature, GramMatrix, Signature};
pub use hyperbolic::{
    affine_from_commuting, is_hyperbolic, lemma_dynkin_check, AffineConstruction, ConstructionCase,
    HyperbolicityVerdict, LemmaCheck, ZxZWitness,
};
pub use system::{
    CoxeterLabel, CoxeterSystem, ValidationReport, VertexSubset, Violation, ViolationKind, MAX_RANK,
};
pub use threshold::{
    kazhdan_threshold, kazhdan_threshold_for_rank, prime_power, Certainty, KazhdanThreshold,
};
