//! Exact arithmetic for superelliptic curves `y^n = f(x)` over Q: genus
//! computation, a catalogue of genus-4 automorphism loci, model
//! classification, height reduction, and bounded enumeration.

pub mod classify;
pub mod curve;
pub mod enumerate;
pub mod error;
pub mod heights;
pub mod hurwitz;
pub mod loci;
pub mod poly;

pub use classify::{classify, ClassifiedMember, ClassifyOutcome, MatchQuality};
pub use curve::{genus_closed_form, SuperellipticCurve};
pub use enumerate::{
    canonical_key, enumerate, merge_records, read_database, write_database, DatabaseMeta,
    EnumRecord, EnumerationParams, EnumerationStats,
};
pub use error::{Error, Result};
pub use heights::{
    curve_height, poly_height, projective_height, reduce_model, ModelMove, ReductionReport,
};
pub use hurwitz::{
    hurwitz_bound, locus_dimension, minimize_rh_expression, rh_expression, rh_genus, CoverSignature,
};
pub use poly::{mobius_transform, IntPoly, MobiusMap, SquarefreeFactor};
