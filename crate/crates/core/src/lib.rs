//! Exact-arithmetic engine for divisor-class decomposition on a quadratic
//! lattice of hyperbolic signature.
//!
//! Everything is computed over arbitrary-precision rationals; no floating
//! point appears anywhere. The crate is organized as:
//!
//! - [`rat`]: the scalar type, canonical string form, and serde adapters.
//! - [`ratlin`]: dense rational matrices, symmetric solving, inertia.
//! - [`model`]: divisor classes, quadratic spaces, models with prime
//!   divisors and a Kähler class, validation, JSON ingestion, catalog.
//! - [`zariski`]: the decomposition `D = P + N`, a brute-force oracle,
//!   verification of claimed decompositions, and the minimality check.
//! - [`cones`]: cone membership predicates, null-pair classification,
//!   extremal-ray testing, and effective representatives of null classes.
//! - [`classify`]: numerical dimension regimes derived from `q(P)`.

pub mod classify;
pub mod cones;
pub mod model;
pub mod rat;
pub mod ratlin;
mod simplex;
pub mod zariski;

pub use classify::{d_dimension_class, ClassReport, Regime};
pub use cones::{
    effective_null_representative, extremal_ray_test, in_closed_positive_cone, in_dual_bk_cone,
    in_positive_cone, null_pair_classify, ConeVerdict, ConesError, ExtremalityResult,
    FailedCondition, NullPairClass,
};
pub use model::{
    catalog_model, load_model, parse_class, parse_model, serialize_model, validate_model,
    DivisorClass, EffectiveExpression, HKModel, ModelError, Prime, QuadraticSpace, Violation,
    CATALOG_NAMES,
};
pub use rat::{format_rat, parse_rat, Rat};
pub use ratlin::{Inertia, RatMatrix, RatlinError};
pub use zariski::{
    decompose, decompose_bruteforce, decompose_trace, minimality_check, verify, Decomposition,
    Diagnostic, VerifyReport, ZariskiError,
};
