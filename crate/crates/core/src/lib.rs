pub mod convexity_lab;
pub mod error;
pub mod homopoly;
pub mod index_search;
pub mod linalg;
pub mod norms;
pub mod numrange;
pub mod polarize;
pub mod scalar;
pub mod search;
pub mod vec2;

pub use error::{Error, Result};
pub use homopoly::{
    embed_lp, example8_poly, example9_poly, lp_zero_poly, q_definite, Definiteness, EmbeddedPoly,
    ScalarHomoPoly, VectorHomoPoly,
};
pub use norms::{Classification, DualPair, NormKind, NormSpec, PolyhedralKind};
pub use numrange::{
    embedded_pairing, interval_check, radius, radius_grid, range_samples, thm_norming, verify_zero,
    IntervalCheck, RadiusEstimate, ZeroCheck,
};
pub use polarize::{polarize, quartic_generator, tangent_poly, SymMultiForm};
pub use scalar::Real;
pub use vec2::Vec2;
pub use index_search::{
    estimate_index, min_zero_degree, monotonicity_report, objective_value, uniqueness_check, Budget,
    IndexEstimate, MonotonicityReport, ZeroDegree,
};
pub use convexity_lab::{
    beta_classify, cone_index, eps_counterexample, hessian_grid, log_convexity_profile, midpoint_test,
    quartic_root, BetaClassification, BetaRoute, ConvexityReport, EpsWitness, Profile, ProfileRow,
    Verdict, Witness,
};

pub type Vec2F64 = Vec2<f64>;
pub type NormSpecF64 = NormSpec<f64>;
pub type ScalarPolyF64 = ScalarHomoPoly<f64>;
pub type VectorPolyF64 = VectorHomoPoly<f64>;
pub type RadiusEstimateF64 = RadiusEstimate<f64>;
pub type IndexEstimateF64 = IndexEstimate<f64>;
pub type ConvexityReportF64 = ConvexityReport<f64>;

pub type Vec2F32 = Vec2<f32>;
pub type NormSpecF32 = NormSpec<f32>;
pub type ScalarPolyF32 = ScalarHomoPoly<f32>;
pub type VectorPolyF32 = VectorHomoPoly<f32>;
pub type RadiusEstimateF32 = RadiusEstimate<f32>;
pub type IndexEstimateF32 = IndexEstimate<f32>;
pub type ConvexityReportF32 = ConvexityReport<f32>;

/// Exact coefficient arithmetic (ring operations and `q_poly` only).
pub type ScalarPolyRational = ScalarHomoPoly<num_rational::Rational64>;
pub type VectorPolyRational = VectorHomoPoly<num_rational::Rational64>;
