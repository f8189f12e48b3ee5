//! Skew PBW extensions over finite rings: standard monomials under deglex,
//! normal-form arithmetic by relation rewriting, the closed-form expansion of
//! `x^α·r`, and an overlap-based confluence check.

mod closed;
mod confluence;
mod engine;
pub mod examples;
mod ext;
mod monomial;
mod poly;

pub use closed::pow_alpha_times_r;
pub use confluence::{check_pbw_confluence, ConfluenceReport, Divergence, Overlap};
pub use ext::{ExtError, ExtOptions, Extension, QuadRelation};
pub use monomial::{monomials_up_to, Monomial, MAX_VARS};
pub use poly::{
    count_polys, enumerate_polys, eval_poly, parse_poly, poly_from_code, random_poly, LeadingData, SkewPoly,
};

/// Monomial order tag recorded in reports.
pub const ORDER_TAG: &str = "deglex";
