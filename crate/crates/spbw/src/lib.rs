//! Exact arithmetic for skew PBW extensions `A = σ(R)⟨x₁,…,xₙ⟩` over finite
//! coefficient rings, together with weak annihilators, nilpotent associated
//! primes, and brute-force verification harnesses for the structural results.
//!
//! Module map:
//! - [`finring`]: finite coefficient rings with table arithmetic and nilpotent data.
//! - [`ringmaps`]: endomorphisms, σ-derivations and compatibility checks.
//! - [`spbwalg`]: the extension itself, normal forms and confluence.
//! - [`nilweak`]: nilpotency in `A`, weak annihilators and theorem harnesses.
//! - [`assocprimes`]: right ideals, quasi-primes, `NAss` and good polynomials.
//! - [`shell`]: presentation files, presets, CLI and JSON reports.

pub mod assocprimes;
pub mod expr;
pub mod finring;
pub mod nilweak;
pub mod par;
pub mod ringmaps;
pub mod shell;
pub mod spbwalg;
