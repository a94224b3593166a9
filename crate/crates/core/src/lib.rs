//! Exact-arithmetic engine for truncated bivariate q-series, plus a
//! high-precision complex evaluator for nonholomorphic completions.
//!
//! The crate is organized in four layers:
//!
//! - [`series`]: the ring of truncated Laurent series in `q` whose
//!   coefficients are finite Laurent polynomials in `ζ` over exact
//!   rationals, with Pochhammer / q-binomial constructors and window
//!   comparison.
//! - [`catalog`]: constructors for the named series: the order-three
//!   mock thetas ν, φ, ρ, basic hypergeometric ₁φ₁ / ₂φ₁, Fine's
//!   function, the universal mock theta 𝓡, Choi's 𝒰, the depth-two
//!   double sums, and the Lovejoy–Osburn double sums M10 / M17.
//! - [`verify`]: a registry of q-hypergeometric identities with exact
//!   window verification and first-mismatch reporting.
//! - [`numerics`]: arbitrary-precision complex evaluation of the
//!   completion apparatus (E, R, μ, 𝓜, 𝒰, 𝒞) and numeric twins of the
//!   symbolic series.

pub mod catalog;
pub mod numerics;
pub mod rational;
pub mod series;
pub mod verify;

pub use rational::Rational;
pub use series::{QSeries, TruncationPolicy, WindowCompare, ZetaLaurent};
