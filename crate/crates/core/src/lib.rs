//! Exact-arithmetic engine for Weierstrass/formal-group expansions of CM
//! elliptic curves over a real quadratic coefficient field, with a p-adic
//! verifier for the weight-2 Eisenstein value at good primes (ordinary and
//! supersingular) and a complex-analytic cross-check.

pub mod analytic;
pub mod eisenstein;
pub mod exactnum;
pub mod series;
pub mod weierstrass;

pub use exactnum::{ExactError, PlaceContext, QuadField, QuadRat};
pub use series::TruncatedSeries;
pub use weierstrass::CurveModel;
