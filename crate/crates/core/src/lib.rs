//! Exact arithmetic for infinite-order differential operators on
//! non-Archimedean polydiscs.
//!
//! Every norm is carried as an exact valuation in `ℚ ∪ {+∞}`, so each
//! estimate about operators, symbols and the counterexample family is an
//! exact rational inequality. See the guide in `book/` for a tour.

pub mod affinoid;
pub mod counterexample;
pub mod error;
pub mod fuzz;
pub mod operator;
pub mod rapid;
pub mod scalar;
pub mod text;

pub use error::{Error, Result};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction_chapter {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/valuations.md")]
pub mod valuations_chapter {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/polynomials.md")]
pub mod polynomials_chapter {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/operators.md")]
pub mod operators_chapter {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/symbols.md")]
pub mod symbols_chapter {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/norms.md")]
pub mod norms_chapter {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/rapid-decrease.md")]
pub mod rapid_decrease_chapter {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/counterexample.md")]
pub mod counterexample_chapter {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli_chapter {}

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
pub mod readme {}
