//! Matrix representations of the q-deformed Lorentz algebra, with the
//! defining relations checked as numerical residuals.
//!
//! ```
//! use qlorentz::matrep::{build_generators, ConventionId};
//! use qlorentz::qarith::{CScalar, Deformation, HalfInt};
//! use qlorentz::repcore::RepLabel;
//! use qlorentz::verify::{check_lorentz_relations, Tolerances};
//!
//! let label = RepLabel::new(HalfInt::HALF, CScalar::new(1.5, 0.0), Deformation::new(1.3)?)?;
//! let gens = build_generators(&label, HalfInt::HALF, ConventionId::default())?;
//! assert_eq!(gens.basis.dim(), 2);
//! assert!(check_lorentz_relations(&gens, &Tolerances::default()).all_pass());
//! # Ok::<(), qlorentz::error::Error>(())
//! ```
//!
//! The guide in `book/` walks through each module.

pub mod chiral;
pub mod cli;
pub mod error;
pub mod matrep;
pub mod qarith;
pub mod repcore;
pub mod report;
pub mod verify;

pub use error::{Error, Result};

// Compiles the book's snippets as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/q-numbers.md")]
    mod q_numbers {}
    #[doc = include_str!("../../../book/src/representations.md")]
    mod representations {}
    #[doc = include_str!("../../../book/src/matrices.md")]
    mod matrices {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/chiral.md")]
    mod chiral {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
