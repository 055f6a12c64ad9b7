//! snl: a singular-number laboratory.
//!
//! A desk-scale computational model of semifinite tracial von Neumann
//! algebras: finite direct sums of complex matrix factors carrying a
//! weighted trace. On that model the crate computes generalized
//! singular-value functions `mu_z` as exact step functions and
//! mechanically verifies Young-type inequalities in singular values and
//! traces, their equality cases, weak and log majorization, the spectral
//! pre-order, and the doubly stochastic correction available in a single
//! matrix factor, together with a seeded random-campaign harness and a
//! counterexample search for the naive `|xy|` inequality variant.
//!
//! ```
//! use snl::{ConjugatePair, Operator, ToleranceConfig, TracialAlgebra};
//!
//! let algebra = TracialAlgebra::factor(2)?;
//! let x = Operator::diagonal(&algebra, &[4.0, 1.0])?;
//! let y = Operator::diagonal(&algebra, &[2.0, 1.0])?;
//! let pq = ConjugatePair::from_p(2.0)?;
//! let report = snl::inequalities::check_young_sv(&x, &y, &pq, &ToleranceConfig::default())?;
//! assert!(report.passed);
//! # Ok::<(), snl::Error>(())
//! ```

// Validation code uses `!(x > 0.0)` and friends on purpose: the negated
// form also rejects NaN, which `x <= 0.0` would silently accept.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod campaign;
pub mod error;
pub mod gen;
pub mod inequalities;
mod linalg;
pub mod majorization;
pub mod report;
pub mod snumbers;
pub mod spectral;

pub use algebra::{BlockSpec, Operator, ToleranceConfig, TracialAlgebra, C64};
pub use campaign::{CampaignConfig, CampaignResult, CheckName};
pub use error::{Error, Result};
pub use inequalities::{ConjugatePair, ConvexFunction, Dagger};
pub use report::{VerificationReport, Witness};
pub use snumbers::StepFunction;
pub use spectral::{PolarDecomposition, ScalarFunction, SpectralDecomposition};

/// The book chapters double as doc-tests so the guide can never drift from
/// the library.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }

    chapter!(introduction, "../../../book/src/introduction.md");
    chapter!(algebras, "../../../book/src/algebras.md");
    chapter!(spectral, "../../../book/src/spectral.md");
    chapter!(snumbers, "../../../book/src/snumbers.md");
    chapter!(inequalities, "../../../book/src/inequalities.md");
    chapter!(majorization, "../../../book/src/majorization.md");
    chapter!(harness, "../../../book/src/harness.md");
}
