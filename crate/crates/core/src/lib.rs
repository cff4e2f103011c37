//! Exact symbolic cohomology of blow-ups.
//!
//! The crate models the cohomology rings around the blow-up `M̃` of a
//! manifold `M` along a submanifold `N` with normal bundle `E`. It evaluates
//! the total Chern class of `M̃` exactly, or its total Stiefel-Whitney class
//! with mod 2 coefficients.

pub mod blowup_ring;
pub mod cli;
pub mod error;
pub mod graded_poly;
pub mod identity_suite;
pub mod linalg;
pub mod manifold;
pub mod presets;
pub mod proj_bundle;
pub mod quotient_ring;
pub mod sampling;
pub mod scenario;

pub use blowup_ring::{BlowupContext, BlowupElement};
pub use error::{Error, Result};
pub use graded_poly::{CoefficientMode, Generator, Monomial, Poly};
pub use identity_suite::CheckReport;
pub use manifold::{Ambient, MClass, ManifoldModel, ModelKind, Submanifold};
pub use proj_bundle::ProjectiveBundleRing;
pub use quotient_ring::{RewriteRule, RingElement, RingPresentation};
pub use scenario::{parse_scenario, Scenario};
