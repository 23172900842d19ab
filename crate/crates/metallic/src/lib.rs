//! Polynomial structure tensors on flat model spaces.
//!
//! This crate constructs and verifies *metallic* structures — endomorphism
//! fields `J` satisfying `J² = pJ + qI` for positive integers `p`, `q` —
//! together with the neighbouring families they degenerate to or induce:
//! Golden structures (`P² = P + I`), almost product structures (`φ² = I`),
//! almost complex structures (`J² = −I`), and the odd-dimensional almost
//! contact / almost para-contact metric structures.
//!
//! The crate is organised in layers:
//!
//! * [`exact`] — arithmetic in real quadratic fields `Q(√d)` with exact
//!   rational coefficients, home of the metallic means `σ_{p,q}`.
//! * [`matrix`] — dense exact matrices over those fields: kernels, ranks,
//!   determinants, inverses, inertia.
//! * [`structures`] — canonical structure tensors on `R^n`, exact identity
//!   verification, metric compatibility, projectors and eigenbundles.
//! * [`maps`] — smooth maps between model spaces, pushforwards, and the
//!   intertwining check `F_* ∘ J₁ = J₂ ∘ F_*` that defines metallic maps.
//! * [`variation`] — second fundamental form, tension field, harmonicity
//!   and total geodesy by finite differences, plus an exact certificate
//!   for when an affine metallic deformation stays harmonic.
//! * [`constancy`] — the classification of metallic maps into the other
//!   families: rational obstruction invariants, a floating-point
//!   intertwiner-nullspace oracle, and exact nonconstant witnesses for
//!   the exceptional parameter pairs.
//!
//! Everything that can be decided in exact arithmetic is; floating point
//! appears only where derivatives of genuinely nonlinear data are needed,
//! and every float verdict that matters is cross-checked against an exact
//! or independently derived computation in the test suite.

pub mod constancy;
pub mod exact;
pub mod maps;
pub mod matrix;
mod numeric;
pub mod structures;
pub mod variation;

pub use constancy::{
    ClassificationResult, ConstancyError, ConstancyVerdict, Direction, Obstruction, TargetFamily,
};
pub use exact::{ExactError, QuadExt, Rational};
pub use maps::{MapError, SmoothMap};
pub use matrix::ExactMatrix;
pub use structures::{StructureError, StructureKind, StructureSpec};
pub use variation::{MetricField, VariationError};
