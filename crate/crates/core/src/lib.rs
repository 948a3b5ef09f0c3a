//! Regularity analysis for semigroups generated by diagonalizable operators.
//!
//! The crate takes a symbolic description of an operator spectrum (finite
//! points, asymptotic eigenvalue families, solid regions of the complex
//! plane) and answers two kinds of questions about the semigroup `e^{tA}`:
//!
//! * **Classification.** Does `A` generate a strongly continuous semigroup,
//!   and if so, is the semigroup immediately norm continuous, eventually or
//!   immediately differentiable, Gevrey ultradifferentiable of a given order,
//!   analytic, or compact? Verdicts come with witnesses (half-plane bounds,
//!   logarithmic or power region parameters, onset times) or concrete
//!   counterexamples, and are decided symbolically from the spectral
//!   geometry, never by sampling alone.
//! * **Verification.** Finite truncations of the operator (diagonal, or
//!   twisted by a seeded similarity with prescribed condition number) are
//!   exercised through a Borel function calculus, and numerical probes check
//!   that norm-continuity moduli, derivative growth, singular value tails,
//!   growth bounds, and spectral mapping behave exactly as the classifier
//!   predicts.
//!
//! ```
//! use semiflow_core::spectrum::SpectrumSpec;
//! use semiflow_core::classifier;
//!
//! let spec = SpectrumSpec::parse(
//!     r#"{"label":"line","tails":[{"re":{"power":{"c":-1.0,"p":1.0}},
//!         "im":{"power":{"c":1.0,"p":1.0}},"n0":1,"mult":1}]}"#,
//! )
//! .unwrap();
//! let verdict = classifier::classify_generation(&spec);
//! assert!(verdict.is_yes());
//! ```

pub mod asymptotics;
pub mod classifier;
pub mod corpus;
pub mod opcalc;
pub mod regions;
pub mod spectrum;
pub mod verifier;

pub use classifier::{RegularityReport, Tri, Verdict, VerdictKind};
pub use num_complex::Complex64;
pub use spectrum::{GrowthTerm, Multiplicity, RegionSpec, SpectrumSpec, TailFamily};
