//! Hausdorff operators over the unit disc.
//!
//! Holomorphic functions on the disc are carried as truncated Taylor series
//! ([`TaylorFunction`]). An operator averages Möbius-composed copies of its
//! argument against a kernel and a measure:
//!
//! ```text
//! (H f)(z) = ∫ K(w) f(φ_w(z)) dμ(w),     φ_w(z) = (w - z) / (1 - conj(w) z)
//! ```
//!
//! The crate provides the series engine ([`holo`]), the involutive
//! automorphisms φ_w ([`mobius`]), kernels, measures and disc quadrature
//! ([`measure`]), Bloch / Bergman / Hardy norms ([`norms`]), the operator
//! itself together with its ε-family and dual coefficient sequences
//! ([`hausdorff`]), and a harness that compares empirical operator norms with
//! the known analytic bounds ([`verify`]).

pub mod error;
mod fft;
pub mod hausdorff;
pub mod holo;
pub mod measure;
pub mod mobius;
pub mod norms;
pub mod scalar;
mod sum;
pub mod verify;

pub use error::{Error, Result};
pub use hausdorff::{
    apply_discrete, truncate_weights, CoefficientSequence, ContourMethod, DecayReport, HausdorffOperator,
    OperatorMatrix,
};
pub use holo::{from_boundary_samples, BoundarySamples, TaylorFunction};
pub use measure::{
    build_quadrature, integrability_diagnostic, integrate, DiscPoint, Diagnostic, Kernel,
    KernelSpec, MeasureSpec, QuadratureOptions, QuadratureRule,
};
pub use mobius::{bergman_distance, compose, ComposeMethod, ComposeParams, MobiusParam};
pub use verify::{check_bound, empirical_opnorm, BoundReport, SweepReport};
pub use norms::{
    bergman_norm, bloch_norm, bloch_seminorm, hardy_norm, hardy_profile, NormSettings, SpaceNorm, SpaceSpec,
};

pub use num_complex::Complex64;
