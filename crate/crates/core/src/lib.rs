//! Computational structure theory and harmonic analysis for cohomologically
//! induced representations at desk scale.
//!
//! The crate builds theta-stable parabolics from elliptic parameters with
//! exact rational arithmetic ([`rootdata`], [`parabolic`]), computes
//! bottom-layer K-type data ([`ktype`]), realizes holomorphic discrete
//! series of SU(1,1) as truncated modules with exact Lie-algebra action
//! ([`repmodel`]), and verifies the analytic claims numerically: the
//! generalized spherical kernel is a smooth equivariant section annihilated
//! by the first-order operator on both legs ([`kernel`], [`schmid`]), the
//! integral transform from boundary data lands in the operator's kernel
//! ([`penrose`]), and the induced Hermitian form is positive definite on
//! translated bottom-layer vectors.
//!
//! All tolerances and frozen regression values live in [`thresholds`].

pub mod error;
pub mod kernel;
pub mod ktype;
pub mod linalg;
pub mod parabolic;
pub mod penrose;
pub mod repmodel;
pub mod rootdata;
pub mod sampling;
pub mod schmid;
pub mod thresholds;

pub use error::{Error, Result};
