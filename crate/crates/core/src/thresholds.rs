//! Centralized tolerances and frozen regression values used by the
//! verification suites. Exact-arithmetic checks carry no tolerance at all;
//! everything here concerns floating-point paths.

/// Scale constant C in the finite-difference residual bound C h^2 for the
/// first-order operator on kernel sections. The observed coefficient on
/// the standard grid (su11, k = 4, N = 64) is 0.648; one order of
/// magnitude of headroom keeps the bound sharp enough to expose loss of
/// quadratic convergence.
pub const SCHMID_RESIDUAL_SCALE: f64 = 10.0;

/// Window for the residual ratio under halving h; quadratic convergence
/// means a factor of 4.
pub const REFINEMENT_RATIO_LO: f64 = 3.5;
pub const REFINEMENT_RATIO_HI: f64 = 4.5;

/// A generic non-harmonic section must exceed the kernel-section residual
/// by at least this factor.
pub const CONTROL_SEPARATION: f64 = 1e3;

/// Exact-derivative assembly of the operator under orthonormal re-basing
/// of p: pure rounding, bounded well below this.
pub const BASIS_INDEPENDENCE: f64 = 1e-8;

/// Commutator and skew-adjointness residuals of the truncated module on
/// its interior block.
pub const MODEL_SOUNDNESS: f64 = 1e-10;

/// Two-sided translation law and Hermitian symmetry of the kernel.
pub const KERNEL_DIAG_INVARIANCE: f64 = 1e-10;
pub const KERNEL_SPHERICALITY: f64 = 1e-8;
pub const KERNEL_HERMITIAN: f64 = 1e-8;

/// Kernel against the independent doubled-truncation series oracle.
pub const FLENSTED_JENSEN: f64 = 1e-8;

/// Gram matrices: Hermitian-symmetry residual and the semidefiniteness
/// slack allowed for repeated points.
pub const GRAM_HERMITIAN: f64 = 1e-10;
pub const GRAM_PSD_SLACK: f64 = -1e-9;

/// Minimum Gram eigenvalue over the 10-point geodesic family t = 0.0, 0.2,
/// ..., 1.8 (su11, k = 4, N = 64), computed by this crate at first build
/// and frozen as a regression value.
pub const GRAM_MIN_EIG_K4_N64: f64 = 8.376485249059143e-8;
pub const GRAM_REGRESSION_TOL: f64 = 1e-9;

/// Transform certification: section equivariance of the quadrature output.
pub const PENROSE_EQUIVARIANCE: f64 = 1e-6;

/// Stabilizer-character law of a valid transform integrand.
pub const INTEGRAND_INVARIANCE: f64 = 1e-8;

/// Character quadrature: Schur orthogonality residuals.
pub const SCHUR_ORTHOGONALITY: f64 = 1e-10;

/// Peter-Weyl projectors: idempotency and K-equivariance.
pub const PROJECTOR_IDEMPOTENCY: f64 = 1e-10;
pub const PROJECTOR_EQUIVARIANCE: f64 = 1e-8;
