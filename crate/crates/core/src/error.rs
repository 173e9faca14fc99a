//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("element dimension {requested} exceeds cap {cap}")]
    DimensionCap { requested: usize, cap: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("operands belong to different algebras")]
    AlgebraMismatch,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is numerically singular (condition number {cond:.3e} exceeds {limit:.3e})")]
    IllConditioned { cond: f64, limit: f64 },

    #[error("map is not unital: ‖T(1) − 1‖ = {defect:.3e}")]
    NotUnital { defect: f64 },

    #[error("generator does not annihilate the identity: ‖δ(1)‖ = {defect:.3e}")]
    NotIdentityKilling { defect: f64 },

    #[error("map is not Hermitian (defect {defect:.3e} exceeds tol {tol:.3e})")]
    NotHermitianMap { defect: f64, tol: f64 },

    #[error("map is not a derivation (Leibniz defect {defect:.3e} exceeds tol {tol:.3e})")]
    NotDerivation { defect: f64, tol: f64 },

    #[error("state is not faithful: GNS dimension {gns_dim} < element dimension {element_dim}")]
    NotFaithful { gns_dim: usize, element_dim: usize },

    #[error(
        "Gram rank is ambiguous: eigenvalue {eigenvalue:.6e} lies within a factor of 10 of the cutoff {cutoff:.6e}"
    )]
    RankAmbiguous { eigenvalue: f64, cutoff: f64 },

    #[error(
        "the map is not implementable in the requested form under the given constraints (residual {residual:.6e} exceeds tol {tol:.6e})"
    )]
    NotImplementable { residual: f64, tol: f64 },

    #[error("state does not vanish on generator range: max |ω(δ(basis))| = {defect:.3e}")]
    StateNotInvariant { defect: f64 },
}
