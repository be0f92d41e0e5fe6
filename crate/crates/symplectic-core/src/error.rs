use thiserror::Error;

/// Errors produced by the symplectic linear-algebra routines.
#[derive(Debug, Error)]
pub enum SympError {
    #[error("matrix must be square, got {rows} x {cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix dimension {dim} is odd; quadrature matrices have even dimension")]
    OddDimension { dim: usize },

    #[error("mode count must be at least one")]
    ZeroModes,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not symmetric: asymmetry {defect:.3e} exceeds tolerance {tol:.3e}")]
    NotSymmetric { defect: f64, tol: f64 },

    #[error("matrix is not positive definite: smallest eigenvalue {min_eig:.3e}")]
    NotPositiveDefinite { min_eig: f64 },

    #[error("matrix is not symplectic: defect {defect:.3e} exceeds tolerance {tol:.3e}")]
    SymplecticDefect { defect: f64, tol: f64 },

    #[error("matrix is not orthogonal: defect {defect:.3e} exceeds tolerance {tol:.3e}")]
    NotOrthogonal { defect: f64, tol: f64 },

    #[error("matrix is not unitary: defect {defect:.3e} exceeds tolerance {tol:.3e}")]
    NotUnitary { defect: f64, tol: f64 },

    #[error(
        "matrix is not the block embedding of a unitary: block defect {defect:.3e} \
         exceeds tolerance {tol:.3e}"
    )]
    NotOrthosymplectic { defect: f64, tol: f64 },

    #[error("numerical degeneracy while pairing symplectic spectra: {detail}")]
    PairingFailure { detail: String },

    #[error(
        "covariance matrix dips below the vacuum floor: smallest symplectic eigenvalue \
         {min_d} is less than 1 - {tol:.3e}"
    )]
    BelowVacuum { min_d: f64, tol: f64 },

    #[error("decomposition failed to reconstruct its input: defect {defect:.3e} exceeds {tol:.3e}")]
    Reconstruction { defect: f64, tol: f64 },

    #[error("basis completion failed: {detail}")]
    BasisCompletion { detail: String },
}
