use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// `(L, η)` lies on the polar set of the coefficient recurrence or of `Γ(2L+2)`.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A caller-supplied argument violates an operation precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("gamma function pole at {0}")]
    Pole(Complex64),

    #[error("branch point: z^L is undefined at z = 0 for L = {0}")]
    BranchPoint(Complex64),

    /// `|g(z)|` is below the pole guard, so `z g'/g` is not evaluated.
    #[error("z = {z} is within the pole guard of a zero of g (|g| = {abs_g:e})")]
    NearZeroOfG { z: Complex64, abs_g: f64 },

    #[error("winding count {winding} over |z| = {radius} disagrees with {listed} listed zeros (+1 at the origin)")]
    WindingMismatch {
        radius: f64,
        winding: i64,
        listed: usize,
    },

    /// `g` vanishes at a scanned grid point; the partial report is attached.
    #[error("g vanishes at {} inside the scanned disk", .0.worst_point)]
    ZeroInDisk(Box<crate::starlike::CertificationReport>),

    #[error("argument outside domain: {0}")]
    Domain(String),
}
