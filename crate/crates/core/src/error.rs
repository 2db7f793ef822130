use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("profile schema error: {0}")]
    Schema(String),

    #[error("refractive index is not positive at r = {r} (sqrt(n) = {sqrt_n})")]
    Positivity { r: f64, sqrt_n: f64 },

    #[error("strict profile requires n(a) = 1, found n(a) = {n_a}")]
    BoundaryIndex { n_a: f64 },

    #[error("radius {r} outside the profile domain [0, {a}]")]
    OutOfDomain { r: f64, a: f64 },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("operation requires a strict profile (n(a) = 1)")]
    NotStrict,

    #[error("step size underflow at r = {r} (h = {h:e})")]
    StepUnderflow { r: f64, h: f64 },

    #[error("|k| = {k_abs} exceeds k_max = {k_max}")]
    WavenumberTooLarge { k_abs: f64, k_max: f64 },

    #[error("angular index l = {0} outside the supported range")]
    AngularIndex(u32),

    #[error("|k| = {0} is too small for the asymptotic regime (need |k| >= 10)")]
    AsymptoticRegime(f64),

    #[error("zero on or near the contour after {attempts} perturbation attempts")]
    BoundaryZero { attempts: u32 },

    #[error("phase tracking did not converge: {0}")]
    PhaseTracking(String),

    #[error("zero count mismatch: {0}")]
    CountMismatch(String),

    #[error("identically-zero function")]
    IdenticallyZero,

    #[error("invalid search region: {0}")]
    Region(String),

    #[error("radius {r} exceeds the searched region (r1 = {r1})")]
    BeyondSearch { r: f64, r1: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),
}

impl Error {
    /// Input-validation failures, as opposed to numerical failures.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Schema(_)
                | Error::Positivity { .. }
                | Error::BoundaryIndex { .. }
                | Error::OutOfDomain { .. }
                | Error::NotStrict
                | Error::WavenumberTooLarge { .. }
                | Error::AngularIndex(_)
                | Error::Region(_)
                | Error::BeyondSearch { .. }
                | Error::Parameter(_)
        )
    }
}
