use thiserror::Error;

/// Everything that can go wrong while building a curve, locating its
/// two-torsion, or running the bound and validation pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The discriminant vanishes (exactly in rational arithmetic, or below
    /// the underflow guard in floating arithmetic).
    #[error("singular curve: discriminant is zero")]
    SingularCurve,

    /// (0, 0) is not a point of the projective line. Raised both on
    /// construction and when the duplication map collapses a representative.
    #[error("degenerate projective representative (0, 0)")]
    DegeneratePoint,

    /// Newton polishing did not reach the residual criterion within the
    /// iteration budget.
    #[error("root polishing stalled at residual {residual:e} (limit {limit:e})")]
    RootFindingFailure { residual: f64, limit: f64 },

    /// A denominator or intermediate left the representable range.
    #[error("numeric breakdown in {context}")]
    NumericBreakdown { context: &'static str },

    /// The c sequence increased beyond the tolerated slack; the iteration is
    /// provably nonincreasing, so this indicates a numerics bug.
    #[error("bound sequence increased at step {index}: {prev} -> {next}")]
    NonMonotoneSequence { index: usize, prev: f64, next: f64 },

    /// An affine point failed the Weierstrass equation check.
    #[error("point does not satisfy the curve equation (relative residual {residual:e})")]
    NotOnCurve { residual: f64 },

    /// Rejection sampling gave up; the admissible real locus is too small a
    /// target for the sampler.
    #[error("rejection sampling exhausted after {attempts} attempts")]
    SamplingExhausted { attempts: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
