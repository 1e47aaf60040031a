//! Upper bounds for the archimedean local contribution to the difference
//! between the naive and the canonical height on an elliptic curve.
//!
//! The bound is produced by a quarter-contracting fixed-point iteration
//! built from two-torsion data of the curve, and every member of the
//! iteration's c-sequence is already a valid upper bound, so truncation is
//! harmless. A seeded sampling oracle evaluates the underlying local height
//! series directly and checks the bound empirically.
//!
//! ```
//! use archbound::{compute_bound, BoundConfig, CurveModel, PlaceSpec};
//!
//! // y^2 = x^3 + x at its real place
//! let curve = CurveModel::from_real([0.0, 0.0, 0.0, 1.0, 0.0]).unwrap();
//! let result = compute_bound(&curve, PlaceSpec::Real, &BoundConfig::default()).unwrap();
//! assert!((result.bound - 0.0602615).abs() < 1e-6);
//! ```

mod cubic;
mod exact;

pub mod bound;
pub mod curve;
pub mod error;
pub mod oracle;
pub mod torsion;

pub use bound::{
    compute_bound, iterate_bound, phi_step, psi_log_step, select_variant, BoundConfig,
    BoundResult, Variant,
};
pub use curve::{duplication, Coefficient, CurveModel, ProjectivePoint};
pub use error::{Error, Result};
pub use oracle::{
    add_points, double_point, empirical_max_psi, lift_x, log_phi_range, phi_value, psi_value,
    psi_value_with_range, sample_point, AffinePoint, PointSampler, PsiEvaluation,
};
pub use torsion::{
    bound_constants, eigenform_y, torsion_constants, translation_matrix, two_torsion_x,
    PlaceSpec, TorsionConstants, TranslationMatrix,
};
