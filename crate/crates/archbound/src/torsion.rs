//! Two-torsion data: ordered x-coordinates, the coefficient matrices of the
//! contraction map, eigenforms, and translation matrices.

use num_complex::Complex64;

use crate::cubic::{solve_kernel, KernelRoots};
use crate::curve::{CurveModel, ProjectivePoint};
use crate::error::{Error, Result};

/// Which archimedean completion the bound is computed at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlaceSpec {
    Real,
    Complex,
}

/// Denominators below this magnitude mean two torsion x-coordinates have
/// collapsed onto each other numerically.
const DEGENERATE_DEN: f64 = 1e-300;

/// The x-coordinates of the three nontrivial two-torsion points, in the
/// order the downstream formulas rely on.
///
/// At a real place of a real model with negative discriminant the order is
/// (real root, upper pair member, lower pair member), so the one-component
/// variant can address the conjugate pair by position. Everywhere else the
/// roots are sorted by (re, im), which keeps the output deterministic.
pub fn two_torsion_x(c: &CurveModel, place: PlaceSpec) -> Result<[Complex64; 3]> {
    // flush -0.0 to +0.0 so sorting and rendering treat zero as one value
    let unsign = |v: f64| v + 0.0;
    let complex = |re: f64, im: f64| Complex64::new(unsign(re), unsign(im));
    let roots = solve_kernel(c)?;
    let structured = place == PlaceSpec::Real && c.is_real && c.disc.re < 0.0;
    if structured {
        if let KernelRoots::RealWithPair { real, pair_re, pair_im } = roots {
            return Ok([
                complex(real, 0.0),
                complex(pair_re, pair_im),
                complex(pair_re, -pair_im),
            ]);
        }
    }
    let mut xs: [Complex64; 3] = match roots {
        KernelRoots::RealWithPair { real, pair_re, pair_im } => [
            complex(real, 0.0),
            complex(pair_re, pair_im),
            complex(pair_re, -pair_im),
        ],
        KernelRoots::ThreeReal(r) => {
            [complex(r[0], 0.0), complex(r[1], 0.0), complex(r[2], 0.0)]
        }
        KernelRoots::Generic(r) => [
            complex(r[0].re, r[0].im),
            complex(r[1].re, r[1].im),
            complex(r[2].re, r[2].im),
        ],
    };
    xs.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(xs)
}

/// Coefficients driving one contraction step.
///
/// `amat[i][j]` weights the j-th inner term inside phi_i, and `bmat[j]` is
/// the row (1, -x(T_j)) pairing a projective representative against the
/// j-th torsion point.
#[derive(Clone, Debug)]
pub struct TorsionConstants {
    pub xt: [Complex64; 3],
    pub amat: [[Complex64; 3]; 2],
    pub bmat: [[Complex64; 2]; 3],
}

/// Derives the contraction coefficients from an ordered triple of
/// two-torsion x-coordinates.
pub fn bound_constants(c: &CurveModel, xt: [Complex64; 3]) -> Result<TorsionConstants> {
    let mut amat = [[Complex64::new(0.0, 0.0); 3]; 2];
    let mut bmat = [[Complex64::new(0.0, 0.0); 2]; 3];
    for j in 0..3 {
        let (k, l) = ((j + 1) % 3, (j + 2) % 3);
        let den = 2.0 * (xt[j] - xt[k]) * (xt[j] - xt[l]);
        if den.norm() < DEGENERATE_DEN {
            return Err(Error::NumericBreakdown { context: "coincident two-torsion points" });
        }
        amat[0][j] = (2.0 * xt[k] * xt[l] - c.b4 * 0.5) / den;
        amat[1][j] = -1.0 / den;
        bmat[j] = [Complex64::new(1.0, 0.0), -xt[j]];
    }
    Ok(TorsionConstants { xt, amat, bmat })
}

/// Convenience: root extraction and constant assembly in one call.
pub fn torsion_constants(c: &CurveModel, place: PlaceSpec) -> Result<TorsionConstants> {
    bound_constants(c, two_torsion_x(c, place)?)
}

/// Evaluates the quadratic eigenform attached to the torsion point with
/// x-coordinate `t` at a projective representative:
///
/// y_T(x1, x2) = x1^2 - 2 t x1 x2 - (f'(t) - t^2) x2^2
///
/// Composing with the translation matrix of the same point scales the form
/// by det(M_T).
pub fn eigenform_y(c: &CurveModel, t: Complex64, p: &ProjectivePoint) -> Complex64 {
    let fp = c.kernel_poly(t).1;
    p.x1 * p.x1 - 2.0 * t * p.x1 * p.x2 - (fp - t * t) * p.x2 * p.x2
}

/// Projective action of translation by a two-torsion point.
///
/// M_T squares to f'(t) times the identity (so the class is an involution)
/// and matrices of distinct torsion points anticommute.
#[derive(Clone, Copy, Debug)]
pub struct TranslationMatrix {
    pub m: [[Complex64; 2]; 2],
    pub det: Complex64,
    /// Translation by the group identity, i.e. the identity matrix.
    pub is_identity_class: bool,
}

impl TranslationMatrix {
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        TranslationMatrix { m: [[one, zero], [zero, one]], det: one, is_identity_class: true }
    }

    pub fn apply(&self, p: &ProjectivePoint) -> Result<ProjectivePoint> {
        ProjectivePoint::new(
            self.m[0][0] * p.x1 + self.m[0][1] * p.x2,
            self.m[1][0] * p.x1 + self.m[1][1] * p.x2,
        )
    }
}

pub fn translation_matrix(c: &CurveModel, t: Complex64) -> TranslationMatrix {
    let fp = c.kernel_poly(t).1;
    TranslationMatrix {
        m: [[t, fp - t * t], [Complex64::new(1.0, 0.0), -t]],
        det: -fp,
        is_identity_class: false,
    }
}
