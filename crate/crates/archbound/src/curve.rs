//! Weierstrass curve models and the x-line duplication map.
//!
//! A curve is stored by its five a-invariants together with the derived
//! b-invariants and discriminant. Construction from rational data runs the
//! derivation exactly (see [`crate::exact`]); genuinely complex data uses
//! f64 componentwise. Points on the x-line are kept as projective pairs
//! `(x1 : x2)`, and doubling acts on them through the homogeneous quartic
//! pair (delta1, delta2).

use num_complex::Complex64;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exact::{exact_invariants, rational_to_f64};

/// One curve coefficient: exact rational or floating complex.
#[derive(Clone, Debug, PartialEq)]
pub enum Coefficient {
    Rational(BigRational),
    Complex(Complex64),
}

impl From<i64> for Coefficient {
    fn from(v: i64) -> Self {
        Coefficient::Rational(BigRational::from_integer(v.into()))
    }
}

impl From<BigRational> for Coefficient {
    fn from(v: BigRational) -> Self {
        Coefficient::Rational(v)
    }
}

impl From<Complex64> for Coefficient {
    fn from(v: Complex64) -> Self {
        Coefficient::Complex(v)
    }
}

/// Floating magnitudes below this count as a vanished discriminant.
const DISC_UNDERFLOW: f64 = 1e-300;

/// A nonsingular Weierstrass model with derived invariants.
#[derive(Clone, Debug)]
pub struct CurveModel {
    /// a1, a2, a3, a4, a6.
    pub a: [Complex64; 5],
    pub b2: Complex64,
    pub b4: Complex64,
    pub b6: Complex64,
    pub b8: Complex64,
    pub disc: Complex64,
    /// True when every coefficient is real; only then can a real place be
    /// attached to the model.
    pub is_real: bool,
}

impl CurveModel {
    /// Builds the model, choosing exact rational derivation whenever every
    /// coefficient is real-valued.
    pub fn from_a_invariants(coeffs: &[Coefficient; 5]) -> Result<Self> {
        for c in coeffs {
            if let Coefficient::Complex(z) = c {
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NumericBreakdown { context: "non-finite coefficient" });
                }
            }
        }
        let mut rationals: Vec<BigRational> = Vec::with_capacity(5);
        for c in coeffs {
            match c {
                Coefficient::Rational(q) => rationals.push(q.clone()),
                Coefficient::Complex(z) if z.im == 0.0 => {
                    rationals.push(BigRational::from_float(z.re).expect("finite real part"))
                }
                Coefficient::Complex(_) => break,
            }
        }
        if rationals.len() == 5 {
            return Self::from_rational(rationals.try_into().expect("five coefficients"));
        }

        let mut a = [Complex64::new(0.0, 0.0); 5];
        for (slot, c) in a.iter_mut().zip(coeffs) {
            *slot = match c {
                Coefficient::Rational(q) => Complex64::new(rational_to_f64(q), 0.0),
                Coefficient::Complex(z) => *z,
            };
        }
        Self::from_complex_raw(a)
    }

    /// Exact path: derives invariants in big-rational arithmetic and rounds
    /// each one to f64 exactly once.
    pub fn from_rational(a: [BigRational; 5]) -> Result<Self> {
        let inv = exact_invariants(&a);
        if inv.disc == BigRational::from_integer(0.into()) {
            return Err(Error::SingularCurve);
        }
        let mut af = [Complex64::new(0.0, 0.0); 5];
        for (slot, q) in af.iter_mut().zip(&a) {
            *slot = Complex64::new(rational_to_f64(q), 0.0);
        }
        let reals = [
            rational_to_f64(&inv.b2),
            rational_to_f64(&inv.b4),
            rational_to_f64(&inv.b6),
            rational_to_f64(&inv.b8),
            rational_to_f64(&inv.disc),
        ];
        if af.iter().any(|z| !z.re.is_finite()) || reals.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericBreakdown { context: "invariants exceed the f64 range" });
        }
        Ok(CurveModel {
            a: af,
            b2: reals[0].into(),
            b4: reals[1].into(),
            b6: reals[2].into(),
            b8: reals[3].into(),
            disc: reals[4].into(),
            is_real: true,
        })
    }

    /// All-real f64 coefficients; lifted exactly into rationals, so the
    /// derived invariants are correctly rounded rather than accumulated.
    pub fn from_real(a: [f64; 5]) -> Result<Self> {
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericBreakdown { context: "non-finite coefficient" });
        }
        let lifted: Vec<BigRational> = a
            .iter()
            .map(|v| BigRational::from_float(*v).expect("finite coefficient"))
            .collect();
        Self::from_rational(lifted.try_into().expect("five coefficients"))
    }

    /// Complex coefficients; real-valued input is routed to the exact path.
    pub fn from_complex(a: [Complex64; 5]) -> Result<Self> {
        if a.iter().all(|z| z.im == 0.0) {
            Self::from_real([a[0].re, a[1].re, a[2].re, a[3].re, a[4].re])
        } else {
            for z in &a {
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NumericBreakdown { context: "non-finite coefficient" });
                }
            }
            Self::from_complex_raw(a)
        }
    }

    fn from_complex_raw(a: [Complex64; 5]) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = a;
        let b2 = a1 * a1 + 4.0 * a2;
        let b4 = 2.0 * a4 + a1 * a3;
        let b6 = a3 * a3 + 4.0 * a6;
        let b8 = a1 * a1 * a6 + 4.0 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        let disc = -b2 * b2 * b8 - 8.0 * b4 * b4 * b4 - 27.0 * b6 * b6 + 9.0 * b2 * b4 * b6;
        for z in [b2, b4, b6, b8, disc] {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NumericBreakdown { context: "invariants exceed the f64 range" });
            }
        }
        if disc.norm() < DISC_UNDERFLOW {
            return Err(Error::SingularCurve);
        }
        Ok(CurveModel { a, b2, b4, b6, b8, disc, is_real: false })
    }

    /// Evaluates the monic kernel cubic f(x) = x^3 + (b2/4)x^2 + (b4/2)x + b6/4
    /// and its derivative. The roots of f are the x-coordinates of the three
    /// nontrivial two-torsion points.
    pub fn kernel_poly(&self, x: Complex64) -> (Complex64, Complex64) {
        let c2 = self.b2 * 0.25;
        let c1 = self.b4 * 0.5;
        let c0 = self.b6 * 0.25;
        let f = ((x + c2) * x + c1) * x + c0;
        let fp = (3.0 * x + 2.0 * c2) * x + c1;
        (f, fp)
    }
}

/// A representative (x1 : x2) of a point on the projective x-line; never
/// both zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectivePoint {
    pub x1: Complex64,
    pub x2: Complex64,
}

impl ProjectivePoint {
    pub fn new(x1: Complex64, x2: Complex64) -> Result<Self> {
        if !(x1.re.is_finite() && x1.im.is_finite() && x2.re.is_finite() && x2.im.is_finite()) {
            return Err(Error::NumericBreakdown { context: "non-finite projective coordinate" });
        }
        if x1.norm() == 0.0 && x2.norm() == 0.0 {
            return Err(Error::DegeneratePoint);
        }
        Ok(ProjectivePoint { x1, x2 })
    }

    /// The affine point x as (x : 1).
    pub fn affine(x: Complex64) -> Self {
        ProjectivePoint { x1: x, x2: Complex64::new(1.0, 0.0) }
    }

    /// The image of the group identity, (1 : 0).
    pub fn infinity() -> Self {
        ProjectivePoint { x1: Complex64::new(1.0, 0.0), x2: Complex64::new(0.0, 0.0) }
    }

    pub fn sup_norm(&self) -> f64 {
        self.x1.norm().max(self.x2.norm())
    }

    /// Rescales the representative to supremum norm one (a real positive
    /// scale, so arguments are preserved).
    pub fn normalized(&self) -> Self {
        let s = self.sup_norm();
        ProjectivePoint { x1: self.x1 / s, x2: self.x2 / s }
    }

    /// |u1 v2 - u2 v1| on normalized representatives: zero exactly when the
    /// two points coincide on the projective line.
    pub fn projective_distance(&self, other: &ProjectivePoint) -> f64 {
        let u = self.normalized();
        let v = other.normalized();
        (u.x1 * v.x2 - u.x2 * v.x1).norm()
    }
}

/// The duplication map kappa(2P) = (delta1 : delta2) on projective
/// representatives, where
///
/// delta1 = x1^4 - b4 x1^2 x2^2 - 2 b6 x1 x2^3 - b8 x2^4
/// delta2 = 4 x1^3 x2 + b2 x1^2 x2^2 + 2 b4 x1 x2^3 + b6 x2^4
///
/// Both forms are homogeneous of degree four, so the output representative
/// scales by lambda^4 when the input scales by lambda.
pub fn duplication(c: &CurveModel, p: &ProjectivePoint) -> Result<ProjectivePoint> {
    let (x1, x2) = (p.x1, p.x2);
    let x1_2 = x1 * x1;
    let x2_2 = x2 * x2;
    let d1 = x1_2 * x1_2 - c.b4 * x1_2 * x2_2 - 2.0 * c.b6 * x1 * x2 * x2_2 - c.b8 * x2_2 * x2_2;
    let d2 = 4.0 * x1_2 * x1 * x2 + c.b2 * x1_2 * x2_2 + 2.0 * c.b4 * x1 * x2 * x2_2
        + c.b6 * x2_2 * x2_2;
    match ProjectivePoint::new(d1, d2) {
        Err(Error::NumericBreakdown { .. }) => {
            Err(Error::NumericBreakdown { context: "duplication overflow" })
        }
        other => other,
    }
}
