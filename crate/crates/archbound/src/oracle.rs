//! Validation side: local height functions, seeded point sampling, and an
//! affine group-law oracle that cross-checks the projective duplication map.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bound::{phi_step, Variant};
use crate::curve::{duplication, CurveModel, ProjectivePoint};
use crate::error::{Error, Result};
use crate::torsion::{torsion_constants, PlaceSpec};

/// Height loss of one doubling: max(|delta1|, |delta2|) / max(|x1|, |x2|)^4,
/// scale-invariant and positive on nonsingular curves.
pub fn phi_value(c: &CurveModel, p: &ProjectivePoint) -> Result<f64> {
    let n = p.normalized();
    let d = duplication(c, &n)?;
    Ok(d.sup_norm())
}

/// A constant L with |log Phi(P)| <= L for every point.
///
/// The upper side comes from coefficient-sum bounds on delta at sup-norm-1
/// representatives; the lower side from the reconstruction inequality
/// 1 = max|x_i|^4 <= Phi * ||phi(1,1)||^4. Computed once per curve and
/// reused for every series tail.
pub fn log_phi_range(c: &CurveModel) -> Result<f64> {
    let tc = torsion_constants(c, PlaceSpec::Complex)?;
    let phi = phi_step(&tc, [1.0, 1.0], Variant::ComplexFormula);
    let upper = (1.0 + c.b4.norm() + 2.0 * c.b6.norm() + c.b8.norm()).ln()
        + (4.0 + c.b2.norm() + 2.0 * c.b4.norm() + c.b6.norm()).ln();
    Ok(upper.max(4.0 * phi[0].max(phi[1]).ln()))
}

/// Truncated local height series with a certified truncation window.
#[derive(Clone, Copy, Debug)]
pub struct PsiEvaluation {
    /// Partial sum of -sum_n 4^{-n-1} log Phi(2^n P).
    pub value: f64,
    /// The true series value lies within this distance of `value`.
    pub tail_bound: f64,
    pub terms_used: usize,
}

/// Evaluates the local height difference series at `p`, truncated after
/// `terms` doublings (at least one).
pub fn psi_value(c: &CurveModel, p: &ProjectivePoint, terms: usize) -> Result<PsiEvaluation> {
    let l = log_phi_range(c)?;
    psi_value_with_range(c, p, terms, l)
}

/// Same as [`psi_value`] with the log-Phi range constant supplied by the
/// caller, for evaluation loops that amortize it across many points.
pub fn psi_value_with_range(
    c: &CurveModel,
    p: &ProjectivePoint,
    terms: usize,
    log_range: f64,
) -> Result<PsiEvaluation> {
    let terms = terms.max(1);
    let mut rep = p.normalized();
    let mut value = 0.0;
    let mut weight = 0.25;
    for _ in 0..terms {
        // rep has sup norm one, so the doubled representative's sup norm is
        // exactly Phi(rep)
        let d = duplication(c, &rep)?;
        value -= weight * d.sup_norm().ln();
        weight *= 0.25;
        rep = d.normalized();
    }
    let tail_bound = 0.25f64.powi(terms as i32) * log_range / 3.0;
    Ok(PsiEvaluation { value, tail_bound, terms_used: terms })
}

enum SamplerKind {
    Complex,
    Real { b2: f64, b4: f64, b6: f64 },
}

/// Deterministic point source for one place of one curve.
///
/// Complex place: uniform on the sup-norm-one sphere of pairs. Real place:
/// uniform real representatives from the sup-sphere, rejected unless the
/// affine x admits a real y (the cubic 4x^3 + b2 x^2 + 2 b4 x + b6 is
/// nonnegative; infinity always passes).
pub struct PointSampler {
    rng: ChaCha8Rng,
    kind: SamplerKind,
}

/// Consecutive rejections tolerated before concluding the real locus is
/// effectively invisible at this sampling resolution.
const MAX_REJECTIONS: u32 = 100_000;

impl PointSampler {
    pub fn new(c: &CurveModel, place: PlaceSpec, seed: u64) -> Result<Self> {
        let kind = match place {
            PlaceSpec::Complex => SamplerKind::Complex,
            PlaceSpec::Real => {
                if !c.is_real {
                    return Err(Error::NumericBreakdown {
                        context: "real place requires a real model",
                    });
                }
                SamplerKind::Real { b2: c.b2.re, b4: c.b4.re, b6: c.b6.re }
            }
        };
        Ok(PointSampler { rng: ChaCha8Rng::seed_from_u64(seed), kind })
    }

    pub fn next_point(&mut self) -> Result<ProjectivePoint> {
        match self.kind {
            SamplerKind::Complex => {
                // faces |x1| = 1 and |x2| = 1 carry equal measure
                let first_face: bool = self.rng.gen();
                let theta = self.rng.gen_range(0.0..std::f64::consts::TAU);
                let circle = Complex64::new(theta.cos(), theta.sin());
                let disc = loop {
                    let re = self.rng.gen_range(-1.0..=1.0);
                    let im = self.rng.gen_range(-1.0..=1.0);
                    if re * re + im * im <= 1.0 {
                        break Complex64::new(re, im);
                    }
                };
                let (x1, x2) = if first_face { (circle, disc) } else { (disc, circle) };
                ProjectivePoint::new(x1, x2)
            }
            SamplerKind::Real { b2, b4, b6 } => {
                let mut rejections = 0u32;
                loop {
                    let face: u8 = self.rng.gen_range(0..4);
                    let t: f64 = self.rng.gen_range(-1.0..=1.0);
                    let (x1, x2) = match face {
                        0 => (1.0, t),
                        1 => (-1.0, t),
                        2 => (t, 1.0),
                        _ => (t, -1.0),
                    };
                    // projective form of the y-discriminant cubic; the sign
                    // matches the affine cubic because the x2^4 factor is
                    // nonnegative, and infinity lands exactly on zero
                    let d2 = 4.0 * x1 * x1 * x1 * x2
                        + b2 * x1 * x1 * x2 * x2
                        + 2.0 * b4 * x1 * x2 * x2 * x2
                        + b6 * x2 * x2 * x2 * x2;
                    if d2 >= 0.0 {
                        return ProjectivePoint::new(
                            Complex64::new(x1, 0.0),
                            Complex64::new(x2, 0.0),
                        );
                    }
                    rejections += 1;
                    if rejections >= MAX_REJECTIONS {
                        return Err(Error::SamplingExhausted { attempts: rejections });
                    }
                }
            }
        }
    }
}

/// One point from a fresh sampler; successive points need a [`PointSampler`].
pub fn sample_point(c: &CurveModel, place: PlaceSpec, seed: u64) -> Result<ProjectivePoint> {
    PointSampler::new(c, place, seed)?.next_point()
}

/// Empirical lower witness for the bound: the maximum over samples of
/// value + tail_bound. A sound bound must exceed the maximum of
/// value - tail_bound; exceeding this larger quantity is stronger.
pub fn empirical_max_psi(
    c: &CurveModel,
    place: PlaceSpec,
    n_samples: usize,
    terms: usize,
    seed: u64,
) -> Result<f64> {
    let l = log_phi_range(c)?;
    let mut sampler = PointSampler::new(c, place, seed)?;
    let mut best = f64::NEG_INFINITY;
    for _ in 0..n_samples.max(1) {
        let p = sampler.next_point()?;
        let ev = psi_value_with_range(c, &p, terms, l)?;
        best = best.max(ev.value + ev.tail_bound);
    }
    Ok(best)
}

/// An affine curve point (or the group identity).
#[derive(Clone, Copy, Debug)]
pub struct AffinePoint {
    pub x: Complex64,
    pub y: Complex64,
    pub at_infinity: bool,
}

impl AffinePoint {
    pub fn new(x: Complex64, y: Complex64) -> Self {
        AffinePoint { x, y, at_infinity: false }
    }

    pub fn infinity() -> Self {
        AffinePoint { x: Complex64::new(0.0, 0.0), y: Complex64::new(0.0, 0.0), at_infinity: true }
    }

    /// The x-line image kappa(P).
    pub fn projective(&self) -> ProjectivePoint {
        if self.at_infinity {
            ProjectivePoint::infinity()
        } else {
            ProjectivePoint::affine(self.x)
        }
    }
}

/// Relative residual of the Weierstrass relation at `p`.
fn curve_residual(c: &CurveModel, p: &AffinePoint) -> f64 {
    let [a1, a2, a3, a4, a6] = c.a;
    let lhs = p.y * p.y + a1 * p.x * p.y + a3 * p.y;
    let rhs = ((p.x + a2) * p.x + a4) * p.x + a6;
    let scale = p.y.norm() * p.y.norm()
        + (a1 * p.x * p.y).norm()
        + (a3 * p.y).norm()
        + p.x.norm().powi(3)
        + (a2 * p.x * p.x).norm()
        + (a4 * p.x).norm()
        + a6.norm()
        + 1.0;
    (lhs - rhs).norm() / scale
}

const ON_CURVE_TOL: f64 = 1e-6;

/// Chord-tangent doubling for a general Weierstrass equation. Two-torsion
/// input (vanishing tangent denominator) returns the identity.
pub fn double_point(c: &CurveModel, p: &AffinePoint) -> Result<AffinePoint> {
    if p.at_infinity {
        return Ok(AffinePoint::infinity());
    }
    let residual = curve_residual(c, p);
    if residual > ON_CURVE_TOL {
        return Err(Error::NotOnCurve { residual });
    }
    let [a1, a2, a3, a4, _] = c.a;
    let den = 2.0 * p.y + a1 * p.x + a3;
    if den.norm() == 0.0 {
        return Ok(AffinePoint::infinity());
    }
    let lam = ((3.0 * p.x + 2.0 * a2) * p.x + a4 - a1 * p.y) / den;
    let x3 = lam * lam + a1 * lam - a2 - 2.0 * p.x;
    let y3 = -(lam + a1) * x3 - (p.y - lam * p.x) - a3;
    Ok(AffinePoint::new(x3, y3))
}

/// Chord addition; equal x-coordinates (exact comparison) split into
/// doubling and inverse-pair cases.
pub fn add_points(c: &CurveModel, p: &AffinePoint, q: &AffinePoint) -> Result<AffinePoint> {
    if p.at_infinity {
        return Ok(*q);
    }
    if q.at_infinity {
        return Ok(*p);
    }
    for pt in [p, q] {
        let residual = curve_residual(c, pt);
        if residual > ON_CURVE_TOL {
            return Err(Error::NotOnCurve { residual });
        }
    }
    let [a1, a2, a3, _, _] = c.a;
    if p.x == q.x {
        if p.y == q.y {
            return double_point(c, p);
        }
        return Ok(AffinePoint::infinity());
    }
    let lam = (q.y - p.y) / (q.x - p.x);
    let x3 = lam * lam + a1 * lam - a2 - p.x - q.x;
    let y3 = -(lam + a1) * x3 - (p.y - lam * p.x) - a3;
    Ok(AffinePoint::new(x3, y3))
}

/// Solves the Weierstrass equation for y above a given x; the flag picks
/// the other quadratic branch.
pub fn lift_x(c: &CurveModel, x: Complex64, negative_branch: bool) -> AffinePoint {
    let [a1, a2, a3, a4, a6] = c.a;
    let s = a1 * x + a3;
    let disc = s * s + 4.0 * (((x + a2) * x + a4) * x + a6);
    let root = disc.sqrt();
    let y = if negative_branch { (-s - root) * 0.5 } else { (-s + root) * 0.5 };
    AffinePoint::new(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound::{compute_bound, BoundConfig};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit_curve() -> CurveModel {
        CurveModel::from_real([0.0, 0.0, 0.0, 1.0, 0.0]).unwrap()
    }

    #[test]
    fn phi_frozen_values() {
        let e = unit_curve();
        let at = |x1, x2| {
            phi_value(&e, &ProjectivePoint::new(x1, x2).unwrap()).unwrap()
        };
        assert_eq!(at(c(1.0, 0.0), c(0.0, 0.0)), 1.0);
        assert_eq!(at(c(1.0, 0.0), c(1.0, 0.0)), 8.0);
        assert_eq!(at(c(0.0, 0.0), c(1.0, 0.0)), 1.0);
    }

    #[test]
    fn phi_is_scale_invariant() {
        let e = CurveModel::from_real([1.0, -2.0, 3.0, -4.0, 5.0]).unwrap();
        let p = ProjectivePoint::new(c(0.7, -0.3), c(-0.2, 1.1)).unwrap();
        let q = ProjectivePoint::new(p.x1 * c(3.0, -4.0), p.x2 * c(3.0, -4.0)).unwrap();
        let vp = phi_value(&e, &p).unwrap();
        let vq = phi_value(&e, &q).unwrap();
        assert!((vp - vq).abs() <= 1e-12 * vp);
    }

    #[test]
    fn log_range_frozen_value() {
        // ln(1+2+0+1) + ln(4+0+4+0) = ln 32, which dominates 4 ln phi(1,1)
        let l = log_phi_range(&unit_curve()).unwrap();
        assert!((l - 32.0f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn psi_frozen_values() {
        let e = unit_curve();
        let inf = psi_value(&e, &ProjectivePoint::infinity(), 5).unwrap();
        assert_eq!(inf.value, 0.0);
        assert_eq!(inf.terms_used, 5);
        assert!((inf.tail_bound - 32.0f64.ln() / (3.0 * 1024.0)).abs() < 1e-18);

        // orbit (1,1) -> (0,1) -> infinity, so the series terminates after
        // two doublings at exactly -(log 8)/4
        let p = ProjectivePoint::new(c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        let ev = psi_value(&e, &p, 12).unwrap();
        assert!((ev.value - -0.5198603854199589).abs() < 1e-15);
        assert!((ev.tail_bound - 6.885798579056514e-8).abs() < 1e-20);

        let q = ProjectivePoint::new(c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(psi_value(&e, &q, 12).unwrap().value, 0.0);
    }

    #[test]
    fn longer_series_stays_within_the_shorter_tail() {
        let e = CurveModel::from_real([0.0, -1.0, 1.0, -7820.0, -263580.0]).unwrap();
        let p = ProjectivePoint::new(c(110.0, 0.0), c(1.0, 0.0)).unwrap();
        let short = psi_value(&e, &p, 8).unwrap();
        let long = psi_value(&e, &p, 16).unwrap();
        assert!((long.value - short.value).abs() <= short.tail_bound);
    }

    #[test]
    fn real_sampler_respects_the_component_condition() {
        let e = unit_curve();
        let mut s = PointSampler::new(&e, PlaceSpec::Real, 7).unwrap();
        for _ in 0..200 {
            let p = s.next_point().unwrap();
            assert_eq!(p.x1.im, 0.0);
            assert_eq!(p.x2.im, 0.0);
            // admissible iff x1/x2 >= 0 on this curve
            assert!(p.x1.re * p.x2.re >= 0.0);
            assert!((p.sup_norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn complex_sampler_lives_on_the_sup_sphere() {
        let e = unit_curve();
        let mut s = PointSampler::new(&e, PlaceSpec::Complex, 11).unwrap();
        for _ in 0..200 {
            let p = s.next_point().unwrap();
            assert!((p.sup_norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        let e = unit_curve();
        for place in [PlaceSpec::Real, PlaceSpec::Complex] {
            let mut a = PointSampler::new(&e, place, 42).unwrap();
            let mut b = PointSampler::new(&e, place, 42).unwrap();
            for _ in 0..50 {
                let pa = a.next_point().unwrap();
                let pb = b.next_point().unwrap();
                assert_eq!((pa.x1, pa.x2), (pb.x1, pb.x2));
            }
            let first = sample_point(&e, place, 43).unwrap();
            let again = sample_point(&e, place, 43).unwrap();
            assert_eq!((first.x1, first.x2), (again.x1, again.x2));
        }
    }

    #[test]
    fn real_place_needs_a_real_model() {
        let e = CurveModel::from_complex([
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 1.0),
            c(0.0, 0.0),
        ])
        .unwrap();
        assert!(PointSampler::new(&e, PlaceSpec::Real, 1).is_err());
        assert!(PointSampler::new(&e, PlaceSpec::Complex, 1).is_ok());
    }

    #[test]
    fn empirical_max_stays_under_the_bound() {
        let e = unit_curve();
        let cfg = BoundConfig::default();
        for place in [PlaceSpec::Real, PlaceSpec::Complex] {
            let bound = compute_bound(&e, place, &cfg).unwrap().bound;
            let emp = empirical_max_psi(&e, place, 2000, 12, 5).unwrap();
            assert!(emp <= bound + 1e-9, "place {place:?}: {emp} vs {bound}");
        }
    }

    #[test]
    fn doubling_frozen_values() {
        let e = unit_curve();
        let two_torsion = AffinePoint::new(c(0.0, 0.0), c(0.0, 0.0));
        assert!(double_point(&e, &two_torsion).unwrap().at_infinity);

        let p = AffinePoint::new(c(1.0, 0.0), c(2.0f64.sqrt(), 0.0));
        let d = double_point(&e, &p).unwrap();
        assert!(d.x.norm() < 1e-15);
        assert!(d.y.norm() < 1e-15);

        let off = AffinePoint::new(c(1.0, 0.0), c(5.0, 0.0));
        assert!(matches!(double_point(&e, &off), Err(Error::NotOnCurve { .. })));
    }

    #[test]
    fn addition_frozen_values() {
        let e = unit_curve();
        let t = AffinePoint::new(c(0.0, 0.0), c(0.0, 0.0));
        let p = AffinePoint::new(c(1.0, 0.0), c(2.0f64.sqrt(), 0.0));
        let s = add_points(&e, &t, &p).unwrap();
        assert!((s.x - c(1.0, 0.0)).norm() < 1e-15);
        assert!((s.y - c(-(2.0f64.sqrt()), 0.0)).norm() < 1e-15);

        let minus_p = AffinePoint::new(p.x, -p.y);
        assert!(add_points(&e, &p, &minus_p).unwrap().at_infinity);
        assert!((add_points(&e, &p, &AffinePoint::infinity()).unwrap().x - p.x).norm() == 0.0);
    }

    #[test]
    fn lift_x_picks_both_branches() {
        let e = unit_curve();
        let up = lift_x(&e, c(1.0, 0.0), false);
        let down = lift_x(&e, c(1.0, 0.0), true);
        assert!((up.y - c(2.0f64.sqrt(), 0.0)).norm() < 1e-15);
        assert!((down.y + c(2.0f64.sqrt(), 0.0)).norm() < 1e-15);
        assert!(curve_residual(&e, &up) < 1e-15);
        assert!(curve_residual(&e, &down) < 1e-15);
    }

    #[test]
    fn duplication_matches_the_group_law() {
        let e = CurveModel::from_real([1.0, -2.0, 3.0, -4.0, 5.0]).unwrap();
        for (i, x) in [0.6, -1.8, 3.5, 42.0].into_iter().enumerate() {
            let p = lift_x(&e, c(x, 0.0), i % 2 == 0);
            let doubled = double_point(&e, &p).unwrap();
            let via_delta = duplication(&e, &p.projective()).unwrap();
            assert!(doubled.projective().projective_distance(&via_delta) < 1e-12);
        }
    }

    #[test]
    fn translation_compatibility_with_matrices() {
        let e = unit_curve();
        let tc = torsion_constants(&e, PlaceSpec::Real).unwrap();
        let t_affine = AffinePoint::new(tc.xt[0], c(0.0, 0.0));
        let m = crate::torsion::translation_matrix(&e, tc.xt[0]);
        for x in [0.4, 2.0, -0.7] {
            let p = lift_x(&e, c(x, 0.0), false);
            let moved = add_points(&e, &p, &t_affine).unwrap();
            let mapped = m.apply(&p.projective()).unwrap();
            assert!(moved.projective().projective_distance(&mapped) < 1e-10);
        }
    }
}
