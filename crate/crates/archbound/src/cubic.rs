//! Root finding for the kernel cubic.
//!
//! The solver is structure-aware: a real model with negative discriminant
//! is guaranteed one real root plus a conjugate pair, and the pair is
//! produced by deflation so conjugacy holds exactly instead of within
//! rounding error. Real models with positive discriminant take the
//! trigonometric branch (three real roots, no complex detour), and
//! genuinely complex models take a complex Cardano branch that picks the
//! non-cancelling cube root. Every root is finished with Newton steps on
//! the original monic cubic.

use num_complex::Complex64;

use crate::curve::CurveModel;
use crate::error::{Error, Result};

const POLISH_REL: f64 = 1e-13;
const POLISH_MAX_STEPS: usize = 100;
/// Extra Newton steps taken past the acceptance threshold while they keep
/// strictly shrinking the residual. Ties nearby roots down to the exact
/// values the ordering contract compares (a root at zero must come out as
/// zero, not 1e-17, or lexicographic sorting misplaces it).
const POLISH_STALL_STEPS: usize = 8;

/// Roots of the kernel cubic, tagged with the structure the solver used.
#[derive(Clone, Copy, Debug)]
pub(crate) enum KernelRoots {
    /// One real root and a conjugate pair; `pair_im > 0` unless the pair
    /// degenerates to a near-double real root.
    RealWithPair { real: f64, pair_re: f64, pair_im: f64 },
    /// Three real roots in ascending order.
    ThreeReal([f64; 3]),
    /// Unordered roots of a cubic with complex coefficients.
    Generic([Complex64; 3]),
}

fn polish_scale(c: &CurveModel) -> f64 {
    1.0f64
        .max(c.b2.norm() * 0.25)
        .max(c.b4.norm() * 0.5)
        .max(c.b6.norm() * 0.25)
}

fn residual_limit(c: &CurveModel, modulus: f64) -> f64 {
    let m = 1.0 + modulus;
    POLISH_REL * m * m * m * polish_scale(c)
}

fn polish_complex(c: &CurveModel, mut z: Complex64) -> Result<Complex64> {
    for _ in 0..POLISH_MAX_STEPS {
        let (f, fp) = c.kernel_poly(z);
        if f.norm() <= residual_limit(c, z.norm()) {
            return Ok(stall_complex(c, z, f.norm()));
        }
        if fp.norm() == 0.0 {
            break;
        }
        z -= f / fp;
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NumericBreakdown { context: "root polishing diverged" });
        }
    }
    let (f, _) = c.kernel_poly(z);
    let limit = residual_limit(c, z.norm());
    if f.norm() <= limit {
        Ok(stall_complex(c, z, f.norm()))
    } else {
        Err(Error::RootFindingFailure { residual: f.norm(), limit })
    }
}

fn stall_complex(c: &CurveModel, mut z: Complex64, mut res: f64) -> Complex64 {
    for _ in 0..POLISH_STALL_STEPS {
        if res == 0.0 {
            break;
        }
        let (f, fp) = c.kernel_poly(z);
        if fp.norm() == 0.0 {
            break;
        }
        let next = z - f / fp;
        if !next.re.is_finite() || !next.im.is_finite() {
            break;
        }
        let next_res = c.kernel_poly(next).0.norm();
        if next_res >= res {
            break;
        }
        z = next;
        res = next_res;
    }
    z
}

fn polish_real(c: &CurveModel, x: f64) -> Result<f64> {
    debug_assert!(c.is_real);
    let c2 = c.b2.re * 0.25;
    let c1 = c.b4.re * 0.5;
    let c0 = c.b6.re * 0.25;
    let eval = |x: f64| {
        let f = ((x + c2) * x + c1) * x + c0;
        let fp = (3.0 * x + 2.0 * c2) * x + c1;
        (f, fp)
    };
    let stall = |mut x: f64, mut res: f64| {
        for _ in 0..POLISH_STALL_STEPS {
            if res == 0.0 {
                break;
            }
            let (f, fp) = eval(x);
            if fp == 0.0 {
                break;
            }
            let next = x - f / fp;
            if !next.is_finite() {
                break;
            }
            let next_res = eval(next).0.abs();
            if next_res >= res {
                break;
            }
            x = next;
            res = next_res;
        }
        x
    };
    let mut x = x;
    for _ in 0..POLISH_MAX_STEPS {
        let (f, fp) = eval(x);
        if f.abs() <= residual_limit(c, x.abs()) {
            return Ok(stall(x, f.abs()));
        }
        if fp == 0.0 {
            break;
        }
        x -= f / fp;
        if !x.is_finite() {
            return Err(Error::NumericBreakdown { context: "root polishing diverged" });
        }
    }
    let (f, _) = eval(x);
    let limit = residual_limit(c, x.abs());
    if f.abs() <= limit {
        Ok(stall(x, f.abs()))
    } else {
        Err(Error::RootFindingFailure { residual: f.abs(), limit })
    }
}

/// Root-magnitude scale for the monic cubic x^3 + c2 x^2 + c1 x + c0, used
/// to renormalize before the closed-form branches so intermediates cannot
/// overflow for curves with large invariants.
fn magnitude_scale(c2: f64, c1: f64, c0: f64) -> f64 {
    let s = c2.max(c1.sqrt()).max(c0.cbrt());
    if s > 0.0 && s.is_finite() {
        s
    } else {
        1.0
    }
}

/// Cardano for one real root of t^3 + p t + q when q^2/4 + p^3/27 > 0,
/// choosing the summand signs so the cube-root argument never cancels.
fn cardano_real(p: f64, q: f64) -> f64 {
    let d = (0.25 * q * q + p * p * p / 27.0).max(0.0).sqrt();
    let s = if q <= 0.0 { -0.5 * q + d } else { -0.5 * q - d };
    let u = s.cbrt();
    if u == 0.0 {
        // s vanishes only when p and q both do
        0.0
    } else {
        u - p / (3.0 * u)
    }
}

fn solve_real_negative_disc(c: &CurveModel) -> Result<KernelRoots> {
    let c2 = c.b2.re * 0.25;
    let c1 = c.b4.re * 0.5;
    let c0 = c.b6.re * 0.25;
    let s = magnitude_scale(c2.abs(), c1.abs(), c0.abs());
    let (e2, e1, e0) = (c2 / s, c1 / (s * s), c0 / (s * s * s));
    let p = e1 - e2 * e2 / 3.0;
    let q = 2.0 * e2 * e2 * e2 / 27.0 - e2 * e1 / 3.0 + e0;
    let real = polish_real(c, s * (cardano_real(p, q) - e2 / 3.0))?;

    // deflate: x^3 + c2 x^2 + c1 x + c0 = (x - real)(x^2 + bx + cc)
    let b = c2 + real;
    let cc = c1 + real * b;
    let pair_re = -0.5 * b;
    let pair_im = (cc - pair_re * pair_re).max(0.0).sqrt();
    let z = polish_complex(c, Complex64::new(pair_re, pair_im))?;
    Ok(KernelRoots::RealWithPair { real, pair_re: z.re, pair_im: z.im.abs() })
}

fn solve_real_positive_disc(c: &CurveModel) -> Result<KernelRoots> {
    let c2 = c.b2.re * 0.25;
    let c1 = c.b4.re * 0.5;
    let c0 = c.b6.re * 0.25;
    let s = magnitude_scale(c2.abs(), c1.abs(), c0.abs());
    let (e2, e1, e0) = (c2 / s, c1 / (s * s), c0 / (s * s * s));
    let p = e1 - e2 * e2 / 3.0;
    let q = 2.0 * e2 * e2 * e2 / 27.0 - e2 * e1 / 3.0 + e0;
    if p >= 0.0 {
        // three distinct real roots force p < 0; reaching this means the
        // model is numerically on top of a singular one
        return Err(Error::NumericBreakdown { context: "kernel cubic nearly singular" });
    }
    let m = 2.0 * (-p / 3.0).sqrt();
    let theta = (3.0 * q / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0).acos();
    let mut roots = [0.0f64; 3];
    for (k, r) in roots.iter_mut().enumerate() {
        let t = m * (theta / 3.0 - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
        *r = polish_real(c, s * (t - e2 / 3.0))?;
    }
    roots.sort_by(f64::total_cmp);
    Ok(KernelRoots::ThreeReal(roots))
}

fn solve_generic(c: &CurveModel) -> Result<KernelRoots> {
    let c2 = c.b2 * 0.25;
    let c1 = c.b4 * 0.5;
    let c0 = c.b6 * 0.25;
    let s = magnitude_scale(c2.norm(), c1.norm(), c0.norm());
    let e2 = c2 / s;
    let e1 = c1 / (s * s);
    let e0 = c0 / (s * s * s);
    let p = e1 - e2 * e2 / 3.0;
    let q = 2.0 * e2 * e2 * e2 / 27.0 - e2 * e1 / 3.0 + e0;
    let d = (q * q * 0.25 + p * p * p / 27.0).sqrt();
    let s1 = -q * 0.5 + d;
    let s2 = -q * 0.5 - d;
    let sb = if s1.norm() >= s2.norm() { s1 } else { s2 };
    let mut roots = [Complex64::new(0.0, 0.0); 3];
    if sb.norm() > 0.0 {
        let u0 = sb.cbrt();
        let omega = Complex64::new(-0.5, 0.75f64.sqrt());
        let mut u = u0;
        for r in &mut roots {
            *r = u - p / (3.0 * u);
            u *= omega;
        }
    }
    // else p = q = 0: triple root of the depressed cubic at zero
    for r in &mut roots {
        *r = polish_complex(c, s * (*r - e2 / 3.0))?;
    }
    Ok(KernelRoots::Generic(roots))
}

/// Solves the kernel cubic of `c` with the branch matching its structure.
pub(crate) fn solve_kernel(c: &CurveModel) -> Result<KernelRoots> {
    if c.is_real {
        if c.disc.re < 0.0 {
            solve_real_negative_disc(c)
        } else {
            solve_real_positive_disc(c)
        }
    } else {
        solve_generic(c)
    }
}
