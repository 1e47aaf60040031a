//! The contraction iteration that produces the height-difference bound.
//!
//! One step of the map phi sends a pair of nonnegative weights (d1, d2) to
//!
//! phi_i(d) = sqrt(sum_j |amat[i][j]| * sqrt(inner_j(d)))
//!
//! where inner_j pairs d against the j-th torsion row of bmat. The map is
//! homogeneous of degree 1/4, so its logarithmic conjugate psi = log o phi
//! o exp contracts the max metric by a factor 1/4. Iterating psi from the
//! origin yields b_N, and rescaling by 4^N / (4^N - 1) turns the partial
//! sums into the decreasing upper bounds c_N whose limit the final bound
//! tops by a small slack.

use crate::curve::CurveModel;
use crate::error::{Error, Result};
use crate::torsion::{torsion_constants, PlaceSpec, TorsionConstants};

/// Which inner-term formula a contraction step uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Generic formula, valid at every archimedean place.
    ComplexFormula,
    /// Sharper formula for the one-component real locus (real model,
    /// negative discriminant): the conjugate-pair terms pair the real and
    /// imaginary parts in quadrature instead of by modulus.
    RealOneComponent,
}

impl Variant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::ComplexFormula => "complex-formula",
            Variant::RealOneComponent => "real-one-component",
        }
    }
}

/// Tuning for the bound iteration.
#[derive(Clone, Debug)]
pub struct BoundConfig {
    /// Stop once consecutive c values agree to this relative tolerance.
    pub rel_tol: f64,
    /// Hard cap on iterations.
    pub max_iter: usize,
    /// Forced variant; `None` selects automatically from model and place.
    pub variant: Option<Variant>,
    /// Added on top of the final c value so the reported bound stays an
    /// upper bound under accumulated rounding.
    pub safety_slack: f64,
}

impl Default for BoundConfig {
    fn default() -> Self {
        BoundConfig { rel_tol: 1e-9, max_iter: 60, variant: None, safety_slack: 1e-8 }
    }
}

/// Outcome of the iteration.
#[derive(Clone, Debug)]
pub struct BoundResult {
    /// Decreasing upper bounds c_1, c_2, ...
    pub c_seq: Vec<f64>,
    /// Raw iterates b_N = max-norm of the N-th psi iterate.
    pub b_seq: Vec<f64>,
    /// Final c value plus the safety slack.
    pub bound: f64,
    pub iterations: usize,
    pub variant_used: Variant,
}

/// c values may only decrease along N; an increase beyond this slack is a
/// hard error since it would invalidate the bound argument.
const MONOTONE_SLACK: f64 = 1e-9;

/// Picks the sharp variant exactly on the one-component real locus.
pub fn select_variant(c: &CurveModel, place: PlaceSpec) -> Variant {
    if place == PlaceSpec::Real && c.is_real && c.disc.re < 0.0 {
        Variant::RealOneComponent
    } else {
        Variant::ComplexFormula
    }
}

/// One application of phi to nonnegative weights `d`.
pub fn phi_step(tc: &TorsionConstants, d: [f64; 2], variant: Variant) -> [f64; 2] {
    let mut inner = [0.0f64; 3];
    for (j, slot) in inner.iter_mut().enumerate() {
        let b = tc.bmat[j][1];
        *slot = match variant {
            // bmat[j][0] is identically one; keep the general form anyway
            Variant::ComplexFormula => tc.bmat[j][0].norm() * d[0] + b.norm() * d[1],
            // j = 0 is the real torsion root and keeps the generic term;
            // the conjugate pair combines in quadrature (hypot also dodges
            // overflow for huge torsion coordinates)
            Variant::RealOneComponent if j == 0 => d[0] + b.norm() * d[1],
            Variant::RealOneComponent => (d[0] + b.re.abs() * d[1]).hypot(b.im * d[1]),
        };
    }
    let mut out = [0.0f64; 2];
    for (i, slot) in out.iter_mut().enumerate() {
        let acc: f64 =
            (0..3).map(|j| tc.amat[i][j].norm() * inner[j].sqrt()).sum();
        *slot = acc.sqrt();
    }
    out
}

/// The logarithmic conjugate psi(alpha) = log phi(exp alpha), evaluated
/// without overflow: the max component is split off through homogeneity
/// (psi(alpha + t) = t/4 + psi(alpha) componentwise) before exponentiating,
/// so the exponentials never exceed one.
pub fn psi_log_step(tc: &TorsionConstants, alpha: [f64; 2], variant: Variant) -> [f64; 2] {
    let m = alpha[0].max(alpha[1]);
    let v = phi_step(tc, [(alpha[0] - m).exp(), (alpha[1] - m).exp()], variant);
    [0.25 * m + v[0].ln(), 0.25 * m + v[1].ln()]
}

/// Runs the iteration from the origin until consecutive c values agree to
/// `cfg.rel_tol` (relative, floored at one) or `cfg.max_iter` is reached.
pub fn iterate_bound(
    tc: &TorsionConstants,
    variant: Variant,
    cfg: &BoundConfig,
) -> Result<BoundResult> {
    let mut alpha = [0.0f64; 2];
    let mut b_seq = Vec::new();
    let mut c_seq = Vec::new();
    let mut prev = f64::INFINITY;
    for n in 1..=cfg.max_iter.max(1) {
        alpha = psi_log_step(tc, alpha, variant);
        let b = alpha[0].max(alpha[1]);
        let k = 1.0 / (1.0 - 0.25f64.powi(n as i32));
        let c = k * b;
        if c > prev + MONOTONE_SLACK {
            return Err(Error::NonMonotoneSequence { index: n, prev, next: c });
        }
        b_seq.push(b);
        c_seq.push(c);
        let converged = (prev - c).abs() <= cfg.rel_tol * c.abs().max(1.0);
        prev = c;
        if converged {
            break;
        }
    }
    let last = *c_seq.last().expect("at least one iteration");
    Ok(BoundResult {
        bound: last + cfg.safety_slack,
        iterations: c_seq.len(),
        c_seq,
        b_seq,
        variant_used: variant,
    })
}

/// Full pipeline: torsion constants, variant choice, iteration.
pub fn compute_bound(c: &CurveModel, place: PlaceSpec, cfg: &BoundConfig) -> Result<BoundResult> {
    let variant = match cfg.variant {
        Some(Variant::RealOneComponent) if !c.is_real => {
            return Err(Error::NumericBreakdown {
                context: "one-component variant requires a real model",
            })
        }
        Some(v) => v,
        None => select_variant(c, place),
    };
    let tc = torsion_constants(c, place)?;
    iterate_bound(&tc, variant, cfg)
}
