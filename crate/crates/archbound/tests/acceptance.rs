//! Quantitative gate for the crate: every release-blocking check in one
//! target, each with a fixed seed, a stated tolerance, and a time budget.
//! Each test prints one PASS line when its criterion holds.

use std::time::{Duration, Instant};

use archbound::{
    compute_bound, double_point, duplication, eigenform_y, iterate_bound, lift_x, log_phi_range,
    psi_value_with_range, torsion_constants, translation_matrix, BoundConfig, CurveModel,
    PlaceSpec, PointSampler, ProjectivePoint, TorsionConstants, Variant,
};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rational(s: &str) -> BigRational {
    BigRational::from_integer(s.parse::<BigInt>().unwrap())
}

/// Rank-19 model with 47- and 72-digit coefficients; the stress case for
/// exact invariant derivation and root polishing.
fn huge_coefficient_curve() -> CurveModel {
    CurveModel::from_rational([
        rational("1"),
        rational("-1"),
        rational("1"),
        rational("31368015812338065133318565292206590792820353345"),
        rational("302038802698566087335643188429543498624522041683874493555186062568159847"),
    ])
    .unwrap()
}

/// Conductor-11 model used for the speed and soundness spot check.
fn small_conductor_curve() -> CurveModel {
    CurveModel::from_real([0.0, -1.0, 1.0, -7820.0, -263580.0]).unwrap()
}

/// Complex coefficient uniform in the closed disc of radius 10.
fn disc_coeff(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let re = rng.gen_range(-10.0..=10.0);
        let im = rng.gen_range(-10.0..=10.0);
        if re * re + im * im <= 100.0 {
            return Complex64::new(re, im);
        }
    }
}

/// Nonsingular model with coefficients in the radius-10 disc; resamples
/// while the discriminant magnitude is below 1e-6.
fn random_complex_curve(rng: &mut ChaCha8Rng) -> CurveModel {
    loop {
        let a = [
            disc_coeff(rng),
            disc_coeff(rng),
            disc_coeff(rng),
            disc_coeff(rng),
            disc_coeff(rng),
        ];
        if let Ok(m) = CurveModel::from_complex(a) {
            if m.disc.norm() >= 1e-6 {
                return m;
            }
        }
    }
}

fn random_real_curve(rng: &mut ChaCha8Rng) -> CurveModel {
    loop {
        let a = [
            rng.gen_range(-10.0..=10.0),
            rng.gen_range(-10.0..=10.0),
            rng.gen_range(-10.0..=10.0),
            rng.gen_range(-10.0..=10.0),
            rng.gen_range(-10.0..=10.0),
        ];
        if let Ok(m) = CurveModel::from_real(a) {
            if m.disc.norm() >= 1e-6 {
                return m;
            }
        }
    }
}

fn random_point(rng: &mut ChaCha8Rng) -> ProjectivePoint {
    loop {
        let x1 = Complex64::new(rng.gen_range(-10.0..=10.0), rng.gen_range(-10.0..=10.0));
        let x2 = Complex64::new(rng.gen_range(-10.0..=10.0), rng.gen_range(-10.0..=10.0));
        if let Ok(p) = ProjectivePoint::new(x1, x2) {
            if p.sup_norm() >= 1e-3 {
                return p;
            }
        }
    }
}

#[test]
fn criterion_1_huge_coefficient_bound_fast() {
    let curve = huge_coefficient_curve();
    // Warm once so the timed run measures the computation, not first-touch
    // effects.
    compute_bound(&curve, PlaceSpec::Real, &BoundConfig::default()).unwrap();
    let start = Instant::now();
    let res = compute_bound(&curve, PlaceSpec::Real, &BoundConfig::default()).unwrap();
    let elapsed = start.elapsed();
    assert!(
        (res.bound - 0.147).abs() <= 0.01,
        "bound {} outside 0.147 +/- 0.01",
        res.bound
    );
    assert!(elapsed < Duration::from_millis(100), "took {elapsed:?}");
    println!(
        "PASS 1/9: huge-coefficient real-place bound {:.6} within 0.147 +/- 0.01 in {:?}",
        res.bound, elapsed
    );
}

#[test]
fn criterion_2_square_reconstruction_identities() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1d_2021);
    for _ in 0..100 {
        let m = random_complex_curve(&mut rng);
        let tc = torsion_constants(&m, PlaceSpec::Complex).unwrap();
        for _ in 0..100 {
            let p = random_point(&mut rng);
            let sup = p.sup_norm();
            let y: Vec<Complex64> = tc.xt.iter().map(|t| eigenform_y(&m, *t, &p)).collect();
            for (i, xi) in [p.x1, p.x2].iter().enumerate() {
                let recon = tc.amat[i][0] * y[0] + tc.amat[i][1] * y[1] + tc.amat[i][2] * y[2];
                assert!(
                    (xi * xi - recon).norm() <= 1e-8 * sup * sup,
                    "x{}^2 reconstruction off by {:e}",
                    i + 1,
                    (xi * xi - recon).norm() / (sup * sup)
                );
            }
            let d = duplication(&m, &p).unwrap();
            for (j, (yj, b)) in y.iter().zip(&tc.bmat).enumerate() {
                let recon = b[0] * d.x1 + b[1] * d.x2;
                assert!(
                    (yj * yj - recon).norm() <= 1e-8 * sup.powi(4),
                    "y{}^2 reconstruction off by {:e}",
                    j + 1,
                    (yj * yj - recon).norm() / sup.powi(4)
                );
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    println!(
        "PASS 2/9: both square-reconstruction identities at 1e-8 over 100 curves x 100 points in {:?}",
        elapsed
    );
}

#[test]
fn criterion_3_bound_sequence_monotone() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1d_2022);
    let cfg = BoundConfig { rel_tol: 1e-12, max_iter: 30, variant: None, safety_slack: 0.0 };
    for _ in 0..200 {
        let m = random_complex_curve(&mut rng);
        let res = compute_bound(&m, PlaceSpec::Complex, &cfg).unwrap();
        for w in res.c_seq.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "c rose from {} to {}", w[0], w[1]);
        }
        let c = *res.c_seq.last().unwrap();
        let b = *res.b_seq.last().unwrap();
        assert!((c - b).abs() <= 1e-9, "c {} and b {} disagree at termination", c, b);
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    println!(
        "PASS 3/9: c sequence nonincreasing (1e-12 slack) and c, b agree to 1e-9 on 200 curves in {:?}",
        elapsed
    );
}

#[test]
fn criterion_4_bound_dominates_sampled_series() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1d_2023);
    let cases: [(PlaceSpec, bool); 2] = [(PlaceSpec::Real, true), (PlaceSpec::Complex, false)];
    for (place, want_real) in cases {
        for k in 0..50u64 {
            let m = if want_real {
                random_real_curve(&mut rng)
            } else {
                random_complex_curve(&mut rng)
            };
            let bound = compute_bound(&m, place, &BoundConfig::default()).unwrap().bound;
            let range = log_phi_range(&m).unwrap();
            let mut sampler = PointSampler::new(&m, place, 0x5eed_0000 + k).unwrap();
            for _ in 0..1000 {
                let p = sampler.next_point().unwrap();
                let ev = psi_value_with_range(&m, &p, 12, range).unwrap();
                assert!(
                    ev.value - ev.tail_bound <= bound + 1e-9,
                    "sampled series value {} (tail {}) above bound {}",
                    ev.value,
                    ev.tail_bound,
                    bound
                );
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!(
        "PASS 4/9: bound dominates 10^3 sampled series values on 50 curves per place kind in {:?}",
        elapsed
    );
}

#[test]
fn criterion_5_closed_form_curve() {
    // For y^2 = x^3 + x the log-domain map is affine, so every c value
    // equals the closed forms (4/3) log sqrt((1+sqrt(2))/2) at a complex
    // place and (4/3) log sqrt(1/2 + 2^(1/4)/2) at the real place.
    let m = CurveModel::from_real([0.0, 0.0, 0.0, 1.0, 0.0]).unwrap();
    let closed_complex = (4.0 / 3.0) * (0.5 * (1.0 + 2.0f64.sqrt())).sqrt().ln();
    let closed_real = (4.0 / 3.0) * (0.5 + 0.5 * 2.0f64.powf(0.25)).sqrt().ln();

    let complex = compute_bound(&m, PlaceSpec::Complex, &BoundConfig::default()).unwrap();
    let real = compute_bound(&m, PlaceSpec::Real, &BoundConfig::default()).unwrap();
    assert_eq!(real.variant_used, Variant::RealOneComponent);

    assert!(
        (complex.bound - closed_complex).abs() <= 1e-5,
        "complex bound {} vs closed form {}",
        complex.bound,
        closed_complex
    );
    assert!(
        (real.bound - closed_real).abs() <= 1e-5,
        "real bound {} vs closed form {}",
        real.bound,
        closed_real
    );
    for res in [&complex, &real] {
        for cn in &res.c_seq {
            assert!(
                (cn - res.c_seq[0]).abs() <= 1e-12,
                "c sequence not constant: {} vs {}",
                cn,
                res.c_seq[0]
            );
        }
    }
    println!(
        "PASS 5/9: closed-form curve bounds {:.7} (complex) and {:.7} (real) match to 1e-5 with constant c",
        complex.bound, real.bound
    );
}

#[test]
fn criterion_6_translation_matrix_algebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1d_2024);
    for _ in 0..100 {
        let m = random_complex_curve(&mut rng);
        let tc: TorsionConstants = torsion_constants(&m, PlaceSpec::Complex).unwrap();
        let mats: Vec<_> = tc.xt.iter().map(|t| translation_matrix(&m, *t)).collect();
        let max_t = tc.xt.iter().map(|t| t.norm()).fold(0.0f64, f64::max);
        for (t, mat) in tc.xt.iter().zip(&mats) {
            let tol = 1e-10 * (1.0 + t.norm()).powi(2);
            for r in 0..2 {
                for s in 0..2 {
                    let mut sq = mat.m[r][0] * mat.m[0][s] + mat.m[r][1] * mat.m[1][s];
                    if r == s {
                        sq += mat.det;
                    }
                    assert!(sq.norm() <= tol, "involution defect {:e} over {:e}", sq.norm(), tol);
                }
            }
        }
        let tol = 1e-8 * (1.0 + max_t).powi(4);
        for j in 0..3 {
            for k in (j + 1)..3 {
                for r in 0..2 {
                    for s in 0..2 {
                        let jk =
                            mats[j].m[r][0] * mats[k].m[0][s] + mats[j].m[r][1] * mats[k].m[1][s];
                        let kj =
                            mats[k].m[r][0] * mats[j].m[0][s] + mats[k].m[r][1] * mats[j].m[1][s];
                        assert!(
                            (jk + kj).norm() <= tol,
                            "anticommutation defect {:e} over {:e}",
                            (jk + kj).norm(),
                            tol
                        );
                    }
                }
            }
        }
    }
    println!("PASS 6/9: involution and anticommutation hold on 100 curves");
}

#[test]
fn criterion_7_doubling_cross_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1d_2025);
    for _ in 0..20 {
        let m = random_complex_curve(&mut rng);
        for _ in 0..1000 {
            let x = Complex64::new(rng.gen_range(-3.0..=3.0), rng.gen_range(-3.0..=3.0));
            let p = lift_x(&m, x, rng.gen());
            let doubled = double_point(&m, &p).unwrap();
            let via_delta = duplication(&m, &p.projective()).unwrap();
            let gap = doubled.projective().projective_distance(&via_delta);
            assert!(gap <= 1e-8, "doubling paths disagree by {:e} at x = {}", gap, x);
        }
    }
    println!("PASS 7/9: affine doubling matches the duplication map on 20 curves x 10^3 points");
}

#[test]
fn criterion_8_first_bound_cross_path() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1d_2026);
    let cfg = BoundConfig { rel_tol: 1e-9, max_iter: 1, variant: None, safety_slack: 0.0 };
    for _ in 0..100 {
        let m = random_complex_curve(&mut rng);
        let tc = torsion_constants(&m, PlaceSpec::Complex).unwrap();
        let res = iterate_bound(&tc, Variant::ComplexFormula, &cfg).unwrap();
        // Direct evaluation of 4/3 log max_i phi_i(1,1) from the raw
        // constants, bypassing the iteration code path.
        let mut best = 0.0f64;
        for i in 0..2 {
            let mut total = 0.0;
            for j in 0..3 {
                let inner = tc.bmat[j][0].norm() + tc.bmat[j][1].norm();
                total += tc.amat[i][j].norm() * inner.sqrt();
            }
            best = best.max(total.sqrt());
        }
        let direct = (4.0 / 3.0) * best.ln();
        assert!(
            (res.c_seq[0] - direct).abs() <= 1e-12 * direct.abs().max(1.0),
            "c1 {} vs direct {}",
            res.c_seq[0],
            direct
        );
    }
    println!("PASS 8/9: first c value equals 4/3 log phi(1,1) by direct evaluation on 100 curves");
}

#[test]
fn criterion_9_small_conductor_speed_and_soundness() {
    let curve = small_conductor_curve();
    compute_bound(&curve, PlaceSpec::Real, &BoundConfig::default()).unwrap();
    let start = Instant::now();
    let res = compute_bound(&curve, PlaceSpec::Real, &BoundConfig::default()).unwrap();
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_millis(10), "took {elapsed:?}");

    let range = log_phi_range(&curve).unwrap();
    let mut sampler = PointSampler::new(&curve, PlaceSpec::Real, 0x5eed_11a2).unwrap();
    let mut empirical = f64::NEG_INFINITY;
    for _ in 0..10_000 {
        let p = sampler.next_point().unwrap();
        let ev = psi_value_with_range(&curve, &p, 12, range).unwrap();
        empirical = empirical.max(ev.value + ev.tail_bound);
    }
    assert!(
        res.bound > empirical,
        "bound {} does not exceed empirical max {}",
        res.bound,
        empirical
    );
    println!(
        "PASS 9/9: conductor-11 bound {:.6} in {:?} exceeds empirical max {:.6} over 10^4 samples",
        res.bound, elapsed, empirical
    );
}
