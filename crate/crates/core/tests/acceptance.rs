//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Tolerances are pinned; every oracle value was derived independently of
//! the code under test (closed forms, grid/sampling maximization, or
//! exhaustive checks at desk scale).

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use gqml::algebra::{AlgebraElement, SobolevSide};
use gqml::dirac;
use gqml::groupoid::{LengthFunction, TransformationGroupoid};
use gqml::metric::{
    alpha_constant, brute_force_distance, connes_distance, CertificateStatus, DistanceOptions,
};
use gqml::rd;
use gqml::spec_io;
use gqml::state::{State, FIBRE_TOLERANCE};

fn spec_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../specs")
        .join(name)
}

fn load(name: &str) -> (Arc<TransformationGroupoid>, LengthFunction) {
    let bundle = spec_io::load_groupoid_spec(&spec_path(name)).expect("shipped spec is valid");
    (bundle.groupoid, bundle.length)
}

fn the_three_specs() -> Vec<(&'static str, Arc<TransformationGroupoid>, LengthFunction)> {
    ["z2_swap.json", "z4_rotation.json", "s3_natural.json"]
        .into_iter()
        .map(|name| {
            let (g, l) = load(name);
            (name, g, l)
        })
        .collect()
}

fn random_element(
    groupoid: &Arc<TransformationGroupoid>,
    rng: &mut ChaCha8Rng,
) -> AlgebraElement {
    AlgebraElement::random_with(groupoid.clone(), rng)
}

fn report(criterion: u32, passed: bool, detail: &str) {
    let tag = if passed { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {criterion}: {detail}");
    assert!(passed, "criterion {criterion} failed: {detail}");
}

#[test]
fn criterion_01_character_distance() {
    let start = Instant::now();
    let (g, l) = load("z2_point.json");
    let s = 1.0 / 2.0_f64.sqrt();
    let plus = State::vector_state(g.clone(), 0, &[C64::new(s, 0.0), C64::new(s, 0.0)]).unwrap();
    let minus =
        State::vector_state(g.clone(), 0, &[C64::new(s, 0.0), C64::new(-s, 0.0)]).unwrap();
    let cert = connes_distance(&plus, &minus, &l, 1, DistanceOptions::default()).unwrap();
    let oracle = brute_force_distance(&plus, &minus, &l, 1, 100_000, 17).unwrap();
    let elapsed = start.elapsed();
    let ok = (cert.value() - 2.0).abs() <= 1e-6
        && cert.gap <= 1e-6
        && (oracle - 2.0).abs() <= 1e-3
        && elapsed.as_secs_f64() < 1.0;
    report(
        1,
        ok,
        &format!(
            "character distance {:.9} (gap {:.2e}, oracle {:.6}, {:.0} ms)",
            cert.value(),
            cert.gap,
            oracle,
            elapsed.as_secs_f64() * 1e3
        ),
    );
}

#[test]
fn criterion_02_adjointness() {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for (_, g, l) in the_three_specs() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..500 {
            let f = random_element(&g, &mut rng);
            let fs = f.involution();
            for k in 1..=4u32 {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                for x in 0..g.space_size() {
                    let lhs = dirac::delta_matrix(&f, &l, x, k).adjoint();
                    let rhs = dirac::delta_matrix(&fs, &l, x, k) * C64::new(sign, 0.0);
                    worst = worst.max(gqml::linalg::max_abs_diff(&lhs, &rhs));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = worst <= 1e-12 && elapsed.as_secs_f64() < 10.0;
    report(
        2,
        ok,
        &format!(
            "Δᵏ(f)* = (−1)ᵏΔᵏ(f*) worst deviation {:.2e} over 3×500 samples, k ≤ 4 ({:.1} s)",
            worst,
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_03_kernel() {
    let mut worst_on_units = 0.0_f64;
    let mut worst_bound_slack = f64::NEG_INFINITY;
    for (_, g, l) in the_three_specs() {
        let ell_min = l.min_positive();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let identity = g.group().identity();
        for k in 1..=3u32 {
            for _ in 0..100 {
                let f = random_element(&g, &mut rng).restrict_to_units();
                worst_on_units = worst_on_units.max(dirac::lipschitz_seminorm(&f, &l, k));
            }
            for _ in 0..100 {
                let gg = 1 + rng.gen_range(0..g.order() - 1);
                assert_ne!(gg, identity);
                let x = rng.gen_range(0..g.space_size());
                let v = C64::new(
                    StandardNormal.sample(&mut rng),
                    StandardNormal.sample(&mut rng),
                );
                let f = &AlgebraElement::delta(g.clone(), gg, x) * v;
                let seminorm = dirac::lipschitz_seminorm(&f, &l, k);
                worst_bound_slack = worst_bound_slack.max(ell_min * v.norm() - seminorm);
            }
        }
    }
    let ok = worst_on_units <= 1e-12 && worst_bound_slack <= 1e-9;
    report(
        3,
        ok,
        &format!(
            "kernel: Lᵏ ≤ {:.2e} on C(X); off-unit lower bound violated by at most {:.2e}",
            worst_on_units, worst_bound_slack
        ),
    );
}

#[test]
fn criterion_04_cross_fibre_infinity() {
    let (g, l) = load("z2_swap.json");
    let mut count = 0usize;
    let mut seed = 0u64;
    let mut all_infinite = true;
    while count < 50 {
        let a = State::random(g.clone(), 1000 + seed);
        let b = State::random(g.clone(), 2000 + seed);
        seed += 1;
        if a.fibre_measure().max_difference(&b.fibre_measure()) <= 1e-6 {
            continue;
        }
        count += 1;
        let cert = connes_distance(&a, &b, &l, 1, DistanceOptions::default()).unwrap();
        if cert.status != CertificateStatus::Infinite || cert.upper.is_finite() {
            all_infinite = false;
        }
    }
    report(
        4,
        all_infinite,
        "50 cross-fibre pairs (measure difference > 1e-6) all reported infinite",
    );
}

#[test]
fn criterion_05_norm_chain_and_cstar() {
    let mut worst_chain = f64::NEG_INFINITY;
    let mut worst_cstar = 0.0_f64;
    for name in [
        "z2_point.json",
        "z2_swap.json",
        "z4_point.json",
        "z4_rotation.json",
        "s3_natural.json",
    ] {
        let (g, _) = load(name);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let f = random_element(&g, &mut rng);
            let (sup, red, i) = (f.sup_norm(), f.reduced_norm(), f.i_norm());
            worst_chain = worst_chain.max(sup - red).max(red - i);
            let lhs = f.involution().convolve(&f).unwrap().reduced_norm();
            let rhs = red * red;
            worst_cstar = worst_cstar.max((lhs - rhs).abs() / rhs.max(1e-300));
        }
    }
    let ok = worst_chain <= 1e-12 && worst_cstar <= 1e-9;
    report(
        5,
        ok,
        &format!(
            "sup ≤ reduced ≤ I (worst slack {:.2e}); C*-identity relative error {:.2e}",
            worst_chain, worst_cstar
        ),
    );
}

#[test]
fn criterion_06_sobolev_seminorm_bound() {
    let mut violations = 0usize;
    let mut worst_margin = f64::INFINITY;
    for name in [
        "z2_point.json",
        "z2_swap.json",
        "z4_point.json",
        "z4_rotation.json",
        "s3_natural.json",
    ] {
        let (g, l) = load(name);
        for (p, k, n) in [(0.5, 1u32, 1.0), (1.0, 2, 2.0)] {
            let alpha = alpha_constant(&g, &l, k, p, n).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(6);
            for _ in 0..1000 {
                let f = random_element(&g, &mut rng);
                let f = &f - &f.restrict_to_units();
                let lhs = f.sobolev_norm(&l, p, SobolevSide::Max).unwrap();
                let rhs = alpha * dirac::lipschitz_seminorm(&f, &l, k);
                if lhs > rhs + 1e-9 {
                    violations += 1;
                }
                worst_margin = worst_margin.min(rhs - lhs);
            }
        }
    }
    report(
        6,
        violations == 0,
        &format!(
            "‖f‖₂,p,ℓ ≤ α·Lᵏ(f): {violations} violations over 5 specs × 2 parameter sets \
             (minimum slack {worst_margin:.3e})"
        ),
    );
}

#[test]
fn criterion_07_finite_diameter() {
    let start = Instant::now();
    let (k, p, n) = (1u32, 0.5, 1.0);
    let mut ok = true;
    let mut detail = String::new();
    for (name, g, l) in the_three_specs() {
        let rd_report = rd::empirical_rd_constant(&g, &l, p, 10_000, 7);
        let alpha = alpha_constant(&g, &l, k, p, n).unwrap();
        let bound = 2.0 * rd_report.empirical_c * alpha;
        let mut worst = 0.0_f64;
        for i in 0..20u64 {
            let a = State::random(g.clone(), 7000 + i);
            let b = State::random(g.clone(), 8000 + i)
                .reweighted_to(&a.fibre_measure())
                .unwrap();
            let cert = connes_distance(&a, &b, &l, k, DistanceOptions::default()).unwrap();
            worst = worst.max(cert.upper);
        }
        // the doubled-C rerun only relaxes the bound, so one comparison covers both
        if worst > bound + 1e-6 {
            ok = false;
        }
        detail.push_str(&format!("{name}: max distance {worst:.4} ≤ bound {bound:.4}; "));
    }
    let elapsed = start.elapsed();
    ok = ok && elapsed.as_secs_f64() < 300.0;
    report(
        7,
        ok,
        &format!("{detail}({:.1} s)", elapsed.as_secs_f64()),
    );
}

#[test]
fn criterion_08_oracle_equivalence() {
    let mut ok = true;
    let mut detail = String::new();
    for name in ["z2_point.json", "z2_swap.json", "z4_point.json"] {
        let (g, l) = load(name);
        let a = State::random(g.clone(), 81);
        let b = State::random(g.clone(), 82)
            .reweighted_to(&a.fibre_measure())
            .unwrap();
        let cert = connes_distance(&a, &b, &l, 1, DistanceOptions::default()).unwrap();
        let oracle = brute_force_distance(&a, &b, &l, 1, 1_000_000, 83).unwrap();
        let deviation = (cert.value() - oracle).abs();
        let allowed = (1e-3_f64).max(0.05 * cert.value());
        if deviation > allowed {
            ok = false;
        }
        detail.push_str(&format!(
            "{name}: certificate {:.6} vs sampled {:.6}; ",
            cert.value(),
            oracle
        ));
    }
    report(8, ok, &detail);
}

#[test]
fn criterion_09_weak_star_path() {
    let (g, l) = load("z4_rotation.json");
    let base = State::random(g.clone(), 90);
    let far = State::random(g.clone(), 91)
        .reweighted_to(&base.fibre_measure())
        .unwrap();
    let d0 = connes_distance(&far, &base, &l, 2, DistanceOptions::default())
        .unwrap()
        .upper;
    // seeded path ρ_t = t·start + (1−t)·ρ₀ with d(start, ρ₀) ≤ 1/2
    let start_state = far.mix(&base, (0.5 / d0).min(1.0)).unwrap();
    let mut previous = f64::INFINITY;
    let mut entrywise_prev = f64::INFINITY;
    let mut monotone = true;
    let mut final_distance = f64::INFINITY;
    for j in [0i32, 2, 4, 6, 8, 10] {
        let t = 0.5_f64.powi(j);
        let rho_t = start_state.mix(&base, t).unwrap();
        let entrywise = rho_t
            .blocks()
            .iter()
            .zip(base.blocks())
            .map(|(a, b)| gqml::linalg::max_abs_diff(a, b))
            .fold(0.0_f64, f64::max);
        let cert = connes_distance(&rho_t, &base, &l, 2, DistanceOptions::default()).unwrap();
        if cert.upper > previous + 1e-9 || entrywise > entrywise_prev + 1e-15 {
            monotone = false;
        }
        previous = cert.upper;
        entrywise_prev = entrywise;
        final_distance = cert.upper;
    }
    let ok = monotone && final_distance < 1e-3;
    report(
        9,
        ok,
        &format!(
            "distance along ρ_t → ρ₀ decreases to {final_distance:.2e} at t = 2⁻¹⁰ (monotone: {monotone})"
        ),
    );
}

#[test]
fn criterion_10_verify_determinism() {
    let binary = env!("CARGO_BIN_EXE_gqml");
    let dir = std::env::temp_dir().join("gqml-acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    let out_a = dir.join("verify-a.json");
    let out_b = dir.join("verify-b.json");
    for out in [&out_a, &out_b] {
        let status = std::process::Command::new(binary)
            .args([
                "verify",
                "--spec",
                spec_path("z2_swap.json").to_str().unwrap(),
                "--seed",
                "42",
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success(), "verify run failed");
    }
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    report(
        10,
        a == b,
        &format!("two verify runs, seed 42: {} bytes, byte-identical: {}", a.len(), a == b),
    );
}

// keep the fibre tolerance visible in this suite: the cross-fibre criterion
// depends on the shipped default staying at 1e-8
#[test]
fn fibre_tolerance_is_pinned() {
    assert_eq!(FIBRE_TOLERANCE, 1e-8);
}
