//! Rapid-decay diagnostics: norm-ratio sampling, empirical constants, and
//! ball-truncation tails.
//!
//! Finite dimension guarantees some finite constant C with
//! `‖f‖_red ≤ C ‖f‖₂,p,ℓ`; the interesting output is the size of the
//! empirical constant and how the truncation tails decay. The reported C is
//! a lower estimate of the optimal constant, so downstream diameter checks
//! also rerun with the constant doubled.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{AlgebraElement, SobolevSide};
use crate::groupoid::{ball, LengthFunction, TransformationGroupoid};

#[derive(Debug, Error)]
pub enum RdError {
    #[error("rd_ratio is undefined for the zero element")]
    ZeroElement,
}

/// One sampling run of the rapid-decay ratio.
#[derive(Debug, Clone)]
pub struct RdReport {
    pub p: f64,
    pub sample_count: usize,
    /// Max observed ‖f‖_red / ‖f‖₂,p,ℓ — a lower estimate of the optimal C.
    pub empirical_c: f64,
    pub argmax: AlgebraElement,
    /// (n, max observed ‖f(1−χ_n)‖_red) for integer n up to ⌈max ℓ⌉.
    pub tail_table: Vec<(f64, f64)>,
}

/// `‖f‖_red / ‖f‖₂,p,max,ℓ` for a nonzero element.
pub fn rd_ratio(f: &AlgebraElement, length: &LengthFunction, p: f64) -> Result<f64, RdError> {
    if f.sup_norm() == 0.0 {
        return Err(RdError::ZeroElement);
    }
    let sobolev = f
        .sobolev_norm(length, p, SobolevSide::Max)
        .expect("p validated by caller contract");
    Ok(f.reduced_norm() / sobolev)
}

/// Zeroes every entry whose group element lies outside the ball Γ_n.
pub fn truncate(f: &AlgebraElement, length: &LengthFunction, n: f64) -> AlgebraElement {
    let subset = ball(f.groupoid(), length, n).group_subset;
    AlgebraElement::from_fn(f.groupoid().clone(), |g, x| {
        if subset.contains(&g) {
            f.value(g, x)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// `‖f − f·χ_n‖_red`, the reduced norm of the part outside Γ_n.
pub fn tail_norm(f: &AlgebraElement, length: &LengthFunction, n: f64) -> f64 {
    (f - &truncate(f, length, n)).reduced_norm()
}

/// Samples the rapid-decay ratio over the δ basis and seeded Gaussians, then
/// polishes the best sample by coordinate-wise complex perturbations with
/// step halving (200 rounds).
pub fn empirical_rd_constant(
    groupoid: &Arc<TransformationGroupoid>,
    length: &LengthFunction,
    p: f64,
    samples: usize,
    seed: u64,
) -> RdReport {
    assert!(samples >= 1, "requires samples ≥ 1");
    assert!(p > 0.0, "requires p > 0");
    let mut best = f64::NEG_INFINITY;
    let mut argmax = AlgebraElement::unit_element(groupoid.clone());
    let consider = |f: &AlgebraElement, best: &mut f64, argmax: &mut AlgebraElement| {
        if let Ok(r) = rd_ratio(f, length, p) {
            if r > *best {
                *best = r;
                *argmax = f.clone();
            }
        }
    };
    for g in 0..groupoid.order() {
        for x in 0..groupoid.space_size() {
            let d = AlgebraElement::delta(groupoid.clone(), g, x);
            consider(&d, &mut best, &mut argmax);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tail_samples: Vec<AlgebraElement> = Vec::new();
    for _ in 0..samples {
        let f = AlgebraElement::random_with(groupoid.clone(), &mut rng);
        consider(&f, &mut best, &mut argmax);
        if tail_samples.len() < 64 {
            tail_samples.push(f);
        }
    }
    // hill-climb from the best sample: perturb one complex coordinate at a
    // time, halve the step when a full sweep brings no improvement
    let mut step = 0.5;
    for _ in 0..200 {
        let mut improved = false;
        for g in 0..groupoid.order() {
            for x in 0..groupoid.space_size() {
                for delta in [
                    C64::new(step, 0.0),
                    C64::new(-step, 0.0),
                    C64::new(0.0, step),
                    C64::new(0.0, -step),
                ] {
                    let candidate = AlgebraElement::from_fn(groupoid.clone(), |gg, xx| {
                        if (gg, xx) == (g, x) {
                            argmax.value(gg, xx) + delta
                        } else {
                            argmax.value(gg, xx)
                        }
                    });
                    if let Ok(r) = rd_ratio(&candidate, length, p) {
                        if r > best {
                            best = r;
                            argmax = candidate;
                            improved = true;
                        }
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < 1e-12 {
                break;
            }
        }
    }
    let max_n = length.max_value().ceil() as usize;
    let tail_table = (0..=max_n)
        .map(|n| {
            let n = n as f64;
            let worst = tail_samples
                .iter()
                .map(|f| tail_norm(f, length, n))
                .fold(0.0_f64, f64::max);
            (n, worst)
        })
        .collect();
    RdReport {
        p,
        sample_count: samples,
        empirical_c: best,
        argmax,
        tail_table,
    }
}
