//! The Dirac-type multiplier `M_ℓ`, iterated commutators `Δᵏ(f)` and the
//! commutator seminorms `Lᵏ_ℓ` they induce.
//!
//! `Δᵏ(f)` acts fibre-wise with the closed-form entries
//! `(ℓ(g,x) − ℓ(h,x))ᵏ f(gh⁻¹, h·x)`; the nested-commutator recursion is
//! kept only as a test oracle. The seminorm kernel is exactly the functions
//! supported on units.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::algebra::AlgebraElement;
use crate::groupoid::LengthFunction;
use crate::linalg;

/// Iterated commutator powers beyond this overflow double precision for
/// long length functions; the CLI enforces the cap, the library does not.
pub const DEFAULT_MAX_K: u32 = 12;

/// Pointwise multiplication by ℓ: `M_ℓ(f)(g, x) = ℓ(g, x) f(g, x)`.
pub fn m_ell_apply(f: &AlgebraElement, length: &LengthFunction) -> AlgebraElement {
    AlgebraElement::from_fn(f.groupoid().clone(), |g, x| {
        f.value(g, x) * C64::new(length.value(g, x), 0.0)
    })
}

/// k-fold application of `M_ℓ`, i.e. multiplication by ℓᵏ.
pub fn m_ell_power(f: &AlgebraElement, length: &LengthFunction, k: u32) -> AlgebraElement {
    AlgebraElement::from_fn(f.groupoid().clone(), |g, x| {
        f.value(g, x) * C64::new(length.value(g, x).powi(k as i32), 0.0)
    })
}

/// The fibre block of `Δᵏ(f)` at x:
/// `entry[g][h] = (ℓ(g,x) − ℓ(h,x))ᵏ f(gh⁻¹, h·x)`.
pub fn delta_matrix(
    f: &AlgebraElement,
    length: &LengthFunction,
    x: usize,
    k: u32,
) -> DMatrix<C64> {
    assert!(k >= 1, "commutator order must be at least 1");
    let gpd = f.groupoid();
    let group = gpd.group();
    DMatrix::from_fn(group.order(), group.order(), |g, h| {
        let diff = length.value(g, x) - length.value(h, x);
        f.value(group.mul(g, group.inv(h)), gpd.act(h, x)) * C64::new(diff.powi(k as i32), 0.0)
    })
}

/// `Δᵏ(f)(𝓔)` as an algebra element: `γ ↦ ℓ(γ)ᵏ f(γ)`.
pub fn apply_to_unit(f: &AlgebraElement, length: &LengthFunction, k: u32) -> AlgebraElement {
    assert!(k >= 1, "commutator order must be at least 1");
    m_ell_power(f, length, k)
}

/// The commutator seminorm `Lᵏ_ℓ(f)`: max over fibres of the spectral norm
/// of the Δᵏ block.
pub fn lipschitz_seminorm(f: &AlgebraElement, length: &LengthFunction, k: u32) -> f64 {
    (0..f.groupoid().space_size())
        .map(|x| linalg::spectral_norm(&delta_matrix(f, length, x, k)))
        .fold(0.0, f64::max)
}

/// Whether `Lᵏ_ℓ(f)` vanishes to the given tolerance, i.e. whether f lies in
/// the seminorm kernel C(X). Equivalent to the syntactic test that every
/// off-unit entry is below `tol / ℓ_minᵏ`.
pub fn kernel_test(f: &AlgebraElement, length: &LengthFunction, k: u32, tol: f64) -> bool {
    assert!(tol > 0.0);
    lipschitz_seminorm(f, length, k) <= tol
}

/// The syntactic counterpart of [`kernel_test`]: max off-unit entry against a
/// threshold converted through `ℓ_min = min{ℓ(g,x) : g ≠ e}`. The spectral
/// seminorm dominates `ℓ_minᵏ` times the largest off-unit entry, so both
/// tests agree up to that factor.
pub fn kernel_test_syntactic(
    f: &AlgebraElement,
    length: &LengthFunction,
    k: u32,
    tol: f64,
) -> bool {
    assert!(tol > 0.0);
    let identity = f.groupoid().group().identity();
    let max_off_unit = f
        .groupoid()
        .arrows()
        .filter(|&(g, _)| g != identity)
        .map(|(g, x)| f.value(g, x).norm())
        .fold(0.0, f64::max);
    let ell_min = length.min_positive();
    max_off_unit * ell_min.powi(k as i32) <= tol
}

/// Default numeric zero threshold for kernel decisions.
pub fn default_kernel_tolerance(f: &AlgebraElement) -> f64 {
    1e-10 * (1.0 + f.sup_norm())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::groupoid::{FiniteGroup, GroupAction, TransformationGroupoid};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn z2_point() -> (Arc<TransformationGroupoid>, LengthFunction) {
        let g = Arc::new(
            TransformationGroupoid::new(FiniteGroup::cyclic(2), 1, GroupAction::trivial(2, 1))
                .unwrap(),
        );
        let l = LengthFunction::word_length(&g, &[1], &[1.0]).unwrap();
        (g, l)
    }

    fn z2_swap() -> (Arc<TransformationGroupoid>, LengthFunction) {
        let action = GroupAction::new(vec![vec![0, 1], vec![1, 0]]);
        let g =
            Arc::new(TransformationGroupoid::new(FiniteGroup::cyclic(2), 2, action).unwrap());
        let l = LengthFunction::word_length(&g, &[1], &[1.0]).unwrap();
        (g, l)
    }

    fn z2_element(g: &Arc<TransformationGroupoid>, a: f64, b: f64) -> AlgebraElement {
        AlgebraElement::from_fn(g.clone(), |gg, _| {
            if gg == 0 {
                c(a, 0.0)
            } else {
                c(b, 0.0)
            }
        })
    }

    #[test]
    fn m_ell_kills_the_unit() {
        let (g, l) = z2_point();
        let e = AlgebraElement::unit_element(g);
        assert_eq!(m_ell_apply(&e, &l).sup_norm(), 0.0);
    }

    #[test]
    fn m_ell_pointwise_product() {
        let (g, l) = z2_point();
        let f = z2_element(&g, 1.0, 2.0);
        let mf = m_ell_apply(&f, &l);
        assert_eq!(mf.value(0, 0), c(0.0, 0.0));
        assert_eq!(mf.value(1, 0), c(2.0, 0.0));
    }

    #[test]
    fn iterated_m_ell_scales_deltas() {
        let (g, l) = z2_point();
        let d = AlgebraElement::delta(g, 1, 0);
        for k in 1..=4 {
            let out = m_ell_power(&d, &l, k);
            let expected = l.value(1, 0).powi(k as i32);
            assert!((out.value(1, 0).re - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn delta_matrix_entries_z2() {
        let (g, l) = z2_point();
        let f = z2_element(&g, 3.0, 2.0); // f = (a, b) with a = 3, b = 2
        let m1 = delta_matrix(&f, &l, 0, 1);
        let expected =
            DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(-2.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)]);
        assert!(linalg::max_abs_diff(&m1, &expected) < 1e-15);
        let m2 = delta_matrix(&f, &l, 0, 2);
        let expected2 =
            DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)]);
        assert!(linalg::max_abs_diff(&m2, &expected2) < 1e-15);
    }

    #[test]
    fn unit_supported_elements_have_zero_delta() {
        let (g, l) = z2_swap();
        let f = AlgebraElement::random(g, 3).restrict_to_units();
        for x in 0..2 {
            for k in 1..=3 {
                assert_eq!(delta_matrix(&f, &l, x, k).iter().map(|c| c.norm()).sum::<f64>(), 0.0);
            }
        }
        assert_eq!(lipschitz_seminorm(&f, &l, 1), 0.0);
    }

    #[test]
    fn diagonal_of_delta_matrix_vanishes() {
        let (g, l) = z2_swap();
        let f = AlgebraElement::random(g, 9);
        for x in 0..2 {
            for k in 1..=4 {
                let m = delta_matrix(&f, &l, x, k);
                for i in 0..m.nrows() {
                    assert_eq!(m[(i, i)], c(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn apply_to_unit_matches_matrix_action() {
        let (g, l) = z2_swap();
        let e = AlgebraElement::unit_element(g.clone());
        for seed in 0..20 {
            let f = AlgebraElement::random(g.clone(), seed);
            for k in 1..=4 {
                let direct = apply_to_unit(&f, &l, k);
                for x in 0..g.space_size() {
                    let m = delta_matrix(&f, &l, x, k);
                    let unit_vec = nalgebra::DVector::from_iterator(
                        g.order(),
                        (0..g.order()).map(|gg| e.value(gg, x)),
                    );
                    let out = m * unit_vec;
                    for gg in 0..g.order() {
                        assert!((out[gg] - direct.value(gg, x)).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn apply_to_unit_example() {
        let (g, l) = z2_point();
        let f = z2_element(&g, 1.0, 2.0);
        let out = apply_to_unit(&f, &l, 3);
        assert_eq!(out.value(0, 0), c(0.0, 0.0));
        assert_eq!(out.value(1, 0), c(2.0, 0.0));
    }

    #[test]
    fn seminorm_of_offdiagonal_z2() {
        let (g, l) = z2_point();
        let f = z2_element(&g, 7.0, 2.0);
        assert!((lipschitz_seminorm(&f, &l, 1) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn seminorm_dominated_by_i_norm_of_m_ell_power() {
        let (g, l) = z2_swap();
        for seed in 0..30 {
            let f = AlgebraElement::random(g.clone(), seed);
            for k in 1..=3 {
                let lhs = lipschitz_seminorm(&f, &l, k);
                let rhs = m_ell_power(&f, &l, k).i_norm();
                assert!(lhs <= rhs + 1e-10);
            }
        }
    }

    #[test]
    fn seminorm_is_star_invariant() {
        let (g, l) = z2_swap();
        for seed in 0..30 {
            let f = AlgebraElement::random(g.clone(), seed);
            for k in 1..=3 {
                let a = lipschitz_seminorm(&f, &l, k);
                let b = lipschitz_seminorm(&f.involution(), &l, k);
                assert!((a - b).abs() <= 1e-12 * (1.0 + a));
            }
        }
    }

    #[test]
    fn adjointness_of_delta_matrices() {
        // Δᵏ(f)* = (−1)ᵏ Δᵏ(f*) fibre-wise
        let (g, l) = z2_swap();
        for seed in 0..30 {
            let f = AlgebraElement::random(g.clone(), seed);
            let fs = f.involution();
            for k in 1..=4 {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                for x in 0..g.space_size() {
                    let lhs = delta_matrix(&f, &l, x, k).adjoint();
                    let rhs = delta_matrix(&fs, &l, x, k) * c(sign, 0.0);
                    assert!(linalg::max_abs_diff(&lhs, &rhs) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn closed_form_matches_commutator_recursion() {
        let (g, l) = z2_swap();
        for seed in 0..10 {
            let f = AlgebraElement::random(g.clone(), seed);
            for x in 0..g.space_size() {
                let m_ell = DMatrix::from_fn(g.order(), g.order(), |i, j| {
                    if i == j {
                        c(l.value(i, x), 0.0)
                    } else {
                        c(0.0, 0.0)
                    }
                });
                let mut prev = f.fibre_matrix(x).unwrap();
                for k in 1..=4 {
                    let rec = &m_ell * &prev - &prev * &m_ell;
                    let closed = delta_matrix(&f, &l, x, k);
                    assert!(linalg::max_abs_diff(&rec, &closed) < 1e-12);
                    prev = rec;
                }
            }
        }
    }

    #[test]
    fn kernel_tests_agree() {
        let (g, l) = z2_swap();
        for seed in 0..200 {
            let f = AlgebraElement::random(g.clone(), seed);
            let candidate = if seed % 2 == 0 {
                f.restrict_to_units()
            } else {
                f
            };
            let tol = default_kernel_tolerance(&candidate);
            for k in 1..=2 {
                assert_eq!(
                    kernel_test(&candidate, &l, k, tol),
                    kernel_test_syntactic(&candidate, &l, k, tol),
                );
            }
        }
    }

    #[test]
    fn delta_element_not_in_kernel() {
        let (g, l) = z2_swap();
        let d = AlgebraElement::delta(g, 1, 0);
        assert!(!kernel_test(&d, &l, 1, default_kernel_tolerance(&d)));
    }

    #[test]
    fn seminorm_triangle_and_homogeneity() {
        let (g, l) = z2_swap();
        for seed in 0..20 {
            let a = AlgebraElement::random(g.clone(), seed);
            let b = AlgebraElement::random(g.clone(), seed + 1000);
            for k in 1..=2 {
                let la = lipschitz_seminorm(&a, &l, k);
                let lb = lipschitz_seminorm(&b, &l, k);
                let lsum = lipschitz_seminorm(&(&a + &b), &l, k);
                assert!(lsum <= la + lb + 1e-10);
                let scaled = lipschitz_seminorm(&(&a * 2.5), &l, k);
                assert!((scaled - 2.5 * la).abs() <= 1e-10 * (1.0 + la));
            }
        }
    }
}
