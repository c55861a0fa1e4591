//! The convolution *-algebra `C_c(G)` of a finite transformation groupoid,
//! with the regular representation and the norms built on it.
//!
//! Because convolution only ever sums over a single source fibre, the left
//! regular representation is block diagonal over `X`: the adjointable-operator
//! norm is the max over `x` of the spectral norm of one `|Γ|×|Γ|` block. All
//! norm routines below go through those fibre blocks.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::groupoid::{LengthFunction, TransformationGroupoid};
use crate::linalg;
use crate::solver::{self, Cut};

#[derive(Debug, Error, PartialEq)]
pub enum AlgebraError {
    #[error("elements live on different groupoids")]
    GroupoidMismatch,
    #[error("value table has shape {rows}×{cols}, groupoid wants {order}×{space}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        order: usize,
        space: usize,
    },
    #[error("point {x} out of range (space size {space})")]
    PointOutOfRange { x: usize, space: usize },
    #[error("Sobolev exponent must be positive, got {p}")]
    BadExponent { p: f64 },
}

/// Which side of the Sobolev norm to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SobolevSide {
    Source,
    Range,
    Max,
}

/// A complex-valued function on the arrow set `Γ × X`, stored densely with
/// rows indexed by group elements and columns by points.
#[derive(Debug, Clone)]
pub struct AlgebraElement {
    groupoid: Arc<TransformationGroupoid>,
    values: DMatrix<C64>,
}

impl AlgebraElement {
    pub fn new(
        groupoid: Arc<TransformationGroupoid>,
        values: DMatrix<C64>,
    ) -> Result<Self, AlgebraError> {
        if values.nrows() != groupoid.order() || values.ncols() != groupoid.space_size() {
            return Err(AlgebraError::ShapeMismatch {
                rows: values.nrows(),
                cols: values.ncols(),
                order: groupoid.order(),
                space: groupoid.space_size(),
            });
        }
        Ok(Self { groupoid, values })
    }

    pub fn from_fn(
        groupoid: Arc<TransformationGroupoid>,
        f: impl Fn(usize, usize) -> C64,
    ) -> Self {
        let values = DMatrix::from_fn(groupoid.order(), groupoid.space_size(), |g, x| f(g, x));
        Self { groupoid, values }
    }

    pub fn zeros(groupoid: Arc<TransformationGroupoid>) -> Self {
        let values = DMatrix::zeros(groupoid.order(), groupoid.space_size());
        Self { groupoid, values }
    }

    /// The multiplicative unit 𝓔: one on unit arrows, zero elsewhere.
    pub fn unit_element(groupoid: Arc<TransformationGroupoid>) -> Self {
        let identity = groupoid.group().identity();
        Self::from_fn(groupoid, |g, _| {
            if g == identity {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// The point mass δ at one arrow.
    pub fn delta(groupoid: Arc<TransformationGroupoid>, g: usize, x: usize) -> Self {
        let mut e = Self::zeros(groupoid);
        e.values[(g, x)] = C64::new(1.0, 0.0);
        e
    }

    /// Complex Gaussian element, deterministic per seed.
    pub fn random(groupoid: Arc<TransformationGroupoid>, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with(groupoid, &mut rng)
    }

    pub fn random_with(groupoid: Arc<TransformationGroupoid>, rng: &mut impl rand::Rng) -> Self {
        let values = DMatrix::from_fn(groupoid.order(), groupoid.space_size(), |_, _| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        });
        Self { groupoid, values }
    }

    pub fn groupoid(&self) -> &Arc<TransformationGroupoid> {
        &self.groupoid
    }

    pub fn value(&self, g: usize, x: usize) -> C64 {
        self.values[(g, x)]
    }

    pub fn values(&self) -> &DMatrix<C64> {
        &self.values
    }

    fn same_groupoid(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.groupoid, &other.groupoid) || self.groupoid == other.groupoid
    }

    /// Convolution `(f ∗ ξ)(g, x) = Σ_h f(gh⁻¹, h·x) ξ(h, x)`.
    pub fn convolve(&self, other: &Self) -> Result<Self, AlgebraError> {
        if !self.same_groupoid(other) {
            return Err(AlgebraError::GroupoidMismatch);
        }
        let gpd = &self.groupoid;
        let group = gpd.group();
        let out = Self::from_fn(self.groupoid.clone(), |g, x| {
            let mut acc = C64::new(0.0, 0.0);
            for h in 0..group.order() {
                let ghinv = group.mul(g, group.inv(h));
                acc += self.values[(ghinv, gpd.act(h, x))] * other.values[(h, x)];
            }
            acc
        });
        Ok(out)
    }

    /// Involution `f*(g, x) = conj f(g⁻¹, g·x)`.
    pub fn involution(&self) -> Self {
        let gpd = &self.groupoid;
        let group = gpd.group();
        Self::from_fn(self.groupoid.clone(), |g, x| {
            self.values[(group.inv(g), gpd.act(g, x))].conj()
        })
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        linalg::max_abs_diff(&self.values, &self.involution().values) <= tol
    }

    /// The block of the regular representation on `ℓ²(G_x)`:
    /// `entry[g][h] = f(gh⁻¹, h·x)` in element-index basis order.
    pub fn fibre_matrix(&self, x: usize) -> Result<DMatrix<C64>, AlgebraError> {
        if x >= self.groupoid.space_size() {
            return Err(AlgebraError::PointOutOfRange {
                x,
                space: self.groupoid.space_size(),
            });
        }
        let gpd = &self.groupoid;
        let group = gpd.group();
        Ok(DMatrix::from_fn(group.order(), group.order(), |g, h| {
            self.values[(group.mul(g, group.inv(h)), gpd.act(h, x))]
        }))
    }

    /// Reduced norm: max over fibres of the spectral norm of λ(f).
    pub fn reduced_norm(&self) -> f64 {
        (0..self.groupoid.space_size())
            .map(|x| linalg::spectral_norm(&self.fibre_matrix(x).expect("x in range")))
            .fold(0.0, f64::max)
    }

    /// The I-norm: max of the worst source-fibre and range-fibre ℓ¹ sums.
    pub fn i_norm(&self) -> f64 {
        let gpd = &self.groupoid;
        let mut source_side: f64 = 0.0;
        let mut range_side: f64 = 0.0;
        for x in 0..gpd.space_size() {
            let mut s = 0.0;
            let mut r = 0.0;
            for g in 0..gpd.order() {
                s += self.values[(g, x)].norm();
                let (gi, gx) = gpd.inverse((g, x));
                r += self.values[(gi, gx)].norm();
            }
            source_side = source_side.max(s);
            range_side = range_side.max(r);
        }
        source_side.max(range_side)
    }

    /// Hilbert-module norm: worst Euclidean norm of a source-fibre column.
    pub fn module_norm(&self) -> f64 {
        (0..self.groupoid.space_size())
            .map(|x| {
                (0..self.groupoid.order())
                    .map(|g| self.values[(g, x)].norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Zeroes every non-unit entry: the extension by zero of `f|_X`.
    pub fn restrict_to_units(&self) -> Self {
        let identity = self.groupoid.group().identity();
        Self::from_fn(self.groupoid.clone(), |g, x| {
            if g == identity {
                self.values[(g, x)]
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// The C(X)-valued inner product `⟨⟨ξ, η⟩⟩(x) = Σ_g conj ξ(g,x) η(g,x)`.
    pub fn inner_product(&self, other: &Self) -> Result<Vec<C64>, AlgebraError> {
        if !self.same_groupoid(other) {
            return Err(AlgebraError::GroupoidMismatch);
        }
        Ok((0..self.groupoid.space_size())
            .map(|x| {
                (0..self.groupoid.order())
                    .map(|g| self.values[(g, x)].conj() * other.values[(g, x)])
                    .sum()
            })
            .collect())
    }

    /// Weighted ℓ²-norm `‖f‖₂,p,ℓ` on the requested side.
    pub fn sobolev_norm(
        &self,
        length: &LengthFunction,
        p: f64,
        side: SobolevSide,
    ) -> Result<f64, AlgebraError> {
        if p <= 0.0 || !p.is_finite() {
            return Err(AlgebraError::BadExponent { p });
        }
        let gpd = &self.groupoid;
        let per_side = |range: bool| {
            (0..gpd.space_size())
                .map(|x| {
                    (0..gpd.order())
                        .map(|g| {
                            let v = if range {
                                let (gi, gx) = gpd.inverse((g, x));
                                self.values[(gi, gx)]
                            } else {
                                self.values[(g, x)]
                            };
                            v.norm_sqr() * (1.0 + length.value(g, x)).powf(2.0 * p)
                        })
                        .sum::<f64>()
                        .sqrt()
                })
                .fold(0.0_f64, f64::max)
        };
        Ok(match side {
            SobolevSide::Source => per_side(false),
            SobolevSide::Range => per_side(true),
            SobolevSide::Max => per_side(false).max(per_side(true)),
        })
    }

    /// Distance to `C(X)` in the reduced norm, certified by a cutting-plane
    /// lower bound. Uses the default tolerance 1e-8 and budget 5000 cuts.
    pub fn quotient_norm(&self) -> f64 {
        self.quotient_norm_certified(1e-8, 5000).value
    }

    /// Minimizes `‖f − φ‖_red` over `φ ∈ C(X)` by cutting planes.
    ///
    /// The objective is a max of `|X|` fibre spectral norms, each affine in
    /// the 2|X| real parameters of φ. Unit singular pairs of fibre blocks
    /// give affine underestimators, so the LP minimum is a certified lower
    /// bound while every evaluated φ gives an upper bound.
    pub fn quotient_norm_certified(&self, tol: f64, budget: usize) -> QuotientCertificate {
        let gpd = self.groupoid.clone();
        let space = gpd.space_size();
        let order = gpd.order();
        let dim = 2 * space; // Re and Im of φ per point
        // f − φ has fibre blocks F_x − diag(φ(g·x))_g
        let base: Vec<DMatrix<C64>> = (0..space)
            .map(|x| self.fibre_matrix(x).expect("x in range"))
            .collect();
        let eval = |phi: &[f64]| -> (f64, usize) {
            let mut worst = (0.0_f64, 0usize);
            for x in 0..space {
                let mut m = base[x].clone();
                for g in 0..order {
                    let y = gpd.act(g, x);
                    m[(g, g)] -= C64::new(phi[2 * y], phi[2 * y + 1]);
                }
                let s = linalg::spectral_norm(&m);
                if s > worst.0 {
                    worst = (s, x);
                }
            }
            worst
        };
        // the minimizer satisfies ‖φ‖_∞ = ‖φ‖_red ≤ 2‖f‖_red
        let radius = 2.0 * self.reduced_norm() + 1.0;
        let bounds: Vec<(f64, f64)> = std::iter::once((0.0, radius))
            .chain(std::iter::repeat((-radius, radius)).take(dim))
            .collect();
        // variables: [t, Re φ(0), Im φ(0), ...]; objective min t
        let mut objective = vec![0.0; dim + 1];
        objective[0] = 1.0;
        let mut cuts: Vec<Cut> = Vec::new();
        let add_cut = |cuts: &mut Vec<Cut>, phi: &[f64], x: usize| {
            let mut m = base[x].clone();
            for g in 0..order {
                let y = gpd.act(g, x);
                m[(g, g)] -= C64::new(phi[2 * y], phi[2 * y + 1]);
            }
            let (_, u, v) = linalg::top_singular_triple(&m);
            // σmax(F_x − Φ_x) ≥ Re⟨u, (F_x − Φ_x) v⟩ for unit u, v, so
            // t ≥ const − Σ_y (Re φ(y) Re w_y − Im φ(y) Im w_y), i.e.
            // −t − Σ_y Re w_y · Re φ(y) + Σ_y Im w_y · Im φ(y) ≤ −const
            let constant = (u.adjoint() * &base[x] * &v)[(0, 0)].re;
            let mut coeffs = vec![0.0; dim + 1];
            coeffs[0] = -1.0;
            for g in 0..order {
                let y = gpd.act(g, x);
                let w = u[g].conj() * v[g];
                coeffs[1 + 2 * y] -= w.re;
                coeffs[1 + 2 * y + 1] += w.im;
            }
            cuts.push(Cut {
                coeffs,
                rhs: -constant,
            });
        };
        let mut phi = vec![0.0; dim];
        let (mut upper, _) = eval(&phi);
        let mut best_phi = phi.clone();
        let mut lower = 0.0_f64;
        let mut iterations = 0usize;
        while iterations < budget {
            iterations += 1;
            let (_, worst_x) = eval(&phi);
            add_cut(&mut cuts, &phi, worst_x);
            let lp = solver::lp_minimize(&objective, &cuts, &bounds);
            let (point, value) = match lp {
                Ok(r) => r,
                Err(_) => break,
            };
            lower = lower.max(value.max(0.0));
            phi = point[1..].to_vec();
            let (val, _) = eval(&phi);
            if val < upper {
                upper = val;
                best_phi = phi.clone();
            }
            if upper - lower <= tol {
                break;
            }
        }
        QuotientCertificate {
            value: upper,
            lower,
            upper,
            gap: upper - lower,
            iterations,
            witness: best_phi,
            converged: upper - lower <= tol,
        }
    }
}

/// Certified bounds for the quotient-norm minimization.
#[derive(Debug, Clone)]
pub struct QuotientCertificate {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub gap: f64,
    pub iterations: usize,
    /// [Re φ(0), Im φ(0), ...] of the best unit-supported subtrahend.
    pub witness: Vec<f64>,
    pub converged: bool,
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: Self) -> AlgebraElement {
        assert!(self.same_groupoid(rhs), "groupoid mismatch");
        AlgebraElement {
            groupoid: self.groupoid.clone(),
            values: &self.values + &rhs.values,
        }
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: Self) -> AlgebraElement {
        assert!(self.same_groupoid(rhs), "groupoid mismatch");
        AlgebraElement {
            groupoid: self.groupoid.clone(),
            values: &self.values - &rhs.values,
        }
    }
}

impl Mul<C64> for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: C64) -> AlgebraElement {
        AlgebraElement {
            groupoid: self.groupoid.clone(),
            values: self.values.map(|v| v * rhs),
        }
    }
}

impl Mul<f64> for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: f64) -> AlgebraElement {
        self * C64::new(rhs, 0.0)
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self * C64::new(-1.0, 0.0)
    }
}
