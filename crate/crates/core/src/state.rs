//! States of the reduced algebra as families of fibre density blocks.
//!
//! A state is one positive-semidefinite `|Γ|×|Γ|` block per point of `X`
//! with unit total trace; it pairs with an algebra element through the
//! block-diagonal regular representation. Restricting to functions on the
//! unit space recovers a probability measure on `X`, which indexes the
//! fibres of the state space.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::algebra::AlgebraElement;
use crate::groupoid::TransformationGroupoid;
use crate::linalg;

pub const PSD_TOLERANCE: f64 = 1e-10;
pub const TRACE_TOLERANCE: f64 = 1e-10;
/// Default tolerance for deciding that two states share a fibre measure.
pub const FIBRE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Error, PartialEq)]
pub enum StateError {
    #[error("expected {expected} blocks of size {size}×{size}, got block {index} of size {got}")]
    ShapeMismatch {
        expected: usize,
        size: usize,
        index: usize,
        got: usize,
    },
    #[error("block {index} is not Hermitian (defect {defect})")]
    NotHermitian { index: usize, defect: f64 },
    #[error("block {index} is not positive semidefinite (min eigenvalue {min_eigenvalue})")]
    NotPositive { index: usize, min_eigenvalue: f64 },
    #[error("total trace is {trace}, expected 1")]
    BadTrace { trace: f64 },
    #[error("vector has norm {norm}, expected a unit vector")]
    NotUnitVector { norm: f64 },
    #[error("state and element live on different groupoids")]
    GroupoidMismatch,
    #[error("point {x} out of range (space size {space})")]
    PointOutOfRange { x: usize, space: usize },
    #[error("cannot match fibre measures: state gives zero mass to point {x} where the target does not")]
    MeasureSupportMismatch { x: usize },
}

/// A probability vector over the points of `X`.
#[derive(Debug, Clone, PartialEq)]
pub struct FibreMeasure {
    pub weights: Vec<f64>,
}

impl FibreMeasure {
    pub fn max_difference(&self, other: &FibreMeasure) -> f64 {
        self.weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// A state given by one density block per point of the space.
#[derive(Debug, Clone)]
pub struct State {
    groupoid: Arc<TransformationGroupoid>,
    blocks: Vec<DMatrix<C64>>,
}

impl State {
    /// Validates Hermiticity, positive semidefiniteness and unit total trace.
    pub fn new(
        groupoid: Arc<TransformationGroupoid>,
        blocks: Vec<DMatrix<C64>>,
    ) -> Result<Self, StateError> {
        let order = groupoid.order();
        let space = groupoid.space_size();
        if blocks.len() != space {
            return Err(StateError::ShapeMismatch {
                expected: space,
                size: order,
                index: blocks.len(),
                got: 0,
            });
        }
        let mut trace = 0.0;
        for (index, block) in blocks.iter().enumerate() {
            if block.nrows() != order || block.ncols() != order {
                return Err(StateError::ShapeMismatch {
                    expected: space,
                    size: order,
                    index,
                    got: block.nrows(),
                });
            }
            let defect = linalg::hermitian_defect(block);
            if defect > PSD_TOLERANCE {
                return Err(StateError::NotHermitian { index, defect });
            }
            let eigenvalues = linalg::hermitian_eigenvalues(block);
            if eigenvalues[0] < -PSD_TOLERANCE {
                return Err(StateError::NotPositive {
                    index,
                    min_eigenvalue: eigenvalues[0],
                });
            }
            trace += block.diagonal().iter().map(|c| c.re).sum::<f64>();
        }
        if (trace - 1.0).abs() > TRACE_TOLERANCE {
            return Err(StateError::BadTrace { trace });
        }
        Ok(Self { groupoid, blocks })
    }

    /// The vector state `f ↦ ⟨ψ, λ(f)|_x ψ⟩` at one fibre.
    pub fn vector_state(
        groupoid: Arc<TransformationGroupoid>,
        x: usize,
        psi: &[C64],
    ) -> Result<Self, StateError> {
        if x >= groupoid.space_size() {
            return Err(StateError::PointOutOfRange {
                x,
                space: groupoid.space_size(),
            });
        }
        let v = DVector::from_column_slice(psi);
        let norm = v.norm();
        if (norm - 1.0).abs() > PSD_TOLERANCE {
            return Err(StateError::NotUnitVector { norm });
        }
        let order = groupoid.order();
        let mut blocks = vec![DMatrix::<C64>::zeros(order, order); groupoid.space_size()];
        blocks[x] = &v * v.adjoint();
        Self::new(groupoid, blocks)
    }

    /// Random full-rank state: Gaussian blocks squared, trace-normalized.
    /// Deterministic per seed.
    pub fn random(groupoid: Arc<TransformationGroupoid>, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with(groupoid, &mut rng)
    }

    pub fn random_with(
        groupoid: Arc<TransformationGroupoid>,
        rng: &mut impl rand::Rng,
    ) -> Self {
        let order = groupoid.order();
        let mut blocks: Vec<DMatrix<C64>> = (0..groupoid.space_size())
            .map(|_| {
                let g = DMatrix::from_fn(order, order, |_, _| {
                    let re: f64 = StandardNormal.sample(rng);
                    let im: f64 = StandardNormal.sample(rng);
                    C64::new(re, im)
                });
                &g * g.adjoint()
            })
            .collect();
        let trace: f64 = blocks
            .iter()
            .map(|b| b.diagonal().iter().map(|c| c.re).sum::<f64>())
            .sum();
        for b in &mut blocks {
            *b /= C64::new(trace, 0.0);
        }
        Self::new(groupoid, blocks).expect("construction satisfies the state invariants")
    }

    pub fn groupoid(&self) -> &Arc<TransformationGroupoid> {
        &self.groupoid
    }

    pub fn blocks(&self) -> &[DMatrix<C64>] {
        &self.blocks
    }

    /// `ω(f) = Σ_x tr(ρ_x · λ(f)|_x)`.
    pub fn evaluate(&self, f: &AlgebraElement) -> Result<C64, StateError> {
        if **f.groupoid() != *self.groupoid {
            return Err(StateError::GroupoidMismatch);
        }
        let mut total = C64::new(0.0, 0.0);
        for (x, block) in self.blocks.iter().enumerate() {
            let m = f.fibre_matrix(x).expect("x in range");
            total += (block * m).trace();
        }
        Ok(total)
    }

    /// The restriction to `C(X)`: `η(y) = Σ_{(g,x) : g·x = y} ρ_x[g][g]`.
    pub fn fibre_measure(&self) -> FibreMeasure {
        let mut weights = vec![0.0; self.groupoid.space_size()];
        for (x, block) in self.blocks.iter().enumerate() {
            for g in 0..self.groupoid.order() {
                weights[self.groupoid.act(g, x)] += block[(g, g)].re;
            }
        }
        FibreMeasure { weights }
    }

    /// Whether two states restrict to the same measure on the unit space.
    pub fn same_fibre(&self, other: &State, tol: f64) -> bool {
        self.fibre_measure().max_difference(&other.fibre_measure()) <= tol
    }

    /// Convex combination `t·self + (1−t)·other`.
    pub fn mix(&self, other: &State, t: f64) -> Result<State, StateError> {
        if *other.groupoid != *self.groupoid {
            return Err(StateError::GroupoidMismatch);
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a * C64::new(t, 0.0) + b * C64::new(1.0 - t, 0.0))
            .collect();
        State::new(self.groupoid.clone(), blocks)
    }

    /// Diagonal congruence moving this state onto the target fibre measure.
    ///
    /// Each block is conjugated by the positive diagonal with entries
    /// `√(η(g·x)/m(g·x))` where m is the current measure; this preserves
    /// positivity, sends the measure exactly to η, and keeps total trace 1.
    pub fn reweighted_to(&self, target: &FibreMeasure) -> Result<State, StateError> {
        let current = self.fibre_measure();
        let space = self.groupoid.space_size();
        let mut factors = vec![0.0_f64; space];
        for y in 0..space {
            if current.weights[y] <= 0.0 {
                if target.weights[y] > 0.0 {
                    return Err(StateError::MeasureSupportMismatch { x: y });
                }
                factors[y] = 0.0;
            } else {
                factors[y] = (target.weights[y] / current.weights[y]).sqrt();
            }
        }
        let order = self.groupoid.order();
        let blocks = self
            .blocks
            .iter()
            .enumerate()
            .map(|(x, block)| {
                let d = DMatrix::from_fn(order, order, |i, j| {
                    if i == j {
                        C64::new(factors[self.groupoid.act(i, x)], 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                });
                &d * block * &d
            })
            .collect();
        State::new(self.groupoid.clone(), blocks)
    }
}
