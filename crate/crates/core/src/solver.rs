//! Linear-programming master problems for the cutting-plane solvers.
//!
//! Both certified optimizations in this crate (the quotient norm and the
//! state-space distance) reduce to a sequence of small dense LPs over a box,
//! with cuts harvested from singular triples of fibre matrices. The LPs are
//! solved from scratch each round; at desk scale this is never the
//! bottleneck.

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("master LP infeasible (inconsistent cuts)")]
    Infeasible,
    #[error("master LP unbounded (missing box constraint)")]
    Unbounded,
    #[error("LP solver failure: {0}")]
    Internal(String),
}

/// A linear inequality `coeffs · θ ≤ rhs`.
#[derive(Debug, Clone)]
pub struct Cut {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

/// Maximizes `objective · θ` subject to the cuts and per-variable bounds.
/// Returns the argmax and the optimum.
pub fn lp_maximize(
    objective: &[f64],
    cuts: &[Cut],
    bounds: &[(f64, f64)],
) -> Result<(Vec<f64>, f64), SolverError> {
    assert_eq!(objective.len(), bounds.len());
    let mut problem = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = objective
        .iter()
        .zip(bounds)
        .map(|(&c, &(lo, hi))| problem.add_var(c, (lo, hi)))
        .collect();
    for cut in cuts {
        assert_eq!(cut.coeffs.len(), vars.len());
        let terms: Vec<_> = vars
            .iter()
            .zip(&cut.coeffs)
            .filter(|(_, &a)| a != 0.0)
            .map(|(&v, &a)| (v, a))
            .collect();
        problem.add_constraint(&terms, ComparisonOp::Le, cut.rhs);
    }
    match problem.solve() {
        Ok(solution) => {
            let point = vars.iter().map(|&v| solution[v]).collect();
            Ok((point, solution.objective()))
        }
        Err(minilp::Error::Infeasible) => Err(SolverError::Infeasible),
        Err(minilp::Error::Unbounded) => Err(SolverError::Unbounded),
    }
}

/// Minimizes `objective · θ` under the same constraint shape.
pub fn lp_minimize(
    objective: &[f64],
    cuts: &[Cut],
    bounds: &[(f64, f64)],
) -> Result<(Vec<f64>, f64), SolverError> {
    let negated: Vec<f64> = objective.iter().map(|c| -c).collect();
    let (point, value) = lp_maximize(&negated, cuts, bounds)?;
    Ok((point, -value))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_constrained_max() {
        let (point, value) = lp_maximize(&[1.0, 2.0], &[], &[(-1.0, 1.0), (-1.0, 1.0)]).unwrap();
        assert!((value - 3.0).abs() < 1e-9);
        assert!((point[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn cut_tightens_optimum() {
        let cuts = vec![Cut {
            coeffs: vec![1.0, 1.0],
            rhs: 1.0,
        }];
        let (_, value) = lp_maximize(&[1.0, 1.0], &cuts, &[(-2.0, 2.0), (-2.0, 2.0)]).unwrap();
        assert!((value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn minimize_is_negated_maximize() {
        let cuts = vec![Cut {
            coeffs: vec![-1.0, 0.0],
            rhs: -0.25,
        }];
        let (point, value) = lp_minimize(&[1.0, 0.0], &cuts, &[(-1.0, 1.0), (-1.0, 1.0)]).unwrap();
        assert!((value - 0.25).abs() < 1e-9);
        assert!((point[0] - 0.25).abs() < 1e-9);
    }
}
