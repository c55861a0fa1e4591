//! The distance on the state space induced by the commutator seminorms,
//! with certified bounds from a cutting-plane solver.
//!
//! States in different fibres (different measures on the unit space) are at
//! infinite distance. Within a fibre the distance is the supremum of
//! `(μ − ν)(f)` over self-adjoint f vanishing on units with `Lᵏ_ℓ(f) ≤ 1`;
//! the solver maintains an outer polytope of singular-pair cuts (upper
//! bound) and radially rescaled feasible witnesses (lower bound).

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::algebra::AlgebraElement;
use crate::dirac;
use crate::groupoid::{ball, LengthFunction, TransformationGroupoid};
use crate::linalg;
use crate::solver::{self, Cut, SolverError};
use crate::state::{State, StateError, FIBRE_TOLERANCE};

#[derive(Debug, Error)]
pub enum MetricError {
    #[error(
        "fibre measures differ by {difference}, inside the ambiguous band ({tol}, {band}]; \
         refusing to decide finite vs infinite"
    )]
    FibreToleranceAmbiguous {
        difference: f64,
        tol: f64,
        band: f64,
    },
    #[error("{dim} free parameters exceed the brute-force limit of {limit}")]
    TooManyParameters { dim: usize, limit: usize },
    #[error("Γ_n contains only the identity for n = {n}; α is an empty supremum, increase n")]
    EmptyBall { n: f64 },
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    State(#[from] StateError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateStatus {
    Converged,
    BudgetExceeded,
    Infinite,
}

/// Two-sided bounds for one distance computation.
#[derive(Debug, Clone)]
pub struct DistanceCertificate {
    pub lower: f64,
    pub upper: f64,
    pub gap: f64,
    pub witness: Option<AlgebraElement>,
    pub iterations: usize,
    pub status: CertificateStatus,
}

impl DistanceCertificate {
    /// The certified value reported for the distance.
    pub fn value(&self) -> f64 {
        self.upper
    }

    fn infinite() -> Self {
        Self {
            lower: f64::INFINITY,
            upper: f64::INFINITY,
            gap: 0.0,
            witness: None,
            iterations: 0,
            status: CertificateStatus::Infinite,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DistanceOptions {
    pub tol: f64,
    pub budget: usize,
    pub fibre_tol: f64,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            budget: 2000,
            fibre_tol: FIBRE_TOLERANCE,
        }
    }
}

/// Real basis of the self-adjoint elements vanishing on units.
///
/// Parameters run over a half-set of involution orbits
/// `{(g, x), (g⁻¹, g·x)}`: a self-paired arrow contributes one real entry,
/// a free pair contributes a real and an imaginary parameter.
pub fn self_adjoint_basis(groupoid: &Arc<TransformationGroupoid>) -> Vec<AlgebraElement> {
    let identity = groupoid.group().identity();
    let mut basis = Vec::new();
    for g in 0..groupoid.order() {
        if g == identity {
            continue;
        }
        for x in 0..groupoid.space_size() {
            let partner = groupoid.inverse((g, x));
            if partner == (g, x) {
                basis.push(AlgebraElement::from_fn(groupoid.clone(), |gg, xx| {
                    if (gg, xx) == (g, x) {
                        C64::new(1.0, 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                }));
            } else if (g, x) < partner {
                basis.push(AlgebraElement::from_fn(groupoid.clone(), |gg, xx| {
                    if (gg, xx) == (g, x) || (gg, xx) == partner {
                        C64::new(1.0, 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                }));
                basis.push(AlgebraElement::from_fn(groupoid.clone(), |gg, xx| {
                    if (gg, xx) == (g, x) {
                        C64::new(0.0, 1.0)
                    } else if (gg, xx) == partner {
                        C64::new(0.0, -1.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                }));
            }
        }
    }
    basis
}

/// The shared setup of the certified solver and the sampling oracle.
struct DistanceProblem {
    basis: Vec<AlgebraElement>,
    /// deltas[j][x]: Δᵏ block of basis element j at fibre x.
    deltas: Vec<Vec<DMatrix<C64>>>,
    objective: Vec<f64>,
    radius: f64,
    groupoid: Arc<TransformationGroupoid>,
}

impl DistanceProblem {
    fn new(
        mu: &State,
        nu: &State,
        length: &LengthFunction,
        k: u32,
    ) -> Result<Self, MetricError> {
        let groupoid = mu.groupoid().clone();
        let basis = self_adjoint_basis(&groupoid);
        let deltas = basis
            .iter()
            .map(|b| {
                (0..groupoid.space_size())
                    .map(|x| dirac::delta_matrix(b, length, x, k))
                    .collect()
            })
            .collect();
        let objective = basis
            .iter()
            .map(|b| Ok((mu.evaluate(b)? - nu.evaluate(b)?).re))
            .collect::<Result<Vec<f64>, StateError>>()?;
        // every unit-killed f obeys Lᵏ(f) ≥ ℓ_minᵏ · max |entry| ≥ ℓ_minᵏ · max |θ_j|,
        // so the seminorm unit ball lives inside this box
        let radius = 1.0 / length.min_positive().powi(k as i32);
        Ok(Self {
            basis,
            deltas,
            objective,
            radius,
            groupoid,
        })
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn fibre_block(&self, theta: &[f64], x: usize) -> DMatrix<C64> {
        let order = self.groupoid.order();
        let mut m = DMatrix::<C64>::zeros(order, order);
        for (j, &t) in theta.iter().enumerate() {
            if t != 0.0 {
                m += &self.deltas[j][x] * C64::new(t, 0.0);
            }
        }
        m
    }

    /// (seminorm value, worst fibre index), ties broken by lowest x.
    fn seminorm(&self, theta: &[f64]) -> (f64, usize) {
        let mut worst = (0.0_f64, 0usize);
        for x in 0..self.groupoid.space_size() {
            let s = linalg::spectral_norm(&self.fibre_block(theta, x));
            if s > worst.0 {
                worst = (s, x);
            }
        }
        worst
    }

    fn element(&self, theta: &[f64]) -> AlgebraElement {
        let mut out = AlgebraElement::zeros(self.groupoid.clone());
        for (j, &t) in theta.iter().enumerate() {
            if t != 0.0 {
                out = &out + &(&self.basis[j] * t);
            }
        }
        out
    }

    fn pairing(&self, theta: &[f64]) -> f64 {
        self.objective
            .iter()
            .zip(theta)
            .map(|(c, t)| c * t)
            .sum()
    }

    /// Singular-pair cut harvested at θ from its most violated fibre:
    /// `|a · θ'| ≤ Lᵏ(θ')` for all θ', appended as the pair ±a·θ ≤ 1.
    fn push_cuts(&self, cuts: &mut Vec<Cut>, theta: &[f64]) {
        let (_, x) = self.seminorm(theta);
        let (_, u, v) = linalg::top_singular_triple(&self.fibre_block(theta, x));
        let coeffs: Vec<f64> = (0..self.dim())
            .map(|j| (u.adjoint() * &self.deltas[j][x] * &v)[(0, 0)].re)
            .collect();
        let negated: Vec<f64> = coeffs.iter().map(|a| -a).collect();
        cuts.push(Cut { coeffs, rhs: 1.0 });
        cuts.push(Cut {
            coeffs: negated,
            rhs: 1.0,
        });
    }
}

/// Certified distance between two states under `Lᵏ_ℓ`.
pub fn connes_distance(
    mu: &State,
    nu: &State,
    length: &LengthFunction,
    k: u32,
    opts: DistanceOptions,
) -> Result<DistanceCertificate, MetricError> {
    let difference = mu.fibre_measure().max_difference(&nu.fibre_measure());
    if difference > 10.0 * opts.fibre_tol {
        return Ok(DistanceCertificate::infinite());
    }
    if difference > opts.fibre_tol {
        return Err(MetricError::FibreToleranceAmbiguous {
            difference,
            tol: opts.fibre_tol,
            band: 10.0 * opts.fibre_tol,
        });
    }
    let problem = DistanceProblem::new(mu, nu, length, k)?;
    let dim = problem.dim();
    if dim == 0 || problem.objective.iter().all(|&c| c == 0.0) {
        return Ok(DistanceCertificate {
            lower: 0.0,
            upper: 0.0,
            gap: 0.0,
            witness: Some(AlgebraElement::zeros(problem.groupoid.clone())),
            iterations: 0,
            status: CertificateStatus::Converged,
        });
    }
    let bounds = vec![(-problem.radius, problem.radius); dim];
    let mut cuts: Vec<Cut> = Vec::new();
    // coordinate seed cuts keep the first LP iterates bounded away from
    // useless box corners
    for j in 0..dim {
        let mut e = vec![0.0; dim];
        e[j] = 1.0;
        problem.push_cuts(&mut cuts, &e);
    }
    let mut lower = 0.0_f64;
    let mut upper = f64::INFINITY;
    let mut witness_theta: Vec<f64> = vec![0.0; dim];
    let mut iterations = 0usize;
    let mut status = CertificateStatus::BudgetExceeded;
    while iterations < opts.budget {
        iterations += 1;
        let (theta, value) = solver::lp_maximize(&problem.objective, &cuts, &bounds)?;
        upper = upper.min(value);
        let (seminorm, _) = problem.seminorm(&theta);
        let scale = 1.0 / seminorm.max(1.0);
        let candidate = problem.pairing(&theta) * scale;
        if candidate > lower {
            lower = candidate;
            witness_theta = theta.iter().map(|t| t * scale).collect();
        }
        if upper - lower <= opts.tol {
            status = CertificateStatus::Converged;
            break;
        }
        problem.push_cuts(&mut cuts, &theta);
    }
    let witness = problem.element(&witness_theta);
    Ok(DistanceCertificate {
        lower,
        upper,
        gap: upper - lower,
        witness: Some(witness),
        iterations,
        status,
    })
}

/// Sampling lower-bound oracle, independent of the cutting-plane path.
///
/// Draws `resolution` Gaussian directions, rescales each to the seminorm
/// unit sphere and keeps the best pairing, then polishes the best direction
/// by coordinate-wise perturbations with step halving. Every evaluated
/// point is feasible, so the result is always a valid lower bound.
pub fn brute_force_distance(
    mu: &State,
    nu: &State,
    length: &LengthFunction,
    k: u32,
    resolution: usize,
    seed: u64,
) -> Result<f64, MetricError> {
    const LIMIT: usize = 8;
    let problem = DistanceProblem::new(mu, nu, length, k)?;
    let dim = problem.dim();
    if dim > LIMIT {
        return Err(MetricError::TooManyParameters { dim, limit: LIMIT });
    }
    if dim == 0 {
        return Ok(0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let value_of = |theta: &[f64], problem: &DistanceProblem| -> f64 {
        let (seminorm, _) = problem.seminorm(theta);
        if seminorm <= 0.0 {
            return 0.0;
        }
        problem.pairing(theta).abs() / seminorm
    };
    let mut best = 0.0_f64;
    let mut best_theta = vec![0.0; dim];
    for _ in 0..resolution {
        let theta: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
        let v = value_of(&theta, &problem);
        if v > best {
            best = v;
            best_theta = theta;
        }
    }
    // coordinate polish, 200 rounds of step halving
    let mut step = 0.5;
    for _ in 0..200 {
        let mut improved = false;
        for j in 0..dim {
            for sign in [-1.0, 1.0] {
                let mut theta = best_theta.clone();
                theta[j] += sign * step;
                let v = value_of(&theta, &problem);
                if v > best {
                    best = v;
                    best_theta = theta;
                    improved = true;
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
    Ok(best)
}

/// The α constant bounding the weighted ℓ²-norm by `Lᵏ_ℓ`:
/// `sup over Γ_n∖{e} × X of ((1 + ℓ(g,x)⁻¹)^{2k} + 2^{2p} n^{2p−2k})^{1/2}`.
pub fn alpha_constant(
    groupoid: &TransformationGroupoid,
    length: &LengthFunction,
    k: u32,
    p: f64,
    n: f64,
) -> Result<f64, MetricError> {
    assert!(p > 0.0 && (k as f64) > p, "requires k > p > 0");
    assert!(n >= 1.0, "requires n ≥ 1");
    let subset = ball(groupoid, length, n).group_subset;
    let identity = groupoid.group().identity();
    let mut sup: Option<f64> = None;
    for &g in subset.iter().filter(|&&g| g != identity) {
        for x in 0..groupoid.space_size() {
            let ell = length.value(g, x);
            let term = (1.0 + 1.0 / ell).powi(2 * k as i32)
                + 2.0_f64.powf(2.0 * p) * n.powf(2.0 * p - 2.0 * k as f64);
            let value = term.sqrt();
            sup = Some(sup.map_or(value, |s: f64| s.max(value)));
        }
    }
    sup.ok_or(MetricError::EmptyBall { n })
}

/// Both sides of the Sobolev-vs-seminorm inequality for one element.
#[derive(Debug, Clone)]
pub struct SobolevBoundReport {
    pub sobolev: f64,
    pub seminorm: f64,
    pub alpha: f64,
    pub bound: f64,
    pub slack: f64,
    pub holds: bool,
}

/// Checks `‖f‖₂,p,ℓ ≤ α Lᵏ_ℓ(f)` for a unit-killed element.
pub fn sobolev_bound_check(
    f: &AlgebraElement,
    length: &LengthFunction,
    k: u32,
    p: f64,
    n: f64,
) -> Result<SobolevBoundReport, MetricError> {
    debug_assert_eq!(f.restrict_to_units().sup_norm(), 0.0, "f must vanish on units");
    let alpha = alpha_constant(f.groupoid(), length, k, p, n)?;
    let sobolev = f
        .sobolev_norm(length, p, crate::algebra::SobolevSide::Max)
        .expect("p > 0 validated by alpha_constant");
    let seminorm = dirac::lipschitz_seminorm(f, length, k);
    let bound = alpha * seminorm;
    let slack = bound - sobolev;
    Ok(SobolevBoundReport {
        sobolev,
        seminorm,
        alpha,
        bound,
        slack,
        holds: slack >= -1e-9 * (1.0 + bound),
    })
}

/// Uniform diameter bound `2 C α` for the intra-fibre metric, given a
/// rapid-decay constant C valid for `(G, ℓ, p)`.
pub fn diameter_bound(
    groupoid: &TransformationGroupoid,
    length: &LengthFunction,
    k: u32,
    p: f64,
    n: f64,
    c: f64,
) -> Result<f64, MetricError> {
    assert!(c > 0.0, "rapid-decay constant must be positive");
    Ok(2.0 * c * alpha_constant(groupoid, length, k, p, n)?)
}

/// Pairwise metric-axiom diagnostics over a list of same-fibre states.
#[derive(Debug, Clone)]
pub struct MetricAxiomsReport {
    pub pair_count: usize,
    pub symmetry_defect: f64,
    pub triangle_defect: f64,
    pub positivity_ok: bool,
    pub symmetric: bool,
    pub triangle_ok: bool,
}

pub fn metric_axioms_check(
    states: &[State],
    length: &LengthFunction,
    k: u32,
    opts: DistanceOptions,
) -> Result<MetricAxiomsReport, MetricError> {
    let n = states.len();
    let mut upper = vec![vec![0.0_f64; n]; n];
    let mut lower = vec![vec![0.0_f64; n]; n];
    let mut symmetry_defect = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let cert = connes_distance(&states[i], &states[j], length, k, opts)?;
            upper[i][j] = cert.upper;
            lower[i][j] = cert.lower;
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            symmetry_defect = symmetry_defect.max((upper[i][j] - upper[j][i]).abs());
        }
    }
    let mut triangle_defect = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                if i == j || j == l || i == l {
                    continue;
                }
                let defect = upper[i][l] - (lower[i][j] + lower[j][l]);
                triangle_defect = triangle_defect.max(defect);
            }
        }
    }
    // positivity: a distinguishing basis element forces a positive lower bound
    let mut positivity_ok = true;
    if n >= 2 {
        let basis = self_adjoint_basis(states[0].groupoid());
        for i in 0..n {
            for j in (i + 1)..n {
                let distinguishable = basis.iter().any(|b| {
                    let a = states[i].evaluate(b).unwrap_or_default();
                    let c = states[j].evaluate(b).unwrap_or_default();
                    (a - c).norm() > 1e-9
                });
                if distinguishable && lower[i][j] <= 0.0 {
                    positivity_ok = false;
                }
            }
        }
    }
    Ok(MetricAxiomsReport {
        pair_count: n * n.saturating_sub(1) / 2,
        symmetry_defect,
        triangle_defect,
        positivity_ok,
        symmetric: symmetry_defect <= 2.0 * opts.tol,
        triangle_ok: triangle_defect <= 3.0 * opts.tol,
    })
}
