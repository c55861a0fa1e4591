//! Finite transformation groupoids `Γ ⋉ X` and their length functions.
//!
//! A groupoid element is the pair `(g, x)` with source `x` and range `g·x`;
//! composition is `(g, h·x)(h, x) = (gh, x)` and inversion is
//! `(g, x)⁻¹ = (g⁻¹, g·x)`. Groups are given by explicit Cayley tables so
//! that every axiom can be checked exhaustively.

use std::collections::BinaryHeap;

use thiserror::Error;

/// A groupoid arrow: group element index paired with a point of the space.
pub type Arrow = (usize, usize);

#[derive(Debug, Error, PartialEq)]
pub enum GroupoidError {
    #[error("table has wrong shape at {context}: expected {expected}, got {got}")]
    BadShape {
        context: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("element index {index} out of range (order {order}) at {context}")]
    IndexOutOfRange {
        context: &'static str,
        index: usize,
        order: usize,
    },
    #[error("identity axiom fails: cayley[{left}][{right}] = {got}")]
    BadIdentity { left: usize, right: usize, got: usize },
    #[error("inverse axiom fails for element {g}: cayley[{g}][{claimed}] = {got}")]
    BadInverse { g: usize, claimed: usize, got: usize },
    #[error("associativity fails at triple ({a}, {b}, {c})")]
    NonAssociative { a: usize, b: usize, c: usize },
    #[error("not a group action: {reason} (witness g={g}, x={x})")]
    NotAnAction {
        reason: &'static str,
        g: usize,
        x: usize,
    },
}

#[derive(Debug, Error, PartialEq)]
pub enum LengthError {
    #[error("length table has wrong shape: expected {expected} rows/cols, got {got}")]
    BadShape { expected: usize, got: usize },
    #[error("negative length {value} at (g={g}, x={x})")]
    Negative { g: usize, x: usize, value: f64 },
    #[error("zero set wrong: ℓ({g}, {x}) = {value}, but lengths vanish exactly on units")]
    ZeroSetWrong { g: usize, x: usize, value: f64 },
    #[error("not symmetric: ℓ(g⁻¹, g·x) = {inverse_value} but ℓ(g, x) = {value} at (g={g}, x={x})")]
    NotSymmetric {
        g: usize,
        x: usize,
        value: f64,
        inverse_value: f64,
    },
    #[error("not subadditive at g={g}, h={h}, x={x}: ℓ(gh, x) = {total} > {left} + {right}")]
    NotSubadditive {
        g: usize,
        h: usize,
        x: usize,
        total: f64,
        left: f64,
        right: f64,
    },
    #[error("generators do not generate: element {g} is unreachable")]
    NotGenerating { g: usize },
    #[error("generator weights not symmetric: w({g}) = {w} but w({inverse}) = {w_inv}")]
    AsymmetricWeights {
        g: usize,
        inverse: usize,
        w: f64,
        w_inv: f64,
    },
    #[error("non-positive generator weight {w} for generator {g}")]
    BadWeight { g: usize, w: f64 },
}

/// A finite group presented by its full Cayley table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    cayley: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Validates all group axioms exhaustively before construction.
    pub fn new(
        cayley: Vec<Vec<usize>>,
        identity: usize,
        inverses: Vec<usize>,
    ) -> Result<Self, GroupoidError> {
        let order = cayley.len();
        if order == 0 {
            return Err(GroupoidError::BadShape {
                context: "cayley",
                expected: 1,
                got: 0,
            });
        }
        for row in &cayley {
            if row.len() != order {
                return Err(GroupoidError::BadShape {
                    context: "cayley row",
                    expected: order,
                    got: row.len(),
                });
            }
            for &v in row {
                if v >= order {
                    return Err(GroupoidError::IndexOutOfRange {
                        context: "cayley entry",
                        index: v,
                        order,
                    });
                }
            }
        }
        if inverses.len() != order {
            return Err(GroupoidError::BadShape {
                context: "inverses",
                expected: order,
                got: inverses.len(),
            });
        }
        if identity >= order {
            return Err(GroupoidError::IndexOutOfRange {
                context: "identity",
                index: identity,
                order,
            });
        }
        for g in 0..order {
            if cayley[identity][g] != g {
                return Err(GroupoidError::BadIdentity {
                    left: identity,
                    right: g,
                    got: cayley[identity][g],
                });
            }
            if cayley[g][identity] != g {
                return Err(GroupoidError::BadIdentity {
                    left: g,
                    right: identity,
                    got: cayley[g][identity],
                });
            }
        }
        for g in 0..order {
            let inv = inverses[g];
            if inv >= order {
                return Err(GroupoidError::IndexOutOfRange {
                    context: "inverses entry",
                    index: inv,
                    order,
                });
            }
            if cayley[g][inv] != identity || cayley[inv][g] != identity {
                return Err(GroupoidError::BadInverse {
                    g,
                    claimed: inv,
                    got: cayley[g][inv],
                });
            }
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if cayley[cayley[a][b]][c] != cayley[a][cayley[b][c]] {
                        return Err(GroupoidError::NonAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(Self {
            order,
            cayley,
            identity,
            inverses,
        })
    }

    /// The cyclic group ℤ/n with generator 1.
    pub fn cyclic(n: usize) -> Self {
        let cayley = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let inverses = (0..n).map(|a| (n - a) % n).collect();
        Self::new(cayley, 0, inverses).expect("cyclic tables satisfy the group axioms")
    }

    /// Builds a group from a closed set of permutations of `0..degree`.
    ///
    /// Returns the group together with the action table of the permutations
    /// themselves, with element `i` acting by `perms[i]`. Fails if the set is
    /// not closed under composition or misses the identity permutation.
    pub fn from_permutations(
        perms: &[Vec<usize>],
        degree: usize,
    ) -> Result<(Self, GroupAction), GroupoidError> {
        let order = perms.len();
        let find = |p: &[usize]| perms.iter().position(|q| q == p);
        let identity_perm: Vec<usize> = (0..degree).collect();
        let identity = find(&identity_perm).ok_or(GroupoidError::NotAnAction {
            reason: "identity permutation missing",
            g: 0,
            x: 0,
        })?;
        let mut cayley = vec![vec![0usize; order]; order];
        for a in 0..order {
            for b in 0..order {
                // (a·b)(x) = a(b(x))
                let comp: Vec<usize> = (0..degree).map(|x| perms[a][perms[b][x]]).collect();
                cayley[a][b] = find(&comp).ok_or(GroupoidError::NotAnAction {
                    reason: "permutation set not closed under composition",
                    g: a,
                    x: b,
                })?;
            }
        }
        let mut inverses = vec![0usize; order];
        for a in 0..order {
            inverses[a] = (0..order)
                .find(|&b| cayley[a][b] == identity)
                .ok_or(GroupoidError::NotAnAction {
                    reason: "permutation has no inverse in the set",
                    g: a,
                    x: 0,
                })?;
        }
        let group = Self::new(cayley, identity, inverses)?;
        let action = GroupAction::new(perms.to_vec());
        Ok((group, action))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.cayley[a][b]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverses[g]
    }

    pub fn cayley(&self) -> &[Vec<usize>] {
        &self.cayley
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inverses
    }
}

/// An action table `(g, x) ↦ g·x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    table: Vec<Vec<usize>>,
}

impl GroupAction {
    pub fn new(table: Vec<Vec<usize>>) -> Self {
        Self { table }
    }

    /// The trivial action on a space of the given size.
    pub fn trivial(order: usize, space_size: usize) -> Self {
        Self {
            table: vec![(0..space_size).collect(); order],
        }
    }

    pub fn apply(&self, g: usize, x: usize) -> usize {
        self.table[g][x]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    fn validate(&self, group: &FiniteGroup, space_size: usize) -> Result<(), GroupoidError> {
        if self.table.len() != group.order() {
            return Err(GroupoidError::BadShape {
                context: "action",
                expected: group.order(),
                got: self.table.len(),
            });
        }
        for (g, row) in self.table.iter().enumerate() {
            if row.len() != space_size {
                return Err(GroupoidError::BadShape {
                    context: "action row",
                    expected: space_size,
                    got: row.len(),
                });
            }
            for (x, &y) in row.iter().enumerate() {
                if y >= space_size {
                    return Err(GroupoidError::NotAnAction {
                        reason: "target point out of range",
                        g,
                        x,
                    });
                }
            }
        }
        for x in 0..space_size {
            if self.table[group.identity()][x] != x {
                return Err(GroupoidError::NotAnAction {
                    reason: "identity does not act trivially",
                    g: group.identity(),
                    x,
                });
            }
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                for x in 0..space_size {
                    if self.table[g][self.table[h][x]] != self.table[group.mul(g, h)][x] {
                        return Err(GroupoidError::NotAnAction {
                            reason: "homomorphism axiom fails",
                            g,
                            x,
                        });
                    }
                }
            }
        }
        // bijectivity of each g follows from the axioms above, but check anyway
        for g in 0..group.order() {
            let mut seen = vec![false; space_size];
            for x in 0..space_size {
                let y = self.table[g][x];
                if seen[y] {
                    return Err(GroupoidError::NotAnAction {
                        reason: "element does not act bijectively",
                        g,
                        x,
                    });
                }
                seen[y] = true;
            }
        }
        Ok(())
    }
}

/// The transformation groupoid `Γ ⋉ X` of a validated action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformationGroupoid {
    group: FiniteGroup,
    space_size: usize,
    action: GroupAction,
}

impl TransformationGroupoid {
    pub fn new(
        group: FiniteGroup,
        space_size: usize,
        action: GroupAction,
    ) -> Result<Self, GroupoidError> {
        action.validate(&group, space_size)?;
        Ok(Self {
            group,
            space_size,
            action,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn space_size(&self) -> usize {
        self.space_size
    }

    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action.apply(g, x)
    }

    /// Range map: r(g, x) = g·x.
    pub fn range(&self, arrow: Arrow) -> usize {
        self.act(arrow.0, arrow.1)
    }

    /// Source map: s(g, x) = x.
    pub fn source(&self, arrow: Arrow) -> usize {
        arrow.1
    }

    /// Composition `(g, h·x)(h, x) = (gh, x)`; `None` if not composable.
    pub fn compose(&self, left: Arrow, right: Arrow) -> Option<Arrow> {
        if left.1 != self.range(right) {
            return None;
        }
        Some((self.group.mul(left.0, right.0), right.1))
    }

    /// Inversion `(g, x)⁻¹ = (g⁻¹, g·x)`.
    pub fn inverse(&self, arrow: Arrow) -> Arrow {
        (self.group.inv(arrow.0), self.act(arrow.0, arrow.1))
    }

    /// The unit arrow at x.
    pub fn unit(&self, x: usize) -> Arrow {
        (self.group.identity(), x)
    }

    pub fn is_unit(&self, arrow: Arrow) -> bool {
        arrow.0 == self.group.identity()
    }

    /// All arrows, group-major.
    pub fn arrows(&self) -> impl Iterator<Item = Arrow> + '_ {
        let space = self.space_size;
        (0..self.order()).flat_map(move |g| (0..space).map(move |x| (g, x)))
    }

    /// The source fibre G_x = {(g, x) : g ∈ Γ}.
    pub fn source_fibre(&self, x: usize) -> impl Iterator<Item = Arrow> + '_ {
        (0..self.order()).map(move |g| (g, x))
    }
}

/// A validated length function: zero exactly on units, symmetric under
/// inversion, subadditive along composition. Properness is automatic on a
/// finite groupoid and is not checked.
#[derive(Debug, Clone, PartialEq)]
pub struct LengthFunction {
    values: Vec<Vec<f64>>,
}

impl LengthFunction {
    /// Exhaustively checks the three length-function axioms over all
    /// composable pairs before accepting the table.
    pub fn validate(
        groupoid: &TransformationGroupoid,
        values: Vec<Vec<f64>>,
    ) -> Result<Self, LengthError> {
        let order = groupoid.order();
        let space = groupoid.space_size();
        if values.len() != order {
            return Err(LengthError::BadShape {
                expected: order,
                got: values.len(),
            });
        }
        for row in &values {
            if row.len() != space {
                return Err(LengthError::BadShape {
                    expected: space,
                    got: row.len(),
                });
            }
        }
        let identity = groupoid.group().identity();
        for g in 0..order {
            for x in 0..space {
                let v = values[g][x];
                if v < 0.0 || !v.is_finite() {
                    return Err(LengthError::Negative { g, x, value: v });
                }
                // axiom 1: ℓ = 0 iff the arrow is a unit
                if (g == identity) != (v == 0.0) {
                    return Err(LengthError::ZeroSetWrong { g, x, value: v });
                }
            }
        }
        for g in 0..order {
            for x in 0..space {
                // axiom 2: ℓ(γ⁻¹) = ℓ(γ), i.e. ℓ(g⁻¹, g·x) = ℓ(g, x)
                let (gi, gx) = groupoid.inverse((g, x));
                let v = values[g][x];
                let vi = values[gi][gx];
                if (v - vi).abs() > 0.0 {
                    return Err(LengthError::NotSymmetric {
                        g,
                        x,
                        value: v,
                        inverse_value: vi,
                    });
                }
            }
        }
        // axiom 3 over all composable pairs: γ = (g, h·x), η = (h, x)
        for g in 0..order {
            for h in 0..order {
                for x in 0..space {
                    let hx = groupoid.act(h, x);
                    let total = values[groupoid.group().mul(g, h)][x];
                    let left = values[g][hx];
                    let right = values[h][x];
                    if total > left + right + 1e-12 * (1.0 + left + right) {
                        return Err(LengthError::NotSubadditive {
                            g,
                            h,
                            x,
                            total,
                            left,
                            right,
                        });
                    }
                }
            }
        }
        Ok(Self { values })
    }

    /// Weighted word length on the Cayley graph, replicated over the space
    /// (the result does not depend on x). The generating set is closed under
    /// inverses automatically, carrying each generator's weight over to its
    /// inverse; listing both `s` and `s⁻¹` with different weights is an error.
    pub fn word_length(
        groupoid: &TransformationGroupoid,
        generators: &[usize],
        weights: &[f64],
    ) -> Result<Self, LengthError> {
        let group = groupoid.group();
        let order = group.order();
        assert_eq!(generators.len(), weights.len(), "one weight per generator");
        let mut gens: Vec<usize> = Vec::new();
        let mut ws: Vec<f64> = Vec::new();
        let push = |gens: &mut Vec<usize>, ws: &mut Vec<f64>, s: usize, w: f64| {
            match gens.iter().position(|&t| t == s) {
                Some(j) if (ws[j] - w).abs() > 0.0 => Err(LengthError::AsymmetricWeights {
                    g: s,
                    inverse: group.inv(s),
                    w,
                    w_inv: ws[j],
                }),
                Some(_) => Ok(()),
                None => {
                    gens.push(s);
                    ws.push(w);
                    Ok(())
                }
            }
        };
        for (i, &s) in generators.iter().enumerate() {
            let w = weights[i];
            if w <= 0.0 || !w.is_finite() {
                return Err(LengthError::BadWeight { g: s, w });
            }
            push(&mut gens, &mut ws, s, w)?;
            push(&mut gens, &mut ws, group.inv(s), w)?;
        }
        let generators = gens;
        let weights = ws;
        // Dijkstra from the identity; neighbours of u are s·u.
        let mut dist = vec![f64::INFINITY; order];
        dist[group.identity()] = 0.0;
        let mut heap: BinaryHeap<(ordered::Rev, usize)> = BinaryHeap::new();
        heap.push((ordered::Rev(0.0), group.identity()));
        while let Some((ordered::Rev(d), u)) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for (i, &s) in generators.iter().enumerate() {
                let v = group.mul(s, u);
                let nd = d + weights[i];
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push((ordered::Rev(nd), v));
                }
            }
        }
        if let Some(g) = dist.iter().position(|d| !d.is_finite()) {
            return Err(LengthError::NotGenerating { g });
        }
        let values = dist
            .iter()
            .map(|&d| vec![d; groupoid.space_size()])
            .collect();
        Self::validate(groupoid, values)
    }

    pub fn value(&self, g: usize, x: usize) -> f64 {
        self.values[g][x]
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn max_value(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .cloned()
            .fold(0.0, f64::max)
    }

    /// Smallest length over non-unit arrows.
    pub fn min_positive(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .cloned()
            .filter(|&v| v > 0.0)
            .fold(f64::INFINITY, f64::min)
    }
}

/// The projection Γ_n of the sub-level set F_n = {ℓ ≤ n} to the group,
/// always containing the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub n: f64,
    pub group_subset: Vec<usize>,
}

impl Ball {
    pub fn contains(&self, g: usize) -> bool {
        self.group_subset.contains(&g)
    }
}

/// Γ_n = {g : ∃x, ℓ(g, x) ≤ n} ∪ {e}, sorted by element index.
pub fn ball(groupoid: &TransformationGroupoid, length: &LengthFunction, n: f64) -> Ball {
    let mut subset: Vec<usize> = (0..groupoid.order())
        .filter(|&g| {
            g == groupoid.group().identity()
                || (0..groupoid.space_size()).any(|x| length.value(g, x) <= n)
        })
        .collect();
    subset.sort_unstable();
    Ball {
        n,
        group_subset: subset,
    }
}

/// f64 min-heap keys for Dijkstra.
mod ordered {
    #[derive(PartialEq)]
    pub struct Rev(pub f64);

    impl Eq for Rev {}

    impl PartialOrd for Rev {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }

    impl Ord for Rev {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            // reversed so the BinaryHeap pops the smallest distance first
            other.0.partial_cmp(&self.0).expect("distances are finite")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn z2_point() -> TransformationGroupoid {
        TransformationGroupoid::new(FiniteGroup::cyclic(2), 1, GroupAction::trivial(2, 1))
            .unwrap()
    }

    pub fn z2_swap() -> TransformationGroupoid {
        let action = GroupAction::new(vec![vec![0, 1], vec![1, 0]]);
        TransformationGroupoid::new(FiniteGroup::cyclic(2), 2, action).unwrap()
    }

    #[test]
    fn z2_on_point_has_two_arrows_and_one_unit() {
        let g = z2_point();
        assert_eq!(g.arrows().count(), 2);
        assert_eq!((0..g.space_size()).map(|x| g.unit(x)).count(), 1);
    }

    #[test]
    fn swap_action_composition_matches_multiplication() {
        let g = z2_swap();
        // (a, a·0)(a, 0) = (e, 0)
        let left = (1, g.act(1, 0));
        let right = (1, 0);
        assert_eq!(g.compose(left, right), Some((0, 0)));
        // non-composable pair
        assert_eq!(g.compose((1, 0), (1, 0)), None);
    }

    #[test]
    fn identity_axiom_violation_is_reported() {
        let action = GroupAction::new(vec![vec![1, 0], vec![1, 0]]);
        let err = TransformationGroupoid::new(FiniteGroup::cyclic(2), 2, action).unwrap_err();
        assert!(matches!(err, GroupoidError::NotAnAction { .. }));
    }

    #[test]
    fn bad_cayley_tables_are_rejected() {
        // break associativity-free structure: wrong identity row
        let err = FiniteGroup::new(vec![vec![1, 0], vec![0, 1]], 0, vec![0, 1]).unwrap_err();
        assert!(matches!(err, GroupoidError::BadIdentity { .. }));
    }

    #[test]
    fn inverse_is_involutive() {
        let g = z2_swap();
        for arrow in g.arrows().collect::<Vec<_>>() {
            assert_eq!(g.inverse(g.inverse(arrow)), arrow);
        }
        // (a, 0) ↦ (a, 1) under the swap
        assert_eq!(g.inverse((1, 0)), (1, 1));
        // units are self-inverse
        assert_eq!(g.inverse((0, 1)), (0, 1));
    }

    #[test]
    fn z4_inverse_on_point() {
        let g = TransformationGroupoid::new(
            FiniteGroup::cyclic(4),
            1,
            GroupAction::trivial(4, 1),
        )
        .unwrap();
        assert_eq!(g.inverse((1, 0)), (3, 0));
    }

    #[test]
    fn range_source_of_compositions() {
        let g = z2_swap();
        for left in g.arrows().collect::<Vec<_>>() {
            for right in g.arrows().collect::<Vec<_>>() {
                if let Some(prod) = g.compose(left, right) {
                    assert_eq!(g.range(prod), g.range(left));
                    assert_eq!(g.source(prod), g.source(right));
                }
            }
        }
    }

    #[test]
    fn word_length_single_generator() {
        let g = z2_point();
        let l = LengthFunction::word_length(&g, &[1], &[1.0]).unwrap();
        assert_eq!(l.value(0, 0), 0.0);
        assert_eq!(l.value(1, 0), 1.0);
    }

    #[test]
    fn word_length_z4_two_generators() {
        let g = TransformationGroupoid::new(
            FiniteGroup::cyclic(4),
            1,
            GroupAction::trivial(4, 1),
        )
        .unwrap();
        let l = LengthFunction::word_length(&g, &[1, 3], &[1.0, 1.0]).unwrap();
        assert_eq!(l.value(2, 0), 2.0);
        assert_eq!(l.value(3, 0), 1.0);
    }

    #[test]
    fn non_generating_set_is_rejected() {
        let g = TransformationGroupoid::new(
            FiniteGroup::cyclic(4),
            1,
            GroupAction::trivial(4, 1),
        )
        .unwrap();
        // {a} generates after automatic inverse closure
        assert!(LengthFunction::word_length(&g, &[1], &[1.0]).is_ok());
        // {a²} is symmetric but does not generate
        assert!(matches!(
            LengthFunction::word_length(&g, &[2], &[1.0]),
            Err(LengthError::NotGenerating { .. })
        ));
    }

    #[test]
    fn zero_length_off_units_is_rejected() {
        let g = z2_point();
        let err = LengthFunction::validate(&g, vec![vec![0.0], vec![0.0]]).unwrap_err();
        assert!(matches!(err, LengthError::ZeroSetWrong { g: 1, .. }));
    }

    #[test]
    fn asymmetric_table_under_swap_is_rejected() {
        let g = z2_swap();
        // (a, 0)⁻¹ = (a, 1), so ℓ(a, 0) must equal ℓ(a, 1)
        let err =
            LengthFunction::validate(&g, vec![vec![0.0, 0.0], vec![1.0, 2.0]]).unwrap_err();
        assert!(matches!(err, LengthError::NotSymmetric { .. }));
    }

    #[test]
    fn balls_grow_with_radius() {
        let g = TransformationGroupoid::new(
            FiniteGroup::cyclic(4),
            1,
            GroupAction::trivial(4, 1),
        )
        .unwrap();
        let l = LengthFunction::word_length(&g, &[1, 3], &[1.0, 1.0]).unwrap();
        assert_eq!(ball(&g, &l, 0.0).group_subset, vec![0]);
        assert_eq!(ball(&g, &l, 1.0).group_subset, vec![0, 1, 3]);
        assert_eq!(ball(&g, &l, 2.0).group_subset, vec![0, 1, 2, 3]);
    }

    #[test]
    fn z2_ball_radius_one_is_whole_group() {
        let g = z2_point();
        let l = LengthFunction::word_length(&g, &[1], &[1.0]).unwrap();
        assert_eq!(ball(&g, &l, 1.0).group_subset, vec![0, 1]);
    }

    #[test]
    fn s3_from_permutations() {
        let perms = s3_perms();
        let (group, action) = FiniteGroup::from_permutations(&perms, 3).unwrap();
        assert_eq!(group.order(), 6);
        let g = TransformationGroupoid::new(group, 3, action).unwrap();
        assert_eq!(g.arrows().count(), 18);
    }

    pub fn s3_perms() -> Vec<Vec<usize>> {
        vec![
            vec![0, 1, 2],
            vec![1, 2, 0],
            vec![2, 0, 1],
            vec![1, 0, 2],
            vec![0, 2, 1],
            vec![2, 1, 0],
        ]
    }
}
