//! Scale values of tree isometries with respect to the full automorphism
//! group of the covering tree.
//!
//! For a hyperbolic isometry `h` with attracting end `ε` the scale is the
//! product `q_1 ⋯ q_m` over one period of its axis, where `q_i + 1` is the
//! degree of the `i`-th axis vertex inside the subtree spanned by all axes
//! through `ε`. Such an axis shares a ray with the axis of `h`, so walking away
//! from `ε` its darts must repeat the backward color pattern of `h`. A branch
//! at an axis vertex belongs to the subtree exactly when it carries an
//! infinite non-backtracking walk following that pattern.
//!
//! Everything here is exact; scales are [`BigUint`]s with their factorization
//! carried along.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::arith::factorize;
use crate::colors::DartColoring;
use crate::multigraph::{rev, Dart, Multigraph};
use crate::{Error, Result};

/// A closed non-backtracking walk `d_1 … d_m` in the quotient graph: one
/// period of an axis, traversed towards the attracting end.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AxisWalk {
    darts: Vec<Dart>,
}

impl AxisWalk {
    pub fn new(g: &Multigraph, darts: Vec<Dart>) -> Result<Self> {
        let walk = AxisWalk { darts };
        walk.validate(g)?;
        Ok(walk)
    }

    /// Checks closure and cyclic non-backtracking in `g`.
    pub fn validate(&self, g: &Multigraph) -> Result<()> {
        let m = self.darts.len();
        if m == 0 {
            return Err(Error::InvalidAxis("empty walk".into()));
        }
        if let Some(&d) = self.darts.iter().find(|&&d| d >= g.dart_count()) {
            return Err(Error::DartOutOfRange {
                dart: d,
                dart_count: g.dart_count(),
            });
        }
        for i in 0..m {
            let (d, next) = (self.darts[i], self.darts[(i + 1) % m]);
            if g.head(d) != g.tail(next) {
                return Err(Error::InvalidAxis(format!(
                    "dart {next} does not start where dart {d} ends"
                )));
            }
            if next == rev(d) {
                return Err(Error::InvalidAxis(format!("backtracks at dart {d}")));
            }
        }
        Ok(())
    }

    pub fn darts(&self) -> &[Dart] {
        &self.darts
    }

    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    /// Axis vertices `v_1 … v_m`, `v_i` being the tail of `d_i`.
    pub fn vertices(&self, g: &Multigraph) -> Vec<usize> {
        self.darts.iter().map(|&d| g.tail(d)).collect()
    }

    /// The same axis traversed the other way (the inverse isometry).
    pub fn reversed(&self) -> AxisWalk {
        AxisWalk {
            darts: self.darts.iter().rev().map(|&d| rev(d)).collect(),
        }
    }

    /// `k` consecutive periods: the axis of the `k`-th power.
    pub fn power(&self, k: usize) -> AxisWalk {
        AxisWalk {
            darts: self.darts.repeat(k),
        }
    }

    /// Rotation starting at the smallest dart sequence; equal for walks that
    /// differ only by their starting point.
    pub fn rotation_key(&self) -> Vec<Dart> {
        min_rotation(&self.darts)
    }

    /// Labels of the walk as a closed curve, forgetting the starting point
    /// and the direction: the smallest rotation of the labels of the walk or
    /// of its reversal.
    pub fn undirected_key<L: Ord + Clone>(&self, label: impl Fn(Dart) -> L) -> Vec<L> {
        let forward: Vec<L> = self.darts.iter().map(|&d| label(d)).collect();
        let backward: Vec<L> = self.reversed().darts.iter().map(|&d| label(d)).collect();
        min_rotation(&forward).min(min_rotation(&backward))
    }
}

fn min_rotation<T: Ord + Clone>(xs: &[T]) -> Vec<T> {
    (0..xs.len().max(1))
        .map(|r| xs[r..].iter().chain(&xs[..r]).cloned().collect::<Vec<T>>())
        .min()
        .unwrap_or_default()
}

/// `q_1 … q_m` along one period of an axis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct RamificationProfile(pub Vec<u64>);

impl RamificationProfile {
    pub fn values(&self) -> &[u64] {
        &self.0
    }
}

/// An exact positive integer together with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScaleValue {
    value: BigUint,
    factors: BTreeMap<u64, u32>,
}

impl ScaleValue {
    pub fn one() -> Self {
        ScaleValue {
            value: BigUint::one(),
            factors: BTreeMap::new(),
        }
    }

    pub fn from_u64(n: u64) -> Self {
        assert!(n > 0, "scale values are positive");
        ScaleValue {
            value: BigUint::from(n),
            factors: factorize(n),
        }
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn factors(&self) -> &BTreeMap<u64, u32> {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.keys().copied()
    }

    pub fn pow(&self, k: u32) -> Self {
        ScaleValue {
            value: self.value.pow(k),
            factors: self.factors.iter().map(|(&p, &e)| (p, e * k)).collect(),
        }
    }

    /// Multiplies the factorization back out.
    pub fn expand_factors(&self) -> BigUint {
        self.factors
            .iter()
            .map(|(&p, &e)| BigUint::from(p).pow(e))
            .product()
    }
}

impl std::ops::Mul<&ScaleValue> for &ScaleValue {
    type Output = ScaleValue;

    fn mul(self, rhs: &ScaleValue) -> ScaleValue {
        let mut factors = self.factors.clone();
        for (&p, &e) in &rhs.factors {
            *factors.entry(p).or_insert(0) += e;
        }
        ScaleValue {
            value: &self.value * &rhs.value,
            factors,
        }
    }
}

impl PartialOrd for ScaleValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ScaleValue {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.value.cmp(&other.value)
    }
}

impl fmt::Display for ScaleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Serialize for ScaleValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ScaleValue", 2)?;
        st.serialize_field("value", &self.value.to_string())?;
        st.serialize_field("factors", &self.factors)?;
        st.end()
    }
}

/// Serializes a big integer as a decimal string.
pub fn serialize_decimal<S: Serializer>(n: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

pub fn serialize_decimal_vec<S: Serializer>(
    ns: &[BigUint],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(ns.iter().map(|n| n.to_string()))
}

/// A tree isometry in the sense needed for scales.
#[derive(Debug, Clone, Copy)]
pub enum Isometry<'a> {
    /// Fixes a vertex; its scale is 1.
    Elliptic,
    Hyperbolic(&'a AxisWalk),
}

/// Color-constrained non-backtracking automaton of an axis.
///
/// State `(x, j)` means "dart `x` is taken at backward phase `j`"; it exists
/// when `x` has the color of the axis's own backward dart at that phase.
struct PatternAutomaton<'g> {
    g: &'g Multigraph,
    period: usize,
    pattern: Vec<usize>,
    colors: &'g DartColoring,
}

impl<'g> PatternAutomaton<'g> {
    fn new(g: &'g Multigraph, colors: &'g DartColoring, axis: &AxisWalk) -> Self {
        let m = axis.len();
        let darts = axis.darts();
        // phase j steps backwards j + 1 darts from v_1
        let pattern = (0..m)
            .map(|j| colors.color(rev(darts[(2 * m - j - 1) % m])))
            .collect();
        PatternAutomaton {
            g,
            period: m,
            pattern,
            colors,
        }
    }

    fn index(&self, x: Dart, phase: usize) -> usize {
        x * self.period + phase
    }

    fn state_count(&self) -> usize {
        self.g.dart_count() * self.period
    }

    fn is_state(&self, x: Dart, phase: usize) -> bool {
        self.colors.color(x) == self.pattern[phase]
    }

    /// Backward phase at axis vertex `v_{i+1}` (0-based `i`).
    fn phase_at(&self, i: usize) -> usize {
        (self.period - i) % self.period
    }

    fn successors(&self, x: Dart, phase: usize) -> impl Iterator<Item = (Dart, usize)> + '_ {
        let next = (phase + 1) % self.period;
        self.g
            .continuations(x)
            .filter(move |&y| self.is_state(y, next))
            .map(move |y| (y, next))
    }

    /// States from which an infinite path exists, by pruning states of
    /// out-degree zero until none remain.
    fn live_states(&self) -> Vec<bool> {
        let n = self.state_count();
        let mut live = vec![false; n];
        let mut out_degree = vec![0usize; n];
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for x in self.g.darts() {
            for phase in 0..self.period {
                if !self.is_state(x, phase) {
                    continue;
                }
                let s = self.index(x, phase);
                live[s] = true;
                for (y, q) in self.successors(x, phase) {
                    out_degree[s] += 1;
                    preds[self.index(y, q)].push(s);
                }
            }
        }
        let mut queue: VecDeque<usize> =
            (0..n).filter(|&s| live[s] && out_degree[s] == 0).collect();
        while let Some(s) = queue.pop_front() {
            live[s] = false;
            for &p in &preds[s] {
                out_degree[p] -= 1;
                if out_degree[p] == 0 && live[p] {
                    queue.push_back(p);
                }
            }
        }
        live
    }
}

fn check_inputs(g: &Multigraph, colors: &DartColoring, axis: &AxisWalk) -> Result<()> {
    axis.validate(g)?;
    if !colors.is_stable_for(g) {
        return Err(Error::UnstableColoring);
    }
    Ok(())
}

/// Ramification of the axis vertices inside the subtree spanned by all axes
/// sharing the attracting end.
///
/// At `v_i`, `q_i` counts the axis's own backward dart plus every other dart
/// (not the forward axis dart) that starts an infinite walk following the
/// backward color pattern from phase `i`.
pub fn ramification_profile(
    g: &Multigraph,
    colors: &DartColoring,
    axis: &AxisWalk,
) -> Result<RamificationProfile> {
    check_inputs(g, colors, axis)?;
    let automaton = PatternAutomaton::new(g, colors, axis);
    let live = automaton.live_states();
    let darts = axis.darts();
    let m = darts.len();
    let q = (0..m)
        .map(|i| {
            let forward = darts[i];
            let backward = rev(darts[(i + m - 1) % m]);
            let phase = automaton.phase_at(i);
            let others = g
                .darts_at(g.tail(forward))
                .iter()
                .filter(|&&d| d != forward && d != backward)
                .filter(|&&d| live[automaton.index(d, phase)])
                .count();
            1 + others as u64
        })
        .collect();
    Ok(RamificationProfile(q))
}

/// `∏ q_i`. An empty profile gives 1.
pub fn scale_hyperbolic(profile: &RamificationProfile) -> ScaleValue {
    profile
        .values()
        .iter()
        .map(|&q| ScaleValue::from_u64(q))
        .fold(ScaleValue::one(), |acc, s| &acc * &s)
}

pub fn scale_element(
    g: &Multigraph,
    colors: &DartColoring,
    element: Isometry<'_>,
) -> Result<ScaleValue> {
    match element {
        Isometry::Elliptic => Ok(ScaleValue::one()),
        Isometry::Hyperbolic(axis) => Ok(scale_hyperbolic(&ramification_profile(g, colors, axis)?)),
    }
}

/// Most periods accepted by [`oracle_scale`].
pub const DEFAULT_ORACLE_PERIOD_BUDGET: usize = 256;

/// Growth of pattern-following walks away from the attracting end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleScale {
    /// `indices[k - 1]`: number of walks of `k` periods.
    pub indices: Vec<BigUint>,
    /// `ratios[k - 2] = indices[k - 1] / indices[k - 2]` for `k >= 2`.
    pub ratios: Vec<BigRational>,
    /// The last three ratios exist and are equal.
    pub stabilized: bool,
}

impl OracleScale {
    pub fn ratio(&self) -> Option<&BigRational> {
        self.ratios.last()
    }

    /// Stabilized and equal to `scale`.
    pub fn agrees_with(&self, scale: &ScaleValue) -> bool {
        self.stabilized
            && self.ratio().is_some_and(|r| {
                *r == BigRational::from_integer(BigInt::from(scale.value().clone()))
            })
    }
}

impl Serialize for OracleScale {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("OracleScale", 3)?;
        let indices: Vec<String> = self.indices.iter().map(ToString::to_string).collect();
        let ratios: Vec<String> = self.ratios.iter().map(ToString::to_string).collect();
        st.serialize_field("indices", &indices)?;
        st.serialize_field("ratios", &ratios)?;
        st.serialize_field("stabilized", &self.stabilized)?;
        st.end()
    }
}

/// Independent check of the product formula by transfer-matrix path counting.
///
/// `indices[k - 1]` is the number of non-backtracking walks of `k·m` darts
/// that start at `v_1`, avoid the forward axis dart, and follow the backward
/// color pattern of the axis. Their growth per period is the scale.
pub fn oracle_scale(
    g: &Multigraph,
    colors: &DartColoring,
    element: Isometry<'_>,
    periods: usize,
) -> Result<OracleScale> {
    oracle_scale_with_budget(g, colors, element, periods, DEFAULT_ORACLE_PERIOD_BUDGET)
}

pub fn oracle_scale_with_budget(
    g: &Multigraph,
    colors: &DartColoring,
    element: Isometry<'_>,
    periods: usize,
    budget: usize,
) -> Result<OracleScale> {
    if periods < 2 {
        return Err(Error::InvalidArgument(format!(
            "oracle needs at least 2 periods, got {periods}"
        )));
    }
    if periods > budget {
        return Err(Error::BudgetExceeded {
            requested: periods,
            budget,
        });
    }
    let indices = match element {
        Isometry::Elliptic => vec![BigUint::one(); periods],
        Isometry::Hyperbolic(axis) => {
            check_inputs(g, colors, axis)?;
            walk_counts(g, colors, axis, periods)
        }
    };
    let ratios: Vec<BigRational> = indices
        .windows(2)
        .map(|w| {
            if w[0].is_zero() {
                BigRational::zero()
            } else {
                BigRational::new(BigInt::from(w[1].clone()), BigInt::from(w[0].clone()))
            }
        })
        .collect();
    let stabilized = ratios.len() >= 3 && {
        let tail = &ratios[ratios.len() - 3..];
        tail[0] == tail[1] && tail[1] == tail[2] && !tail[2].is_zero()
    };
    Ok(OracleScale {
        indices,
        ratios,
        stabilized,
    })
}

fn walk_counts(
    g: &Multigraph,
    colors: &DartColoring,
    axis: &AxisWalk,
    periods: usize,
) -> Vec<BigUint> {
    let automaton = PatternAutomaton::new(g, colors, axis);
    let m = axis.len();
    let forward = axis.darts()[0];
    let mut counts: Vec<BigUint> = vec![BigUint::zero(); automaton.state_count()];
    for &x in g.darts_at(g.tail(forward)) {
        if x != forward && automaton.is_state(x, 0) {
            counts[automaton.index(x, 0)] = BigUint::one();
        }
    }
    let mut indices = Vec::with_capacity(periods);
    for step in 1..=periods * m {
        if step % m == 0 {
            indices.push(counts.iter().sum());
        }
        if step == periods * m {
            break;
        }
        let mut next = vec![BigUint::zero(); counts.len()];
        for x in g.darts() {
            for phase in 0..m {
                let c = &counts[automaton.index(x, phase)];
                if c.is_zero() {
                    continue;
                }
                for (y, q) in automaton.successors(x, phase) {
                    next[automaton.index(y, q)] += c;
                }
            }
        }
        counts = next;
    }
    indices
}
