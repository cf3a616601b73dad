//! Non-backtracking color refinement on darts.
//!
//! Lifting a dart `d` of the quotient graph to the covering tree, the branch
//! hanging from it is the subtree reached by crossing `d`. Two darts with the
//! same stable color have isomorphic branches; the refinement never builds the
//! tree. Round 0 colors a dart by the degree of its head; each further round
//! appends the multiset of colors of its non-backtracking continuations.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::multigraph::{Dart, Multigraph};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DartColoring {
    colors: Vec<usize>,
    rounds: usize,
    /// For each color, how many continuations of each color a dart of that
    /// color has.
    profiles: Vec<BTreeMap<usize, usize>>,
}

impl DartColoring {
    pub fn color(&self, d: Dart) -> usize {
        self.colors[d]
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn class_count(&self) -> usize {
        self.profiles.len()
    }

    /// Refinement rounds that split at least one class.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn profile(&self, color: usize) -> &BTreeMap<usize, usize> {
        &self.profiles[color]
    }

    pub fn profiles(&self) -> &[BTreeMap<usize, usize>] {
        &self.profiles
    }

    /// True when this coloring belongs to `g` and one more round would not
    /// split any class.
    pub fn is_stable_for(&self, g: &Multigraph) -> bool {
        if self.colors.len() != g.dart_count() {
            return false;
        }
        let mut seen: Vec<Option<BTreeMap<usize, usize>>> = vec![None; self.class_count()];
        for d in g.darts() {
            let Some(slot) = seen.get_mut(self.colors[d]) else {
                return false;
            };
            let multiset = continuation_multiset(g, &self.colors, d);
            match slot {
                Some(existing) if *existing != multiset => return false,
                Some(_) => {}
                None => *slot = Some(multiset),
            }
        }
        true
    }
}

fn continuation_multiset(g: &Multigraph, colors: &[usize], d: Dart) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for c in g.continuations(d) {
        *m.entry(colors[c]).or_insert(0) += 1;
    }
    m
}

/// Stable dart coloring of a connected graph with minimum degree 3.
///
/// Color ids are dense ranks of the refinement signatures, so they depend
/// only on the graph's structure, not on the numbering of its darts.
pub fn refine_dart_colors(g: &Multigraph) -> Result<DartColoring> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.min_degree() < 3 {
        return Err(Error::InvalidArgument(format!(
            "dart refinement needs minimum degree 3, found {}",
            g.min_degree()
        )));
    }
    let initial: Vec<usize> = g.darts().map(|d| g.degree(g.head(d))).collect();
    let mut colors = rank(&initial);
    let mut classes = class_count(&colors);
    let mut rounds = 0;
    // a split can happen at most once per dart
    for _ in 0..g.dart_count() {
        let signatures: Vec<(usize, Vec<usize>)> = g
            .darts()
            .map(|d| {
                let mut next: Vec<usize> = g.continuations(d).map(|c| colors[c]).collect();
                next.sort_unstable();
                (colors[d], next)
            })
            .collect();
        let refined = rank(&signatures);
        let refined_classes = class_count(&refined);
        colors = refined;
        if refined_classes == classes {
            break;
        }
        classes = refined_classes;
        rounds += 1;
    }
    let mut profiles = vec![BTreeMap::new(); classes];
    for d in g.darts() {
        if profiles[colors[d]].is_empty() {
            profiles[colors[d]] = continuation_multiset(g, &colors, d);
        }
    }
    Ok(DartColoring {
        colors,
        rounds,
        profiles,
    })
}

fn rank<T: Ord + Clone>(values: &[T]) -> Vec<usize> {
    let mut distinct: Vec<&T> = values.iter().collect();
    distinct.sort();
    distinct.dedup();
    values
        .iter()
        .map(|v| distinct.binary_search(&v).expect("value present"))
        .collect()
}

fn class_count(colors: &[usize]) -> usize {
    colors.iter().max().map_or(0, |&c| c + 1)
}

/// Largest depth accepted by [`branch_iso_check`].
pub const DEFAULT_UNFOLD_DEPTH_BUDGET: usize = 4096;

/// Whether the depth-`depth` truncations of the branches hanging from `d1`
/// and `d2` are isomorphic as rooted trees.
pub fn branch_iso_check(g: &Multigraph, d1: Dart, d2: Dart, depth: usize) -> Result<bool> {
    branch_iso_check_with_budget(g, d1, d2, depth, DEFAULT_UNFOLD_DEPTH_BUDGET)
}

pub fn branch_iso_check_with_budget(
    g: &Multigraph,
    d1: Dart,
    d2: Dart,
    depth: usize,
    budget: usize,
) -> Result<bool> {
    for d in [d1, d2] {
        if d >= g.dart_count() {
            return Err(Error::DartOutOfRange {
                dart: d,
                dart_count: g.dart_count(),
            });
        }
    }
    if depth > budget {
        return Err(Error::BudgetExceeded {
            requested: depth,
            budget,
        });
    }
    let unfolding = Unfolding::new(g, depth);
    Ok(unfolding.shape(d1) == unfolding.shape(d2))
}

/// Truncated unfolding of all branches to a fixed depth, stored with shared
/// subtrees: node `k` of the arena is a rooted tree given by the sorted ids of
/// its children, and equal ids mean isomorphic rooted trees.
pub struct Unfolding {
    arena: HashMap<Vec<u32>, u32>,
    roots: Vec<u32>,
}

impl Unfolding {
    pub fn new(g: &Multigraph, depth: usize) -> Self {
        let mut arena: HashMap<Vec<u32>, u32> = HashMap::new();
        let leaf = intern(&mut arena, Vec::new());
        let mut level = vec![leaf; g.dart_count()];
        for _ in 0..depth {
            level = g
                .darts()
                .map(|d| {
                    let mut children: Vec<u32> = g.continuations(d).map(|c| level[c]).collect();
                    children.sort_unstable();
                    intern(&mut arena, children)
                })
                .collect();
        }
        Unfolding {
            arena,
            roots: level,
        }
    }

    /// Isomorphism-class id of the truncated branch hanging from `d`.
    pub fn shape(&self, d: Dart) -> u32 {
        self.roots[d]
    }

    /// Distinct rooted trees created while unfolding.
    pub fn node_count(&self) -> usize {
        self.arena.len()
    }
}

fn intern(arena: &mut HashMap<Vec<u32>, u32>, children: Vec<u32>) -> u32 {
    let next = arena.len() as u32;
    *arena.entry(children).or_insert(next)
}
